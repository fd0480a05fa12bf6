#pragma once

#include <vector>

namespace modres {

// J_0(x) .. J_nmax(x) for x >= 0 by normalized downward recurrence.
std::vector<double> bessel_j_sequence(double x, int nmax);

// smallest order k > x past which |J_k(x)| * k^weight stays below tol
int bessel_tail_order(double x, double tol, int weight = 0);

}  // namespace modres
