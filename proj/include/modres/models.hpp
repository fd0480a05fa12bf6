#pragma once

#include "modres/coeffs.hpp"
#include "modres/liealg.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <map>
#include <string>

namespace modres::models {

using Eigen::Index;
using liealg::AlgebraKind;
using liealg::ProductSpace;

// H(t) = h_static + cos(nu t) h_mod
struct ModelSpec {
    ProductSpace space;
    Eigen::MatrixXcd h_static;
    Eigen::MatrixXcd h_mod;
    double nu = 0;
    std::map<std::string, double> params;
    std::string label;

    Index dim() const { return space.dim; }
    Eigen::MatrixXcd hamiltonian(double t) const;
    double period() const;
};

ModelSpec build_single_modulated(const AlgebraKind& kind, double omega, double nu, double g0, double g1);

// p^2/2 + omega^2 (1 + 2 gamma cos nu t) x^2/2 on a truncated Fock space
ModelSpec build_parametric_oscillator(double omega, double nu, double gamma, int truncation);

using DiagonalFunction = std::function<double(double)>;

ModelSpec build_nonlinear(const AlgebraKind& kind, double omega, double gamma, double nu, double g,
                          const DiagonalFunction& f);

Eigen::MatrixXcd kerr_operator(const AlgebraKind& kind, const DiagonalFunction& f);

ModelSpec build_amplifier(double omega_a, double omega_b, double nu, double gamma, double g, int na, int nb);

// cavity-mediated two-atom model; the modulation amplitude is 2 g0 so that the
// drive reads g0 (E + E^dagger) in the Floquet picture
ModelSpec build_two_atom(double omega_1, double omega_2, double omega_c, double nu, double g0, double g1,
                         double g2, int nc);

ModelSpec build_dicke_modulated(double spin, double omega_0, double omega_1, double nu, double gamma, double g,
                                int n);

struct EffectiveModel {
    int resonance_order = 0;
    int sign = 1;
    double g_eff = 0;
    std::map<std::string, double> shifted_frequencies;
    std::string validity;

    // <X0>(t) given <X0>(0) and <(i/2)(X- - X+)>(0), at exact resonance
    double predict_x0(double t, double x0_initial, double quadrature_initial) const;
};

EffectiveModel effective_single(const coeffs::CoefficientTable& table, int k);

double effective_amplifier_prediction(double g_eff, double t);

struct TwoAtomPrediction {
    double ground;   // cos^2(g_eff t): both atoms unexcited
    double excited;  // sin^2(g_eff t): joint excitation
};

TwoAtomPrediction effective_two_atom_prediction(double g_eff, double t);

// Rows per order: 4, 2, 6, 7 (1-based). The factor X is space factor 0, Y is factor 1.
int higher_order_rows(int m);

struct HigherOrderTerm {
    Eigen::MatrixXcd matrix;
    int drive_power = 0;  // +k for E^k, -k for E^dagger k
};

HigherOrderTerm build_higher_order_term(const ProductSpace& space, int m, int row, int k, double coefficient);

struct IntensityShiftCoefficients {
    double c1 = 0, c3a = 0, c3b = 0, c3c = 0;
};

Eigen::MatrixXcd intensity_shift_K(const ProductSpace& space, const IntensityShiftCoefficients& c);

}  // namespace modres::models
