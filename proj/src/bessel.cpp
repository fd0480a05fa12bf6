#include "modres/bessel.hpp"

#include "modres/error.hpp"

#include <algorithm>
#include <cmath>

namespace modres {

std::vector<double> bessel_j_sequence(double x, int nmax) {
    if (nmax < 0) fail(ErrorKind::parameter, "bessel order must be >= 0");
    if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorKind::parameter, "bessel argument must be finite and >= 0");

    std::vector<double> j(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }

    const int top = std::max(nmax, static_cast<int>(x));
    int start = top + 20 + static_cast<int>(std::sqrt(40.0 * (top + 1)));
    start += start % 2;

    std::vector<double> w(static_cast<std::size_t>(start) + 2, 0.0);
    w[start + 1] = 0.0;
    w[start] = 1e-300;
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        w[k - 1] = 2.0 * k / x * w[k] - w[k + 1];
        if (std::abs(w[k - 1]) > 1e250) {
            for (int i = k - 1; i <= start; ++i) w[i] *= 1e-250;
            norm *= 1e-250;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * w[k - 1];
    }
    norm += w[0];
    for (int k = 0; k <= nmax; ++k) j[k] = w[k] / norm;
    return j;
}

int bessel_tail_order(double x, double tol, int weight) {
    int k = static_cast<int>(std::ceil(x)) + 2;
    for (;; k += 8) {
        const auto j = bessel_j_sequence(x, k);
        const double v = std::abs(j[k]) * std::pow(static_cast<double>(k), weight);
        if (v < tol) return k;
        if (k > 2000) fail(ErrorKind::capacity, "bessel series does not converge");
    }
}

}  // namespace modres
