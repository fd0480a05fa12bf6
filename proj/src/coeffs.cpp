#include "modres/coeffs.hpp"

#include "modres/bessel.hpp"
#include "modres/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace modres::coeffs {

const char* to_string(IndexDefinition d) {
    switch (d) {
        case IndexDefinition::coupling_over_frequency: return "g/omega";
        case IndexDefinition::twice_g0_over_nu: return "2*g0/nu";
        case IndexDefinition::depth_over_nu: return "omega0*gamma/nu";
        case IndexDefinition::g0_over_nu: return "g0/nu";
    }
    return "?";
}

namespace {

void check_sign(int sign) {
    if (sign != 1 && sign != -1) fail(ErrorKind::parameter, "sign must be +1 (su2) or -1 (su11)");
}

void check_weak_inputs(int sign, double omega, double nu, double g0, double g1, int kmax) {
    check_sign(sign);
    if (!(omega > 0.0)) fail(ErrorKind::parameter, "omega must be > 0");
    if (!(nu > 0.0)) fail(ErrorKind::parameter, "nu must be > 0");
    if (!(g0 >= 0.0)) fail(ErrorKind::parameter, "g0 must be >= 0");
    if (!(g1 >= 0.0)) fail(ErrorKind::parameter, "g1 must be >= 0");
    if (kmax < 0) fail(ErrorKind::parameter, "kmax must be >= 0");
    if (kmax > max_recursion_order)
        fail(ErrorKind::capacity, "kmax " + std::to_string(kmax) + " exceeds " + std::to_string(max_recursion_order));
}

std::string index_message(const char* what, int k) {
    std::ostringstream os;
    os << what << " at summation index " << k;
    return os.str();
}

// |detuning| below 1e-9 of the frequency scale counts as a resonance collision
bool near_zero(double detuning, double scale) { return std::abs(detuning) < 1e-9 * scale; }
bool exact_zero(double detuning, double scale) { return std::abs(detuning) <= 1e-12 * scale; }

int auto_order(double epsilon, double tol, int weight, int requested) {
    if (requested > 0) return requested;
    return bessel_tail_order(epsilon, tol, weight);
}

}  // namespace

std::vector<double> complete_bell(std::span<const double> a, int n) {
    if (n < 0) fail(ErrorKind::parameter, "complete_bell order must be >= 0");
    if (static_cast<int>(a.size()) < n) fail(ErrorKind::parameter, "complete_bell needs n arguments");

    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    b[0] = 1.0;
    for (int m = 0; m < n; ++m) {
        double binom = 1.0;  // C(m, k)
        double s = 0.0;
        for (int k = 0; k <= m; ++k) {
            s += binom * b[m - k] * a[k];
            binom = binom * (m - k) / (k + 1);
        }
        b[m + 1] = s;
    }
    return b;
}

CoefficientTable weak_recursion(int sign, double omega, double nu, double g0, double g1, int kmax) {
    check_weak_inputs(sign, omega, nu, g0, g1, kmax);

    CoefficientTable t;
    t.sign = sign;
    t.omega = omega;
    t.nu = nu;
    t.g0 = g0;
    t.g1 = g1;
    t.kmax = kmax;
    const std::size_t n = static_cast<std::size_t>(kmax) + 1;
    t.h.assign(n, 0.0);
    t.f.assign(n, 0.0);
    t.delta.assign(n, 0.0);
    t.a.assign(n, 0.0);

    // carried in extended precision: h_k is often a small difference of large products
    using ld = long double;
    std::vector<ld> h(n, 0.0L), f(n, 0.0L);
    auto den = [&](int j) { return static_cast<ld>(omega) + j * static_cast<ld>(nu); };

    if (kmax >= 1) {
        h[1] = g0;
        f[1] = g1;
    }
    for (int k = 2; k <= kmax; ++k) {
        h[k] = sign * 2.0L * g1 * f[k - 1] / den(k - 1);

        const int j = k / 2;
        ld s = 0.0L;
        for (int m = 1; m <= j; ++m) s += h[m] * f[k - m] / den(k - m);
        if (k % 2 == 0) {
            f[k] = -s;
        } else {
            // h_{j+1}^2 / (4 g1) written without the division
            const ld r = f[j] / den(j);
            f[k] = -sign * g1 * r * r - s;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        t.h[k] = static_cast<double>(h[k]);
        t.f[k] = static_cast<double>(f[k]);
    }

    double fact = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        fact *= k;
        t.delta[k] = t.h[k] / (k * nu);
        t.a[k] = -fact * t.delta[k];
    }

    const auto b = complete_bell(std::span<const double>(t.a).subspan(1), kmax);
    t.eps.assign(n, 0.0);
    fact = 1.0;
    t.eps[0] = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        fact *= k;
        t.eps[k] = b[k] / fact;
    }
    return t;
}

std::vector<double> maintext_h(int sign, double omega, double nu, double g0, double g1, int kmax) {
    check_weak_inputs(sign, omega, nu, g0, g1, kmax);

    using ld = long double;
    std::vector<ld> h(static_cast<std::size_t>(kmax) + 1, 0.0L);
    auto den = [&](int j) { return static_cast<ld>(omega) + j * static_cast<ld>(nu); };
    if (kmax >= 1) h[1] = g0;
    if (kmax >= 2) h[2] = sign * 2.0L * g1 * g1 / den(1);
    for (int k = 1; 2 * k + 1 <= kmax; ++k) {
        ld s = 0.0L;
        for (int m = 1; m <= k; ++m) s += h[m] * h[2 * k + 1 - m];
        h[2 * k + 1] = -s / den(2 * k);

        if (2 * k + 2 > kmax) break;
        s = 0.0L;
        for (int m = 1; m <= k; ++m) s += h[m] * h[2 * k + 2 - m];
        h[2 * k + 2] = -h[k + 1] * h[k + 1] / (2.0L * den(2 * k + 1)) - s / den(2 * k + 1);
    }
    return std::vector<double>(h.begin(), h.end());
}

double small_rotation_angle(double coupling, double detuning, int sign) {
    check_sign(sign);
    if (detuning == 0.0) fail(ErrorKind::resonance, "small rotation with zero detuning");
    const double ratio = 2.0 * coupling / detuning;
    if (sign > 0) return std::atan(ratio) / 2.0;
    if (std::abs(ratio) >= 1.0) {
        std::ostringstream os;
        os << "su11 rotation undefined: |2 coupling / detuning| = " << std::abs(ratio) << " >= 1";
        fail(ErrorKind::strong_coupling, os.str());
    }
    return std::atanh(ratio) / 2.0;
}

double rabi_frequency_shift(double omega, double nu, double g, int order) {
    if (order < 1) fail(ErrorKind::parameter, "resonance order must be >= 1");
    double shift = 2.0 * g * g / (omega + nu);
    if (order != 1) {
        if (near_zero(omega - nu, omega)) fail(ErrorKind::resonance, "principal resonance inside a higher-order shift");
        shift += 2.0 * g * g / (omega - nu);
    }
    return shift;
}

double rabi_resonance_nu(double omega, double g, int order) {
    double nu = omega / order;
    for (int it = 0; it < 200; ++it) {
        const double next = (omega + rabi_frequency_shift(omega, nu, g, order)) / order;
        if (std::abs(next - nu) <= 1e-15 * nu) return next;
        nu = next;
    }
    return nu;
}

StrongModTable strong_mod_table(int sign, double omega, double nu, double g0, double g1, int mmax,
                                int series_order) {
    if (!(nu > 0.0)) fail(ErrorKind::parameter, "nu must be > 0");
    return strong_mod_table_from_index(sign, omega, nu, 2.0 * g0 / nu, g1, mmax, series_order);
}

StrongModTable strong_mod_table_from_index(int sign, double omega, double nu, double epsilon, double g1,
                                           int mmax, int series_order) {
    check_sign(sign);
    if (!(omega > 0.0) || !(nu > 0.0)) fail(ErrorKind::parameter, "omega and nu must be > 0");
    if (!(epsilon > 0.0 && epsilon <= 10.0)) fail(ErrorKind::parameter, "modulation index must lie in (0, 10]");
    if (mmax < 1) fail(ErrorKind::parameter, "mmax must be >= 1");

    StrongModTable t;
    t.sign = sign;
    t.epsilon = epsilon;
    const int order = std::max(auto_order(epsilon, 1e-16, 2, series_order), mmax);
    t.bessel = bessel_j_sequence(epsilon, order);
    const auto& J = t.bessel;

    t.couplings.assign(static_cast<std::size_t>(mmax) + 1, 0.0);
    for (int m = 1; m <= mmax; ++m)
        t.couplings[m] = (2.0 * g1 / epsilon) * ((m % 2 == 1) ? 1.0 : -1.0) * m * J[m];

    const double pre = 8.0 * g1 / (epsilon * epsilon);
    double global = 0.0;
    for (int k = 1; k <= order; ++k) global += (g1 / (omega + k * nu)) * k * k * J[k] * J[k];
    t.shift_global = sign * pre * global;

    t.shifts.assign(static_cast<std::size_t>(mmax) + 1, 0.0);
    for (int m = 1; m <= mmax; ++m) {
        double s = 0.0;
        for (int k = 1; k <= order; ++k) {
            if (k == m) continue;
            if (near_zero(omega - k * nu, std::max(omega, k * nu))) {
                t.warnings.push_back(index_message("resonance collision excluded from I_m", k) + " (m=" +
                                     std::to_string(m) + ")");
                continue;
            }
            s += k * k * J[k] * J[k] / (omega * omega - k * k * nu * nu);
        }
        const double own = m * m * J[m] * J[m] / (omega + m * nu);
        t.shifts[m] = sign * (16.0 * g1 * g1 * omega * s + 8.0 * g1 * g1 * own) / (epsilon * epsilon);
    }
    return t;
}

double nonlinear_I(double omega, double nu, double g, double epsilon, int series_order) {
    if (!(omega > 0.0) || !(nu > 0.0)) fail(ErrorKind::parameter, "omega and nu must be > 0");
    if (!(epsilon >= 0.0)) fail(ErrorKind::parameter, "modulation index must be >= 0");
    const int order = auto_order(epsilon, 1e-9, 0, series_order);
    const auto J = bessel_j_sequence(epsilon, order);
    double s = 0.0;
    for (int k = 0; k <= order; ++k) s += J[k] * J[k] / (omega + k * nu);
    return g * s;
}

double tilde_I(double omega, double nu, double g, double epsilon, int m, int series_order) {
    if (!(omega > 0.0) || !(nu > 0.0)) fail(ErrorKind::parameter, "omega and nu must be > 0");
    if (!(epsilon >= 0.0)) fail(ErrorKind::parameter, "modulation index must be >= 0");
    if (m < 1) fail(ErrorKind::parameter, "resonance index m must be >= 1");
    const int order = std::max(auto_order(epsilon, 1e-9, 0, series_order), m);
    const auto J = bessel_j_sequence(epsilon, order);
    double s = 0.0;
    for (int k = 1; k <= order; ++k) {
        if (k == m) continue;
        if (near_zero(omega - k * nu, std::max(omega, k * nu)))
            fail(ErrorKind::resonance, index_message("near-resonant denominator omega - k nu in tilde_I", k));
        s += J[k] * J[k] / (omega * omega - k * k * nu * nu);
    }
    return g * J[0] * J[0] / omega + 2.0 * g * omega * s + g * J[m] * J[m] / (omega + m * nu);
}

AmplifierConstants amplifier_constants(double omega_a, double omega_b, double nu, double g, double epsilon,
                                       int kmax, int series_order) {
    if (!(omega_a > 0.0) || !(omega_b > 0.0) || !(nu > 0.0))
        fail(ErrorKind::parameter, "amplifier frequencies must be > 0");
    if (!(epsilon >= 0.0)) fail(ErrorKind::parameter, "modulation index must be >= 0");
    if (kmax < 1) fail(ErrorKind::parameter, "kmax must be >= 1");

    AmplifierConstants c;
    const double scale = std::max(omega_a, omega_b);
    if (near_zero(omega_a - omega_b, scale)) fail(ErrorKind::degenerate_detuning, "omega_a equals omega_b");
    const double wsum = omega_a + omega_b;
    const double wdiff = omega_a - omega_b;
    const int order = auto_order(epsilon, 1e-16, 1, series_order) + kmax + 1;
    const auto J = bessel_j_sequence(epsilon, order + kmax + 1);

    double s = 0.0;
    for (int l = 0; l <= order; ++l) {
        const double d = omega_a - (omega_b + l * nu);
        if (near_zero(d, scale)) fail(ErrorKind::resonance, index_message("near-resonant denominator in g_eff", l));
        s += (2 * l + 1) * J[l] * J[l + 1] / (omega_a * omega_a - (omega_b + l * nu) * (omega_b + l * nu));
    }
    c.g_eff = 2.0 * g * g * omega_b * s;

    c.I_a = c.I_b = nonlinear_I(wsum, nu, g, epsilon, series_order);

    double sum_plus = 0.0, sum_minus_a = 0.0, sum_minus_b = 0.0;
    for (int n = 1; n <= order; ++n) {
        const double j2 = J[n] * J[n];
        const double dp = wsum - n * nu;
        if (!exact_zero(dp, scale)) {
            if (near_zero(dp, scale))
                fail(ErrorKind::resonance, index_message("near-resonant denominator omega_a + omega_b - n nu", n));
            sum_plus += j2 * wsum / (wsum * wsum - n * n * nu * nu);
        }
        const double dm = std::abs(wdiff) - n * nu;
        if (!exact_zero(dm, scale)) {
            if (near_zero(dm, scale))
                fail(ErrorKind::resonance, index_message("near-resonant denominator |omega_a - omega_b| - n nu", n));
            const double den = wdiff * wdiff - n * n * nu * nu;
            sum_minus_a += j2 * (omega_b - omega_a) / den;
            sum_minus_b += j2 * (omega_a - omega_b) / den;
        }
    }
    const double j0 = J[0] * J[0];
    c.tilde_I_a = 2.0 * g * omega_b * j0 / (omega_a * omega_a - omega_b * omega_b) + 2.0 * g * sum_plus +
                  2.0 * g * sum_minus_a;
    c.tilde_I_b = 2.0 * g * omega_a * j0 / (omega_a * omega_a - omega_b * omega_b) + 2.0 * g * sum_plus +
                  2.0 * g * sum_minus_b;

    c.eps1k.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    c.eps2k.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (int k = 1; k <= kmax; ++k) {
        double s1 = 0.0, s2 = 0.0;
        for (int l = 0; l <= order; ++l) {
            const double term = J[l] * J[l + k] / (wsum + l * nu);
            s1 += (((k + l) % 2 == 0) ? 1.0 : -1.0) * term;
            s2 += term;
        }
        c.eps1k[k] = -g * s1;
        c.eps2k[k] = -g * s2;
    }

    c.nu_two_photon = 2.0 * (omega_b - g * c.tilde_I_b);
    return c;
}

double amplifier_two_photon_nu(double omega_a, double omega_b, double g, double epsilon) {
    double nu = 2.0 * omega_b;
    for (int it = 0; it < 200; ++it) {
        const double next = amplifier_constants(omega_a, omega_b, nu, g, epsilon).nu_two_photon;
        if (std::abs(next - nu) <= 1e-15 * nu) return next;
        nu = next;
    }
    return nu;
}

TwoAtomConstants two_atom_constants(double omega_1, double omega_2, double omega_c, double nu, double g0,
                                    double g1, double g2) {
    if (!(omega_1 > 0.0) || !(omega_2 > 0.0) || !(omega_c > 0.0) || !(nu > 0.0))
        fail(ErrorKind::parameter, "two-atom frequencies must be > 0");
    const double scale = std::max({omega_1, omega_2, omega_c});
    if (near_zero(omega_1 - omega_c, scale)) fail(ErrorKind::degenerate_detuning, "omega_1 equals omega_c");
    if (near_zero(omega_2 - omega_c, scale)) fail(ErrorKind::degenerate_detuning, "omega_2 equals omega_c");

    const double e11 = g1 / (omega_c + omega_1);
    const double e12 = g2 / (omega_c + omega_2);
    const double d11 = g1 / (omega_1 - omega_c);
    const double d12 = g2 / (omega_2 - omega_c);

    TwoAtomConstants c;
    c.epsilon = g0 / nu;
    c.bracket = g1 * e12 + g2 * e11 - g1 * d12 - g2 * d11;
    c.g_eff = c.epsilon * c.bracket;
    c.omega_tilde_1 = omega_1 + g1 * (e11 + d11);
    c.omega_tilde_2 = omega_2 + g2 * (e12 + d12);
    c.nu_star = c.omega_tilde_1 + c.omega_tilde_2;
    return c;
}

}  // namespace modres::coeffs
