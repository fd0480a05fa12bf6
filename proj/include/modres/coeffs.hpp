#pragma once

#include <span>
#include <string>
#include <vector>

namespace modres::coeffs {

// The dimensionless modulation index means different things in different models.
enum class IndexDefinition {
    coupling_over_frequency,  // g / omega, weak-modulation tables
    twice_g0_over_nu,         // 2 g0 / nu, strong diagonal modulation
    depth_over_nu,            // omega0 gamma / nu, nonlinear and coupled models
    g0_over_nu,               // g0 / nu, two-atom model
};

const char* to_string(IndexDefinition d);

inline constexpr int max_recursion_order = 24;

// Arrays are indexed by k directly; slot 0 of h, f, delta, a is unused and zero.
struct CoefficientTable {
    int sign = 1;
    double omega = 0, nu = 0, g0 = 0, g1 = 0;
    int kmax = 0;
    std::vector<double> h, f, delta, a;
    std::vector<double> eps;  // eps[0] == 1
    IndexDefinition index_definition = IndexDefinition::coupling_over_frequency;

    double modulation_index() const { return g1 / omega; }
};

// B_0..B_n from a_1..a_n (a[0] holds a_1)
std::vector<double> complete_bell(std::span<const double> a, int n);

CoefficientTable weak_recursion(int sign, double omega, double nu, double g0, double g1, int kmax);

// h_1..h_kmax (slot 0 unused) from the closed h-only recurrences
std::vector<double> maintext_h(int sign, double omega, double nu, double g0, double g1, int kmax);

// eps with T(2 eps) = 2 coupling / detuning, T = tan (sign +1) or tanh (sign -1)
double small_rotation_angle(double coupling, double detuning, int sign);

// Second-order frequency shift of a spin driven by 2 g cos(nu t)(S+ + S-) near omega = order * nu.
double rabi_frequency_shift(double omega, double nu, double g, int order);
// nu solving order * nu = omega + shift(nu)
double rabi_resonance_nu(double omega, double g, int order);

struct StrongModTable {
    IndexDefinition definition = IndexDefinition::twice_g0_over_nu;
    double epsilon = 0;
    int sign = 1;
    std::vector<double> couplings;  // g_m, slot 0 unused
    std::vector<double> shifts;     // I_{+-m}, slot 0 unused
    double shift_global = 0;        // I_{+-}(eps)
    std::vector<double> bessel;     // J_0 .. J_K
    std::vector<std::string> warnings;
};

// series_order = 0 picks the truncation automatically
StrongModTable strong_mod_table(int sign, double omega, double nu, double g0, double g1, int mmax,
                                int series_order = 0);
StrongModTable strong_mod_table_from_index(int sign, double omega, double nu, double epsilon, double g1,
                                           int mmax, int series_order = 0);

double nonlinear_I(double omega, double nu, double g, double epsilon, int series_order = 0);
double tilde_I(double omega, double nu, double g, double epsilon, int m, int series_order = 0);

struct AmplifierConstants {
    double g_eff = 0;
    double I_a = 0, I_b = 0;
    double tilde_I_a = 0, tilde_I_b = 0;
    std::vector<double> eps1k, eps2k;  // k = 1..kmax, slot 0 unused
    double nu_two_photon = 0;          // 2 (omega_b - g tilde_I_b) at the given nu
};

AmplifierConstants amplifier_constants(double omega_a, double omega_b, double nu, double g, double epsilon,
                                       int kmax = 4, int series_order = 0);

// self-consistent nu = 2 (omega_b - g tilde_I_b(nu)) at fixed modulation index
double amplifier_two_photon_nu(double omega_a, double omega_b, double g, double epsilon);

struct TwoAtomConstants {
    double g_eff = 0;
    double bracket = 0;  // g1 eps12 + g2 eps11 - g1 delta12 - g2 delta11
    double omega_tilde_1 = 0, omega_tilde_2 = 0;
    double nu_star = 0;
    double epsilon = 0;  // g0 / nu
};

TwoAtomConstants two_atom_constants(double omega_1, double omega_2, double omega_c, double nu, double g0,
                                    double g1, double g2);

}  // namespace modres::coeffs
