#include "modres/models.hpp"

#include "modres/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace modres::models {

using liealg::Polynomial;

Eigen::MatrixXcd ModelSpec::hamiltonian(double t) const { return h_static + std::cos(nu * t) * h_mod; }

double ModelSpec::period() const { return 2.0 * std::numbers::pi / nu; }

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::parameter, std::string(name) + " must be > 0");
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorKind::parameter, std::string(name) + " must be >= 0");
}

Eigen::MatrixXcd diagonal_of(const Eigen::VectorXd& d) {
    return d.cast<std::complex<double>>().asDiagonal();
}

Eigen::VectorXd apply_f(const Eigen::VectorXd& x, const DiagonalFunction& f, double shift = 0.0) {
    Eigen::VectorXd out(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        const double v = f(x(i) + shift);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "diagonal function is not finite at X0 = " << x(i) + shift;
            fail(ErrorKind::parameter, os.str());
        }
        out(i) = v;
    }
    return out;
}

}  // namespace

ModelSpec build_single_modulated(const AlgebraKind& kind, double omega, double nu, double g0, double g1) {
    require_positive(omega, "omega");
    require_positive(nu, "nu");
    require_nonnegative(g0, "g0");
    require_nonnegative(g1, "g1");

    const auto g = liealg::build_generators(kind);
    ModelSpec m;
    m.space = liealg::tensor_embed({g});
    m.h_static = omega * g.x_zero;
    m.h_mod = 2.0 * g0 * g.x_zero + 2.0 * g1 * (g.x_plus + g.x_minus);
    m.nu = nu;
    m.params = {{"omega", omega}, {"nu", nu}, {"g0", g0}, {"g1", g1}};
    m.label = "single:" + kind.name();
    return m;
}

ModelSpec build_parametric_oscillator(double omega, double nu, double gamma, int truncation) {
    require_positive(omega, "omega");
    require_nonnegative(gamma, "gamma");
    // omega (a†a + 1/2) = 2 omega K0 and omega gamma (a + a†)^2 / 2 = omega gamma (K+ + K- + 2 K0)
    auto m = build_single_modulated(AlgebraKind::su11_boson(truncation), 2.0 * omega, nu, omega * gamma,
                                    omega * gamma / 2.0);
    m.params["omega0"] = omega;
    m.params["gamma"] = gamma;
    m.params["g"] = omega * gamma / 2.0;
    m.label = "parosc";
    return m;
}

ModelSpec build_nonlinear(const AlgebraKind& kind, double omega, double gamma, double nu, double g,
                          const DiagonalFunction& f) {
    require_positive(omega, "omega");
    require_positive(nu, "nu");
    require_nonnegative(gamma, "gamma");
    if (!f) fail(ErrorKind::parameter, "nonlinear model needs a diagonal function f");

    const auto gen = liealg::build_generators(kind);
    const Eigen::MatrixXcd fx = diagonal_of(apply_f(gen.spectrum(), f));
    ModelSpec m;
    m.space = liealg::tensor_embed({gen});
    m.h_static = omega * gen.x_zero + g * (gen.x_plus * fx + fx * gen.x_minus);
    m.h_mod = omega * gamma * gen.x_zero;
    m.nu = nu;
    m.params = {{"omega", omega}, {"gamma", gamma}, {"nu", nu}, {"g", g}};
    m.label = "nonlinear:" + kind.name();
    return m;
}

Eigen::MatrixXcd kerr_operator(const AlgebraKind& kind, const DiagonalFunction& f) {
    if (!f) fail(ErrorKind::parameter, "kerr operator needs a diagonal function f");
    const auto gen = liealg::build_generators(kind);
    const Eigen::VectorXd x = gen.spectrum();
    const Polynomial phi = liealg::structural_phi(gen);
    const Polynomial commutator = liealg::discrete_nabla(phi, 1);

    const Eigen::VectorXd f2 = apply_f(x, f).array().square();
    const Eigen::VectorXd f2m = apply_f(x, f, -1.0).array().square();
    Eigen::VectorXd k(x.size());
    for (Index i = 0; i < x.size(); ++i) k(i) = commutator(x(i)) * f2(i) + phi(x(i)) * (f2m(i) - f2(i));
    return diagonal_of(k);
}

ModelSpec build_amplifier(double omega_a, double omega_b, double nu, double gamma, double g, int na, int nb) {
    require_positive(omega_a, "omega_a");
    require_positive(omega_b, "omega_b");
    require_positive(nu, "nu");
    require_nonnegative(gamma, "gamma");

    const auto space = liealg::tensor_embed(
        {liealg::build_generators(AlgebraKind::h1(na)), liealg::build_generators(AlgebraKind::h1(nb))});
    const auto& a = space.lifted[0];
    const auto& b = space.lifted[1];

    ModelSpec m;
    m.space = space;
    m.h_static = omega_a * a.x_zero + omega_b * b.x_zero + g * (a.x_plus + a.x_minus) * (b.x_plus + b.x_minus);
    m.h_mod = omega_a * gamma * a.x_zero;
    m.nu = nu;
    m.params = {{"omega_a", omega_a}, {"omega_b", omega_b}, {"nu", nu},
                {"gamma", gamma},     {"g", g},             {"fock_a", static_cast<double>(na)},
                {"fock_b", static_cast<double>(nb)}};
    m.label = "amplifier";
    return m;
}

ModelSpec build_two_atom(double omega_1, double omega_2, double omega_c, double nu, double g0, double g1,
                         double g2, int nc) {
    require_positive(omega_1, "omega1");
    require_positive(omega_2, "omega2");
    require_positive(omega_c, "omega_c");
    require_positive(nu, "nu");

    const auto spin = liealg::build_generators(AlgebraKind::su2(0.5));
    const auto space = liealg::tensor_embed({spin, spin, liealg::build_generators(AlgebraKind::h1(nc))});
    const auto& s1 = space.lifted[0];
    const auto& s2 = space.lifted[1];
    const auto& c = space.lifted[2];

    const Eigen::MatrixXcd field = c.x_plus + c.x_minus;
    ModelSpec m;
    m.space = space;
    // 2 (a† + a) g_i s_xi with s_x = (s+ + s-)/2
    m.h_static = omega_1 * s1.x_zero + omega_2 * s2.x_zero + omega_c * c.x_zero +
                 field * (g1 * (s1.x_plus + s1.x_minus) + g2 * (s2.x_plus + s2.x_minus));
    m.h_mod = 2.0 * g0 * (s1.x_zero + s2.x_zero);
    m.nu = nu;
    m.params = {{"omega1", omega_1}, {"omega2", omega_2}, {"omega_c", omega_c}, {"nu", nu},
                {"g0", g0},         {"g1", g1},         {"g2", g2},           {"fock_c", static_cast<double>(nc)}};
    m.label = "two_atom";
    return m;
}

ModelSpec build_dicke_modulated(double spin, double omega_0, double omega_1, double nu, double gamma, double g,
                                int n) {
    require_positive(omega_0, "omega0");
    require_positive(omega_1, "omega1");
    require_positive(nu, "nu");
    require_nonnegative(gamma, "gamma");

    const auto space = liealg::tensor_embed(
        {liealg::build_generators(AlgebraKind::su2(spin)), liealg::build_generators(AlgebraKind::h1(n))});
    const auto& s = space.lifted[0];
    const auto& a = space.lifted[1];

    ModelSpec m;
    m.space = space;
    m.h_static = omega_0 * s.x_zero + omega_1 * a.x_zero + g * (a.x_plus + a.x_minus) * (s.x_plus + s.x_minus);
    m.h_mod = omega_0 * gamma * s.x_zero;
    m.nu = nu;
    m.params = {{"spin", spin}, {"omega0", omega_0}, {"omega1", omega_1}, {"nu", nu},
                {"gamma", gamma}, {"g", g},           {"fock_c", static_cast<double>(n)}};
    m.label = "dicke";
    return m;
}

double EffectiveModel::predict_x0(double t, double x0_initial, double quadrature_initial) const {
    const double x = 2.0 * g_eff * t;
    if (sign > 0) return x0_initial * std::cos(x) + quadrature_initial * std::sin(x);
    return x0_initial * std::cosh(x) + quadrature_initial * std::sinh(x);
}

EffectiveModel effective_single(const coeffs::CoefficientTable& table, int k) {
    if (k < 0 || k > table.kmax)
        fail(ErrorKind::parameter, "resonance order k=" + std::to_string(k) + " outside the coefficient table");
    EffectiveModel e;
    e.resonance_order = k;
    e.sign = table.sign;
    e.g_eff = table.g1 * table.eps[k];
    e.shifted_frequencies["resonant_nu"] = table.omega / (k + 1);
    std::ostringstream os;
    os << "weak modulation, g/omega = " << table.modulation_index() << ", resonance omega ~ " << (k + 1) << " nu";
    e.validity = os.str();
    return e;
}

double effective_amplifier_prediction(double g_eff, double t) {
    const double s = std::sinh(2.0 * g_eff * t);
    return s * s;
}

TwoAtomPrediction effective_two_atom_prediction(double g_eff, double t) {
    const double c = std::cos(g_eff * t);
    const double s = std::sin(g_eff * t);
    return {c * c, s * s};
}

namespace {

struct Ladder {
    int xp = 0, xm = 0, yp = 0, ym = 0;
};

Eigen::MatrixXcd power(const Eigen::MatrixXcd& a, int p, Index dim) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(dim, dim);
    for (int i = 0; i < p; ++i) out = out * a;
    return out;
}

Eigen::MatrixXcd ladder_operator(const ProductSpace& s, const Ladder& l) {
    const auto& x = s.lifted[0];
    const auto& y = s.lifted[1];
    return power(x.x_plus, l.xp, s.dim) * power(x.x_minus, l.xm, s.dim) * power(y.x_plus, l.yp, s.dim) *
           power(y.x_minus, l.ym, s.dim);
}

}  // namespace

int higher_order_rows(int m) {
    switch (m) {
        case 0: return 4;
        case 1: return 2;
        case 2: return 6;
        case 3: return 7;
        default: fail(ErrorKind::parameter, "interaction order m must be 0..3");
    }
}

HigherOrderTerm build_higher_order_term(const ProductSpace& space, int m, int row, int k, double coefficient) {
    if (space.factors.size() < 2) fail(ErrorKind::parameter, "interaction terms need a two-factor space");
    const int rows = higher_order_rows(m);
    if (row < 1 || row > rows) {
        std::ostringstream os;
        os << "row " << row << " out of range 1.." << rows << " for order " << m;
        fail(ErrorKind::parameter, os.str());
    }

    const Polynomial phi_x = liealg::structural_phi(space.factors[0]);
    const Polynomial phi_y = liealg::structural_phi(space.factors[1]).swapped();
    auto nabla = [](const Polynomial& p, int mx, int ny, int times = 1) {
        Polynomial q = p;
        for (int i = 0; i < times; ++i) q = liealg::discrete_nabla(q, mx, ny);
        return q;
    };

    Ladder lad;
    Polynomial diag = Polynomial::constant(1.0);
    int drive = 0;

    if (m == 0) {
        lad = {1, 0, 0, 1};
        drive = (row == 1) ? 0 : (row == 2 ? -k : k);
        if (row == 4) lad = {1, 0, 1, 0};
    } else if (m == 1) {
        drive = k;
        if (row == 1) {
            lad = {2, 0, 0, 0};
            diag = nabla(phi_y, 0, 1);
        } else {
            lad = {0, 0, 2, 0};
            diag = nabla(phi_x, 1, 0);
        }
    } else if (m == 2) {
        const Polynomial d2y = nabla(phi_y, 0, 1, 2);
        const Polynomial d2x = nabla(phi_x, 1, 0, 2);
        switch (row) {
            case 1: lad = {3, 0, 1, 0}; diag = d2y; drive = k; break;
            case 2: lad = {1, 0, 3, 0}; diag = d2x; drive = k; break;
            case 3: lad = {3, 0, 0, 1}; diag = d2y; drive = k; break;
            case 4: lad = {0, 1, 3, 0}; diag = d2x; drive = k; break;
            case 5: lad = {3, 0, 0, 1}; diag = d2y; drive = -k; break;
            case 6: lad = {0, 1, 3, 0}; diag = d2x; drive = -k; break;
        }
    } else {
        const Polynomial big_phi = phi_x * phi_y;
        const Polynomial dy = nabla(phi_y, 0, 1);
        const Polynomial dx = nabla(phi_x, 1, 0);
        drive = k;
        switch (row) {
            case 1: lad = {2, 0, 2, 0}; diag = nabla(big_phi, 1, 1, 3); break;
            case 2: lad = {2, 0, 2, 0}; diag = nabla(dy, 0, -2) * nabla(dx, 2, 0); break;
            case 3: lad = {2, 0, 2, 0}; diag = nabla(dy, 0, 2) * nabla(dx, -2, 0); break;
            case 4: lad = {2, 0, 0, 2}; diag = nabla(dy, 0, 2) * nabla(dx, 2, 0); break;
            case 5: lad = {2, 0, 0, 2}; diag = nabla(dy, 0, 2) * nabla(dx, 2, 0); drive = -k; break;
            case 6: {
                lad = {3, 0, 0, 0};
                const Polynomial inner = phi_x * nabla(phi_y, 0, 1, 2).shifted(0, 1);
                diag = nabla(inner, 1, -1);
                break;
            }
            case 7: {
                lad = {0, 0, 3, 0};
                const Polynomial inner = phi_y * nabla(phi_x, 1, 0, 2).shifted(1, 0);
                diag = nabla(inner, -1, 1);
                break;
            }
        }
    }

    const Eigen::MatrixXcd op = ladder_operator(space, lad) * diagonal_of(liealg::evaluate_diagonal(space, diag, 0, 1));
    HigherOrderTerm term;
    term.matrix = coefficient * (op + op.adjoint());
    term.drive_power = drive;
    return term;
}

Eigen::MatrixXcd intensity_shift_K(const ProductSpace& space, const IntensityShiftCoefficients& c) {
    if (space.factors.size() < 2) fail(ErrorKind::parameter, "intensity shift needs a two-factor space");
    const Polynomial phi_x = liealg::structural_phi(space.factors[0]);
    const Polynomial phi_y = liealg::structural_phi(space.factors[1]).swapped();
    const Polynomial big_phi = phi_x * phi_y;

    const Polynomial d1 = liealg::discrete_nabla(big_phi, 1, 1);
    const Polynomial d2_shifted = liealg::discrete_nabla(d1, 1, 1).shifted(-1, -1);
    const Polynomial p31 = liealg::discrete_nabla(big_phi * d2_shifted, 1, 1);

    const Polynomial dy = liealg::discrete_nabla(phi_y, 0, 1);
    const Polynomial dx = liealg::discrete_nabla(phi_x, 1, 0);
    const Polynomial p32 = dy * dy * liealg::discrete_nabla(phi_x * phi_x.shifted(-1, 0), 2, 0);
    const Polynomial p33 = dx * dx * liealg::discrete_nabla(phi_y * phi_y.shifted(0, -1), 0, 2);

    const Polynomial k = c.c1 * d1 + c.c3a * p31 + c.c3b * p32 + c.c3c * p33;
    return diagonal_of(liealg::evaluate_diagonal(space, k, 0, 1));
}

}  // namespace modres::models
