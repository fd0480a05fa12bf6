// Acceptance harness: one PASS/FAIL line per criterion, plus indented info lines.
// Usage: acceptance [--criterion N]...

#include "modres/coeffs.hpp"
#include "modres/dynamics.hpp"
#include "modres/error.hpp"
#include "modres/liealg.hpp"
#include "modres/models.hpp"
#include "modres/resonance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace modres;
using Eigen::MatrixXcd;
using liealg::AlgebraKind;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void info(const std::string& s) { std::printf("    info: %s\n", s.c_str()); }

double rel_err(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); }

double max_abs(const MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

dynamics::PropagatorConfig window(double t_final, int steps = 64) {
    dynamics::PropagatorConfig c;
    c.t_final = t_final;
    c.steps_per_period = steps;
    return c;
}

// minimum of a unimodal function on [a, b]
double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------- shared runs

struct TwoAtomSetup {
    static constexpr double w1 = 10, w2 = 30, wc = 40, g0 = 1, g1 = 1, g2 = 1;
    static models::ModelSpec model(double nu, int nc = 6) { return models::build_two_atom(w1, w2, wc, nu, g0, g1, g2, nc); }
    static coeffs::TwoAtomConstants constants(double nu) { return coeffs::two_atom_constants(w1, w2, wc, nu, g0, g1, g2); }
    static resonance::Probe probe(const models::ModelSpec& m) {
        // su2 basis index 0 is the excited state
        return {m.space.global_index({1, 1, 0}), m.space.global_index({0, 0, 0})};
    }
};

const resonance::ScanResult& two_atom_scan() {
    static std::optional<resonance::ScanResult> cached;
    if (!cached) {
        const double nu_star = TwoAtomSetup::constants(39.9).nu_star;
        // one full joint-excitation cycle per point
        const double t_final = pi / std::abs(TwoAtomSetup::constants(nu_star).g_eff);
        const auto grid = resonance::uniform_grid(39.7, 40.1, 2e-3);
        const auto probe = TwoAtomSetup::probe(TwoAtomSetup::model(40.0));
        cached = resonance::scan_nu([](double nu) { return TwoAtomSetup::model(nu); }, grid, probe, window(t_final),
                                    nu_star);
    }
    return *cached;
}

struct AmplifierSetup {
    static constexpr double wa = 5, wb = 10, g = 0.1, eps = 0.9;
    static constexpr int na = 8, nb = 30;
    static models::ModelSpec model(double nu) { return models::build_amplifier(wa, wb, nu, eps * nu / wa, g, na, nb); }
    static coeffs::AmplifierConstants constants(double nu) { return coeffs::amplifier_constants(wa, wb, nu, g, eps); }
};

const resonance::ScanResult& amplifier_scan() {
    static std::optional<resonance::ScanResult> cached;
    if (!cached) {
        const double predicted = coeffs::amplifier_two_photon_nu(AmplifierSetup::wa, AmplifierSetup::wb,
                                                                 AmplifierSetup::g, AmplifierSetup::eps);
        const double t_final = 1.0 / (2.0 * std::abs(AmplifierSetup::constants(predicted).g_eff));
        const auto grid = resonance::uniform_grid(19.995, 20.007, 5e-4);
        const auto m = AmplifierSetup::model(20.0);
        const resonance::Probe probe{m.space.global_index({0, 0}), m.space.global_index({0, 2})};
        cached = resonance::scan_nu(AmplifierSetup::model, grid, probe, window(t_final), predicted);
    }
    return *cached;
}

// ---------------------------------------------------------------- criteria

Verdict coefficient_anchors() {
    bool ok = true;
    std::string d;

    const auto t = coeffs::weak_recursion(1, 2.3, 0.7, 0.05, 0.11, 6);
    const bool a = t.eps[0] == 1.0;
    ok &= a;
    d += fmt("eps0=%.17g ", t.eps[0]);

    double worst_b = 0.0;
    for (int sign : {1, -1}) {
        const double w = 2.3, nu = 0.7, g1 = 0.11;
        const auto s = coeffs::weak_recursion(sign, w, nu, 0.0, g1, 4);
        worst_b = std::max(worst_b, rel_err(s.h[2], sign * 2.0 * g1 * g1 / (w + nu)));
    }
    ok &= worst_b <= 1e-13;
    d += fmt("h2_rel=%.2e ", worst_b);

    const double g = 0.05, w = 3.0;
    const auto r = coeffs::weak_recursion(1, w, 1.0, 0.0, g, 4);
    const double e = g / w;
    const double c_err = rel_err(g * r.eps[2], -2.25 * g * e * e);
    ok &= c_err <= 1e-12;
    d += fmt("third_harmonic_rel=%.2e ", c_err);

    // parametric oscillator: H1 form with frequency 2w, g0' = 2g, g1' = g; a^2 coefficient is g1' eps0 / 2
    const double gp = 0.01;
    const auto p = coeffs::weak_recursion(-1, 2.0, 2.0, 2.0 * gp, gp, 0);
    const double principal = gp * p.eps[0] / 2.0;
    const double d_err = rel_err(principal, gp / 2.0);
    ok &= d_err <= 1e-12;
    d += fmt("parosc_principal=%.17g (g/2=%.17g)", principal, gp / 2.0);
    return {ok, d};
}

Verdict recursion_equivalence() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> freq(1.0, 10.0), frac(0.0, 0.2);
    double worst = 0.0, worst_parity = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
        const double w = freq(rng), nu = freq(rng), g0 = frac(rng) * w, g1 = frac(rng) * w;
        const int sign = draw % 2 ? 1 : -1;
        const auto t = coeffs::weak_recursion(sign, w, nu, g0, g1, 12);
        const auto h = coeffs::maintext_h(sign, w, nu, g0, g1, 12);
        for (int k = 1; k <= 12; ++k)
            if (t.h[k] != 0.0 || h[k] != 0.0) worst = std::max(worst, rel_err(h[k], t.h[k]));

        const auto z = coeffs::weak_recursion(sign, w, nu, 0.0, g1, 12);
        for (int k = 1; k <= 12; k += 2) worst_parity = std::max(worst_parity, std::abs(z.eps[k]));
    }
    return {worst <= 1e-12 && worst_parity <= 1e-14,
            fmt("draws=1000 worst_rel=%.2e odd_eps_max=%.2e", worst, worst_parity)};
}

Verdict two_atom_location() {
    const double nu_star = TwoAtomSetup::constants(39.9).nu_star;
    const double exact = 40.0 - 52.0 / 525.0;
    const auto& s = two_atom_scan();
    const double off = std::abs(s.peak_nu - 39.90095);
    const bool ok = off <= 5e-3 && std::abs(nu_star - exact) <= 1e-12;

    try {
        // default six-cycle window needs a larger photon space, see the photon-pair line near 40.097
        const double t6 = 6 * pi / std::abs(TwoAtomSetup::constants(nu_star).g_eff);
        const auto grid = resonance::uniform_grid(39.7, 40.1, 2e-3);
        const auto r8 = resonance::scan_nu([](double nu) { return TwoAtomSetup::model(nu, 8); }, grid,
                                           TwoAtomSetup::probe(TwoAtomSetup::model(40.0, 8)), window(t6), nu_star);
        info(fmt("N_c=8, t_final=%.1f: peak_nu=%.6f", t6, r8.peak_nu));
    } catch (const Error& e) {
        info(std::string("N_c=8 six-cycle scan failed: ") + e.what());
    }
    return {ok, fmt("peak_nu=%.6f target=39.90095 |diff|=%.2e nu_star=%.15f (40-52/525 diff %.1e) peak_p=%.3f", s.peak_nu,
                    off, nu_star, std::abs(nu_star - exact), s.peak_value)};
}

Verdict amplifier_location() {
    const auto& s = amplifier_scan();
    const double off = std::abs(s.peak_nu - 20.0011);
    info(fmt("self-consistent 2(omega_b - g tildeI_b) = %.6f, scan discrepancy %.2e", s.predicted_nu, s.discrepancy));
    return {off <= 1e-3, fmt("peak_nu=%.6f target=20.0011 |diff|=%.2e tol=1e-3", s.peak_nu, off)};
}

Verdict squeezing_growth() {
    const double nu = amplifier_scan().peak_nu;
    const auto c = AmplifierSetup::constants(nu);
    const double ge = std::abs(c.g_eff);
    const auto m = AmplifierSetup::model(nu);
    const auto traj = dynamics::expectation_trajectory(m, window(1.0 / (2.0 * ge)),
                                                       dynamics::basis_state(m.dim(), m.space.global_index({0, 0})),
                                                       m.space.lifted[1].x_zero);
    double worst = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double x = 2.0 * ge * traj.times[i];
        if (x < 0.2 || x > 1.0) continue;
        worst = std::max(worst, rel_err(traj.values[i], models::effective_amplifier_prediction(ge, traj.times[i])));
        ++used;
    }
    return {used > 0 && worst <= 0.15,
            fmt("nu=%.6f |g_eff|=%.4e samples=%d worst_rel=%.3f tol=0.15", nu, ge, used, worst)};
}

Verdict two_atom_rabi() {
    const double nu = two_atom_scan().peak_nu;
    const double ge = std::abs(TwoAtomSetup::constants(nu).g_eff);
    const auto m = TwoAtomSetup::model(nu);
    const auto& s = m.space.lifted;
    const MatrixXcd joint = s[0].x_plus * s[1].x_plus * s[1].x_minus * s[0].x_minus;
    const auto traj = dynamics::expectation_trajectory(m, window(6 * pi / ge),
                                                       dynamics::basis_state(m.dim(), TwoAtomSetup::probe(m).initial),
                                                       joint);
    const auto fit = resonance::extract_rabi(traj);
    double peak = 0.0;
    for (double v : traj.values) peak = std::max(peak, v);
    const auto rep = resonance::compare(fit, 2.0 * ge, {0.2, true});
    return {rep.pass && peak >= 0.8, fmt("nu=%.6f omega=%.5e 2g_eff=%.5e rel=%.3f max_P_ee=%.3f fit_amp=%.3f", nu,
                                         fit.omega_rabi, 2.0 * ge, rep.rel_error, peak, fit.amplitude)};
}

// quasienergy splitting of the two Floquet states of a driven spin one half
double floquet_gap(double omega, double nu, double g) {
    const auto m = models::build_single_modulated(AlgebraKind::su2(0.5), omega, nu, 0.0, g);
    const MatrixXcd u = dynamics::SplitPropagator(m).unitary(0.0, m.period(), 2048);
    Eigen::ComplexEigenSolver<MatrixXcd> es(u);
    const auto l = es.eigenvalues();
    return std::abs(std::arg(l(0) * std::conj(l(1)))) / m.period();
}

// largest Floquet exponent of x'' + w^2 (1 + 2 gamma cos nu t) x = 0
double mathieu_exponent(double w, double gamma, double nu) {
    const double T = 2 * pi / nu;
    const int n = 4000;
    const double h = T / n;
    auto rhs = [&](double t, const Eigen::Vector2d& y) {
        return Eigen::Vector2d(y(1), -w * w * (1.0 + 2.0 * gamma * std::cos(nu * t)) * y(0));
    };
    Eigen::Matrix2d mono;
    for (int col = 0; col < 2; ++col) {
        Eigen::Vector2d y = Eigen::Vector2d::Unit(col);
        for (int i = 0; i < n; ++i) {
            const double t = i * h;
            const Eigen::Vector2d k1 = rhs(t, y), k2 = rhs(t + h / 2, y + h / 2 * k1),
                                  k3 = rhs(t + h / 2, y + h / 2 * k2), k4 = rhs(t + h, y + h * k3);
            y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        mono.col(col) = y;
    }
    const double half_trace = std::abs(mono.trace()) / 2.0;
    return half_trace > 1.0 ? std::acosh(half_trace) / T : 0.0;
}

Verdict rabi_third_harmonic() {
    const double w = 1.0, g = 0.05, e = g / w;
    const double nu = coeffs::rabi_resonance_nu(w, g, 3);
    const double predicted = 2.0 * 2.25 * g * e * e;
    const auto m = models::build_single_modulated(AlgebraKind::su2(0.5), w, nu, 0.0, g);
    const MatrixXcd pe = m.space.lifted[0].x_plus * m.space.lifted[0].x_minus;
    const auto traj =
        dynamics::expectation_trajectory(m, window(6 * 2 * pi / predicted), dynamics::basis_state(2, 1), pe);
    const auto fit = resonance::extract_rabi(traj);
    const auto rep = resonance::compare(fit, predicted, {0.15, true});

    // reported only: fifth harmonic through the minimal quasienergy gap
    {
        const double nu5 = coeffs::rabi_resonance_nu(w, g, 5);
        const double at = golden_min([&](double x) { return floquet_gap(w, x, g); }, nu5 - 2e-4, nu5 + 2e-4, 1e-11);
        const double c5 = floquet_gap(w, at, g) / (2.0 * g * std::pow(e, 4));
        const auto rec = coeffs::weak_recursion(1, w, w / 5.0, 0.0, g, 4);
        info(fmt("fifth harmonic: measured c=%.4f, recursion c=%.4f (625/64=%.4f), alternative 3125/288=%.4f", c5,
                 std::abs(rec.eps[4]) / std::pow(e, 4), 625.0 / 64.0, 3125.0 / 288.0));
    }
    // reported only: parametric oscillator rows through the Mathieu instability rate
    {
        const double wp = 1.0, gamma = 0.1, gp = wp * gamma / 2.0, ep = gp / wp;
        for (int k = 0; k < 3; ++k) {
            const double centre = 2.0 * wp / (k + 1);
            const double span = 0.02 * centre;
            double best_nu = centre, best = 0.0;
            for (int i = 0; i <= 400; ++i) {
                const double x = centre - span + 2.0 * span * i / 400.0;
                const double l = mathieu_exponent(wp, gamma, x);
                if (l > best) best = l, best_nu = x;
            }
            const double step = 2.0 * span / 400.0;
            const double top = golden_min([&](double x) { return -mathieu_exponent(wp, gamma, x); }, best_nu - step,
                                          best_nu + step, 1e-10);
            const double lam = mathieu_exponent(wp, gamma, top);
            const auto rec = coeffs::weak_recursion(-1, 2.0 * wp, 2.0 * wp / (k + 1), 2.0 * gp, gp, k);
            info(fmt("parametric resonance %d: |c| measured=%.4f recursion=%.4f", k + 1, lam / (2.0 * gp * std::pow(ep, k)),
                     std::abs(rec.eps[k]) / (2.0 * std::pow(ep, k))));
        }
    }
    return {rep.pass, fmt("nu=%.8f omega=%.5e predicted=%.5e rel=%.3f tol=0.15 fit_amp=%.3f", nu, fit.omega_rabi,
                          predicted, rep.rel_error, fit.amplitude)};
}

Verdict integrator_properties() {
    struct Case {
        std::string name;
        models::ModelSpec model;
        double span;
    };
    std::vector<Case> cases;
    cases.push_back({"two_atom", TwoAtomSetup::model(39.9), 0.0});
    cases.push_back({"amplifier", models::build_amplifier(5, 10, 20.0022, 3.6, 0.1, 5, 10), 0.0});
    cases.push_back({"spin", models::build_single_modulated(AlgebraKind::su2(1.5), 1.0, 0.45, 0.2, 0.15), 0.0});
    cases.push_back({"dicke", models::build_dicke_modulated(0.5, 1.0, 1.0, 1.3, 1.3, 0.02, 6), 0.0});

    double worst_defect = 0.0, worst_return = 0.0, worst_ratio = 1e300;
    for (auto& c : cases) {
        const double T = c.model.period();
        const auto cfg = window(100 * T);
        const auto fwd = dynamics::evolve_unitary_between(c.model, cfg, 0.0, 100 * T);
        const auto back = dynamics::evolve_unitary_between(c.model, cfg, 100 * T, 0.0);
        worst_defect = std::max({worst_defect, fwd.defect, back.defect});
        const double ret = max_abs(back.u * fwd.u - MatrixXcd::Identity(c.model.dim(), c.model.dim()));
        worst_return = std::max(worst_return, ret);

        const dynamics::SplitPropagator p(c.model);
        const double t1 = 4 * T;
        const long n = 64;
        const MatrixXcd ref = p.unitary(0.0, t1, 16 * n);
        const double e1 = max_abs(p.unitary(0.0, t1, n) - ref);
        const double e2 = max_abs(p.unitary(0.0, t1, 2 * n) - ref);
        worst_ratio = std::min(worst_ratio, e1 / e2);
        info(fmt("%s: defect=%.1e return=%.1e err(n)=%.2e err(2n)=%.2e ratio=%.2f", c.name.c_str(), fwd.defect, ret, e1,
                 e2, e1 / e2));
    }
    return {worst_defect < 1e-8 && worst_ratio >= 8.0 && worst_return < 1e-7,
            fmt("max_defect=%.1e min_ratio=%.2f max_return=%.1e", worst_defect, worst_ratio, worst_return)};
}

Verdict algebra_properties() {
    struct Worst {
        double comm = 0, herm = 0;
        int failures = 0;
        std::string first;
    };
    Worst su2, su11, h1;
    auto comm = [](const MatrixXcd& a, const MatrixXcd& b) -> MatrixXcd { return a * b - b * a; };
    auto check = [&](const AlgebraKind& kind, Worst& w) {
        const auto g = liealg::build_generators(kind);
        const bool bosonic = kind.bosonic();
        const Eigen::Index in = bosonic ? g.dim - 2 : g.dim;
        MatrixXcd r2 = comm(g.x_plus, g.x_minus);
        if (kind.family() == liealg::Family::su2) r2 -= 2.0 * g.x_zero;
        if (kind.family() == liealg::Family::su11_boson) r2 += 2.0 * g.x_zero;
        if (kind.family() == liealg::Family::h1) r2 += MatrixXcd::Identity(g.dim, g.dim);
        const MatrixXcd r1 = comm(g.x_zero, g.x_plus) - g.x_plus;
        const double c = std::max(max_abs(r1.topLeftCorner(in, in)), max_abs(r2.topLeftCorner(in, in)));
        const double h = std::max(max_abs(g.x_minus - g.x_plus.adjoint()), max_abs(g.x_zero - g.x_zero.adjoint()));
        const double tol = bosonic ? 1e-12 : 1e-13;
        w.comm = std::max(w.comm, c);
        w.herm = std::max(w.herm, h);
        if (c > tol || h != 0.0) {
            if (w.failures == 0) w.first = fmt("%s err=%.3g", kind.name().c_str(), c);
            ++w.failures;
        }
    };
    for (int twice = 1; twice <= 63; ++twice) check(AlgebraKind::su2(twice / 2.0), su2);
    for (int n = 4; n <= 64; ++n) {
        check(AlgebraKind::su11_boson(n), su11);
        check(AlgebraKind::h1(n), h1);
    }
    const auto p = liealg::tensor_embed({liealg::build_generators(AlgebraKind::su2(0.5)),
                                         liealg::build_generators(AlgebraKind::su2(0.5)),
                                         liealg::build_generators(AlgebraKind::h1(6))});
    double cross = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) cross = std::max(cross, max_abs(comm(p.lifted[i].x_plus, p.lifted[j].x_minus)));

    for (auto* w : {&su2, &su11, &h1})
        if (w->failures) info("first failure: " + w->first);
    const int failures = su2.failures + su11.failures + h1.failures;
    return {failures == 0 && cross == 0.0,
            fmt("su2 max=%.2e (%d/63 fail), su11 max=%.2e (%d fail), h1 max=%.2e (%d fail), cross=%.1e", su2.comm,
                su2.failures, su11.comm, su11.failures, h1.comm, h1.failures, cross)};
}

Verdict bessel_suppression() {
    const double w0 = 1.0, w1 = 1.0, g = 0.02, nu = 1.3;
    auto model = [&](double eps) { return models::build_dicke_modulated(0.5, w0, w1, nu, eps * nu / w0, g, 6); };
    const auto ref = model(1.0);
    const double t_final = 6 * pi / std::abs(g * std::cyl_bessel_j(0.0, 1.0));
    const auto initial = ref.space.global_index({0, 0}), final_state = ref.space.global_index({1, 1});
    const double p1 = dynamics::time_averaged_transition_probability(ref, window(t_final), initial, final_state);
    const double pz =
        dynamics::time_averaged_transition_probability(model(2.4048), window(t_final), initial, final_state);
    return {pz <= 0.1 * p1, fmt("P(eps=1)=%.4f P(eps=2.4048)=%.3e ratio=%.3e tol=0.1", p1, pz, pz / p1)};
}

struct Criterion {
    int id;
    const char* name;
    Verdict (*run)();
};

const Criterion criteria[] = {
    {1, "coefficient anchors", coefficient_anchors},
    {2, "recursion equivalence", recursion_equivalence},
    {3, "two-atom resonance location", two_atom_location},
    {4, "amplifier resonance location", amplifier_location},
    {5, "squeezing growth", squeezing_growth},
    {6, "two-atom rabi frequency", two_atom_rabi},
    {7, "rabi third harmonic", rabi_third_harmonic},
    {8, "integrator properties", integrator_properties},
    {9, "algebra properties", algebra_properties},
    {10, "bessel coupling suppression", bessel_suppression},
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            wanted.insert(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 2;
        }
    }

    int failed = 0;
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const Error& e) {
            v = {false, std::string(to_string(e.kind())) + " error: " + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %d (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
