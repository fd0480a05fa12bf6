#include "modres/resonance.hpp"

#include "modres/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

namespace modres::resonance {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

Vertex parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (!(a < 0.0)) return {x1, y1};
    const double b = d01 - a * (x0 + x1);
    const double xv = -b / (2.0 * a);
    return {xv, y0 + (xv - x0) * d01 + a * (xv - x0) * (xv - x1)};
}

Vertex refine_peak(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) fail(ErrorKind::parameter, "peak refinement needs matching non-empty arrays");
    const std::size_t i = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    if (i == 0 || i + 1 == x.size()) return {x[i], y[i]};
    return parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]);
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi > lo)) fail(ErrorKind::configuration, "nu grid needs nu_min < nu_max and nu_step > 0");
    const long n = std::lround((hi - lo) / step);
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
    return g;
}

ScanResult scan_nu(const ModelFactory& factory, std::span<const double> nu_grid, const Probe& probe,
                   const dynamics::PropagatorConfig& cfg, double predicted_nu, unsigned workers) {
    return scan_nu(factory, nu_grid, probe, [&](double) { return cfg; }, predicted_nu, workers);
}

ScanResult scan_nu(const ModelFactory& factory, std::span<const double> nu_grid, const Probe& probe,
                   const ConfigFactory& cfg, double predicted_nu, unsigned workers) {
    if (nu_grid.size() < 16)
        fail(ErrorKind::configuration, "nu grid needs at least 16 points, got " + std::to_string(nu_grid.size()));
    for (std::size_t i = 1; i < nu_grid.size(); ++i)
        if (!(nu_grid[i] > nu_grid[i - 1])) fail(ErrorKind::configuration, "nu grid must be strictly increasing");
    if (!std::isnan(predicted_nu) && (predicted_nu < nu_grid.front() || predicted_nu > nu_grid.back()))
        fail(ErrorKind::configuration, "predicted peak nu=" + num(predicted_nu) + " lies outside the scan grid");

    const std::size_t n = nu_grid.size();
    std::vector<double> p(n, 0.0);
    std::vector<std::optional<Error>> errors(n);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            const double nu = nu_grid[i];
            try {
                const auto model = factory(nu);
                p[i] = dynamics::time_averaged_transition_probability(model, cfg(nu), probe.initial, probe.final_state);
            } catch (const Error& e) {
                errors[i] = e.with_context("scan at nu=" + num(nu));
            }
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e) throw *e;

    ScanResult r;
    r.nu_grid.assign(nu_grid.begin(), nu_grid.end());
    r.p_avg = std::move(p);
    const Vertex v = refine_peak(r.nu_grid, r.p_avg);
    r.peak_nu = v.x;
    r.peak_value = v.y;
    r.predicted_nu = predicted_nu;
    r.discrepancy = std::abs(r.peak_nu - predicted_nu);
    return r;
}

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// |DFT|^2 of a real sequence, bins 0..n/2
std::vector<double> power_spectrum(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> in(x);
    fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in.data(), out, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::vector<double> p(static_cast<std::size_t>(n / 2 + 1));
    for (int k = 0; k <= n / 2; ++k) p[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(out);
    return p;
}

}  // namespace

RabiFit extract_rabi(const dynamics::Trajectory& traj) { return extract_rabi(traj.times, traj.values); }

RabiFit extract_rabi(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size()) fail(ErrorKind::parameter, "trajectory times and values differ in length");
    if (times.size() < 8) fail(ErrorKind::no_oscillation, "trajectory too short for a spectral estimate");

    // keep the uniformly spaced prefix (a trailing off-grid sample is dropped)
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) fail(ErrorKind::parameter, "trajectory times must increase");
    std::size_t n = 1;
    while (n < times.size() && std::abs(times[n] - times[0] - static_cast<double>(n) * dt) < 1e-6 * dt) ++n;

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += values[i];
    mean /= static_cast<double>(n);
    double spread = 0.0;
    for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(values[i] - mean));
    if (spread <= 1e-14 * std::max(1.0, std::abs(mean))) fail(ErrorKind::no_oscillation, "signal is constant");

    std::size_t padded = 1;
    while (padded < 8 * n) padded <<= 1;
    std::vector<double> buf(padded, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
        buf[i] = w * (values[i] - mean);
    }
    const auto p = power_spectrum(buf);

    std::size_t best = 0;
    for (std::size_t k = 1; k + 1 < p.size(); ++k)
        if (p[k] >= p[k - 1] && p[k] >= p[k + 1] && (best == 0 || p[k] > p[best])) best = k;

    std::vector<double> mags(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) mags[k - 1] = std::sqrt(p[k]);
    std::nth_element(mags.begin(), mags.begin() + static_cast<long>(mags.size() / 2), mags.end());
    const double median = mags[mags.size() / 2];
    if (best == 0 || !(std::sqrt(p[best]) >= 3.0 * median))
        fail(ErrorKind::no_oscillation, "no spectral peak stands 3x above the spectral median");

    // parabola through the log-magnitudes around the peak bin
    const double a = 0.5 * std::log(p[best - 1]);
    const double b = 0.5 * std::log(p[best]);
    const double c = 0.5 * std::log(p[best + 1]);
    const double den = a - 2.0 * b + c;
    const double shift = den < 0.0 ? 0.5 * (a - c) / den : 0.0;
    const double omega = 2.0 * std::numbers::pi * (static_cast<double>(best) + shift) / (static_cast<double>(padded) * dt);

    // linear least squares for c cos + s sin + offset
    Eigen::MatrixXd design(static_cast<Index>(n), 3);
    Eigen::VectorXd rhs(static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = times[i];
        design(static_cast<Index>(i), 0) = std::cos(omega * t);
        design(static_cast<Index>(i), 1) = std::sin(omega * t);
        design(static_cast<Index>(i), 2) = 1.0;
        rhs(static_cast<Index>(i)) = values[i];
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd res = design * coef - rhs;

    RabiFit fit;
    fit.omega_rabi = omega;
    fit.amplitude = std::hypot(coef(0), coef(1));
    fit.phase = std::atan2(-coef(1), coef(0));
    fit.offset = coef(2);
    fit.residual = std::sqrt(res.squaredNorm() / static_cast<double>(n));
    return fit;
}

Report compare(double measured, double predicted, const Tolerance& tol) {
    if (!(tol.value > 0.0)) fail(ErrorKind::parameter, "comparison tolerance must be > 0");
    Report r;
    r.predicted = predicted;
    r.measured = measured;
    r.abs_error = std::abs(measured - predicted);
    r.rel_error = predicted != 0.0 ? r.abs_error / std::abs(predicted) : (r.abs_error == 0.0 ? 0.0 : INFINITY);
    r.tolerance = tol;
    r.pass = (tol.relative ? r.rel_error : r.abs_error) <= tol.value;
    return r;
}

Report compare(const ScanResult& scan, const Tolerance& tol) { return compare(scan.peak_nu, scan.predicted_nu, tol); }

Report compare(const RabiFit& fit, double predicted_omega, const Tolerance& tol) {
    return compare(fit.omega_rabi, predicted_omega, tol);
}

}  // namespace modres::resonance
