#pragma once

#include "modres/dynamics.hpp"

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace modres::resonance {

using Eigen::Index;

struct ScanResult {
    std::vector<double> nu_grid;
    std::vector<double> p_avg;
    double peak_nu = 0;
    double peak_value = 0;
    double predicted_nu = std::numeric_limits<double>::quiet_NaN();
    double discrepancy = std::numeric_limits<double>::quiet_NaN();
};

struct Probe {
    Index initial = 0;
    Index final_state = 0;
};

using ModelFactory = std::function<models::ModelSpec(double nu)>;
using ConfigFactory = std::function<dynamics::PropagatorConfig(double nu)>;

struct Vertex {
    double x = 0;
    double y = 0;
};

// vertex of the parabola through three points (any spacing)
Vertex parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2);

// argmax of samples refined by the parabola through the maximum and its neighbours
Vertex refine_peak(std::span<const double> x, std::span<const double> y);

// Grid points are evaluated on `workers` threads (0: hardware concurrency) and
// collected in grid order. A NaN prediction skips the grid-coverage check.
ScanResult scan_nu(const ModelFactory& factory, std::span<const double> nu_grid, const Probe& probe,
                   const dynamics::PropagatorConfig& cfg, double predicted_nu, unsigned workers = 0);

ScanResult scan_nu(const ModelFactory& factory, std::span<const double> nu_grid, const Probe& probe,
                   const ConfigFactory& cfg, double predicted_nu, unsigned workers = 0);

std::vector<double> uniform_grid(double lo, double hi, double step);

struct RabiFit {
    double omega_rabi = 0;
    double amplitude = 0;
    double phase = 0;
    double offset = 0;
    double residual = 0;  // rms of the fit residual

    bool accepted() const { return residual < 0.1 * amplitude; }
};

RabiFit extract_rabi(const dynamics::Trajectory& traj);
RabiFit extract_rabi(std::span<const double> times, std::span<const double> values);

struct Tolerance {
    double value = 0;
    bool relative = false;
};

struct Report {
    double predicted = 0;
    double measured = 0;
    double abs_error = 0;
    double rel_error = 0;
    bool pass = false;
    Tolerance tolerance;
};

Report compare(double measured, double predicted, const Tolerance& tol);
Report compare(const ScanResult& scan, const Tolerance& tol);
Report compare(const RabiFit& fit, double predicted_omega, const Tolerance& tol);

}  // namespace modres::resonance
