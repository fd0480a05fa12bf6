#pragma once

#include "modres/models.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace modres::dynamics {

using Eigen::Index;
using models::ModelSpec;

struct PropagatorConfig {
    double t_final = 0;
    int steps_per_period = 64;
    double unitarity_tol = 1e-8;
    double leakage_tol = 1e-3;

    void validate() const;
};

// Fourth-order symmetric splitting for H(t) = h_static + cos(nu t) h_mod.
// The diagonal part is integrated exactly in time, the off-diagonal static part
// through a cached eigendecomposition, and the off-diagonal modulated part (if any)
// at the midpoint of each sub-step. The scheme is unitary and time-symmetric.
class SplitPropagator {
public:
    explicit SplitPropagator(const ModelSpec& model);

    // columns of m are propagated from t0 to t1 in `steps` equal steps (t1 < t0 allowed)
    void propagate(Eigen::MatrixXcd& m, double t0, double t1, long steps) const;

    Eigen::MatrixXcd unitary(double t0, double t1, long steps) const;

    Index dim() const { return d_static_.size(); }

private:
    void diagonal_flow(Eigen::MatrixXcd& m, double t, double s) const;
    Eigen::MatrixXcd static_flow(double s) const;
    void modulated_flow(Eigen::MatrixXcd& m, double t, double s) const;

    double nu_;
    Eigen::VectorXd d_static_, d_mod_;
    bool has_static_ = false, has_mod_ = false;
    Eigen::MatrixXcd q_static_, q_mod_;
    Eigen::VectorXd l_static_, l_mod_;
};

double unitarity_defect(const Eigen::MatrixXcd& u);

struct UnitaryResult {
    Eigen::MatrixXcd u;
    double defect = 0;
};

UnitaryResult evolve_unitary(const ModelSpec& model, const PropagatorConfig& cfg);
// U(t1 <- t0), steps chosen from steps_per_period; t1 < t0 runs the time-reversed flow
UnitaryResult evolve_unitary_between(const ModelSpec& model, const PropagatorConfig& cfg, double t0, double t1);

struct StateTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> states;
    std::string label;
    PropagatorConfig config;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;
    std::string label;
    PropagatorConfig config;
};

StateTrajectory evolve_state(const ModelSpec& model, const PropagatorConfig& cfg, const Eigen::VectorXcd& psi0);

Trajectory expectation_trajectory(const ModelSpec& model, const PropagatorConfig& cfg, const Eigen::VectorXcd& psi0,
                                  const Eigen::MatrixXcd& observable);

double time_averaged_transition_probability(const ModelSpec& model, const PropagatorConfig& cfg, Index initial,
                                            Index final_state);

// basis states connected to the seeds through nonzero entries of |h_static| + |h_mod|
std::vector<Index> reachable_subspace(const ModelSpec& model, const std::vector<Index>& seeds);

Eigen::VectorXcd basis_state(Index dim, Index i);

}  // namespace modres::dynamics
