#include "modres/dynamics.hpp"

#include "modres/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <deque>
#include <functional>
#include <sstream>

namespace modres::dynamics {

namespace {

using cd = std::complex<double>;

// Yoshida triple-jump weights
const double w_outer = 1.0 / (2.0 - std::cbrt(2.0));
const double w_inner = 1.0 - 2.0 * w_outer;

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool has_offdiagonal(const Eigen::MatrixXcd& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != cd(0.0, 0.0)) return true;
    return false;
}

Eigen::MatrixXcd offdiagonal(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd o = m;
    o.diagonal().setZero();
    return o;
}

}  // namespace

void PropagatorConfig::validate() const {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) fail(ErrorKind::parameter, "t_final must be > 0");
    if (steps_per_period < 32) fail(ErrorKind::parameter, "steps_per_period must be >= 32");
    if (!(unitarity_tol > 0.0)) fail(ErrorKind::parameter, "unitarity_tol must be > 0");
    if (!(leakage_tol > 0.0)) fail(ErrorKind::parameter, "leakage_tol must be > 0");
}

SplitPropagator::SplitPropagator(const ModelSpec& model) : nu_(model.nu) {
    if (!(nu_ > 0.0)) fail(ErrorKind::parameter, "modulation frequency nu must be > 0");
    d_static_ = model.h_static.diagonal().real();
    d_mod_ = model.h_mod.diagonal().real();

    if (has_offdiagonal(model.h_static)) {
        has_static_ = true;
        // no time dependence at all: the whole static part is one exact exponential
        const bool autonomous = model.h_mod.cwiseAbs().maxCoeff() == 0.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(autonomous ? model.h_static
                                                                      : offdiagonal(model.h_static));
        if (autonomous) d_static_.setZero();
        q_static_ = es.eigenvectors();
        l_static_ = es.eigenvalues();
    }
    if (has_offdiagonal(model.h_mod)) {
        has_mod_ = true;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(offdiagonal(model.h_mod));
        q_mod_ = es.eigenvectors();
        l_mod_ = es.eigenvalues();
    }
}

void SplitPropagator::diagonal_flow(Eigen::MatrixXcd& m, double t, double s) const {
    // integral of cos(nu t') over [t, t+s]
    const double c = 2.0 * std::cos(nu_ * (t + 0.5 * s)) * std::sin(0.5 * nu_ * s) / nu_;
    Eigen::VectorXcd ph(d_static_.size());
    for (Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, -(d_static_(i) * s + d_mod_(i) * c));
    m.array().colwise() *= ph.array();
}

Eigen::MatrixXcd SplitPropagator::static_flow(double s) const {
    Eigen::VectorXcd ph(l_static_.size());
    for (Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, -l_static_(i) * s);
    return q_static_ * ph.asDiagonal() * q_static_.adjoint();
}

void SplitPropagator::modulated_flow(Eigen::MatrixXcd& m, double t, double s) const {
    const double c = std::cos(nu_ * t) * s;
    Eigen::VectorXcd ph(l_mod_.size());
    for (Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, -l_mod_(i) * c);
    Eigen::MatrixXcd tmp = q_mod_.adjoint() * m;
    tmp = ph.asDiagonal() * tmp;
    m.noalias() = q_mod_ * tmp;
}

void SplitPropagator::propagate(Eigen::MatrixXcd& m, double t0, double t1, long steps) const {
    if (steps < 1) fail(ErrorKind::parameter, "propagation needs at least one step");
    const double h = (t1 - t0) / static_cast<double>(steps);
    const double w[3] = {w_outer, w_inner, w_outer};

    Eigen::MatrixXcd flow_outer, flow_inner;
    if (has_static_) {
        const double f = has_mod_ ? 0.5 : 1.0;
        flow_outer = static_flow(f * w_outer * h);
        flow_inner = static_flow(f * w_inner * h);
    }
    Eigen::MatrixXcd tmp(m.rows(), m.cols());
    auto apply_static = [&](int sub) {
        if (!has_static_) return;
        tmp.noalias() = (sub == 1 ? flow_inner : flow_outer) * m;
        m.swap(tmp);
    };

    for (long n = 0; n < steps; ++n) {
        double tau = t0 + static_cast<double>(n) * h;
        for (int sub = 0; sub < 3; ++sub) {
            const double s = w[sub] * h;
            diagonal_flow(m, tau, 0.5 * s);
            tau += 0.5 * s;
            apply_static(sub);
            if (has_mod_) {
                modulated_flow(m, tau, s);
                apply_static(sub);
            }
            diagonal_flow(m, tau, 0.5 * s);
            tau += 0.5 * s;
        }
    }
}

Eigen::MatrixXcd SplitPropagator::unitary(double t0, double t1, long steps) const {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim(), dim());
    propagate(u, t0, t1, steps);
    return u;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

namespace {

long steps_for(const ModelSpec& model, const PropagatorConfig& cfg, double span) {
    const double periods = std::abs(span) / model.period();
    return std::max(1L, static_cast<long>(std::ceil(periods * cfg.steps_per_period - 1e-6)));
}

void check_defect(double defect, const PropagatorConfig& cfg, const std::string& where) {
    if (!(defect < cfg.unitarity_tol))
        fail(ErrorKind::integrator, where + ": unitarity defect " + num(defect) + " exceeds " + num(cfg.unitarity_tol));
}

Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd base, long n) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
    while (n > 0) {
        if (n & 1) out = base * out;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return out;
}

ModelSpec restrict_model(const ModelSpec& model, const std::vector<Index>& idx) {
    ModelSpec sub;
    sub.nu = model.nu;
    const Index n = static_cast<Index>(idx.size());
    sub.h_static.resize(n, n);
    sub.h_mod.resize(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            sub.h_static(i, j) = model.h_static(idx[i], idx[j]);
            sub.h_mod(i, j) = model.h_mod(idx[i], idx[j]);
        }
    sub.space.dim = n;
    return sub;
}

// Walks the state period by period inside the reachable subspace of psi0 and
// calls visit(t, sub_state) at t = 0, T, 2T, ... and at t_final.
struct Walker {
    std::vector<Index> idx;
    std::vector<std::vector<Index>> top_levels;  // per bosonic factor, positions in idx

    void run(const ModelSpec& model, const PropagatorConfig& cfg, const Eigen::VectorXcd& psi0,
             const std::function<void(double, const Eigen::VectorXcd&)>& visit) {
        cfg.validate();
        if (psi0.size() != model.dim()) fail(ErrorKind::parameter, "initial state dimension does not match the model");
        if (std::abs(psi0.norm() - 1.0) > 1e-12) fail(ErrorKind::parameter, "initial state must be normalized");

        std::vector<Index> seeds;
        for (Index i = 0; i < psi0.size(); ++i)
            if (psi0(i) != cd(0.0, 0.0)) seeds.push_back(i);
        idx = reachable_subspace(model, seeds);

        for (std::size_t f = 0; f < model.space.factors.size(); ++f) {
            const auto& fac = model.space.factors[f];
            if (!fac.kind.bosonic()) continue;
            std::vector<Index> top;
            for (std::size_t p = 0; p < idx.size(); ++p)
                if (model.space.local_index(idx[p], f) >= fac.dim - 2) top.push_back(static_cast<Index>(p));
            top_levels.push_back(std::move(top));
        }

        const ModelSpec sub = restrict_model(model, idx);
        const SplitPropagator prop(sub);
        const double period = model.period();
        const long periods = static_cast<long>(std::floor(cfg.t_final / period + 1e-9));

        Eigen::MatrixXcd psi(static_cast<Index>(idx.size()), 1);
        for (std::size_t p = 0; p < idx.size(); ++p) psi(static_cast<Index>(p), 0) = psi0(idx[p]);

        auto check = [&](double t) {
            const double dn = std::abs(psi.col(0).norm() - 1.0);
            if (dn > cfg.unitarity_tol)
                fail(ErrorKind::integrator, "state norm drifted by " + num(dn) + " at t=" + num(t));
            for (const auto& top : top_levels) {
                double pop = 0.0;
                for (Index p : top) pop += std::norm(psi(p, 0));
                if (!(pop < cfg.leakage_tol))
                    fail(ErrorKind::leakage, "population " + num(pop) + " in the top truncation levels at t=" + num(t));
            }
        };

        check(0.0);
        visit(0.0, psi.col(0));
        if (periods > 0) {
            const Eigen::MatrixXcd u = prop.unitary(0.0, period, cfg.steps_per_period);
            check_defect(unitarity_defect(u), cfg, "one-period propagator");
            Eigen::MatrixXcd next(psi.rows(), 1);
            for (long j = 1; j <= periods; ++j) {
                next.noalias() = u * psi;
                psi.swap(next);
                const double t = static_cast<double>(j) * period;
                check(t);
                visit(t, psi.col(0));
            }
        }
        const double t_last = static_cast<double>(periods) * period;
        if (cfg.t_final - t_last > 1e-9 * period) {
            prop.propagate(psi, t_last, cfg.t_final, steps_for(model, cfg, cfg.t_final - t_last));
            check(cfg.t_final);
            visit(cfg.t_final, psi.col(0));
        }
    }
};

}  // namespace

UnitaryResult evolve_unitary_between(const ModelSpec& model, const PropagatorConfig& cfg, double t0, double t1) {
    if (!(cfg.steps_per_period >= 32)) fail(ErrorKind::parameter, "steps_per_period must be >= 32");
    const SplitPropagator prop(model);
    UnitaryResult r;
    r.u = prop.unitary(t0, t1, steps_for(model, cfg, t1 - t0));
    r.defect = unitarity_defect(r.u);
    check_defect(r.defect, cfg, "evolve_unitary");
    return r;
}

UnitaryResult evolve_unitary(const ModelSpec& model, const PropagatorConfig& cfg) {
    cfg.validate();
    const SplitPropagator prop(model);
    const double period = model.period();
    const long periods = static_cast<long>(std::floor(cfg.t_final / period + 1e-9));

    UnitaryResult r;
    r.u = Eigen::MatrixXcd::Identity(model.dim(), model.dim());
    if (periods > 0) {
        const Eigen::MatrixXcd ut = prop.unitary(0.0, period, cfg.steps_per_period);
        check_defect(unitarity_defect(ut), cfg, "one-period propagator");
        r.u = matrix_power(ut, periods);
    }
    const double t_last = static_cast<double>(periods) * period;
    if (cfg.t_final - t_last > 1e-9 * period)
        prop.propagate(r.u, t_last, cfg.t_final, steps_for(model, cfg, cfg.t_final - t_last));
    r.defect = unitarity_defect(r.u);
    check_defect(r.defect, cfg, "evolve_unitary");
    return r;
}

std::vector<Index> reachable_subspace(const ModelSpec& model, const std::vector<Index>& seeds) {
    const Index n = model.dim();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::deque<Index> queue;
    for (Index s : seeds) {
        if (s < 0 || s >= n) fail(ErrorKind::parameter, "basis index out of range");
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const Index i = queue.front();
        queue.pop_front();
        for (Index j = 0; j < n; ++j) {
            if (seen[j]) continue;
            if (model.h_static(j, i) != cd(0.0, 0.0) || model.h_mod(j, i) != cd(0.0, 0.0)) {
                seen[j] = 1;
                queue.push_back(j);
            }
        }
    }
    std::vector<Index> idx;
    for (Index i = 0; i < n; ++i)
        if (seen[i]) idx.push_back(i);
    return idx;
}

Eigen::VectorXcd basis_state(Index dim, Index i) {
    if (i < 0 || i >= dim) fail(ErrorKind::parameter, "basis index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(i) = 1.0;
    return v;
}

StateTrajectory evolve_state(const ModelSpec& model, const PropagatorConfig& cfg, const Eigen::VectorXcd& psi0) {
    StateTrajectory traj;
    traj.label = model.label;
    traj.config = cfg;
    Walker w;
    w.run(model, cfg, psi0, [&](double t, const Eigen::VectorXcd& sub) {
        Eigen::VectorXcd full = Eigen::VectorXcd::Zero(model.dim());
        for (std::size_t p = 0; p < w.idx.size(); ++p) full(w.idx[p]) = sub(static_cast<Index>(p));
        traj.times.push_back(t);
        traj.states.push_back(std::move(full));
    });
    return traj;
}

Trajectory expectation_trajectory(const ModelSpec& model, const PropagatorConfig& cfg, const Eigen::VectorXcd& psi0,
                                  const Eigen::MatrixXcd& observable) {
    if (observable.rows() != model.dim() || observable.cols() != model.dim())
        fail(ErrorKind::parameter, "observable dimension does not match the model");
    const double scale = std::max(1.0, observable.cwiseAbs().maxCoeff());

    Trajectory traj;
    traj.label = model.label;
    traj.config = cfg;
    Walker w;
    Eigen::MatrixXcd obs;
    w.run(model, cfg, psi0, [&](double t, const Eigen::VectorXcd& sub) {
        if (obs.size() == 0) {
            const Index n = static_cast<Index>(w.idx.size());
            obs.resize(n, n);
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j) obs(i, j) = observable(w.idx[i], w.idx[j]);
        }
        const cd v = sub.dot(obs * sub);
        if (std::abs(v.imag()) >= 1e-10 * scale)
            fail(ErrorKind::parameter, "observable expectation has imaginary part " + num(v.imag()));
        traj.times.push_back(t);
        traj.values.push_back(v.real());
    });
    return traj;
}

double time_averaged_transition_probability(const ModelSpec& model, const PropagatorConfig& cfg, Index initial,
                                            Index final_state) {
    const Index n = model.dim();
    if (initial < 0 || initial >= n || final_state < 0 || final_state >= n)
        fail(ErrorKind::parameter, "transition basis index out of range");
    cfg.validate();
    if (cfg.t_final < model.period()) fail(ErrorKind::parameter, "t_final must cover at least one modulation period");

    Walker w;
    double sum = 0.0;
    long count = 0;
    Index pos = -1;
    const double period = model.period();
    w.run(model, cfg, basis_state(n, initial), [&](double t, const Eigen::VectorXcd& sub) {
        if (pos < 0) {
            for (std::size_t p = 0; p < w.idx.size(); ++p)
                if (w.idx[p] == final_state) pos = static_cast<Index>(p);
            if (pos < 0) pos = static_cast<Index>(w.idx.size());  // unreachable
        }
        if (t <= 0.0) return;
        // only full-period samples enter the average
        const double j = t / period;
        if (std::abs(j - std::round(j)) > 1e-9) return;
        if (pos < static_cast<Index>(w.idx.size())) sum += std::norm(sub(pos));
        ++count;
    });
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

}  // namespace modres::dynamics
