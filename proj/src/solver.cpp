#include "declq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace declq {

std::string to_string(FeedbackMode mode) { return mode == FeedbackMode::State ? "state" : "output"; }

FeedbackMode feedback_mode_from_string(const std::string& name) {
    if (name == "state") {
        return FeedbackMode::State;
    }
    if (name == "output") {
        return FeedbackMode::Output;
    }
    throw ValidationError("unknown feedback mode '" + name + "' (expected state or output)", "solver.mode");
}

DampedNewtonStep::DampedNewtonStep(const StationaritySystem& S, Matrix damping) : damping_(std::move(damping)) {
    if (damping_.rows() != S.d() || damping_.cols() != S.d()) {
        throw ValidationError("damping matrix must be " + std::to_string(S.d()) + "x" + std::to_string(S.d()),
                              "solver.damping");
    }
    llt_.compute(damping_ + residual_hessian(S));
    if (llt_.info() != Eigen::Success) {
        throw NumericalError("Cholesky factorization of the damped Hessian failed");
    }
}

Vector DampedNewtonStep::step(const Vector& gradient, int depth) const {
    Vector g = llt_.solve(gradient);
    for (int j = 1; j <= depth; ++j) {
        g = llt_.solve(gradient + damping_ * g);
    }
    return g;
}

Vector g_recursion(const StationaritySystem& S, const Vector& x, const Matrix& damping, int depth) {
    DampedNewtonStep newton(S, damping);
    return newton.step(residual_gradient(S, x), depth);
}

Vector g_recursion(const StationaritySystem& S, const Vector& x, double rho, int depth) {
    if (!(rho > 0.0)) {
        throw ValidationError("rho must be positive", "solver.rho");
    }
    return g_recursion(S, x, rho * Matrix::Identity(S.d(), S.d()), depth);
}

namespace {

Matrix damping_matrix(const SolverConfig& cfg, Index d) {
    if (cfg.damping) {
        return *cfg.damping;
    }
    return cfg.rho * Matrix::Identity(d, d);
}

void check_config(const SolverConfig& cfg) {
    if (cfg.horizon < 0) {
        throw ValidationError("N must be >= 0", "solver.N");
    }
    if (cfg.iterations < 1) {
        throw ValidationError("I must be >= 1", "solver.I");
    }
    if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho)) {
        throw ValidationError("rho must be a positive finite number", "solver.rho");
    }
    if (!(cfg.inner_tol >= 0.0)) {
        throw ValidationError("inner_tol must be >= 0", "solver.inner_tol");
    }
    if (cfg.depth_cap < 0) {
        throw ValidationError("depth_cap must be >= 0", "solver.depth_cap");
    }
    if (cfg.damping) {
        const Matrix& D = *cfg.damping;
        if (D.rows() != D.cols() || max_abs(D - D.transpose()) > tolerance::silent_symmetrize ||
            Eigen::LLT<Matrix>(D).info() != Eigen::Success) {
            throw ValidationError("damping must be symmetric positive definite", "solver.damping");
        }
    }
}

} // namespace

InnerResult inner_solve(const StationaritySystem& S, const Vector& x_start, const SolverConfig& cfg) {
    if (x_start.size() != S.d()) {
        throw ValidationError("initial iterate has length " + std::to_string(x_start.size()) + ", expected " +
                                  std::to_string(S.d()),
                              "solver.x0_init");
    }
    InnerResult out;
    out.x = x_start;
    out.initial_residual = residual_norm(S, x_start);

    double residual = out.initial_residual;
    if (residual < cfg.inner_tol) {
        return out;
    }

    const DampedNewtonStep newton(S, damping_matrix(cfg, S.d()));
    Vector best = out.x;
    double best_residual = residual;
    for (int i = 0; i < cfg.iterations && residual >= cfg.inner_tol; ++i) {
        const int depth = std::min(i, cfg.depth_cap);
        out.x -= newton.step(residual_gradient(S, out.x), depth);
        residual = residual_norm(S, out.x);
        out.residuals.push_back(residual);
        ++out.iterations;
        if (residual < best_residual) {
            best = out.x;
            best_residual = residual;
        }
    }
    if (cfg.best_so_far_guard) {
        out.x = std::move(best);
    }
    return out;
}

namespace {

std::string format_cost(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

CostEvaluation evaluate_cost_forms(const std::vector<GainPair>& gains, const PartitionedSystem& sys,
                                   const CostWeights& cost, const OutputMap& hmap, const Vector& x0) {
    if (gains.empty()) {
        throw ValidationError("gain schedule is empty", "gains");
    }
    if (x0.size() != sys.part.n()) {
        throw ValidationError("initial state has the wrong length", "initial_state");
    }
    const Matrix H = hmap.stacked();
    CostEvaluation out;
    Vector x = x0;
    MomentState X = seed_moments(x0, sys.part.n1);
    for (const GainPair& K : gains) {
        const Matrix KH = assemble_gain(K) * H;
        const Vector u = KH * x;
        out.direct += x.dot(cost.Q * x) + u.dot(cost.R * u);
        out.trace += ((cost.Q + KH.transpose() * cost.R * KH) * X.assembled()).trace();
        x = closed_loop(sys, K, hmap) * x;
        X = propagate_moments(X, K, sys, hmap);
    }
    out.direct += x.dot(cost.P_terminal * x);
    out.trace += (cost.P_terminal * X.assembled()).trace();

    return out;
}

bool cost_forms_agree(const CostEvaluation& J) {
    return std::abs(J.direct - J.trace) <= 1e-9 * std::max(std::abs(J.direct), std::abs(J.trace));
}

} // namespace

CostEvaluation eval_cost(const std::vector<GainPair>& gains, const PartitionedSystem& sys,
                         const CostWeights& cost, const OutputMap& hmap, const Vector& x0) {
    const CostEvaluation out = evaluate_cost_forms(gains, sys, cost, hmap, x0);
    if (!cost_forms_agree(out)) {
        throw NumericalError("direct and trace-form costs disagree: " + format_cost(out.direct) + " vs " +
                             format_cost(out.trace));
    }
    return out;
}

CostEvaluation eval_cost(const std::vector<GainPair>& gains, const PartitionedSystem& sys,
                         const CostWeights& cost, const OutputMap& hmap, const Vector& x0, int horizon) {
    if (static_cast<int>(gains.size()) != horizon + 1) {
        throw ValidationError("gain schedule has " + std::to_string(gains.size()) + " entries, expected " +
                                  std::to_string(horizon + 1),
                              "gains");
    }
    return eval_cost(gains, sys, cost, hmap, x0);
}

double SolveReport::max_residual() const {
    return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

SolveReport solve(const PartitionedSystem& sys, const CostWeights& cost_in, const OutputMap& hmap_in,
                  const Vector& x0, const SolverConfig& cfg) {
    check_config(cfg);
    const OutputMap hmap = cfg.mode == FeedbackMode::State ? OutputMap::identity(sys.part) : hmap_in;
    const ValidationReport validation = validate_problem(sys, cost_in, hmap);
    if (!validation.ok) {
        const auto errors = validation.errors();
        throw ValidationError(errors.front().message, errors.front().field);
    }
    const CostWeights& cost = validation.cost;
    const Partition& part = sys.part;
    if (x0.size() != part.n()) {
        throw ValidationError("initial state has length " + std::to_string(x0.size()) + ", expected " +
                                  std::to_string(part.n()),
                              "initial_state");
    }

    const GainDims dims = GainDims::of(part, hmap);
    Vector xbar = cfg.x0_init.value_or(Vector::Zero(dims.d()));
    if (xbar.size() != dims.d()) {
        throw ValidationError("x0_init has length " + std::to_string(xbar.size()) + ", expected " +
                                  std::to_string(dims.d()),
                              "solver.x0_init");
    }
    if (cfg.damping && cfg.damping->rows() != dims.d()) {
        throw ValidationError("damping must be " + std::to_string(dims.d()) + "x" + std::to_string(dims.d()),
                              "solver.damping");
    }

    SolveReport report;
    report.mode = cfg.mode;
    report.hmap = hmap;
    for (const auto& w : validation.warnings()) {
        report.warnings.push_back(w.field + ": " + w.message);
    }

    const auto steps = static_cast<std::size_t>(cfg.horizon) + 1;
    report.gains.reserve(steps);
    report.residuals.reserve(steps);
    report.states.reserve(steps + 1);

    Matrix P = cost.delta * Matrix::Identity(part.n(), part.n());
    MomentState X = seed_moments(x0, part.n1);
    Vector x = x0;
    report.states.push_back(x);
    int degenerate_steps = 0;

    for (int k = 0; k <= cfg.horizon; ++k) {
        const UpsilonM um = assemble_upsilon_m(P, sys, cost);
        const StationaritySystem S =
            cfg.mode == FeedbackMode::State ? build_state_feedback_system(X, um) : build_system(X, um, hmap);
        if (S.Abar.isZero(0.0) && S.bbar.isZero(0.0)) {
            ++degenerate_steps;
        }

        const InnerResult inner = inner_solve(S, xbar, cfg);
        xbar = inner.x;
        GainPair K = unvec_gains(xbar, dims);

        report.residuals.push_back(residual_norm(S, xbar));
        report.initial_residuals.push_back(inner.initial_residual);
        report.iterations_used.push_back(inner.iterations);
        if (cfg.retain_riccati) {
            report.P_trace.push_back(P);
        }

        const Matrix F = closed_loop(sys, K, hmap);
        X = propagate_moments(X, K, sys, hmap);
        P = riccati_forward_step(P, K, sys, cost, hmap);
        x = F * x;
        report.states.push_back(x);
        report.gains.push_back(std::move(K));
    }
    if (degenerate_steps > 0) {
        report.warnings.push_back("stationarity system identically zero at " + std::to_string(degenerate_steps) +
                                  " step(s); gains carried over from the warm start");
    }

    const CostEvaluation J = evaluate_cost_forms(report.gains, sys, cost, hmap, x0);
    if (!cost_forms_agree(J)) {
        report.warnings.push_back("trace-form cost " + format_cost(J.trace) + " differs from the direct cost " +
                                  format_cost(J.direct) + " by more than 1e-9 relative");
    }
    report.cost = J.direct;
    report.cost_trace = J.trace;
    return report;
}

} // namespace declq
