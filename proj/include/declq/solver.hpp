#pragma once

#include <optional>
#include <string>
#include <vector>

#include "declq/stationarity.hpp"

namespace declq {

enum class FeedbackMode { State, Output };

std::string to_string(FeedbackMode mode);
FeedbackMode feedback_mode_from_string(const std::string& name);

struct SolverConfig {
    int horizon = 0;     ///< N; gains are computed for k = 0..N
    int iterations = 1;  ///< I; cap on inner Newton iterations per step
    double rho = 1.0;    ///< damping weight, Rbar = rho * I
    /// Full damping matrix overriding rho * I. Must be symmetric positive definite.
    std::optional<Matrix> damping;
    /// Inner iterate at k = 0. Defaults to zero.
    std::optional<Vector> x0_init;
    double inner_tol = 1e-9;
    FeedbackMode mode = FeedbackMode::State;
    bool best_so_far_guard = true;
    int depth_cap = 50;
    bool retain_riccati = true;
};

/// Factorization of (Rbar + f''), reused for every g_j of a step.
///
/// f'' = 2 Abar'Abar does not depend on the iterate, so one Cholesky
/// factorization per stationarity system serves the whole inner loop.
class DampedNewtonStep {
public:
    DampedNewtonStep(const StationaritySystem& S, Matrix damping);

    /// g_0 = (Rbar + f'')^{-1} f', g_j = (Rbar + f'')^{-1} (f' + Rbar g_{j-1}); returns g_depth.
    Vector step(const Vector& gradient, int depth) const;

private:
    Matrix damping_;
    Eigen::LLT<Matrix> llt_;
};

Vector g_recursion(const StationaritySystem& S, const Vector& x, double rho, int depth);
Vector g_recursion(const StationaritySystem& S, const Vector& x, const Matrix& damping, int depth);

struct InnerResult {
    Vector x;
    double initial_residual = 0.0;
    /// ||Abar x^{i+1} - bbar|| after each update.
    std::vector<double> residuals;
    int iterations = 0;
};

/// x^{i+1} = x^i - g_i(x^i) with recursion depth min(i, depth_cap), for at
/// most cfg.iterations updates. Stops once the residual drops below
/// cfg.inner_tol. With the guard on, the lowest-residual iterate is returned.
InnerResult inner_solve(const StationaritySystem& S, const Vector& x_start, const SolverConfig& cfg);

struct CostEvaluation {
    /// sum x'Qx + u'Ru over k = 0..N plus x(N+1)' P_terminal x(N+1).
    double direct = 0.0;
    /// The same quantity from the trace form over propagated moments.
    double trace = 0.0;
};

/// Evaluates J_N for the schedule (N = gains.size() - 1) both ways and throws
/// NumericalError if they disagree by more than 1e-9 relative.
CostEvaluation eval_cost(const std::vector<GainPair>& gains, const PartitionedSystem& sys,
                         const CostWeights& cost, const OutputMap& hmap, const Vector& x0);
CostEvaluation eval_cost(const std::vector<GainPair>& gains, const PartitionedSystem& sys,
                         const CostWeights& cost, const OutputMap& hmap, const Vector& x0, int horizon);

struct SolveReport {
    FeedbackMode mode = FeedbackMode::State;
    OutputMap hmap;
    std::vector<GainPair> gains;         ///< k = 0..N
    std::vector<double> residuals;       ///< e(k) = ||Abar(k) xbar(k) - bbar(k)||
    std::vector<double> initial_residuals;
    std::vector<Vector> states;          ///< k = 0..N+1
    std::vector<Matrix> P_trace;         ///< forward P(k) used at step k
    std::vector<int> iterations_used;
    double cost = 0.0;
    double cost_trace = 0.0;
    std::vector<std::string> warnings;

    int horizon() const { return static_cast<int>(gains.size()) - 1; }
    double max_residual() const;
};

/// Forward sweep: at each k, build the stationarity system from the current
/// forward Riccati value P(k) and moments X(k), solve it from the previous
/// step's gains, then advance X, P and the state with the new gain.
///
/// In state mode the output map argument is ignored and H = I is used.
SolveReport solve(const PartitionedSystem& sys, const CostWeights& cost, const OutputMap& hmap, const Vector& x0,
                  const SolverConfig& cfg);

} // namespace declq
