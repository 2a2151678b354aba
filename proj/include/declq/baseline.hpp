#pragma once

#include <vector>

#include "declq/solver.hpp"

namespace declq {

/// Finite-horizon LQR with full state information.
struct CentralizedSolution {
    std::vector<Matrix> gains;  ///< K_c(k), k = 0..N, each m x n
    std::vector<Matrix> P_seq;  ///< P(k), k = 0..N+1, with P(N+1) = P_terminal
    std::vector<Vector> states; ///< closed-loop x(k), k = 0..N+1
    double cost = 0.0;          ///< x0' P(0) x0

    int horizon() const { return static_cast<int>(gains.size()) - 1; }
};

/// Backward recursion P(k) = Q + K'RK + (A+BK)'P(k+1)(A+BK) with
/// K(k) = -(R + B'P(k+1)B)^{-1} B'P(k+1)A, starting from P(N+1) = P_terminal.
/// Throws NumericalError when R + B'P(k+1)B is singular.
CentralizedSolution centralized_lqr(const PartitionedSystem& sys, const CostWeights& cost, const Vector& x0,
                                    int horizon);

/// Cost of an arbitrary full-state gain schedule, same terms as eval_cost.
double schedule_cost(const std::vector<Matrix>& gains, const PartitionedSystem& sys, const CostWeights& cost,
                     const Vector& x0);

struct ComparisonReport {
    double cost_decentralized = 0.0;
    double cost_centralized = 0.0;
    double cost_gap = 0.0;                ///< decentralized minus centralized
    std::vector<double> gain_distance;    ///< max |K(k)H - K_c(k)| per k
    double max_gain_distance = 0.0;
    double final_gain_distance = 0.0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
};

/// Throws ValidationError when the two solutions have different horizons or shapes.
ComparisonReport compare(const SolveReport& decentralized, const CentralizedSolution& centralized);

} // namespace declq
