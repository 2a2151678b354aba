#include "declq/baseline.hpp"

#include <algorithm>
#include <numeric>

namespace declq {

CentralizedSolution centralized_lqr(const PartitionedSystem& sys, const CostWeights& cost, const Vector& x0,
                                    int horizon) {
    if (horizon < 0) {
        throw ValidationError("N must be >= 0", "solver.N");
    }
    if (x0.size() != sys.A.rows()) {
        throw ValidationError("initial state has the wrong length", "initial_state");
    }
    const auto steps = static_cast<std::size_t>(horizon) + 1;
    CentralizedSolution out;
    out.gains.resize(steps);
    out.P_seq.resize(steps + 1);
    out.P_seq[steps] = cost.P_terminal;

    const Matrix& A = sys.A;
    const Matrix& B = sys.B;
    for (std::size_t k = steps; k-- > 0;) {
        const Matrix& Pnext = out.P_seq[k + 1];
        const Matrix upsilon = symmetrized(cost.R + B.transpose() * Pnext * B);
        Eigen::LDLT<Matrix> ldlt(upsilon);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
            ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-14 * std::max(1.0, max_abs(upsilon))) {
            throw NumericalError("R + B'P(k+1)B is singular at k = " + std::to_string(k));
        }
        // B = 0 gives M = 0 and hence K = 0.
        out.gains[k] = -ldlt.solve(B.transpose() * Pnext * A);
        const Matrix F = A + B * out.gains[k];
        out.P_seq[k] =
            symmetrized(cost.Q + out.gains[k].transpose() * cost.R * out.gains[k] + F.transpose() * Pnext * F);
    }

    out.states.reserve(steps + 1);
    out.states.push_back(x0);
    for (std::size_t k = 0; k < steps; ++k) {
        out.states.push_back((A + B * out.gains[k]) * out.states.back());
    }
    out.cost = x0.dot(out.P_seq[0] * x0);
    return out;
}

double schedule_cost(const std::vector<Matrix>& gains, const PartitionedSystem& sys, const CostWeights& cost,
                     const Vector& x0) {
    Vector x = x0;
    double J = 0.0;
    for (const Matrix& K : gains) {
        const Vector u = K * x;
        J += x.dot(cost.Q * x) + u.dot(cost.R * u);
        x = (sys.A + sys.B * K) * x;
    }
    return J + x.dot(cost.P_terminal * x);
}

ComparisonReport compare(const SolveReport& decentralized, const CentralizedSolution& centralized) {
    if (decentralized.horizon() != centralized.horizon()) {
        throw ValidationError("horizons differ: " + std::to_string(decentralized.horizon()) + " vs " +
                                  std::to_string(centralized.horizon()),
                              "solver.N");
    }
    if (decentralized.states.empty() || centralized.states.empty() ||
        (decentralized.states.front() - centralized.states.front()).cwiseAbs().maxCoeff() != 0.0) {
        throw ValidationError("solutions start from different initial states", "initial_state");
    }

    ComparisonReport out;
    out.cost_decentralized = decentralized.cost;
    out.cost_centralized = centralized.cost;
    out.cost_gap = decentralized.cost - centralized.cost;

    const Matrix H = decentralized.hmap.stacked();
    for (std::size_t k = 0; k < centralized.gains.size(); ++k) {
        const Matrix effective = assemble_gain(decentralized.gains[k]) * H;
        if (effective.rows() != centralized.gains[k].rows() || effective.cols() != centralized.gains[k].cols()) {
            throw ValidationError("gain shapes differ between solutions", "gains");
        }
        out.gain_distance.push_back(max_abs(effective - centralized.gains[k]));
    }
    out.max_gain_distance = *std::max_element(out.gain_distance.begin(), out.gain_distance.end());
    out.final_gain_distance = out.gain_distance.back();

    const auto& e = decentralized.residuals;
    if (!e.empty()) {
        out.max_residual = *std::max_element(e.begin(), e.end());
        out.mean_residual = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
    }
    return out;
}

} // namespace declq
