#pragma once

#include "declq/model.hpp"

namespace declq {

/// Second moment X = x x' stored by state blocks.
struct MomentState {
    Matrix X11;
    Matrix X12;
    Matrix X22;

    /// [[X11, X12], [X12', X22]].
    Matrix assembled() const;
    static MomentState from_assembled(const Matrix& X, Index n1);
};

/// Blocks of the stationarity data for one step.
///
/// Upsilon = R + B'PB is m x m, M = B'PA is m x n. Block (i, j) of Upsilon
/// is indexed by input blocks; block (i, j) of M by input block i and state
/// block j.
struct UpsilonM {
    Matrix Upsilon;
    Matrix M;
    Partition part;

    Matrix Upsilon_block(int i, int j) const;
    Matrix M_block(int i, int j) const;
};

MomentState seed_moments(const Vector& x0, Index n1);

/// A + B blkdiag(K1, K2) H.
Matrix closed_loop(const PartitionedSystem& sys, const GainPair& K, const OutputMap& hmap);

/// X' = F X F' with F the closed loop; the result is symmetrized.
MomentState propagate_moments(const MomentState& X, const GainPair& K, const PartitionedSystem& sys,
                              const OutputMap& hmap);

/// The same step written out block by block for state feedback (H = I).
/// Kept for cross-checking the factored form.
MomentState propagate_moments_expanded(const MomentState& X, const GainPair& K, const PartitionedSystem& sys);

/// P' = Q + H'K'RKH + F' P F, symmetrized.
Matrix riccati_forward_step(const Matrix& P, const GainPair& K, const PartitionedSystem& sys,
                            const CostWeights& cost, const OutputMap& hmap);

UpsilonM assemble_upsilon_m(const Matrix& P, const PartitionedSystem& sys, const CostWeights& cost);

} // namespace declq
