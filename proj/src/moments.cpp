#include "declq/moments.hpp"

namespace declq {

Matrix MomentState::assembled() const {
    const Index n1 = X11.rows();
    const Index n2 = X22.rows();
    Matrix X(n1 + n2, n1 + n2);
    X << X11, X12, X12.transpose(), X22;
    return X;
}

MomentState MomentState::from_assembled(const Matrix& X, Index n1) {
    const Index n2 = X.rows() - n1;
    return {X.topLeftCorner(n1, n1), X.topRightCorner(n1, n2), X.bottomRightCorner(n2, n2)};
}

Matrix UpsilonM::Upsilon_block(int i, int j) const {
    return Upsilon.block(part.input_offset(i), part.input_offset(j), part.input_size(i), part.input_size(j));
}

Matrix UpsilonM::M_block(int i, int j) const {
    return M.block(part.input_offset(i), part.state_offset(j), part.input_size(i), part.state_size(j));
}

MomentState seed_moments(const Vector& x0, Index n1) {
    if (n1 < 0 || n1 > x0.size()) {
        throw ValidationError("initial state shorter than the first state block", "initial_state");
    }
    return MomentState::from_assembled(x0 * x0.transpose(), n1);
}

Matrix closed_loop(const PartitionedSystem& sys, const GainPair& K, const OutputMap& hmap) {
    const Matrix H = hmap.stacked();
    const Matrix Kfull = assemble_gain(K);
    if (sys.B.cols() != Kfull.rows() || Kfull.cols() != H.rows() || H.cols() != sys.A.cols()) {
        throw ValidationError("gain, input map and output map dimensions disagree", "gain");
    }
    return sys.A + sys.B * Kfull * H;
}

MomentState propagate_moments(const MomentState& X, const GainPair& K, const PartitionedSystem& sys,
                              const OutputMap& hmap) {
    if (X.X11.rows() != sys.part.n1 || X.X22.rows() != sys.part.n2) {
        throw ValidationError("moment blocks do not match the state partition", "moments");
    }
    const Matrix F = closed_loop(sys, K, hmap);
    return MomentState::from_assembled(symmetrized(F * X.assembled() * F.transpose()), sys.part.n1);
}

MomentState propagate_moments_expanded(const MomentState& X, const GainPair& K, const PartitionedSystem& sys) {
    // x1' = F11 x1 + F12 x2, x2' = F21 x1 + F22 x2 with Fij = Aij + Bij Kj.
    const Matrix F11 = sys.A_block(1, 1) + sys.B_block(1, 1) * K.K1;
    const Matrix F12 = sys.A_block(1, 2) + sys.B_block(1, 2) * K.K2;
    const Matrix F21 = sys.A_block(2, 1) + sys.B_block(2, 1) * K.K1;
    const Matrix F22 = sys.A_block(2, 2) + sys.B_block(2, 2) * K.K2;
    const Matrix X21 = X.X12.transpose();

    MomentState out;
    out.X11 = F11 * X.X11 * F11.transpose() + F11 * X.X12 * F12.transpose() + F12 * X21 * F11.transpose() +
              F12 * X.X22 * F12.transpose();
    out.X12 = F11 * X.X11 * F21.transpose() + F11 * X.X12 * F22.transpose() + F12 * X21 * F21.transpose() +
              F12 * X.X22 * F22.transpose();
    out.X22 = F21 * X.X11 * F21.transpose() + F21 * X.X12 * F22.transpose() + F22 * X21 * F21.transpose() +
              F22 * X.X22 * F22.transpose();
    return out;
}

Matrix riccati_forward_step(const Matrix& P, const GainPair& K, const PartitionedSystem& sys,
                            const CostWeights& cost, const OutputMap& hmap) {
    const Matrix F = closed_loop(sys, K, hmap);
    const Matrix KH = assemble_gain(K) * hmap.stacked();
    return symmetrized(cost.Q + KH.transpose() * cost.R * KH + F.transpose() * P * F);
}

UpsilonM assemble_upsilon_m(const Matrix& P, const PartitionedSystem& sys, const CostWeights& cost) {
    const Matrix BtP = sys.B.transpose() * P;
    return {symmetrized(cost.R + BtP * sys.B), BtP * sys.A, sys.part};
}

} // namespace declq
