#include "declq/stationarity.hpp"

namespace declq {

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Index j = 0; j < A.cols(); ++j) {
        for (Index i = 0; i < A.rows(); ++i) {
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        }
    }
    return out;
}

Vector vec(const Matrix& M) { return M.reshaped(); }

Matrix unvec(const Vector& v, Index rows, Index cols) {
    if (v.size() != rows * cols) {
        throw ValidationError("vector length does not match target shape", "gain");
    }
    return v.reshaped(rows, cols);
}

Vector stack_gains(const GainPair& K) {
    Vector x(K.K1.size() + K.K2.size());
    x << vec(K.K1), vec(K.K2);
    return x;
}

GainPair unvec_gains(const Vector& x, const GainDims& dims) {
    if (x.size() != dims.d()) {
        throw ValidationError("gain vector length " + std::to_string(x.size()) + " does not match " +
                                  std::to_string(dims.d()),
                              "gain");
    }
    return {unvec(x.head(dims.d1()), dims.m1, dims.p1), unvec(x.tail(dims.d() - dims.d1()), dims.m2, dims.p2)};
}

namespace {

StationaritySystem assemble(const Matrix& S11, const Matrix& S12, const Matrix& S22, const UpsilonM& um,
                            const Vector& b1, const Vector& b2) {
    const Matrix U11 = um.Upsilon_block(1, 1);
    const Matrix U12 = um.Upsilon_block(1, 2);
    const Matrix U22 = um.Upsilon_block(2, 2);
    const Index d1 = S11.rows() * U11.rows();
    const Index d2 = S22.rows() * U22.rows();

    StationaritySystem S;
    S.d1 = d1;
    S.Abar.resize(d1 + d2, d1 + d2);
    S.Abar.topLeftCorner(d1, d1) = kron(S11.transpose(), U11);
    S.Abar.topRightCorner(d1, d2) = kron(S12, U12);
    S.Abar.bottomLeftCorner(d2, d1) = kron(S12.transpose(), U12.transpose());
    S.Abar.bottomRightCorner(d2, d2) = kron(S22.transpose(), U22);
    S.Abar = symmetrized(S.Abar);
    S.bbar.resize(d1 + d2);
    S.bbar << b1, b2;
    return S;
}

} // namespace

StationaritySystem build_system(const MomentState& X, const UpsilonM& um, const OutputMap& hmap) {
    const Matrix Xfull = X.assembled();
    const Matrix H = hmap.stacked();
    if (H.cols() != Xfull.rows() || um.M.cols() != Xfull.rows()) {
        throw ValidationError("output map does not match the moment dimension", "output_maps");
    }
    const Index p1 = hmap.p1();
    const Index p2 = hmap.p2();
    const Matrix S = H * Xfull * H.transpose();
    // M_i X = M_i1 [X11 X12] + M_i2 [X12' X22], summed by block so that
    // selector maps H reproduce the state-feedback bbar exactly.
    const Index n1 = X.X11.rows();
    const Index n2 = X.X22.rows();
    const auto top = Xfull.topRows(n1);
    const auto bottom = Xfull.bottomRows(n2);
    const Matrix MX1 = um.M_block(1, 1) * top + um.M_block(1, 2) * bottom;
    const Matrix MX2 = um.M_block(2, 1) * top + um.M_block(2, 2) * bottom;
    const Vector b1 = -vec(MX1 * hmap.H1.transpose());
    const Vector b2 = -vec(MX2 * hmap.H2.transpose());
    return assemble(S.topLeftCorner(p1, p1), S.topRightCorner(p1, p2), S.bottomRightCorner(p2, p2), um, b1, b2);
}

StationaritySystem build_state_feedback_system(const MomentState& X, const UpsilonM& um) {
    const Vector b1 = -vec(um.M_block(1, 1) * X.X11 + um.M_block(1, 2) * X.X12.transpose());
    const Vector b2 = -vec(um.M_block(2, 2) * X.X22 + um.M_block(2, 1) * X.X12);
    return assemble(X.X11, X.X12, X.X22, um, b1, b2);
}

double residual_norm(const StationaritySystem& S, const Vector& x) { return (S.Abar * x - S.bbar).norm(); }

double residual_value(const StationaritySystem& S, const Vector& x) {
    return (S.Abar * x - S.bbar).squaredNorm();
}

Vector residual_gradient(const StationaritySystem& S, const Vector& x) {
    return 2.0 * S.Abar.transpose() * (S.Abar * x - S.bbar);
}

Matrix residual_hessian(const StationaritySystem& S) { return 2.0 * S.Abar.transpose() * S.Abar; }

} // namespace declq
