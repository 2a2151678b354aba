#pragma once

#include "declq/moments.hpp"

namespace declq {

/// Kronecker product. Together with column-major vec it satisfies
/// vec(A B C) = (C' kron A) vec(B).
Matrix kron(const Matrix& A, const Matrix& B);

/// Column-major stacking.
Vector vec(const Matrix& M);
Matrix unvec(const Vector& v, Index rows, Index cols);

/// Abar * xbar = bbar, the vectorized coupled stationarity conditions of one
/// time step. xbar stacks vec(K1) then vec(K2); the K2 segment starts at d1.
struct StationaritySystem {
    Matrix Abar;
    Vector bbar;
    Index d1 = 0;

    Index d() const { return Abar.rows(); }
};

/// Gain stack [vec(K1); vec(K2)].
Vector stack_gains(const GainPair& K);
GainPair unvec_gains(const Vector& x, const GainDims& dims);

/// Output-feedback construction. With S = H X H' (H = [H1; H2]) the blocks
/// are S11' kron U11, S12 kron U12, S12' kron U12', S22' kron U22, and
/// bbar = -[vec(M_1 X H1'); vec(M_2 X H2')] with M_i the rows of M of
/// input block i. Abar is symmetrized after assembly.
StationaritySystem build_system(const MomentState& X, const UpsilonM& um, const OutputMap& hmap);

/// State-feedback construction directly from the moment blocks:
/// blocks X11' kron U11, X12 kron U12, X12' kron U12', X22 kron U22 and
/// bbar = -[vec(M11 X11 + M12 X12'); vec(M22 X22 + M21 X12)].
StationaritySystem build_state_feedback_system(const MomentState& X, const UpsilonM& um);

/// ||Abar x - bbar||_2.
double residual_norm(const StationaritySystem& S, const Vector& x);
/// f(x) = (Abar x - bbar)'(Abar x - bbar).
double residual_value(const StationaritySystem& S, const Vector& x);
/// 2 Abar'(Abar x - bbar).
Vector residual_gradient(const StationaritySystem& S, const Vector& x);
/// 2 Abar' Abar, independent of x.
Matrix residual_hessian(const StationaritySystem& S);

} // namespace declq
