#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace declq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when problem data or configuration violates a structural invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what, std::string field = {})
        : std::runtime_error(what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Raised when a factorization or cross-check fails during a solve.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two-block split of the state (n1 + n2) and input (m1 + m2) spaces.
struct Partition {
    Index n1 = 0;
    Index n2 = 0;
    Index m1 = 0;
    Index m2 = 0;

    Index n() const { return n1 + n2; }
    Index m() const { return m1 + m2; }
    Index state_size(int block) const { return block == 1 ? n1 : n2; }
    Index input_size(int block) const { return block == 1 ? m1 : m2; }
    Index state_offset(int block) const { return block == 1 ? 0 : n1; }
    Index input_offset(int block) const { return block == 1 ? 0 : m1; }
};

/// x(k+1) = A x(k) + B u(k) with the state and input split into two blocks.
struct PartitionedSystem {
    Matrix A;
    Matrix B;
    Partition part;

    /// Block A_ij (rows of state block i, columns of state block j).
    Matrix A_block(int i, int j) const;
    /// Block B_ij (rows of state block i, columns of input block j).
    Matrix B_block(int i, int j) const;
};

struct CostWeights {
    Matrix Q;
    Matrix R;
    /// Terminal penalty on x(N+1). Only used when evaluating J_N.
    Matrix P_terminal;
    /// Seed of the forward Riccati iteration, P(0) = delta * I.
    double delta = 1.0;

    Matrix Q_block(const Partition& part, int i, int j) const;
    Matrix R_block(const Partition& part, int i, int j) const;
};

/// Controller i observes y_i = H_i x. Both maps act on the full state.
struct OutputMap {
    Matrix H1;
    Matrix H2;

    Index p1() const { return H1.rows(); }
    Index p2() const { return H2.rows(); }
    /// [H1; H2], a (p1 + p2) x n matrix.
    Matrix stacked() const;

    /// State feedback: H1 = [I 0], H2 = [0 I], so stacked() is the identity.
    static OutputMap identity(const Partition& part);
};

/// Sizes of the two local gains, K1 is m1 x p1 and K2 is m2 x p2.
struct GainDims {
    Index m1 = 0;
    Index p1 = 0;
    Index m2 = 0;
    Index p2 = 0;

    Index d1() const { return m1 * p1; }
    Index d() const { return m1 * p1 + m2 * p2; }

    static GainDims of(const Partition& part, const OutputMap& hmap) {
        return {part.m1, hmap.p1(), part.m2, hmap.p2()};
    }
};

struct GainPair {
    Matrix K1;
    Matrix K2;

    GainDims dims() const { return {K1.rows(), K1.cols(), K2.rows(), K2.cols()}; }
    static GainPair zero(const GainDims& dims) {
        return {Matrix::Zero(dims.m1, dims.p1), Matrix::Zero(dims.m2, dims.p2)};
    }
};

/// blkdiag(K1, K2); off-diagonal blocks are exact zeros.
Matrix assemble_gain(const GainPair& K);

/// Inverse of assemble_gain. Off-diagonal content is discarded.
GainPair split_gain(const Matrix& K, const GainDims& dims);

enum class Severity { Warning, Error };

struct ValidationIssue {
    Severity severity;
    std::string field;
    std::string message;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;
    /// Weights after symmetrization; meaningful only when ok.
    CostWeights cost;

    std::vector<ValidationIssue> errors() const;
    std::vector<ValidationIssue> warnings() const;
    std::string summary() const;
};

namespace tolerance {
inline constexpr double silent_symmetrize = 1e-10;
inline constexpr double warn_symmetrize = 1e-6;
inline constexpr double min_eigenvalue = -1e-10;
} // namespace tolerance

/// Check shapes, finiteness, partition sizes, symmetry and semidefiniteness.
///
/// Q, R and P_terminal with asymmetry up to 1e-10 are symmetrized silently,
/// up to 1e-6 with a warning, and rejected above that. Asymmetry is the max
/// absolute entry of M - M'.
ValidationReport validate_problem(const PartitionedSystem& sys, const CostWeights& cost,
                                  const OutputMap& hmap);

/// Max absolute entry; 0 for empty matrices.
double max_abs(const Matrix& M);

/// Smallest eigenvalue of the symmetric part of a square matrix.
double min_symmetric_eigenvalue(const Matrix& M);

inline Matrix symmetrized(const Matrix& M) { return 0.5 * (M + M.transpose()); }

} // namespace declq
