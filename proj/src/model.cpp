#include "declq/model.hpp"

#include <cmath>
#include <sstream>

namespace declq {

Matrix PartitionedSystem::A_block(int i, int j) const {
    return A.block(part.state_offset(i), part.state_offset(j), part.state_size(i), part.state_size(j));
}

Matrix PartitionedSystem::B_block(int i, int j) const {
    return B.block(part.state_offset(i), part.input_offset(j), part.state_size(i), part.input_size(j));
}

Matrix CostWeights::Q_block(const Partition& part, int i, int j) const {
    return Q.block(part.state_offset(i), part.state_offset(j), part.state_size(i), part.state_size(j));
}

Matrix CostWeights::R_block(const Partition& part, int i, int j) const {
    return R.block(part.input_offset(i), part.input_offset(j), part.input_size(i), part.input_size(j));
}

Matrix OutputMap::stacked() const {
    Matrix H(H1.rows() + H2.rows(), H1.cols());
    H << H1, H2;
    return H;
}

OutputMap OutputMap::identity(const Partition& part) {
    const Index n = part.n();
    Matrix I = Matrix::Identity(n, n);
    return {I.topRows(part.n1), I.bottomRows(part.n2)};
}

Matrix assemble_gain(const GainPair& K) {
    Matrix out = Matrix::Zero(K.K1.rows() + K.K2.rows(), K.K1.cols() + K.K2.cols());
    out.topLeftCorner(K.K1.rows(), K.K1.cols()) = K.K1;
    out.bottomRightCorner(K.K2.rows(), K.K2.cols()) = K.K2;
    return out;
}

GainPair split_gain(const Matrix& K, const GainDims& dims) {
    if (K.rows() != dims.m1 + dims.m2 || K.cols() != dims.p1 + dims.p2) {
        throw ValidationError("gain matrix shape does not match the block sizes", "gain");
    }
    return {K.topLeftCorner(dims.m1, dims.p1), K.bottomRightCorner(dims.m2, dims.p2)};
}

double max_abs(const Matrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

double min_symmetric_eigenvalue(const Matrix& M) {
    if (M.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(M), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

std::vector<ValidationIssue> ValidationReport::errors() const {
    std::vector<ValidationIssue> out;
    for (const auto& issue : issues) {
        if (issue.severity == Severity::Error) {
            out.push_back(issue);
        }
    }
    return out;
}

std::vector<ValidationIssue> ValidationReport::warnings() const {
    std::vector<ValidationIssue> out;
    for (const auto& issue : issues) {
        if (issue.severity == Severity::Warning) {
            out.push_back(issue);
        }
    }
    return out;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << (ok ? "PASS" : "FAIL");
    for (const auto& issue : issues) {
        os << "\n  " << (issue.severity == Severity::Error ? "error" : "warning") << " [" << issue.field
           << "] " << issue.message;
    }
    return os.str();
}

namespace {

std::string shape(const Matrix& M) {
    return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

class Checker {
public:
    explicit Checker(ValidationReport& report) : report_(report) {}

    void error(const std::string& field, const std::string& message) {
        report_.ok = false;
        report_.issues.push_back({Severity::Error, field, message});
    }
    void warning(const std::string& field, const std::string& message) {
        report_.issues.push_back({Severity::Warning, field, message});
    }

    bool expect_shape(const std::string& field, const Matrix& M, Index rows, Index cols) {
        if (M.rows() != rows || M.cols() != cols) {
            error(field, "expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " + shape(M));
            return false;
        }
        if (!M.allFinite()) {
            error(field, "non-finite entries");
            return false;
        }
        return true;
    }

    // Symmetrizes in place per the tolerance policy, then checks M >= 0.
    void weight(const std::string& field, Matrix& M) {
        const double asym = max_abs(M - M.transpose());
        if (asym > tolerance::warn_symmetrize) {
            error(field, "asymmetry " + std::to_string(asym) + " exceeds 1e-6");
            return;
        }
        if (asym > tolerance::silent_symmetrize) {
            warning(field, "asymmetry " + std::to_string(asym) + " symmetrized");
        }
        M = symmetrized(M);
        const double lo = min_symmetric_eigenvalue(M);
        if (lo < tolerance::min_eigenvalue) {
            error(field, "indefinite (minimum eigenvalue " + std::to_string(lo) + ")");
        }
    }

private:
    ValidationReport& report_;
};

} // namespace

ValidationReport validate_problem(const PartitionedSystem& sys, const CostWeights& cost, const OutputMap& hmap) {
    ValidationReport report;
    report.cost = cost;
    Checker check(report);

    const Partition& part = sys.part;
    bool sizes_ok = true;
    for (auto [name, value] : {std::pair{"system.n1", part.n1}, std::pair{"system.n2", part.n2},
                               std::pair{"system.m1", part.m1}, std::pair{"system.m2", part.m2}}) {
        if (value < 1) {
            check.error(name, "partition size must be >= 1");
            sizes_ok = false;
        }
    }
    if (!sizes_ok) {
        return report;
    }

    const Index n = part.n();
    const Index m = part.m();
    check.expect_shape("system.A", sys.A, n, n);
    check.expect_shape("system.B", sys.B, n, m);
    if (check.expect_shape("cost.Q", report.cost.Q, n, n)) {
        check.weight("cost.Q", report.cost.Q);
    }
    if (check.expect_shape("cost.R", report.cost.R, m, m)) {
        check.weight("cost.R", report.cost.R);
    }
    if (check.expect_shape("cost.P_terminal", report.cost.P_terminal, n, n)) {
        check.weight("cost.P_terminal", report.cost.P_terminal);
    }
    if (!(cost.delta > 0.0) || !std::isfinite(cost.delta)) {
        check.error("cost.delta", "delta must be a positive finite number");
    }

    if (hmap.p1() < 1 || hmap.p2() < 1) {
        check.error("output_maps", "each output map needs at least one row");
    }
    if (hmap.H1.cols() != n) {
        check.error("output_maps.H1", "expected " + std::to_string(n) + " columns, got " + shape(hmap.H1));
    } else if (!hmap.H1.allFinite()) {
        check.error("output_maps.H1", "non-finite entries");
    }
    if (hmap.H2.cols() != n) {
        check.error("output_maps.H2", "expected " + std::to_string(n) + " columns, got " + shape(hmap.H2));
    } else if (!hmap.H2.allFinite()) {
        check.error("output_maps.H2", "non-finite entries");
    }
    return report;
}

} // namespace declq
