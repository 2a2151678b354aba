#include <gtest/gtest.h>

#include "declq/stationarity.hpp"
#include "test_support.hpp"

namespace declq {
namespace {

StationaritySystem scalar_system(double a, double b) {
    return {Matrix::Constant(1, 1, a), Vector::Constant(1, b), 1};
}

UpsilonM make_um(const Partition& part, Matrix upsilon, Matrix M) { return {std::move(upsilon), std::move(M), part}; }

// Stationarity data from a genuine rank-one moment and a PSD value matrix.
struct PipelineData {
    Partition part;
    MomentState X;
    UpsilonM um;
};

PipelineData random_pipeline_data(testing::Rng& rng) {
    const Partition part{rng.integer(1, 3), rng.integer(1, 3), rng.integer(1, 3), rng.integer(1, 3)};
    const PartitionedSystem sys{rng.matrix(part.n(), part.n()), rng.matrix(part.n(), part.m()), part};
    const CostWeights cost{rng.psd(part.n()), rng.psd(part.m(), 0.1), rng.psd(part.n()), 1.0};
    return {part, seed_moments(rng.vector(part.n()), part.n1), assemble_upsilon_m(rng.psd(part.n()), sys, cost)};
}

TEST(Kron, IdentityTimesIdentity) { EXPECT_EQ(kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2)), Matrix::Identity(4, 4)); }

TEST(Kron, ScalarScaling) {
    Matrix B(2, 2);
    B << 1, 0, 0, 3;
    Matrix expected(2, 2);
    expected << 2, 0, 0, 6;
    EXPECT_EQ(kron(Matrix::Constant(1, 1, 2.0), B), expected);
}

TEST(Kron, VecIdentityOnRandomTriple) {
    testing::Rng rng(1);
    const Matrix A = rng.matrix(2, 2);
    const Matrix B = rng.matrix(2, 2);
    const Matrix C = rng.matrix(2, 2);
    EXPECT_LE((vec(A * B * C) - kron(C.transpose(), A) * vec(B)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Kron, EntryLayout) {
    testing::Rng rng(2);
    const Matrix A = rng.matrix(2, 3);
    const Matrix B = rng.matrix(4, 2);
    const Matrix K = kron(A, B);
    ASSERT_EQ(K.rows(), 8);
    ASSERT_EQ(K.cols(), 6);
    for (Index i = 0; i < 8; ++i) {
        for (Index j = 0; j < 6; ++j) {
            EXPECT_EQ(K(i, j), A(i / 4, j / 2) * B(i % 4, j % 2));
        }
    }
}

TEST(Vec, IdentityAndColumnMajor) {
    Vector id(4);
    id << 1, 0, 0, 1;
    EXPECT_EQ(vec(Matrix::Identity(2, 2)), id);

    Matrix M(2, 2);
    M << 1, 2, 3, 4;
    Vector expected(4);
    expected << 1, 3, 2, 4;
    EXPECT_EQ(vec(M), expected);
}

TEST(Vec, MatchesLoopsAndRoundTrips) {
    testing::Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix M = rng.matrix(rng.integer(1, 5), rng.integer(1, 5));
        EXPECT_EQ(vec(M), testing::vec_by_loops(M));
        EXPECT_EQ(unvec(vec(M), M.rows(), M.cols()), M);
    }
    EXPECT_THROW(unvec(Vector::Zero(3), 2, 2), ValidationError);
}

TEST(UnvecGains, ScalarBlocks) {
    Vector x(2);
    x << -2, 3;
    const GainPair K = unvec_gains(x, {1, 1, 1, 1});
    EXPECT_EQ(K.K1(0, 0), -2.0);
    EXPECT_EQ(K.K2(0, 0), 3.0);
}

TEST(UnvecGains, FourDimensionalLayoutIsColumnMajor) {
    Vector x(8);
    x << 1, 2, 3, 4, 5, 6, 7, 8;
    const GainPair K = unvec_gains(x, {2, 2, 2, 2});
    Matrix K1(2, 2);
    K1 << 1, 3, 2, 4;
    Matrix K2(2, 2);
    K2 << 5, 7, 6, 8;
    EXPECT_EQ(K.K1, K1);
    EXPECT_EQ(K.K2, K2);
    EXPECT_EQ(stack_gains(K), x);
    EXPECT_THROW(unvec_gains(Vector::Zero(7), {2, 2, 2, 2}), ValidationError);
}

TEST(UnvecGains, RoundTrip) {
    testing::Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const GainPair K{rng.matrix(rng.integer(1, 3), rng.integer(1, 3)), rng.matrix(rng.integer(1, 3), rng.integer(1, 3))};
        const GainPair back = unvec_gains(stack_gains(K), K.dims());
        EXPECT_EQ(back.K1, K.K1);
        EXPECT_EQ(back.K2, K.K2);
    }
}

TEST(BuildSystem, ZeroMomentIsDegenerate) {
    testing::Rng rng(5);
    const Partition part{2, 2, 2, 2};
    const UpsilonM um = make_um(part, rng.psd(4), rng.matrix(4, 4));
    const StationaritySystem S = build_state_feedback_system(seed_moments(Vector::Zero(4), 2), um);
    EXPECT_TRUE(S.Abar.isZero(0.0));
    EXPECT_TRUE(S.bbar.isZero(0.0));
    EXPECT_EQ(residual_value(S, rng.vector(8)), 0.0);
}

TEST(BuildSystem, DecoupledIdentity) {
    const Partition part{1, 1, 1, 1};
    const MomentState X{Matrix::Ones(1, 1), Matrix::Zero(1, 1), Matrix::Ones(1, 1)};
    const UpsilonM um = make_um(part, Matrix::Identity(2, 2), Matrix::Zero(2, 2));
    const StationaritySystem S = build_state_feedback_system(X, um);
    EXPECT_EQ(S.Abar, Matrix::Identity(2, 2));
    EXPECT_TRUE(S.bbar.isZero(0.0));
    EXPECT_EQ(S.d1, 1);
}

TEST(BuildSystem, ScalarHandSolve) {
    // 2 K1 + 4 = 0 with the cross terms switched off, so K1 = -2.
    const Partition part{1, 1, 1, 1};
    const MomentState X{Matrix::Ones(1, 1), Matrix::Zero(1, 1), Matrix::Ones(1, 1)};
    Matrix upsilon(2, 2);
    upsilon << 2, 0, 0, 1;
    Matrix M = Matrix::Zero(2, 2);
    M(0, 0) = 4;
    const StationaritySystem S = build_state_feedback_system(X, make_um(part, upsilon, M));
    EXPECT_EQ(S.Abar(0, 0), 2.0);
    EXPECT_EQ(S.bbar(0), -4.0);
    const Vector x = S.Abar.ldlt().solve(S.bbar);
    EXPECT_DOUBLE_EQ(x(0), -2.0);
    EXPECT_EQ(residual_value(S, x), 0.0);
}

TEST(BuildSystem, EquationsMatchMatrixForm) {
    // Abar xbar - bbar stacks vec of the two coupled stationarity equations.
    testing::Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const PipelineData data = random_pipeline_data(rng);
        const Partition& part = data.part;
        const GainPair K{rng.matrix(part.m1, part.n1), rng.matrix(part.m2, part.n2)};
        const StationaritySystem S = build_state_feedback_system(data.X, data.um);
        const Matrix U11 = data.um.Upsilon_block(1, 1);
        const Matrix U12 = data.um.Upsilon_block(1, 2);
        const Matrix U22 = data.um.Upsilon_block(2, 2);
        const Matrix& X11 = data.X.X11;
        const Matrix& X12 = data.X.X12;
        const Matrix& X22 = data.X.X22;
        const Matrix eq1 = U11 * K.K1 * X11 + data.um.M_block(1, 1) * X11 + U12 * K.K2 * X12.transpose() +
                           data.um.M_block(1, 2) * X12.transpose();
        const Matrix eq2 = U22 * K.K2 * X22 + data.um.M_block(2, 2) * X22 + U12.transpose() * K.K1 * X12 +
                           data.um.M_block(2, 1) * X12;
        Vector expected(S.d());
        expected << testing::vec_by_loops(eq1), testing::vec_by_loops(eq2);
        const Vector got = S.Abar * stack_gains(K) - S.bbar;
        EXPECT_LE((got - expected).cwiseAbs().maxCoeff(), 1e-11 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
    }
}

TEST(BuildSystem, OutputFormReducesToStateForm) {
    testing::Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const PipelineData data = random_pipeline_data(rng);
        const StationaritySystem a = build_state_feedback_system(data.X, data.um);
        const StationaritySystem b = build_system(data.X, data.um, OutputMap::identity(data.part));
        ASSERT_EQ(a.d1, b.d1);
        EXPECT_LE((a.Abar - b.Abar).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, max_abs(a.Abar)));
        EXPECT_LE((a.bbar - b.bbar).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, max_abs(a.bbar)));
    }
}

TEST(BuildSystem, OutputFormIsGradientOfHamiltonian) {
    // d/dK_i of tr[(Q + H'K'RKH) X + F X F' P] restricted to the diagonal blocks,
    // halved, equals the stationarity residual. Checked through finite differences.
    testing::Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const Partition part{rng.integer(1, 2), rng.integer(1, 2), rng.integer(1, 2), rng.integer(1, 2)};
        const Index n = part.n();
        const PartitionedSystem sys{rng.matrix(n, n), rng.matrix(n, part.m()), part};
        const CostWeights cost{rng.psd(n), rng.psd(part.m(), 0.1), rng.psd(n), 1.0};
        const OutputMap hmap{rng.matrix(rng.integer(1, 3), n), rng.matrix(rng.integer(1, 3), n)};
        const Matrix P = rng.psd(n);
        const MomentState X = seed_moments(rng.vector(n), part.n1);
        const GainDims dims = GainDims::of(part, hmap);

        const auto hamiltonian = [&](const Vector& xbar) {
            const Matrix KH = assemble_gain(unvec_gains(xbar, dims)) * hmap.stacked();
            const Matrix F = sys.A + sys.B * KH;
            const Matrix Xf = X.assembled();
            return ((cost.Q + KH.transpose() * cost.R * KH) * Xf + F * Xf * F.transpose() * P).trace();
        };
        const Vector xbar = rng.vector(dims.d());
        const Vector fd = testing::central_difference(hamiltonian, xbar, 1e-5);
        const StationaritySystem S = build_system(X, assemble_upsilon_m(P, sys, cost), hmap);
        const Vector residual = S.Abar * xbar - S.bbar;
        EXPECT_LE((residual - 0.5 * fd).norm(), 1e-6 * std::max(1.0, fd.norm())) << "trial " << trial;
    }
}

TEST(BuildSystem, SymmetricAndSemidefinite) {
    testing::Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const PipelineData data = random_pipeline_data(rng);
        for (const auto& S : {build_state_feedback_system(data.X, data.um),
                              build_system(data.X, data.um, OutputMap::identity(data.part))}) {
            EXPECT_EQ(S.Abar, S.Abar.transpose());
            EXPECT_GE(min_symmetric_eigenvalue(S.Abar), -1e-9);
        }
    }
}

TEST(BuildSystem, ConsistentOnPipelineData) {
    testing::Rng rng(10);
    for (int trial = 0; trial < 200; ++trial) {
        const PipelineData data = random_pipeline_data(rng);
        const StationaritySystem S = build_state_feedback_system(data.X, data.um);
        const Vector x = S.Abar.completeOrthogonalDecomposition().solve(S.bbar);
        EXPECT_LE(residual_value(S, x), 1e-16 * std::max(1e-300, S.bbar.squaredNorm())) << "trial " << trial;
    }
}

TEST(BuildSystem, RejectsMismatchedOutputMap) {
    testing::Rng rng(11);
    const Partition part{2, 2, 2, 2};
    const UpsilonM um = make_um(part, rng.psd(4), rng.matrix(4, 4));
    const OutputMap bad{Matrix::Identity(2, 3), Matrix::Identity(2, 3)};
    EXPECT_THROW(build_system(seed_moments(rng.vector(4), 2), um, bad), ValidationError);
}

TEST(Residual, ValueExamples) {
    EXPECT_EQ(residual_value(scalar_system(1, 2), Vector::Zero(1)), 4.0);
    EXPECT_EQ(residual_value(scalar_system(1, 2), Vector::Constant(1, 2.0)), 0.0);
    EXPECT_EQ(residual_value(scalar_system(0, 0), Vector::Constant(1, 7.0)), 0.0);
    EXPECT_EQ(residual_norm(scalar_system(1, 2), Vector::Zero(1)), 2.0);
}

TEST(Residual, ScalarGradientAndHessian) {
    const StationaritySystem S = scalar_system(1, 2);
    EXPECT_EQ(residual_gradient(S, Vector::Zero(1))(0), -4.0);
    EXPECT_EQ(residual_hessian(S)(0, 0), 2.0);
    EXPECT_EQ(residual_gradient(S, Vector::Constant(1, 2.0))(0), 0.0);
}

TEST(Residual, GradientMatchesFiniteDifferences) {
    testing::Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const PipelineData data = random_pipeline_data(rng);
        const StationaritySystem S = build_state_feedback_system(data.X, data.um);
        const Vector x = rng.vector(S.d());
        const Vector fd = testing::central_difference([&](const Vector& v) { return residual_value(S, v); }, x, 1e-6);
        const Vector g = residual_gradient(S, x);
        EXPECT_LE((g - fd).norm(), 1e-5 * std::max(g.norm(), 1e-12));
    }
}

TEST(Residual, HessianIsTwiceGram) {
    testing::Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const Index d = rng.integer(1, 8);
        const StationaritySystem S{rng.matrix(d, d), rng.vector(d), 0};
        const Matrix H = residual_hessian(S);
        for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) {
                double gram = 0.0;
                for (Index r = 0; r < d; ++r) {
                    gram += S.Abar(r, i) * S.Abar(r, j);
                }
                EXPECT_NEAR(H(i, j), 2.0 * gram, 1e-12);
            }
        }
    }
}

} // namespace
} // namespace declq
