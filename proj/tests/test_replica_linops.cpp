#include <gtest/gtest.h>

#include <numbers>

#include "brownian/replica_linops.hpp"
#include "brownian/rng.hpp"
#include "brownian/trajectory.hpp"
#include "oracles.hpp"

using namespace brownian;

namespace {

Matrix random_matrix(Eigen::Index n, std::uint64_t seed, double scale = 1.0) {
    CounterRng rng(seed, {static_cast<std::uint64_t>(n)});
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = scale * cplx(rng.normal(), rng.normal());
    return m;
}

Matrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
    const Matrix a = random_matrix(n, seed);
    return (a + a.adjoint()) / 2.0;
}

char axis_char(Axis a) { return a == Axis::x ? 'x' : a == Axis::y ? 'y' : 'z'; }

}  // namespace

TEST(ReplicaSpace, FactorLayoutIsABijection) {
    const auto s = ReplicaSpace::replicated(3, 2);
    EXPECT_EQ(s.n_contours(), 4);
    EXPECT_EQ(s.total_dim(), std::size_t{1} << 12);
    std::vector<bool> seen(static_cast<std::size_t>(s.n_factors()), false);
    for (int c = 0; c < s.n_contours(); ++c)
        for (int i = 0; i < s.n_sites(); ++i) {
            const int p = s.factor(c, i);
            ASSERT_FALSE(seen[static_cast<std::size_t>(p)]);
            seen[static_cast<std::size_t>(p)] = true;
        }
    EXPECT_EQ(s.forward(1), 1);
    EXPECT_EQ(s.backward(0), 2);
    EXPECT_TRUE(s.is_backward(3));
    EXPECT_FALSE(s.is_backward(1));
    EXPECT_EQ(s.stride(s.n_factors() - 1), 1u);
}

TEST(ReplicaSpace, RejectsBadShapes) {
    EXPECT_THROW(ReplicaSpace::replicated(2, 0), ValidationError);
    EXPECT_THROW(ReplicaSpace::replicated(0, 1), ValidationError);
    EXPECT_THROW(ReplicaSpace::replicated(16, 2), SizeError);
    const auto s = ReplicaSpace::replicated(2, 1);
    EXPECT_THROW(s.factor(2, 0), IndexError);
    EXPECT_THROW(s.factor(0, 2), IndexError);
    EXPECT_THROW(s.backward(1), IndexError);
}

TEST(DenseOperator, HermitianFlagIsChecked) {
    Matrix a(2, 2);
    a << 1, cplx(0, 1), cplx(0, 1), 1;
    EXPECT_THROW(DenseOperator(a, true), ValidationError);
    EXPECT_NO_THROW(DenseOperator(random_hermitian(4, 1), true));
    EXPECT_THROW(DenseOperator(Matrix(2, 3)), ValidationError);
    EXPECT_THROW(DenseOperator::identity(2) * DenseOperator::identity(3), ValidationError);
}

TEST(PauliOps, MatchKroneckerConstruction) {
    const auto s = ReplicaSpace::replicated(2, 1);
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 2; ++i)
            for (Axis a : {Axis::x, Axis::y, Axis::z}) {
                const Matrix ref = oracle::site_op(4, s.factor(c, i), oracle::pauli(axis_char(a)));
                EXPECT_LT((pauli_op(s, c, i, a).matrix() - ref).cwiseAbs().maxCoeff(), 1e-15);
            }
}

TEST(PauliOps, ProductsMatchDenseProducts) {
    const int n = 3;
    for (Axis a : {Axis::x, Axis::y, Axis::z})
        for (Axis b : {Axis::x, Axis::y, Axis::z}) {
            const auto p = PauliSum::single(n, 1, a) * PauliSum::single(n, 1, b) * PauliSum::single(n, 2, b);
            const Matrix ref = oracle::site_op(n, 1, oracle::pauli(axis_char(a)) * oracle::pauli(axis_char(b))) *
                               oracle::site_op(n, 2, oracle::pauli(axis_char(b)));
            EXPECT_LT((p.to_matrix() - ref).cwiseAbs().maxCoeff(), 1e-15);
        }
}

TEST(PauliOps, ConjugateAndAdjointAreEntrywise) {
    const int n = 2;
    auto h = PauliSum::single(n, 0, Axis::y) * PauliSum::single(n, 1, Axis::x);
    h += cplx(0.3, 0.7) * PauliSum::single(n, 1, Axis::y);
    const Matrix m = h.to_matrix();
    EXPECT_LT((h.conj().to_matrix() - m.conjugate()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((h.adjoint().to_matrix() - m.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    const Vector v = Vector::LinSpaced(4, 0.0, 1.0);
    EXPECT_LT((h.apply(v) - m * v).norm(), 1e-14);
}

TEST(Majorana, MatchJordanWignerChain) {
    const auto s = ReplicaSpace::replicated(2, 1);
    const int n = s.n_factors();
    for (int c = 0; c < 2; ++c)
        for (int f = 0; f < 4; ++f) {
            const Matrix ref = oracle::majorana(n, c * 4 + f);
            EXPECT_LT((majorana_op(s, c, f).matrix() - ref).cwiseAbs().maxCoeff(), 1e-15);
        }
}

TEST(Majorana, CliffordAlgebraAcrossContours) {
    const auto s = ReplicaSpace::replicated(2, 2);
    std::vector<Matrix> psi;
    for (int c = 0; c < s.n_contours(); ++c)
        for (int f = 0; f < 4; ++f) psi.push_back(majorana_op(s, c, f).matrix());
    const auto d = static_cast<Eigen::Index>(s.total_dim());
    for (std::size_t a = 0; a < psi.size(); ++a)
        for (std::size_t b = 0; b < psi.size(); ++b) {
            const Matrix anti = psi[a] * psi[b] + psi[b] * psi[a];
            const Matrix ref = (a == b ? 1.0 : 0.0) * Matrix::Identity(d, d);
            ASSERT_LT((anti - ref).cwiseAbs().maxCoeff(), 1e-14) << a << "," << b;
        }
    EXPECT_THROW(majorana_sum(s, 0, 4), IndexError);
}

TEST(EmbedLocal, MatchesKroneckerForQutrits) {
    const auto s = ReplicaSpace::replicated(1, 1, 3);
    Matrix local(3, 3);
    local << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    Matrix ref = oracle::kron(Matrix::Identity(3, 3), local);
    EXPECT_LT((embed_local(s, 1, 0, local) - ref).cwiseAbs().maxCoeff(), 1e-15);
    ref = oracle::kron(local, Matrix::Identity(3, 3));
    EXPECT_LT((embed_local(s, 0, 0, local) - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MatrixExponential, AgreesWithTaylorSeries) {
    for (std::uint64_t seed : {1, 2, 3}) {
        const Matrix a = random_matrix(6, seed, 0.3);
        const auto e = matrix_exponential(DenseOperator(a), cplx(0.7, -0.2));
        const Matrix ref = oracle::taylor_exp(cplx(0.7, -0.2) * a);
        EXPECT_LT((e.matrix() - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
    }
}

TEST(MatrixExponential, HandlesLargeNormByScaling) {
    const Matrix h = random_hermitian(8, 7) * 10.0;
    const auto u = matrix_exponential(DenseOperator(h, true), cplx(0, -1));
    EXPECT_LT(unitarity_defect(u.matrix()), 1e-10);
    EXPECT_LT((u.matrix() - unitary_propagator(h, 1.0)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(MatrixExponential, RejectsNonFinite) {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(matrix_exponential(DenseOperator(a), 1.0), ValidationError);
    EXPECT_THROW(matrix_exponential(DenseOperator::identity(2), std::numeric_limits<double>::infinity()),
                 ValidationError);
}

TEST(EigGeneral, CompanionMatrixRoots) {
    // (z - 1)(z + 2)(z - i)(z + 0.5 - 0.5i)
    const std::vector<cplx> roots{1.0, -2.0, cplx(0, 1), cplx(-0.5, 0.5)};
    std::vector<cplx> poly{1.0};
    for (auto r : roots) {
        std::vector<cplx> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= r * poly[i];
        }
        poly = next;
    }
    const auto n = static_cast<Eigen::Index>(roots.size());
    Matrix c = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) c(0, j) = -poly[static_cast<std::size_t>(j + 1)];
    for (Eigen::Index i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    const auto r = eig_general(DenseOperator(c));
    EXPECT_LT(oracle::match_distance(r.eigenvalues, roots), 1e-12);
    for (std::size_t i = 1; i < r.eigenvalues.size(); ++i) EXPECT_LE(r.eigenvalues[i - 1].real(), r.eigenvalues[i].real());
}

TEST(EigGeneral, EigenvectorsSatisfyEigenEquation) {
    const Matrix a = random_matrix(10, 11);
    const auto r = eig_general(DenseOperator(a), true);
    ASSERT_TRUE(r.eigenvectors.has_value());
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
        const Vector v = r.eigenvectors->col(j);
        EXPECT_LT((a * v - r.eigenvalues[static_cast<std::size_t>(j)] * v).norm(), 1e-11);
    }
}

TEST(EigHermitian, RealAndComplexPathsAgreeWithEigen) {
    const Matrix h = random_hermitian(12, 5);
    const auto r = eig_hermitian(DenseOperator(h, true), true);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    for (Eigen::Index i = 0; i < h.rows(); ++i) EXPECT_NEAR(r.eigenvalues[static_cast<std::size_t>(i)].real(), es.eigenvalues()[i], 1e-12);
    const Matrix hr = h.real().cast<cplx>();
    const Matrix sym = (hr + hr.transpose()) / 2.0;
    const auto rr = eig_hermitian(DenseOperator(sym, true));
    Eigen::SelfAdjointEigenSolver<Matrix> es2(sym);
    for (Eigen::Index i = 0; i < h.rows(); ++i) EXPECT_NEAR(rr.eigenvalues[static_cast<std::size_t>(i)].real(), es2.eigenvalues()[i], 1e-12);
    EXPECT_THROW(eig_hermitian(DenseOperator(random_matrix(3, 1))), ValidationError);
}

TEST(NullSpace, ProjectorOfKnownRank) {
    // P = Q Q^dagger for a random 9x3 isometry: null space has dimension 6.
    Eigen::HouseholderQR<Matrix> qr(random_matrix(9, 21));
    const Matrix q = qr.householderQ() * Matrix::Identity(9, 3);
    const Matrix p = q * q.adjoint();
    const Matrix ns = null_space(DenseOperator(p, true));
    EXPECT_EQ(ns.cols(), 6);
    EXPECT_LT((p * ns).cwiseAbs().maxCoeff(), 1e-12);
    const Matrix ns_general = null_space(DenseOperator(p));
    EXPECT_EQ(ns_general.cols(), 6);
    const auto r = eig_hermitian(DenseOperator(p, true));
    EXPECT_EQ(r.null_dim, 6u);
    EXPECT_NEAR(r.gap, 1.0, 1e-12);
}

TEST(NullSpace, ConstraintKernelOfStackedRows) {
    // x0 + x1 = 0, x2 = 0 on C^4: kernel spanned by (1,-1,0,0) and e3.
    Matrix c = Matrix::Zero(2, 4);
    c(0, 0) = 1;
    c(0, 1) = 1;
    c(1, 2) = 1;
    const Matrix k = constraint_kernel(c);
    EXPECT_EQ(k.cols(), 2);
    EXPECT_LT((c * k).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Levels, GroupingAndGramRank) {
    const auto lv = group_levels(std::vector<double>{0.0, 1e-12, 1.0, 1.0, 2.5}, 1e-9);
    ASSERT_EQ(lv.size(), 3u);
    EXPECT_EQ(lv[0].degeneracy, 2u);
    EXPECT_EQ(lv[1].degeneracy, 2u);
    Matrix cols(3, 3);
    cols << 1, 0, 1, 0, 1, 1, 0, 0, 0;
    EXPECT_EQ(gram_rank(cols), 2u);
}

TEST(Trajectory, StepCountRounding) {
    EXPECT_EQ(brownian_steps(0.3, 0.01), 30);
    EXPECT_EQ(brownian_steps(0.0, 0.01), 0);
    EXPECT_THROW(brownian_steps(0.305, 0.01), ConfigError);
    EXPECT_THROW(brownian_steps(1.0, 0.0), ConfigError);
    EXPECT_THROW(brownian_steps(-1.0, 0.1), ConfigError);
}

TEST(Trajectory, EvolutionIsUnitaryAndSeeded) {
    const auto s = ReplicaSpace::physical(2);
    std::vector<Matrix> ops{pauli_op(s, 0, 0, Axis::x).matrix(), pauli_op(s, 0, 1, Axis::z).matrix()};
    const BrownianGenerator gen(ops, 0.5);
    CounterRng a(9, {1}), b(9, {1}), c(9, {2});
    const Matrix ua = gen.evolve(20, 0.01, a), ub = gen.evolve(20, 0.01, b), uc = gen.evolve(20, 0.01, c);
    EXPECT_LT(unitarity_defect(ua), 1e-12);
    EXPECT_EQ((ua - ub).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GT((ua - uc).cwiseAbs().maxCoeff(), 1e-3);
    const BrownianGenerator zero(ops, 0.0);
    EXPECT_EQ((zero.evolve(5, 0.1, a) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Rng, NormalMoments) {
    CounterRng rng(42, {0});
    const int n = 200000;
    double s1 = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s1 += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.015);
    EXPECT_NEAR(s4 / n, 3.0, 0.06);
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
}
