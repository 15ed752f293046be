#include <gtest/gtest.h>

#include "brownian/fp_estimator.hpp"
#include "brownian/spin_cluster.hpp"
#include "brownian/syk_cluster.hpp"
#include "oracles.hpp"

using namespace brownian;
using namespace brownian::syk;

namespace {

/// H_eff from dense Jordan-Wigner Majoranas: global index contour * N + flavor.
Matrix kron_syk_hamiltonian(int N, double J, int k) {
    const int n = k * N;
    const auto d = Eigen::Index{1} << n;
    auto psi = [&](int c, int f) { return oracle::majorana(n, c * N + f); };
    Matrix h = Matrix::Zero(d, d);
    const double var = 48.0 * J / (N * N * N);
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b)
            for (int c = b + 1; c < N; ++c)
                for (int e = c + 1; e < N; ++e) {
                    Matrix diff = Matrix::Zero(d, d);
                    for (int r = 0; r < k; ++r) {
                        auto q = [&](int ct) { return Matrix(psi(ct, a) * psi(ct, b) * psi(ct, c) * psi(ct, e)); };
                        diff += q(r) - q(k + r).conjugate();
                    }
                    h += diff * diff;
                }
    return h * (var / 2.0);
}

}  // namespace

TEST(SykParams, Validation) {
    SykParams p;
    EXPECT_NO_THROW(p.validate());
    p.N = 5;
    EXPECT_THROW(p.validate(), ValidationError);
    p.N = 4;
    p.k = 5;
    EXPECT_THROW(p.validate(), ValidationError);
    EXPECT_NEAR(coupling_variance(4, 1.0), 48.0 / 64.0, 1e-15);
}

TEST(SykMajorana, LeftRightCliffordAlgebra) {
    const auto s = replica_space(4, 1);
    std::vector<Matrix> ops;
    for (int j = 0; j < 4; ++j) ops.push_back(left_majorana(s, 0, j).to_matrix());
    for (int j = 0; j < 4; ++j) ops.push_back(right_majorana(s, 0, j).to_matrix());
    for (std::size_t a = 0; a < ops.size(); ++a)
        for (std::size_t b = 0; b < ops.size(); ++b) {
            const Matrix anti = ops[a] * ops[b] + ops[b] * ops[a];
            const Matrix ref = (a == b ? 1.0 : 0.0) * Matrix::Identity(16, 16);
            ASSERT_LT((anti - ref).cwiseAbs().maxCoeff(), 1e-14);
        }
}

TEST(SykHamiltonian, MatchesKroneckerOracle) {
    for (auto [N, k] : {std::pair{4, 1}, std::pair{6, 1}, std::pair{4, 2}}) {
        const Matrix ref = kron_syk_hamiltonian(N, 1.3, k);
        EXPECT_LT((build_syk_effective_hamiltonian(N, 1.3, k).matrix() - ref).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(SykHamiltonian, PsdAndCommutesWithContourParity) {
    const auto hs = effective_hamiltonian_sum(6, 1.0, 1);
    const Matrix h = hs.to_matrix();
    const auto s = replica_space(6, 1);
    for (int c = 0; c < 2; ++c) {
        const Matrix p = contour_parity(s, c).to_matrix();
        EXPECT_LT((h * p - p * h).cwiseAbs().maxCoeff(), 1e-11);
    }
    const auto r = eig_hermitian(DenseOperator(h, true));
    EXPECT_GT(r.eigenvalues.front().real(), -1e-10);
    EXPECT_EQ(r.null_dim, 2u);
    EXPECT_THROW(effective_hamiltonian_sum(8, 1.0, 2), SizeError);
}

TEST(SykGroundStates, TwoMajoranaKernelOracle) {
    // N=2: stack the two constraints and take their kernel directly.
    const auto s = replica_space(2, 1);
    Matrix stacked(8, 4);
    for (int j = 0; j < 2; ++j)
        stacked.block(4 * j, 0, 4, 4) = (left_majorana(s, 0, j) + I_UNIT * right_majorana(s, 0, j)).to_matrix();
    const Matrix kernel = constraint_kernel(stacked);
    ASSERT_EQ(kernel.cols(), 1);
    const Vector v = ground_pair_state(s, {0}, {1});
    EXPECT_NEAR(std::abs(kernel.col(0).dot(v)), 1.0, 1e-12);
    EXPECT_LT(pair_constraint_residual(s, {0}, {1}, v), 1e-12);
}

TEST(SykGroundStates, FamilyIsNullAndHasFullRank) {
    const auto s = replica_space(4, 2);
    const auto h = effective_hamiltonian_sum(4, 1.0, 2);
    const Matrix fam = ground_state_family(s);
    EXPECT_EQ(fam.cols(), 8);
    EXPECT_EQ(gram_rank(fam), 8u);
    for (Eigen::Index c = 0; c < fam.cols(); ++c) EXPECT_LT(h.apply(fam.col(c)).norm(), 1e-9);
    std::vector<int> perm{1, 0}, eta{1, -1};
    EXPECT_LT(pair_constraint_residual(s, perm, eta, ground_pair_state(s, perm, eta)), 1e-9);
    EXPECT_THROW(ground_pair_state(s, {0, 0}, {1, 1}), ValidationError);
    EXPECT_THROW(ground_pair_state(s, {0, 1}, {1, 2}), ValidationError);
}

TEST(SykExcitation, SingleMajoranaEigenvectorAtFiniteN) {
    const int N = 6;
    const auto s = replica_space(N, 1);
    const auto h = effective_hamiltonian_sum(N, 1.0, 1);
    const Vector gs = ground_pair_state(s, {0}, {1});
    const double E = syk_excitation_energy(N, 1.0);
    EXPECT_NEAR(E, 60.0 / 216.0, 1e-15);
    for (int i = 0; i < N; ++i) {
        const Vector v = left_majorana(s, 0, i).apply(gs);
        EXPECT_LT((h.apply(v) - E * v).norm(), 1e-9 * v.norm());
    }
    EXPECT_NEAR(syk_excitation_energy(4000, 2.0), 2.0, 1e-2);
}

TEST(QuadraticSyk, GroundCountAndPsd) {
    const auto r = eig_hermitian(build_quadratic_syk_effective_hamiltonian(4, 1.0, 1));
    EXPECT_EQ(r.null_dim, 2u);
    EXPECT_GT(r.eigenvalues.front().real(), -1e-10);
}

TEST(OnshellActions, Limits) {
    const auto a0 = onshell_actions(10, 1.0, 0.0);
    EXPECT_NEAR(std::exp(-a0.I0), 1024.0, 1e-9);
    EXPECT_NEAR(std::exp(-a0.Iwh), 1024.0, 1e-9);
    EXPECT_NEAR(onshell_actions(10, 1.0, 2.0).I0, -10.0 * (std::log(2.0) - 0.25), 1e-12);
    EXPECT_NEAR(onshell_actions(10, 1.0, 2.0).I0, -4.4315, 1e-4);
    for (double T : {6.0, 10.0}) {
        const auto a = onshell_actions(10, 1.0, T);
        EXPECT_LT(a.Iwh, 0.0);
        EXPECT_LT(std::abs(a.Iwh), 10.0 * std::exp(-T) * 1.01);
    }
    EXPECT_THROW(onshell_actions(10, 1.0, -1.0), ValidationError);
}

TEST(SaddleFramePotential, LimitsAndAsymptotics) {
    EXPECT_NEAR(saddle_frame_potential(4, 1.0, 2, 0.0), 256.0, 1e-9);
    EXPECT_NEAR(saddle_frame_potential(6, 1.0, 1, 0.0), 64.0, 1e-9);
    EXPECT_NEAR(saddle_frame_potential(10, 1.0, 2, 200.0), 8.0, 1e-6);
    for (double T : {8.0, 10.0, 14.0}) {
        const double full = saddle_frame_potential(20, 1.0, 2, T), asym = asymptotic_frame_potential(20, 1.0, 2, T);
        EXPECT_LT(std::abs(full - asym) / asym, 0.01) << T;
    }
    for (double T = stability_time(1.0); T < 20.0; T += 0.5) EXPECT_GE(saddle_frame_potential(8, 1.0, 3, T), 48.0 - 1e-9);
}

TEST(BosonGap, ThresholdAndLimit) {
    EXPECT_NEAR(stability_time(1.0), 0.33647, 1e-5);
    EXPECT_NEAR(boson_gap(1.0, stability_time(1.0)), 0.0, 1e-6);
    EXPECT_NEAR(boson_gap(1.0, 80.0), 2.0 * std::sqrt(5.0), 1e-12);
    try {
        boson_gap(1.0, 0.1);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("wormhole unstable"), std::string::npos);
    }
}

TEST(SykDesignTime, Formula) {
    EXPECT_NEAR(design_time_syk(10, 1, 1.0, 0.01), 11.643, 1e-3);
    const double a = design_time_syk(10, 1, 1.0, 0.5), b = design_time_syk(10, 2, 1.0, 0.5), c = design_time_syk(10, 3, 1.0, 0.5);
    EXPECT_NEAR(c - b, b - a, 1e-12);
    EXPECT_NEAR(design_time_syk(10, 1, 1.0, 1.0 - 1e-15), (1.5 * std::log(2.0) + std::exp(-1.0)) * 5.0, 1e-9);
}

TEST(SykMonteCarlo, FoldedMatchesExactTrace) {
    SykParams p{4, 1.0, 1, 3};
    const double t = 0.5;
    const auto sampler = brownian_sampler(p, t, 0.01);
    const auto spec = eig_hermitian(build_syk_effective_hamiltonian(4, 1.0, 1)).real_parts();
    const double exact = spin::frame_potential_from_spectrum(spec, t);
    const auto est = mc_frame_potential(sampler, 1, 400, 8, Estimator::folded);
    EXPECT_LT(std::abs(est.mean - exact), 4.0 * est.std_error);
}
