#pragma once

// Brownian SYK cluster of N Majoranas (D = 2^{N/2})
//
//     H(t) = sum_{i<j<k<l} J_{ijkl}(t) psi_i psi_j psi_k psi_l,
//     E[J_{ijkl}(t) J_{ijkl}(t')] = (2^3 3! J / N^3) delta(t - t'),
//
// with {psi_i, psi_j} = delta_ij. On the 2k replica contours the left
// Majoranas are psi^r_{L,i} = psi_i on forward contour r and the right ones
// psi^r_{R,i} = (psi_i on backward contour r)^*, so that
//
//     H_eff = (Var / 2) sum_{i<j<k<l} ( sum_r [ O^r_{ijkl} - (O^rbar_{ijkl})^* ] )^2.
//
// Ground states are the Gaussian states annihilated by
// psi^r_{L,j} + i eta_r psi^{pi(r)}_{R,j} for a pairing pi and signs eta.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <vector>

#include "brownian/errors.hpp"
#include "brownian/fp_estimator.hpp"
#include "brownian/replica_linops.hpp"
#include "brownian/rng.hpp"
#include "brownian/trajectory.hpp"

namespace brownian::syk {

inline constexpr int kDefaultQubitGuard = 14;
inline constexpr std::uint64_t kStreamTag = 0x53594bULL;  // "SYK"

struct SykParams {
    int N = 4;
    double J = 1.0;
    int k = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (N < 4 || N % 2 != 0) throw ValidationError("N must be even and >= 4, got " + std::to_string(N));
        if (k < 1) throw ValidationError("k must be >= 1");
        if (N / 2 < 62 && static_cast<double>(k) >= std::ldexp(1.0, N / 2) + 1.0)
            throw ValidationError("k must satisfy k < 2^{N/2} + 1");
    }
};

/// 2^3 3! J / N^3
inline double coupling_variance(int N, double J) {
    return 48.0 * J / (static_cast<double>(N) * N * N);
}

inline void check_majorana_count(int N) {
    if (N < 2 || N % 2 != 0) throw ValidationError("Majorana count must be even and >= 2");
}

inline void check_guard(int n_qubits, int guard) {
    if (n_qubits > guard)
        throw SizeError("dense replica operator needs kN = " + std::to_string(n_qubits) + " qubits, guard is " +
                        std::to_string(guard));
}

inline ReplicaSpace replica_space(int N, int k) {
    check_majorana_count(N);
    return ReplicaSpace::replicated(N / 2, k);
}

/// psi^r_{L,j}
inline PauliSum left_majorana(const ReplicaSpace& space, int r, int j) {
    return majorana_sum(space, space.forward(r), j);
}

/// psi^r_{R,j} = (psi_j on backward contour r)^*
inline PauliSum right_majorana(const ReplicaSpace& space, int r, int j) {
    return majorana_sum(space, space.backward(r), j).conj();
}

template <typename Visit>
void for_each_quartet(int N, Visit&& visit) {
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b)
            for (int c = b + 1; c < N; ++c)
                for (int d = c + 1; d < N; ++d) visit(a, b, c, d);
}

inline PauliSum quartet(const ReplicaSpace& space, int contour, int a, int b, int c, int d) {
    return majorana_sum(space, contour, a) * majorana_sum(space, contour, b) * majorana_sum(space, contour, c) *
           majorana_sum(space, contour, d);
}

inline PauliSum effective_hamiltonian_sum(int N, double J, int k, int guard = kDefaultQubitGuard) {
    check_majorana_count(N);
    if (N < 4) throw ValidationError("the 4-body model needs N >= 4");
    if (k < 1) throw ValidationError("k must be >= 1");
    check_guard(k * N, guard);
    const auto space = replica_space(N, k);
    PauliSum h(space.n_factors());
    for_each_quartet(N, [&](int a, int b, int c, int d) {
        const auto diff = replica_difference(space, [&](int ct) { return quartet(space, ct, a, b, c, d); });
        h += diff * diff;
    });
    h *= coupling_variance(N, J) / 2.0;
    return h.prune();
}

inline DenseOperator build_syk_effective_hamiltonian(int N, double J, int k, int guard = kDefaultQubitGuard) {
    return effective_hamiltonian_sum(N, J, k, guard).to_dense(true);
}

/// (J / N) sum_{i<j} ( sum_{c=1}^{2k} i psi^c_i psi^c_j )^2, the contour sum running over all 2k contours.
inline PauliSum quadratic_effective_hamiltonian_sum(int N, double J, int k, int guard = kDefaultQubitGuard) {
    check_majorana_count(N);
    if (k < 1) throw ValidationError("k must be >= 1");
    check_guard(k * N, guard);
    const auto space = replica_space(N, k);
    PauliSum h(space.n_factors());
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            PauliSum o(space.n_factors());
            for (int c = 0; c < space.n_contours(); ++c)
                o += I_UNIT * (majorana_sum(space, c, i) * majorana_sum(space, c, j));
            h += o * o;
        }
    h *= J / N;
    return h.prune();
}

inline DenseOperator build_quadratic_syk_effective_hamiltonian(int N, double J, int k,
                                                               int guard = kDefaultQubitGuard) {
    return quadratic_effective_hamiltonian_sum(N, J, k, guard).to_dense(true);
}

/// prod_q Z_q over the qubits of one contour: that contour's fermion parity.
inline PauliSum contour_parity(const ReplicaSpace& space, int contour) {
    PauliSum p = PauliSum::identity(space.n_factors());
    for (int s = 0; s < space.n_sites(); ++s) p = p * pauli_sum(space, contour, s, Axis::z);
    return p;
}

// ---------------------------------------------------------------------------
// Ground states

/// Normalized state annihilated by psi^r_{L,j} + i eta_r psi^{pi(r)}_{R,j} for all r, j.
/// Built by applying the projectors 1/2 - i eta psi_L psi_R to a seed vector;
/// the phase is fixed so the largest component is real and positive.
inline Vector ground_pair_state(const ReplicaSpace& space, const std::vector<int>& perm,
                                const std::vector<int>& eta) {
    const int k = space.k();
    if (k < 1) throw ValidationError("ground_pair_state requires a replicated space");
    if (static_cast<int>(perm.size()) != k || static_cast<int>(eta.size()) != k)
        throw ValidationError("ground_pair_state: pairing and signs need k entries");
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (int v : perm) {
        if (v < 0 || v >= k || seen[static_cast<std::size_t>(v)]) throw ValidationError("pairing is not a permutation");
        seen[static_cast<std::size_t>(v)] = true;
    }
    for (int e : eta)
        if (e != 1 && e != -1) throw ValidationError("eta entries must be +1 or -1");

    const int flavors = 2 * space.n_sites();
    std::vector<PauliSum> projectors;
    for (int r = 0; r < k; ++r)
        for (int j = 0; j < flavors; ++j) {
            const auto x = left_majorana(space, r, j) * right_majorana(space, perm[static_cast<std::size_t>(r)], j);
            projectors.push_back(PauliSum::identity(space.n_factors(), 0.5) -
                                 (I_UNIT * static_cast<double>(eta[static_cast<std::size_t>(r)])) * x);
        }
    const auto dim = static_cast<Eigen::Index>(space.total_dim());
    auto project = [&](Vector v) {
        for (const auto& p : projectors) v = p.apply(v);
        return v;
    };
    Vector v = project(Vector::Ones(dim));
    for (Eigen::Index b = 0; v.norm() < 1e-6 && b < dim; ++b) {
        Vector seed = Vector::Zero(dim);
        seed[b] = 1.0;
        v = project(seed);
    }
    if (v.norm() < 1e-6) throw NumericalError("ground_pair_state: projection vanished");
    v.normalize();
    Eigen::Index top = 0;
    v.cwiseAbs().maxCoeff(&top);
    v *= std::abs(v[top]) / v[top];
    return v;
}

/// Max residual |(psi_L + i eta psi_R) v| over all k N constraints.
inline double pair_constraint_residual(const ReplicaSpace& space, const std::vector<int>& perm,
                                       const std::vector<int>& eta, const Vector& v) {
    double worst = 0.0;
    for (int r = 0; r < space.k(); ++r)
        for (int j = 0; j < 2 * space.n_sites(); ++j) {
            const auto c = left_majorana(space, r, j) +
                           (I_UNIT * static_cast<double>(eta[static_cast<std::size_t>(r)])) *
                               right_majorana(space, perm[static_cast<std::size_t>(r)], j);
            worst = std::max(worst, c.apply(v).norm());
        }
    return worst;
}

/// All 2^k k! ground states as columns, pairings in lexicographic order, signs
/// enumerated by bitmask (bit r set -> eta_r = -1).
inline Matrix ground_state_family(const ReplicaSpace& space) {
    const int k = space.k();
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Vector> cols;
    do {
        for (int mask = 0; mask < (1 << k); ++mask) {
            std::vector<int> eta(static_cast<std::size_t>(k));
            for (int r = 0; r < k; ++r) eta[static_cast<std::size_t>(r)] = (mask >> r) & 1 ? -1 : 1;
            cols.push_back(ground_pair_state(space, perm, eta));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    Matrix m(static_cast<Eigen::Index>(space.total_dim()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
    return m;
}

/// Energy of psi_{L,i} |GS> at finite N: each of the C(N-1,3) quartets that
/// contain i contributes Var / 8, giving J (N-1)(N-2)(N-3) / N^3 (-> J at large N).
inline double syk_excitation_energy(int N, double J) {
    const double n = N;
    return J * (n - 1.0) * (n - 2.0) * (n - 3.0) / (n * n * n);
}

// ---------------------------------------------------------------------------
// Saddle-point frame potential

struct OnshellActions {
    double I0 = 0.0;
    double Iwh = 0.0;
    double T = 0.0;
};

/// -I_wh / N = log(2 cosh(JT/2)) - JT/2 = log(1 + e^{-JT});  -I_0 / N = log 2 - JT/8.
inline OnshellActions onshell_actions(int N, double J, double T) {
    if (!(T >= 0.0)) throw ValidationError("T must be >= 0");
    OnshellActions a;
    a.T = T;
    a.Iwh = -N * std::log1p(std::exp(-J * T));
    a.I0 = -N * (std::log(2.0) - J * T / 8.0);
    return a;
}

/// 2 atanh(1/6) / J
inline double stability_time(double J) {
    if (!(J > 0.0)) throw ValidationError("J must be > 0");
    return 2.0 * std::atanh(1.0 / 6.0) / J;
}

/// E(T) = 2J sqrt(6 tanh(JT/2) - 1)
inline double boson_gap(double J, double T) {
    const double t_star = stability_time(J);
    if (T < t_star) throw DomainError("wormhole unstable: T = " + std::to_string(T) + " < T* = " + std::to_string(t_star));
    const double radicand = std::max(0.0, 6.0 * std::tanh(J * T / 2.0) - 1.0);
    return 2.0 * J * std::sqrt(radicand);
}

/// sum_{m=0}^{k} 2^m m! C(k,m)^2 e^{-(k-m) I_0} e^{-m I_wh}; only m=0 below T*.
inline double saddle_frame_potential(int N, double J, int k, double T) {
    if (k < 1) throw ValidationError("k must be >= 1");
    const auto a = onshell_actions(N, J, T);
    const int m_max = T < stability_time(J) ? 0 : k;
    std::vector<double> logs;
    for (int m = 0; m <= m_max; ++m) {
        const double log_binom = std::lgamma(k + 1.0) - std::lgamma(m + 1.0) - std::lgamma(k - m + 1.0);
        logs.push_back(m * std::log(2.0) + std::lgamma(m + 1.0) + 2.0 * log_binom - (k - m) * a.I0 - m * a.Iwh);
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - top);
    return std::exp(top) * acc;
}

/// 2^k k! (1 + k N e^{-JT})
inline double asymptotic_frame_potential(int N, double J, int k, double T) {
    return std::ldexp(std::tgamma(k + 1.0), k) * (1.0 + k * N * std::exp(-J * T));
}

/// (1/2J) ((1.5 log 2 + 1/e) N k + 2 log(1/eps))
inline double design_time_syk(int N, int k, double J, double eps_diamond) {
    if (!(eps_diamond > 0.0 && eps_diamond < 1.0)) throw ValidationError("eps_diamond must lie in (0,1)");
    if (!(J > 0.0)) throw ValidationError("J must be > 0");
    return ((1.5 * std::log(2.0) + std::exp(-1.0)) * N * k + 2.0 * std::log(1.0 / eps_diamond)) / (2.0 * J);
}

// ---------------------------------------------------------------------------
// Trajectories

/// The C(N,4) quartets on the physical 2^{N/2} space.
inline BrownianGenerator physical_generator(int N, double J) {
    check_majorana_count(N);
    const auto space = ReplicaSpace::physical(N / 2);
    std::vector<Matrix> ops;
    for_each_quartet(N, [&](int a, int b, int c, int d) { ops.push_back(quartet(space, 0, a, b, c, d).to_matrix()); });
    return BrownianGenerator(std::move(ops), coupling_variance(N, J));
}

/// Ensemble of U(t) = prod exp(-i H_step dt); the folded draw evolves to 2t.
inline EnsembleSampler brownian_sampler(const SykParams& params, double t, double dt) {
    params.validate();
    const long steps = brownian_steps(t, dt);
    auto gen = std::make_shared<const BrownianGenerator>(physical_generator(params.N, params.J));
    EnsembleSampler s;
    s.dim = static_cast<std::size_t>(gen->dim());
    s.draw = [gen, steps, dt](std::uint64_t key, std::uint64_t index) {
        CounterRng rng(key, {kStreamTag, index});
        return gen->evolve(steps, dt, rng);
    };
    s.draw_folded = [gen, steps, dt](std::uint64_t key, std::uint64_t index) {
        CounterRng rng(key, {kStreamTag, index});
        return gen->evolve(2 * steps, dt, rng);
    };
    return s;
}

}  // namespace brownian::syk
