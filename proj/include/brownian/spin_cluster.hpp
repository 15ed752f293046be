#pragma once

// Brownian 2-local spin cluster
//
//     H(t) = sum_{i<j, alpha, beta} J_{ij alpha beta}(t) sigma_{i alpha} sigma_{j beta},
//     E[J(t) J(t')] = (J / N) delta(t - t'),
//
// its replica effective Hamiltonian
//
//     H_k = (J / 2N) sum_{i<j, alpha beta} ( sum_r [ s^r_{i a} s^r_{j b} - (s^rbar_{i a} s^rbar_{j b})^* ] )^2,
//
// whose thermal partition function at beta = 2t is the k-th frame potential,
// and the large-N closed forms for that frame potential.

#include <algorithm>
#include <array>
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

namespace brownian::spin {

inline constexpr int kDefaultQubitGuard = 14;
inline constexpr std::uint64_t kStreamTag = 0x5350494eULL;  // "SPIN"

struct BrownianSpinParams {
    int N = 2;
    double J = 1.0;
    double dt = 0.01;
    double t = 0.0;
    int k = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (N < 2) throw ValidationError("N must be >= 2, got " + std::to_string(N));
        if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
        if (!(t >= 0.0)) throw ValidationError("t must be >= 0");
        if (k < 1) throw ValidationError("k must be >= 1");
        if (N < 62 && static_cast<double>(k) >= std::ldexp(1.0, N) + 1.0)
            throw ValidationError("k must satisfy k < 2^N + 1");
    }
    long steps() const { return brownian_steps(t, dt); }
};

/// Forward replica r is paired with backward replica perm[r].
struct PairingLabel {
    std::vector<int> perm;

    static PairingLabel identity(int k) {
        PairingLabel p;
        p.perm.resize(static_cast<std::size_t>(k));
        std::iota(p.perm.begin(), p.perm.end(), 0);
        return p;
    }

    int k() const noexcept { return static_cast<int>(perm.size()); }

    void validate(int k) const {
        if (static_cast<int>(perm.size()) != k)
            throw ValidationError("pairing has " + std::to_string(perm.size()) + " entries, expected " +
                                  std::to_string(k));
        std::vector<bool> seen(perm.size(), false);
        for (int v : perm) {
            if (v < 0 || v >= k || seen[static_cast<std::size_t>(v)])
                throw ValidationError("pairing is not a permutation");
            seen[static_cast<std::size_t>(v)] = true;
        }
    }
};

/// All k! pairings in lexicographic order.
inline std::vector<PairingLabel> all_pairings(int k) {
    std::vector<PairingLabel> out;
    PairingLabel p = PairingLabel::identity(k);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.perm.begin(), p.perm.end()));
    return out;
}

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

// ---------------------------------------------------------------------------
// Trajectories

/// The 9 N(N-1)/2 two-body Pauli products on the physical 2^N space.
inline BrownianGenerator physical_generator(int N, double J) {
    const auto space = ReplicaSpace::physical(N);
    std::vector<Matrix> ops;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            for (Axis a : kAxes)
                for (Axis b : kAxes)
                    ops.push_back((pauli_sum(space, 0, i, a) * pauli_sum(space, 0, j, b)).to_matrix());
    return BrownianGenerator(std::move(ops), J / N);
}

/// U(t) for trajectory `index` of the stream keyed by params.seed.
inline DenseOperator sample_brownian_unitary(const BrownianSpinParams& params, std::uint64_t index = 0) {
    params.validate();
    const long steps = params.steps();
    const auto gen = physical_generator(params.N, params.J);
    CounterRng rng(params.seed, {kStreamTag, index});
    return DenseOperator(gen.evolve(steps, params.dt, rng));
}

/// Ensemble of U(t); the folded draw evolves the same stream layout to 2t.
inline EnsembleSampler brownian_sampler(const BrownianSpinParams& params) {
    params.validate();
    const long steps = params.steps();
    const double dt = params.dt;
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

// ---------------------------------------------------------------------------
// Replica effective Hamiltonian

inline void check_guard(int n_qubits, int guard) {
    if (n_qubits > guard)
        throw SizeError("dense replica operator needs 2kN = " + std::to_string(n_qubits) +
                        " qubits, guard is " + std::to_string(guard));
}

inline PauliSum effective_hamiltonian_sum(int N, double J, int k, int guard = kDefaultQubitGuard) {
    if (N < 2) throw ValidationError("N must be >= 2");
    if (k < 1) throw ValidationError("k must be >= 1");
    check_guard(2 * k * N, guard);
    const auto space = ReplicaSpace::replicated(N, k);
    PauliSum h(space.n_factors());
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            for (Axis a : kAxes)
                for (Axis b : kAxes) {
                    const auto diff = replica_difference(space, [&](int c) {
                        return pauli_sum(space, c, i, a) * pauli_sum(space, c, j, b);
                    });
                    h += diff * diff;
                }
    h *= J / (2.0 * N);
    return h.prune();
}

inline DenseOperator build_effective_hamiltonian(int N, double J, int k, int guard = kDefaultQubitGuard) {
    return effective_hamiltonian_sum(N, J, k, guard).to_dense(true);
}

/// Ascending eigenvalues of H_k.
inline std::vector<double> effective_spectrum(int N, double J, int k, int guard = kDefaultQubitGuard) {
    const auto r = eig_hermitian(build_effective_hamiltonian(N, J, k, guard));
    return r.real_parts();
}

/// sum_lambda exp(-2 t lambda), accumulated from the top of the spectrum down.
inline double frame_potential_from_spectrum(const std::vector<double>& ascending, double t) {
    double acc = 0.0;
    for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) acc += std::exp(-2.0 * t * *it);
    return acc;
}

/// tr exp(-2t H_k)
inline double exact_frame_potential(int N, double J, int k, double t, int guard = kDefaultQubitGuard) {
    if (!(t >= 0.0)) throw ValidationError("t must be >= 0");
    return frame_potential_from_spectrum(effective_spectrum(N, J, k, guard), t);
}

inline double factorial(int k) {
    return std::tgamma(static_cast<double>(k) + 1.0);
}

/// k! exp(3 N k e^{-12 J T}), with T = 2t the folded evolution time.
inline double analytic_frame_potential(int N, double J, int k, double T) {
    return factorial(k) * std::exp(3.0 * N * k * std::exp(-12.0 * J * T));
}

/// (1 + 3 e^{-12 J T})^N
inline double analytic_frame_potential_k1(int N, double J, double T) {
    return std::pow(1.0 + 3.0 * std::exp(-12.0 * J * T), N);
}

// ---------------------------------------------------------------------------
// Pairing states

/// prod_{r, i} |inf>_{r, perm(r)bar} at site i, with |inf> = (|00> + |11>)/sqrt 2.
inline Vector pairing_state(const ReplicaSpace& space, const PairingLabel& pairing) {
    if (!space.is_qubit()) throw ValidationError("pairing_state requires a qubit space");
    const int k = space.k();
    if (k < 1) throw ValidationError("pairing_state requires a replicated space");
    pairing.validate(k);
    const int n = space.n_sites();
    const int forward_bits = k * n;
    if (forward_bits > 30) throw SizeError("pairing_state: too many forward qubits");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.total_dim()));
    const double amp = std::pow(2.0, -0.5 * forward_bits);
    const int nq = space.n_factors();
    for (std::uint64_t f = 0; f < (std::uint64_t{1} << forward_bits); ++f) {
        std::uint64_t idx = 0;
        for (int r = 0; r < k; ++r)
            for (int i = 0; i < n; ++i) {
                const std::uint64_t bit = (f >> (forward_bits - 1 - (r * n + i))) & 1u;
                if (!bit) continue;
                idx |= std::uint64_t{1} << (nq - 1 - space.factor(space.forward(r), i));
                idx |= std::uint64_t{1} << (nq - 1 - space.factor(space.backward(pairing.perm[static_cast<std::size_t>(r)]), i));
            }
        v[static_cast<Eigen::Index>(idx)] = amp;
    }
    return v;
}

/// (I + sigma^1_i . sigma^2_i) / 2 exchanging site i between forward replicas 0 and 1.
inline PauliSum swap_operator(const ReplicaSpace& space, int site) {
    if (space.k() < 2) throw ValidationError("swap_operator needs k >= 2");
    PauliSum s = PauliSum::identity(space.n_factors());
    for (Axis a : kAxes)
        s += pauli_sum(space, space.forward(0), site, a) * pauli_sum(space, space.forward(1), site, a);
    s *= 0.5;
    return s;
}

/// <psi|H_2|psi>/<psi|psi> for psi = SWAP_{site,12} applied to the identity pairing state.
inline double domain_wall_energy(int N, double J, int site, int guard = kDefaultQubitGuard) {
    if (site < 0 || site >= N) throw IndexError("site outside [0,N)");
    const auto h = effective_hamiltonian_sum(N, J, 2, guard);
    const auto space = ReplicaSpace::replicated(N, 2);
    const Vector psi = swap_operator(space, site).apply(pairing_state(space, PairingLabel::identity(2)));
    return (psi.dot(h.apply(psi)) / psi.squaredNorm()).real();
}

/// (1/24 J) (3 (log 2 + 1/e) k N + 2 log(1/eps))
inline double design_time_spin(int N, int k, double J, double eps_diamond) {
    if (!(eps_diamond > 0.0 && eps_diamond < 1.0)) throw ValidationError("eps_diamond must lie in (0,1)");
    if (!(J > 0.0)) throw ValidationError("J must be > 0");
    return (3.0 * (std::log(2.0) + std::exp(-1.0)) * k * N + 2.0 * std::log(1.0 / eps_diamond)) / (24.0 * J);
}

}  // namespace brownian::spin
