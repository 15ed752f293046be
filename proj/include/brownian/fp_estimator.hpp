#pragma once

// Frame potentials
//
//     F^(k) = E_{U,V} |tr(V^dagger U)|^{2k}
//
// by Monte Carlo over an arbitrary unitary ensemble, Haar baselines, invariant
// state counting, and the 2-norm bounds on diamond distance to a k-design.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "brownian/errors.hpp"
#include "brownian/replica_linops.hpp"
#include "brownian/rng.hpp"

namespace brownian {

using u128 = unsigned __int128;

enum class Estimator { paired, folded };

inline const char* to_string(Estimator e) { return e == Estimator::paired ? "paired" : "folded"; }

struct FrameEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    int k = 1;
    Estimator estimator = Estimator::paired;
};

/// (key, index) -> unitary. `draw_folded`, when set, returns the ensemble
/// element whose trace replaces tr(V^dagger U) in the folded estimator
/// (e.g. U(2t) for a Brownian circuit); otherwise `draw` is used.
struct EnsembleSampler {
    using Draw = std::function<Matrix(std::uint64_t key, std::uint64_t index)>;
    std::size_t dim = 0;
    Draw draw;
    Draw draw_folded;
};

inline constexpr double kUnitarityTolerance = 1e-9;

namespace detail {

inline double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline void check_unitary(const Matrix& u, std::size_t dim, std::uint64_t index) {
    if (static_cast<std::size_t>(u.rows()) != dim || static_cast<std::size_t>(u.cols()) != dim)
        throw ValidationError("sample " + std::to_string(index) + " has wrong dimension");
    const double defect = (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (!(defect < kUnitarityTolerance))
        throw ValidationError("sample " + std::to_string(index) + " is not unitary (max|U^dagger U - I| = " +
                              std::to_string(defect) + ")");
}

/// |z|^{2k} through log|z|.
inline double abs_pow(cplx z, int k) {
    const double a = std::abs(z);
    if (a == 0.0) return 0.0;
    return std::exp(2.0 * k * std::log(a));
}

}  // namespace detail

/// Runs body(i) for i in [0, n) on `threads` workers with a fixed interleaved split.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Mean and standard error of per-sample values in a fixed reduction order.
inline FrameEstimate summarize(const std::vector<double>& values, int k, Estimator estimator) {
    FrameEstimate est;
    est.k = k;
    est.estimator = estimator;
    est.samples = values.size();
    if (values.empty()) return est;
    const double n = static_cast<double>(values.size());
    est.mean = detail::pairwise_sum(values.data(), values.size()) / n;
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
        est.mean = values.front();
        return est;
    }
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - est.mean) * (values[i] - est.mean);
    const double var = values.size() > 1 ? detail::pairwise_sum(dev.data(), dev.size()) / (n - 1.0) : 0.0;
    est.std_error = std::sqrt(var / n);
    return est;
}

/// Per-sample |tr(V^dagger U)|^{2k} (paired) or |tr W|^{2k} (folded).
inline std::vector<double> frame_potential_samples(const EnsembleSampler& sampler, int k, std::size_t samples,
                                                   std::uint64_t seed, Estimator estimator, int threads = 1) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (samples < 2) throw ValidationError("mc_frame_potential needs at least 2 samples");
    if (!sampler.draw) throw ValidationError("sampler has no draw function");
    std::vector<double> values(samples);
    const std::uint64_t key = derive_seed(seed, {static_cast<std::uint64_t>(estimator)});
    parallel_for(samples, threads, [&](std::size_t i) {
        cplx tr;
        if (estimator == Estimator::paired) {
            const Matrix u = sampler.draw(key, 2 * i);
            const Matrix v = sampler.draw(key, 2 * i + 1);
            detail::check_unitary(u, sampler.dim, 2 * i);
            detail::check_unitary(v, sampler.dim, 2 * i + 1);
            tr = (v.adjoint() * u).trace();
        } else {
            const auto& draw = sampler.draw_folded ? sampler.draw_folded : sampler.draw;
            const Matrix w = draw(key, i);
            detail::check_unitary(w, sampler.dim, i);
            tr = w.trace();
        }
        values[i] = detail::abs_pow(tr, k);
    });
    return values;
}

inline FrameEstimate mc_frame_potential(const EnsembleSampler& sampler, int k, std::size_t samples,
                                        std::uint64_t seed, Estimator estimator, int threads = 1) {
    return summarize(frame_potential_samples(sampler, k, samples, seed, estimator, threads), k, estimator);
}

// ---------------------------------------------------------------------------
// Haar baselines

/// Haar unitary from the QR factorization of a complex Ginibre matrix, with
/// the phases of R's diagonal absorbed into Q.
inline Matrix haar_unitary(std::size_t dim, CounterRng& rng) {
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix z(n, n);
    const double s = std::sqrt(0.5);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = rng.normal(s);
            const double im = rng.normal(s);
            z(i, j) = cplx(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
        const cplx d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= a > 0.0 ? d / a : cplx(1.0);
    }
    return q;
}

inline EnsembleSampler haar_sampler(std::size_t dim) {
    EnsembleSampler s;
    s.dim = dim;
    s.draw = [dim](std::uint64_t key, std::uint64_t index) {
        CounterRng rng(key, {index});
        return haar_unitary(dim, rng);
    };
    return s;
}

/// Independent Haar blocks on the even- and odd-popcount basis states.
inline Matrix parity_haar_unitary(std::size_t dim, CounterRng& rng) {
    std::vector<Eigen::Index> even, odd;
    for (std::size_t i = 0; i < dim; ++i)
        (std::popcount(i) % 2 == 0 ? even : odd).push_back(static_cast<Eigen::Index>(i));
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix u = Matrix::Zero(n, n);
    for (const auto* block : {&even, &odd}) {
        if (block->empty()) continue;
        const Matrix b = haar_unitary(block->size(), rng);
        for (std::size_t i = 0; i < block->size(); ++i)
            for (std::size_t j = 0; j < block->size(); ++j)
                u((*block)[i], (*block)[j]) = b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return u;
}

inline EnsembleSampler parity_haar_sampler(std::size_t dim) {
    EnsembleSampler s;
    s.dim = dim;
    s.draw = [dim](std::uint64_t key, std::uint64_t index) {
        CounterRng rng(key, {index});
        return parity_haar_unitary(dim, rng);
    };
    return s;
}

inline EnsembleSampler constant_sampler(const Matrix& u) {
    EnsembleSampler s;
    s.dim = static_cast<std::size_t>(u.rows());
    s.draw = [u](std::uint64_t, std::uint64_t) { return u; };
    return s;
}

inline constexpr int kMaxExactK = 20;

/// k!
inline u128 haar_fp(int k) {
    if (k < 0) throw ValidationError("k must be >= 0");
    if (k > kMaxExactK) throw RangeError("haar_fp: k = " + std::to_string(k) + " exceeds exact range (20)");
    u128 f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<u128>(i);
    return f;
}

/// 2^k k!
inline u128 fermionic_haar_fp(int k) {
    if (k < 0) throw ValidationError("k must be >= 0");
    if (k > kMaxExactK)
        throw RangeError("fermionic_haar_fp: k = " + std::to_string(k) + " exceeds exact range (20)");
    return haar_fp(k) << k;
}

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

// ---------------------------------------------------------------------------
// Invariant states

/// |W_{pi,eta}> = sum_{i_1..i_k} prod_j eta_j^{p(i_j)} |i_1..i_k> (x) |i_{pi^-1(1)}..>
/// on forward contours 1..k and backward contours 1bar..kbar, where backward
/// contour pi(j) carries the index of forward contour j and p is popcount parity.
inline Vector invariant_state(std::size_t D, const std::vector<int>& perm, const std::vector<int>& eta) {
    const int k = static_cast<int>(perm.size());
    std::size_t total = 1;
    for (int c = 0; c < 2 * k; ++c) total *= D;
    std::size_t forward = 1;
    for (int c = 0; c < k; ++c) forward *= D;
    Vector v = Vector::Zero(static_cast<Eigen::Index>(total));
    std::vector<std::size_t> digits(static_cast<std::size_t>(k));
    std::vector<std::size_t> back(static_cast<std::size_t>(k));
    for (std::size_t f = 0; f < forward; ++f) {
        std::size_t rest = f;
        for (int j = k - 1; j >= 0; --j) {
            digits[static_cast<std::size_t>(j)] = rest % D;
            rest /= D;
        }
        double sign = 1.0;
        for (int j = 0; j < k; ++j) {
            back[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = digits[static_cast<std::size_t>(j)];
            if (!eta.empty() && eta[static_cast<std::size_t>(j)] < 0 && (std::popcount(digits[static_cast<std::size_t>(j)]) & 1))
                sign = -sign;
        }
        std::size_t idx = f;
        for (int j = 0; j < k; ++j) idx = idx * D + back[static_cast<std::size_t>(j)];
        v[static_cast<Eigen::Index>(idx)] = sign;
    }
    return v / v.norm();
}

/// Gram rank of the k! (or, with parity, 2^k k!) invariant states.
inline std::size_t invariant_state_rank(std::size_t D, int k, bool parity) {
    if (D < 1) throw ValidationError("D must be >= 1");
    if (k < 1 || k > 4) throw ValidationError("invariant_state_rank supports 1 <= k <= 4");
    double total = 1.0;
    for (int c = 0; c < 2 * k; ++c) total *= static_cast<double>(D);
    if (total > 16384.0) throw SizeError("invariant_state_rank: D^{2k} exceeds 16384");
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Vector> states;
    do {
        if (!parity) {
            states.push_back(invariant_state(D, perm, {}));
            continue;
        }
        for (int mask = 0; mask < (1 << k); ++mask) {
            std::vector<int> eta(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j) eta[static_cast<std::size_t>(j)] = (mask >> j) & 1 ? -1 : 1;
            states.push_back(invariant_state(D, perm, eta));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    Matrix cols(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(states.size()));
    for (std::size_t j = 0; j < states.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = states[j];
    return gram_rank(cols, 1e-8);
}

// ---------------------------------------------------------------------------
// Bounds

inline constexpr double kMinimalityTolerance = 1e-9;

/// log of sqrt(D^{2k} * excess), excess = F - k!.
inline double log_diamond_bound_from_excess(double excess, int k, double D) {
    if (excess < 0.0) throw ValidationError("frame-potential excess must be >= 0");
    if (excess == 0.0) return -std::numeric_limits<double>::infinity();
    return k * std::log(D) + 0.5 * std::log(excess);
}

inline double diamond_bound_from_excess(double excess, int k, double D) {
    return std::exp(log_diamond_bound_from_excess(excess, k, D));
}

/// sqrt(D^{2k} (F - k!))
inline double diamond_bound(double F, int k, double D) {
    const double kf = std::tgamma(k + 1.0);
    if (F < kf - kMinimalityTolerance)
        throw ValidationError("frame potential " + std::to_string(F) + " below k! = " + std::to_string(kf) +
                              ": estimator inconsistency");
    return diamond_bound_from_excess(std::max(0.0, F - kf), k, D);
}

/// k! + (D^{2k} - k!) exp(-2 gap t)
inline double crude_fp_bound(int k, double D, double gap, double t) {
    const double kf = std::tgamma(k + 1.0);
    const double full = std::pow(D, 2.0 * k);
    return kf + (full - kf) * std::exp(-2.0 * gap * t);
}

}  // namespace brownian
