#pragma once

// Time-independent Hamiltonian H plus Brownian noise g O:
//
//     H_eff = sum_r { H^r - (H^rbar)^* } - (i g / 2) ( sum_r { O^r - (O^rbar)^* } )^2
//
// on D^{2k} dimensions. Decay rates are -Im(lambda); the dark states with
// zero decay are the pairing states, e.g. |d> = D^{-1/2} sum_n |n,n> at k = 1.
//
// Spectra route through structure rather than through the dense D^{2k} matrix:
//  - k = 1: X -> X^dagger maps H_eff's eigenproblem to a real D^2 x D^2 one.
//    Writing a Hermitian X = S + iA as the real matrix Y = S + A, the
//    superoperator -i L becomes R(Y) = -[H, Y^T] - (g/2)[O, [O, Y]] and
//    spec(H_eff) = i spec(R).
//  - k = 2: in the eigenbasis of H, the forward and backward replica swaps
//    split H_eff into (sym, sym), (anti, anti), (sym, anti) and (anti, sym)
//    sectors; the last is the image of the third under lambda -> -conj(lambda),
//    and the first two are each mapped to themselves, which makes them real
//    eigenproblems.
//
// The M matrix M_nm = |<n|O|m>|^2 in the eigenbasis of H controls the first-
// order decay rates: g (1 - mu) for eigenvalues mu of M.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "brownian/errors.hpp"
#include "brownian/fp_estimator.hpp"
#include "brownian/lapack.hpp"
#include "brownian/replica_linops.hpp"
#include "brownian/rng.hpp"

namespace brownian::rmt {

inline constexpr std::size_t kDenseGuard = 4096;
inline constexpr std::uint64_t kGoeTag = 0x474f45ULL;  // "GOE"

struct RmtParams {
    std::size_t D = 32;
    double g = 0.2;
    int k = 1;
    std::size_t samples = 100;
    std::uint64_t seed = 0;

    void validate() const {
        if (D < 2 || D % 2 != 0) throw ValidationError("D must be even and >= 2");
        if (!(g > 0.0)) throw ValidationError("g must be > 0");
        if (k < 1 || k > 2) throw ValidationError("k must be 1 or 2");
    }
};

/// Entry standard deviation log(D) / sqrt(D).
inline double goe_scale(std::size_t D) {
    return std::log(static_cast<double>(D)) / std::sqrt(static_cast<double>(D));
}

/// Real symmetric H: off-diagonal N(0, s^2), diagonal N(0, 2 s^2), s = log(D)/sqrt(D).
inline RealMatrix sample_goe_real(std::size_t D, std::uint64_t seed) {
    if (D < 2) throw ValidationError("D must be >= 2");
    CounterRng rng(seed, {kGoeTag, D});
    const double s = goe_scale(D);
    const auto n = static_cast<Eigen::Index>(D);
    RealMatrix h(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        h(i, i) = rng.normal(std::sqrt(2.0) * s);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            h(i, j) = rng.normal(s);
            h(j, i) = h(i, j);
        }
    }
    return h;
}

inline DenseOperator sample_goe(std::size_t D, std::uint64_t seed) {
    return DenseOperator(sample_goe_real(D, seed).cast<cplx>(), true);
}

/// diag(+1 x D/2, -1 x D/2)
inline RealVector balanced_sign_diagonal(std::size_t D) {
    if (D < 2 || D % 2 != 0) throw ValidationError("D must be even and >= 2");
    RealVector o(static_cast<Eigen::Index>(D));
    for (std::size_t i = 0; i < D; ++i) o[static_cast<Eigen::Index>(i)] = i < D / 2 ? 1.0 : -1.0;
    return o;
}

inline RealMatrix balanced_sign_operator(std::size_t D) {
    return balanced_sign_diagonal(D).asDiagonal();
}

/// Diagonal of O after checking O is diagonal with +-1 entries and zero trace.
inline RealVector check_sign_operator(const Matrix& O) {
    if (O.rows() != O.cols()) throw ValidationError("O must be square");
    const Eigen::Index n = O.rows();
    RealVector d(n);
    double trace = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j && O(i, j) != cplx{}) throw ValidationError("O must be diagonal");
            if (i == j) {
                const cplx v = O(i, i);
                if (v.imag() != 0.0 || std::abs(std::abs(v.real()) - 1.0) > 1e-12)
                    throw ValidationError("O's diagonal must be +1 or -1");
                d[i] = v.real();
                trace += v.real();
            }
        }
    if (std::abs(trace) > 1e-12) throw ValidationError("O must be traceless");
    return d;
}

/// Dense H_eff on D^{2k} dimensions, contours ordered 1..k, 1bar..kbar.
inline DenseOperator build_noisy_heff(const DenseOperator& H, const DenseOperator& O, double g, int k) {
    if (H.dim() != O.dim()) throw ValidationError("H and O dimensions differ");
    if (k < 1) throw ValidationError("k must be >= 1");
    const RealVector o = check_sign_operator(O.matrix());
    const std::size_t D = H.dim();
    double total = 1.0;
    for (int c = 0; c < 2 * k; ++c) total *= static_cast<double>(D);
    if (total > static_cast<double>(kDenseGuard))
        throw SizeError("build_noisy_heff: D^{2k} = " + std::to_string(static_cast<long long>(total)) +
                        " exceeds guard " + std::to_string(kDenseGuard));
    const auto space = ReplicaSpace::replicated(1, k, static_cast<int>(D));
    const auto n = static_cast<Eigen::Index>(space.total_dim());
    Matrix heff = Matrix::Zero(n, n);
    const Matrix h_conj = H.matrix().conjugate();
    for (int r = 0; r < k; ++r) {
        heff += embed_local(space, space.forward(r), 0, H.matrix());
        heff -= embed_local(space, space.backward(r), 0, h_conj);
    }
    // O is diagonal, so the noise generator is diagonal in the computational basis.
    for (Eigen::Index idx = 0; idx < n; ++idx) {
        double b = 0.0;
        for (int c = 0; c < 2 * k; ++c) {
            const auto digit = static_cast<Eigen::Index>((static_cast<std::size_t>(idx) / space.stride(c)) % D);
            b += space.is_backward(c) ? -o[digit] : o[digit];
        }
        heff(idx, idx) += cplx(0.0, -0.5 * g * b * b);
    }
    return DenseOperator(std::move(heff));
}

/// |d> = D^{-1/2} sum_n |n, n>
inline Vector dark_state(std::size_t D) {
    const auto n = static_cast<Eigen::Index>(D);
    Vector v = Vector::Zero(n * n);
    for (Eigen::Index i = 0; i < n; ++i) v[i * n + i] = 1.0 / std::sqrt(static_cast<double>(D));
    return v;
}

// ---------------------------------------------------------------------------
// Structured spectra

/// Real D^2 x D^2 matrix R with spec(H_eff) = i spec(R) at k = 1, for real
/// symmetric H and O. Rows and columns use row-major (a, b) -> a D + b.
inline RealMatrix real_superoperator_k1(const RealMatrix& H, const RealMatrix& O, double g) {
    const Eigen::Index D = H.rows();
    const Eigen::Index n = D * D;
    RealMatrix R = RealMatrix::Zero(n, n);
    // -(H Y^T - Y^T H)_{ij} = -sum_l H_il Y_jl + sum_l Y_li H_lj
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index j = 0; j < D; ++j) {
            const Eigen::Index row = i * D + j;
            for (Eigen::Index l = 0; l < D; ++l) {
                R(row, j * D + l) -= H(i, l);
                R(row, l * D + i) += H(l, j);
            }
        }
    // -(g/2)(O^2 Y - 2 O Y O + Y O^2)
    const RealMatrix O2 = O * O;
    const double c = -0.5 * g;
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index j = 0; j < D; ++j) {
            const Eigen::Index row = i * D + j;
            for (Eigen::Index a = 0; a < D; ++a) {
                R(row, a * D + j) += c * O2(i, a);
                R(row, i * D + a) += c * O2(a, j);
                if (O(i, a) != 0.0)
                    for (Eigen::Index b = 0; b < D; ++b) R(row, a * D + b) -= 2.0 * c * O(i, a) * O(b, j);
            }
        }
    return R;
}

inline void check_real_symmetric(const DenseOperator& op, const char* name) {
    const Matrix& m = op.matrix();
    if (m.size() && (m.imag().cwiseAbs().maxCoeff() != 0.0 || (m.real() - m.real().transpose()).cwiseAbs().maxCoeff() > 1e-12))
        throw ValidationError(std::string(name) + " must be real symmetric for the structured spectrum");
}

/// Eigenvalues of H_eff at k = 1 through the real route, sorted by real part.
inline std::vector<cplx> noisy_spectrum_k1(const DenseOperator& H, const DenseOperator& O, double g) {
    check_real_symmetric(H, "H");
    check_real_symmetric(O, "O");
    RealMatrix R = real_superoperator_k1(H.matrix().real(), O.matrix().real(), g);
    const Eigen::VectorXcd mu = lapack::dgeev_values(R);
    std::vector<cplx> out(static_cast<std::size_t>(mu.size()));
    for (Eigen::Index i = 0; i < mu.size(); ++i) out[static_cast<std::size_t>(i)] = I_UNIT * mu[i];
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return out;
}

namespace detail {

/// Orthonormal symmetric (sign +1) or antisymmetric (sign -1) basis of C^D (x) C^D, as columns.
inline RealMatrix pair_basis(Eigen::Index D, int sign) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (Eigen::Index a = 0; a < D; ++a)
        for (Eigen::Index b = a + (sign > 0 ? 0 : 1); b < D; ++b) pairs.emplace_back(a, b);
    RealMatrix Q = RealMatrix::Zero(D * D, static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t c = 0; c < pairs.size(); ++c) {
        const auto [a, b] = pairs[c];
        const auto col = static_cast<Eigen::Index>(c);
        if (a == b) {
            Q(a * D + a, col) = 1.0;
        } else {
            Q(a * D + b, col) = std::sqrt(0.5);
            Q(b * D + a, col) = sign * std::sqrt(0.5);
        }
    }
    return Q;
}

/// Sector block diag(E_f) (x) 1 - 1 (x) diag(E_b) - (i g / 2)(P_f (x) 1 - 1 (x) P_b)^2.
inline Matrix sector_block(const RealVector& Ef, const RealMatrix& Pf, const RealVector& Eb, const RealMatrix& Pb, double g) {
    const Eigen::Index nf = Ef.size();
    const Eigen::Index nb = Eb.size();
    const Eigen::Index n = nf * nb;
    RealMatrix W = RealMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < nf; ++a)
        for (Eigen::Index c = 0; c < nf; ++c) {
            const double v = Pf(a, c);
            if (v == 0.0) continue;
            for (Eigen::Index b = 0; b < nb; ++b) W(a * nb + b, c * nb + b) += v;
        }
    for (Eigen::Index a = 0; a < nf; ++a)
        for (Eigen::Index b = 0; b < nb; ++b)
            for (Eigen::Index d = 0; d < nb; ++d) W(a * nb + b, a * nb + d) -= Pb(b, d);
    const RealMatrix W2 = W * W;
    Matrix block = cplx(0.0, -0.5 * g) * W2.cast<cplx>();
    for (Eigen::Index a = 0; a < nf; ++a)
        for (Eigen::Index b = 0; b < nb; ++b) block(a * nb + b, a * nb + b) += Ef[a] - Eb[b];
    return block;
}

/// Eigenvalues of an n^2 x n^2 sector block B with P conj(B) P = -B, where P
/// exchanges (a, b) <-> (b, a). Then iB is real in the basis fixed by
/// conj o P: e_aa, (e_ab + e_ba)/sqrt 2 and i (e_ab - e_ba)/sqrt 2 for a < b.
inline Eigen::VectorXcd self_conjugate_eigenvalues(const Matrix& B, Eigen::Index n) {
    struct Column {
        Eigen::Index i, j;
        cplx ci, cj;
    };
    std::vector<Column> cols;
    cols.reserve(static_cast<std::size_t>(n * n));
    const double h = std::sqrt(0.5);
    for (Eigen::Index a = 0; a < n; ++a) {
        cols.push_back({a * n + a, -1, 1.0, 0.0});
        for (Eigen::Index b = a + 1; b < n; ++b) {
            cols.push_back({a * n + b, b * n + a, h, h});
            cols.push_back({a * n + b, b * n + a, cplx(0.0, h), cplx(0.0, -h)});
        }
    }
    const auto m = static_cast<Eigen::Index>(cols.size());
    RealMatrix C(m, m);
    for (Eigen::Index q = 0; q < m; ++q) {
        const auto& cq = cols[static_cast<std::size_t>(q)];
        for (Eigen::Index p = 0; p < m; ++p) {
            const auto& cp = cols[static_cast<std::size_t>(p)];
            cplx v = std::conj(cp.ci) * B(cp.i, cq.i) * cq.ci;
            if (cq.j >= 0) v += std::conj(cp.ci) * B(cp.i, cq.j) * cq.cj;
            if (cp.j >= 0) {
                v += std::conj(cp.cj) * B(cp.j, cq.i) * cq.ci;
                if (cq.j >= 0) v += std::conj(cp.cj) * B(cp.j, cq.j) * cq.cj;
            }
            C(p, q) = (I_UNIT * v).real();
        }
    }
    Eigen::VectorXcd w = lapack::dgeev_values(C);
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] *= -I_UNIT;
    return w;
}

}  // namespace detail

/// Eigenvalues of H_eff at k = 2 by swap-sector decomposition, sorted by real part.
inline std::vector<cplx> noisy_spectrum_k2(const DenseOperator& H, const DenseOperator& O, double g) {
    check_real_symmetric(H, "H");
    check_real_symmetric(O, "O");
    const Eigen::Index D = static_cast<Eigen::Index>(H.dim());
    RealMatrix V = H.matrix().real();
    const RealVector E = lapack::syevd(V, true);
    const RealMatrix Ot = V.transpose() * O.matrix().real() * V;
    const RealMatrix I = RealMatrix::Identity(D, D);
    RealMatrix pair_op(D * D, D * D);
    RealVector pair_E(D * D);
    for (Eigen::Index a = 0; a < D; ++a)
        for (Eigen::Index b = 0; b < D; ++b) pair_E[a * D + b] = E[a] + E[b];
    for (Eigen::Index a = 0; a < D; ++a)
        for (Eigen::Index b = 0; b < D; ++b)
            for (Eigen::Index c = 0; c < D; ++c)
                for (Eigen::Index d = 0; d < D; ++d)
                    pair_op(a * D + b, c * D + d) = Ot(a, c) * I(b, d) + I(a, c) * Ot(b, d);
    struct Sector {
        RealVector E;
        RealMatrix P;
    };
    auto restrict = [&](int sign) {
        const RealMatrix Q = detail::pair_basis(D, sign);
        Sector s;
        s.P = Q.transpose() * pair_op * Q;
        RealVector e(Q.cols());
        for (Eigen::Index c = 0; c < Q.cols(); ++c) {
            Eigen::Index row = 0;
            Q.col(c).cwiseAbs().maxCoeff(&row);
            e[c] = pair_E[row];
        }
        s.E = e;
        return s;
    };
    const Sector sym = restrict(+1);
    const Sector anti = restrict(-1);
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(D * D * D * D));
    auto eig_into = [&](const Sector& f, const Sector& b, bool mirror) {
        Matrix block = detail::sector_block(f.E, f.P, b.E, b.P, g);
        const Eigen::VectorXcd w = mirror ? lapack::geev(block, nullptr)
                                          : detail::self_conjugate_eigenvalues(block, f.E.size());
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            out.push_back(w[i]);
            if (mirror) out.push_back(-std::conj(w[i]));
        }
    };
    eig_into(sym, sym, false);
    eig_into(anti, anti, false);
    eig_into(sym, anti, true);
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return out;
}

/// Eigenvalues of H_eff: structured route for real symmetric H at k = 1, 2,
/// dense zgeev on build_noisy_heff otherwise.
inline std::vector<cplx> noisy_spectrum(const DenseOperator& H, const DenseOperator& O, double g, int k) {
    check_sign_operator(O.matrix());
    if (brownian::detail::is_real_matrix(H.matrix())) {
        if (k == 1) return noisy_spectrum_k1(H, O, g);
        if (k == 2) return noisy_spectrum_k2(H, O, g);
    }
    return eig_general(build_noisy_heff(H, O, g, k)).eigenvalues;
}

inline SpectrumReport spectrum_report(std::vector<cplx> eigenvalues, double null_tol) {
    SpectrumReport r;
    r.eigenvalues = std::move(eigenvalues);
    r.tolerance = null_tol;
    r.null_dim = 0;
    for (auto v : r.eigenvalues) {
        if (std::abs(v) < null_tol)
            ++r.null_dim;
        else
            r.gap = std::min(r.gap, std::abs(v));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Dark states and decay gap

/// Number of eigenvalues with |Im| < tol.
inline std::size_t count_dark(const std::vector<cplx>& eigenvalues, double tol) {
    return static_cast<std::size_t>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                                  [tol](cplx v) { return std::abs(v.imag()) < tol; }));
}

/// Min |Im| over all but the n_dark smallest-|Im| eigenvalues, after checking
/// that exactly n_dark lie below tol.
inline double decay_gap(const std::vector<cplx>& eigenvalues, std::size_t n_dark, double tol) {
    std::vector<double> rates;
    rates.reserve(eigenvalues.size());
    for (auto v : eigenvalues) rates.push_back(std::abs(v.imag()));
    if (rates.size() <= n_dark) throw DarkStateError("spectrum has no non-dark eigenvalues");
    std::partial_sort(rates.begin(), rates.begin() + static_cast<std::ptrdiff_t>(n_dark) + 1, rates.end());
    for (std::size_t i = 0; i < n_dark; ++i)
        if (!(rates[i] < tol))
            throw DarkStateError("missing dark state: expected " + std::to_string(n_dark) + " with |Im| < " +
                                 std::to_string(tol) + ", found " + std::to_string(i));
    if (rates[n_dark] < tol)
        throw DarkStateError("extra dark state: more than " + std::to_string(n_dark) + " eigenvalues with |Im| < " +
                             std::to_string(tol) + " (no decay structure)");
    return rates[n_dark];
}

inline double decay_gap(const SpectrumReport& report, std::size_t n_dark, double tol) {
    return decay_gap(report.eigenvalues, n_dark, tol);
}

/// Eigenvector of the dense H_eff for the eigenvalue nearest `lambda`, by
/// shifted inverse iteration.
inline Vector eigenvector_near(const DenseOperator& heff, cplx lambda, int iterations = 3) {
    const auto n = static_cast<Eigen::Index>(heff.dim());
    const double scale = std::max(1.0, heff.matrix().cwiseAbs().maxCoeff());
    Matrix shifted = heff.matrix();
    shifted.diagonal().array() -= lambda + cplx(1e-9 * scale, 1e-9 * scale);
    Eigen::PartialPivLU<Matrix> lu(shifted);
    Vector v = Vector::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] += cplx(0.0, 1e-3 * static_cast<double>(i % 7));
    v.normalize();
    for (int it = 0; it < iterations; ++it) {
        v = lu.solve(v);
        if (!v.allFinite()) throw NumericalError("eigenvector_near: inverse iteration diverged");
        v.normalize();
    }
    return v;
}

/// |<d|v>|^2 for the eigenvector v of the eigenvalue with smallest |Im| at k = 1,
/// by inverse iteration on the real superoperator. A real eigenvector Y there
/// is the Hermitian matrix X = S + iA, so <d|v> = tr(Y) / (sqrt(D) |Y|).
inline double dark_overlap_k1(const DenseOperator& H, const DenseOperator& O, double g,
                              const std::vector<cplx>& eigenvalues) {
    const auto it = std::min_element(eigenvalues.begin(), eigenvalues.end(),
                                     [](cplx a, cplx b) { return std::abs(a.imag()) < std::abs(b.imag()); });
    if (it == eigenvalues.end()) throw DarkStateError("empty spectrum");
    check_real_symmetric(H, "H");
    check_real_symmetric(O, "O");
    const Eigen::Index D = static_cast<Eigen::Index>(H.dim());
    RealMatrix R = real_superoperator_k1(H.matrix().real(), O.matrix().real(), g);
    const double mu = it->imag();
    const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
    R.diagonal().array() -= mu + 1e-9 * scale;
    Eigen::PartialPivLU<RealMatrix> lu(R);
    RealVector y = RealVector::Ones(D * D);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += 1e-3 * static_cast<double>(i % 7);
    y.normalize();
    for (int iter = 0; iter < 3; ++iter) {
        y = lu.solve(y);
        if (!y.allFinite()) throw NumericalError("dark_overlap_k1: inverse iteration diverged");
        y.normalize();
    }
    double tr = 0.0;
    for (Eigen::Index i = 0; i < D; ++i) tr += y[i * D + i];
    return tr * tr / static_cast<double>(D);
}

// ---------------------------------------------------------------------------
// Gap fit

struct GapFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual = 0.0;
    std::vector<double> D_grid;
    std::vector<double> mean_gap;
};

/// Least squares y = a + b / sqrt(D) + c / D with equal weights.
inline GapFit fit_gap_model(const std::vector<double>& D, const std::vector<double>& y) {
    if (D.size() != y.size()) throw ValidationError("fit_gap_model: size mismatch");
    if (D.size() < 4) throw ValidationError("fit_gap_model needs at least 4 grid points");
    const auto n = static_cast<Eigen::Index>(D.size());
    RealMatrix A(n, 3);
    RealVector b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = D[static_cast<std::size_t>(i)];
        if (!(d > 0.0)) throw ValidationError("fit_gap_model: D must be > 0");
        A(i, 0) = 1.0;
        A(i, 1) = 1.0 / std::sqrt(d);
        A(i, 2) = 1.0 / d;
        b[i] = y[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(A);
    if (qr.rank() < 3) throw NumericalError("fit error: singular normal equations (rank " + std::to_string(qr.rank()) + ")");
    const RealVector x = qr.solve(b);
    GapFit fit;
    fit.a = x[0];
    fit.b = x[1];
    fit.c = x[2];
    fit.residual = std::sqrt((A * x - b).squaredNorm() / static_cast<double>(n));
    fit.D_grid = D;
    fit.mean_gap = y;
    return fit;
}

/// Decay gap of one GOE sample at k = 1. The dark state is an exact zero
/// mode, so it is separated at 1e-8 of the spectral scale rather than g/10;
/// at small D a slow decay rate below g/10 is then still counted as the gap.
inline double sample_gap_k1(std::size_t D, double g, std::uint64_t seed) {
    const auto H = sample_goe(D, seed);
    const DenseOperator O(balanced_sign_operator(D).cast<cplx>(), true);
    const auto eigs = noisy_spectrum_k1(H, O, g);
    double scale = g;
    for (auto v : eigs) scale = std::max(scale, std::abs(v));
    return decay_gap(eigs, 1, 1e-8 * scale);
}

/// Per-sample gaps for one D; sample s uses seed derive_seed(seed, {D, s}).
inline std::vector<double> sample_gaps(std::size_t D, std::size_t samples, double g, std::uint64_t seed, int threads = 1) {
    std::vector<double> gaps(samples);
    parallel_for(samples, threads, [&](std::size_t s) { gaps[s] = sample_gap_k1(D, g, derive_seed(seed, {D, s})); });
    return gaps;
}

inline GapFit gap_fit(const std::vector<std::size_t>& D_grid, std::size_t samples_per_D, double g, std::uint64_t seed,
                      int threads = 1) {
    if (D_grid.size() < 4) throw ValidationError("gap_fit needs at least 4 grid points");
    if (samples_per_D < 1) throw ValidationError("gap_fit needs at least 1 sample per D");
    std::vector<double> Ds, means;
    for (std::size_t D : D_grid) {
        const auto gaps = sample_gaps(D, samples_per_D, g, seed, threads);
        Ds.push_back(static_cast<double>(D));
        means.push_back(brownian::detail::pairwise_sum(gaps.data(), gaps.size()) / static_cast<double>(gaps.size()));
    }
    return fit_gap_model(Ds, means);
}

// ---------------------------------------------------------------------------
// M matrix and its statistics

/// M_nm = |<n|O|m>|^2 over eigenvectors |n> of the real symmetric H.
inline RealMatrix build_M_matrix_real(const RealMatrix& H, const RealMatrix& O) {
    RealMatrix V = H;
    lapack::syevd(V, true);
    const RealMatrix Ot = V.transpose() * O * V;
    return Ot.cwiseAbs2();
}

inline DenseOperator build_M_matrix(const DenseOperator& H, const DenseOperator& O) {
    if (H.dim() != O.dim()) throw ValidationError("H and O dimensions differ");
    if (brownian::detail::is_real_matrix(H.matrix()) && brownian::detail::is_real_matrix(O.matrix()))
        return DenseOperator(build_M_matrix_real(H.matrix().real(), O.matrix().real()).cast<cplx>(), true);
    auto r = eig_hermitian(H, true);
    const Matrix& V = *r.eigenvectors;
    const Matrix Ot = V.adjoint() * O.matrix() * V;
    return DenseOperator(Ot.cwiseAbs2().cast<cplx>(), true);
}

/// rho(E) = (sqrt(D) / 2 pi) sqrt(2 - (D/4)(E - 1/D)^2), zero outside the support.
inline double semicircle_density(double E, double D) {
    const double x = E - 1.0 / D;
    const double radicand = 2.0 - 0.25 * D * x * x;
    if (radicand <= 0.0) return 0.0;
    return std::sqrt(D) / (2.0 * std::numbers::pi) * std::sqrt(radicand);
}

inline double semicircle_radius(double D) { return std::sqrt(8.0 / D); }

inline double semicircle_cdf(double E, double D) {
    const double u = std::clamp((E - 1.0 / D) / semicircle_radius(D), -1.0, 1.0);
    return (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi + 0.5;
}

/// rho(x) = sqrt(D / (2 pi x)) e^{-D x / 2} for x > 0.
inline double porter_thomas_pdf(double x, double D) {
    if (!(x > 0.0)) return 0.0;
    return std::sqrt(D / (2.0 * std::numbers::pi * x)) * std::exp(-0.5 * D * x);
}

struct SemicircleStats {
    std::vector<double> edges;
    std::vector<double> counts;
    std::vector<double> expected;
    double chi2_per_bin = 0.0;
    std::size_t outside = 0;
    double mean_min = 0.0;
    double mean_max = 0.0;
    double entry_mean = 0.0;
    double entry_var = 0.0;
    double mean_top = 0.0;
};

/// Eigenvalues of M without its Perron eigenvalue, ascending.
inline std::vector<double> m_bulk_eigenvalues(const RealMatrix& M) {
    RealMatrix a = M;
    const RealVector w = lapack::syevd(a, false);
    return std::vector<double>(w.data(), w.data() + w.size() - 1);
}

/// Histogram of bulk M eigenvalues pooled over samples against the
/// semicircle on `bins` equal bins of its support; entry moments over the
/// upper triangle.
inline SemicircleStats semicircle_statistics(std::size_t D, std::size_t samples, std::uint64_t seed, int bins = 40,
                                             int threads = 1) {
    if (samples < 1) throw ValidationError("semicircle_statistics needs at least one sample");
    const double d = static_cast<double>(D);
    const RealMatrix O = balanced_sign_operator(D);
    std::vector<std::vector<double>> eigs(samples);
    std::vector<double> tops(samples), sums(samples), sq(samples);
    parallel_for(samples, threads, [&](std::size_t s) {
        const RealMatrix H = sample_goe_real(D, derive_seed(seed, {D, s}));
        const RealMatrix M = build_M_matrix_real(H, O);
        RealMatrix a = M;
        const RealVector w = lapack::syevd(a, false);
        tops[s] = w[w.size() - 1];
        eigs[s].assign(w.data(), w.data() + w.size() - 1);
        double s1 = 0.0, s2 = 0.0;
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            for (Eigen::Index j = i; j < M.cols(); ++j) {
                s1 += M(i, j);
                s2 += M(i, j) * M(i, j);
            }
        sums[s] = s1;
        sq[s] = s2;
    });
    SemicircleStats st;
    const double R = semicircle_radius(d);
    const double lo = 1.0 / d - R, hi = 1.0 / d + R;
    st.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) st.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
    st.counts.assign(static_cast<std::size_t>(bins), 0.0);
    std::size_t total = 0;
    double min_acc = 0.0, max_acc = 0.0;
    for (const auto& e : eigs) {
        min_acc += e.front();
        max_acc += e.back();
        for (double v : e) {
            ++total;
            if (v < lo || v >= hi) {
                ++st.outside;
                continue;
            }
            const auto b = std::min<std::size_t>(static_cast<std::size_t>((v - lo) / (hi - lo) * bins), static_cast<std::size_t>(bins) - 1);
            st.counts[b] += 1.0;
        }
    }
    st.mean_min = min_acc / static_cast<double>(samples);
    st.mean_max = max_acc / static_cast<double>(samples);
    st.expected.resize(static_cast<std::size_t>(bins));
    double chi2 = 0.0;
    for (int b = 0; b < bins; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        st.expected[ub] = static_cast<double>(total) * (semicircle_cdf(st.edges[ub + 1], d) - semicircle_cdf(st.edges[ub], d));
        const double diff = st.counts[ub] - st.expected[ub];
        chi2 += diff * diff / std::max(st.expected[ub], 1.0);
    }
    st.chi2_per_bin = chi2 / bins;
    const double n_entries = static_cast<double>(samples) * d * (d + 1.0) / 2.0;
    const double s1 = brownian::detail::pairwise_sum(sums.data(), sums.size());
    const double s2 = brownian::detail::pairwise_sum(sq.data(), sq.size());
    st.entry_mean = s1 / n_entries;
    st.entry_var = s2 / n_entries - st.entry_mean * st.entry_mean;
    st.mean_top = brownian::detail::pairwise_sum(tops.data(), tops.size()) / static_cast<double>(samples);
    return st;
}

/// (1/2g)(4 k N log 2 + 2 log(1/eps))
inline double design_time_hamiltonian(int N_qubits, int k, double g, double eps_diamond) {
    if (!(eps_diamond > 0.0 && eps_diamond < 1.0)) throw ValidationError("eps_diamond must lie in (0,1)");
    if (!(g > 0.0)) throw ValidationError("g must be > 0");
    return (4.0 * k * N_qubits * std::log(2.0) + 2.0 * std::log(1.0 / eps_diamond)) / (2.0 * g);
}

}  // namespace brownian::rmt
