#pragma once

// Operator-construction kernel for replicated Hilbert spaces.
//
// A ReplicaSpace is a tensor product of n_contours contours, each holding
// n_sites factors of dimension local_dim. For a replica space with design
// order k the contours are ordered
//
//     1, 2, ..., k, 1bar, 2bar, ..., kbar
//
// i.e. contour index c < k is forward replica r = c, contour index c >= k is
// backward replica r = c - k. Tensor factor position is c * n_sites + site,
// with position 0 the most significant digit of the computational basis index.
//
// Qubit operators are handled symbolically as PauliSum (sums of weighted
// X^x Z^z strings) and materialized into dense matrices only when a spectrum
// is needed. Majoranas use one global Jordan-Wigner chain over all contours in
// (contour-major, flavor-minor) order, normalized so that psi^2 = 1/2.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "brownian/errors.hpp"
#include "brownian/lapack.hpp"

namespace brownian {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I_UNIT{0.0, 1.0};

// ---------------------------------------------------------------------------
// ReplicaSpace

class ReplicaSpace {
public:
    /// 2k contours (k forward, k backward) of n_sites factors each.
    static ReplicaSpace replicated(int n_sites, int k, int local_dim = 2) {
        if (k < 1) throw ValidationError("ReplicaSpace: k must be >= 1, got " + std::to_string(k));
        return ReplicaSpace(n_sites, k, 2 * k, local_dim);
    }

    /// A single un-replicated contour, the space a sampled unitary acts on.
    static ReplicaSpace physical(int n_sites, int local_dim = 2) {
        return ReplicaSpace(n_sites, 0, 1, local_dim);
    }

    int n_sites() const noexcept { return n_sites_; }
    int k() const noexcept { return k_; }
    int local_dim() const noexcept { return local_dim_; }
    int n_contours() const noexcept { return n_contours_; }
    int n_factors() const noexcept { return n_sites_ * n_contours_; }
    std::size_t total_dim() const noexcept { return total_dim_; }
    bool is_qubit() const noexcept { return local_dim_ == 2; }

    int forward(int r) const {
        if (k_ == 0) {
            if (r != 0) throw IndexError("physical space has only contour 0");
            return 0;
        }
        if (r < 0 || r >= k_)
            throw IndexError("forward replica " + std::to_string(r) + " outside [0," +
                             std::to_string(k_) + ")");
        return r;
    }

    int backward(int r) const {
        if (r < 0 || r >= k_)
            throw IndexError("backward replica " + std::to_string(r) + " outside [0," +
                             std::to_string(k_) + ")");
        return k_ + r;
    }

    bool is_backward(int contour) const {
        check_contour(contour);
        return k_ > 0 && contour >= k_;
    }

    /// (contour, site) -> tensor factor position; a bijection onto [0, n_factors).
    int factor(int contour, int site) const {
        check_contour(contour);
        if (site < 0 || site >= n_sites_)
            throw IndexError("site " + std::to_string(site) + " outside [0," +
                             std::to_string(n_sites_) + ")");
        return contour * n_sites_ + site;
    }

    /// Stride of a factor position within the flat basis index.
    std::size_t stride(int position) const {
        std::size_t s = 1;
        for (int p = position + 1; p < n_factors(); ++p) s *= static_cast<std::size_t>(local_dim_);
        return s;
    }

    void check_contour(int contour) const {
        if (contour < 0 || contour >= n_contours_)
            throw IndexError("contour " + std::to_string(contour) + " outside [0," +
                             std::to_string(n_contours_) + ")");
    }

    bool operator==(const ReplicaSpace&) const = default;

private:
    ReplicaSpace(int n_sites, int k, int n_contours, int local_dim)
        : n_sites_(n_sites), k_(k), n_contours_(n_contours), local_dim_(local_dim) {
        if (n_sites < 1) throw ValidationError("ReplicaSpace: n_sites must be >= 1");
        if (local_dim < 2) throw ValidationError("ReplicaSpace: local_dim must be >= 2");
        const double log_dim = n_sites * n_contours * std::log2(static_cast<double>(local_dim));
        if (log_dim > 62.0)
            throw SizeError("ReplicaSpace: total dimension exceeds 2^62");
        total_dim_ = 1;
        for (int i = 0; i < n_sites * n_contours; ++i)
            total_dim_ *= static_cast<std::size_t>(local_dim);
    }

    int n_sites_;
    int k_;
    int n_contours_;
    int local_dim_;
    std::size_t total_dim_ = 1;
};

// ---------------------------------------------------------------------------
// DenseOperator

inline double hermiticity_defect(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

class DenseOperator {
public:
    static constexpr double kHermitianTolerance = 1e-12;

    DenseOperator() = default;

    /// When `hermitian` is set the claim is verified against max|A - A^dagger|.
    explicit DenseOperator(Matrix entries, bool hermitian = false)
        : entries_(std::move(entries)), hermitian_(hermitian) {
        if (entries_.rows() != entries_.cols())
            throw ValidationError("DenseOperator must be square, got " +
                                  std::to_string(entries_.rows()) + "x" +
                                  std::to_string(entries_.cols()));
        if (hermitian_) {
            const double scale = std::max(1.0, entries_.size() ? entries_.cwiseAbs().maxCoeff() : 0.0);
            const double defect = hermiticity_defect(entries_);
            if (defect >= kHermitianTolerance * scale) {
                std::ostringstream os;
                os << "DenseOperator flagged Hermitian but max|A - A^dagger| = " << defect;
                throw ValidationError(os.str());
            }
        }
    }

    static DenseOperator identity(std::size_t dim) {
        return DenseOperator(Matrix::Identity(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim)),
                             true);
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& matrix() const noexcept { return entries_; }
    Matrix&& release() && noexcept { return std::move(entries_); }
    bool is_hermitian() const noexcept { return hermitian_; }
    cplx operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

    bool matches(const ReplicaSpace& space) const noexcept { return dim() == space.total_dim(); }

    friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
        check_same_dim(a, b);
        return DenseOperator(a.entries_ * b.entries_);
    }
    friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
        check_same_dim(a, b);
        return DenseOperator(a.entries_ + b.entries_, a.hermitian_ && b.hermitian_);
    }
    friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
        check_same_dim(a, b);
        return DenseOperator(a.entries_ - b.entries_, a.hermitian_ && b.hermitian_);
    }
    friend DenseOperator operator*(cplx s, const DenseOperator& a) {
        return DenseOperator(s * a.entries_, a.hermitian_ && s.imag() == 0.0);
    }

    DenseOperator adjoint() const { return DenseOperator(entries_.adjoint(), hermitian_); }
    Vector apply(const Vector& v) const { return entries_ * v; }

private:
    static void check_same_dim(const DenseOperator& a, const DenseOperator& b) {
        if (a.dim() != b.dim())
            throw ValidationError("DenseOperator dimension mismatch: " + std::to_string(a.dim()) +
                                  " vs " + std::to_string(b.dim()));
    }

    Matrix entries_;
    bool hermitian_ = false;
};

// ---------------------------------------------------------------------------
// Pauli strings

enum class Axis { x, y, z };

/// X^x Z^z on up to 64 qubits; bit (n-1-p) of each mask is tensor position p.
struct PauliString {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    auto operator<=>(const PauliString&) const = default;
};

/// (X^a Z^b)(X^c Z^d) = (-1)^{|b & c|} X^{a^c} Z^{b^d}
inline std::pair<PauliString, double> multiply(PauliString lhs, PauliString rhs) noexcept {
    const double sign = (std::popcount(lhs.z & rhs.x) & 1) ? -1.0 : 1.0;
    return {PauliString{lhs.x ^ rhs.x, lhs.z ^ rhs.z}, sign};
}

class PauliSum {
public:
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1 || n_qubits > 62)
            throw SizeError("PauliSum supports 1..62 qubits, got " + std::to_string(n_qubits));
    }

    static PauliSum identity(int n_qubits, cplx coeff = 1.0) {
        PauliSum s(n_qubits);
        s.add(PauliString{}, coeff);
        return s;
    }

    /// Single Pauli matrix at tensor position `position`.
    static PauliSum single(int n_qubits, int position, Axis axis) {
        PauliSum s(n_qubits);
        if (position < 0 || position >= n_qubits)
            throw IndexError("qubit position " + std::to_string(position) + " outside [0," +
                             std::to_string(n_qubits) + ")");
        const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - position);
        switch (axis) {
            case Axis::x: s.add(PauliString{bit, 0}, 1.0); break;
            case Axis::z: s.add(PauliString{0, bit}, 1.0); break;
            case Axis::y: s.add(PauliString{bit, bit}, I_UNIT); break;  // Y = i X Z
        }
        return s;
    }

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return std::size_t{1} << n_qubits_; }
    const std::map<PauliString, cplx>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    PauliSum& add(PauliString p, cplx coeff) {
        if (coeff == cplx{}) return *this;
        auto [it, inserted] = terms_.try_emplace(p, coeff);
        if (!inserted) {
            it->second += coeff;
            if (std::abs(it->second) == 0.0) terms_.erase(it);
        }
        return *this;
    }

    PauliSum& operator+=(const PauliSum& o) {
        check(o);
        for (const auto& [p, c] : o.terms_) add(p, c);
        return *this;
    }
    PauliSum& operator-=(const PauliSum& o) {
        check(o);
        for (const auto& [p, c] : o.terms_) add(p, -c);
        return *this;
    }
    PauliSum& operator*=(cplx s) {
        for (auto& [p, c] : terms_) c *= s;
        return *this;
    }

    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
    friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }

    friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
        a.check(b);
        PauliSum out(a.n_qubits_);
        for (const auto& [pa, ca] : a.terms_)
            for (const auto& [pb, cb] : b.terms_) {
                auto [p, sign] = multiply(pa, pb);
                out.add(p, sign * ca * cb);
            }
        return out;
    }

    /// Entrywise complex conjugate in the computational basis. X and Z are
    /// real, so only the coefficients change.
    PauliSum conj() const {
        PauliSum out(*this);
        for (auto& [p, c] : out.terms_) c = std::conj(c);
        return out;
    }

    PauliSum adjoint() const {
        // (X^x Z^z)^dagger = Z^z X^x = (-1)^{|x & z|} X^x Z^z
        PauliSum out(n_qubits_);
        for (const auto& [p, c] : terms_)
            out.add(p, ((std::popcount(p.x & p.z) & 1) ? -1.0 : 1.0) * std::conj(c));
        return out;
    }

    /// Drop terms with |coeff| <= tol.
    PauliSum& prune(double tol = 1e-14) {
        std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
        return *this;
    }

    void accumulate_into(Matrix& m, cplx scale = 1.0) const {
        const auto n = static_cast<std::uint64_t>(dim());
        if (static_cast<std::uint64_t>(m.rows()) != n || static_cast<std::uint64_t>(m.cols()) != n)
            throw ValidationError("PauliSum::accumulate_into: dimension mismatch");
        for (const auto& [p, c] : terms_) {
            const cplx w = scale * c;
            for (std::uint64_t b = 0; b < n; ++b) {
                const double sign = (std::popcount(p.z & b) & 1) ? -1.0 : 1.0;
                m(static_cast<Eigen::Index>(b ^ p.x), static_cast<Eigen::Index>(b)) += sign * w;
            }
        }
    }

    Matrix to_matrix() const {
        Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
        accumulate_into(m);
        return m;
    }

    DenseOperator to_dense(bool hermitian = false) const {
        return DenseOperator(to_matrix(), hermitian);
    }

    Vector apply(const Vector& v) const {
        const auto n = static_cast<std::uint64_t>(dim());
        if (static_cast<std::uint64_t>(v.size()) != n)
            throw ValidationError("PauliSum::apply: dimension mismatch");
        Vector out = Vector::Zero(v.size());
        for (const auto& [p, c] : terms_)
            for (std::uint64_t b = 0; b < n; ++b) {
                const double sign = (std::popcount(p.z & b) & 1) ? -1.0 : 1.0;
                out[static_cast<Eigen::Index>(b ^ p.x)] += sign * c * v[static_cast<Eigen::Index>(b)];
            }
        return out;
    }

private:
    void check(const PauliSum& o) const {
        if (o.n_qubits_ != n_qubits_)
            throw ValidationError("PauliSum qubit-count mismatch: " + std::to_string(n_qubits_) +
                                  " vs " + std::to_string(o.n_qubits_));
    }

    int n_qubits_;
    std::map<PauliString, cplx> terms_;
};

namespace detail {

inline void require_qubits(const ReplicaSpace& space, const char* what) {
    if (!space.is_qubit())
        throw ValidationError(std::string(what) + " requires a qubit space (local_dim 2)");
}

}  // namespace detail

/// Symbolic sigma_axis on (contour, site), identity elsewhere.
inline PauliSum pauli_sum(const ReplicaSpace& space, int contour, int site, Axis axis) {
    detail::require_qubits(space, "pauli_op");
    return PauliSum::single(space.n_factors(), space.factor(contour, site), axis);
}

inline DenseOperator pauli_op(const ReplicaSpace& space, int contour, int site, Axis axis) {
    return pauli_sum(space, contour, site, axis).to_dense(true);
}

/// Symbolic Majorana: global index g = contour * 2 n_sites + flavor sits on qubit
/// g / 2 with a Z string on every earlier qubit; even g carries X, odd g carries Y.
inline PauliSum majorana_sum(const ReplicaSpace& space, int contour, int flavor) {
    detail::require_qubits(space, "majorana_op");
    space.check_contour(contour);
    if (flavor < 0 || flavor >= 2 * space.n_sites())
        throw IndexError("Majorana flavor " + std::to_string(flavor) + " outside [0," +
                         std::to_string(2 * space.n_sites()) + ")");
    const int n = space.n_factors();
    const int position = space.factor(contour, flavor / 2);
    std::uint64_t zmask = 0;
    for (int p = 0; p < position; ++p) zmask |= std::uint64_t{1} << (n - 1 - p);
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - position);
    PauliSum s(n);
    if (flavor % 2 == 0)
        s.add(PauliString{bit, zmask}, 1.0 / std::sqrt(2.0));
    else
        // Z^zmask Y = Z^zmask (i X Z) = i (-1)^0 X Z^{zmask|bit}; X on `bit` commutes past the lower Zs.
        s.add(PauliString{bit, zmask | bit}, I_UNIT / std::sqrt(2.0));
    return s;
}

inline DenseOperator majorana_op(const ReplicaSpace& space, int contour, int flavor) {
    return majorana_sum(space, contour, flavor).to_dense(true);
}

inline DenseOperator conjugate_entries(const DenseOperator& op) {
    return DenseOperator(op.matrix().conjugate(), op.is_hermitian());
}

/// Dense local operator on one tensor factor, identity elsewhere.
inline Matrix embed_local(const ReplicaSpace& space, int contour, int site, const Matrix& local) {
    const auto d = static_cast<Eigen::Index>(space.local_dim());
    if (local.rows() != d || local.cols() != d)
        throw ValidationError("embed_local: local operator must be local_dim x local_dim");
    const auto total = static_cast<Eigen::Index>(space.total_dim());
    const auto stride = static_cast<Eigen::Index>(space.stride(space.factor(contour, site)));
    Matrix m = Matrix::Zero(total, total);
    for (Eigen::Index col = 0; col < total; ++col) {
        const Eigen::Index digit = (col / stride) % d;
        const Eigen::Index base = col - digit * stride;
        for (Eigen::Index row_digit = 0; row_digit < d; ++row_digit) {
            const cplx v = local(row_digit, digit);
            if (v != cplx{}) m(base + row_digit * stride, col) = v;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Matrix exponential

/// exp(scalar * op) by Pade-13 scaling and squaring (Eigen MatrixFunctions).
inline DenseOperator matrix_exponential(const DenseOperator& op, cplx scalar) {
    if (!op.matrix().allFinite()) throw ValidationError("matrix_exponential: non-finite entries");
    if (!std::isfinite(scalar.real()) || !std::isfinite(scalar.imag()))
        throw ValidationError("matrix_exponential: non-finite scalar");
    const Matrix scaled = scalar * op.matrix();
    Matrix result = scaled.exp();
    if (!result.allFinite()) throw NumericalError("matrix_exponential: result overflowed");
    return DenseOperator(std::move(result));
}

/// exp(-i * h * tau) for Hermitian h via its eigendecomposition.
inline Matrix unitary_propagator(const Matrix& h, double tau) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("unitary_propagator: eigensolver failed");
    const Vector phases = (-I_UNIT * tau * es.eigenvalues().cast<cplx>().array()).exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Spectra

struct SpectrumReport {
    std::vector<cplx> eigenvalues;        // sorted by real part, then imaginary part
    std::optional<Matrix> eigenvectors;   // column j belongs to eigenvalues[j]
    std::size_t null_dim = 0;             // count of |lambda| < tolerance
    double gap = std::numeric_limits<double>::infinity();  // min |lambda| over the rest
    double tolerance = 0.0;
    std::optional<std::vector<double>> dark_overlaps;

    std::size_t dim() const noexcept { return eigenvalues.size(); }
    std::size_t non_null() const noexcept { return eigenvalues.size() - null_dim; }

    std::vector<double> real_parts() const {
        std::vector<double> out;
        out.reserve(eigenvalues.size());
        for (auto v : eigenvalues) out.push_back(v.real());
        return out;
    }
};

inline constexpr double kDefaultNullTolerance = 1e-8;

namespace detail {

inline void classify(SpectrumReport& r, double scale, double rel_tol) {
    r.tolerance = rel_tol * scale;
    r.null_dim = 0;
    r.gap = std::numeric_limits<double>::infinity();
    for (auto v : r.eigenvalues) {
        const double a = std::abs(v);
        if (a < r.tolerance)
            ++r.null_dim;
        else
            r.gap = std::min(r.gap, a);
    }
}

inline std::vector<std::size_t> order_by_real(const std::vector<cplx>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (v[a].real() != v[b].real()) return v[a].real() < v[b].real();
        return v[a].imag() < v[b].imag();
    });
    return idx;
}

inline bool is_real_matrix(const Matrix& m) {
    return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace detail

/// Eigenvalues (ascending) of a Hermitian operator. Real-entried operators
/// go through dsyevd, the rest through zheevd.
inline SpectrumReport eig_hermitian(const DenseOperator& op, bool want_vectors = false,
                                    double rel_tol = kDefaultNullTolerance) {
    if (!op.is_hermitian()) {
        const double defect = hermiticity_defect(op.matrix());
        const double scale = std::max(1.0, op.dim() ? op.matrix().cwiseAbs().maxCoeff() : 0.0);
        if (defect >= DenseOperator::kHermitianTolerance * scale) {
            std::ostringstream os;
            os << "eig_hermitian: operator is not Hermitian (max|A - A^dagger| = " << defect << ")";
            throw ValidationError(os.str());
        }
    }
    SpectrumReport r;
    RealVector w;
    if (detail::is_real_matrix(op.matrix())) {
        RealMatrix a = op.matrix().real();
        w = lapack::syevd(a, want_vectors);
        if (want_vectors) r.eigenvectors = a.cast<cplx>();
    } else {
        Matrix a = op.matrix();
        w = lapack::heevd(a, want_vectors);
        if (want_vectors) r.eigenvectors = std::move(a);
    }
    r.eigenvalues.assign(w.data(), w.data() + w.size());
    const double scale = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
    detail::classify(r, scale, rel_tol);
    return r;
}

inline SpectrumReport eig_general(const DenseOperator& op, bool want_vectors = false,
                                  double rel_tol = kDefaultNullTolerance) {
    if (!op.matrix().allFinite()) throw ValidationError("eig_general: non-finite entries");
    Matrix a = op.matrix();
    Matrix vr;
    Vector w = lapack::geev(a, want_vectors ? &vr : nullptr);
    std::vector<cplx> vals(w.data(), w.data() + w.size());
    const auto idx = detail::order_by_real(vals);
    SpectrumReport r;
    r.eigenvalues.reserve(vals.size());
    for (auto i : idx) r.eigenvalues.push_back(vals[i]);
    if (want_vectors) {
        Matrix sorted(vr.rows(), vr.cols());
        for (std::size_t j = 0; j < idx.size(); ++j)
            sorted.col(static_cast<Eigen::Index>(j)) = vr.col(static_cast<Eigen::Index>(idx[j]));
        r.eigenvectors = std::move(sorted);
    }
    double scale = 0.0;
    for (auto v : r.eigenvalues) scale = std::max(scale, std::abs(v));
    detail::classify(r, scale, rel_tol);
    return r;
}

/// Orthonormal basis (as columns) of {v : |op v| < rel_tol * |op|_2}.
inline Matrix null_space(const DenseOperator& op, double rel_tol = kDefaultNullTolerance) {
    const auto n = static_cast<Eigen::Index>(op.dim());
    if (n == 0) return Matrix(0, 0);
    if (op.is_hermitian()) {
        auto r = eig_hermitian(op, true, rel_tol);
        Matrix basis(n, static_cast<Eigen::Index>(r.null_dim));
        Eigen::Index c = 0;
        for (std::size_t j = 0; j < r.eigenvalues.size(); ++j)
            if (std::abs(r.eigenvalues[j]) < r.tolerance)
                basis.col(c++) = r.eigenvectors->col(static_cast<Eigen::Index>(j));
        return basis;
    }
    Matrix a = op.matrix();
    auto svd = lapack::gesdd(a);
    const double top = svd.singular_values.size() ? svd.singular_values[0] : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i)
        if (svd.singular_values[i] >= rel_tol * top && top > 0.0) ++rank;
    return svd.v.rightCols(n - rank);
}

/// Null space of a stacked (possibly rectangular) constraint matrix.
inline Matrix constraint_kernel(const Matrix& stacked, double rel_tol = kDefaultNullTolerance) {
    Matrix a = stacked;
    auto svd = lapack::gesdd(a);
    const double top = svd.singular_values.size() ? svd.singular_values[0] : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i)
        if (top > 0.0 && svd.singular_values[i] >= rel_tol * top) ++rank;
    return svd.v.rightCols(stacked.cols() - rank);
}

/// Distinct levels of a sorted real spectrum with their multiplicities.
struct Level {
    double energy;
    std::size_t degeneracy;
};

inline std::vector<Level> group_levels(const std::vector<double>& sorted, double tol) {
    std::vector<Level> out;
    for (double e : sorted) {
        if (!out.empty() && std::abs(e - out.back().energy) < tol) {
            ++out.back().degeneracy;
        } else {
            out.push_back({e, 1});
        }
    }
    return out;
}

inline std::vector<Level> group_levels(const SpectrumReport& r, double tol) {
    return group_levels(r.real_parts(), tol);
}

/// Rank of a set of column vectors through their Gram matrix.
inline std::size_t gram_rank(const Matrix& columns, double rel_tol = 1e-8) {
    if (columns.cols() == 0) return 0;
    const DenseOperator gram(columns.adjoint() * columns, true);
    const auto r = eig_hermitian(gram, false, rel_tol);
    return r.non_null();
}

}  // namespace brownian
