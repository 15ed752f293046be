#pragma once

// Thin LAPACKE bindings over Eigen column-major storage.

#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "brownian/errors.hpp"

namespace brownian::lapack {

using cplx = std::complex<double>;

namespace detail {

template <typename Mat>
std::string condition_report(const Mat& a, const char* routine, lapack_int info) {
    std::ostringstream os;
    os << routine << " failed (info=" << info << ") on " << a.rows() << "x" << a.cols()
       << " matrix: frobenius=" << a.norm() << " max|a_ij|=" << a.cwiseAbs().maxCoeff()
       << " finite=" << (a.allFinite() ? "yes" : "no");
    return os.str();
}

}  // namespace detail

/// Hermitian eigensolver. On return `a` holds eigenvectors when requested.
inline Eigen::VectorXd heevd(Eigen::MatrixXcd& a, bool vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', n, a.data(), n,
                                     w.data());
    if (info != 0) throw NumericalError(detail::condition_report(a, "zheevd", info));
    return w;
}

inline Eigen::VectorXd syevd(Eigen::MatrixXd& a, bool vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', n, a.data(), n, w.data());
    if (info != 0) throw NumericalError(detail::condition_report(a, "dsyevd", info));
    return w;
}

/// General complex eigensolver; `a` is destroyed. Right eigenvectors go to `vr`.
inline Eigen::VectorXcd geev(Eigen::MatrixXcd& a, Eigen::MatrixXcd* vr) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXcd w(n);
    if (n == 0) return w;
    if (vr) vr->resize(n, n);
    cplx dummy{};
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vr ? 'V' : 'N', n, a.data(), n,
                                    w.data(), &dummy, 1, vr ? vr->data() : &dummy, vr ? n : 1);
    if (info != 0) throw NumericalError(detail::condition_report(a, "zgeev", info));
    return w;
}

/// General real eigensolver (eigenvalues only); `a` is destroyed.
inline Eigen::VectorXcd dgeev_values(Eigen::MatrixXd& a) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXcd w(n);
    if (n == 0) return w;
    std::vector<double> wr(n), wi(n);
    double dummy = 0.0;
    lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(),
                                    wi.data(), &dummy, 1, &dummy, 1);
    if (info != 0) throw NumericalError(detail::condition_report(a, "dgeev", info));
    for (lapack_int i = 0; i < n; ++i) w[i] = cplx(wr[i], wi[i]);
    return w;
}

struct Svd {
    Eigen::VectorXd singular_values;  // descending
    Eigen::MatrixXcd v;               // right singular vectors as columns
};

/// Full SVD returning right singular vectors; `a` is destroyed.
inline Svd gesdd(Eigen::MatrixXcd& a) {
    const auto m = static_cast<lapack_int>(a.rows());
    const auto n = static_cast<lapack_int>(a.cols());
    Svd out;
    out.singular_values.resize(std::min(m, n));
    out.v.resize(n, n);
    if (m == 0 || n == 0) return out;
    Eigen::MatrixXcd uu(m, m);
    Eigen::MatrixXcd vt(n, n);
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, a.data(), m,
                                     out.singular_values.data(), uu.data(), m, vt.data(), n);
    if (info != 0) throw NumericalError(detail::condition_report(a, "zgesdd", info));
    out.v = vt.adjoint();
    return out;
}

}  // namespace brownian::lapack
