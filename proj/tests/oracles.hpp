#pragma once

// Independent reference constructions shared by the unit tests. None of these
// go through PauliSum or the LAPACK wrappers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline Matrix pauli(char a) {
    Matrix m(2, 2);
    switch (a) {
        case 'x': m << 0, 1, 1, 0; break;
        case 'y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'z': m << 1, 0, 0, -1; break;
        default: m = Matrix::Identity(2, 2);
    }
    return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Tensor product of 2x2 factors, factor 0 leftmost.
inline Matrix chain(const std::vector<Matrix>& factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& f : factors) out = kron(out, f);
    return out;
}

/// Single-qubit operator `op` at position p of n, identity elsewhere.
inline Matrix site_op(int n, int p, const Matrix& op) {
    std::vector<Matrix> f(static_cast<std::size_t>(n), Matrix::Identity(2, 2));
    f[static_cast<std::size_t>(p)] = op;
    return chain(f);
}

/// Jordan-Wigner Majorana g on n qubits with psi^2 = 1/2.
inline Matrix majorana(int n, int g) {
    std::vector<Matrix> f(static_cast<std::size_t>(n), Matrix::Identity(2, 2));
    for (int p = 0; p < g / 2; ++p) f[static_cast<std::size_t>(p)] = pauli('z');
    f[static_cast<std::size_t>(g / 2)] = pauli(g % 2 == 0 ? 'x' : 'y');
    return chain(f) / std::sqrt(2.0);
}

/// sum_{n < terms} A^n / n!
inline Matrix taylor_exp(const Matrix& a, int terms = 60) {
    Matrix out = Matrix::Identity(a.rows(), a.cols());
    Matrix term = out;
    for (int n = 1; n < terms; ++n) {
        term = term * a / static_cast<double>(n);
        out += term;
    }
    return out;
}

/// Greedy nearest-neighbour matching distance between two complex multisets.
inline double match_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& x : a) {
        auto best = b.begin();
        for (auto it = b.begin(); it != b.end(); ++it)
            if (std::abs(*it - x) < std::abs(*best - x)) best = it;
        worst = std::max(worst, std::abs(*best - x));
        b.erase(best);
    }
    return worst;
}

/// Minimal RFC 4180 reader: handles quoted fields, doubled quotes and CRLF.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(field);
            rows.push_back(row);
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (any || !field.empty() || !row.empty()) {
        row.push_back(field);
        rows.push_back(row);
    }
    return rows;
}

/// Composite Simpson rule on [a, b] with n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace oracle
