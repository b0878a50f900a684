#include "rankone/matrix.hpp"

namespace rankone {

Laurent conj_of(const Laurent& p) {
    Laurent out;
    for (const auto& [m, c] : p.terms()) out += Laurent::term(c.conj(), m);
    return out;
}

ExactMatrix solve_linear(const ExactMatrix& A, const ExactMatrix& b) {
    if (!A.square()) throw DimensionMismatch("solve_linear needs a square matrix, got " + A.shape());
    if (b.rows() != A.rows()) throw DimensionMismatch("rhs " + b.shape() + " for " + A.shape());
    const int n = A.rows(), m = b.cols();
    ExactMatrix M = A, R = b;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (!M(i, c).is_zero()) { p = i; break; }
        if (p < 0) throw SingularMatrix("matrix " + A.shape() + " is singular (column " + std::to_string(c) + ")");
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(M(p, j), M(c, j));
            for (int j = 0; j < m; ++j) std::swap(R(p, j), R(c, j));
        }
        Scalar inv = M(c, c).inverse();
        for (int j = 0; j < n; ++j) M(c, j) = inv * M(c, j);
        for (int j = 0; j < m; ++j) R(c, j) = inv * R(c, j);
        for (int i = 0; i < n; ++i) {
            if (i == c || M(i, c).is_zero()) continue;
            Scalar f = M(i, c);
            for (int j = 0; j < n; ++j) M(i, j) -= f * M(c, j);
            for (int j = 0; j < m; ++j) R(i, j) -= f * R(c, j);
        }
    }
    return R;
}

ExactMatrix inverse(const ExactMatrix& A) {
    return solve_linear(A, ExactMatrix::identity(A.rows()));
}

Scalar determinant(const ExactMatrix& A) {
    if (!A.square()) throw DimensionMismatch("determinant of " + A.shape());
    const int n = A.rows();
    ExactMatrix M = A;
    Scalar det(1);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (!M(i, c).is_zero()) { p = i; break; }
        if (p < 0) return Scalar(0);
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(M(p, j), M(c, j));
            det = -det;
        }
        det = det * M(c, c);
        Scalar inv = M(c, c).inverse();
        for (int i = c + 1; i < n; ++i) {
            if (M(i, c).is_zero()) continue;
            Scalar f = M(i, c) * inv;
            for (int j = c; j < n; ++j) M(i, j) -= f * M(c, j);
        }
    }
    return det;
}

PolyMatrix exp_nilpotent(const PolyMatrix& N, const std::string& t) {
    const int n = N.rows();
    PolyMatrix tN = Laurent::var(t) * N;
    PolyMatrix out = PolyMatrix::identity(n), power = PolyMatrix::identity(n);
    Rational fact(1);
    for (int k = 1; k <= n + 1; ++k) {
        power = power * tN;
        if (power.is_zero()) return out;
        fact *= Rational(k);
        out += power.scaled(Rational(1) / fact);
    }
    throw ConfigError("exp_nilpotent: matrix is not nilpotent");
}

PolyMatrix subst(const PolyMatrix& M, const std::string& v, const Rational& value) {
    PolyMatrix r = M;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) r(i, j) = M(i, j).subst(v, value);
    return r;
}

PolyMatrix diff(const PolyMatrix& M, const std::string& v) {
    PolyMatrix r = M;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) r(i, j) = M(i, j).diff(v);
    return r;
}

}  // namespace rankone
