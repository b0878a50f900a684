#pragma once

#include "rankone/errors.hpp"
#include "rankone/laurent.hpp"
#include "rankone/scalar.hpp"

#include <string>
#include <vector>

namespace rankone {

inline Scalar conj_of(const Scalar& s) { return s.conj(); }
Laurent conj_of(const Laurent& p);

/**
 * @brief Dense row-major matrix over an exact ring (Scalar or Laurent).
 */
template <class T>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {
        if (rows <= 0 || cols <= 0) throw DimensionMismatch("matrix dimensions must be positive");
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static Mat unit(int n, int i, int j, const T& v = T(1)) {
        Mat m(n, n);
        m(i, j) = v;
        return m;
    }
    template <class U>
    static Mat from(const Mat<U>& o) {
        Mat m(o.rows(), o.cols());
        for (int i = 0; i < o.rows(); ++i)
            for (int j = 0; j < o.cols(); ++j) m(i, j) = T(o(i, j));
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& operator()(int i, int j) { return a_[idx(i, j)]; }
    const T& operator()(int i, int j) const { return a_[idx(i, j)]; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }
    bool square() const { return rows_ == cols_; }

    Mat operator-() const {
        Mat r = *this;
        for (auto& x : r.a_) x = -x;
        return r;
    }
    Mat& operator+=(const Mat& o) {
        same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("product of " + a.shape() + " and " + b.shape());
        Mat r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    const T& bkj = b(k, j);
                    if (!bkj.is_zero()) r(i, j) += aik * bkj;
                }
            }
        return r;
    }
    // Left scalar multiple c*M (order matters for quaternions).
    friend Mat operator*(const T& c, const Mat& m) {
        Mat r = m;
        for (auto& x : r.a_) x = c * x;
        return r;
    }
    friend Mat operator*(const Mat& m, const T& c) {
        Mat r = m;
        for (auto& x : r.a_) x = x * c;
        return r;
    }
    Mat scaled(const Rational& q) const {
        Mat r = *this;
        for (auto& x : r.a_) x = x.scaled(q);
        return r;
    }
    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    Mat transpose() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    Mat conj_transpose() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = conj_of((*this)(i, j));
        return r;
    }
    T trace() const {
        if (!square()) throw DimensionMismatch("trace of non-square " + shape());
        T t{};
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }
    Mat block(int r0, int c0, int nr, int nc) const {
        Mat r(nr, nc);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }
    void set_block(int r0, int c0, const Mat& b) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }
    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }
    std::string str() const {
        std::string out = "[";
        for (int i = 0; i < rows_; ++i) {
            out += i ? "; " : "";
            for (int j = 0; j < cols_; ++j) out += (j ? ", " : "") + (*this)(i, j).str();
        }
        return out + "]";
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * cols_ + j); }
    void same_shape(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch(shape() + " vs " + o.shape());
    }
    int rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using ExactMatrix = Mat<Scalar>;
using PolyMatrix = Mat<Laurent>;

// Exact Gauss-Jordan solve A x = b over a division ring (pivots invert on the left).
ExactMatrix solve_linear(const ExactMatrix& A, const ExactMatrix& b);
ExactMatrix inverse(const ExactMatrix& A);
// Determinant for commutative entries (real or complex); SingularMatrix-free.
Scalar determinant(const ExactMatrix& A);

// exp(t*N) for nilpotent N as a polynomial matrix in t (series terminates).
PolyMatrix exp_nilpotent(const PolyMatrix& N, const std::string& t);
// Entrywise substitution.
PolyMatrix subst(const PolyMatrix& M, const std::string& v, const Rational& value);
PolyMatrix diff(const PolyMatrix& M, const std::string& v);

}  // namespace rankone
