#pragma once

#include "rankone/rational.hpp"

#include <array>
#include <string>

namespace rankone {

enum class ScalarKind { Real = 0, Complex = 1, Quaternion = 2 };

std::string kind_name(ScalarKind k);

/**
 * @brief Element of Q, Q(i) or the rational quaternions.
 *
 * Components are (1, i, j, k). The kind is the smallest algebra holding
 * the value's provenance; arithmetic promotes to the larger kind. Equality
 * compares values only.
 */
class CompositionScalar {
public:
    CompositionScalar() = default;
    CompositionScalar(long v) : c_{Rational(v), 0, 0, 0} {}  // NOLINT
    CompositionScalar(int v) : c_{Rational(v), 0, 0, 0} {}   // NOLINT
    CompositionScalar(const Rational& v) : c_{v, 0, 0, 0} {}  // NOLINT
    CompositionScalar(const Rational& re, const Rational& im)
        : kind_(ScalarKind::Complex), c_{re, im, 0, 0} {}
    CompositionScalar(const Rational& a, const Rational& b, const Rational& c, const Rational& d)
        : kind_(ScalarKind::Quaternion), c_{a, b, c, d} {}

    static CompositionScalar unit_i() { return {Rational(0), Rational(1)}; }
    static CompositionScalar unit_j() { return {0, 0, 1, 0}; }
    static CompositionScalar unit_k() { return {0, 0, 0, 1}; }
    // Named unit: "1", "i", "j" or "k".
    static CompositionScalar unit(char name);

    ScalarKind kind() const { return kind_; }
    const Rational& operator[](int idx) const { return c_[static_cast<std::size_t>(idx)]; }
    const Rational& re() const { return c_[0]; }
    bool is_zero() const;
    bool is_real() const;

    CompositionScalar conj() const;
    // a^2 + b^2 + c^2 + d^2
    Rational norm() const;
    CompositionScalar inverse() const;

    CompositionScalar operator-() const;
    CompositionScalar& operator+=(const CompositionScalar& o);
    CompositionScalar& operator-=(const CompositionScalar& o);
    friend CompositionScalar operator+(CompositionScalar a, const CompositionScalar& b) { return a += b; }
    friend CompositionScalar operator-(CompositionScalar a, const CompositionScalar& b) { return a -= b; }
    // Hamilton product; not commutative for quaternions.
    friend CompositionScalar operator*(const CompositionScalar& a, const CompositionScalar& b);
    CompositionScalar& operator*=(const CompositionScalar& o) { return *this = *this * o; }
    CompositionScalar scaled(const Rational& r) const;

    friend bool operator==(const CompositionScalar& a, const CompositionScalar& b) { return a.c_ == b.c_; }
    // Lexicographic on components; used only for canonical container ordering.
    friend bool operator<(const CompositionScalar& a, const CompositionScalar& b) { return a.c_ < b.c_; }

    std::string str() const;

private:
    ScalarKind kind_ = ScalarKind::Real;
    std::array<Rational, 4> c_{};
};

using Scalar = CompositionScalar;

}  // namespace rankone
