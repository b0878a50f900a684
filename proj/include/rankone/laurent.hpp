#pragma once

#include "rankone/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace rankone {

// Exponent map over named central variables; zero exponents are never stored.
using Monomial = std::map<std::string, int>;

std::string monomial_str(const Monomial& m);

/**
 * @brief Laurent polynomial in commuting named variables with
 * CompositionScalar coefficients.
 *
 * Variables commute with everything, so quaternion coefficients are safe;
 * only the coefficients themselves multiply in order.
 */
class Laurent {
public:
    Laurent() = default;
    Laurent(const Scalar& c);  // NOLINT(google-explicit-constructor)
    Laurent(long c) : Laurent(Scalar(c)) {}  // NOLINT
    Laurent(int c) : Laurent(Scalar(c)) {}   // NOLINT
    Laurent(const Rational& c) : Laurent(Scalar(c)) {}  // NOLINT

    static Laurent var(const std::string& name, int power = 1);
    static Laurent term(const Scalar& c, const Monomial& m);

    const std::map<Monomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Constant part; throws if the polynomial has nonconstant terms.
    Scalar constant() const;
    std::vector<std::string> variables() const;

    Laurent operator-() const;
    Laurent& operator+=(const Laurent& o);
    Laurent& operator-=(const Laurent& o);
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
    friend Laurent operator*(const Laurent& a, const Laurent& b);
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }
    Laurent scaled(const Rational& r) const;

    friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }
    friend bool operator<(const Laurent& a, const Laurent& b) { return a.terms_ < b.terms_; }

    // Partial derivative in one variable.
    Laurent diff(const std::string& v) const;
    // Substitute a nonzero rational for one variable.
    Laurent subst(const std::string& v, const Rational& value) const;
    // Substitute a polynomial for one variable (nonnegative powers only).
    Laurent subst(const std::string& v, const Laurent& value) const;
    // Real part of every coefficient.
    Laurent real_part() const;
    // Coefficient of the given power of v, as a polynomial in the others.
    Laurent coeff(const std::string& v, int power) const;
    int max_degree(const std::string& v) const;

    std::string str() const;

private:
    void add_term(const Monomial& m, const Scalar& c);
    std::map<Monomial, Scalar> terms_;
};

}  // namespace rankone
