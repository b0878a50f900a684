#pragma once

#include "rankone/errors.hpp"
#include "rankone/rational.hpp"

#include <map>
#include <utility>
#include <vector>

namespace rankone {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<std::vector<Rational>>;  // row-major, acts on row vectors x g

// |q|_p = p^{-v_p(q)}, exact.
Rational padic_abs(const Rational& q, unsigned long p);
int padic_valuation(const Rational& q, unsigned long p);

// Euclidean norm at infinity; the square is returned exactly.
Rational archimedean_height_squared(const RationalVector& x);
double archimedean_height(const RationalVector& x);
// max_i |x_i|_p
Rational local_height(const RationalVector& x, unsigned long p);

// Primes dividing some numerator or denominator of x.
std::vector<unsigned long> support_primes(const RationalVector& x);

struct HeightReport {
    double global = 0;
    double archimedean = 0;
    std::map<unsigned long, Rational> finite;  // only primes with factor != 1
    Rational global_squared;                   // exact: |x|^2 prod_p eta_p(x)^2
};

HeightReport global_height(const RationalVector& x);

// Idele norm of the principal idele t: |t|_inf prod_p |t|_p, exact.
Rational idele_norm(const Rational& t);

struct ScalingCheck {
    HeightReport scaled;   // eta(t x)
    HeightReport base;     // eta(x)
    Rational norm_t;       // |t| as an idele
    bool exact_equal = false;  // eta(t x)^2 == |t|^2 eta(x)^2 in Q
};
ScalingCheck scaling_check(const Rational& t, const RationalVector& x);

// Primitive integer vectors up to sign with global height < c, searched in [-box, box]^n.
std::vector<std::vector<long>> finite_below(double c, int n, long box);

struct ComparabilityConstants {
    double lower = 0, upper = 0;  // lower eta(x) <= eta(x g) <= upper eta(x) on the samples
    double arch_lower = 0, arch_upper = 0;  // the same for the archimedean factor alone
    int pairs = 0;
};
ComparabilityConstants comparability_constants(const std::vector<RationalMatrix>& g_samples,
                                               const std::vector<RationalVector>& x_samples);

Rational determinant(RationalMatrix a);

}  // namespace rankone
