#include "rankone/heights.hpp"

#include "rankone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace rankone {

namespace {

void require_nonzero(const RationalVector& x) {
    if (x.empty() || std::all_of(x.begin(), x.end(), [](const Rational& q) { return q.is_zero(); }))
        throw ZeroVector("height of the zero vector");
}

void check_prime(unsigned long p) {
    if (p < 2) throw BadParameters("p must be a prime");
    for (unsigned long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw BadParameters(std::to_string(p) + " is not prime");
}

int mpz_valuation(const mpz_class& n, unsigned long p) {
    mpz_class r = n, pp = p;
    return static_cast<int>(mpz_remove(r.get_mpz_t(), r.get_mpz_t(), pp.get_mpz_t()));
}

void add_prime_factors(mpz_class n, std::set<unsigned long>& out) {
    n = abs(n);
    if (n <= 1) return;
    for (unsigned long p = 2; mpz_class(p) * p <= n; ++p) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.insert(p);
            mpz_class pp = p;
            mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
        }
    }
    if (n > 1) {
        if (!n.fits_ulong_p()) throw BadParameters("prime factor exceeds the supported range");
        out.insert(n.get_ui());
    }
}

Rational prime_power(unsigned long p, int e) {
    Rational base(static_cast<long>(p));
    return e >= 0 ? base.pow(e) : Rational(1) / base.pow(-e);
}

}  // namespace

int padic_valuation(const Rational& q, unsigned long p) {
    check_prime(p);
    if (q.is_zero()) throw ZeroInput("valuation of zero");
    return mpz_valuation(q.num(), p) - mpz_valuation(q.den(), p);
}

Rational padic_abs(const Rational& q, unsigned long p) {
    if (q.is_zero()) return Rational(0);
    return prime_power(p, -padic_valuation(q, p));
}

Rational archimedean_height_squared(const RationalVector& x) {
    require_nonzero(x);
    Rational s(0);
    for (const auto& q : x) s += q * q;
    return s;
}

double archimedean_height(const RationalVector& x) { return std::sqrt(archimedean_height_squared(x).to_double()); }

Rational local_height(const RationalVector& x, unsigned long p) {
    require_nonzero(x);
    check_prime(p);
    Rational best(0);
    for (const auto& q : x) best = std::max(best, padic_abs(q, p));
    return best;
}

std::vector<unsigned long> support_primes(const RationalVector& x) {
    std::set<unsigned long> ps;
    for (const auto& q : x) {
        if (q.is_zero()) continue;
        add_prime_factors(q.num(), ps);
        add_prime_factors(q.den(), ps);
    }
    return {ps.begin(), ps.end()};
}

HeightReport global_height(const RationalVector& x) {
    require_nonzero(x);
    HeightReport h;
    Rational a2 = archimedean_height_squared(x);
    h.archimedean = std::sqrt(a2.to_double());
    Rational fin(1);
    for (unsigned long p : support_primes(x)) {
        Rational e = local_height(x, p);
        if (e != Rational(1)) {
            h.finite[p] = e;
            fin *= e;
        }
    }
    h.global_squared = a2 * fin * fin;
    h.global = h.archimedean * fin.to_double();
    return h;
}

Rational idele_norm(const Rational& t) {
    if (t.is_zero()) throw ZeroInput("idele norm of zero");
    Rational n = t.abs();
    for (unsigned long p : support_primes({t})) n *= padic_abs(t, p);
    return n;
}

ScalingCheck scaling_check(const Rational& t, const RationalVector& x) {
    if (t.is_zero()) throw ZeroInput("t must be nonzero");
    if (std::all_of(x.begin(), x.end(), [](const Rational& q) { return q.is_zero(); }))
        throw ZeroInput("x must be nonzero");
    ScalingCheck c;
    RationalVector tx = x;
    for (auto& q : tx) q *= t;
    c.scaled = global_height(tx);
    c.base = global_height(x);
    c.norm_t = idele_norm(t);
    c.exact_equal = c.scaled.global_squared == c.norm_t * c.norm_t * c.base.global_squared;
    return c;
}

std::vector<std::vector<long>> finite_below(double c, int n, long box) {
    if (n < 1) throw BadParameters("n must be positive");
    if (!(c > 0)) throw BadParameters("height bound must be positive");
    // a primitive integer vector has every finite factor 1, so eta = |x| and
    // each coordinate of a class below c satisfies |x_i| < c
    const long need = static_cast<long>(std::ceil(c)) - 1;
    if (box < need) throw BoxTooSmall("box " + std::to_string(box) + " cannot certify completeness, need " + std::to_string(need));
    std::vector<std::vector<long>> out;
    std::vector<long> x(static_cast<std::size_t>(n), -need);
    const double c2 = c * c;
    while (true) {
        // representative mod +-: first nonzero coordinate positive
        auto first = std::find_if(x.begin(), x.end(), [](long v) { return v != 0; });
        if (first != x.end() && *first > 0) {
            long g = 0, norm2 = 0;
            for (long v : x) {
                g = std::gcd(g, std::abs(v));
                norm2 += v * v;
            }
            if (g == 1 && static_cast<double>(norm2) < c2) out.push_back(x);
        }
        int i = n - 1;
        while (i >= 0 && x[static_cast<std::size_t>(i)] == need) x[static_cast<std::size_t>(i--)] = -need;
        if (i < 0) break;
        ++x[static_cast<std::size_t>(i)];
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        long na = 0, nb = 0;
        for (long v : a) na += v * v;
        for (long v : b) nb += v * v;
        return na != nb ? na < nb : a > b;
    });
    return out;
}

Rational determinant(RationalMatrix a) {
    const std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw DimensionMismatch("determinant of a non-square matrix");
    Rational det(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k].is_zero()) ++piv;
        if (piv == n) return Rational(0);
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k].is_zero()) continue;
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

ComparabilityConstants comparability_constants(const std::vector<RationalMatrix>& g_samples,
                                               const std::vector<RationalVector>& x_samples) {
    if (g_samples.empty() || x_samples.empty()) throw BadParameters("samples must be nonempty");
    ComparabilityConstants cc;
    cc.lower = std::numeric_limits<double>::infinity();
    cc.upper = 0;
    cc.arch_lower = cc.lower;
    cc.arch_upper = 0;
    for (const auto& g : g_samples) {
        if (determinant(g).is_zero()) throw SingularSample("sampled matrix is singular");
        for (const auto& x : x_samples) {
            if (x.size() != g.size()) throw DimensionMismatch("vector and matrix sizes differ");
            RationalVector xg(g.size(), Rational(0));
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::size_t j = 0; j < g.size(); ++j) xg[j] += x[i] * g[i][j];
            double r = global_height(xg).global / global_height(x).global;
            cc.lower = std::min(cc.lower, r);
            cc.upper = std::max(cc.upper, r);
            double ra = archimedean_height(xg) / archimedean_height(x);
            cc.arch_lower = std::min(cc.arch_lower, ra);
            cc.arch_upper = std::max(cc.arch_upper, ra);
            ++cc.pairs;
        }
    }
    return cc;
}

}  // namespace rankone
