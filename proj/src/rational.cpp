#include "rankone/rational.hpp"

#include "rankone/errors.hpp"

#include <functional>

namespace rankone {

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw SingularMatrix("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(mpz_class(s), mpz_class(1));
        return Rational(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw ConfigError("cannot parse rational '" + s + "'");
    }
}

std::string Rational::str() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::pretty() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return str();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw SingularMatrix("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::pow(int e) const {
    if (e < 0) return Rational(1) / pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Rational(n, d);
}

std::size_t hash_value(const Rational& r) {
    return std::hash<std::string>{}(r.str());
}

}  // namespace rankone
