#include "rankone/scalar.hpp"

#include "rankone/errors.hpp"

#include <algorithm>

namespace rankone {

std::string kind_name(ScalarKind k) {
    switch (k) {
        case ScalarKind::Real: return "real";
        case ScalarKind::Complex: return "complex";
        case ScalarKind::Quaternion: return "quaternion";
    }
    return "?";
}

namespace {
ScalarKind join(ScalarKind a, ScalarKind b) { return std::max(a, b); }
}  // namespace

CompositionScalar CompositionScalar::unit(char name) {
    switch (name) {
        case '1': return CompositionScalar(1);
        case 'i': return unit_i();
        case 'j': return unit_j();
        case 'k': return unit_k();
        default: throw ConfigError(std::string("unknown unit '") + name + "'");
    }
}

bool CompositionScalar::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r.is_zero(); });
}

bool CompositionScalar::is_real() const {
    return c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero();
}

CompositionScalar CompositionScalar::conj() const {
    CompositionScalar r = *this;
    for (int k = 1; k < 4; ++k) r.c_[k] = -c_[k];
    return r;
}

Rational CompositionScalar::norm() const {
    Rational n;
    for (const auto& x : c_) n += x * x;
    return n;
}

CompositionScalar CompositionScalar::inverse() const {
    Rational n = norm();
    if (n.is_zero()) throw SingularMatrix("inverse of zero scalar");
    return conj().scaled(Rational(1) / n);
}

CompositionScalar CompositionScalar::operator-() const {
    CompositionScalar r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

CompositionScalar& CompositionScalar::operator+=(const CompositionScalar& o) {
    for (std::size_t k = 0; k < 4; ++k) c_[k] += o.c_[k];
    kind_ = join(kind_, o.kind_);
    return *this;
}

CompositionScalar& CompositionScalar::operator-=(const CompositionScalar& o) {
    for (std::size_t k = 0; k < 4; ++k) c_[k] -= o.c_[k];
    kind_ = join(kind_, o.kind_);
    return *this;
}

CompositionScalar operator*(const CompositionScalar& x, const CompositionScalar& y) {
    const auto& [a1, b1, c1, d1] = x.c_;
    const auto& [a2, b2, c2, d2] = y.c_;
    CompositionScalar r;
    r.kind_ = join(x.kind_, y.kind_);
    r.c_[0] = a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2;
    r.c_[1] = a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2;
    r.c_[2] = a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2;
    r.c_[3] = a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2;
    return r;
}

CompositionScalar CompositionScalar::scaled(const Rational& r) const {
    CompositionScalar out = *this;
    for (auto& x : out.c_) x *= r;
    return out;
}

std::string CompositionScalar::str() const {
    static const char* units[4] = {"", "i", "j", "k"};
    std::string out;
    for (std::size_t k = 0; k < 4; ++k) {
        if (c_[k].is_zero()) continue;
        std::string v = c_[k].pretty();
        if (!out.empty() && v[0] != '-') out += "+";
        if (k > 0 && (c_[k] == Rational(1))) v = "";
        else if (k > 0 && (c_[k] == Rational(-1))) v = "-";
        out += v + units[k];
    }
    return out.empty() ? "0" : out;
}

}  // namespace rankone
