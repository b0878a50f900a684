#include "rankone/laurent.hpp"

#include "rankone/errors.hpp"

#include <set>

namespace rankone {

std::string monomial_str(const Monomial& m) {
    if (m.empty()) return "1";
    std::string out;
    for (const auto& [v, e] : m) {
        if (!out.empty()) out += "*";
        out += v;
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

Laurent::Laurent(const Scalar& c) {
    if (!c.is_zero()) terms_[Monomial{}] = c;
}

Laurent Laurent::var(const std::string& name, int power) {
    Monomial m;
    if (power != 0) m[name] = power;
    return term(Scalar(1), m);
}

Laurent Laurent::term(const Scalar& c, const Monomial& m) {
    Laurent p;
    p.add_term(m, c);
    return p;
}

void Laurent::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

bool Laurent::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Scalar Laurent::constant() const {
    if (!is_constant()) throw ConfigError("polynomial " + str() + " is not constant");
    return terms_.empty() ? Scalar(0) : terms_.begin()->second;
}

std::vector<std::string> Laurent::variables() const {
    std::set<std::string> vs;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m) vs.insert(v);
    return {vs.begin(), vs.end()};
}

Laurent Laurent::operator-() const {
    Laurent r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Laurent& Laurent::operator+=(const Laurent& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m = ma;
            for (const auto& [v, e] : mb) {
                int ne = (m[v] += e);
                if (ne == 0) m.erase(v);
            }
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Laurent Laurent::scaled(const Rational& r) const {
    Laurent out;
    for (const auto& [m, c] : terms_) out.add_term(m, c.scaled(r));
    return out;
}

Laurent Laurent::diff(const std::string& v) const {
    Laurent out;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(v);
        if (it == m.end()) continue;
        int e = it->second;
        Monomial nm = m;
        if (e - 1 == 0) nm.erase(v);
        else nm[v] = e - 1;
        out.add_term(nm, c.scaled(Rational(e)));
    }
    return out;
}

Laurent Laurent::subst(const std::string& v, const Rational& value) const {
    Laurent out;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(v);
        if (it == m.end()) {
            out.add_term(m, c);
            continue;
        }
        if (value.is_zero() && it->second < 0) throw SingularMatrix("negative power of " + v + " at 0");
        Rational f = value.pow(it->second);
        Monomial nm = m;
        nm.erase(v);
        out.add_term(nm, c.scaled(f));
    }
    return out;
}

Laurent Laurent::subst(const std::string& v, const Laurent& value) const {
    Laurent out;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(v);
        if (it == m.end()) {
            out.add_term(m, c);
            continue;
        }
        if (it->second < 0) throw ConfigError("polynomial substitution into negative power of " + v);
        Laurent f(1);
        for (int k = 0; k < it->second; ++k) f = f * value;
        Monomial nm = m;
        nm.erase(v);
        out += term(c, nm) * f;
    }
    return out;
}

Laurent Laurent::real_part() const {
    Laurent out;
    for (const auto& [m, c] : terms_) out.add_term(m, Scalar(c.re()));
    return out;
}

Laurent Laurent::coeff(const std::string& v, int power) const {
    Laurent out;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(v);
        int e = it == m.end() ? 0 : it->second;
        if (e != power) continue;
        Monomial nm = m;
        nm.erase(v);
        out.add_term(nm, c);
    }
    return out;
}

int Laurent::max_degree(const std::string& v) const {
    int d = 0;
    bool any = false;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(v);
        int e = it == m.end() ? 0 : it->second;
        d = any ? std::max(d, e) : e;
        any = true;
    }
    return d;
}

std::string Laurent::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        std::string cs = c.str();
        bool compound = cs.find_first_of("+", 1) != std::string::npos ||
                        (cs.find('-', 1) != std::string::npos);
        if (compound) cs = "(" + cs + ")";
        std::string piece;
        if (m.empty()) piece = cs;
        else if (cs == "1") piece = monomial_str(m);
        else if (cs == "-1") piece = "-" + monomial_str(m);
        else piece = cs + "*" + monomial_str(m);
        if (!out.empty() && piece[0] != '-') out += " + ";
        else if (!out.empty()) { out += " - "; piece = piece.substr(1); }
        out += piece;
    }
    return out;
}

}  // namespace rankone
