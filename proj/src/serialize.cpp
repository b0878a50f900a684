#include "rankone/serialize.hpp"

#include <cctype>

namespace rankone {

json to_json(const Scalar& s) {
    if (s.is_real()) return s.re().str();
    return json::array({s[0].str(), s[1].str(), s[2].str(), s[3].str()});
}

Scalar scalar_from_json(const json& j) {
    if (j.is_string()) return Scalar(Rational::parse(j.get<std::string>()));
    if (!j.is_array() || j.size() != 4) throw ConfigError("scalar must be \"num/den\" or a 4-array");
    return Scalar(Rational::parse(j[0].get<std::string>()), Rational::parse(j[1].get<std::string>()),
                  Rational::parse(j[2].get<std::string>()), Rational::parse(j[3].get<std::string>()));
}

namespace {

bool only_y(const Laurent& p) {
    for (const auto& v : p.variables())
        if (v != "y") return false;
    return true;
}

Monomial parse_monomial(const std::string& s) {
    Monomial m;
    if (s == "1") return m;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t star = s.find('*', pos);
        std::string f = s.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
        auto caret = f.find('^');
        if (caret == std::string::npos) m[f] += 1;
        else m[f.substr(0, caret)] += std::stoi(f.substr(caret + 1));
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    return m;
}

}  // namespace

json to_json(const Laurent& p) {
    json out = json::object();
    const bool deg = only_y(p);
    for (const auto& [m, c] : p.terms()) {
        std::string key = deg ? std::to_string(m.empty() ? 0 : m.at("y")) : monomial_str(m);
        out[key] = to_json(c);
    }
    return out;
}

Laurent laurent_from_json(const json& j) {
    auto is_int = [](const std::string& k) {
        std::size_t i = (!k.empty() && k[0] == '-') ? 1 : 0;
        if (i == k.size()) return false;
        for (; i < k.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(k[i]))) return false;
        return true;
    };
    bool degree_keys = true;
    for (const auto& [k, v] : j.items()) degree_keys = degree_keys && is_int(k);
    Laurent p;
    for (const auto& [k, v] : j.items()) {
        Monomial m;
        if (degree_keys) {
            if (int d = std::stoi(k)) m["y"] = d;
        } else {
            m = parse_monomial(k);
        }
        p += Laurent::term(scalar_from_json(v), m);
    }
    return p;
}

json to_json(const LinearCombination& c) {
    json out = json::object();
    for (const auto& [name, q] : c) out[name] = q.str();
    return out;
}

json to_json(const CasimirElement& c) {
    json terms = json::array();
    for (const auto& [w, q] : c.terms) terms.push_back({{"word", w}, {"coeff", q.str()}});
    json meta = json::object();
    for (const auto& [k, v] : c.metadata) meta[k] = v;
    return {{"terms", terms}, {"metadata", meta}};
}

json to_json(const LieBasis& b) {
    json gens = json::array();
    for (const auto& g : b.gens) {
        json entries = json::array();
        for (int i = 0; i < g.m.rows(); ++i)
            for (int k = 0; k < g.m.cols(); ++k)
                if (!g.m(i, k).is_zero()) entries.push_back({{"row", i}, {"col", k}, {"value", to_json(g.m(i, k))}});
        json e = {{"name", g.name}, {"role", role_name(g.role)}, {"place", g.place}, {"entries", entries}};
        if (!g.coordinate.empty()) e["coordinate"] = g.coordinate;
        if (g.partner >= 0) {
            e["partner"] = b.gens[static_cast<std::size_t>(g.partner)].name;
            e["partner_sign"] = g.partner_sign;
        }
        gens.push_back(e);
    }
    json places = json::array();
    for (const auto& p : b.places)
        places.push_back({{"label", p.label}, {"offset", p.offset}, {"size", p.size}, {"complex", p.complex},
                          {"signature", {p.signature.p, p.signature.q}}, {"weight", p.weight}});
    return {{"family", family_name(b.spec.family)}, {"r", b.spec.r}, {"dimension", b.size()},
            {"normalization", b.normalization}, {"places", places}, {"generators", gens}};
}

json to_json(const Reduction& r) {
    json dropped = json::array();
    for (const auto& d : r.dropped)
        dropped.push_back({{"coeff", d.coef.str()}, {"left", d.left}, {"kappa", to_json(d.kappa)}});
    json comm = json::array();
    for (const auto& c : r.commutators)
        comm.push_back({{"coeff", c.coef.str()}, {"left", c.left}, {"right", c.right}, {"bracket", to_json(c.bracket)}});
    json levi = json::object();
    for (const auto& [k, v] : r.levi) levi[k] = to_json(v);
    return {{"residual", to_json(r.residual)}, {"levi", levi}, {"dropped", dropped}, {"commutators", comm}};
}

json to_json(const DiffOp& op) {
    json out = json::array();
    for (const auto& [a, c] : op.terms) {
        json mi = json::object();
        for (const auto& [k, v] : a) mi[k] = v;
        out.push_back({{"multi_index", mi}, {"coeff", to_json(c)}});
    }
    return out;
}

DiffOp diffop_from_json(const json& j) {
    DiffOp op;
    for (const auto& t : j) {
        MultiIndex a;
        for (const auto& [k, v] : t.at("multi_index").items()) a[k] = v.get<int>();
        op.add(a, laurent_from_json(t.at("coeff")));
    }
    return op;
}

json to_json(const CompareReport& r) {
    json out = json::array();
    for (const auto& d : r.differences)
        out.push_back({{"multi_index", multi_index_str(d.index)}, {"derived", d.derived.str()},
                       {"reference", d.reference.str()}, {"difference", d.difference.str()}});
    return out;
}

json to_json(const IwasawaReport& r) {
    json out = json::array();
    for (const auto& c : r.checks) {
        json e = {{"generator", c.generator}, {"relation", c.relation}, {"holds", c.holds}};
        if (c.shift_form) e["shift_form"] = *c.shift_form;
        if (!c.detail.empty()) e["detail"] = c.detail;
        out.push_back(e);
    }
    return out;
}

}  // namespace rankone
