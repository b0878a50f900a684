#include "rankone/lie.hpp"

#include <algorithm>
#include <set>

namespace rankone {

std::string family_name(Family f) {
    switch (f) {
        case Family::O: return "O";
        case Family::U: return "U";
        case Family::Sp: return "Sp";
        case Family::GeneralQ: return "GeneralQ";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    if (s == "O") return Family::O;
    if (s == "U") return Family::U;
    if (s == "Sp" || s == "Sp*" || s == "SpStar") return Family::Sp;
    if (s == "GeneralQ" || s == "general") return Family::GeneralQ;
    throw UnsupportedFamily("unknown family '" + s + "'");
}

std::string role_name(GenRole r) {
    switch (r) {
        case GenRole::P: return "p";
        case GenRole::K: return "k";
        case GenRole::Partner: return "partner";
        case GenRole::Levi: return "levi";
    }
    return "?";
}

namespace {

ExactMatrix local_form(int r, const std::vector<int>& eps) {
    const int n = r + 1;
    ExactMatrix S(n, n);
    S(0, n - 1) = Scalar(1);
    S(n - 1, 0) = Scalar(1);
    for (int a = 1; a < n - 1; ++a) S(a, a) = Scalar(eps[static_cast<std::size_t>(a - 1)]);
    return S;
}

std::vector<int> signs_of(const Signature& s) {
    std::vector<int> e(static_cast<std::size_t>(s.p), 1);
    e.insert(e.end(), static_cast<std::size_t>(s.q), -1);
    return e;
}

}  // namespace

FormSpec make_form(Family family, int r, std::vector<Signature> real_places, int complex_places) {
    if (r < 2) throw UnsupportedFamily("r must be at least 2, got " + std::to_string(r));
    FormSpec spec;
    spec.family = family;
    spec.r = r;
    if (family != Family::GeneralQ) {
        if (!real_places.empty() || complex_places != 0)
            throw UnsupportedFamily("place data only applies to GeneralQ");
        spec.S = local_form(r, std::vector<int>(static_cast<std::size_t>(r - 1), 1));
        return spec;
    }
    if (real_places.empty() && complex_places == 0)
        throw UnsupportedFamily("GeneralQ needs at least one archimedean place");
    for (const auto& sg : real_places)
        if (sg.p < 0 || sg.q < 0 || sg.p + sg.q != r - 1)
            throw UnsupportedFamily("real place signature must satisfy p+q = r-1");
    if (complex_places < 0) throw UnsupportedFamily("negative complex place count");
    spec.real_places = std::move(real_places);
    spec.complex_places = complex_places;
    const int n = r + 1;
    const int places = static_cast<int>(spec.real_places.size()) + complex_places;
    spec.S = ExactMatrix(n * places, n * places);
    int off = 0;
    for (const auto& sg : spec.real_places) {
        spec.S.set_block(off, off, local_form(r, signs_of(sg)));
        off += n;
    }
    for (int c = 0; c < complex_places; ++c) {
        spec.S.set_block(off, off, local_form(r, std::vector<int>(static_cast<std::size_t>(r - 1), 1)));
        off += n;
    }
    return spec;
}

int LieBasis::index(const std::string& name) const {
    for (std::size_t k = 0; k < gens.size(); ++k)
        if (gens[k].name == name) return static_cast<int>(k);
    throw UnknownGenerator("no generator named '" + name + "'");
}

int expected_dimension(const FormSpec& spec) {
    const int r = spec.r;
    switch (spec.family) {
        case Family::O: return (r + 1) * r / 2;
        case Family::U: return (r + 1) * (r + 1);
        case Family::Sp: return (r + 1) * (2 * r + 3);
        case Family::GeneralQ:
            return static_cast<int>(spec.real_places.size()) * (r + 1) * r / 2 +
                   spec.complex_places * (r + 1) * r;
    }
    return 0;
}

namespace {

// Builds generators for one place inside an n_total square model.
class Builder {
public:
    Builder(LieBasis& b, int n_total, int offset, int r, std::string suffix, int place)
        : b_(b), N_(n_total), off_(offset), r_(r), L_(r), suffix_(std::move(suffix)), place_(place) {}

    ExactMatrix e(int i, int j, const Scalar& v = Scalar(1)) const {
        return ExactMatrix::unit(N_, off_ + i, off_ + j, v);
    }
    int last() const { return L_; }

    int add(const std::string& name, const ExactMatrix& m, GenRole role, const std::string& coord = "") {
        Generator g;
        g.name = name + suffix_;
        g.m = m;
        g.role = role;
        g.coordinate = coord.empty() ? "" : coord + suffix_;
        g.place = place_;
        b_.gens.push_back(std::move(g));
        return static_cast<int>(b_.gens.size()) - 1;
    }
    void partner(int idx, int p, int sign) {
        auto& g = b_.gens[static_cast<std::size_t>(idx)];
        g.role = GenRole::Partner;
        g.partner = p;
        g.partner_sign = sign;
    }
    int r() const { return r_; }

private:
    LieBasis& b_;
    int N_, off_, r_, L_;
    std::string suffix_;
    int place_;
};

std::string ij(int a, int b) { return std::to_string(a) + "_" + std::to_string(b); }

void build_O(Builder& B, const std::vector<int>& eps, bool levi) {
    const int r = B.r(), L = B.last();
    B.add("H", B.e(0, 0) - B.e(L, L), GenRole::P, "y");
    std::vector<int> xs;
    for (int i = 1; i < r; ++i)
        xs.push_back(B.add("X" + std::to_string(i), B.e(0, i) - B.e(i, L, Scalar(eps[static_cast<std::size_t>(i - 1)])),
                           GenRole::P, "x" + std::to_string(i)));
    for (int i = 1; i < r; ++i) {
        int y = B.add("Y" + std::to_string(i), B.e(i, 0) - B.e(L, i, Scalar(eps[static_cast<std::size_t>(i - 1)])),
                      GenRole::Partner);
        B.partner(y, xs[static_cast<std::size_t>(i - 1)], 1);
    }
    for (int a = 1; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            int s = eps[static_cast<std::size_t>(a - 1)] * eps[static_cast<std::size_t>(b - 1)];
            B.add("th" + ij(a, b), B.e(a, b) - B.e(b, a, Scalar(s)), levi ? GenRole::Levi : GenRole::K);
        }
}

void build_complex_place(Builder& B) {
    const int r = B.r(), L = B.last();
    const Scalar I = Scalar::unit_i();
    B.add("H", B.e(0, 0) - B.e(L, L), GenRole::P, "y");
    B.add("Ht", B.e(0, 0, I) - B.e(L, L, I), GenRole::K);
    std::vector<int> xs, xts;
    for (int l = 1; l < r; ++l)
        xs.push_back(B.add("X" + std::to_string(l), B.e(0, l) - B.e(l, L), GenRole::P, "x" + std::to_string(l)));
    for (int l = 1; l < r; ++l)
        xts.push_back(B.add("Xt" + std::to_string(l), B.e(0, l, I) - B.e(l, L, I), GenRole::P, "v" + std::to_string(l)));
    for (int l = 1; l < r; ++l)
        B.partner(B.add("Y" + std::to_string(l), B.e(l, 0) - B.e(L, l), GenRole::Partner), xs[static_cast<std::size_t>(l - 1)], 1);
    for (int l = 1; l < r; ++l)
        B.partner(B.add("Yt" + std::to_string(l), B.e(l, 0, I) - B.e(L, l, I), GenRole::Partner),
                  xts[static_cast<std::size_t>(l - 1)], -1);
    for (int a = 1; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            B.add("th" + ij(a, b), B.e(a, b) - B.e(b, a), GenRole::Levi);
            B.add("ith" + ij(a, b), B.e(a, b, I) - B.e(b, a, I), GenRole::Levi);
        }
}

void build_U(Builder& B) {
    const int r = B.r(), L = B.last();
    const Scalar I = Scalar::unit_i();
    B.add("H", B.e(0, 0) - B.e(L, L), GenRole::P, "y");
    B.add("Ht", B.e(0, 0, I) + B.e(L, L, I), GenRole::K);
    std::vector<int> xs, xts;
    for (int l = 1; l < r; ++l)
        xs.push_back(B.add("X" + std::to_string(l), B.e(0, l) - B.e(l, L), GenRole::P, "u" + std::to_string(l)));
    for (int l = 1; l < r; ++l)
        xts.push_back(B.add("Xt" + std::to_string(l), B.e(0, l, I) + B.e(l, L, I), GenRole::P, "v" + std::to_string(l)));
    for (int l = 1; l < r; ++l)
        B.partner(B.add("Y" + std::to_string(l), B.e(l, 0) - B.e(L, l), GenRole::Partner), xs[static_cast<std::size_t>(l - 1)], 1);
    for (int l = 1; l < r; ++l)
        B.partner(B.add("Yt" + std::to_string(l), B.e(l, 0, I) + B.e(L, l, I), GenRole::Partner),
                  xts[static_cast<std::size_t>(l - 1)], -1);
    int zt = B.add("Zt", B.e(0, L, I), GenRole::P, "x");
    B.partner(B.add("Z", B.e(L, 0, I), GenRole::Partner), zt, -1);
    for (int a = 1; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            B.add("th" + ij(a, b), B.e(a, b) - B.e(b, a), GenRole::K);
            B.add("ith" + ij(a, b), B.e(a, b, I) + B.e(b, a, I), GenRole::K);
        }
    for (int a = 1; a < r; ++a) B.add("ith" + ij(a, a), B.e(a, a, I), GenRole::K);
}

void build_Sp(Builder& B) {
    const int r = B.r(), L = B.last();
    const char units[3] = {'i', 'j', 'k'};
    // N coordinates attached to X_{q,l} follow x + i w + j u + k v.
    const char* ncoord[3] = {"w", "u", "v"};
    B.add("H", B.e(0, 0) - B.e(L, L), GenRole::P, "y");
    for (char q : units) {
        Scalar Q = Scalar::unit(q);
        B.add(std::string("H") + q, B.e(0, 0, Q) + B.e(L, L, Q), GenRole::K);
    }
    std::vector<int> xs;
    for (int l = 1; l < r; ++l)
        xs.push_back(B.add("X" + std::to_string(l), B.e(0, l) - B.e(l, L), GenRole::P, "x" + std::to_string(l)));
    std::vector<std::vector<int>> xq(3);
    for (int u = 0; u < 3; ++u) {
        Scalar Q = Scalar::unit(units[u]);
        for (int l = 1; l < r; ++l)
            xq[static_cast<std::size_t>(u)].push_back(
                B.add(std::string("X") + units[u] + std::to_string(l), B.e(0, l, Q) + B.e(l, L, Q), GenRole::P,
                      std::string(ncoord[u]) + std::to_string(l)));
    }
    for (int l = 1; l < r; ++l)
        B.partner(B.add("Y" + std::to_string(l), B.e(l, 0) - B.e(L, l), GenRole::Partner), xs[static_cast<std::size_t>(l - 1)], 1);
    for (int u = 0; u < 3; ++u) {
        Scalar Q = Scalar::unit(units[u]);
        for (int l = 1; l < r; ++l)
            B.partner(B.add(std::string("Y") + units[u] + std::to_string(l), B.e(l, 0, Q) + B.e(L, l, Q), GenRole::Partner),
                      xq[static_cast<std::size_t>(u)][static_cast<std::size_t>(l - 1)], -1);
    }
    for (int u = 0; u < 3; ++u) {
        Scalar Q = Scalar::unit(units[u]);
        int zp = B.add(std::string("Z") + units[u] + "+", B.e(0, L, Q), GenRole::P, std::string("q") + units[u]);
        B.partner(B.add(std::string("Z") + units[u] + "-", B.e(L, 0, Q), GenRole::Partner), zp, -1);
    }
    for (int a = 1; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            B.add("th" + ij(a, b), B.e(a, b) - B.e(b, a), GenRole::K);
            for (char q : units) {
                Scalar Q = Scalar::unit(q);
                B.add(std::string(1, q) + "th" + ij(a, b), B.e(a, b, Q) + B.e(b, a, Q), GenRole::K);
            }
        }
    for (int a = 1; a < r; ++a)
        for (char q : units) B.add(std::string(1, q) + "th" + ij(a, a), B.e(a, a, Scalar::unit(q)), GenRole::K);
}

}  // namespace

ExactMatrix isometry_defect(const FormSpec& spec, const ExactMatrix& g) {
    bool hermitian = spec.family == Family::U || spec.family == Family::Sp;
    ExactMatrix gd = hermitian ? g.conj_transpose() : g.transpose();
    return gd * spec.S + spec.S * g;
}

bool in_compact(const ExactMatrix& g) { return (g.conj_transpose() + g).is_zero(); }

LieBasis build_basis(const FormSpec& spec) {
    if (spec.r < 2) throw UnsupportedFamily("r must be at least 2");
    LieBasis basis;
    basis.spec = spec;
    const int n = spec.r + 1;
    switch (spec.family) {
        case Family::O: {
            Builder B(basis, n, 0, spec.r, "", 0);
            build_O(B, std::vector<int>(static_cast<std::size_t>(spec.r - 1), 1), false);
            basis.places.push_back({"", 0, n, false, {spec.r - 1, 0}, 1});
            basis.normalization = "B(x,y)=Re tr(xy); theta_ab = e_ab - e_ba unnormalized (B(theta,theta) = -2)";
            break;
        }
        case Family::U: {
            Builder B(basis, n, 0, spec.r, "", 0);
            build_U(B);
            basis.places.push_back({"", 0, n, true, {}, 1});
            basis.normalization = "B(x,y)=Re tr(xy); standard generators, theta block unnormalized";
            break;
        }
        case Family::Sp: {
            Builder B(basis, n, 0, spec.r, "", 0);
            build_Sp(B);
            basis.places.push_back({"", 0, n, false, {}, 1});
            basis.normalization = "B(x,y)=Re tr(xy) with reduced quaternion trace; theta block unnormalized";
            break;
        }
        case Family::GeneralQ: {
            const int places = static_cast<int>(spec.real_places.size()) + spec.complex_places;
            int idx = 0;
            for (std::size_t k = 0; k < spec.real_places.size(); ++k, ++idx) {
                std::string label = "R" + std::to_string(k + 1);
                Builder B(basis, n * places, n * idx, spec.r, "@" + label, idx);
                build_O(B, signs_of(spec.real_places[k]), true);
                basis.places.push_back({label, n * idx, n, false, spec.real_places[k], 1});
            }
            for (int c = 0; c < spec.complex_places; ++c, ++idx) {
                std::string label = "C" + std::to_string(c + 1);
                Builder B(basis, n * places, n * idx, spec.r, "@" + label, idx);
                build_complex_place(B);
                basis.places.push_back({label, n * idx, n, true, {}, 2});
            }
            basis.normalization =
                "B = sum over places of Re tr at real places and 2 Re tr at complex places; Omega' opaque";
            break;
        }
    }
    for (const auto& g : basis.gens)
        if (!isometry_defect(spec, g.m).is_zero())
            throw UnsupportedFamily("internal: generator " + g.name + " violates the isometry condition");
    return basis;
}

ExactMatrix bracket(const ExactMatrix& a, const ExactMatrix& b) {
    if (!a.square() || a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("bracket of " + a.shape() + " and " + b.shape());
    return a * b - b * a;
}

Rational trace_pairing(const ExactMatrix& a, const ExactMatrix& b) {
    if (!a.square() || a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("pairing of " + a.shape() + " and " + b.shape());
    Rational t;
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) t += (a(i, k) * b(k, i)).re();
    return t;
}

Rational trace_pairing(const LieBasis& basis, const ExactMatrix& a, const ExactMatrix& b) {
    if (a.rows() != basis.spec.S.rows()) throw DimensionMismatch("element does not match basis size");
    Rational t;
    for (const auto& pl : basis.places) {
        Rational local;
        for (int i = pl.offset; i < pl.offset + pl.size; ++i)
            for (int k = pl.offset; k < pl.offset + pl.size; ++k) local += (a(i, k) * b(k, i)).re();
        t += local * Rational(pl.weight);
    }
    return t;
}

RationalMatrix pairing_matrix(const LieBasis& basis) {
    const auto n = basis.gens.size();
    RationalMatrix G(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) G[i][j] = G[j][i] = trace_pairing(basis, basis.gens[i].m, basis.gens[j].m);
    return G;
}

std::string combination_str(const LinearCombination& c) {
    std::string out;
    for (const auto& [name, q] : c) {
        if (!out.empty()) out += " + ";
        out += q.pretty() + "*" + name;
    }
    return out.empty() ? "0" : out;
}

ExactMatrix evaluate(const LieBasis& basis, const LinearCombination& c) {
    const int n = basis.spec.S.rows();
    ExactMatrix m(n, n);
    for (const auto& [name, q] : c) m += basis.at(name).m.scaled(q);
    return m;
}

namespace {

ExactMatrix to_exact(const RationalMatrix& G) {
    const int n = static_cast<int>(G.size());
    ExactMatrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = Scalar(G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return M;
}

ExactMatrix inverse_gram(const LieBasis& basis) {
    try {
        return inverse(to_exact(pairing_matrix(basis)));
    } catch (const SingularMatrix&) {
        throw DegeneratePairing("trace pairing Gram matrix is singular");
    }
}

std::optional<LinearCombination> express_with(const LieBasis& basis, const ExactMatrix& Ginv, const ExactMatrix& m) {
    const int n = basis.size();
    std::vector<Rational> b(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) b[static_cast<std::size_t>(k)] = trace_pairing(basis, m, basis.gens[static_cast<std::size_t>(k)].m);
    LinearCombination c;
    for (int j = 0; j < n; ++j) {
        Rational s;
        for (int k = 0; k < n; ++k) s += Ginv(j, k).re() * b[static_cast<std::size_t>(k)];
        if (!s.is_zero()) c[basis.gens[static_cast<std::size_t>(j)].name] = s;
    }
    if (!(evaluate(basis, c) == m)) return std::nullopt;
    return c;
}

}  // namespace

std::optional<LinearCombination> express(const LieBasis& basis, const ExactMatrix& m) {
    return express_with(basis, inverse_gram(basis), m);
}

std::vector<DualEntry> dual_basis(const LieBasis& basis) {
    ExactMatrix D = inverse_gram(basis);
    std::vector<DualEntry> out;
    const int n = basis.size();
    for (int i = 0; i < n; ++i) {
        DualEntry e;
        e.name = basis.gens[static_cast<std::size_t>(i)].name;
        for (int j = 0; j < n; ++j)
            if (!D(i, j).is_zero()) e.dual[basis.gens[static_cast<std::size_t>(j)].name] = D(i, j).re();
        out.push_back(std::move(e));
    }
    return out;
}

void CasimirElement::add(const std::vector<std::string>& word, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms.find(word);
    if (it == terms.end()) {
        terms.emplace(word, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

std::string CasimirElement::str() const {
    std::string out;
    for (const auto& [w, c] : terms) {
        std::string word;
        for (const auto& g : w) word += (word.empty() ? "" : "*") + g;
        if (word.empty()) word = "1";
        if (!out.empty()) out += c.sign() < 0 ? " - " : " + ";
        else if (c.sign() < 0) out += "-";
        out += c.abs().pretty() + "*" + word;
    }
    return out.empty() ? "0" : out;
}

CasimirElement casimir(const LieBasis& basis) {
    CasimirElement omega;
    for (const auto& d : dual_basis(basis))
        for (const auto& [name, q] : d.dual) omega.add({d.name, name}, q);
    omega.metadata["pairing"] = basis.normalization;
    omega.metadata["scalar_note"] = "trace pairing is a positive multiple of the Killing form; Omega scales inversely";
    return omega;
}

Reduction reduce_mod_k(const CasimirElement& omega, const LieBasis& basis) {
    const ExactMatrix Ginv = inverse_gram(basis);
    Reduction red;
    red.residual.metadata = omega.metadata;
    red.residual.metadata["reduced"] = "right factors in k dropped";

    auto role = [&](const std::string& name) -> const Generator& { return basis.at(name); };
    auto partner_split = [&](const Generator& g) {
        if (g.partner < 0) throw NonReducibleWord("generator " + g.name + " has no recorded partner");
        const auto& p = basis.gens[static_cast<std::size_t>(g.partner)];
        LinearCombination kappa{{g.name, Rational(1)}};
        kappa[p.name] -= Rational(g.partner_sign);
        if (kappa[p.name].is_zero()) kappa.erase(p.name);
        if (!in_compact(evaluate(basis, kappa)))
            throw NonReducibleWord(g.name + " - (" + std::to_string(g.partner_sign) + ")" + p.name + " is not in k");
        return std::make_pair(p.name, kappa);
    };

    std::map<std::vector<std::string>, Rational> work(omega.terms.begin(), omega.terms.end());
    auto push = [&](const std::vector<std::string>& w, const Rational& c) {
        if (c.is_zero()) return;
        auto& slot = work[w];
        slot += c;
        if (slot.is_zero()) work.erase(w);
    };

    for (int guard = 0; !work.empty(); ++guard) {
        if (guard > 1000000) throw NonReducibleWord("rewrite system did not terminate");
        auto it = work.begin();
        std::vector<std::string> w = it->first;
        Rational c = it->second;
        work.erase(it);

        bool all_levi = std::all_of(w.begin(), w.end(), [&](const std::string& g) { return role(g).role == GenRole::Levi; });
        if (!w.empty() && all_levi) {
            const auto& pl = basis.places[static_cast<std::size_t>(role(w.front()).place)];
            red.levi[pl.label].add(w, c);
            continue;
        }
        for (const auto& g : w)
            if (role(g).role == GenRole::Levi) throw NonReducibleWord("mixed Levi word");

        if (w.size() == 1) {
            const auto& g = role(w[0]);
            if (g.role == GenRole::P) {
                red.residual.add(w, c);
            } else if (g.role == GenRole::K) {
                red.dropped.push_back({c, "", {{g.name, Rational(1)}}});
            } else {
                auto [p, kappa] = partner_split(g);
                push({p}, c * Rational(g.partner_sign));
                red.dropped.push_back({c, "", kappa});
            }
            continue;
        }
        if (w.size() != 2) throw NonReducibleWord("word of degree " + std::to_string(w.size()));
        const auto& u = role(w[0]);
        const auto& v = role(w[1]);
        if (v.role == GenRole::K) {
            red.dropped.push_back({c, u.name, {{v.name, Rational(1)}}});
        } else if (v.role == GenRole::Partner) {
            auto [p, kappa] = partner_split(v);
            push({u.name, p}, c * Rational(v.partner_sign));
            red.dropped.push_back({c, u.name, kappa});
        } else if (u.role == GenRole::P) {
            red.residual.add(w, c);
        } else {
            auto br = express_with(basis, Ginv, bracket(u.m, v.m));
            if (!br) throw NonReducibleWord("[" + u.name + "," + v.name + "] is not in the span of the basis");
            push({v.name, u.name}, c);
            for (const auto& [g, q] : *br) push({g}, c * q);
            red.commutators.push_back({c, u.name, v.name, *br});
        }
    }
    for (auto& [label, el] : red.levi) red.residual.add({"Omega'" + (label.empty() ? "" : "@" + label)}, Rational(1));
    return red;
}

bool reduction_reconstructs(const CasimirElement& omega, const Reduction& red) {
    CasimirElement sum;
    for (const auto& [w, c] : red.residual.terms)
        if (w.size() != 1 || w[0].rfind("Omega'", 0) != 0) sum.add(w, c);
    for (const auto& [label, el] : red.levi)
        for (const auto& [w, c] : el.terms) sum.add(w, c);
    for (const auto& d : red.dropped)
        for (const auto& [g, q] : d.kappa) {
            if (d.left.empty()) sum.add({g}, d.coef * q);
            else sum.add({d.left, g}, d.coef * q);
        }
    for (const auto& s : red.commutators) {
        sum.add({s.left, s.right}, s.coef);
        sum.add({s.right, s.left}, -s.coef);
        for (const auto& [g, q] : s.bracket) sum.add({g}, -s.coef * q);
    }
    return sum == omega;
}

}  // namespace rankone
