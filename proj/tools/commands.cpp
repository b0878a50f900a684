#include "commands.hpp"

#include "rankone/cuspspec.hpp"
#include "rankone/eiscont.hpp"
#include "rankone/heights.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

namespace rankone::cli {

namespace fs = std::filesystem;

namespace {

std::string sha256(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

const json& at_path(const json& cfg, const std::string& path) {
    const json* j = &cfg;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = path.find('.', start);
        std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!j->is_object() || !j->contains(key)) throw ConfigError("missing config key '" + path + "'");
        j = &(*j)[key];
        if (dot == std::string::npos) return *j;
        start = dot + 1;
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

GridParams grid_params(const Run& run) {
    GridParams gp;
    gp.family = parse_family(run.str("family"));
    gp.r = run.integer("r");
    gp.n_y = run.integer("grid.ny");
    gp.y_lo = run.num("grid.ylo");
    gp.y_hi = run.num("grid.yhi");
    gp.xi_max = run.integer("modes.max");
    gp.a = run.num("a");
    return gp;
}

DiscreteOperator constrained_operator(const Run& run) {
    GridParams gp = grid_params(run);
    return apply_pseudocusp_constraint(assemble(gp.family, build_grid(gp)), gp.a);
}

FormSpec form_from(const Run& run) {
    Family f = parse_family(run.str("family"));
    if (f != Family::GeneralQ) return make_form(f, run.integer("r"));
    std::vector<Signature> real;
    for (const auto& pq : split(run.str("real_places"), ';')) {
        auto parts = split(pq, ',');
        if (parts.size() != 2) throw ConfigError("real place signature must be 'p,q'");
        real.push_back({std::stoi(parts[0]), std::stoi(parts[1])});
    }
    // one definite real place by default
    if (real.empty() && run.integer("complex_places") == 0) real.push_back({run.integer("r") - 1, 0});
    return make_form(f, run.integer("r"), real, run.integer("complex_places"));
}

RationalVector parse_rational_vector(const std::string& s) {
    RationalVector x;
    for (const auto& p : split(s, ',')) x.push_back(Rational::parse(p));
    if (x.empty()) throw ConfigError("empty vector '" + s + "'");
    return x;
}

json rational_vector_json(const RationalVector& x) {
    json j = json::array();
    for (const auto& q : x) j.push_back(q.pretty());
    return j;
}

json height_json(const HeightReport& h) {
    json fin = json::object();
    for (const auto& [p, v] : h.finite) fin[std::to_string(p)] = v.pretty();
    return {{"global", h.global}, {"global_squared", h.global_squared.pretty()}, {"archimedean", h.archimedean}, {"finite", fin}};
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    static const std::regex re(R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i)?$)");
    std::smatch m;
    if (s.empty() || !std::regex_match(s, m, re)) throw ConfigError("cannot parse complex number '" + text + "'");
    double re_part = m[1].matched ? std::stod(m[1].str()) : 0.0, im_part = 0.0;
    if (s.back() == 'i') {
        std::string im = m[2].str();
        if (im.empty() || im == "+")
            im_part = 1;
        else if (im == "-")
            im_part = -1;
        else
            im_part = std::stod(im);
    }
    return {re_part, im_part};
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    return fmt::format("{:.12g}", v);
}

std::string format_complex(std::complex<double> z) {
    if (z.imag() == 0) return format_double(z.real());
    return fmt::format("{:.12g}{:+.12g}i", z.real(), z.imag());
}

Run::Run(std::string command, json config, fs::path out) : command_(std::move(command)), cfg_(std::move(config)), out_(std::move(out)) {
    fs::create_directories(out_);
}

double Run::num(const std::string& path) const {
    const json& j = at_path(cfg_, path);
    if (j.is_string()) return std::stod(j.get<std::string>());
    return j.get<double>();
}
int Run::integer(const std::string& path) const {
    const json& j = at_path(cfg_, path);
    if (j.is_string()) return std::stoi(j.get<std::string>());
    return j.get<int>();
}
std::string Run::str(const std::string& path) const {
    const json& j = at_path(cfg_, path);
    return j.is_string() ? j.get<std::string>() : j.dump();
}
std::vector<double> Run::numbers(const std::string& path) const {
    const json& j = at_path(cfg_, path);
    std::vector<double> out;
    if (j.is_array())
        for (const auto& v : j) out.push_back(v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>());
    else if (j.is_string())
        for (const auto& p : split(j.get<std::string>(), ',')) out.push_back(std::stod(p));
    else
        out.push_back(j.get<double>());
    return out;
}

void Run::write(const std::string& name, const std::string& content) {
    std::ofstream os(out_ / name, std::ios::binary);
    os << content;
    if (!os) throw ConfigError("cannot write " + (out_ / name).string());
    files_.emplace_back(name, sha256(content));
}

void Run::check(const std::string& name, bool pass, double value, double tolerance) {
    checks_.push_back({name, pass, value, tolerance});
}

bool Run::all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

void Run::finish() {
    json files = json::array(), checks = json::array();
    for (const auto& [n, h] : files_) files.push_back({{"name", n}, {"sha256", h}});
    for (const auto& c : checks_)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance}});
    json m = {{"command", command_}, {"config", cfg_}, {"files", files}, {"checks", checks}, {"pass", all_pass()}};
    std::string text = m.dump(2) + "\n";
    std::ofstream(out_ / "manifest.json", std::ios::binary) << text;
}

json default_config(const std::string& command) {
    json c = {
        {"family", "O"},
        {"r", 2},
        {"real_places", ""},
        {"complex_places", 0},
        {"grid", {{"ny", 256}, {"ylo", 1.0}, {"yhi", 64.0}}},
        {"modes", {{"max", 8}}},
        {"a", 2.0},
        {"a1", 4.0},
        {"a2", 2.0},
        {"T", 2.0},
        {"s", "1.5"},
        {"s_grid", ""},
        {"seed", 1},
        {"samples", 1000},
        {"c", json::array({4.0, 10.0, 25.0})},
        {"t", json::array({1.0, 2.0, 4.0, 8.0})},
        {"k", 10},
        {"nx", 32},
        {"truncation", 2000},
        {"u", ""},
        {"dim", 3},
        {"x", ""},
        {"scaling_t", ""},
        {"finite_c", 0.0},
        {"n", 2},
        {"box", 0},
        {"tol",
         {{"positivity", 1e-12},
          {"spectrum", 1e-10},
          {"mesh", 0.01},
          {"residual", 1e-3},
          {"A", 1e-3},
          {"agreement", 0.02},
          {"mass", 0.95},
          {"delta", 1e-10}}},
    };
    if (command == "eisenstein") {
        c["a"] = 8.0;
        c["grid"]["ny"] = 512;
    } else if (command == "continue") {
        c["a"] = 20.0;
        c["grid"]["ny"] = 512;
        c["modes"]["max"] = 0;
        c["s_grid"] = "1.5,0.75+2i";
    } else if (command == "truncate") {
        c["grid"]["ny"] = 160;
        c["nx"] = 16;
        c["truncation"] = 500;
    } else if (command == "general-place") {
        c["family"] = "GeneralQ";
        c["samples"] = 100;
    } else if (command == "positivity" || command == "tail-bound") {
        c["grid"]["ny"] = 128;
    }
    return c;
}

// ---------------------------------------------------------------- exactlie / diffcas

int derive_casimir(Run& run) {
    FormSpec spec = form_from(run);
    Derivation d = derive_laplacian(spec);
    ReferenceFormula ref = reference_formula(spec, true);
    CompareReport cmp = compare_diffop(d.op, ref.op, ref.renorm);
    json out = {{"family", family_name(spec.family)},
                {"r", spec.r},
                {"basis", to_json(d.basis)},
                {"casimir", to_json(d.omega)},
                {"reduction", to_json(d.reduction)},
                {"operator", to_json(d.op)},
                {"measure_exponent", d.frame.measure_exponent},
                {"reference", ref.label}};
    if (ref.renorm) {
        out["renormalization"] = ref.renorm->note;
        out["renormalized_operator"] = to_json(renormalize(d.op, *ref.renorm));
    }
    out["diff"] = to_json(cmp);
    run.write_json("casimir.json", out);
    run.write("operator.txt", d.op.str() + "\n");
    run.check("reference_diff_empty", cmp.equal(), static_cast<double>(cmp.differences.size()), 0);
    run.check("reduction_reconstructs", reduction_reconstructs(d.omega, d.reduction), 0, 0);
    return 0;
}

int verify_brackets(Run& run) {
    FormSpec spec = form_from(run);
    LieBasis b = build_basis(spec);
    auto duals = dual_basis(b);
    json pairing = json::array(), dual = json::object(), brackets = json::array();
    int defects = 0, duality = 0, inexpressible = 0;
    for (const auto& g : b.gens) {
        defects += !isometry_defect(spec, g.m).is_zero();
        json row = json::array();
        for (const auto& h : b.gens) row.push_back(trace_pairing(b, g.m, h.m).pretty());
        pairing.push_back(row);
    }
    for (const auto& d : duals) {
        dual[d.name] = to_json(d.dual);
        for (const auto& g : b.gens)
            duality += trace_pairing(b, g.m, evaluate(b, d.dual)) != Rational(g.name == d.name ? 1 : 0);
    }
    for (int i = 0; i < b.size(); ++i)
        for (int j = i + 1; j < b.size(); ++j) {
            const auto& gi = b.gens[static_cast<std::size_t>(i)];
            const auto& gj = b.gens[static_cast<std::size_t>(j)];
            ExactMatrix br = bracket(gi.m, gj.m);
            if (br.is_zero()) continue;
            auto e = express(b, br);
            if (!e) {
                ++inexpressible;
                continue;
            }
            brackets.push_back({{"left", gi.name}, {"right", gj.name}, {"bracket", to_json(*e)}});
        }
    IwasawaReport iw = verify_iwasawa_relations(spec);
    int failed = 0;
    for (const auto& c : iw.checks) failed += !c.holds;
    run.write_json("brackets.json", {{"family", family_name(spec.family)},
                                     {"r", spec.r},
                                     {"generators", b.size()},
                                     {"pairing", pairing},
                                     {"duals", dual},
                                     {"brackets", brackets},
                                     {"iwasawa", to_json(iw)}});
    run.check("isometry_condition", defects == 0, defects, 0);
    run.check("dimension", b.size() == expected_dimension(spec), b.size(), expected_dimension(spec));
    run.check("pairing_duality", duality == 0, duality, 0);
    run.check("bracket_closure", inexpressible == 0, inexpressible, 0);
    run.check("iwasawa_relations", failed == 0, failed, 0);
    return 0;
}

// ---------------------------------------------------------------- cuspspec

int positivity(Run& run) {
    DiscreteOperator op = constrained_operator(run);
    std::mt19937_64 rng(static_cast<unsigned long>(run.integer("seed")));
    const double a = run.num("a"), tol = run.num("tol.positivity");
    const int samples = run.integer("samples");
    double mins[6] = {1e300, 1e300, 1e300, 1e300, 1e300, 1e300};
    const char* names[6] = {"total", "radial", "tangential_y2", "tangential_y4", "perturbed", "split_difference"};
    for (int n = 0; n < samples; ++n) {
        GridFunction f = random_grid_function(op, rng);
        FormParts p = form_parts(op, f);
        auto [sy, sa] = tangential_split(op, f, a);
        double v[6] = {p.total(), p.radial, p.tangential2, p.tangential4, perturbed_fragment(op, f, a, a), sy - sa};
        for (int i = 0; i < 6; ++i) mins[i] = std::min(mins[i], v[i]);
    }
    std::string csv = "fragment,min_value\n";
    for (int i = 0; i < 6; ++i) {
        csv += fmt::format("{},{}\n", names[i], format_double(mins[i]));
        run.check(std::string("min_") + names[i], mins[i] >= -tol, mins[i], -tol);
    }
    run.write("positivity.csv", csv);
    return 0;
}

int tail_bound(Run& run) {
    DiscreteOperator op = constrained_operator(run);
    std::mt19937_64 rng(static_cast<unsigned long>(run.integer("seed")));
    const int samples = run.integer("samples");
    std::vector<double> cs = run.numbers("c");
    std::vector<double> worst(cs.size(), 0.0);
    std::vector<int> violations(cs.size(), 0);
    for (int n = 0; n < samples; ++n) {
        GridFunction f = random_grid_function(op, rng);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            TailBoundResult t = check_tail_bound(op, f, cs[i]);
            worst[i] = std::max(worst[i], t.ratio);
            violations[i] += !t.holds;
        }
    }
    std::string csv = "c,max_ratio,bound,violations\n";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const double bound = 1.0 / (cs[i] * cs[i]);
        csv += fmt::format("{},{},{},{}\n", format_double(cs[i]), format_double(worst[i]), format_double(bound), violations[i]);
        run.check("tail_ratio_c=" + format_double(cs[i]), violations[i] == 0 && worst[i] <= bound, worst[i], bound);
    }
    run.write("tail_bound.csv", csv);
    return 0;
}

int truncation_bound(Run& run) {
    GridParams gp = grid_params(run);
    DiscreteOperator op = assemble(gp.family, build_grid(gp));
    std::mt19937_64 rng(static_cast<unsigned long>(run.integer("seed")));
    const int samples = run.integer("samples");
    std::string csv = "t,max_ratio,constant\n";
    double constant = -1;
    bool same = true;
    for (double t : run.numbers("t")) {
        double worst = 0, c = 0;
        bool holds = true;
        for (int n = 0; n < samples; ++n) {
            TruncationResult r = check_truncation_bound(op, random_grid_function(op, rng, false), t);
            worst = std::max(worst, r.ratio);
            holds = holds && r.holds;
            c = r.constant;
        }
        if (constant < 0) constant = c;
        same = same && c == constant;
        csv += fmt::format("{},{},{}\n", format_double(t), format_double(worst), format_double(c));
        run.check("truncation_t=" + format_double(t), holds, worst, c);
    }
    run.check("constant_independent_of_t", same, constant, constant);
    run.write("truncation_bound.csv", csv);
    return 0;
}

int spectrum(Run& run) {
    const int k = run.integer("k");
    DiscreteOperator op = constrained_operator(run);
    SpectrumResult s = rankone::spectrum(op, k);
    Run& r = run;
    std::string csv = "index,value,residual\n";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        csv += fmt::format("{},{},{}\n", i, format_double(s.eigenvalues[i]), format_double(s.residuals[i]));
    r.write("spectrum.csv", csv);

    GridParams fine = grid_params(run);
    fine.n_y *= 2;
    SpectrumResult s2 = rankone::spectrum(apply_pseudocusp_constraint(assemble(fine.family, build_grid(fine)), fine.a), k);
    double change = 0, floor = 0;
    for (std::size_t i = 0; i < s.eigenvalues.size() && i < s2.eigenvalues.size(); ++i)
        change = std::max(change, std::abs(s2.eigenvalues[i] - s.eigenvalues[i]) / std::abs(s2.eigenvalues[i]));
    for (double v : s.eigenvalues) floor = std::min(floor, v);
    json meta = {{"family", run.str("family")},
                 {"r", run.integer("r")},
                 {"dof", op.dof_count()},
                 {"resolvent_error", s.resolvent_error},
                 {"truncation_floor", s.truncation_floor},
                 {"mode", s.mode},
                 {"refined_eigenvalues", s2.eigenvalues},
                 {"max_relative_change", change}};
    r.write_json("spectrum.json", meta);
    r.check("eigenvalue_count", static_cast<int>(s.eigenvalues.size()) == k, static_cast<double>(s.eigenvalues.size()), k);
    r.check("nonnegative", floor >= -run.num("tol.spectrum"), floor, -run.num("tol.spectrum"));
    r.check("mesh_refinement", change < run.num("tol.mesh"), change, run.num("tol.mesh"));
    return 0;
}

// ---------------------------------------------------------------- eiscont

int eisenstein(Run& run) {
    const cplx s = parse_complex(run.str("s"));
    GridParams gp = grid_params(run);
    gp.family = Family::O;
    gp.r = 2;
    std::vector<double> res;
    ConstantTermFit fit;
    std::string csv = "y,constant_term\n";
    for (int ny : {gp.n_y / 2, gp.n_y}) {
        GridParams p = gp;
        p.n_y = ny;
        CylinderGrid g = build_grid(p);
        DiscreteOperator op = assemble(Family::O, g);
        SampledFunction f = sample_eisenstein(s, g.y, run.integer("nx"), run.integer("truncation"));
        res.push_back(eigen_residual(op, to_modes(f, g), s * (s - 1.0), [&](int k) { return k > 0 && k + 1 < g.n(); }));
        if (ny == gp.n_y) {
            Eigen::VectorXcd prof = constant_term_profile(f);
            fit = fit_constant_term(g.y, prof, s, default_fit_window(g.y));
            for (int k = 0; k < g.n(); ++k) csv += fmt::format("{},{}\n", format_double(g.y[static_cast<std::size_t>(k)]), format_complex(prof(k)));
        }
    }
    const double order = std::log2(res[0] / res[1]);
    run.write("constant_term.csv", csv);
    run.write_json("eisenstein.json", {{"s", format_complex(s)},
                                       {"lambda", format_complex(s * (s - 1.0))},
                                       {"residual_half", res[0]},
                                       {"residual", res[1]},
                                       {"observed_order", order},
                                       {"A", format_complex(fit.A)},
                                       {"B", format_complex(fit.B)},
                                       {"fit_residual", fit.residual}});
    run.check("eigen_residual", res[1] <= run.num("tol.residual"), res[1], run.num("tol.residual"));
    run.check("second_order", order > 1.8, order, 1.8);
    run.check("A_equals_one", std::abs(fit.A - 1.0) <= run.num("tol.A"), std::abs(fit.A - 1.0), run.num("tol.A"));
    return 0;
}

int truncate(Run& run) {
    const cplx s = parse_complex(run.str("s"));
    const double T = run.num("T"), y_hi = run.num("grid.yhi");
    const int n = run.integer("grid.ny");
    std::vector<double> ys;
    for (int i = 0; i < n; ++i) ys.push_back(std::pow(y_hi, static_cast<double>(i) / (n - 1)));
    TruncatedEisenstein t = truncate_eisenstein(s, T, ys, run.integer("nx"), run.integer("truncation"));
    Eigen::VectorXcd c = constant_term_profile(t.f);
    double above = 0;
    for (std::size_t k = 0; k < ys.size(); ++k)
        if (ys[k] > T) above = std::max(above, std::abs(c(static_cast<Eigen::Index>(k))));
    std::string csv = "y0,y1,sup\n";
    for (const auto& b : t.bands) csv += fmt::format("{},{},{}\n", format_double(b.y0), format_double(b.y1), format_double(b.sup));
    run.write("bands.csv", csv);
    run.write_json("truncate.json", {{"s", format_complex(s)}, {"T", T}, {"constant_term_above_T", above}, {"rapid_decay", t.rapid_decay}});
    run.check("rapid_decay", t.rapid_decay, t.bands.empty() ? 0 : t.bands.back().sup, 0);
    run.check("constant_term_above_T", above <= 1e-10, above, 1e-10);
    return 0;
}

int continuation(Run& run) {
    GridParams gp = grid_params(run);
    gp.family = Family::O;
    gp.r = 2;
    CylinderGrid g = build_grid(gp);
    DiscreteOperator op = assemble(Family::O, g);
    ContinuationParams p;
    p.a = run.num("a");
    p.a1 = run.num("a1");
    p.a2 = run.num("a2");
    std::vector<std::string> sv = split(run.str("s_grid"), ',');
    if (sv.empty()) sv.push_back(run.str("s"));
    std::string csv = "s,lambda_s,A,B,interior_residual,eta_coefficient,agreement_error\n";
    const double lo = p.a1 + 1, hi = p.a - 2;
    for (const auto& text : sv) {
        const cplx s = parse_complex(text);
        ContinuationResult r = continue_eisenstein(s, op, p);
        std::vector<double> y;
        std::vector<cplx> vals;
        double agree = std::nan("");
        if (s.real() > 1) agree = 0;
        for (int k = 0; k < g.n(); ++k) {
            const double yk = g.y[static_cast<std::size_t>(k)];
            if (yk < lo || yk > hi) continue;
            y.push_back(yk);
            vals.push_back(r.E(k));
            if (s.real() > 1)
                for (double x : {0.0, 0.125, 0.25, 0.375, 0.5}) {
                    cplx e = eisenstein_series({x, yk}, s, run.integer("truncation")).value;
                    agree = std::max(agree, std::abs(r.E(k) - e) / std::abs(e));
                }
        }
        Eigen::VectorXcd prof = Eigen::Map<Eigen::VectorXcd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
        ConstantTermFit fit = fit_constant_term(y, prof, s, {lo, hi});
        csv += fmt::format("{},{},{},{},{},{},{}\n", format_complex(s), format_complex(r.lambda), format_complex(fit.A),
                           format_complex(fit.B), format_double(r.interior_residual), format_complex(r.eta_coefficient),
                           format_double(agree));
        run.check("interior_residual_s=" + format_complex(s), r.interior_residual <= run.num("tol.residual"), r.interior_residual,
                  run.num("tol.residual"));
        run.check("residual_near_a_s=" + format_complex(s), r.residual_mass_fraction >= run.num("tol.mass"),
                  r.residual_mass_fraction, run.num("tol.mass"));
        run.check("constraint_s=" + format_complex(s), r.correction_above_cut == 0.0, r.correction_above_cut, 0);
        if (!std::isnan(agree))
            run.check("agreement_s=" + format_complex(s), agree <= run.num("tol.agreement"), agree, run.num("tol.agreement"));
    }
    run.write("continuation.csv", csv);
    return 0;
}

// ---------------------------------------------------------------- heights

int heights(Run& run) {
    json out = json::object();
    const std::string xs = run.str("x"), ts = run.str("scaling_t");
    if (!xs.empty()) {
        RationalVector x = parse_rational_vector(xs);
        out["x"] = rational_vector_json(x);
        out["height"] = height_json(global_height(x));
        if (!ts.empty()) {
            Rational t = Rational::parse(ts);
            ScalingCheck sc = scaling_check(t, x);
            out["scaling"] = {{"t", t.pretty()},
                              {"eta_tx", height_json(sc.scaled)},
                              {"eta_x", height_json(sc.base)},
                              {"idele_norm_t", sc.norm_t.pretty()},
                              {"equal", sc.exact_equal}};
            run.check("scaling_exact", sc.exact_equal, 0, 0);
        }
    }
    const double c = run.num("finite_c");
    if (c > 0) {
        const int n = run.integer("n");
        long box = run.integer("box");
        if (box <= 0) box = static_cast<long>(std::ceil(c));
        auto classes = finite_below(c, n, box);
        out["finite_below"] = {{"c", c}, {"n", n}, {"box", box}, {"classes", classes}};
        run.check("finite_below_count", true, static_cast<double>(classes.size()), 0);
    }
    if (out.empty()) throw ConfigError("heights needs --x (optionally with --t) or --finite-below");
    run.write_json("heights.json", out);
    return 0;
}

// ---------------------------------------------------------------- general places

int general_place(Run& run) {
    std::mt19937_64 rng(static_cast<unsigned long>(run.integer("seed")));
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> angle(0, 2 * 3.14159265358979323846);
    const int d = run.integer("dim"), samples = run.integer("samples");
    const std::string us = run.str("u");
    double delta = 0, claim = 0, herm = 0;
    std::vector<Eigen::MatrixXd> real_samples;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    for (int n = 0; n < samples; ++n) {
        Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(d, d), Kr = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                K(i, j) = {0.5 * nd(rng), 0.5 * nd(rng)};
                K(j, i) = -K(i, j);
                Kr(i, j) = K(i, j).real();
                Kr(j, i) = -Kr(i, j);
            }
        Eigen::MatrixXcd h = (I - K) * (I + K).inverse();
        cplx u = us.empty() ? std::polar(1.0, angle(rng)) : parse_complex(us);
        ComplexPlaceReport rep = complex_place_coeffs(u, h, 1e-9);
        delta = std::max(delta, rep.delta_error);
        claim = std::max(claim, rep.claim_error);
        herm = std::max(herm, rep.hermitian_error);
        Eigen::MatrixXd hr = ((I - Kr) * (I + Kr).inverse()).real();
        real_samples.push_back(hr.transpose() * hr);
    }
    EllipticBounds eb = elliptic_bounds(real_samples);
    run.write_json("general_place.json", {{"samples", samples},
                                          {"dim", d},
                                          {"max_delta_error", delta},
                                          {"max_claim_error", claim},
                                          {"max_hermitian_error", herm},
                                          {"elliptic_lower", eb.a},
                                          {"elliptic_upper", eb.b}});
    run.check("complex_place_M_equals_delta", delta <= run.num("tol.delta"), delta, run.num("tol.delta"));
    run.check("M_equals_hermitian_form", herm <= run.num("tol.delta"), herm, run.num("tol.delta"));
    run.check("elliptic_lower_positive", eb.a > 0, eb.a, 0);
    return 0;
}

}  // namespace rankone::cli
