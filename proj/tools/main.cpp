#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

using namespace rankone;
using namespace rankone::cli;

namespace {

enum class Kind { Int, Num, Str, NumList };

struct Flag {
    std::string name;  // command-line spelling without dashes
    std::string path;  // dotted config path
    Kind kind;
    std::string help;
};

const std::vector<Flag>& common_flags() {
    static const std::vector<Flag> f = {
        {"family", "family", Kind::Str, "O, U, Sp or GeneralQ"},
        {"r", "r", Kind::Int, "rank parameter r >= 2"},
        {"real-places", "real_places", Kind::Str, "GeneralQ real place signatures 'p,q;p,q'"},
        {"complex-places", "complex_places", Kind::Int, "GeneralQ complex place count"},
        {"grid.ny", "grid.ny", Kind::Int, "radial nodes"},
        {"grid.ylo", "grid.ylo", Kind::Num, "lower radial boundary"},
        {"grid.yhi", "grid.yhi", Kind::Num, "upper radial boundary (Dirichlet)"},
        {"modes.max", "modes.max", Kind::Int, "torus frequency bound |xi| <= max"},
        {"a", "a", Kind::Num, "cut height"},
        {"a1", "a1", Kind::Num, "a' (tau = 1 above)"},
        {"a2", "a2", Kind::Num, "a'' (tau = 0 below)"},
        {"T", "T", Kind::Num, "truncation height"},
        {"s", "s", Kind::Str, "spectral parameter 're+imi'"},
        {"s-grid", "s_grid", Kind::Str, "comma-separated spectral parameters"},
        {"seed", "seed", Kind::Int, "random seed"},
        {"samples", "samples", Kind::Int, "random samples"},
        {"c", "c", Kind::NumList, "tail heights"},
        {"t", "t", Kind::NumList, "cutoff parameters"},
        {"k", "k", Kind::Int, "eigenvalues to compute"},
        {"nx", "nx", Kind::Int, "periodic x samples"},
        {"truncation", "truncation", Kind::Int, "lattice-sum truncation"},
        {"u", "u", Kind::Str, "unit complex number at the complex place"},
        {"dim", "dim", Kind::Int, "size of h at the complex place"},
        {"tol.positivity", "tol.positivity", Kind::Num, ""},
        {"tol.spectrum", "tol.spectrum", Kind::Num, ""},
        {"tol.mesh", "tol.mesh", Kind::Num, ""},
        {"tol.residual", "tol.residual", Kind::Num, ""},
        {"tol.A", "tol.A", Kind::Num, ""},
        {"tol.agreement", "tol.agreement", Kind::Num, ""},
        {"tol.mass", "tol.mass", Kind::Num, ""},
        {"tol.delta", "tol.delta", Kind::Num, ""},
    };
    return f;
}

void set_path(json& cfg, const std::string& path, json value) {
    json* j = &cfg;
    std::size_t start = 0;
    for (std::size_t dot; (dot = path.find('.', start)) != std::string::npos; start = dot + 1) j = &(*j)[path.substr(start, dot - start)];
    (*j)[path.substr(start)] = std::move(value);
}

json typed(Kind k, const std::string& v) {
    switch (k) {
        case Kind::Int: return std::stoi(v);
        case Kind::Num: return std::stod(v);
        case Kind::NumList: {
            json a = json::array();
            std::size_t start = 0;
            while (start <= v.size()) {
                std::size_t comma = v.find(',', start);
                std::string part = v.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                if (!part.empty()) a.push_back(std::stod(part));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            return a;
        }
        default: return v;
    }
}

struct Sub {
    CLI::App* app;
    std::function<int(Run&)> fn;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config_file, out = "out";
    bool scaling = false;
    std::string finite;  // "c" or "c,n"
    std::vector<std::string> extras;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir operators, cusp spectra and Eisenstein continuation for rank-one groups"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::function<int(Run&)>>> commands = {
        {"derive-casimir", derive_casimir},   {"verify-brackets", verify_brackets}, {"positivity", positivity},
        {"tail-bound", tail_bound},           {"truncation-bound", truncation_bound}, {"spectrum", cli::spectrum},
        {"eisenstein", cli::eisenstein},      {"truncate", cli::truncate},          {"continue", continuation},
        {"heights", cli::heights},            {"general-place", general_place},
    };
    std::vector<std::unique_ptr<Sub>> subs;
    for (const auto& [name, fn] : commands) {
        auto s = std::make_unique<Sub>();
        s->app = app.add_subcommand(name);
        s->fn = fn;
        s->app->add_option("--config", s->config_file, "JSON config file; flags override it");
        s->app->add_option("--out", s->out, "output directory");
        for (const auto& f : common_flags()) s->options[f.name] = s->app->add_option("--" + f.name, s->values[f.name], f.help);
        if (name == "heights") {
            s->app->add_flag("--scaling-check", s->scaling, "compare eta(t x) with |t| eta(x)");
            s->options["x"] = s->app->add_option("--x", s->values["x"], "rational vector 'a,b/c,...'");
            s->app->add_option("--finite-below", s->finite, "list primitive classes with height < c ('c' or 'c,n')");
            s->options["box"] = s->app->add_option("--box", s->values["box"], "search box for --finite-below");
            s->app->add_option("assignments", s->extras, "key=value pairs (t=3 x=1,2)");
        }
        subs.push_back(std::move(s));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    for (auto& s : subs) {
        if (!s->app->parsed()) continue;
        const std::string name = s->app->get_name();
        try {
            json cfg = default_config(name);
            if (!s->config_file.empty()) {
                std::ifstream is(s->config_file);
                if (!is) throw ConfigError("cannot read config " + s->config_file);
                cfg.merge_patch(json::parse(is));
            }
            for (const auto& f : common_flags())
                if (s->options[f.name]->count() > 0) set_path(cfg, f.path, typed(f.kind, s->values[f.name]));
            if (name == "heights") {
                for (const auto& kv : s->extras) {
                    auto eq = kv.find('=');
                    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + kv + "'");
                    s->values[kv.substr(0, eq)] = kv.substr(eq + 1);
                }
                if (s->values.count("x") && !s->values["x"].empty()) cfg["x"] = s->values["x"];
                if (s->values.count("box") && !s->values["box"].empty()) cfg["box"] = std::stoi(s->values["box"]);
                // with --scaling-check the t flag is the scalar, not a cutoff list
                const std::string t = s->values["t"];
                if (!t.empty()) {
                    cfg["scaling_t"] = t;
                    cfg["t"] = default_config(name)["t"];
                } else if (s->scaling) {
                    throw ConfigError("--scaling-check needs t");
                }
                if (!s->finite.empty()) {
                    auto comma = s->finite.find(',');
                    cfg["finite_c"] = std::stod(s->finite.substr(0, comma));
                    if (comma != std::string::npos) cfg["n"] = std::stoi(s->finite.substr(comma + 1));
                }
            }
            Run run(name, cfg, s->out);
            int rc = s->fn(run);
            run.finish();
            std::cout << name << ": " << (run.all_pass() ? "all checks passed" : "CHECKS FAILED") << " (see "
                      << (std::filesystem::path(s->out) / "manifest.json").string() << ")\n";
            return rc != 0 ? rc : (run.all_pass() ? 0 : 1);
        } catch (const std::exception& e) {
            std::cerr << name << ": " << e.what() << "\n";
            return 2;
        }
    }
    return 2;
}
