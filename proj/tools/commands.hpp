#pragma once

#include "rankone/serialize.hpp"

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace rankone::cli {

struct Check {
    std::string name;
    bool pass = false;
    double value = 0;
    double tolerance = 0;
};

// Collects output files and pass/fail checks for one command run; the
// manifest written at the end lists every file with its SHA-256.
class Run {
public:
    Run(std::string command, json config, std::filesystem::path out);

    const json& cfg() const { return cfg_; }
    double num(const std::string& path) const;
    int integer(const std::string& path) const;
    std::string str(const std::string& path) const;
    std::vector<double> numbers(const std::string& path) const;

    void write(const std::string& name, const std::string& content);
    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
    void check(const std::string& name, bool pass, double value, double tolerance);
    bool all_pass() const;
    void finish();

private:
    std::string command_;
    json cfg_;
    std::filesystem::path out_;
    std::vector<std::pair<std::string, std::string>> files_;  // name, sha256
    std::vector<Check> checks_;
};

std::complex<double> parse_complex(const std::string& s);
std::string format_complex(std::complex<double> z);
std::string format_double(double v);

json default_config(const std::string& command);

int derive_casimir(Run& run);
int verify_brackets(Run& run);
int positivity(Run& run);
int tail_bound(Run& run);
int truncation_bound(Run& run);
int spectrum(Run& run);
int eisenstein(Run& run);
int truncate(Run& run);
int continuation(Run& run);
int heights(Run& run);
int general_place(Run& run);

}  // namespace rankone::cli
