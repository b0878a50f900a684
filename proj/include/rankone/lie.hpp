#pragma once

#include "rankone/matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rankone {

enum class Family { O, U, Sp, GeneralQ };

std::string family_name(Family f);
Family parse_family(const std::string& s);

struct Signature {
    int p = 0;
    int q = 0;
};

/**
 * @brief Rank-one form data. For GeneralQ the matrix S is the direct sum
 * of the local forms Q_nu (real places first, then complex places).
 */
struct FormSpec {
    Family family = Family::O;
    int r = 2;
    std::vector<Signature> real_places;
    int complex_places = 0;
    ExactMatrix S;
};

FormSpec make_form(Family family, int r, std::vector<Signature> real_places = {}, int complex_places = 0);

// How a generator acts on functions on G/K.
enum class GenRole {
    P,        // spans the Lie algebra of N A; acts by a first-order operator
    K,        // lies in the compact subalgebra; acts by zero
    Partner,  // equals sign * (a P generator) + (an element of k)
    Levi      // GeneralQ block of M^1_2; collected into the opaque symbol Omega'
};

std::string role_name(GenRole r);

struct Generator {
    std::string name;
    ExactMatrix m;
    GenRole role = GenRole::P;
    // Coordinate attached to a P generator: "y" for H, an N coordinate otherwise.
    std::string coordinate;
    int partner = -1;       // index of the P generator for a Partner
    int partner_sign = 0;   // +1 or -1
    int place = 0;          // block index (GeneralQ)
};

// One archimedean place inside the block-diagonal matrix model.
struct PlaceBlock {
    std::string label;  // "" for the concrete families, "R1", "C1", ...
    int offset = 0;
    int size = 0;
    bool complex = false;
    Signature signature;
    int weight = 1;  // pairing weight: 2 at complex places
};

struct LieBasis {
    FormSpec spec;
    std::vector<Generator> gens;
    std::vector<PlaceBlock> places;
    std::string normalization;  // which pairing and generator scaling produced this basis

    int index(const std::string& name) const;
    const Generator& at(const std::string& name) const { return gens.at(static_cast<std::size_t>(index(name))); }
    int size() const { return static_cast<int>(gens.size()); }
};

// Real dimension of the isometry algebra from closed formulas.
int expected_dimension(const FormSpec& spec);

LieBasis build_basis(const FormSpec& spec);

// gamma^dagger S + S gamma; transpose at real and complex-bilinear places,
// conjugate transpose for U and Sp*.
ExactMatrix isometry_defect(const FormSpec& spec, const ExactMatrix& gamma);
bool in_compact(const ExactMatrix& gamma);

ExactMatrix bracket(const ExactMatrix& a, const ExactMatrix& b);
// Re tr(ab); the basis-aware overload weights each place block.
Rational trace_pairing(const ExactMatrix& a, const ExactMatrix& b);
Rational trace_pairing(const LieBasis& basis, const ExactMatrix& a, const ExactMatrix& b);

using RationalMatrix = std::vector<std::vector<Rational>>;

RationalMatrix pairing_matrix(const LieBasis& basis);

// Linear combination of generators keyed by name.
using LinearCombination = std::map<std::string, Rational>;

std::string combination_str(const LinearCombination& c);
ExactMatrix evaluate(const LieBasis& basis, const LinearCombination& c);
// Express an algebra element in the basis; nullopt if it is not in the span.
std::optional<LinearCombination> express(const LieBasis& basis, const ExactMatrix& m);

struct DualEntry {
    std::string name;
    LinearCombination dual;
};

std::vector<DualEntry> dual_basis(const LieBasis& basis);

/**
 * @brief Formal element of degree <= 2 in the enveloping algebra.
 *
 * Words are sequences of generator names. Using names as keys makes the
 * canonical form independent of the order of the generator list.
 */
struct CasimirElement {
    std::map<std::vector<std::string>, Rational> terms;
    std::map<std::string, std::string> metadata;

    void add(const std::vector<std::string>& word, const Rational& c);
    bool operator==(const CasimirElement& o) const { return terms == o.terms; }
    std::string str() const;
};

CasimirElement casimir(const LieBasis& basis);

struct DroppedTerm {
    Rational coef;
    std::string left;         // empty for a degree-one term
    LinearCombination kappa;  // element of k standing to the right
};

struct CommutatorStep {
    Rational coef;
    std::string left, right;
    LinearCombination bracket;  // [left, right] in the basis
};

struct Reduction {
    CasimirElement residual;
    // GeneralQ: the M^1_2 part collected per place; residual carries "Omega'@place".
    std::map<std::string, CasimirElement> levi;
    std::vector<DroppedTerm> dropped;
    std::vector<CommutatorStep> commutators;
};

Reduction reduce_mod_k(const CasimirElement& omega, const LieBasis& basis);

// Re-expands a reduction in the free algebra; true iff it reproduces omega.
bool reduction_reconstructs(const CasimirElement& omega, const Reduction& red);

}  // namespace rankone
