#pragma once

#include "rankone/lie.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rankone {

// Differentiation orders keyed by coordinate name.
using MultiIndex = std::map<std::string, int>;

std::string multi_index_str(const MultiIndex& a);

struct CoordFrame {
    std::vector<std::string> coordinates;  // N coordinates then ray coordinates
    std::vector<std::string> rays;         // "y" or "y@R1", ...
    std::vector<std::string> symbols;      // formal M^1 symbols (GeneralQ)
    int measure_exponent = 0;              // y^{-m} dy; 0 when not applicable
    bool operator==(const CoordFrame& o) const {
        return coordinates == o.coordinates && rays == o.rays && symbols == o.symbols;
    }
};

CoordFrame coord_frame(const LieBasis& basis);

/**
 * @brief Linear differential operator with Laurent-polynomial coefficients.
 *
 * Coefficients depend on ray coordinates and formal symbols only. A key
 * naming an opaque operator (Omega'@place) is carried as an order-one index.
 */
class DiffOp {
public:
    std::map<MultiIndex, Laurent> terms;

    void add(const MultiIndex& a, const Laurent& c);
    static DiffOp derivative(const std::string& coord, const Laurent& coef = Laurent(1));
    static DiffOp multiplication(const Laurent& c);

    DiffOp& operator+=(const DiffOp& o);
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    DiffOp scaled(const Rational& q) const;
    // Composition this o other, expanded by the Leibniz rule.
    DiffOp compose(const DiffOp& other) const;
    int order() const;
    bool operator==(const DiffOp& o) const { return terms == o.terms; }
    std::string str() const;
};

struct RelationCheck {
    std::string generator;
    std::string relation;
    bool holds = false;
    // n_c m e^{t gamma} = n_{c + t delta} m with coordinate shift delta; false
    // for generators whose N-translate does not commute with N (Heisenberg case).
    std::optional<bool> shift_form;
    std::string detail;
};

struct IwasawaReport {
    std::vector<RelationCheck> checks;
    bool all_pass() const;
};

// Verifies m e^{t gamma} = e^{t Ad(m) gamma} m (symbolic y, t, e^t) for every
// P generator, the coordinate-shift form where N is abelian along gamma, and
// for GeneralQ the M^1 relation on exact rational Cayley samples.
IwasawaReport verify_iwasawa_relations(const FormSpec& spec, int samples = 3, unsigned seed = 11);

using VectorFieldAction = std::map<std::string, DiffOp>;

// First-order action of each P generator in the left-invariant frame of N,
// derived by differentiating the verified relations at t = 0.
VectorFieldAction generator_actions(const LieBasis& basis);

DiffOp casimir_to_diffop(const CasimirElement& reduced, const VectorFieldAction& actions);

// Full pipeline: basis, Casimir, reduction, actions, operator.
struct Derivation {
    LieBasis basis;
    CasimirElement omega;
    Reduction reduction;
    VectorFieldAction actions;
    DiffOp op;
    CoordFrame frame;
};
Derivation derive_laplacian(const FormSpec& spec);

// Exact coordinate renormalization: op is multiplied by `scalar`, and for
// each coordinate c with factor lambda2 (c_old = lambda c_new) the coefficient
// of d_c^k is divided by lambda2^{k/2}. Odd orders in a rescaled coordinate throw.
struct Renormalization {
    Rational scalar = Rational(1);
    std::map<std::string, Rational> lambda2;
    // Replaces `scalar` for terms whose coordinates carry this place suffix ("@C1").
    std::map<std::string, Rational> place_scalar;
    std::string note;
};

DiffOp renormalize(const DiffOp& op, const Renormalization& rn);

// Normal form on |u| = 1 at complex places: powers ur^k with k >= 2 are
// rewritten through ur^2 = 1 - ui^2.
Laurent unit_circle_normal_form(const Laurent& p);
DiffOp unit_circle_normal_form(const DiffOp& op);

struct DiffEntry {
    MultiIndex index;
    Laurent derived, reference, difference;
};

struct CompareReport {
    std::vector<DiffEntry> differences;
    bool equal() const { return differences.empty(); }
};

CompareReport compare_diffop(const DiffOp& derived, const DiffOp& reference,
                             const std::optional<Renormalization>& rn = std::nullopt);
CompareReport compare_diffop(const DiffOp& derived, const CoordFrame& fd, const DiffOp& reference,
                             const CoordFrame& fr, const std::optional<Renormalization>& rn = std::nullopt);

// Closed-form reference operators, hard-coded for comparison.
struct ReferenceFormula {
    DiffOp op;
    std::optional<Renormalization> renorm;
    std::string label;
};
ReferenceFormula reference_formula(const FormSpec& spec, bool renormalized = true);

// Complex place coefficient structure.
struct ComplexPlaceReport {
    Eigen::MatrixXd A, B;           // A(j, l) = A^j_l, B(j, l) = B^j_l
    Eigen::MatrixXd M;              // M_jk = sum_l A^j_l A^k_l + B^j_l B^k_l
    Eigen::MatrixXd claimed;        // Re((h^T h)_jk)
    Eigen::MatrixXd hermitian_form; // Re((h^* h)_jk)
    double orthogonality_defect = 0;  // max |h^T h - I|
    double claim_error = 0;           // max |M - claimed|
    double delta_error = 0;           // max |M - I|
    double hermitian_error = 0;       // max |M - Re(h^* h)|
};

ComplexPlaceReport complex_place_coeffs(std::complex<double> u, const Eigen::MatrixXcd& h, double tol = 1e-10);

struct EllipticBounds {
    double a = 0, b = 0;
};
EllipticBounds elliptic_bounds(const std::vector<Eigen::MatrixXd>& samples, double tol = 1e-12);

// Exact rational element of O(S') from the Cayley transform of S' K, K skew.
ExactMatrix cayley_orthogonal(const ExactMatrix& Sprime, const ExactMatrix& K);

}  // namespace rankone
