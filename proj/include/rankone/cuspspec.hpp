#pragma once

#include "rankone/diffcas.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rankone {

struct GridParams {
    Family family = Family::O;
    int r = 2;
    double a = 2.0;
    double y_lo = 1.0;
    double y_hi = 64.0;
    int n_y = 256;
    int xi_max = 8;
    std::optional<int> measure_exponent;  // defaults to r, 2r+1, 4r+3
};

/**
 * @brief Radial log grid times a finite set of torus frequencies.
 *
 * Nodes are uniform in tau = log y on [y_lo, a] and on [a, y_hi] with the
 * cell count split in proportion to length, so the cut height is a node.
 * The node at y_hi carries a Dirichlet condition; y_lo is a natural boundary.
 */
struct CylinderGrid {
    GridParams params;
    int m = 0;  // measure y^{-m} dy
    int d = 0;  // torus dimension
    double h = 0;                  // largest cell width in tau
    std::vector<double> tau, y;
    std::vector<double> hc;        // cell widths, size n - 1
    std::vector<std::vector<int>> modes;  // |xi| <= xi_max, lexicographic
    int zero_mode = -1;

    int n() const { return static_cast<int>(y.size()); }
    int mode_count() const { return static_cast<int>(modes.size()); }
    int mode_index(const std::vector<int>& xi) const;
};

int torus_dimension(Family f, int r);
int default_measure_exponent(Family f, int r);

CylinderGrid build_grid(const GridParams& params);

// Laplacian in the cusp normalization y^2 d_y^2 - (m-2) y d_y + sum kappa_c y^{p_c} d_c^2:
// the derived Casimir with the standard renormalization (O: factor 2 and x -> x / sqrt 2).
struct StandardLaplacian {
    DiffOp op;
    Renormalization renorm;
    std::vector<std::string> directions;
};
StandardLaplacian standard_laplacian(Family family, int r);

struct DiscreteOperator {
    CylinderGrid grid;
    std::vector<std::string> directions;
    std::vector<int> power;       // 2 or 4
    std::vector<double> kappa;
    std::vector<double> w_half;   // weight e^{(1-m) tau} at cell midpoints
    std::vector<double> mass;     // lumped trapezoid mass
    std::vector<std::vector<double>> V2, V4;  // 4 pi^2 sum kappa xi^2 y^p per mode and node, split by p
    std::vector<std::vector<char>> active;    // DOF mask per mode (Dirichlet node always inactive)
    std::optional<double> cut;

    double potential(int mode, int k) const { return V2[static_cast<std::size_t>(mode)][static_cast<std::size_t>(k)] + V4[static_cast<std::size_t>(mode)][static_cast<std::size_t>(k)]; }
    int dof_count() const;
};

DiscreteOperator assemble(const DiffOp& op, const CylinderGrid& grid);
DiscreteOperator assemble(Family family, const CylinderGrid& grid);

DiscreteOperator apply_pseudocusp_constraint(const DiscreteOperator& op, double a);

struct GridFunction {
    std::vector<Eigen::VectorXcd> modes;  // per mode, values at every node
    static GridFunction zero(const CylinderGrid& g);
};

// Random functions for property tests: conjugate-symmetric across +-xi, zero at
// the Dirichlet node, and with the zero mode removed where the operator is constrained.
GridFunction random_grid_function(const DiscreteOperator& op, std::mt19937_64& rng, bool respect_constraint = true);

struct FormParts {
    double radial = 0;   // sum_cells w |Df|^2 / h
    double tangential2 = 0;  // y^2 directions
    double tangential4 = 0;  // y^4 directions
    double total() const { return radial + tangential2 + tangential4; }
};

FormParts form_parts(const DiscreteOperator& op, const GridFunction& f);
double quadratic_form(const DiscreteOperator& op, const GridFunction& f);
double mass_norm2(const DiscreteOperator& op, const GridFunction& f);
// Squared B^1 norm <(1 - Delta) f, f>.
double b1_norm(const DiscreteOperator& op, const GridFunction& f);
double tail_norm(const DiscreteOperator& op, const GridFunction& f, double c);

// The form of -y^2 (y^2 - a^2) d_x^2 over y > c for the y^4 directions.
double perturbed_fragment(const DiscreteOperator& op, const GridFunction& f, double a, double c);

// <-S_y f, f> and <-S_a f, f> over nodes with y >= a, S_y the tangential part divided by y^2.
std::pair<double, double> tangential_split(const DiscreteOperator& op, const GridFunction& f, double a);

struct TailBoundResult {
    double tail2 = 0, b1 = 0, ratio = 0, bound = 0;
    bool holds = true;
};
TailBoundResult check_tail_bound(const DiscreteOperator& op, const GridFunction& f, double c);

struct SpectrumResult {
    std::vector<double> eigenvalues;
    std::vector<double> residuals;
    std::vector<int> mode;
    double resolvent_error = 0;    // max |(M + K)^{-1} M u - u / (1 + lambda)|
    double truncation_floor = 0;   // lower bound for modes beyond xi_max
};
SpectrumResult spectrum(const DiscreteOperator& op, int k);
int count_below(const DiscreteOperator& op, double lambda);
// All eigenvalues of the constrained operator restricted to one mode, ascending.
std::vector<double> mode_eigenvalues(const DiscreteOperator& op, int mode);

/**
 * @brief Smooth radial profile with recorded derivative bounds.
 *
 * sup_d1 and sup_d2 bound the derivatives of the underlying unit step psi;
 * the profile is psi composed with an affine map.
 */
struct CutoffProfile {
    std::function<double(double)> value, d1;
    double sup_d1 = 0, sup_d2 = 0;
    std::string label;
};

double smooth_step(double x);
double smooth_step_d1(double x);

CutoffProfile cutoff_phi_t(double t);
CutoffProfile cutoff_beta_t(double t, double a, double height_exponent);
CutoffProfile cutoff_tau(double a2, double a1);

struct TruncationResult {
    double lhs = 0, rhs = 0, constant = 0, ratio = 0;
    bool holds = true;
};
TruncationResult check_truncation_bound(const DiscreteOperator& op, const GridFunction& f, double t);

struct GradientIdentity {
    double lhs = 0, rhs = 0;
};
GradientIdentity gradient_identity_check(const DiscreteOperator& op, const GridFunction& f);

}  // namespace rankone
