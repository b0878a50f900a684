#pragma once

#include "rankone/cuspspec.hpp"

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace rankone {

using cplx = std::complex<double>;

struct HalfPlanePoint {
    double x = 0, y = 1;
};

struct SpectralParameter {
    cplx s;
    double c = 1.0;  // lambda_s = c s (s - 1)
    cplx lambda() const { return c * s * (s - 1.0); }
};

// Special functions for complex arguments.
cplx complex_gamma(cplx z);
// Re w > 1.
cplx riemann_zeta(cplx w);
// K_nu(x) for complex order and real x > 0.
cplx bessel_k(cplx nu, double x);

// SL_2(Z) reduction: |x| <= 1/2 and |z| >= 1.
HalfPlanePoint reduce_to_fundamental_domain(HalfPlanePoint z);

enum class LatticeMethod {
    // Coprime (c, d0 mod c) with the d-progression summed by Poisson; the
    // constant part of the c-tail is added in closed form.
    Periodized,
    // Coprime (c, d) with max(|c|, |d|) <= N, no acceleration.
    Direct
};

struct EisensteinValue {
    cplx value;
    double error_bound = 0;  // bound on |E_s - value|
    long terms = 0;          // coprime pairs used
};

// E_s(z) = sum over Gamma_inf \ Gamma of Im(gamma z)^s; Re s > 1.
EisensteinValue eisenstein_series(HalfPlanePoint z, cplx s, int truncation,
                                  LatticeMethod method = LatticeMethod::Periodized);

// Values on a y-grid times a periodic x-grid x_j = j / n_x; rows are y nodes.
struct SampledFunction {
    std::vector<double> y, x;
    Eigen::MatrixXcd values;
};

SampledFunction sample_eisenstein(cplx s, const std::vector<double>& y, int n_x, int truncation);
GridFunction to_modes(const SampledFunction& f, const CylinderGrid& grid);
Eigen::VectorXcd constant_term_profile(const SampledFunction& f);

struct ConstantTermFit {
    cplx A, B;
    double residual = 0;  // relative least-squares misfit
};
ConstantTermFit fit_constant_term(const std::vector<double>& y, const Eigen::VectorXcd& profile, cplx s,
                                  std::pair<double, double> window);
// Geometric mid-band excluding 10% (in log y) at each end.
std::pair<double, double> default_fit_window(const std::vector<double>& y);

// (Delta - lambda) f per mode with the conservative stencil of op (natural
// boundary at y_lo); returns relative M-norm over nodes accepted by `use`.
double eigen_residual(const DiscreteOperator& op, const GridFunction& f, cplx lambda,
                      const std::function<bool(int)>& use);
Eigen::VectorXcd apply_laplacian(const DiscreteOperator& op, int mode, const Eigen::VectorXcd& f);

// Compactly supported radial profile on [lo, hi].
struct RadialProfile {
    std::function<double(double)> f;
    double lo = 1, hi = 2;
};

struct PseudoEisensteinValue {
    double value = 0;
    int nonzero_terms = 0;
    long enumerated = 0;
};
PseudoEisensteinValue pseudo_eisenstein(const RadialProfile& phi, HalfPlanePoint z);

// <Psi_phi, E_s> over the standard fundamental domain against <phi, c_P E_s> on (0, inf).
std::pair<double, double> adjunction_check(const RadialProfile& phi, double s, int quad_x = 48, int quad_y = 600);

struct TruncationBand {
    double y0, y1, sup;
};
struct TruncatedEisenstein {
    SampledFunction f;
    std::vector<TruncationBand> bands;  // dyadic bands above T
    bool rapid_decay = false;
};
// Wedge^T E_s on the cylinder y >= 1, with T >= threshold.
TruncatedEisenstein truncate_eisenstein(cplx s, double T, const std::vector<double>& y, int n_x, int truncation,
                                        double threshold = 1.0);

struct ContinuationParams {
    double a = 20;    // cut height
    double a1 = 4;    // a'
    double a2 = 2;    // a''
    double c = 1.0;   // lambda_s = c s (s - 1)
    double resonance_tol = 1e-8;
};

Eigen::VectorXcd build_hs(cplx s, const CutoffProfile& tau, const CylinderGrid& grid);
// (Delta - lambda_s) h_s with the discrete stencil on the band [a'', a'] widened
// by one cell; zero elsewhere, where h_s is 0 or y^s.
Eigen::VectorXcd continuation_rhs(cplx s, const Eigen::VectorXcd& hs, const DiscreteOperator& op,
                                  const ContinuationParams& p);

struct ContinuationResult {
    Eigen::VectorXcd E;        // zero mode of the continued series
    Eigen::VectorXcd residual; // (Delta - lambda) E per node
    cplx lambda;
    double interior_residual = 0;  // relative, nodes within one cell of a excluded
    cplx eta_coefficient;          // mass-weighted residual within one cell of a
    double residual_mass_fraction = 0;
    double solve_residual = 0;
    double correction_above_cut = 0;  // max |E - h_s| over y >= a, zero by construction
    int cut_node = -1;
};
ContinuationResult continue_eisenstein(cplx s, const DiscreteOperator& op, const ContinuationParams& p);

}  // namespace rankone
