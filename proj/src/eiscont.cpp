#include "rankone/eiscont.hpp"

#include "rankone/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <tuple>

namespace rankone {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

}  // namespace

// ---------------------------------------------------------------- special functions

cplx complex_gamma(cplx z) {
    if (z.real() < 0.5) {
        cplx sz = std::sin(kPi * z);
        if (std::abs(sz) == 0.0) throw DivergentRegion("Gamma pole");
        return kPi / (sz * complex_gamma(1.0 - z));
    }
    // Lanczos, g = 7, n = 9
    static const double p[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    z -= 1.0;
    cplx x = p[0];
    for (int i = 1; i < 9; ++i) x += p[i] / (z + static_cast<double>(i));
    cplx t = z + 7.5;
    return std::sqrt(2 * kPi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

cplx riemann_zeta(cplx w) {
    if (!(w.real() > 1.0)) throw DivergentRegion("zeta evaluated with Re w <= 1");
    // Euler-Maclaurin with N = 30 and twelve Bernoulli corrections
    static const double B2k[] = {1.0 / 6,         -1.0 / 30,       1.0 / 42,          -1.0 / 30,
                                 5.0 / 66,        -691.0 / 2730,   7.0 / 6,           -3617.0 / 510,
                                 43867.0 / 798,   -174611.0 / 330, 854513.0 / 138,    -236364091.0 / 2730};
    const double N = 30;
    cplx sum = 0;
    for (int n = 1; n < 30; ++n) sum += std::exp(-w * std::log(static_cast<double>(n)));
    const double lN = std::log(N);
    cplx Nw = std::exp(-w * lN);
    sum += N * Nw / (w - 1.0) + 0.5 * Nw;
    cplx rising = w;       // w (w+1) ... (w+2k-2)
    cplx power = Nw / N;   // N^{-w-2k+1}
    double fact = 2;       // (2k)!
    for (int k = 1; k <= 12; ++k) {
        sum += B2k[k - 1] / fact * rising * power;
        rising *= (w + static_cast<double>(2 * k - 1)) * (w + static_cast<double>(2 * k));
        power /= N * N;
        fact *= (2 * k + 1) * (2 * k + 2);
    }
    return sum;
}

cplx bessel_k(cplx nu, double x) {
    if (!(x > 0)) throw BadParameters("K_nu needs x > 0");
    // K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, trapezoid in t, scaled by e^x
    const double h = 0.04;
    cplx sum = 0.5 * std::cosh(nu * 0.0);
    for (int j = 1; j < 100000; ++j) {
        double t = j * h;
        double e = -x * (std::cosh(t) - 1.0);
        cplx term = std::exp(e) * std::cosh(nu * t);
        sum += term;
        if (e < -745.0 || (e + std::abs(nu.real()) * t < -40.0 && std::abs(term) < 1e-18 * std::abs(sum))) break;
    }
    return h * sum * std::exp(-x);
}

HalfPlanePoint reduce_to_fundamental_domain(HalfPlanePoint z) {
    if (!(z.y > 0)) throw BadDomain("point not in the upper half plane");
    for (int it = 0; it < 10000; ++it) {
        z.x -= std::floor(z.x + 0.5);
        double r2 = z.x * z.x + z.y * z.y;
        if (r2 >= 1.0 - 1e-15) return z;
        z.x = -z.x / r2;
        z.y = z.y / r2;
    }
    throw SolverFailure("reduction did not terminate");
}

// ---------------------------------------------------------------- lattice series

namespace {

// Coefficients of the Fourier expansion of the periodized series:
//   E = y^s + phi y^{1-s} + sqrt(y) Bs sum_m 2 m^{s-1/2} K_{s-1/2}(2 pi m y) S_m cos(2 pi m x)
// with S_m = sum_{c <= C} c^{-2s} r_c(m), r_c the Ramanujan sum over residues coprime to c.
struct SeriesData {
    cplx s;
    int C = 0;
    cplx phi;  // A_s zeta(2s-1) / zeta(2s): every c included
    cplx Bs;
    double tail_c = 0;  // sum_{c > C} c^{-2 sigma} <= C^{1-2 sigma} / (2 sigma - 1)
    std::vector<cplx> S;  // index m, S[0] unused
    long pairs = 0;
};

constexpr int kMaxFreq = 200;

std::shared_ptr<const SeriesData> series_data(cplx s, int C) {
    static std::mutex mu;
    static std::map<std::tuple<double, double, int>, std::shared_ptr<const SeriesData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(s.real(), s.imag(), C);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    auto d = std::make_shared<SeriesData>();
    d->s = s;
    d->C = C;
    const double sigma = s.real();
    cplx As = std::sqrt(kPi) * complex_gamma(s - 0.5) / complex_gamma(s);
    d->phi = As * riemann_zeta(2.0 * s - 1.0) / riemann_zeta(2.0 * s);
    d->Bs = 2.0 * std::exp(s * std::log(kPi)) / complex_gamma(s);
    d->tail_c = std::pow(static_cast<double>(C), 1 - 2 * sigma) / (2 * sigma - 1);
    d->S.assign(kMaxFreq + 1, 0.0);
    // r_c(m) accumulated over the reduced residues d0 mod c: the pair (c, d0)
    // stands for the progression d = d0 + c Z summed by Poisson.
    std::vector<double> rc(kMaxFreq + 1);
    for (int c = 1; c <= C; ++c) {
        std::fill(rc.begin(), rc.end(), 0.0);
        std::vector<int> residues;
        for (int d0 = 0; d0 < c; ++d0)
            if (std::gcd(c, d0) == 1) residues.push_back(d0);
        d->pairs += static_cast<long>(residues.size());
        // r_c(m) is an integer depending on gcd(c, m) only; evaluate per divisor class
        std::map<int, double> by_gcd;
        for (int m = 1; m <= kMaxFreq; ++m) {
            int g = std::gcd(c, m);
            auto it = by_gcd.find(g);
            if (it == by_gcd.end()) {
                double acc = 0;
                for (int d0 : residues) acc += std::cos(2 * kPi * static_cast<double>((static_cast<long>(g) * d0) % c) / c);
                it = by_gcd.emplace(g, std::round(acc)).first;
            }
            rc[idx(m)] = it->second;
        }
        cplx w = std::exp(-2.0 * s * std::log(static_cast<double>(c)));
        for (int m = 1; m <= kMaxFreq; ++m) d->S[idx(m)] += w * rc[idx(m)];
    }
    cache.emplace(key, d);
    return d;
}

struct Expansion {
    cplx constant;             // y^s + phi y^{1-s}
    std::vector<cplx> b;       // b[m] = sqrt(y) Bs 2 m^{s-1/2} K(2 pi m y) S_m
    double error_bound = 0;
};

Expansion expansion_at(const SeriesData& d, double y) {
    Expansion e;
    const cplx s = d.s;
    const double sigma = s.real();
    e.constant = std::exp(s * std::log(y)) + d.phi * std::exp((1.0 - s) * std::log(y));
    e.b.assign(1, 0.0);
    const cplx nu = s - 0.5;
    const double pref_abs = std::sqrt(y) * std::abs(d.Bs);
    const double zeta2s = std::abs(riemann_zeta(cplx(2 * sigma, 0)));
    double last = 0;
    for (int m = 1; m <= kMaxFreq; ++m) {
        double x = 2 * kPi * m * y;
        cplx K = bessel_k(nu, x);
        cplx mp = 2.0 * std::exp(nu * std::log(static_cast<double>(m)));
        e.b.push_back(std::sqrt(y) * d.Bs * mp * K * d.S[idx(m)]);
        // |K_nu| <= K_{Re nu}; |r_c(m)| <= gcd(c, m) <= m
        double Kr = std::abs(bessel_k(cplx(sigma - 0.5, 0), x));
        double env = pref_abs * 2 * std::pow(m, sigma - 0.5) * Kr;
        e.error_bound += env * m * d.tail_c;
        last = env * m * zeta2s;  // bound on |b_m| with every c
        if (env < 1e-19 * std::abs(e.constant) && m >= 2) break;
    }
    // remaining frequencies: envelope decays at least like exp(-2 pi y) per step
    double ratio = std::exp(-2 * kPi * y) * 2.0;
    if (ratio < 1) e.error_bound += last * ratio / (1 - ratio);
    return e;
}

cplx sum_expansion(const Expansion& e, double x) {
    cplx v = e.constant;
    for (std::size_t m = 1; m < e.b.size(); ++m) v += e.b[m] * std::cos(2 * kPi * static_cast<double>(m) * x);
    return v;
}

void check_convergent(cplx s) {
    if (!(s.real() > 1.0)) throw DivergentRegion("lattice sum needs Re s > 1");
}

EisensteinValue direct_sum(HalfPlanePoint z, cplx s, int N) {
    EisensteinValue out;
    const double y = z.y, x = z.x;
    cplx total = std::exp(s * std::log(y));
    out.terms = 1;
    for (int c = 1; c <= N; ++c)
        for (int d = -N; d <= N; ++d) {
            if (std::gcd(c, std::abs(d)) != 1) continue;
            double q = (c * x + d) * (c * x + d) + c * c * y * y;
            total += std::exp(s * std::log(y / q));
            ++out.terms;
        }
    out.value = total;
    const double sigma = s.real();
    // smallest eigenvalue of the form |c z + d|^2 = (x^2 + y^2) c^2 + 2 x c d + d^2
    const double tr = x * x + y * y + 1, det = y * y;
    const double lmin = 0.5 * (tr - std::sqrt(tr * tr - 4 * det));
    out.error_bound = 4 * std::pow(y / lmin, sigma) * std::pow(static_cast<double>(N), 2 - 2 * sigma) / (2 * sigma - 2);
    return out;
}

}  // namespace

EisensteinValue eisenstein_series(HalfPlanePoint z, cplx s, int truncation, LatticeMethod method) {
    check_convergent(s);
    if (truncation < 1) throw BadParameters("truncation must be positive");
    z = reduce_to_fundamental_domain(z);
    if (method == LatticeMethod::Direct) return direct_sum(z, s, truncation);
    auto d = series_data(s, truncation);
    Expansion e = expansion_at(*d, z.y);
    EisensteinValue out;
    out.value = sum_expansion(e, z.x);
    out.error_bound = e.error_bound;
    out.terms = d->pairs;
    return out;
}

SampledFunction sample_eisenstein(cplx s, const std::vector<double>& y, int n_x, int truncation) {
    check_convergent(s);
    if (n_x < 1) throw BadParameters("n_x must be positive");
    if (truncation < 1) throw BadParameters("truncation must be positive");
    SampledFunction f;
    f.y = y;
    for (int j = 0; j < n_x; ++j) f.x.push_back(static_cast<double>(j) / n_x);
    f.values.resize(static_cast<Eigen::Index>(y.size()), n_x);
    auto d = series_data(s, truncation);
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (y[k] >= 1.0) {
            // |x| <= 1/2 after translation and |z| >= y >= 1: already reduced
            Expansion e = expansion_at(*d, y[k]);
            for (int j = 0; j < n_x; ++j) f.values(static_cast<Eigen::Index>(k), j) = sum_expansion(e, f.x[idx(j)]);
        } else {
            for (int j = 0; j < n_x; ++j)
                f.values(static_cast<Eigen::Index>(k), j) = eisenstein_series({f.x[idx(j)], y[k]}, s, truncation).value;
        }
    }
    return f;
}

GridFunction to_modes(const SampledFunction& f, const CylinderGrid& grid) {
    if (grid.d != 1) throw GridMismatch("sampled functions live on a one-dimensional torus");
    if (f.y.size() != grid.y.size()) throw GridMismatch("sample heights differ from the grid");
    for (std::size_t k = 0; k < f.y.size(); ++k)
        if (std::abs(f.y[k] - grid.y[k]) > 1e-12 * grid.y[k]) throw GridMismatch("sample heights differ from the grid");
    const int nx = static_cast<int>(f.x.size());
    if (nx <= 2 * grid.params.xi_max) throw GridMismatch("need n_x > 2 xi_max to resolve the grid modes");
    GridFunction g = GridFunction::zero(grid);
    Eigen::FFT<double> fft;
    std::vector<cplx> row(idx(nx)), spec;
    for (int k = 0; k < grid.n(); ++k) {
        for (int j = 0; j < nx; ++j) row[idx(j)] = f.values(k, j);
        fft.fwd(spec, row);
        for (int q = 0; q < grid.mode_count(); ++q) {
            int xi = grid.modes[idx(q)][0];
            g.modes[idx(q)](k) = spec[idx(((xi % nx) + nx) % nx)] / static_cast<double>(nx);
        }
    }
    return g;
}

Eigen::VectorXcd constant_term_profile(const SampledFunction& f) { return f.values.rowwise().mean(); }

std::pair<double, double> default_fit_window(const std::vector<double>& y) {
    if (y.size() < 2) throw IllConditionedFit("need at least two heights");
    const double l0 = std::log(y.front()), l1 = std::log(y.back());
    return {std::exp(l0 + 0.1 * (l1 - l0)), std::exp(l1 - 0.1 * (l1 - l0))};
}

ConstantTermFit fit_constant_term(const std::vector<double>& y, const Eigen::VectorXcd& profile, cplx s,
                                  std::pair<double, double> window) {
    if (static_cast<Eigen::Index>(y.size()) != profile.size()) throw GridMismatch("profile and heights differ in size");
    if (std::abs(s - 0.5) < 1e-6) throw IllConditionedFit("y^s and y^{1-s} coincide at s = 1/2");
    std::vector<std::size_t> use;
    for (std::size_t k = 0; k < y.size(); ++k)
        if (y[k] >= window.first && y[k] <= window.second) use.push_back(k);
    if (use.size() < 4) throw IllConditionedFit("fewer than four heights in the fit window");
    const auto n = static_cast<Eigen::Index>(use.size());
    Eigen::MatrixXcd A(n, 2);
    Eigen::VectorXcd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double yy = y[use[idx(static_cast<int>(i))]];
        A(i, 0) = std::exp(s * std::log(yy));
        A(i, 1) = std::exp((1.0 - s) * std::log(yy));
        b(i) = profile(static_cast<Eigen::Index>(use[idx(static_cast<int>(i))]));
    }
    Eigen::Vector2d scale(A.col(0).norm(), A.col(1).norm());
    Eigen::MatrixXcd As = A;
    As.col(0) /= scale(0);
    As.col(1) /= scale(1);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(1) <= 0 || sv(0) / sv(1) > 1e10) throw IllConditionedFit("basis columns nearly dependent on the window");
    Eigen::VectorXcd c = svd.solve(b);
    ConstantTermFit fit;
    fit.A = c(0) / scale(0);
    fit.B = c(1) / scale(1);
    fit.residual = (As * c - b).norm() / std::max(b.norm(), 1e-300);
    return fit;
}

// ---------------------------------------------------------------- discrete eigen-equation

Eigen::VectorXcd apply_laplacian(const DiscreteOperator& op, int mode, const Eigen::VectorXcd& f) {
    const int n = op.grid.n();
    if (f.size() != n) throw GridMismatch("node count differs");
    if (mode < 0 || mode >= op.grid.mode_count()) throw GridMismatch("mode index out of range");
    const auto& hc = op.grid.hc;
    Eigen::VectorXcd out(n);
    for (int k = 0; k < n; ++k) {
        cplx Kf = op.potential(mode, k) * op.mass[idx(k)] * f(k);
        if (k > 0) Kf += op.w_half[idx(k - 1)] / hc[idx(k - 1)] * (f(k) - f(k - 1));
        if (k + 1 < n) Kf += op.w_half[idx(k)] / hc[idx(k)] * (f(k) - f(k + 1));
        out(k) = -Kf / op.mass[idx(k)];
    }
    return out;
}

double eigen_residual(const DiscreteOperator& op, const GridFunction& f, cplx lambda,
                      const std::function<bool(int)>& use) {
    if (static_cast<int>(f.modes.size()) != op.grid.mode_count()) throw GridMismatch("mode count differs");
    double num = 0, den = 0;
    for (int q = 0; q < op.grid.mode_count(); ++q) {
        const auto& v = f.modes[idx(q)];
        Eigen::VectorXcd r = apply_laplacian(op, q, v) - lambda * v;
        for (int k = 0; k < op.grid.n(); ++k) {
            if (!use(k)) continue;
            num += op.mass[idx(k)] * std::norm(r(k));
            den += op.mass[idx(k)] * std::norm(v(k));
        }
    }
    if (den == 0) throw ZeroInput("function vanishes on the selected nodes");
    return std::sqrt(num / den);
}

// ---------------------------------------------------------------- pseudo-Eisenstein series

namespace {

void check_profile(const RadialProfile& phi) {
    if (!phi.f) throw BadCutoff("empty profile");
    if (!(phi.lo > 0 && phi.lo < phi.hi)) throw BadCutoff("support must be a compact interval in (0, inf)");
}

}  // namespace

PseudoEisensteinValue pseudo_eisenstein(const RadialProfile& phi, HalfPlanePoint z) {
    check_profile(phi);
    z = reduce_to_fundamental_domain(z);
    const double x = z.x, y = z.y;
    // Im(gamma z) = y / |c z + d|^2 >= lo  <=>  |c z + d|^2 <= R
    const double R = y / phi.lo;
    const int cmax = static_cast<int>(std::floor(std::sqrt(R) / y));
    const double estimate = (cmax + 1.0) * (2 * std::sqrt(R) + 1);
    if (estimate > 5e7) throw SupportTooLow("support reaches too low: about " + std::to_string(estimate) + " cosets");
    PseudoEisensteinValue out;
    auto visit = [&](int c, int d) {
        ++out.enumerated;
        double q = (c * x + d) * (c * x + d) + static_cast<double>(c) * c * y * y;
        double im = y / q;
        if (im >= phi.lo && im <= phi.hi) {
            double v = phi.f(im);
            out.value += v;
            if (v != 0) ++out.nonzero_terms;
        }
    };
    visit(0, 1);
    const double sR = std::sqrt(R);
    for (int c = 1; c <= cmax; ++c) {
        int d0 = static_cast<int>(std::floor(-c * x - sR)), d1 = static_cast<int>(std::ceil(-c * x + sR));
        for (int d = d0; d <= d1; ++d)
            if (std::gcd(c, std::abs(d)) == 1) visit(c, d);
    }
    return out;
}

std::pair<double, double> adjunction_check(const RadialProfile& phi, double s, int quad_x, int quad_y) {
    check_profile(phi);
    check_convergent(cplx(s, 0));
    using G = boost::math::quadrature::gauss<double, 15>;
    auto composite = [](const std::function<double(double)>& g, double a, double b, int points) {
        const int panels = std::max(1, points / 15);
        const double w = (b - a) / panels;
        double acc = 0;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * w;
            acc += G::integrate([&](double t) { return g(t); }, lo, lo + w);
        }
        return acc;
    };
    const int C = 400;
    auto d = series_data(cplx(s, 0), C);
    const double top = std::max(phi.hi, 1.0 / phi.lo);
    // <Psi_phi, E_s> over { |x| <= 1/2, |z| >= 1 }; Psi_phi vanishes there unless y >= lo
    double lhs = composite(
        [&](double x) {
            double y0 = std::max(std::sqrt(1 - x * x), phi.lo);
            if (y0 >= top) return 0.0;
            return composite(
                [&](double y) {
                    double psi = pseudo_eisenstein(phi, {x, y}).value;
                    if (psi == 0) return 0.0;
                    Expansion e = expansion_at(*d, y);
                    return psi * sum_expansion(e, x).real() / (y * y);
                },
                y0, top, quad_y);
        },
        -0.5, 0.5, quad_x);
    // <phi, c_P E_s>; the constant term y^s + phi(s) y^{1-s} is the m = 0 coefficient of the series
    double rhs = composite(
        [&](double y) {
            if (y < phi.lo || y > phi.hi) return 0.0;
            return phi.f(y) * (std::pow(y, s) + d->phi.real() * std::pow(y, 1 - s)) / (y * y);
        },
        phi.lo, phi.hi, quad_y);
    return {lhs, rhs};
}

// ---------------------------------------------------------------- truncation

TruncatedEisenstein truncate_eisenstein(cplx s, double T, const std::vector<double>& y, int n_x, int truncation,
                                        double threshold) {
    check_convergent(s);
    if (!(T >= threshold)) throw BadCutoff("truncation height below the reduction threshold");
    for (double v : y)
        if (v < 1.0) throw BadDomain("truncation samples the cylinder y >= 1");
    TruncatedEisenstein out;
    out.f = sample_eisenstein(s, y, n_x, truncation);
    auto d = series_data(s, truncation);
    double maxabs = 0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (y[k] > T) {
            Expansion e = expansion_at(*d, y[k]);
            for (int j = 0; j < n_x; ++j) {
                // E - c_P E, summed without the constant term to avoid cancellation
                cplx v = 0;
                for (std::size_t m = 1; m < e.b.size(); ++m) v += e.b[m] * std::cos(2 * kPi * static_cast<double>(m) * out.f.x[idx(j)]);
                maxabs = std::max(maxabs, std::abs(out.f.values(static_cast<Eigen::Index>(k), j)));
                out.f.values(static_cast<Eigen::Index>(k), j) = v;
            }
        } else {
            maxabs = std::max(maxabs, out.f.values.row(static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff());
        }
    }
    const double ymax = y.empty() ? T : *std::max_element(y.begin(), y.end());
    for (double b0 = T; b0 < ymax; b0 *= 2) {
        TruncationBand band{b0, 2 * b0, 0};
        for (std::size_t k = 0; k < y.size(); ++k)
            if (y[k] > b0 && y[k] <= 2 * b0)
                band.sup = std::max(band.sup, out.f.values.row(static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff());
        out.bands.push_back(band);
    }
    // y^p sup_band nonincreasing for p = 1, 2, 4, 8 until the roundoff floor
    const double floor = 1e-13 * std::max(maxabs, 1.0);
    out.rapid_decay = out.bands.size() >= 2;
    for (int p : {1, 2, 4, 8})
        for (std::size_t i = 1; i < out.bands.size(); ++i) {
            if (out.bands[i].sup <= floor) continue;
            double prev = std::pow(out.bands[i - 1].y0, p) * out.bands[i - 1].sup;
            double cur = std::pow(out.bands[i].y0, p) * out.bands[i].sup;
            if (cur > prev) out.rapid_decay = false;
        }
    return out;
}

// ---------------------------------------------------------------- continuation

Eigen::VectorXcd build_hs(cplx s, const CutoffProfile& tau, const CylinderGrid& grid) {
    Eigen::VectorXcd h(grid.n());
    for (int k = 0; k < grid.n(); ++k) {
        double y = grid.y[idx(k)];
        h(k) = tau.value(y) * std::exp(s * std::log(y));
    }
    return h;
}

Eigen::VectorXcd continuation_rhs(cplx s, const Eigen::VectorXcd& hs, const DiscreteOperator& op,
                                  const ContinuationParams& p) {
    const auto& g = op.grid;
    if (g.zero_mode < 0 || hs.size() != g.n()) throw GridMismatch("h_s does not match the grid");
    const cplx lambda = SpectralParameter{s, p.c}.lambda();
    Eigen::VectorXcd full = apply_laplacian(op, g.zero_mode, hs) - lambda * hs;
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(g.n());
    for (int k = 1; k + 1 < g.n(); ++k)
        if (p.c != 1.0 || (g.y[idx(k + 1)] >= p.a2 && g.y[idx(k - 1)] <= p.a1)) r(k) = full(k);
    if (p.c != 1.0) r(0) = full(0);  // y^s is no eigenfunction for c != 1
    return r;
}

ContinuationResult continue_eisenstein(cplx s, const DiscreteOperator& op0, const ContinuationParams& p) {
    const auto& g = op0.grid;
    if (g.d != 1 || g.m != 2) throw GridMismatch("continuation runs on the O(2,1) cylinder");
    if (!(p.a2 >= 1.0 && p.a2 < p.a1 && p.a1 < p.a)) throw BadCutoff("need 1 <= a'' < a' < a");
    if (op0.cut && std::abs(*op0.cut - p.a) > 1e-12 * p.a) throw GridMismatch("operator is constrained at another height");
    int ka = -1;
    for (int k = 0; k < g.n(); ++k)
        if (std::abs(g.y[idx(k)] - p.a) <= 1e-12 * p.a) ka = k;
    if (ka < 0) throw GridMismatch("cut height is not a grid node");
    if (p.a2 <= g.y.front()) throw BadCutoff("cutoff band must lie above y_lo");
    DiscreteOperator op = apply_pseudocusp_constraint(op0, p.a);
    SpectralParameter sp{s, p.c};
    const cplx lambda = sp.lambda();
    for (int q = 0; q < g.mode_count(); ++q)
        for (double mu : mode_eigenvalues(op, q))
            if (std::abs(lambda + mu) <= p.resonance_tol * std::max(1.0, std::abs(lambda)))
                throw ResonantParameter("lambda_s = -" + std::to_string(mu) + " is an eigenvalue of the constrained operator");

    CutoffProfile tau = cutoff_tau(p.a2, p.a1);
    Eigen::VectorXcd h = build_hs(s, tau, g);
    Eigen::VectorXcd rhs = continuation_rhs(s, h, op0, p);

    // (K + lambda M) u = M rhs on the active zero-mode nodes
    const int q0 = g.zero_mode;
    std::vector<int> dofs;
    for (int k = 0; k < g.n(); ++k)
        if (op.active[idx(q0)][idx(k)]) dofs.push_back(k);
    const int N = static_cast<int>(dofs.size());
    std::vector<int> pos(idx(g.n()), -1);
    for (int i = 0; i < N; ++i) pos[idx(dofs[idx(i)])] = i;
    std::vector<Eigen::Triplet<cplx>> trip;
    Eigen::VectorXcd b(N);
    for (int i = 0; i < N; ++i) {
        int k = dofs[idx(i)];
        cplx diag = (op.potential(q0, k) + lambda) * op.mass[idx(k)];
        for (int nb : {k - 1, k + 1}) {
            if (nb < 0 || nb >= g.n()) continue;
            int cell = std::min(k, nb);
            double w = op.w_half[idx(cell)] / g.hc[idx(cell)];
            diag += w;
            if (pos[idx(nb)] >= 0) trip.emplace_back(i, pos[idx(nb)], -w);
        }
        trip.emplace_back(i, i, diag);
        b(i) = op.mass[idx(k)] * rhs(k);
    }
    Eigen::SparseMatrix<cplx> A(N, N);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverFailure("sparse factorization failed");
    Eigen::VectorXcd u = lu.solve(b);
    if (lu.info() != Eigen::Success) throw SolverFailure("sparse solve failed");

    ContinuationResult out;
    out.lambda = lambda;
    out.cut_node = ka;
    out.solve_residual = (A * u - b).norm() / std::max(b.norm(), 1e-300);
    if (out.solve_residual > 1e-10) throw SolverFailure("linear solve residual " + std::to_string(out.solve_residual));
    out.E = h;
    for (int i = 0; i < N; ++i) out.E(dofs[idx(i)]) += u(i);
    for (int k = ka; k < g.n(); ++k) out.correction_above_cut = std::max(out.correction_above_cut, std::abs(out.E(k) - h(k)));

    // residual with the unconstrained conservative stencil; the Dirichlet node is excluded
    out.residual = apply_laplacian(op0, q0, out.E) - lambda * out.E;
    out.residual(g.n() - 1) = 0;
    double num = 0, den = 0, l1_all = 0, l1_near = 0;
    for (int k = 0; k + 1 < g.n(); ++k) {
        const double m = op.mass[idx(k)];
        const double ar = std::abs(out.residual(k));
        den += m * std::norm(out.E(k));
        l1_all += m * ar;
        if (std::abs(k - ka) <= 1) {
            l1_near += m * ar;
            out.eta_coefficient += m * out.residual(k);
        } else {
            num += m * ar * ar;
        }
    }
    out.interior_residual = den > 0 ? std::sqrt(num / den) : 0;
    out.residual_mass_fraction = l1_all > 0 ? l1_near / l1_all : 1.0;
    return out;
}

}  // namespace rankone
