#include <doctest.h>

#include "rankone/eiscont.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numeric>

using namespace rankone;

namespace {

constexpr double kPi = 3.14159265358979323846;

CylinderGrid o2_grid(int ny, int xi, double a, double y_hi = 64) {
    GridParams gp;
    gp.a = a;
    gp.y_lo = 1;
    gp.y_hi = y_hi;
    gp.n_y = ny;
    gp.xi_max = xi;
    return build_grid(gp);
}

// Sum over all nonzero (m, n) with |m|, |n| <= N of y^s / |m z + n|^{2s}, plus the
// integral of the same density outside the square, divided by 2 zeta(2s).
double brute_force_eisenstein(double x, double y, double s, int N) {
    long double sum = 0;
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n) {
            if (m == 0 && n == 0) continue;
            const long double re = m * x + n, im = m * y;
            sum += std::pow(static_cast<long double>(y), s) / std::pow(re * re + im * im, static_cast<long double>(s));
        }
    // |m z + n|^2 = Q(m, n), a positive quadratic form; polar integral of r^{1-2s} Q(u)^{-s}
    const double R = N + 0.5;
    double tail = 0;
    const int K = 20000;
    for (int k = 0; k < K; ++k) {
        const double th = 2 * kPi * (k + 0.5) / K, c = std::cos(th), sn = std::sin(th);
        const double q = (c * x + sn) * (c * x + sn) + c * c * y * y;
        const double rt = R / std::max(std::abs(c), std::abs(sn));
        tail += std::pow(y, s) * std::pow(q, -s) * std::pow(rt, 2 - 2 * s) / (2 * s - 2) * (2 * kPi / K);
    }
    return static_cast<double>(sum + tail) / (2 * boost::math::zeta(2 * s));
}

}  // namespace

TEST_SUITE("eiscont") {

TEST_CASE("special functions against Boost") {
    for (double nu : {0.0, 0.5, 1.0, 1.7, 3.2})
        for (double x : {0.3, 2.0, 6.0, 40.0}) {
            const double want = boost::math::cyl_bessel_k(nu, x);
            CHECK(std::abs(bessel_k(nu, x) - want) <= 1e-12 * want);
        }
    for (double w : {1.2, 2.0, 3.5, 10.0}) CHECK(std::abs(riemann_zeta(w) - boost::math::zeta(w)) < 1e-12);
    for (double w : {0.3, 1.5, 7.2, -2.5}) {
        const double want = boost::math::tgamma(w);
        CHECK(std::abs(complex_gamma(w) - want) <= 1e-12 * std::abs(want));
    }
    // Gamma(1/2 + i t) has modulus sqrt(pi / cosh(pi t))
    CHECK(std::abs(complex_gamma(cplx(0.5, 1.3))) == doctest::Approx(std::sqrt(kPi / std::cosh(kPi * 1.3))).epsilon(1e-12));
    // K_{i t}(x) is real for real x
    CHECK(std::abs(bessel_k(cplx(0, 2.0), 1.5).imag()) < 1e-14);
    CHECK_THROWS_AS(riemann_zeta(1.0), DivergentRegion);
}

TEST_CASE("fundamental domain reduction") {
    HalfPlanePoint z = reduce_to_fundamental_domain({3.7, 0.05});
    CHECK(std::abs(z.x) <= 0.5);
    CHECK(z.x * z.x + z.y * z.y >= 1 - 1e-12);
    CHECK_THROWS_AS(reduce_to_fundamental_domain({0, -1}), BadDomain);
}

TEST_CASE("lattice sum against a brute-force oracle") {
    const double want = brute_force_eisenstein(0.0, 2.0, 2.0, 1000);
    EisensteinValue p = eisenstein_series({0.0, 2.0}, 2.0, 400);
    CHECK(std::abs(p.value.real() - want) < 1e-8);
    CHECK(std::abs(p.value.imag()) < 1e-14);
    CHECK(p.error_bound < 1e-8);
    EisensteinValue d = eisenstein_series({0.0, 2.0}, 2.0, 400, LatticeMethod::Direct);
    CHECK(std::abs(d.value.real() - want) <= d.error_bound);
    const double w2 = brute_force_eisenstein(0.31, 1.2, 2.5, 600);
    CHECK(std::abs(eisenstein_series({0.31, 1.2}, 2.5, 400).value.real() - w2) < 1e-8);
}

TEST_CASE("automorphy") {
    for (cplx s : {cplx(1.5), cplx(2.0, 1.0)}) {
        for (double x : {0.1, 0.37}) {
            cplx a = eisenstein_series({x, 1.3}, s, 500).value;
            cplx b = eisenstein_series({x + 1, 1.3}, s, 500).value;
            cplx c = eisenstein_series({x - 3, 1.3}, s, 500).value;
            CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
            CHECK(std::abs(a - c) < 1e-12 * std::abs(a));
        }
        // z -> -1/z
        const double x = 0.2, y = 1.4, r2 = x * x + y * y;
        cplx a = eisenstein_series({x, y}, s, 500).value;
        cplx b = eisenstein_series({-x / r2, y / r2}, s, 500).value;
        CHECK(std::abs(a - b) < 1e-9 * std::abs(a));
    }
    CHECK_THROWS_AS(eisenstein_series({0, 1}, 1.0, 10), DivergentRegion);
    CHECK_THROWS_AS(eisenstein_series({0, 1}, cplx(0.75, 2), 10), DivergentRegion);
}

TEST_CASE("constant term profile") {
    SampledFunction f;
    f.y = {1, 2, 3};
    f.x = {0, 0.25, 0.5, 0.75};
    f.values = Eigen::MatrixXcd::Zero(3, 4);
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 4; ++j) f.values(k, j) = std::cos(2 * kPi * f.x[static_cast<std::size_t>(j)]);
    CHECK(constant_term_profile(f).cwiseAbs().maxCoeff() < 1e-15);
    f.values.setConstant(2.5);
    CHECK((constant_term_profile(f).array() - 2.5).abs().maxCoeff() < 1e-15);
}

TEST_CASE("constant term fit") {
    std::vector<double> y;
    for (int k = 0; k < 40; ++k) y.push_back(1.0 + 0.2 * k);
    for (cplx s : {cplx(1.5), cplx(0.75, 2.0)}) {
        Eigen::VectorXcd prof(static_cast<Eigen::Index>(y.size()));
        for (std::size_t k = 0; k < y.size(); ++k) prof(static_cast<Eigen::Index>(k)) = std::pow(y[k], s) + 3.0 * std::pow(y[k], 1.0 - s);
        ConstantTermFit fit = fit_constant_term(y, prof, s, {1.0, 9.0});
        CHECK(std::abs(fit.A - 1.0) < 1e-10);
        CHECK(std::abs(fit.B - 3.0) < 1e-10);
        CHECK(fit.residual < 1e-12);
    }
    Eigen::VectorXcd p = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(y.size()));
    CHECK_THROWS_AS(fit_constant_term(y, p, 0.5, {1.0, 9.0}), IllConditionedFit);
    CHECK_THROWS_AS(fit_constant_term(y, p, 1.5, {1.0, 1.5}), IllConditionedFit);
}

TEST_CASE("sampled E_s is a discrete eigenfunction at second order") {
    std::vector<double> res;
    for (int ny : {128, 256, 512}) {
        CylinderGrid g = o2_grid(ny, 6, 8);
        DiscreteOperator op = assemble(Family::O, g);
        SampledFunction f = sample_eisenstein(1.5, g.y, 24, 1000);
        res.push_back(eigen_residual(op, to_modes(f, g), 0.75, [&](int k) { return k > 0 && k + 1 < g.n(); }));
    }
    CHECK(res[2] < 1e-3);
    CHECK(res[0] / res[1] > 3.5);
    CHECK(res[1] / res[2] > 3.5);
    CylinderGrid g = o2_grid(64, 6, 8);
    CHECK_THROWS_AS(to_modes(sample_eisenstein(1.5, g.y, 8, 100), g), GridMismatch);
}

TEST_CASE("lattice E_s constant term has A = 1") {
    CylinderGrid g = o2_grid(256, 0, 8);
    SampledFunction f = sample_eisenstein(1.5, g.y, 16, 1000);
    ConstantTermFit fit = fit_constant_term(g.y, constant_term_profile(f), 1.5, default_fit_window(g.y));
    CHECK(std::abs(fit.A - 1.0) < 1e-6);
    // phi(s) = sqrt(pi) Gamma(s - 1/2) zeta(2s - 1) / (Gamma(s) zeta(2s))
    const double phi = std::sqrt(kPi) * boost::math::tgamma(1.0) * boost::math::zeta(2.0) /
                       (boost::math::tgamma(1.5) * boost::math::zeta(3.0));
    CHECK(std::abs(fit.B - phi) < 1e-6);
}

TEST_CASE("pseudo-Eisenstein series") {
    RadialProfile zero{[](double) { return 0.0; }, 1.0, 2.0};
    CHECK(pseudo_eisenstein(zero, {0.1, 1.5}).value == 0.0);
    RadialProfile high{[](double y) { return smooth_step((y - 3) / 0.5) * (1 - smooth_step((y - 4) / 0.5)); }, 3.0, 4.5};
    PseudoEisensteinValue v = pseudo_eisenstein(high, {0.2, 3.7});
    CHECK(v.nonzero_terms == 1);
    CHECK(v.value == doctest::Approx(high.f(3.7)));
    PseudoEisensteinValue w = pseudo_eisenstein(high, {0.4, 5.0});
    CHECK(w.nonzero_terms == 0);
    RadialProfile low{[](double) { return 1.0; }, 1e-9, 1.0};
    CHECK_THROWS_AS(pseudo_eisenstein(low, {0.1, 1.5}), SupportTooLow);
    RadialProfile bad{[](double) { return 1.0; }, 2.0, 1.0};
    CHECK_THROWS_AS(pseudo_eisenstein(bad, {0.1, 1.5}), BadCutoff);
}

TEST_CASE("adjunction identity") {
    struct Case {
        double lo, hi, s;
    };
    for (Case c : {Case{0.4, 2.5, 1.7}, Case{0.6, 3.0, 2.3}}) {
        const double w = c.hi - c.lo;
        RadialProfile phi{[=](double y) {
                              return smooth_step((y - c.lo) / (0.3 * w)) * (1 - smooth_step((y - c.lo - 0.6 * w) / (0.4 * w)));
                          },
                          c.lo, c.hi};
        auto [lhs, rhs] = adjunction_check(phi, c.s);
        CHECK(std::abs(lhs - rhs) < 1e-6 * std::abs(lhs));
    }
}

TEST_CASE("truncation") {
    std::vector<double> ys;
    for (int i = 0; i < 160; ++i) ys.push_back(std::pow(64.0, i / 159.0));
    const double T = 4.0;
    TruncatedEisenstein t = truncate_eisenstein(1.5, T, ys, 16, 500);
    CHECK(t.rapid_decay);
    const Eigen::VectorXcd c = constant_term_profile(t.f);
    for (std::size_t k = 0; k < ys.size(); ++k) {
        if (ys[k] > T) CHECK(std::abs(c(static_cast<Eigen::Index>(k))) < 1e-12);
        if (ys[k] < T) {
            const double x = t.f.x[3];
            cplx e = eisenstein_series({x, ys[k]}, 1.5, 500).value;
            CHECK(std::abs(t.f.values(static_cast<Eigen::Index>(k), 3) - e) < 1e-12 * std::abs(e));
        }
    }
    for (std::size_t b = 1; b < t.bands.size(); ++b) CHECK(t.bands[b].sup < t.bands[b - 1].sup);
    CHECK_THROWS_AS(truncate_eisenstein(1.5, 0.5, ys, 16, 500), BadCutoff);
    CHECK_THROWS_AS(truncate_eisenstein(0.9, 2.0, ys, 16, 500), DivergentRegion);
}

TEST_CASE("h_s and the continuation right-hand side") {
    CylinderGrid g = o2_grid(256, 0, 20);
    DiscreteOperator op = apply_pseudocusp_constraint(assemble(Family::O, g), 20.0);
    ContinuationParams p;
    CutoffProfile tau = cutoff_tau(p.a2, p.a1);
    const cplx s(0.75, 2.0);
    Eigen::VectorXcd hs = build_hs(s, tau, g);
    Eigen::VectorXcd rhs = continuation_rhs(s, hs, op, p);
    double hmin = 1e300, hmax = 0;
    for (int k = 0; k < g.n(); ++k) {
        const double y = g.y[static_cast<std::size_t>(k)];
        if (y >= p.a1) CHECK(hs(k) == std::pow(cplx(y), s));
        if (y <= p.a2) CHECK(hs(k) == 0.0);
        if (rhs(k) != 0.0) {
            hmin = std::min(hmin, y);
            hmax = std::max(hmax, y);
        }
    }
    REQUIRE(hmax > 0);
    const double cell = std::exp(g.h);
    CHECK(hmin >= p.a2 / cell * (1 - 1e-12));
    CHECK(hmax <= p.a1 * cell * (1 + 1e-12));
}

TEST_CASE("h_s is holomorphic in s") {
    CylinderGrid g = o2_grid(64, 0, 20);
    CutoffProfile tau = cutoff_tau(2, 4);
    const double e = 1e-5;
    for (cplx s : {cplx(0.75, 2.0), cplx(1.5, 0.0), cplx(-0.3, 0.7)}) {
        Eigen::VectorXcd dr = (build_hs(s + e, tau, g) - build_hs(s - e, tau, g)) / (2 * e);
        Eigen::VectorXcd di = (build_hs(s + cplx(0, e), tau, g) - build_hs(s - cplx(0, e), tau, g)) / (2 * e);
        // d/ds-bar = (d_re + i d_im) / 2 vanishes
        CHECK((dr + cplx(0, 1) * di).cwiseAbs().maxCoeff() < 1e-6 * (1 + dr.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("continuation on the cylinder model") {
    CylinderGrid g = o2_grid(512, 0, 20);
    DiscreteOperator op = assemble(Family::O, g);
    ContinuationParams p;
    const double s = 1.5;
    ContinuationResult r = continue_eisenstein(s, op, p);
    CHECK(r.correction_above_cut == 0.0);
    CHECK(r.interior_residual < 1e-3);
    // Below a the zero mode is alpha (y^s + phi y^{1-s}); the natural boundary at
    // y_lo = 1 forces phi = s / (s - 1), and continuity at a gives alpha.
    const double phi = s / (s - 1), alpha = 1 / (1 + phi * std::pow(p.a, 1 - 2 * s));
    std::vector<double> y;
    Eigen::VectorXcd prof(g.n());
    int used = 0;
    for (int k = 0; k < g.n(); ++k)
        if (g.y[static_cast<std::size_t>(k)] > p.a1 + 1 && g.y[static_cast<std::size_t>(k)] < p.a - 1) {
            y.push_back(g.y[static_cast<std::size_t>(k)]);
            prof(used++) = r.E(k);
        }
    ConstantTermFit fit = fit_constant_term(y, prof.head(used), s, {y.front(), y.back()});
    CHECK(std::abs(fit.A - alpha) < 2e-3);
    CHECK(std::abs(fit.B / fit.A - phi) < 2e-2);

    ContinuationResult c = continue_eisenstein(cplx(0.75, 2.0), op, p);
    CHECK(c.interior_residual < 1e-3);
    CHECK(c.residual_mass_fraction > 0.95);
    CHECK(c.correction_above_cut == 0.0);
}

TEST_CASE("resonant parameter") {
    CylinderGrid g = o2_grid(128, 0, 20);
    DiscreteOperator op = assemble(Family::O, g);
    ContinuationParams p;
    DiscreteOperator con = apply_pseudocusp_constraint(op, p.a);
    const double mu = mode_eigenvalues(con, g.zero_mode).at(3);
    REQUIRE(mu > 0.25);
    const cplx s(0.5, std::sqrt(mu - 0.25));
    CHECK_THROWS_AS(continue_eisenstein(s, op, p), ResonantParameter);
    ContinuationParams bad = p;
    bad.a1 = 30;
    CHECK_THROWS_AS(continue_eisenstein(1.5, op, bad), BadCutoff);
}

}  // TEST_SUITE
