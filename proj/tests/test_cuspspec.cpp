#include <doctest.h>

#include "rankone/cuspspec.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace rankone;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridParams params(Family f = Family::O, int r = 2, int ny = 256, int xi = 8, double a = 2.0) {
    GridParams p;
    p.family = f;
    p.r = r;
    p.n_y = ny;
    p.xi_max = xi;
    p.a = a;
    p.y_lo = 1;
    p.y_hi = 64;
    return p;
}

DiscreteOperator op_for(const GridParams& p) { return assemble(p.family, build_grid(p)); }

// Bump in tau = log y supported strictly inside (y_lo, y_hi).
double bump(double y) {
    const double t = std::log(y), c = 1.7, w = 0.9;
    const double u = (t - c) / w;
    return std::abs(u) < 1 ? std::exp(-1.0 / (1 - u * u)) : 0.0;
}
double bump_dtau(double y) {
    const double t = std::log(y), c = 1.7, w = 0.9;
    const double u = (t - c) / w;
    return std::abs(u) < 1 ? bump(y) * (-2 * u / ((1 - u * u) * (1 - u * u))) / w : 0.0;
}

GridFunction single_mode(const DiscreteOperator& op, int q, double (*f)(double)) {
    GridFunction g = GridFunction::zero(op.grid);
    for (int k = 0; k < op.grid.n(); ++k) g.modes[static_cast<std::size_t>(q)](k) = f(op.grid.y[static_cast<std::size_t>(k)]);
    return g;
}

}  // namespace

TEST_SUITE("cuspspec") {

TEST_CASE("grid construction") {
    CylinderGrid g = build_grid(params());
    CHECK(g.n() == 256);
    CHECK(g.d == 1);
    CHECK(g.mode_count() == 17);
    CHECK(g.modes[static_cast<std::size_t>(g.zero_mode)] == std::vector<int>{0});
    bool has_a = false;
    for (double y : g.y) has_a = has_a || y == 2.0;
    CHECK(has_a);
    CHECK_THROWS_AS(build_grid(params(Family::O, 2, 8)), BadDomain);
    GridParams bad = params();
    bad.a = 100;
    CHECK_THROWS_AS(build_grid(bad), BadDomain);

    CylinderGrid g2 = build_grid(params(Family::O, 2, 511));
    CylinderGrid g1 = build_grid(params(Family::O, 2, 256));
    CHECK(g2.h == doctest::Approx(g1.h / 2).epsilon(0.02));

    CylinderGrid o3 = build_grid(params(Family::O, 3, 64, 2));
    CHECK(o3.mode_count() == 13);  // |xi| <= 2 in Z^2
    for (const auto& xi : o3.modes) {
        std::vector<int> neg = xi;
        for (int& v : neg) v = -v;
        CHECK(o3.mode_index(neg) >= 0);
    }
}

TEST_CASE("measure exponents") {
    CHECK(build_grid(params(Family::O, 3, 32, 1)).m == 3);
    CHECK(build_grid(params(Family::U, 2, 32, 1)).m == 5);
    CHECK(build_grid(params(Family::Sp, 2, 32, 1)).m == 11);
}

TEST_CASE("U potential carries y^4 on the x direction") {
    DiscreteOperator op = op_for(params(Family::U, 2, 64, 1));
    bool found = false;
    for (std::size_t c = 0; c < op.directions.size(); ++c)
        if (op.directions[c] == "x") {
            CHECK(op.power[c] == 4);
            found = true;
        }
    CHECK(found);
}

TEST_CASE("missing operator") {
    CHECK_THROWS_AS(assemble(DiffOp{}, build_grid(params())), MissingDiffOp);
}

TEST_CASE("zero-frequency constant has no potential energy") {
    DiscreteOperator op = op_for(params(Family::O, 2, 128, 2));
    GridFunction f = GridFunction::zero(op.grid);
    for (int k = 10; k < 60; ++k) f.modes[static_cast<std::size_t>(op.grid.zero_mode)](k) = 1.0;
    FormParts p = form_parts(op, f);
    CHECK(p.tangential2 == 0.0);
    CHECK(p.tangential4 == 0.0);
    CHECK(p.radial > 0);
}

TEST_CASE("pseudo-cusp constraint") {
    DiscreteOperator op = op_for(params(Family::O, 2, 128, 2));
    CHECK_THROWS_AS(apply_pseudocusp_constraint(op, 100.0), CutOutsideDomain);
    DiscreteOperator all = apply_pseudocusp_constraint(op, 1.0);
    int active = 0;
    for (char c : all.active[static_cast<std::size_t>(op.grid.zero_mode)]) active += c;
    CHECK(active == 0);
    DiscreteOperator c = apply_pseudocusp_constraint(op, 2.0);
    int above = 0;
    for (double y : op.grid.y) above += y >= 2.0;
    CHECK(c.dof_count() == op.dof_count() - (above - 1));  // the Dirichlet node is never a DOF
}

TEST_CASE("norms on zero and support") {
    DiscreteOperator op = apply_pseudocusp_constraint(op_for(params()), 2.0);
    GridFunction z = GridFunction::zero(op.grid);
    CHECK(quadratic_form(op, z) == 0.0);
    CHECK(b1_norm(op, z) == 0.0);
    CHECK(tail_norm(op, z, 4) == 0.0);
    CHECK(check_tail_bound(op, z, 10).ratio == 0.0);
    GridFunction f = single_mode(op, op.grid.mode_index({1}), bump);
    CHECK(tail_norm(op, f, 30.0) == 0.0);  // bump lives in log y < 2.6
    GridFunction wrong;
    CHECK_THROWS_AS(b1_norm(op, wrong), GridMismatch);
}

TEST_CASE("b1 norm against an independent discrete oracle and quadrature") {
    DiscreteOperator op = op_for(params(Family::O, 2, 512, 2));
    const int q = op.grid.mode_index({1});
    GridFunction f = single_mode(op, q, bump);
    const auto& g = op.grid;
    // discrete oracle: FE stiffness with midpoint weight, lumped mass with nodal weight
    double oracle = 0;
    for (int k = 0; k + 1 < g.n(); ++k) {
        const double h = g.hc[static_cast<std::size_t>(k)];
        const double wm = std::exp((1 - g.m) * 0.5 * (g.tau[static_cast<std::size_t>(k)] + g.tau[static_cast<std::size_t>(k + 1)]));
        const double df = bump(g.y[static_cast<std::size_t>(k + 1)]) - bump(g.y[static_cast<std::size_t>(k)]);
        oracle += wm * df * df / h;
    }
    for (int k = 0; k < g.n(); ++k) {
        const double hl = k > 0 ? g.hc[static_cast<std::size_t>(k - 1)] : 0, hr = k + 1 < g.n() ? g.hc[static_cast<std::size_t>(k)] : 0;
        const double y = g.y[static_cast<std::size_t>(k)], w = std::exp((1 - g.m) * g.tau[static_cast<std::size_t>(k)]);
        oracle += w * (hl + hr) / 2 * (1 + 4 * kPi * kPi * y * y) * bump(y) * bump(y);
    }
    CHECK(std::abs(b1_norm(op, f) - oracle) <= 1e-10 * oracle);

    // continuous quadrature on a fine uniform tau grid
    double quad = 0;
    const int N = 200000;
    const double t0 = 0, t1 = std::log(64.0), dt = (t1 - t0) / N;
    for (int i = 0; i < N; ++i) {
        const double t = t0 + (i + 0.5) * dt, y = std::exp(t), w = std::exp((1 - g.m) * t);
        quad += w * (bump_dtau(y) * bump_dtau(y) + (1 + 4 * kPi * kPi * y * y) * bump(y) * bump(y)) * dt;
    }
    CHECK(std::abs(b1_norm(op, f) - quad) <= 1e-3 * quad);
}

TEST_CASE("fragments are nonnegative") {
    std::mt19937_64 rng(11);
    for (Family fam : {Family::O, Family::U, Family::Sp}) {
        DiscreteOperator op = apply_pseudocusp_constraint(op_for(params(fam, 2, 64, fam == Family::O ? 4 : 1)), 2.0);
        for (int n = 0; n < 100; ++n) {
            GridFunction f = random_grid_function(op, rng);
            FormParts p = form_parts(op, f);
            CHECK(p.radial >= -1e-12);
            CHECK(p.tangential2 >= -1e-12);
            CHECK(p.tangential4 >= -1e-12);
            CHECK(perturbed_fragment(op, f, 2.0, 2.0) >= -1e-12);
            auto [sy, sa] = tangential_split(op, f, 2.0);
            CHECK(sy >= sa - 1e-12 * std::abs(sy));
        }
    }
}

TEST_CASE("tail bound property") {
    std::mt19937_64 rng(7);
    DiscreteOperator op = apply_pseudocusp_constraint(op_for(params()), 2.0);
    for (int n = 0; n < 200; ++n) {
        GridFunction f = random_grid_function(op, rng);
        double prev = 1e300;
        for (double c : {2.0, 4.0, 8.0, 16.0, 32.0}) {
            TailBoundResult t = check_tail_bound(op, f, c);
            CHECK(t.holds);
            CHECK(t.ratio <= prev);
            prev = t.ratio;
        }
    }
    GridFunction bad = GridFunction::zero(op.grid);
    bad.modes[static_cast<std::size_t>(op.grid.zero_mode)](op.grid.n() - 5) = 1.0;
    CHECK_THROWS_AS(check_tail_bound(op, bad, 10), ConstraintViolated);
    CHECK_THROWS_AS(check_tail_bound(op_for(params()), GridFunction::zero(op.grid), 10), ConstraintViolated);
}

TEST_CASE("spectrum against a dense generalized eigensolver") {
    DiscreteOperator op = apply_pseudocusp_constraint(op_for(params(Family::O, 2, 32, 1)), 2.0);
    for (int q = 0; q < op.grid.mode_count(); ++q) {
        std::vector<int> dofs;
        for (int k = 0; k < op.grid.n(); ++k)
            if (op.active[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)]) dofs.push_back(k);
        const int n = static_cast<int>(dofs.size());
        // stiffness by polarization of the quadratic form
        auto form = [&](int i, int j, double si, double sj) {
            GridFunction f = GridFunction::zero(op.grid);
            f.modes[static_cast<std::size_t>(q)](dofs[static_cast<std::size_t>(i)]) += si;
            f.modes[static_cast<std::size_t>(q)](dofs[static_cast<std::size_t>(j)]) += sj;
            return quadratic_form(op, f);
        };
        Eigen::MatrixXd K(n, n), M = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            M(i, i) = op.mass[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])];
            for (int j = 0; j < n; ++j) K(i, j) = (form(i, j, 1, 1) - form(i, j, 1, -1)) / 4;
        }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
        std::vector<double> got = mode_eigenvalues(op, q);
        REQUIRE(static_cast<int>(got.size()) == n);
        for (int i = 0; i < n; ++i) CHECK(got[static_cast<std::size_t>(i)] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-9));
    }
}

TEST_CASE("spectrum contract") {
    DiscreteOperator op = apply_pseudocusp_constraint(op_for(params(Family::O, 2, 256, 8)), 2.0);
    SpectrumResult s = spectrum(op, 10);
    REQUIRE(s.eigenvalues.size() == 10);
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    CHECK(s.eigenvalues.front() > 0);
    CHECK(s.resolvent_error < 1e-8);
    for (double r : s.residuals) CHECK(r < 1e-8);

    DiscreteOperator fine = apply_pseudocusp_constraint(op_for(params(Family::O, 2, 512, 8)), 2.0);
    const double lam = 0.5 * (s.eigenvalues[4] + s.eigenvalues[5]);
    CHECK(std::abs(count_below(fine, lam) - count_below(op, lam)) <= 1);
}

TEST_CASE("zero mode alone with Dirichlet ends") {
    DiscreteOperator op = apply_pseudocusp_constraint(op_for(params(Family::O, 2, 128, 0)), 32.0);
    SpectrumResult s = spectrum(op, 1);
    CHECK(s.eigenvalues[0] > 0);
}

TEST_CASE("cutoff profiles") {
    CutoffProfile phi = cutoff_phi_t(3.0);
    CHECK(phi.value(2.0) == 0.0);
    CHECK(phi.value(3.0) == 0.0);
    CHECK(phi.value(6.0) == 1.0);
    CHECK(phi.value(9.0) == 1.0);
    for (double y = 0; y < 10; y += 0.1) CHECK((phi.value(y) >= 0 && phi.value(y) <= 1));
    CHECK(cutoff_phi_t(1000.0).value(50.0) == 0.0);
    CutoffProfile tau = cutoff_tau(2.0, 4.0);
    CHECK(tau.value(1.9) == 0.0);
    CHECK(tau.value(4.1) == 1.0);
    CHECK_THROWS_AS(cutoff_tau(4.0, 2.0), BadParameters);
    CHECK_THROWS_AS(cutoff_phi_t(0.5), BadParameters);
    // recorded derivative bound against finite differences
    double sup = 0;
    for (double x = -0.5; x < 1.5; x += 1e-4) sup = std::max(sup, std::abs(smooth_step_d1(x)));
    CHECK(sup <= phi.sup_d1 * (1 + 1e-9));
    CHECK(smooth_step_d1(0.3) == doctest::Approx((smooth_step(0.3 + 1e-6) - smooth_step(0.3 - 1e-6)) / 2e-6).epsilon(1e-6));
}

TEST_CASE("truncation bound") {
    DiscreteOperator op = op_for(params(Family::O, 2, 256, 4));
    GridFunction low = GridFunction::zero(op.grid);
    for (int k = 0; k < op.grid.n(); ++k)
        if (op.grid.y[static_cast<std::size_t>(k)] < 1.9) low.modes[1](k) = 1.0;
    CHECK(check_truncation_bound(op, low, 2.0).lhs == 0.0);
    GridFunction high = GridFunction::zero(op.grid);
    for (int k = 0; k + 1 < op.grid.n(); ++k)
        if (op.grid.y[static_cast<std::size_t>(k)] > 4.1) high.modes[1](k) = 1.0;
    TruncationResult t = check_truncation_bound(op, high, 2.0);
    CHECK(t.lhs == doctest::Approx(t.rhs).epsilon(1e-14));
    std::mt19937_64 rng(5);
    double constant = -1;
    for (double tt : {1.0, 2.0, 4.0, 8.0})
        for (int n = 0; n < 50; ++n) {
            TruncationResult r = check_truncation_bound(op, random_grid_function(op, rng, false), tt);
            if (constant < 0) constant = r.constant;
            CHECK(r.constant == constant);
            CHECK(r.holds);
        }
}

TEST_CASE("gradient identity converges at second order") {
    std::vector<double> err;
    for (int ny : {256, 512, 1024}) {
        DiscreteOperator op = op_for(params(Family::O, 2, ny, 1));
        GridFunction f = single_mode(op, op.grid.mode_index({1}), bump);
        GradientIdentity gi = gradient_identity_check(op, f);
        err.push_back(std::abs(gi.lhs - gi.rhs) / gi.rhs);
    }
    CHECK(err[1] < 1e-3);
    CHECK(err[0] / err[1] > 3.0);
    CHECK(err[1] / err[2] > 3.0);
    DiscreteOperator op = op_for(params(Family::O, 2, 64, 1));
    GradientIdentity z = gradient_identity_check(op, GridFunction::zero(op.grid));
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
}

}  // TEST_SUITE
