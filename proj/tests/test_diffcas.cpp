#include <doctest.h>

#include "rankone/diffcas.hpp"

#include <Eigen/Eigenvalues>

#include <random>

using namespace rankone;

namespace {

const Laurent Y = Laurent::var("y");

DiffOp second(const std::string& c, const Laurent& coef) {
    DiffOp op;
    op.add({{c, 2}}, coef);
    return op;
}
DiffOp first(const std::string& c, const Laurent& coef) { return DiffOp::derivative(c, coef); }

// Hand-written O(r,1) operator: 1/2 y^2 d_y^2 - (r-2)/2 y d_y + y^2 sum d_xi^2.
DiffOp o_formula(int r, int drift_shift = 0) {
    DiffOp op = second("y", Y * Y * Laurent(Rational(1, 2))) +
                first("y", Y * Laurent(Rational(-(r - 2 + drift_shift), 2)));
    for (int i = 1; i < r; ++i) op += second("x" + std::to_string(i), Y * Y);
    return op;
}

Eigen::MatrixXcd complex_orthogonal(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            K(i, j) = {0.4 * nd(rng), 0.4 * nd(rng)};
            K(j, i) = -K(i, j);
        }
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    return (I - K) * (I + K).inverse();
}

}  // namespace

TEST_SUITE("diffcas") {

TEST_CASE("diffop composition follows Leibniz") {
    DiffOp ydy = first("y", Y);
    DiffOp sq = ydy.compose(ydy);
    DiffOp want = second("y", Y * Y) + first("y", Y);
    CHECK(sq == want);
    CHECK(sq.order() == 2);
}

TEST_CASE("iwasawa relations hold for every family") {
    for (Family f : {Family::O, Family::U, Family::Sp})
        for (int r = 2; r <= 4; ++r) CHECK(verify_iwasawa_relations(make_form(f, r)).all_pass());
    CHECK(verify_iwasawa_relations(make_form(Family::GeneralQ, 3, {{1, 1}}, 0)).all_pass());
    CHECK(verify_iwasawa_relations(make_form(Family::GeneralQ, 3, {}, 1)).all_pass());
}

TEST_CASE("O generators act by coordinate shifts") {
    IwasawaReport rep = verify_iwasawa_relations(make_form(Family::O, 3));
    for (const auto& c : rep.checks)
        if (c.shift_form) CHECK(*c.shift_form);
}

TEST_CASE("generator actions") {
    Derivation o = derive_laplacian(make_form(Family::O, 3));
    CHECK(o.actions.at("H") == first("y", Y));
    CHECK(o.actions.at("X2") == first("x2", Y));
    Derivation u = derive_laplacian(make_form(Family::U, 2));
    CHECK(u.actions.at("Zt") == first("x", Y * Y));
    CHECK(u.actions.at("Zt").compose(u.actions.at("Zt")) == second("x", Y * Y * Y * Y));
}

TEST_CASE("general real place X_i^2") {
    Derivation q = derive_laplacian(make_form(Family::GeneralQ, 3, {{2, 0}}, 0));
    const Laurent y = Laurent::var("y@R1"), u = Laurent::var("u@R1");
    auto h = [](int i, int j) { return Laurent::var("h" + std::to_string(i) + "_" + std::to_string(j) + "@R1"); };
    // y^2 u^2 sum_i h^{i1} h^{i2} at the mixed index, sum_i (h^{ij})^2 on the diagonal
    CHECK(q.op.terms.at({{"x1@R1", 1}, {"x2@R1", 1}}) ==
          y * y * u * u * (h(1, 1) * h(2, 1) + h(1, 2) * h(2, 2)) * Laurent(2));
    CHECK(q.op.terms.at({{"x1@R1", 2}}) == y * y * u * u * (h(1, 1) * h(1, 1) + h(1, 2) * h(1, 2)));
}

TEST_CASE("O(r,1) operator against the hand formula") {
    for (int r = 2; r <= 6; ++r) {
        Derivation d = derive_laplacian(make_form(Family::O, r));
        CHECK(compare_diffop(d.op, o_formula(r)).equal());
        CHECK(d.frame.measure_exponent == r);
    }
}

TEST_CASE("perturbed reference gives one difference at y d_y") {
    Derivation d = derive_laplacian(make_form(Family::O, 4));
    CompareReport rep = compare_diffop(d.op, o_formula(4, 1));
    REQUIRE(rep.differences.size() == 1);
    CHECK(rep.differences[0].index == MultiIndex{{"y", 1}});
    CHECK(compare_diffop(d.op, d.op).equal());
}

TEST_CASE("renormalized U and Sp operators") {
    for (int r = 2; r <= 4; ++r) {
        Derivation d = derive_laplacian(make_form(Family::U, r));
        ReferenceFormula ref = reference_formula(make_form(Family::U, r));
        REQUIRE(ref.renorm);
        DiffOp got = renormalize(d.op, *ref.renorm);
        DiffOp want = second("y", Y * Y) + second("x", Y * Y * Y * Y) + first("y", Y * Laurent(-(2 * r - 1)));
        for (int l = 1; l < r; ++l) {
            want += second("u" + std::to_string(l), Y * Y);
            want += second("v" + std::to_string(l), Y * Y);
        }
        CHECK(compare_diffop(got, want).equal());
        CHECK(compare_diffop(d.op, ref.op, ref.renorm).equal());
    }
    for (int r = 2; r <= 4; ++r) {
        Derivation d = derive_laplacian(make_form(Family::Sp, r));
        ReferenceFormula ref = reference_formula(make_form(Family::Sp, r));
        CHECK(compare_diffop(d.op, ref.op, ref.renorm).equal());
        DiffOp got = renormalize(d.op, *ref.renorm);
        CHECK(got.terms.at({{"y", 1}}) == Y * Laurent(-(4 * r + 1)));
        CHECK(got.terms.at({{"y", 2}}) == Y * Y);
    }
}

TEST_CASE("general family against the reference, with and without a Levi block") {
    const std::vector<FormSpec> specs = {make_form(Family::GeneralQ, 2, {{1, 0}}, 0), make_form(Family::GeneralQ, 2, {{1, 0}}, 1),
                                         make_form(Family::GeneralQ, 3, {{1, 1}}, 0), make_form(Family::GeneralQ, 3, {{2, 0}}, 1)};
    for (const auto& spec : specs) {
        Derivation d = derive_laplacian(spec);
        ReferenceFormula ref = reference_formula(spec);
        CompareReport cmp = compare_diffop(d.op, ref.op, ref.renorm);
        if (spec.complex_places == 0 || spec.r == 2) {
            CHECK(cmp.equal());
        } else {
            // only the d_v d_x cross terms the closed form drops
            CHECK_FALSE(cmp.equal());
            for (const auto& e : cmp.differences) {
                REQUIRE(e.index.size() == 2);
                CHECK(e.index.begin()->first[0] == 'v');
                CHECK(std::next(e.index.begin())->first[0] == 'x');
            }
        }
        bool opaque = false;
        for (const auto& [idx, c] : d.op.terms)
            for (const auto& [k, n] : idx) opaque = opaque || k.rfind("Omega'", 0) == 0;
        CHECK(opaque == (spec.r > 2));
    }
}

TEST_CASE("frame mismatch is reported") {
    Derivation a = derive_laplacian(make_form(Family::O, 2));
    Derivation b = derive_laplacian(make_form(Family::O, 3));
    CHECK_THROWS_AS(compare_diffop(a.op, a.frame, b.op, b.frame), FrameMismatch);
}

TEST_CASE("unknown generator in casimir_to_diffop") {
    CasimirElement e;
    e.add({"Q", "Q"}, 1);
    CHECK_THROWS_AS(casimir_to_diffop(e, {}), UnknownGenerator);
}

TEST_CASE("complex place coefficients") {
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(3, 3);
    ComplexPlaceReport id = complex_place_coeffs(1.0, I);
    CHECK(id.delta_error < 1e-15);
    Eigen::MatrixXcd bad = I * 2.0;
    CHECK_THROWS_AS(complex_place_coeffs(1.0, bad), NotOrthogonal);

    // M is the Hermitian form |u|^2 Re(h^* h); it equals delta only for real h.
    std::mt19937_64 rng(9);
    double herm = 0, real_case = 0;
    for (int n = 0; n < 20; ++n) {
        Eigen::MatrixXcd h = complex_orthogonal(rng, 3);
        herm = std::max(herm, complex_place_coeffs(std::polar(1.0, 0.3 * n), h, 1e-9).hermitian_error);
        Eigen::MatrixXcd hr = h.real().cast<std::complex<double>>();
        Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(3, 3);
        K(0, 1) = 0.3 * n;
        K(1, 0) = -K(0, 1);
        hr = (I - K) * (I + K).inverse();
        real_case = std::max(real_case, complex_place_coeffs(std::polar(1.0, 0.2 * n), hr, 1e-9).delta_error);
    }
    CHECK(herm < 1e-12);
    CHECK(real_case < 1e-12);
}

TEST_CASE("elliptic bounds") {
    EllipticBounds e = elliptic_bounds({Eigen::MatrixXd::Identity(2, 2)});
    CHECK(e.a == doctest::Approx(1));
    CHECK(e.b == doctest::Approx(1));
    Eigen::MatrixXd a = Eigen::Vector2d(2, 3).asDiagonal(), b = Eigen::Vector2d(1, 5).asDiagonal();
    e = elliptic_bounds({a, b});
    CHECK(e.a == doctest::Approx(1));
    CHECK(e.b == doctest::Approx(5));
    Eigen::MatrixXd n = Eigen::Vector2d(1, -1).asDiagonal();
    CHECK_THROWS_AS(elliptic_bounds({n}), NotPositiveDefinite);

    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    std::vector<Eigen::MatrixXd> samples;
    for (int k = 0; k < 50; ++k) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Identity(3, 3) + 0.2 * Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return nd(rng); });
        samples.push_back(h.transpose() * h);
    }
    CHECK(elliptic_bounds(samples).a > 0);
}

TEST_CASE("cayley transform is orthogonal for S'") {
    ExactMatrix S(2, 2), K(2, 2);
    S(0, 0) = 1;
    S(1, 1) = -1;
    K(0, 1) = Rational(1, 3);
    K(1, 0) = Rational(-1, 3);
    ExactMatrix h = cayley_orthogonal(S, K);
    CHECK(h.transpose() * S * h == S);
}

}  // TEST_SUITE
