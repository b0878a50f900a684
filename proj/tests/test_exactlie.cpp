#include <doctest.h>

#include "rankone/lie.hpp"

#include <algorithm>
#include <random>

using namespace rankone;

namespace {

Scalar random_scalar(std::mt19937_64& rng, ScalarKind kind) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    auto q = [&] { return Rational(num(rng), den(rng)); };
    switch (kind) {
        case ScalarKind::Real: return Scalar(q());
        case ScalarKind::Complex: return Scalar(q(), q());
        default: return Scalar(q(), q(), q(), q());
    }
}

}  // namespace

TEST_SUITE("exactlie") {

TEST_CASE("rational stays in lowest terms") {
    Rational a(6, -4);
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK((a + Rational(3, 2)).is_zero());
    CHECK(Rational::parse("10/4") == Rational(5, 2));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("composition scalar laws") {
    const Scalar i = Scalar::unit_i(), j = Scalar::unit_j(), k = Scalar::unit_k();
    CHECK(i * i == Scalar(-1));
    CHECK(j * j == Scalar(-1));
    CHECK(k * k == Scalar(-1));
    CHECK(i * j == k);
    CHECK(j * i == -k);
    std::mt19937_64 rng(1);
    for (ScalarKind kind : {ScalarKind::Real, ScalarKind::Complex, ScalarKind::Quaternion})
        for (int n = 0; n < 50; ++n) {
            Scalar a = random_scalar(rng, kind), b = random_scalar(rng, kind);
            CHECK(a.conj().conj() == a);
            CHECK((a * b).norm() == a.norm() * b.norm());
            if (!a.is_zero()) CHECK(a * a.inverse() == Scalar(1));
        }
}

TEST_CASE("solve_linear examples") {
    ExactMatrix I = ExactMatrix::identity(3), b(3, 1);
    b(0, 0) = Rational(2, 3);
    b(2, 0) = -5;
    CHECK(solve_linear(I, b) == b);

    ExactMatrix A(2, 2), c(2, 1);
    A(0, 0) = 2;
    A(1, 1) = 2;
    c(0, 0) = 1;
    ExactMatrix x = solve_linear(A, c);
    CHECK(x(0, 0) == Scalar(Rational(1, 2)));
    CHECK(x(1, 0).is_zero());

    ExactMatrix S(2, 2);
    S(0, 0) = 1;
    S(0, 1) = 2;
    S(1, 0) = 2;
    S(1, 1) = 4;
    CHECK_THROWS_AS(solve_linear(S, c), SingularMatrix);
}

TEST_CASE("solve_linear over the quaternions") {
    std::mt19937_64 rng(3);
    for (int n = 0; n < 10; ++n) {
        ExactMatrix A(3, 3), b(3, 1);
        for (int i = 0; i < 3; ++i) {
            b(i, 0) = random_scalar(rng, ScalarKind::Quaternion);
            for (int j = 0; j < 3; ++j) A(i, j) = random_scalar(rng, ScalarKind::Quaternion);
        }
        CHECK(A * solve_linear(A, b) == b);
    }
}

TEST_CASE("conjugate transpose is an involution") {
    std::mt19937_64 rng(4);
    ExactMatrix A(2, 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = random_scalar(rng, ScalarKind::Quaternion);
    CHECK(A.conj_transpose().conj_transpose() == A);
    CHECK_THROWS_AS(A * A, DimensionMismatch);
}

TEST_CASE("basis dimensions and isometry condition") {
    for (Family f : {Family::O, Family::U, Family::Sp})
        for (int r = 2; r <= (f == Family::O ? 6 : 4); ++r) {
            FormSpec spec = make_form(f, r);
            LieBasis b = build_basis(spec);
            const int n = r + 1;
            const int dim = f == Family::O ? n * (n - 1) / 2 : (f == Family::U ? n * n : n * (2 * n + 1));
            CHECK(b.size() == dim);
            CHECK(expected_dimension(spec) == dim);
            for (const auto& g : b.gens) CHECK(isometry_defect(spec, g.m).is_zero());
        }
    CHECK(build_basis(make_form(Family::O, 3)).size() == 6);
    CHECK(build_basis(make_form(Family::U, 2)).size() == 9);
    CHECK_THROWS_AS(make_form(Family::O, 1), UnsupportedFamily);
}

TEST_CASE("o(2,1) X1 matrix") {
    LieBasis b = build_basis(make_form(Family::O, 2));
    const ExactMatrix& X = b.at("X1").m;
    CHECK(X(0, 1) == Scalar(1));
    CHECK(X(1, 2) == Scalar(-1));
    int nonzero = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) nonzero += !X(i, j).is_zero();
    CHECK(nonzero == 2);
}

TEST_CASE("brackets and pairing in o(r,1)") {
    LieBasis b = build_basis(make_form(Family::O, 4));
    CHECK(bracket(b.at("X1").m, b.at("Y1").m) == b.at("H").m);
    CHECK(bracket(b.at("H").m, b.at("H").m).is_zero());
    CHECK(bracket(b.at("X1").m, b.at("X2").m).is_zero());
    CHECK(trace_pairing(b.at("H").m, b.at("H").m) == Rational(2));
    CHECK(trace_pairing(b.at("H").m, b.at("X2").m).is_zero());
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            CHECK(trace_pairing(b.at("X" + std::to_string(i)).m, b.at("Y" + std::to_string(j)).m) ==
                  Rational(i == j ? 2 : 0));
    CHECK_THROWS_AS(bracket(ExactMatrix(2, 2), ExactMatrix(3, 3)), DimensionMismatch);
}

TEST_CASE("pairing duality holds exactly") {
    for (Family f : {Family::O, Family::U, Family::Sp}) {
        LieBasis b = build_basis(make_form(f, 3));
        auto duals = dual_basis(b);
        REQUIRE(static_cast<int>(duals.size()) == b.size());
        for (const auto& xi : b.gens)
            for (const auto& d : duals) {
                Rational v = trace_pairing(b, xi.m, evaluate(b, d.dual));
                CHECK(v == Rational(xi.name == d.name ? 1 : 0));
            }
    }
}

TEST_CASE("dual table entries") {
    LieBasis o = build_basis(make_form(Family::O, 3));
    std::map<std::string, LinearCombination> od;
    for (auto& d : dual_basis(o)) od[d.name] = d.dual;
    CHECK(od["H"] == LinearCombination{{"H", Rational(1, 2)}});
    CHECK(od["X1"] == LinearCombination{{"Y1", Rational(1, 2)}});

    LieBasis u = build_basis(make_form(Family::U, 2));
    std::map<std::string, LinearCombination> ud;
    for (auto& d : dual_basis(u)) ud[d.name] = d.dual;
    CHECK(ud["Z"] == LinearCombination{{"Zt", Rational(-1)}});
    CHECK(ud["Ht"] == LinearCombination{{"Ht", Rational(-1, 2)}});
}

TEST_CASE("U and Sp bracket tables") {
    LieBasis u = build_basis(make_form(Family::U, 3));
    for (int l = 1; l <= 2; ++l) {
        auto s = std::to_string(l);
        CHECK(bracket(u.at("X" + s).m, u.at("Y" + s).m) == u.at("H").m);
        CHECK(bracket(u.at("Xt" + s).m, u.at("Yt" + s).m) == -u.at("H").m);
    }
    CHECK(bracket(u.at("Z").m, u.at("Zt").m) == u.at("H").m);

    LieBasis sp = build_basis(make_form(Family::Sp, 2));
    for (const char* q : {"i", "j", "k"}) {
        std::string Q(q);
        CHECK(bracket(sp.at("Z" + Q + "-").m, sp.at("Z" + Q + "+").m) == sp.at("H").m);
        CHECK(bracket(sp.at("X" + Q + "1").m, sp.at("Y" + Q + "1").m) == -sp.at("H").m);
    }
}

TEST_CASE("casimir of o(2,1)") {
    CasimirElement om = casimir(build_basis(make_form(Family::O, 2)));
    CasimirElement want;
    want.add({"H", "H"}, Rational(1, 2));
    want.add({"X1", "Y1"}, Rational(1, 2));
    want.add({"Y1", "X1"}, Rational(1, 2));
    CHECK(om == want);
}

TEST_CASE("casimir is independent of generator order") {
    for (Family f : {Family::O, Family::U, Family::Sp}) {
        LieBasis b = build_basis(make_form(f, 3));
        CasimirElement base = casimir(b);
        std::mt19937_64 rng(5);
        for (int n = 0; n < 3; ++n) {
            LieBasis p = b;
            std::shuffle(p.gens.begin(), p.gens.end(), rng);
            for (auto& g : p.gens) g.partner = -1;  // indices are stale after shuffling
            CHECK(casimir(p) == base);
        }
    }
}

TEST_CASE("u(r,1) casimir contains -(Z Zt + Zt Z)") {
    CasimirElement om = casimir(build_basis(make_form(Family::U, 2)));
    CHECK(om.terms.at({"Z", "Zt"}) == Rational(-1));
    CHECK(om.terms.at({"Zt", "Z"}) == Rational(-1));
}

TEST_CASE("reduction modulo k matches the final displays") {
    for (int r = 2; r <= 6; ++r) {
        LieBasis b = build_basis(make_form(Family::O, r));
        CasimirElement om = casimir(b);
        Reduction red = reduce_mod_k(om, b);
        CasimirElement want;
        want.add({"H", "H"}, Rational(1, 2));
        want.add({"H"}, Rational(-(r - 1), 2));
        for (int i = 1; i < r; ++i) want.add({"X" + std::to_string(i), "X" + std::to_string(i)}, 1);
        CHECK(red.residual == want);
        CHECK(reduction_reconstructs(om, red));
    }
    for (int r = 2; r <= 4; ++r) {
        LieBasis b = build_basis(make_form(Family::U, r));
        Reduction red = reduce_mod_k(casimir(b), b);
        CasimirElement want;
        want.add({"H", "H"}, Rational(1, 2));
        want.add({"H"}, Rational(-r));
        want.add({"Zt", "Zt"}, 2);
        for (int l = 1; l < r; ++l) {
            want.add({"X" + std::to_string(l), "X" + std::to_string(l)}, 1);
            want.add({"Xt" + std::to_string(l), "Xt" + std::to_string(l)}, 1);
        }
        CHECK(red.residual == want);
        CHECK(reduction_reconstructs(casimir(b), red));
    }
    for (int r = 2; r <= 4; ++r) {
        LieBasis b = build_basis(make_form(Family::Sp, r));
        Reduction red = reduce_mod_k(casimir(b), b);
        CasimirElement want;
        want.add({"H", "H"}, Rational(1, 2));
        want.add({"H"}, Rational(-(2 * r + 1)));
        for (const char* q : {"i", "j", "k"}) want.add({std::string("Z") + q + "+", std::string("Z") + q + "+"}, 2);
        for (int l = 1; l < r; ++l)
            for (const char* q : {"", "i", "j", "k"}) {
                std::string X = std::string("X") + q + std::to_string(l);
                want.add({X, X}, 1);
            }
        CHECK(red.residual == want);
        CHECK(reduction_reconstructs(casimir(b), red));
    }
}

TEST_CASE("dropped terms end in k") {
    LieBasis b = build_basis(make_form(Family::Sp, 2));
    Reduction red = reduce_mod_k(casimir(b), b);
    REQUIRE(!red.dropped.empty());
    for (const auto& d : red.dropped) CHECK(in_compact(evaluate(b, d.kappa)));
}

}  // TEST_SUITE
