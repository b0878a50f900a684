import cmath

import pytest

import rankone


def test_o21_operator_matches_reference():
    out = rankone.derive_casimir("O", 2)
    assert out["diff"] == []
    assert rankone.iwasawa_relations_hold("U", 2)


def test_spectrum_is_sorted_and_positive():
    ev = rankone.spectrum("O", 2, k=5, n_y=128)
    assert len(ev) == 5
    assert ev == sorted(ev)
    assert ev[0] > 0


def test_eisenstein_invariant_under_inversion():
    s = 1.5 + 0.5j
    z = complex(0.1, 1.3)
    w = -1 / z
    a = rankone.eisenstein_series(z.real, z.imag, s)
    b = rankone.eisenstein_series(w.real, w.imag, s)
    assert abs(a - b) < 1e-8 * abs(a)


def test_continuation_residual_small():
    r = rankone.continue_eisenstein(0.75 + 2j)
    assert r["interior_residual"] < 1e-3
    assert cmath.isclose(r["lambda"], (0.75 + 2j) * (-0.25 + 2j))


def test_heights():
    assert rankone.scaling_holds("3", ["1", "2"])
    eta, sq = rankone.global_height(["1/2", "3"])
    assert sq == "37"
    assert len(rankone.finite_below(3.0, 2, 5)) == 8


def test_errors_are_translated():
    with pytest.raises(rankone.RankoneError, match="ZeroVector"):
        rankone.global_height(["0", "0"])
