"""Representation-side spectra: symbols, oracles, thresholds, hypoellipticity."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schatlab import powers as pw
from schatlab import su2


# ---------------------------------------------------------------------------
# dual enumeration


def test_dual_ells_half_integers_vs_integers():
    assert np.array_equal(su2.dual_ells("su2", 2.0), [0.0, 0.5, 1.0, 1.5, 2.0])
    assert np.array_equal(su2.dual_ells("so3", 3.0), [0.0, 1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        su2.dual_ells("u2", 1.0)


def test_dual_point_dimension_and_eigenvalue():
    pt = su2.DualPoint(ell=1.5)
    assert pt.dimension == 4
    assert pt.laplace_eig == pytest.approx(3.75)
    with pytest.raises(ValueError):
        su2.DualPoint(ell=0.3).dimension  # not a half-integer


def test_dual_points_enumeration():
    pts = su2.dual_points("so3", 2.0)
    assert [p.ell for p in pts] == [0.0, 1.0, 2.0]
    assert [p.dimension for p in pts] == [1, 3, 5]


# ---------------------------------------------------------------------------
# symbols and the matrix oracle


def test_sublaplacian_symbol_values():
    sym = su2.sublaplacian_symbol(1.0)
    assert sorted(sym) == [1.0, 1.0, 2.0]  # l(l+1) - m^2 for m = -1, 0, 1


def test_hgamma_symbol_at_gamma_one_matches_ladder_shift():
    for two_ell in range(0, 11):
        ell = two_ell / 2.0
        sym = np.sort(su2.hgamma_symbol(1.0, ell))
        m = np.arange(-ell, ell + 1)
        expected = np.sort(ell * (ell + 1) - m * (m + 1))
        assert np.allclose(sym, expected, atol=1e-12)


@pytest.mark.parametrize("gamma", [1.0, 2.0, 3.5])
@pytest.mark.parametrize("z_sign", [-1, 1])
def test_hgamma_symbol_matches_matrix_oracle(gamma, z_sign):
    worst = 0.0
    for two_ell in range(0, 21):
        ell = two_ell / 2.0
        sym = np.sort(su2.hgamma_symbol(gamma, ell, z_sign=z_sign))
        orc = np.sort(su2.hgamma_matrix_oracle(gamma, ell, z_sign=z_sign))
        worst = max(worst, float(np.max(np.abs(sym - orc))) if len(sym) else 0.0)
    assert worst < 1e-9


def test_symbol_rejects_bad_ell():
    with pytest.raises(ValueError):
        su2.sublaplacian_symbol(-1.0)
    with pytest.raises(ValueError):
        su2.hgamma_symbol(2.0, 0.7)


# ---------------------------------------------------------------------------
# power studies


def test_invariant_power_threshold_both_sides():
    above = su2.invariant_power_schatten("sublaplacian", alpha=3.0, p=2.0, l_max=512)
    below = su2.invariant_power_schatten("sublaplacian", alpha=1.0, p=2.0, l_max=512)
    assert above.predicted_member and above.classification.verdict == pw.CONVERGENT
    assert not below.predicted_member and below.classification.verdict == pw.DIVERGENT


def test_invariant_power_hgamma_and_groups():
    res = su2.invariant_power_schatten("hgamma", alpha=3.0, p=2.0, gamma=2.0, group="so3", l_max=512)
    assert res.group == "so3"
    assert res.gamma == 2.0
    assert res.classification.verdict == pw.CONVERGENT


def test_invariant_power_validates_arguments():
    with pytest.raises(ValueError):
        su2.invariant_power_schatten("laplacian", alpha=2.0, p=2.0)
    with pytest.raises(ValueError):
        su2.invariant_power_schatten("sublaplacian", alpha=2.0, p=2.0, gamma=2.0)
    with pytest.raises(ValueError):
        su2.invariant_power_schatten("hgamma", alpha=2.0, p=2.0, gamma=0.5)
    with pytest.raises(ValueError):
        su2.invariant_power_schatten("sublaplacian", alpha=2.0, p=2.0, l_max=64)


# ---------------------------------------------------------------------------
# membership thresholds on the group


def test_group_thresholds_refined_is_sharper():
    th = su2.kernel_membership_threshold_group(3, 0.5, 0.5)
    assert th.general == pytest.approx(6.0 / 4.0)
    assert th.refined == pytest.approx(4.0 / 3.0)
    assert th.sharper == "refined"
    assert th.best == pytest.approx(4.0 / 3.0)


def test_group_thresholds_coincide_at_zero_smoothness():
    th = su2.kernel_membership_threshold_group(3, 0.0, 0.0)
    assert th.general == pytest.approx(2.0)
    assert th.refined == pytest.approx(2.0)
    assert th.sharper == "equal"


def test_group_thresholds_dimension_guard():
    with pytest.raises(ValueError):
        su2.kernel_membership_threshold_group(2, 0.5, 0.5)


# ---------------------------------------------------------------------------
# hypoellipticity scan


def test_hypoellipticity_fails_at_zero_with_minimal_witness():
    res = su2.hypoellipticity_check(0, 50)
    assert not res.passed
    assert res.witness == (1, 1)
    assert res.certified


def test_hypoellipticity_passes_at_one_half():
    res = su2.hypoellipticity_check(Fraction(1, 2), 50)
    assert res.passed
    assert res.witness is None
    assert res.certified


def test_hypoellipticity_fails_at_negative_even_integers():
    res = su2.hypoellipticity_check(-2, 50)
    assert not res.passed
    ell, m = res.witness
    assert -2 + ell * (ell + 1) - m * (m + 1) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(-60, 60), st.integers(1, 7))
def test_hypoellipticity_matches_arithmetic_rule(num, den):
    c = Fraction(num, den)
    res = su2.hypoellipticity_check(c, 200)
    k = -c
    failing = k.denominator == 1 and k >= 0 and k.numerator % 2 == 0
    assert res.passed == (not failing)
    if res.witness is not None:
        ell, m = res.witness
        assert ell >= 1 and abs(m) <= ell
        assert c + ell * (ell + 1) - m * (m + 1) == 0


def test_hypoellipticity_accepts_string_input():
    assert not su2.hypoellipticity_check("0", 10).passed
    assert su2.hypoellipticity_check("1/2", 10).passed
