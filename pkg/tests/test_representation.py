from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from src.exactmath.poly import MonicPoly
from src.exactmath.rings import QQ, RR, ZZ, IntegersMod
from src.exceptions import LengthMismatch
from src.groups.elements import act, random_P
from src.representation.invariants import (
    _inv_symbolic,
    bareiss_det,
    calibrate_section_signs,
    height,
    height_below,
    in_stratum,
    inv,
    inv_coefficients,
    lambda_,
    section_sign_vector,
    sigma,
    sigma0,
    stratify,
    valid_root_counts,
    zpoly,
)
from src.representation.matrices import ReducibleMatrix, SymMatrix

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_inv_of_zero_is_monomial():
    for n in range(3, 7):
        zero = SymMatrix.from_entries(n, {}, QQ)
        assert inv(zero) == MonicPoly.monomial(n, QQ)


def test_section_small_examples():
    f = MonicPoly.of([0, 1, 1], QQ)
    assert inv(sigma0(f)) == f
    B = sigma0(MonicPoly.monomial(3, QQ))
    assert B.entry(1, 2) == 1
    assert B.entry(2, 2) == B.entry(2, 3) == B.entry(3, 3) == 0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_section_signs_calibrate(n):
    assert calibrate_section_signs(n) == section_sign_vector(n)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@given(data=st.data())
def test_section_identity_over_rationals(n, data):
    coeffs = data.draw(st.lists(rationals, min_size=n, max_size=n))
    f = MonicPoly.of(coeffs, QQ)
    B = sigma0(f)
    assert B.is_reducible()
    assert inv(B) == f


@pytest.mark.parametrize("n", [3, 4, 5])
@given(seed=st.integers(0, 10_000))
def test_inv_is_invariant_under_P(n, seed):
    f = MonicPoly.of([Fraction(seed % 7 - 3, 1 + seed % 5)] * n, QQ)
    B = sigma0(f)
    g = random_P(n, QQ, 5, seed)
    assert inv(act(g, B)) == f


def test_bareiss_mixed_entries_stay_exact():
    small = bareiss_det([[2, 1, 0], [1, 1, 0], [0, 0, Fraction(1, 3)]])
    assert small == Fraction(1, 3)
    assert isinstance(small, Fraction)
    big = bareiss_det([[10 ** 17, 3, 0], [1, 1, 0], [0, 0, Fraction(1, 2)]])
    assert big == Fraction(10 ** 17 - 3, 2)
    assert isinstance(big, Fraction)
    assert bareiss_det([[4, 2], [2, 1]]) == 0


def test_inv_coefficients_half_integral():
    half = Fraction(1, 2)
    rows = [[0, half, 1], [half, 3, 0], [1, 0, 0]]
    coeffs = inv_coefficients(rows)
    assert not any(isinstance(c, float) for c in coeffs)
    assert coeffs == _inv_symbolic(rows)[1:]


def test_inv_methods_agree_mod_p():
    ring = IntegersMod(7)
    f = MonicPoly.of([3, 1, 5], ring)
    B = sigma0(f)
    assert inv(B, method="ring") == inv(B) == f


def test_height_examples():
    assert height(MonicPoly.monomial(3)) == 0
    assert height(MonicPoly.of([0, 0, -8])) == pytest.approx(2.0)
    assert not height_below(MonicPoly.of([3, 2, 5]), 2)
    assert height_below(MonicPoly.of([1, 3, 7]), 2)


def test_lambda_and_zpoly_examples():
    assert lambda_(ReducibleMatrix.from_entries(3, {(1, 2): 5}, ZZ)) == 5
    assert lambda_(ReducibleMatrix.from_entries(5, {(1, 4): 2, (2, 3): 3}, ZZ)) == 54
    assert lambda_(ReducibleMatrix.from_entries(4, {(1, 3): 2, (2, 2): 3}, ZZ)) == 6
    assert zpoly([2], 3) == 4
    assert zpoly([2, 3], 5) == 324
    assert zpoly([2, 3], 4) == 36
    with pytest.raises(LengthMismatch):
        zpoly([2, 3], 3)


def test_sigma_rescaled_section():
    f = MonicPoly.of([0.5, -0.25, 1.0], RR)
    assert sigma(f).rows == sigma0(f).rows
    g = MonicPoly.of([3.0, -7.0, 11.0], RR)
    recovered = inv(sigma(g))
    assert recovered.coeffs == pytest.approx(g.coeffs)
    assert max(abs(x) for row in sigma(g).rows for x in row) <= 4 * height(g)


def test_stratify_examples():
    assert stratify(MonicPoly.of([0, -1, 0])) == 3
    assert stratify(MonicPoly.of([0, 0, 0, 1])) == 0
    assert stratify(MonicPoly.of([0, 1, 1])) == 1
    assert valid_root_counts(4) == [0, 2, 4]
    assert valid_root_counts(3) == [1, 3]
    assert not in_stratum(MonicPoly.monomial(3), 1)
