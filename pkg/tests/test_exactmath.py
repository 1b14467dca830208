import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from src.exactmath.poly import MonicPoly, is_degenerate, poly_disc, sturm_real_roots, sylvester_disc
from src.exactmath.rings import QQ, ZZ, IntegersMod, PadicTrunc, padic_val
from src.exceptions import DegenerateInput, HalvingError, LengthMismatch, NotASquare


def test_padic_val():
    assert padic_val(12, 2) == 2
    assert padic_val(12, 5) == 0
    assert padic_val(0, 3) == math.inf
    assert padic_val(Fraction(9, 4), 2) == -2


def test_disc_examples():
    assert poly_disc(MonicPoly.of([0, 0, -1])) == -27
    assert poly_disc(MonicPoly.of([0, 1, 0])) == -4
    for n in range(3, 6):
        assert is_degenerate(MonicPoly.monomial(n))


def test_disc_matches_sylvester_on_small_grid():
    for coeffs in itertools.product(range(-2, 3), repeat=3):
        f = MonicPoly.of(coeffs, QQ)
        assert poly_disc(f) == sylvester_disc(f)


@given(st.lists(st.integers(-2, 2), min_size=4, max_size=5))
def test_disc_matches_sylvester_higher_degree(coeffs):
    f = MonicPoly.of(coeffs, QQ)
    assert poly_disc(f) == sylvester_disc(f)


def test_sturm_examples():
    assert sturm_real_roots(MonicPoly.of([0, -1, 0])) == 3
    assert sturm_real_roots(MonicPoly.of([0, 1, 1])) == 1
    assert sturm_real_roots(MonicPoly.of([0, 0, 0, 1])) == 0
    with pytest.raises(DegenerateInput):
        sturm_real_roots(MonicPoly.of([0, 0, 0]))


def test_modular_rings():
    r9 = IntegersMod(9)
    assert r9.half(4) == 2
    assert r9.inverse(2) == 5
    assert not r9.is_unit(3)
    with pytest.raises(ZeroDivisionError):
        r9.inverse(3)
    r8 = IntegersMod(8)
    assert r8.half(6) == 3
    with pytest.raises(HalvingError):
        r8.half(3)
    with pytest.raises(NotASquare):
        IntegersMod(5).sqrt(2)
    assert PadicTrunc(3, 2).valuation(18) == 2


def test_coerce_and_length():
    assert ZZ.coerce("7") == 7
    assert QQ.coerce("3/6") == Fraction(1, 2)
    assert IntegersMod(7).coerce(Fraction(1, 2)) == 4
    with pytest.raises(ValueError):
        ZZ.coerce(Fraction(1, 2))
    with pytest.raises(LengthMismatch):
        MonicPoly(n=3, coeffs=(1, 2), ring=ZZ)
    with pytest.raises(ValueError):
        MonicPoly.of([0, 9])
    with pytest.raises(ValueError):
        MonicPoly.monomial(1)


def test_poly_json_round_trip():
    f = MonicPoly.of([Fraction(1, 2), -3, 0], QQ)
    assert MonicPoly.from_json(f.to_json()) == f
