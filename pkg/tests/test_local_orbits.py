import pytest

from src.config import Caps
from src.exactmath.poly import MonicPoly, poly_disc
from src.exactmath.rings import padic_val
from src.exceptions import DegenerateInput, InstanceTooLarge, LevelTooDeep
from src.local.families import FamilySpec
from src.local.fibers import fiber_points, fiber_size_bound, solve_linear_congruence
from src.local.orbits import (
    cubic_exponents,
    liftable_points,
    local_templates,
    orbit_count_graded,
    orbit_count_local,
    orbit_count_truncated,
    slicing_exponents,
    truncated_count_at,
)

CUBICS = [(0, 9, 0), (0, 3, 0), (0, 0, 4), (3, -9, 27), (1, 8, 8)]


def test_linear_congruence():
    assert solve_linear_congruence(3, 6, 9) == [2, 5, 8]
    assert solve_linear_congruence(3, 1, 9) == []
    assert solve_linear_congruence(2, 1, 5) == [3]


def test_unramified_and_simple_primes_give_one():
    f = MonicPoly.of([0, 1, 1])
    assert orbit_count_local(f, 3) == 1
    assert orbit_count_local(f, 5) == 1
    assert orbit_count_local(f, 31) == 1
    assert orbit_count_graded(f, 31) == {0: 1}


def test_cubic_examples():
    assert orbit_count_local(MonicPoly.of([0, 9, 0]), 3) == 3
    assert orbit_count_local(MonicPoly.of([0, 3, 0]), 3) == 2
    graded = orbit_count_graded(MonicPoly.of([0, 9, 0]), 3)
    assert sum(graded.values()) == 3
    assert all(z % 2 == 0 for z in graded)


@pytest.mark.parametrize("coeffs", CUBICS)
@pytest.mark.parametrize("p", [2, 3])
def test_cubic_closed_form_matches_templates(coeffs, p):
    f = MonicPoly.of(coeffs)
    v = padic_val(int(poly_disc(f)), p)
    closed = sorted(cubic_exponents(coeffs, p, v))
    templates = sorted(e for (e,) in slicing_exponents(3, v) for _ in local_templates(f, p, (e,)))
    assert closed == templates


@pytest.mark.parametrize("coeffs", [(0, 1, 1)])
def test_truncated_oracle_when_p_does_not_divide_disc(coeffs):
    f = MonicPoly.of(coeffs)
    assert orbit_count_truncated(f, 3) == 1 == orbit_count_local(f, 3)


@pytest.mark.parametrize("coeffs", [(0, 0, 4), (1, 8, 8)])
def test_truncated_oracle_ramified_at_two(coeffs):
    f = MonicPoly.of(coeffs)
    assert padic_val(int(poly_disc(f)), 2) >= 4
    exact = orbit_count_local(f, 2)
    assert exact == 3
    assert orbit_count_truncated(f, 2, levels=(5, 6)) == exact
    assert truncated_count_at(f, 2, 3) <= exact


@pytest.mark.slow
def test_truncated_oracle_default_levels_ramified():
    assert orbit_count_truncated(MonicPoly.of([0, 0, 4]), 2) == 3
    assert orbit_count_truncated(MonicPoly.of([0, 9, 0]), 3, levels=(4, 5)) == 3


def test_truncated_oracle_respects_caps():
    f = MonicPoly.of([0, 9, 0])
    with pytest.raises(LevelTooDeep):
        orbit_count_truncated(f, 3, caps=Caps(truncation_cap=3))
    with pytest.raises(InstanceTooLarge):
        truncated_count_at(MonicPoly.of([0, 1, 1]), 3, 2, Caps(fiber_cap=50))


def test_fiber_helpers():
    assert fiber_size_bound(3, 5) == 25
    points = set(fiber_points([0, 1, 1], 5))
    lifted = liftable_points(MonicPoly.of([0, 1, 1]), 5, 1)
    assert lifted and lifted <= points
    units = list(fiber_points([0, 1, 1], 4, slicing_filter=lambda v: v % 2 == 1))
    assert all(rows[0][1] % 2 == 1 for rows in units)


def test_family_counts():
    f = MonicPoly.of([0, 9, 0])
    unit = orbit_count_graded(f, 3, FamilySpec.unit_lambda_at(3))
    assert set(unit) <= {0}
    assert sum(unit.values()) <= orbit_count_local(f, 3)
    excluded = FamilySpec.inv_in(3, [(1, 1, 1)])
    assert orbit_count_local(f, 3, excluded) == 0
    included = FamilySpec.inv_in(3, [(0, 0, 0)])
    assert orbit_count_local(f, 3, included) == 3


def test_invalid_inputs():
    with pytest.raises(DegenerateInput):
        orbit_count_local(MonicPoly.of([0, 0, 0]), 3)
    with pytest.raises(ValueError):
        orbit_count_local(MonicPoly.of([1, 0, 0, 1]), 3)
