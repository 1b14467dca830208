import math
from fractions import Fraction

import pytest

from src.exceptions import FamilyError, InstanceTooLarge
from src.local.euler import contains, euler_product, interval_str, zeta_interval
from src.local.families import FamilySpec
from src.local.verify import (
    euler_identity_table,
    family_routes,
    jacobian_verify,
    measure_identity_check,
    section_check,
    transitivity_check,
)

ZETA2 = math.pi ** 2 / 6


# =============================================================================
# PRODUCTOS DE EULER
# =============================================================================
def test_zeta_interval_encloses_known_values():
    lo, hi = zeta_interval(2)
    assert lo <= hi
    assert contains((lo, hi), ZETA2, slack=1e-12)
    assert contains(zeta_interval(4), math.pi ** 4 / 90, slack=1e-12)
    with pytest.raises(ValueError):
        zeta_interval(1)


def test_constants_for_small_n():
    c3 = euler_product(None, 1000, 3)
    c4 = euler_product(None, 1000, 4)
    assert float(c3[0]) == pytest.approx(1.644934, abs=1e-6)
    assert float(c4[0]) == pytest.approx(2.705808, abs=1e-6)
    assert c3[1] - c3[0] < Fraction(1, 10 ** 20)


def test_zero_factor_collapses_product():
    assert euler_product({2: Fraction(0)}, 100, 3) == (0, 0)


def test_bound_tail_contains_value():
    bounded = euler_product(None, 1000, 3, tail_model="bound")
    assert contains(bounded, ZETA2)
    assert bounded[1] - bounded[0] > 0
    with pytest.raises(ValueError):
        euler_product(None, 10, 3, tail_model="guess")


def test_interval_str():
    lo, hi = interval_str(zeta_interval(2), digits=8)
    assert lo.startswith("1.644934")
    assert hi.startswith("1.644934")


# =============================================================================
# JACOBIANO Y TRANSITIVIDAD
# =============================================================================
@pytest.mark.parametrize("n,p,m,orbits", [(3, 3, None, 1), (3, 5, None, 1), (3, 2, 3, 2), (4, 2, 2, 4)])
def test_jacobian_verify(n, p, m, orbits):
    check = jacobian_verify(n, p, m)
    assert check.ok
    assert check.orbits == orbits
    assert check.model_dump(mode="json")["measured"] == f"{check.expected.numerator}/{check.expected.denominator}"


def test_jacobian_verify_limits():
    with pytest.raises(InstanceTooLarge):
        jacobian_verify(5, 2)
    with pytest.raises(InstanceTooLarge):
        jacobian_verify(3, 2, 4)


def test_transitivity_small():
    result = transitivity_check(3, 3)
    assert result["group_order"] == 6
    assert result["checked"] > 0
    assert result["failures"] == []
    with pytest.raises(ValueError):
        transitivity_check(3, 2)


@pytest.mark.slow
@pytest.mark.parametrize("n,p", [(3, 5), (4, 3), (3, 7), (4, 5)])
def test_transitivity_larger(n, p):
    assert transitivity_check(n, p)["failures"] == []


def test_section_check():
    assert section_check(4, trials=50, seed=3)["failures"] == []


def test_euler_identity_table():
    table = euler_identity_table(5, 100)
    assert len(table) == 25
    assert table["equal"].all()
    assert (table["lhs"] == table["rhs"]).all()


# =============================================================================
# RUTAS DE FAMILIA
# =============================================================================
@pytest.mark.parametrize("p", [2, 3])
def test_unit_lambda_routes_agree(p):
    routes = family_routes(3, p, FamilySpec.unit_lambda_at(p))
    assert routes.equal
    assert routes.lambda_route == 1


def test_routes_need_a_condition():
    with pytest.raises(FamilyError):
        family_routes(3, 5, FamilySpec.unit_lambda_at(3))


def test_measure_identity():
    result = measure_identity_check(3, 3, [(0, 2, 1)])
    assert result["status"] == "success"
    assert result["expected"] == Fraction(1, 27)
