import itertools
import json
from fractions import Fraction

import pytest
from pydantic import ValidationError
from sympy import primerange

from src.exceptions import FamilyError, InstanceTooLarge, LevelTooDeep
from src.local.densities import (
    euler_factor_identity,
    full_lambda_integral,
    jacobian_local,
    local_lambda_integral,
    zeta_euler_factor,
    zeta_exponents,
)
from src.local.families import FamilySpec, PrimeCondition


def test_full_integral_cubic():
    for p in (2, 3, 5, 7):
        assert full_lambda_integral(3, p) == Fraction(p, p + 1)
    assert full_lambda_integral(3, 3) == Fraction(3, 4)


def test_euler_identity_examples():
    check = euler_factor_identity(3, 2)
    assert check.lhs == check.rhs == Fraction(4, 3)
    assert euler_factor_identity(5, 3).equal
    assert euler_factor_identity(4, 5).equal
    assert zeta_exponents(4) == (2, 2)
    assert zeta_exponents(7) == (2, 4, 6)
    assert zeta_euler_factor(4, 5) == Fraction(25, 24) ** 2


def test_euler_identity_all_small_primes():
    for n in range(3, 10):
        for p in primerange(2, 101):
            assert euler_factor_identity(n, int(p)).equal, (n, p)


def test_unit_lambda_family_integral():
    assert local_lambda_integral(3, 5, FamilySpec.unit_lambda_at(5)).value == Fraction(4, 5)
    assert local_lambda_integral(5, 3, FamilySpec.unit_lambda_at(3)).value == Fraction(4, 9)
    # sin condicion en p la familia es la completa
    assert local_lambda_integral(3, 7, FamilySpec.unit_lambda_at(5)).value == Fraction(7, 8)


def test_residue_family_of_every_point_is_full():
    residues = list(itertools.product(range(2), repeat=5))
    family = FamilySpec(name="all", conditions=[PrimeCondition(p=2, kind="residues", residues=residues)])
    family.check_invariance(3)
    assert local_lambda_integral(3, 2, family).value == full_lambda_integral(3, 2)


def test_family_caps(tight_caps):
    deep = FamilySpec.inv_in(3, [(0, 2, 1)], j=4)
    with pytest.raises(LevelTooDeep):
        local_lambda_integral(3, 3, deep)
    with pytest.raises(InstanceTooLarge):
        local_lambda_integral(3, 3, FamilySpec.inv_in(3, [(0, 2, 1)]), tight_caps)


def test_jacobian_local():
    assert jacobian_local(3, 2) == 1
    assert jacobian_local(4, 2) == 4
    assert jacobian_local(6, 3) == 1


def test_local_factor_json():
    data = local_lambda_integral(3, 3).to_json()
    assert data["value"] == "3/4"


# =============================================================================
# FAMILIAS
# =============================================================================
def test_condition_validation():
    with pytest.raises(ValidationError):
        PrimeCondition(p=4)
    with pytest.raises(ValidationError):
        PrimeCondition(p=3, kind="inv-in")
    with pytest.raises(ValidationError):
        PrimeCondition(p=3, j=0)
    with pytest.raises(ValidationError):
        FamilySpec(conditions=[PrimeCondition(p=3, kind="unit-lambda"), PrimeCondition(p=3)])


def test_residues_are_normalized():
    family = FamilySpec.inv_in(3, [(3, 5, -1)])
    cond = family.condition_at(3)
    assert cond.residues == [(0, 2, 2)]
    assert family.admits_poly_at([0, 2, 2], 3)
    assert family.admits_poly_at([3, -1, 5], 3)
    assert not family.admits_poly_at([0, 1, 2], 3)
    assert family.admits_poly_at([0, 1, 2], 5)
    assert family.conditioned_primes() == [3]
    assert FamilySpec.full().is_full()


def test_unit_lambda_admits_rows():
    family = FamilySpec.unit_lambda_at(3)
    assert family.admits_at(((0, 1, 0), (1, 0, 0), (0, 0, 0)), 3)
    assert not family.admits_at(((0, 3, 0), (3, 0, 0), (0, 0, 0)), 3)


def test_non_invariant_residues_rejected():
    family = FamilySpec(name="bad", conditions=[PrimeCondition(p=3, kind="residues", residues=[(1, 0, 0, 0, 0)])])
    with pytest.raises(FamilyError):
        family.check_invariance(3)


def test_family_load(tmp_path):
    family = FamilySpec.inv_in(3, [(0, 2, 1)], unit_lambda=True)
    path = tmp_path / "family.json"
    path.write_text(json.dumps(family.to_json()))
    assert FamilySpec.load(path) == family
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(FamilyError):
        FamilySpec.load(broken)
    with pytest.raises(FamilyError):
        FamilySpec.load(tmp_path / "missing.json")
