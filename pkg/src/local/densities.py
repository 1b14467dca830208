"""
Densidades locales exactas: integrales de |lambda|_p sobre familias grandes y
factores de Euler.

Sobre la familia completa la integral se separa por entradas de corte:
    int_{Z_p} |b|_p^e db = (1 - 1/p) / (1 - p^{-(e+1)}).
Para condiciones de nivel j se suma sobre residuos de W_0 mod p^j: en una
clase r + p^j Z_p cada entrada de corte aporta |r|_p^e si r no es 0 mod p^j y
p^{-je} (1 - 1/p) / (1 - p^{-(e+1)}) si lo es.
"""
import itertools
import logging
from fractions import Fraction
from typing import Literal, NamedTuple, Optional

from pydantic import BaseModel, ConfigDict

from src.config import Caps
from src.exactmath.rings import IntegersMod, padic_val
from src.exceptions import InstanceTooLarge, LevelTooDeep
from src.local.families import FamilySpec, PrimeCondition
from src.representation.invariants import lambda_exponents
from src.representation.matrices import ReducibleMatrix, reducible_coords, slicing_coords

logger = logging.getLogger(__name__)

FactorKind = Literal["lambda_density", "orbit_count_avg", "euler_zeta"]


class LocalFactor(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    p: int
    value: Fraction
    kind: FactorKind = "lambda_density"

    def to_json(self) -> dict:
        return {"p": self.p, "value": f"{self.value.numerator}/{self.value.denominator}", "kind": self.kind}


class EulerIdentity(NamedTuple):
    p: int
    lhs: Fraction
    rhs: Fraction
    equal: bool


# =============================================================================
# FACTORES CERRADOS
# =============================================================================
def _power_integral(p: int, e: int) -> Fraction:
    """int_{Z_p} |b|_p^e db."""
    p = Fraction(p)
    return (1 - 1 / p) / (1 - p ** -(e + 1))


def full_lambda_integral(n: int, p: int) -> Fraction:
    result = Fraction(1)
    for e in lambda_exponents(n):
        result *= _power_integral(p, e)
    return result


def zeta_exponents(n: int) -> tuple[int, ...]:
    """Argumentos de zeta en C_n^fin: 2, 4, ..., 2g (n impar); n/2, 2, ..., n-2 (n par)."""
    if n % 2 == 1:
        return tuple(2 * i for i in range(1, n // 2 + 1))
    return (n // 2,) + tuple(2 * i for i in range(1, (n - 2) // 2 + 1))


def zeta_euler_factor(n: int, p: int) -> Fraction:
    result = Fraction(1)
    for a in zeta_exponents(n):
        result /= 1 - Fraction(1, p ** a)
    return result


def unit_normalizer(n: int, p: int) -> Fraction:
    """(1 - 1/p)^{-floor(n/2)}."""
    return (1 - Fraction(1, p)) ** -(n // 2)


def euler_factor_identity(n: int, p: int) -> EulerIdentity:
    lhs = unit_normalizer(n, p) * full_lambda_integral(n, p)
    rhs = zeta_euler_factor(n, p)
    return EulerIdentity(p=p, lhs=lhs, rhs=rhs, equal=lhs == rhs)


def jacobian_local(n: int, p: int) -> int:
    """|J|_p: 2^{n/2} en p = 2 con n par, 1 en otro caso."""
    return 2 ** (n // 2) if p == 2 and n % 2 == 0 else 1


# =============================================================================
# CONDICIONES DE NIVEL j
# =============================================================================
def _slicing_weight(value: int, p: int, j: int, e: int) -> Fraction:
    if value % p ** j:
        return Fraction(1, p ** (padic_val(value, p) * e))
    return Fraction(1, p ** (j * e)) * _power_integral(p, e)


def residue_integral(n: int, cond: PrimeCondition, caps: Optional[Caps] = None) -> Fraction:
    """Suma exacta sobre los residuos de W_0 mod p^j admitidos por cond."""
    caps = caps or Caps()
    p, j, q = cond.p, cond.j, cond.modulus
    coords = reducible_coords(n)
    if q ** len(coords) > caps.fiber_cap:
        raise InstanceTooLarge(f"W_0(Z/{q}) tiene {q ** len(coords)} puntos")
    ring = IntegersMod(q)
    slicing_pos = [coords.index(c) for c in slicing_coords(n)]
    exps = lambda_exponents(n)
    total = Fraction(0)
    for point in itertools.product(range(q), repeat=len(coords)):
        rows = ReducibleMatrix.from_coords(n, point, ring).rows
        if not cond.admits_rows(rows):
            continue
        weight = Fraction(1)
        for pos, e in zip(slicing_pos, exps):
            weight *= _slicing_weight(point[pos], p, j, e)
        total += weight
    return total / q ** len(coords)


def local_lambda_integral(n: int, p: int, family: Optional[FamilySpec] = None, caps: Optional[Caps] = None) -> LocalFactor:
    """int_{(S_p)_0} |lambda(B)|_p dB como racional exacto."""
    caps = caps or Caps()
    cond = family.condition_at(p) if family is not None else None
    if cond is None:
        value = full_lambda_integral(n, p)
    elif cond.j > caps.level_cap:
        raise LevelTooDeep(f"nivel {cond.j} > {caps.level_cap} en p={p}")
    elif cond.kind == "unit-lambda":
        value = (1 - Fraction(1, p)) ** (n // 2)
    else:
        value = residue_integral(n, cond, caps)
    logger.debug(f"int |lambda|_{p} (n={n}) = {value}")
    return LocalFactor(p=p, value=value, kind="lambda_density")
