"""
Verificaciones exhaustivas de las identidades locales.

- jacobian_verify: |J|_p como cociente de cuentas de puntos (fibra / grupo).
- transitivity_check: sobre F_p cada fibra con disc unidad es una sola
  P(F_p)-orbita con estabilizador trivial.
- family_routes: ruta lambda (1 - 1/p)^{-floor(n/2)} int |lambda|_p frente a
  ruta de orbitas |J|_p * E_f[c_p^S(f)] en un primo condicionado.
- measure_identity_check: la identidad de medida para la familia de corte
  unidad sobre un conjunto de residuos de f mod p.
"""
import itertools
import logging
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_serializer
from sympy import primerange

from src.config import Caps
from src.exactmath.poly import MonicPoly, is_degenerate, poly_disc
from src.exactmath.rings import QQ, ZZ, IntegersMod
from src.exceptions import FamilyError, InstanceTooLarge
from src.groups.elements import enumerate_P, is_middle, n_coords, p_order
from src.local.densities import euler_factor_identity, jacobian_local, local_lambda_integral, unit_normalizer
from src.local.families import FamilySpec
from src.local.fibers import fiber_points, fiber_size_bound
from src.local.orbits import orbit_count_local
from src.reduction.oracles import find_orbits, p_generators
from src.representation.invariants import inv, sigma0
from src.representation.matrices import ReducibleMatrix, slicing_coords

logger = logging.getLogger(__name__)


class JacobianCheck(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    p: int
    modulus: int
    fiber_size: int
    group_size: int
    measured: Fraction
    expected: Fraction
    orbits: int
    expected_orbits: int

    @field_serializer("measured", "expected")
    def _ratio(self, value: Fraction) -> str:
        return f"{value.numerator}/{value.denominator}"

    @property
    def ok(self) -> bool:
        return self.measured == self.expected and self.orbits == self.expected_orbits


class FamilyRoutes(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    p: int
    lambda_route: Fraction
    orbit_route: Fraction

    @field_serializer("lambda_route", "orbit_route")
    def _ratio(self, value: Fraction) -> str:
        return f"{value.numerator}/{value.denominator}"

    @property
    def equal(self) -> bool:
        return self.lambda_route == self.orbit_route


# =============================================================================
# JACOBIANO
# =============================================================================
def group_size(n: int, q: int, p: int, integral_image: bool = False) -> int:
    """#P(Z/q); integral_image restringe la coordenada central a pares."""
    units = q - q // p
    size = units ** (n // 2)
    for i, _ in n_coords(n):
        size *= q // 2 if integral_image and q % 2 == 0 and is_middle(i, n) else q
    return size


def _unit_disc_poly(n: int, p: int) -> MonicPoly:
    ring = IntegersMod(p)
    for coeffs in itertools.product(range(p), repeat=n):
        f = MonicPoly.of(coeffs, ring)
        if poly_disc(f) != 0:
            return f
    raise ValueError(f"no hay polinomios separables de grado {n} sobre F_{p}")


def jacobian_verify(n: int, p: int, m: Optional[int] = None, caps: Optional[Caps] = None) -> JacobianCheck:
    """
    p impar: fibra sobre F_p de un f separable, medido = #fibra / #P(F_p).
    p = 2: fibra de x^n mod 2^m con corte unidad; medido = #fibra / (2^g #P_img)
    para n = 2g+1 (P_img: coordenada central par) y #fibra / #P(Z/2^m) para n par.
    """
    caps = caps or Caps()
    if p == 2:
        if n > 4:
            raise InstanceTooLarge("p = 2 solo hasta n = 4")
        m = m or (3 if n % 2 else 2)
        if m > 3:
            raise InstanceTooLarge("p = 2 solo hasta 2^3")
        q = 2 ** m
        coeffs = [0] * n
    else:
        if n > 5:
            raise InstanceTooLarge("p impar solo hasta n = 5")
        q = p
        coeffs = list(_unit_disc_poly(n, p).coeffs)
    if fiber_size_bound(n, q) > caps.fiber_cap:
        raise InstanceTooLarge(f"la fibra mod {q} supera el tope")

    points = list(fiber_points(coeffs, q, slicing_filter=lambda v: v % p != 0, cap=caps.fiber_cap))
    orbits = find_orbits(points, p_generators(n, IntegersMod(q)))
    g = n // 2
    if p == 2 and n % 2 == 1:
        size = group_size(n, q, p, integral_image=True)
        measured = Fraction(len(points), 2 ** g * size)
        expected_orbits = 2 ** g
    elif p == 2:
        size = group_size(n, q, p)
        measured = Fraction(len(points), size)
        expected_orbits = 2 ** g
    else:
        size = p_order(n, p)
        measured = Fraction(len(points), size)
        expected_orbits = 1
    check = JacobianCheck(
        n=n, p=p, modulus=q, fiber_size=len(points), group_size=size,
        measured=measured, expected=Fraction(jacobian_local(n, p)),
        orbits=len(orbits), expected_orbits=expected_orbits,
    )
    logger.info(f"|J|_{p} n={n} mod {q}: medido {measured}, esperado {check.expected}, {len(orbits)} orbitas")
    return check


# =============================================================================
# TRANSITIVIDAD
# =============================================================================
def transitivity_check(n: int, p: int, caps: Optional[Caps] = None) -> dict:
    """Recorre todo f con disc unidad sobre F_p (p impar)."""
    caps = caps or Caps()
    if p == 2:
        raise ValueError("la seccion sigma_0 requiere p impar")
    order = p_order(n, p)
    if order > caps.fiber_cap:
        raise InstanceTooLarge(f"#P(F_{p}) = {order} para n={n}")
    ring = IntegersMod(p)
    group = list(enumerate_P(n, ring))
    failures = []
    checked = 0
    for coeffs in itertools.product(range(p), repeat=n):
        f = MonicPoly.of(coeffs, ring)
        if poly_disc(f) == 0:
            continue
        checked += 1
        size = sum(1 for _ in fiber_points(list(coeffs), p))
        base = sigma0(f).rows
        stabilizer = sum(1 for h in group if h.act_rows(base) == base)
        if size != order or stabilizer != 1:
            failures.append({"status": "error", "f": list(coeffs), "fiber": size, "stabilizer": stabilizer})
    logger.info(f"Transitividad n={n}, p={p}: {checked} polinomios, {len(failures)} fallos")
    return {"n": n, "p": p, "group_order": order, "checked": checked, "failures": failures}


def section_check(n: int, trials: int = 1000, seed: int = 0, bound: int = 50) -> dict:
    """inv(sigma_0(f)) = f para f aleatorios sobre Q."""
    rng = np.random.default_rng(seed)
    failures = []
    for _ in range(trials):
        nums = rng.integers(-bound, bound + 1, size=n)
        dens = rng.integers(1, bound + 1, size=n)
        f = MonicPoly.of([Fraction(int(a), int(b)) for a, b in zip(nums, dens)], QQ)
        if inv(sigma0(f)) != f:
            failures.append({"status": "error", "f": [str(c) for c in f.coeffs]})
    return {"n": n, "trials": trials, "failures": failures}


# =============================================================================
# IDENTIDAD DE EULER
# =============================================================================
def euler_identity_table(n: int, p_max: int) -> pd.DataFrame:
    rows = []
    for p in primerange(2, p_max + 1):
        check = euler_factor_identity(n, int(p))
        rows.append({
            "p": check.p,
            "lhs": f"{check.lhs.numerator}/{check.lhs.denominator}",
            "rhs": f"{check.rhs.numerator}/{check.rhs.denominator}",
            "equal": check.equal,
        })
    return pd.DataFrame(rows, columns=["p", "lhs", "rhs", "equal"])


# =============================================================================
# RUTAS DE FAMILIA
# =============================================================================
def _nondegenerate_lift(coeffs: Sequence[int], q: int) -> Optional[MonicPoly]:
    """Representante entero no degenerado de la clase de coeffs mod q."""
    lifted = list(coeffs)
    for _ in range(64):
        f = MonicPoly.of(lifted, ZZ)
        if not is_degenerate(f):
            return f
        lifted[-1] += q
    return None


def _orbit_route_level(n: int, family: FamilySpec, p: int) -> int:
    cond = family.condition_at(p)
    if cond is None:
        raise FamilyError(f"la familia no esta condicionada en p={p}")
    if cond.kind == "unit-lambda" or (cond.kind == "inv-in" and cond.unit_lambda):
        return cond.j + (1 if p == 2 else 0)
    if cond.kind == "inv-in":
        separable = all(poly_disc(MonicPoly.of(r, IntegersMod(p))) != 0 for r in cond.residues)
        if separable and (p != 2 or n % 2 == 1):
            return cond.j
        raise FamilyError(f"residuos de inv no separables mod {p}")
    if cond.kind == "residues":
        ring = IntegersMod(cond.modulus)
        units = all(
            all(ReducibleMatrix.from_coords(n, r, ring).entry(a, b) % p for a, b in slicing_coords(n))
            for r in cond.residues
        )
        if units:
            return cond.j + (1 if p == 2 else 0)
        raise FamilyError("residuos fuera del lugar de lambda unidad")
    raise FamilyError(f"sin ruta de orbitas para la condicion {cond.kind}")


def orbit_route(n: int, p: int, family: FamilySpec, caps: Optional[Caps] = None) -> Fraction:
    """|J|_p por la media de c_p^S(f) sobre los residuos de f mod p^J."""
    caps = caps or Caps()
    level = _orbit_route_level(n, family, p)
    q = p ** level
    if q ** n > caps.fiber_cap:
        raise InstanceTooLarge(f"U(Z/{q}) tiene {q ** n} puntos")
    total = 0
    for coeffs in itertools.product(range(q), repeat=n):
        if n % 2 == 0 and p == 2 and any(coeffs[i - 1] % 2 for i in range(1, n + 1, 2)):
            continue
        f = _nondegenerate_lift(coeffs, q)
        if f is None:
            raise FamilyError(f"sin representante separable para {coeffs} mod {q}")
        total += orbit_count_local(f, p, family, caps)
    return jacobian_local(n, p) * Fraction(total, q ** n)


def family_routes(n: int, p: int, family: FamilySpec, caps: Optional[Caps] = None) -> FamilyRoutes:
    lam = unit_normalizer(n, p) * local_lambda_integral(n, p, family, caps).value
    orb = orbit_route(n, p, family, caps)
    logger.info(f"Familia '{family.name}' en p={p}: ruta lambda {lam}, ruta orbitas {orb}")
    return FamilyRoutes(p=p, lambda_route=lam, orbit_route=orb)


def measure_identity_check(n: int, p: int, residues: Sequence[Sequence[int]], caps: Optional[Caps] = None) -> dict:
    """
    Familia: corte unidad e inv(B) mod p en residues. Ambas rutas deben dar
    #residues / p^n.
    """
    family = FamilySpec.inv_in(p, residues, j=1, unit_lambda=True)
    routes = family_routes(n, p, family, caps)
    expected = Fraction(len(family.conditions[0].residues), p ** n)
    return {
        "n": n,
        "p": p,
        "residues": len(family.conditions[0].residues),
        "lambda_route": routes.lambda_route,
        "orbit_route": routes.orbit_route,
        "expected": expected,
        "status": "success" if routes.lambda_route == routes.orbit_route == expected else "error",
    }
