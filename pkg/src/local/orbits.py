"""
Conteo local c_p(f) de P(Z_p)-orbitas en la fibra de inv sobre f.

Ruta exacta: las orbitas se corresponden con plantillas canonicas p-adicas.
El toro lleva el corte a (p^{e_1}, ..., p^{e_g}) con b_k | disc(f), los
objetivos quedan en [0, p^{v_p(D)}) con D su desplazamiento, y la plantilla
cuenta si todas las entradas fijas despejadas de f son p-enteras.

Para n = 3 la plantilla de corte s = p^e con objetivo t da
    f(x) = (x+a)(x+t)^2 - 2 s u (x+t) + s^2 c
y la condicion de integralidad es v_p(f(-t)) >= 2e, v_p(f'(-t)) >= v_p(2s).

orbit_count_truncated es el oraculo por fuerza bruta: recorre las orbitas mod
p^k que contienen reducciones de puntos de la fibra sobre Z_(p) y compara
entre niveles.
"""
import itertools
import logging
from collections import defaultdict
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from src.config import Caps
from src.exactmath.poly import MonicPoly, is_degenerate, poly_disc
from src.exactmath.rings import ZZ, IntegersMod, PadicTrunc, padic_val
from src.exceptions import DegenerateInput, InstanceTooLarge, LevelTooDeep, StabilizationFailure
from src.local.families import FamilySpec, PrimeCondition
from src.local.fibers import fiber_size_bound
from src.reduction.canonical import enumerate_templates
from src.reduction.oracles import p_generators
from src.representation.invariants import zpoly_exponents
from src.representation.matrices import Rows

logger = logging.getLogger(__name__)


def _integer_poly(f: MonicPoly) -> MonicPoly:
    if f.ring != ZZ:
        f = f.over(ZZ)
    if is_degenerate(f):
        raise DegenerateInput("disc(f) = 0")
    if f.n % 2 == 0 and any(f.coeff(i) % 2 for i in range(1, f.n + 1, 2)):
        raise ValueError("n par: los coeficientes f_i con i impar deben ser pares")
    return f


def _p_integral(p: int):
    return lambda x: Fraction(x).denominator % p != 0


# =============================================================================
# PLANTILLAS p-ADICAS
# =============================================================================
def local_templates(
    f: MonicPoly,
    p: int,
    exponents: Sequence[int],
    caps: Optional[Caps] = None,
) -> Iterator[list[list]]:
    """Plantillas canonicas con corte (p^{e_1}, ..., p^{e_g}) sobre f."""
    caps = caps or Caps()
    slicing = [p ** e for e in exponents]
    yield from enumerate_templates(
        f.exact_coeffs(), slicing,
        residue_modulus=lambda d: p ** padic_val(d, p),
        is_integral=_p_integral(p),
        cap=caps.fiber_cap,
        step_ring=PadicTrunc(p, 1),
    )


def slicing_exponents(n: int, v: int) -> Iterator[tuple[int, ...]]:
    """Vectores de exponentes del corte con e_k <= v = v_p(disc f)."""
    return itertools.product(range(v + 1), repeat=n // 2)


def cubic_exponents(coeffs: Sequence[int], p: int, v: int) -> Iterator[int]:
    """Exponente e del corte de cada orbita (n = 3) por la formula cerrada."""
    a1, a2, a3 = (int(c) for c in coeffs)
    for e in range(v // 2 + 1):
        s = p ** e
        need = padic_val(2 * s, p)
        modulus = p ** need
        for t in range(modulus):
            value = -t ** 3 + a1 * t * t - a2 * t + a3
            slope = 3 * t * t - 2 * a1 * t + a2
            if padic_val(value, p) >= 2 * e and padic_val(slope, p) >= need:
                yield e


def _template_grades(f: MonicPoly, p: int, cond: Optional[PrimeCondition], caps: Caps) -> Iterator[int]:
    """v_p(Z) de cada orbita admitida por cond."""
    n = f.n
    zexp = zpoly_exponents(n)
    v = padic_val(int(poly_disc(f)), p)
    only_units = cond is not None and (cond.kind == "unit-lambda" or cond.unit_lambda)
    if cond is None or cond.kind in ("full", "inv-in"):
        if cond is not None and not cond.admits_poly(f):
            return
        if v <= 1 and not only_units:
            yield 0
            return
        if n == 3:
            for e in cubic_exponents(f.coeffs, p, 0 if only_units else v):
                if not only_units or e == 0:
                    yield zexp[0] * e
            return
    ranges = [(0,) * (n // 2)] if only_units else slicing_exponents(n, v)
    for exps in ranges:
        for grid in local_templates(f, p, exps, caps):
            if cond is None or cond.admits_rows(tuple(tuple(row) for row in grid)):
                yield sum(e * z for e, z in zip(exps, zexp))


# =============================================================================
# CONTEOS
# =============================================================================
def orbit_count_graded(f: MonicPoly, p: int, family: Optional[FamilySpec] = None, caps: Optional[Caps] = None) -> dict[int, int]:
    """{v_p(Z(B)): numero de orbitas} sobre f en la familia."""
    caps = caps or Caps()
    f = _integer_poly(f)
    cond = family.condition_at(p) if family is not None else None
    graded: dict[int, int] = defaultdict(int)
    for grade in _template_grades(f, p, cond, caps):
        graded[grade] += 1
    return dict(sorted(graded.items()))


def orbit_count_local(f: MonicPoly, p: int, family: Optional[FamilySpec] = None, caps: Optional[Caps] = None) -> int:
    """c_p(f), o c_p^S(f) si se da una familia condicionada en p."""
    caps = caps or Caps()
    f = _integer_poly(f)
    cond = family.condition_at(p) if family is not None else None
    count = sum(1 for _ in _template_grades(f, p, cond, caps))
    if cond is None and count < 1:
        raise AssertionError(f"c_{p}({list(f.coeffs)}) = 0: la seccion entera siempre da una orbita")
    logger.debug(f"c_{p}({list(f.coeffs)}) = {count}")
    return count


# =============================================================================
# ORACULO TRUNCADO
# =============================================================================
def _reduce_rows(grid: Sequence[Sequence], q: int) -> Rows:
    reduced = []
    for row in grid:
        values = (Fraction(x) for x in row)
        reduced.append(tuple(x.numerator * pow(x.denominator, -1, q) % q for x in values))
    return tuple(reduced)


def liftable_points(f: MonicPoly, p: int, k: int, caps: Optional[Caps] = None) -> set[Rows]:
    """
    Reducciones mod p^k de puntos de la fibra sobre Z_(p) con corte en [1, p^k)
    y objetivos en [0, p^k). Las entradas fijas se despejan exactamente sobre
    Q, asi que cada punto devuelto levanta de verdad a Z_p.
    """
    caps = caps or Caps()
    n, q = f.n, p ** k
    if fiber_size_bound(n, q) > caps.fiber_cap:
        raise InstanceTooLarge(f"caja mod {q} demasiado grande para n={n}")
    found: set[Rows] = set()
    for slicing in itertools.product(range(1, q), repeat=n // 2):
        for grid in enumerate_templates(
            f.exact_coeffs(), slicing,
            residue_modulus=lambda d: q,
            is_integral=_p_integral(p),
        ):
            found.add(_reduce_rows(grid, q))
    return found


def truncated_count_at(f: MonicPoly, p: int, k: int, caps: Optional[Caps] = None) -> int:
    """Orbitas de P(Z/p^k) que contienen la reduccion de algun punto de la fibra sobre Z_p."""
    caps = caps or Caps()
    n, q = f.n, p ** k
    seeds = liftable_points(f, p, k, caps)
    generators = list(p_generators(n, IntegersMod(q)))
    seen: set[Rows] = set()
    count = 0
    for seed in seeds:
        if seed in seen:
            continue
        count += 1
        seen.add(seed)
        stack = [seed]
        while stack:
            x = stack.pop()
            for g in generators:
                y = g.act_rows(x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) > caps.fiber_cap:
            raise InstanceTooLarge(f"las orbitas mod {q} superan {caps.fiber_cap} puntos")
    logger.debug(f"mod {q}: {len(seeds)} semillas, {len(seen)} puntos, {count} orbitas")
    return count


def orbit_count_truncated(
    f: MonicPoly,
    p: int,
    levels: Optional[Sequence[int]] = None,
    caps: Optional[Caps] = None,
) -> int:
    """
    Conteo truncado en los niveles dados (por defecto k0, k0+1 con
    k0 = v_p(disc f) + 2); todos deben coincidir. En cada nivel el conteo
    es a lo sumo c_p(f) y lo alcanza cuando las orbitas se separan mod p^k.
    """
    caps = caps or Caps()
    f = _integer_poly(f)
    if levels is None:
        k0 = padic_val(int(poly_disc(f)), p) + 2
        levels = (k0, k0 + 1)
    deepest = max(levels)
    if deepest > caps.truncation_cap:
        raise LevelTooDeep(f"nivel {deepest} > {caps.truncation_cap}")
    counts = {k: truncated_count_at(f, p, k, caps) for k in levels}
    if len(set(counts.values())) != 1:
        raise StabilizationFailure(f"conteos por nivel {counts} para f={list(f.coeffs)}, p={p}")
    return next(iter(counts.values()))
