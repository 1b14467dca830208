"""
Formas canonicas de P(Z)-orbitas en W_0(Z).

1. Los signos de las entradas de corte se hacen positivos con el toro entero.
2. Barrido tipo Hermite: cada objetivo se lleva a [0, D), donde D es el
   desplazamiento entero de su generador (una entrada de corte, doble para el
   generador central). El sistema de cada nivel es triangular con diagonal D,
   asi que los residuos son unicos.

La misma plantilla (corte, residuos, entradas fijas despejadas de f) sirve
para enumerar todas las orbitas sobre un f dado, tanto sobre Z como sobre
Z_p; solo cambian el modulo de cada residuo y la condicion de integralidad.
"""
import itertools
import logging
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from pydantic import BaseModel, ConfigDict
from sympy import divisors

from src.config import Caps
from src.exactmath.poly import MonicPoly, is_degenerate, poly_disc
from src.exactmath.rings import ZZ, RingTag
from src.exceptions import DegenerateInput, InstanceTooLarge, ZeroSliceEntry
from src.groups.elements import GroupElem, slicing_scaler, unipotent_gen
from src.reduction.levels import (
    apply_generator,
    freeze,
    integer_shifts,
    kept_coefficients,
    kept_coord,
    set_entry,
    shift,
    slicing_grid,
    step_for,
    sweep_levels,
    targets,
)
from src.representation.invariants import inv, inv_coefficients
from src.representation.matrices import ReducibleMatrix, SymMatrix, as_reducible

logger = logging.getLogger(__name__)


class CanonicalOrbitRep(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: ReducibleMatrix
    slicing: tuple[int, ...]
    witness: Optional[GroupElem] = None

    def key(self) -> tuple:
        return self.matrix.key()

    def to_json(self) -> dict:
        data = {"matrix": self.matrix.to_json(), "slicing": list(self.slicing)}
        if self.witness is not None:
            data["witness"] = self.witness.to_json()
        return data


# =============================================================================
# FORMA CANONICA
# =============================================================================
def canonical_form_Z(B: SymMatrix) -> CanonicalOrbitRep:
    """Representante canonico de la P(Z)-orbita de B; witness lleva B a el."""
    if B.ring != ZZ:
        raise ValueError("canonical_form_Z requiere una matriz entera")
    matrix = as_reducible(B)
    n = matrix.n
    slicing = matrix.slicing()
    if any(b == 0 for b in slicing):
        raise ZeroSliceEntry(f"corte {slicing}")
    if is_degenerate(inv(matrix)):
        raise DegenerateInput("disc(inv B) = 0")

    g = slicing_scaler(n, [1 if b > 0 else -1 for b in slicing], ZZ)
    rows = g.act_rows(matrix.rows)
    for d in sweep_levels(n):
        for target in targets(n, d):
            step = step_for(target, n, ZZ)
            delta = shift(rows, n, target, step, ZZ)
            current = rows[target.row - 1][target.col - 1]
            w = (current % abs(delta) - current) // delta
            if w:
                rows = apply_generator(rows, n, target, w * step, ZZ)
                g = unipotent_gen(target.i, target.j, w * step, n, ZZ) * g

    canonical = ReducibleMatrix(n=n, rows=rows, ring=ZZ)
    return CanonicalOrbitRep(matrix=canonical, slicing=canonical.slicing(), witness=g)


def equivalent_Z(B1: SymMatrix, B2: SymMatrix) -> bool:
    if B1.n != B2.n:
        return False
    return canonical_form_Z(B1).key() == canonical_form_Z(B2).key()


# =============================================================================
# PLANTILLAS SOBRE UN f FIJO
# =============================================================================
def enumerate_templates(
    f: Sequence[Fraction],
    slicing: Sequence[int],
    residue_modulus: Callable[[int], int],
    is_integral: Callable[[Fraction], bool],
    cap: Optional[int] = None,
    step_ring: RingTag = ZZ,
) -> Iterator[list[list]]:
    """
    Matrices con corte fijo, objetivos en [0, residue_modulus(desplazamiento))
    y entradas fijas despejadas nivel a nivel de inv = f. step_ring decide
    si el paso central es par (Z, Z_2) o libre (Z_p, p impar).

    Solo se devuelven las que pasan is_integral en todas las entradas fijas.
    """
    n = len(f)
    kappa = kept_coefficients(n, slicing)
    shifts = integer_shifts(n, slicing, step_ring)
    moduli = {key: residue_modulus(abs(value)) for key, value in shifts.items()}
    if cap is not None:
        size = 1
        for m in moduli.values():
            size *= m
        if size > cap:
            raise InstanceTooLarge(f"{size} plantillas superan el tope {cap}")

    def descend(grid: list[list], d: int) -> Iterator[list[list]]:
        if d > n:
            yield [row[:] for row in grid]
            return
        level_targets = targets(n, d) if d in sweep_levels(n) else []
        ranges = [range(moduli[(t.i, t.j)]) for t in level_targets]
        kept = kept_coord(n, d)
        for values in itertools.product(*ranges):
            for t, value in zip(level_targets, values):
                set_entry(grid, t.row, t.col, value)
            set_entry(grid, *kept, 0)
            base = inv_coefficients(freeze(grid))[d - 1]
            solved = (Fraction(f[d - 1]) - base) / kappa[d - 1]
            if not is_integral(solved):
                continue
            set_entry(grid, *kept, solved.numerator if solved.denominator == 1 else solved)
            yield from descend(grid, d + 1)
        for t in level_targets:
            set_entry(grid, t.row, t.col, 0)
        set_entry(grid, *kept, 0)

    yield from descend(slicing_grid(n, list(slicing)), 1)


def canonical_orbits_over(f: MonicPoly, caps: Optional[Caps] = None) -> list[CanonicalOrbitRep]:
    """Todas las formas canonicas enteras con inv = f (corte positivo, b_k | disc f)."""
    caps = caps or Caps()
    if f.ring != ZZ:
        f = f.over(ZZ)
    if is_degenerate(f):
        raise DegenerateInput("disc(f) = 0")
    n = f.n
    disc = abs(int(poly_disc(f)))
    candidates = divisors(disc)
    found: list[CanonicalOrbitRep] = []
    for slicing in itertools.product(candidates, repeat=n // 2):
        for grid in enumerate_templates(
            f.exact_coeffs(), slicing, residue_modulus=lambda d: d,
            is_integral=lambda x: x.denominator == 1, cap=caps.fiber_cap,
        ):
            matrix = ReducibleMatrix(n=n, rows=freeze(grid), ring=ZZ)
            found.append(CanonicalOrbitRep(matrix=matrix, slicing=tuple(slicing)))
            if len(found) > caps.fiber_cap:
                raise InstanceTooLarge(f"mas de {caps.fiber_cap} orbitas sobre f")
    logger.debug(f"{len(found)} orbitas canonicas sobre {f.coeffs}")
    return found


def orbit_count_global_by_templates(f: MonicPoly, caps: Optional[Caps] = None) -> int:
    return len(canonical_orbits_over(f, caps))
