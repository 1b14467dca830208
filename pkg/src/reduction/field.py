"""
Reduccion a la seccion sobre un cuerpo o sobre Z_p truncado.

Con disc(f) unidad, cada entrada de corte es unidad: un elemento del toro las
lleva a 1 y el barrido por niveles de N anula los objetivos. Lo que queda es
sigma_0(f). Sobre Z/2^k con n impar el parametro central es par, asi que los
objetivos de la fila floor(n/2) solo se llevan a 0 o 1; esos bits dependen
solo de f y se devuelven en mod2_pattern.
"""
import logging
from typing import Optional

from pydantic import BaseModel, ConfigDict

from src.exactmath.poly import poly_disc
from src.exactmath.rings import PadicTrunc, RingTag
from src.exceptions import NonUnitDiscriminant, StabilizationFailure
from src.groups.elements import GroupElem, slicing_scaler, unipotent_gen
from src.reduction.levels import apply_generator, shift, step_for, sweep_levels, targets
from src.representation.invariants import inv, sigma0
from src.representation.matrices import ReducibleMatrix, SymMatrix, as_reducible

logger = logging.getLogger(__name__)


class ReductionResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    g: GroupElem
    target: ReducibleMatrix
    mod2_pattern: Optional[tuple[int, ...]] = None

    def to_json(self) -> dict:
        return {
            "g": self.g.to_json(),
            "target": self.target.to_json(),
            "mod2_pattern": list(self.mod2_pattern) if self.mod2_pattern is not None else None,
        }


def _halving_available(ring: RingTag) -> bool:
    return not ring.is_modular or ring.modulus % 2 == 1


def _pattern_parameter(current: int, delta: int, ring: RingTag) -> tuple[int, int]:
    """(w, bit) con current + w*delta = bit, delta = 2*unidad en Z/2^k."""
    bit = current % 2
    if ring.modulus == 2 or delta % ring.modulus == 0:
        return 0, bit
    half_delta = (delta % ring.modulus) // 2
    w = ((bit - current) // 2) * pow(half_delta, -1, ring.modulus)
    return w % ring.modulus, bit


def reduce_over_field(B: SymMatrix) -> ReductionResult:
    """Devuelve g en P(R) con act(g, B) = sigma_0(inv(B)) (o su variante 2-adica)."""
    ring, n = B.ring, B.n
    if not ring.is_exact:
        raise ValueError("la reduccion requiere un anillo exacto")
    if not (ring.is_field or ring.is_modular):
        raise ValueError(f"{ring.name} no es un cuerpo ni Z/p^k")
    matrix = as_reducible(B)
    f = inv(matrix)
    if not ring.is_unit(poly_disc(f)):
        raise NonUnitDiscriminant(f"disc(f) no es unidad en {ring.name}")
    slicing = matrix.slicing()
    if not all(ring.is_unit(b) for b in slicing):
        raise NonUnitDiscriminant("entrada de corte no invertible")

    g = slicing_scaler(n, [ring.inverse(b) for b in slicing], ring)
    rows = g.act_rows(matrix.rows)
    pattern: list[int] = []
    for d in sweep_levels(n):
        for target in targets(n, d):
            step = step_for(target, n, ring)
            current = rows[target.row - 1][target.col - 1]
            delta = shift(rows, n, target, step, ring)
            if step == 2:
                w, bit = _pattern_parameter(current, delta, ring)
                pattern.append(bit)
            else:
                w = ring.reduce(-ring.div(current, delta))
            if ring.is_zero(w):
                continue
            v = ring.reduce(w * step)
            rows = apply_generator(rows, n, target, v, ring)
            g = unipotent_gen(target.i, target.j, v, n, ring) * g

    result = ReducibleMatrix(n=n, rows=rows, ring=ring)
    if _halving_available(ring):
        if result != sigma0(f):
            raise AssertionError("el barrido no llego a sigma_0(f)")
        return ReductionResult(g=g, target=result)
    if inv(result) != f:
        raise AssertionError("el barrido cambio el invariante")
    logger.debug(f"Patron 2-adico n={n}: {pattern}")
    return ReductionResult(g=g, target=result, mod2_pattern=tuple(pattern) if n % 2 else None)


def reduce_stable(B: SymMatrix, p: int, k: int) -> ReductionResult:
    """
    Reduce B (entrada entera o p-entera) en Z_p truncado a p^k y comprueba
    que el resultado no cambia al recalcular con p^{k+1}.
    """
    low = reduce_over_field(B.over(PadicTrunc(p, k)))
    high = reduce_over_field(B.over(PadicTrunc(p, k + 1)))
    if high.target.over(low.target.ring) != low.target:
        raise StabilizationFailure(f"la reduccion en p^{k} y p^{k + 1} no coincide")
    return low
