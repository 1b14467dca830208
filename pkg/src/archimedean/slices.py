"""
Sumas sobre el corte: sum_b 1/Z(b) con b en Z_{>0}^{floor(n/2)}.

Z(b) = prod b_k^{a_k} se separa en sumas de una variable, cada una con cola
    (M+1)^{1-a}/(a-1) <= sum_{b > M} b^{-a} <= M^{1-a}/(a-1).
"""
import logging
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional

from mpmath import iv

from src.local.euler import Interval, PRECISION_BITS, euler_product, from_iv, to_iv
from src.representation.invariants import zpoly_exponents

logger = logging.getLogger(__name__)


class SliceSum(NamedTuple):
    partial: Interval
    tail: Fraction
    total: Interval


def _power_sum(a: int, m: int):
    total = iv.mpf(0)
    for b in range(1, m + 1):
        total += iv.mpf(1) / iv.mpf(b) ** a
    return total


def slice_sum(n: int, m_trunc: int) -> SliceSum:
    """Suma parcial con b_k <= m_trunc, cota de la cola y encierro de la suma total."""
    if m_trunc < 1:
        raise ValueError("M_trunc debe ser >= 1")
    saved = iv.prec
    iv.prec = PRECISION_BITS
    try:
        partial = iv.mpf(1)
        upper = iv.mpf(1)
        lower = iv.mpf(1)
        for a in zpoly_exponents(n):
            s = _power_sum(a, m_trunc)
            partial *= s
            upper *= s + to_iv(Fraction(1, (a - 1) * m_trunc ** (a - 1)))
            lower *= s + to_iv(Fraction(1, (a - 1) * (m_trunc + 1) ** (a - 1)))
        partial_iv = from_iv(partial)
        total = (from_iv(lower)[0], from_iv(upper)[1])
        tail = from_iv(upper - partial)[1]
    finally:
        iv.prec = saved
    return SliceSum(partial=partial_iv, tail=tail, total=total)


# =============================================================================
# COLA SOBRE UN UMBRAL
# =============================================================================
def slice_values_below(n: int, bound: int) -> Iterator[int]:
    """Valores Z(b) < bound, uno por cada b."""
    exps = zpoly_exponents(n)

    def walk(k: int, acc: int) -> Iterator[int]:
        if k == len(exps):
            yield acc
            return
        b = 1
        while acc * b ** exps[k] < bound:
            yield from walk(k + 1, acc * b ** exps[k])
            b += 1

    yield from walk(0, 1)


def tail_over_threshold(n: int, m: int, cfin: Optional[Interval] = None) -> Interval:
    """sum_{Z(b) >= M^2} 1/Z(b) = C_n^fin - sum_{Z(b) < M^2} 1/Z(b)."""
    cfin = cfin or euler_product(None, 10_000, n)
    saved = iv.prec
    iv.prec = PRECISION_BITS
    try:
        head = iv.mpf(0)
        for z in slice_values_below(n, m * m):
            head += iv.mpf(1) / iv.mpf(z)
        lo, hi = from_iv(head)
    finally:
        iv.prec = saved
    logger.debug(f"Cola n={n}, M={m}: cabeza [{float(lo)}, {float(hi)}]")
    return cfin[0] - hi, cfin[1] - lo
