"""
Enumeracion de polinomios invariantes con H(f) < X.

|f_i| < X^i para todo i; con n par y filtro de paridad, f_i par para i impar.
Orden lexicografico en (f_1, ..., f_n); f_1 es la clave de reparto.
"""
import itertools
import logging
from typing import Iterator, Optional

from pydantic import BaseModel

from src.exactmath.poly import MonicPoly, is_degenerate
from src.exactmath.rings import ZZ
from src.representation.invariants import stratify

logger = logging.getLogger(__name__)


class EnumerationStats(BaseModel):
    candidates: int = 0
    degenerate: int = 0
    filtered: int = 0

    def merge(self, other: "EnumerationStats") -> None:
        self.candidates += other.candidates
        self.degenerate += other.degenerate
        self.filtered += other.filtered


def coefficient_range(i: int, X: int, even_only: bool = False) -> range:
    bound = X ** i
    if even_only:
        start = -(bound - 1)
        start += start % 2
        return range(start, bound, 2)
    return range(-(bound - 1), bound)


def coefficient_ranges(n: int, X: int, parity_filter: bool = True) -> list[range]:
    return [coefficient_range(i, X, even_only=parity_filter and n % 2 == 0 and i % 2 == 1)
            for i in range(1, n + 1)]


def candidate_count(n: int, X: int, parity_filter: bool = True) -> int:
    total = 1
    for r in coefficient_ranges(n, X, parity_filter):
        total *= len(r)
    return total


def shard_keys(n: int, X: int, parity_filter: bool = True) -> list[int]:
    return list(coefficient_ranges(n, X, parity_filter)[0])


def enumerate_shard(
    n: int,
    X: int,
    f1: int,
    r_filter: Optional[int] = None,
    parity_filter: bool = True,
    stats: Optional[EnumerationStats] = None,
) -> Iterator[MonicPoly]:
    stats = stats if stats is not None else EnumerationStats()
    rest = coefficient_ranges(n, X, parity_filter)[1:]
    for tail in itertools.product(*rest):
        stats.candidates += 1
        f = MonicPoly.of((f1, *tail), ZZ)
        if is_degenerate(f):
            stats.degenerate += 1
            continue
        if r_filter is not None and stratify(f) != r_filter:
            stats.filtered += 1
            continue
        yield f


def enumerate_invariants(
    n: int,
    X: int,
    r_filter: Optional[int] = None,
    parity_filter: bool = True,
    stats: Optional[EnumerationStats] = None,
) -> Iterator[MonicPoly]:
    """Flujo de f no degenerados en el estrato; las degeneradas se cuentan en stats."""
    if X < 1:
        raise ValueError("X debe ser un entero positivo")
    stats = stats if stats is not None else EnumerationStats()
    for f1 in shard_keys(n, X, parity_filter):
        yield from enumerate_shard(n, X, f1, r_filter, parity_filter, stats)
    logger.debug(f"n={n}, X={X}: {stats.candidates} candidatos, {stats.degenerate} degenerados")
