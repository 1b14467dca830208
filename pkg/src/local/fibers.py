"""
Fibras de inv sobre Z/q: {B en W_0(Z/q) : inv(B) = f mod q}.

Se recorren por niveles: el corte y los objetivos son libres y la entrada fija
de cada nivel resuelve la congruencia lineal kappa_d * x = f_d - (resto) mod q.
"""
import itertools
import math
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from src.exceptions import InstanceTooLarge
from src.reduction.levels import freeze, kept_coefficients, kept_coord, set_entry, slicing_grid, sweep_levels, targets
from src.representation.invariants import inv_coefficients
from src.representation.matrices import Rows


def solve_linear_congruence(a: int, b: int, q: int) -> list[int]:
    """Todas las x mod q con a*x = b mod q."""
    a, b = a % q, b % q
    g = math.gcd(a, q)
    if b % g:
        return []
    step = q // g
    x0 = (b // g) * pow(a // g, -1, step) % step if step > 1 else 0
    return [x0 + k * step for k in range(g)]


def fiber_points(
    f: Sequence[int],
    q: int,
    slicing_filter: Optional[Callable[[int], bool]] = None,
    cap: Optional[int] = None,
) -> Iterator[Rows]:
    """
    Puntos de la fibra mod q. slicing_filter restringe los valores de cada
    entrada de corte (por ejemplo, solo unidades).
    """
    n = len(f)
    target = [int(Fraction(c)) % q for c in f]
    values = [v for v in range(q) if slicing_filter is None or slicing_filter(v)]
    emitted = 0

    def descend(grid: list[list], kappa: list, d: int) -> Iterator[Rows]:
        nonlocal emitted
        if d > n:
            emitted += 1
            if cap is not None and emitted > cap:
                raise InstanceTooLarge(f"la fibra mod {q} supera {cap} puntos")
            yield freeze(grid)
            return
        level_targets = targets(n, d) if d in sweep_levels(n) else []
        kept = kept_coord(n, d)
        for chosen in itertools.product(range(q), repeat=len(level_targets)):
            for t, value in zip(level_targets, chosen):
                set_entry(grid, t.row, t.col, value)
            set_entry(grid, *kept, 0)
            base = int(inv_coefficients(freeze(grid))[d - 1])
            for x in solve_linear_congruence(int(kappa[d - 1]), target[d - 1] - base, q):
                set_entry(grid, *kept, x)
                yield from descend(grid, kappa, d + 1)
        for t in level_targets:
            set_entry(grid, t.row, t.col, 0)
        set_entry(grid, *kept, 0)

    for slicing in itertools.product(values, repeat=n // 2):
        kappa = kept_coefficients(n, slicing, allow_zero=True)
        yield from descend(slicing_grid(n, list(slicing)), kappa, 1)


def fiber_size_bound(n: int, q: int) -> int:
    """Cota del recorrido: corte y objetivos libres."""
    free = n // 2 + sum(len(targets(n, d)) for d in sweep_levels(n))
    return q ** free
