"""
Estructura por niveles de W_0.

La entrada (r, c), r <= c, esta en el nivel d = r + c - n; el nivel 0 son las
entradas de corte. En el nivel d (1 <= d <= n-2) el generador u~_{j+d, j}
desplaza la entrada objetivo (j+d-1, n+1-j) en multiplos de una entrada de
corte y, como efecto lateral, la entrada de la fila siguiente. La entrada mas
interna de cada nivel (fila floor((n+d)/2)) no se toca: se despeja del
coeficiente f_d de inv, que es lineal en ella.
"""
from fractions import Fraction
from typing import NamedTuple, Sequence

from src.exactmath.rings import QQ, RingKind, RingTag, Scalar
from src.groups.elements import is_middle, unipotent_rows
from src.representation.invariants import inv_coefficients
from src.representation.matrices import Rows, mat_mul, slicing_coords, transpose


class Target(NamedTuple):
    i: int
    j: int
    row: int
    col: int


def sweep_levels(n: int) -> range:
    """Niveles con generadores de N."""
    return range(1, n - 1)


def targets(n: int, d: int) -> list[Target]:
    """Objetivos del nivel d en el orden del barrido (filas crecientes)."""
    return [Target(j + d, j, j + d - 1, n + 1 - j) for j in range(1, (n - d) // 2 + 1)]


def kept_coord(n: int, d: int) -> tuple[int, int]:
    r = (n + d) // 2
    return r, n + d - r


def needs_even_step(i: int, n: int, ring: RingTag) -> bool:
    """El parametro central es par sobre Z, Z/2^k y Z_2."""
    if not is_middle(i, n):
        return False
    return ring.kind is RingKind.INTEGERS or (ring.is_modular and ring.modulus % 2 == 0)


def step_for(target: Target, n: int, ring: RingTag) -> int:
    return 2 if needs_even_step(target.i, n, ring) else 1


def conjugate_rows(rows: Rows, h: Rows, ring: RingTag) -> Rows:
    return mat_mul(mat_mul(h, rows, ring), transpose(h), ring)


def apply_generator(rows: Rows, n: int, target: Target, v: Scalar, ring: RingTag) -> Rows:
    return conjugate_rows(rows, unipotent_rows(n, target.i, target.j, v, ring), ring)


def shift(rows: Rows, n: int, target: Target, step: Scalar, ring: RingTag) -> Scalar:
    """Cambio de la entrada objetivo al aplicar u~_{ij}(step); solo depende del corte."""
    moved = apply_generator(rows, n, target, step, ring)
    return ring.reduce(moved[target.row - 1][target.col - 1] - rows[target.row - 1][target.col - 1])


def slicing_grid(n: int, slicing: Sequence[Scalar], zero: Scalar = 0) -> list[list]:
    grid = [[zero] * n for _ in range(n)]
    for (r, c), value in zip(slicing_coords(n), slicing):
        grid[r - 1][c - 1] = grid[c - 1][r - 1] = value
    return grid


def freeze(grid: Sequence[Sequence]) -> Rows:
    return tuple(tuple(row) for row in grid)


def set_entry(grid: list[list], r: int, c: int, value) -> None:
    grid[r - 1][c - 1] = grid[c - 1][r - 1] = value


def kept_coefficients(n: int, slicing: Sequence[int], allow_zero: bool = False) -> list[Fraction]:
    """kappa_d: coeficiente de la entrada fija del nivel d en f_d (d = 1..n)."""
    coeffs = []
    for d in range(1, n + 1):
        grid = slicing_grid(n, slicing)
        set_entry(grid, *kept_coord(n, d), 1)
        coeffs.append(inv_coefficients(freeze(grid))[d - 1])
    if not allow_zero and any(c == 0 for c in coeffs):
        raise ZeroDivisionError("entrada de corte nula")
    return coeffs


def integer_shifts(n: int, slicing: Sequence[int], ring: RingTag) -> dict[tuple[int, int], int]:
    """Desplazamiento entero de cada objetivo por un paso de su generador."""
    rows = freeze(slicing_grid(n, slicing))
    return {
        (t.i, t.j): int(shift(rows, n, t, step_for(t, n, ring), QQ))
        for d in sweep_levels(n)
        for t in targets(n, d)
    }
