"""
Matrices simetricas W(R), el hiperplano reducible W_0(R) y la forma
anti-diagonal A.

Convencion de indices: la API publica usa indices 1..n como en la notacion
b_{ij}; las filas internas (tuplas de tuplas) usan 0..n-1.
"""
from typing import Iterable, Mapping, Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from src.exactmath.rings import QQ, RingTag, Scalar, ring_from_name

Rows = tuple[tuple[Scalar, ...], ...]


# =============================================================================
# OPERACIONES SOBRE FILAS
# =============================================================================
def identity_rows(n: int, ring: RingTag) -> Rows:
    one, zero = ring.one, ring.zero
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def antidiagonal_rows(n: int, ring: RingTag) -> Rows:
    one, zero = ring.one, ring.zero
    return tuple(tuple(one if i + j == n - 1 else zero for j in range(n)) for i in range(n))


def mat_mul(a: Rows, b: Rows, ring: RingTag) -> Rows:
    cols = tuple(zip(*b))
    return tuple(
        tuple(ring.reduce(sum(x * y for x, y in zip(row, col))) for col in cols)
        for row in a
    )


def transpose(a: Rows) -> Rows:
    return tuple(zip(*a))


def scale_rows(a: Rows, c: Scalar, ring: RingTag) -> Rows:
    return tuple(tuple(ring.reduce(c * x) for x in row) for row in a)


def is_lower_triangular(a: Rows, ring: RingTag) -> bool:
    n = len(a)
    return all(ring.is_zero(a[i][j]) for i in range(n) for j in range(i + 1, n))


def reducible_coords(n: int) -> list[tuple[int, int]]:
    """Coordenadas (i, j), i <= j, de W_0: las que cumplen i + j >= n."""
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1) if i + j >= n]


def level_of(i: int, j: int, n: int) -> int:
    """Nivel de la entrada (i, j): i + j - n. Nivel 0 = entradas de corte."""
    return i + j - n


def slicing_coords(n: int) -> list[tuple[int, int]]:
    """Entradas de corte b_{k(n-k)}, k = 1..floor(n/2)."""
    return [(k, n - k) for k in range(1, n // 2 + 1)]


# =============================================================================
# TIPOS
# =============================================================================
class AntiDiagonalForm(BaseModel):
    """La forma A: unos en la anti-diagonal."""
    model_config = ConfigDict(frozen=True)

    n: int

    def rows(self, ring: RingTag = QQ) -> Rows:
        return antidiagonal_rows(self.n, ring)

    def det(self) -> int:
        return -1 if (self.n * (self.n - 1) // 2) % 2 else 1


class SymMatrix(BaseModel):
    """Matriz simetrica n x n; se guarda completa y se valida la simetria."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    rows: tuple
    ring: RingTag = QQ

    @model_validator(mode="after")
    def _check(self) -> "SymMatrix":
        ring = self.ring
        rows = tuple(tuple(ring.coerce(x) for x in row) for row in self.rows)
        if len(rows) != self.n or any(len(row) != self.n for row in rows):
            raise ValueError(f"se esperaba una matriz {self.n}x{self.n}")
        if any(rows[i][j] != rows[j][i] for i in range(self.n) for j in range(i)):
            raise ValueError("la matriz no es simetrica")
        object.__setattr__(self, "rows", rows)
        return self

    # -------------------------------------------------------------------------
    # Constructores
    # -------------------------------------------------------------------------
    @classmethod
    def zero(cls, n: int, ring: RingTag = QQ) -> "SymMatrix":
        return cls(n=n, rows=((ring.zero,) * n,) * n, ring=ring)

    @classmethod
    def from_entries(cls, n: int, entries: Mapping[tuple[int, int], Scalar], ring: RingTag = QQ) -> "SymMatrix":
        """entries: {(i, j): valor} con indices 1..n; se simetriza."""
        grid = [[ring.zero] * n for _ in range(n)]
        for (i, j), value in entries.items():
            grid[i - 1][j - 1] = grid[j - 1][i - 1] = ring.coerce(value)
        return cls(n=n, rows=tuple(map(tuple, grid)), ring=ring)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], ring: RingTag = QQ) -> "SymMatrix":
        return cls(n=len(rows), rows=tuple(map(tuple, rows)), ring=ring)

    # -------------------------------------------------------------------------
    # Acceso
    # -------------------------------------------------------------------------
    def entry(self, i: int, j: int) -> Scalar:
        return self.rows[i - 1][j - 1]

    def with_entries(self, entries: Mapping[tuple[int, int], Scalar]) -> "SymMatrix":
        grid = [list(row) for row in self.rows]
        for (i, j), value in entries.items():
            grid[i - 1][j - 1] = grid[j - 1][i - 1] = self.ring.coerce(value)
        return type(self)(n=self.n, rows=tuple(map(tuple, grid)), ring=self.ring)

    def over(self, ring: RingTag) -> "SymMatrix":
        return type(self)(n=self.n, rows=self.rows, ring=ring)

    def slicing(self) -> tuple:
        return tuple(self.entry(i, j) for i, j in slicing_coords(self.n))

    def upper_entries(self) -> Iterable[tuple[int, int, Scalar]]:
        for i in range(1, self.n + 1):
            for j in range(i, self.n + 1):
                yield i, j, self.entry(i, j)

    def is_reducible(self) -> bool:
        return all(self.ring.is_zero(self.entry(i, j)) for i in range(1, self.n + 1)
                   for j in range(1, self.n + 1) if i + j < self.n)

    def key(self) -> tuple:
        """Clave hashable (W_0: solo las coordenadas de W_0)."""
        return tuple(self.entry(i, j) for i, j in reducible_coords(self.n))

    # -------------------------------------------------------------------------
    # JSON
    # -------------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ring": self.ring.name,
            "entries": [[i, j, self.ring.to_str(v)] for i, j, v in self.upper_entries()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SymMatrix":
        ring = ring_from_name(data.get("ring", "ZZ"))
        entries = {(int(i), int(j)): ring.parse(str(v)) for i, j, v in data["entries"]}
        return cls.from_entries(int(data["n"]), entries, ring)


class ReducibleMatrix(SymMatrix):
    """Elemento de W_0: b_{ij} = 0 cuando i + j < n."""

    @model_validator(mode="after")
    def _check_hyperplane(self) -> "ReducibleMatrix":
        if not self.is_reducible():
            raise ValueError("la matriz no pertenece a W_0")
        return self

    @classmethod
    def from_coords(cls, n: int, values: Sequence[Scalar], ring: RingTag) -> "ReducibleMatrix":
        """Inverso de key(): valores en el orden de reducible_coords(n)."""
        return cls.from_entries(n, dict(zip(reducible_coords(n), values)), ring)


def as_reducible(matrix: SymMatrix) -> ReducibleMatrix:
    if isinstance(matrix, ReducibleMatrix):
        return matrix
    return ReducibleMatrix(n=matrix.n, rows=matrix.rows, ring=matrix.ring)
