"""
Elementos de G y del parabolico P.

Un elemento es un par (h, mu) con h^t A h = mu A (similitud ortogonal),
tomado modulo escalares. La accion sobre matrices simetricas es
    act((h, mu), B) = mu^{-1} h B h^t,
que preserva W_0 cuando h es triangular inferior.

n impar: cada clase tiene un unico representante con mu = 1 y det = 1.
n par: el representante se normaliza escalando la primera entrada unidad
(en orden de filas) a 1; sobre Z, donde mu = +-1, la primera entrada no
nula se hace positiva.
"""
import itertools
from fractions import Fraction
from typing import Any, Iterator, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.exactmath.rings import QQ, RR, ZZ, RingKind, RingTag, Scalar, ring_from_name
from src.exceptions import HalvingError
from src.representation.invariants import bareiss_det, lambda_exponents
from src.representation.matrices import (
    Rows,
    SymMatrix,
    antidiagonal_rows,
    identity_rows,
    is_lower_triangular,
    mat_mul,
    reducible_coords,
    transpose,
)


def _det(rows: Rows, ring: RingTag) -> Scalar:
    if ring == RR:
        return float(bareiss_det([[Fraction(x) for x in row] for row in rows]))
    return ring.coerce(bareiss_det(rows))


def _membership_multiplier(rows: Rows, ring: RingTag) -> Scalar:
    """mu tal que h^t A h = mu A; ValueError si h no es similitud."""
    n = len(rows)
    gram = mat_mul(mat_mul(transpose(rows), antidiagonal_rows(n, ring), ring), rows, ring)
    mu = gram[0][n - 1]
    for i in range(n):
        for j in range(n):
            expected = mu if i + j == n - 1 else ring.zero
            if ring.reduce(gram[i][j] - expected) != 0:
                raise ValueError("h^t A h no es multiplo de A")
    return mu


class GroupElem(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    rows: tuple
    mu: Any = 1
    ring: RingTag = QQ

    @model_validator(mode="after")
    def _normalize(self) -> "GroupElem":
        ring = self.ring
        rows = tuple(tuple(ring.coerce(x) for x in row) for row in self.rows)
        mu = _membership_multiplier(rows, ring)
        if not ring.is_unit(mu):
            raise ValueError("multiplicador no invertible")
        scale = self._normalizing_scalar(rows, mu, ring)
        if scale != ring.one:
            rows = tuple(tuple(ring.reduce(scale * x) for x in row) for row in rows)
            mu = ring.reduce(scale * scale * mu)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "mu", mu)
        return self

    def _normalizing_scalar(self, rows: Rows, mu: Scalar, ring: RingTag) -> Scalar:
        n = self.n
        if n % 2 == 1:
            det = _det(rows, ring)
            return ring.div(ring.reduce(mu ** ((n - 1) // 2)), det)
        flat = [x for row in rows for x in row]
        if ring.kind is RingKind.INTEGERS:
            first = next(x for x in flat if x != 0)
            return 1 if first > 0 else -1
        first_unit = next((x for x in flat if ring.is_unit(x)), None)
        if first_unit is None:
            return ring.one
        return ring.inverse(first_unit)

    # -------------------------------------------------------------------------
    # Estructura de grupo
    # -------------------------------------------------------------------------
    @property
    def sign_class(self) -> bool:
        return self.n % 2 == 0

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        rows = mat_mul(self.rows, other.rows, self.ring)
        return GroupElem(n=self.n, rows=rows, mu=self.ring.reduce(self.mu * other.mu), ring=self.ring)

    def inverse(self) -> "GroupElem":
        ring, n = self.ring, self.n
        a = antidiagonal_rows(n, ring)
        inv_mu = ring.inverse(self.mu)
        rows = mat_mul(mat_mul(a, transpose(self.rows), ring), a, ring)
        rows = tuple(tuple(ring.reduce(inv_mu * x) for x in row) for row in rows)
        return GroupElem(n=n, rows=rows, mu=inv_mu, ring=ring)

    def __pow__(self, exponent: int) -> "GroupElem":
        base = self if exponent >= 0 else self.inverse()
        result = identity(self.n, self.ring)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def act_rows(self, rows: Rows) -> Rows:
        ring = self.ring
        inv_mu = ring.inverse(self.mu)
        image = mat_mul(mat_mul(self.rows, rows, ring), transpose(self.rows), ring)
        return tuple(tuple(ring.reduce(inv_mu * x) for x in row) for row in image)

    def det(self) -> Scalar:
        return _det(self.rows, self.ring)

    def diagonal(self) -> tuple:
        return tuple(self.rows[i][i] for i in range(self.n))

    def to_json(self) -> dict:
        data = {
            "n": self.n,
            "ring": self.ring.name,
            "rows": [[self.ring.to_str(x) for x in row] for row in self.rows],
            "mu": self.ring.to_str(self.mu),
        }
        if self.sign_class:
            data["sign_class"] = True
        return data

    @classmethod
    def from_json(cls, data: dict) -> "GroupElem":
        ring = ring_from_name(data.get("ring", "QQ"))
        rows = tuple(tuple(ring.parse(str(x)) for x in row) for row in data["rows"])
        return cls(n=int(data["n"]), rows=rows, mu=ring.parse(str(data.get("mu", "1"))), ring=ring)


class TorusCoords(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    s: tuple


# =============================================================================
# CONSTRUCTORES
# =============================================================================
def identity(n: int, ring: RingTag = QQ) -> GroupElem:
    return GroupElem(n=n, rows=identity_rows(n, ring), mu=ring.one, ring=ring)


def act(g: GroupElem, B: SymMatrix) -> SymMatrix:
    """g.B = mu^{-1} h B h^t; conserva el tipo (W_0 si g esta en P)."""
    if g.ring != B.ring:
        raise ValueError(f"anillos distintos: {g.ring.name} vs {B.ring.name}")
    rows = g.act_rows(B.rows)
    if type(B) is not SymMatrix and not is_lower_triangular(g.rows, g.ring):
        return SymMatrix(n=B.n, rows=rows, ring=B.ring)
    return type(B)(n=B.n, rows=rows, ring=B.ring)


def n_coords(n: int) -> list[tuple[int, int]]:
    """Coordenadas (i, j) de N: 2 <= i <= n-1, 1 <= j <= min(i-1, n-i)."""
    return [(i, j) for i in range(2, n) for j in range(1, min(i - 1, n - i) + 1)]


def is_middle(i: int, n: int) -> bool:
    """Fila central (n impar): el generador lleva el termino cuadratico."""
    return n % 2 == 1 and 2 * i == n + 1


def unipotent_rows(n: int, i: int, j: int, v: Scalar, ring: RingTag) -> Rows:
    if not (2 <= i <= n - 1 and 1 <= j <= min(i - 1, n - i)):
        raise IndexError(f"(i, j) = ({i}, {j}) no es coordenada de N para n={n}")
    grid = [list(row) for row in identity_rows(n, ring)]
    grid[i - 1][j - 1] = ring.reduce(grid[i - 1][j - 1] + v)
    grid[n - j][n - i] = ring.reduce(grid[n - j][n - i] - v)
    if is_middle(i, n):
        if ring.kind in (RingKind.INTEGERS,) or (ring.is_modular and ring.modulus % 2 == 0):
            if int(v) % 2:
                raise HalvingError(f"parametro central impar v={v} en {ring.name}")
            quad = (int(v) // 2) * int(v)
        else:
            quad = ring.half(v * v)
        grid[n - j][j - 1] = ring.reduce(grid[n - j][j - 1] - quad)
    return tuple(map(tuple, grid))


def unipotent_gen(i: int, j: int, v: Scalar, n: int, ring: RingTag = QQ) -> GroupElem:
    """u~_{ij}(v): exponencial del vector raiz E_ij - E_{n+1-j, n+1-i}."""
    return GroupElem(n=n, rows=unipotent_rows(n, i, j, ring.coerce(v), ring), mu=ring.one, ring=ring)


def diagonal_elem(t: Sequence[Scalar], mu: Scalar, ring: RingTag) -> GroupElem:
    n = len(t)
    rows = tuple(tuple(ring.coerce(t[i]) if i == j else ring.zero for j in range(n)) for i in range(n))
    return GroupElem(n=n, rows=rows, mu=ring.coerce(mu), ring=ring)


def torus_vector(s: TorusCoords, n: int, ring: RingTag = QQ) -> list[Scalar]:
    """(t_1..t_n) a partir de las coordenadas s; t_i t_{n+1-i} = 1."""
    s_vals = [ring.coerce(x) for x in s.s]
    if len(s_vals) != n // 2:
        raise ValueError(f"se esperaban {n // 2} coordenadas")
    t = [ring.one] * n
    if n % 2 == 1:
        g = n // 2
        acc = ring.one
        for k in range(g, 0, -1):
            acc = ring.div(acc, s_vals[k - 1])
            t[k - 1] = acc
    else:
        m = n // 2
        root = ring.sqrt(ring.reduce(s_vals[m - 2] * s_vals[m - 1]))
        inv_root = ring.inverse(root)
        acc = inv_root
        t[m - 2] = inv_root
        for k in range(m - 2, 0, -1):
            acc = ring.div(acc, s_vals[k - 1])
            t[k - 1] = acc
        t[m - 1] = ring.reduce(inv_root * s_vals[m - 2])
    for i in range((n + 1) // 2, n):
        t[i] = ring.inverse(t[n - 1 - i])
    return t


def torus_elem(s: TorusCoords, n: int, ring: RingTag = QQ) -> GroupElem:
    return diagonal_elem(torus_vector(s, n, ring), ring.one, ring)


def haar_delta(s: TorusCoords, n: int) -> Union[Fraction, float]:
    """delta(s) de la medida de Haar dg = du delta(s) d^x s."""
    vals = [x if isinstance(x, float) else Fraction(x) for x in s.s]
    g = n // 2
    result = Fraction(1) if all(isinstance(x, Fraction) for x in vals) else 1.0
    if n % 2 == 1:
        for i, x in enumerate(vals, start=1):
            result *= x ** (i * i - 2 * i * g)
        return result
    m = n // 2
    result *= (vals[m - 2] * vals[m - 1]) ** (-(n * n - 2 * n) // 8)
    for i in range(1, m - 1):
        result *= vals[i - 1] ** (i * i - i * (n - 1))
    return result


def slicing_scaler(n: int, scales: Sequence[Scalar], ring: RingTag) -> GroupElem:
    """Elemento diagonal de P que multiplica la entrada de corte k por scales[k]."""
    c = [ring.coerce(x) for x in scales]
    t = [ring.one] * n
    if n % 2 == 1:
        g = n // 2
        mu = ring.one
        acc = ring.one
        for k in range(g, 0, -1):
            acc = ring.reduce(acc * c[k - 1])
            t[k - 1] = acc
        for i in range(g + 1, n):
            t[i] = ring.inverse(t[n - 1 - i])
    else:
        m = n // 2
        mu = ring.inverse(c[m - 1])
        acc = ring.one
        for k in range(m - 1, 0, -1):
            acc = ring.reduce(acc * c[k - 1])
            t[k - 1] = acc
        for i in range(m, n):
            t[i] = ring.div(mu, t[n - 1 - i])
    return diagonal_elem(t, mu, ring)


# =============================================================================
# GRUPO FINITO GAMMA
# =============================================================================
def raw_gamma_vectors(n: int) -> list[tuple[int, ...]]:
    """Diagonales +-1 con t_i t_{n+1-i} = 1: 2^{ceil(n/2)} vectores."""
    half = (n + 1) // 2
    vectors = []
    for signs in itertools.product((1, -1), repeat=half):
        t = list(signs) + [0] * (n - half)
        for i in range(half, n):
            t[i] = t[n - 1 - i]
        vectors.append(tuple(t))
    return vectors


def gamma_group(n: int, ring: RingTag = ZZ) -> list[GroupElem]:
    """Gamma filtrado a G (det 1 para n impar, un representante por clase +-)."""
    elems: list[GroupElem] = []
    for t in raw_gamma_vectors(n):
        if n % 2 == 1 and t[n // 2] != 1:
            continue
        g = diagonal_elem(t, 1, ring)
        if g not in elems:
            elems.append(g)
    return elems


# =============================================================================
# PARABOLICO
# =============================================================================
def is_in_P(g: GroupElem) -> bool:
    return is_lower_triangular(g.rows, g.ring)


def n_element(values: dict[tuple[int, int], Scalar], n: int, ring: RingTag) -> GroupElem:
    """Producto ordenado de u~_{ij}(v_ij) sobre n_coords(n)."""
    rows = identity_rows(n, ring)
    for i, j in n_coords(n):
        v = values.get((i, j), 0)
        if v:
            rows = mat_mul(rows, unipotent_rows(n, i, j, ring.coerce(v), ring), ring)
    return GroupElem(n=n, rows=rows, mu=ring.one, ring=ring)


def units_of(ring: RingTag) -> list[Scalar]:
    if ring.kind is RingKind.INTEGERS:
        return [1, -1]
    if not ring.is_modular:
        raise ValueError(f"{ring.name} tiene infinitas unidades")
    return [x for x in ring.elements() if ring.is_unit(x)]


def _uniform_unit(rng: np.random.Generator, ring: RingTag, bound: int) -> Scalar:
    if ring.kind is RingKind.INTEGERS:
        return int(rng.choice([1, -1]))
    if ring.is_modular:
        units = units_of(ring)
        return units[int(rng.integers(len(units)))]
    value = 0
    while value == 0:
        value = int(rng.integers(-bound, bound + 1))
    return ring.coerce(value)


def random_P(n: int, ring: RingTag, bound: int, seed: Union[int, np.random.Generator]) -> GroupElem:
    """Elemento de P con unidades del toro y coordenadas de N en [-bound, bound]."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    scales = [_uniform_unit(rng, ring, bound) for _ in range(n // 2)]
    values = {}
    for i, j in n_coords(n):
        v = int(rng.integers(-bound, bound + 1))
        if is_middle(i, n) and (ring.kind is RingKind.INTEGERS or (ring.is_modular and ring.modulus % 2 == 0)):
            v *= 2
        values[(i, j)] = v
    return slicing_scaler(n, scales, ring) * n_element(values, n, ring)


def p_order(n: int, p: int) -> int:
    """#P(F_p) = (p-1)^{floor(n/2)} p^{dim N}."""
    return (p - 1) ** (n // 2) * p ** len(n_coords(n))


def enumerate_P(n: int, ring: RingTag, integral_image: bool = False) -> Iterator[GroupElem]:
    """
    Todo P(R) para R finito, como T x N.

    integral_image: restringe las coordenadas centrales a pares (imagen de
    P(Z_2) en P(Z/2^k)).
    """
    coords = n_coords(n)
    elements = list(ring.elements())
    choices = []
    for i, _ in coords:
        if integral_image and is_middle(i, n) and ring.modulus % 2 == 0:
            choices.append([x for x in elements if x % 2 == 0])
        else:
            choices.append(elements)
    units = units_of(ring)
    for scales in itertools.product(units, repeat=n // 2):
        torus = slicing_scaler(n, scales, ring)
        for values in itertools.product(*choices):
            yield torus * n_element(dict(zip(coords, values)), n, ring)


# =============================================================================
# CARACTER DE LAMBDA
# =============================================================================
def action_jacobian(g: GroupElem) -> Scalar:
    """Determinante de B -> g.B restringido a las coordenadas de W_0 (g en P)."""
    n, ring = g.n, g.ring
    coords = reducible_coords(n)
    columns = []
    for i, j in coords:
        basis = SymMatrix.from_entries(n, {(i, j): 1}, ring)
        image = g.act_rows(basis.rows)
        columns.append([image[a - 1][b - 1] for a, b in coords])
    if ring == RR:
        return float(bareiss_det([[Fraction(x) for x in col] for col in columns]))
    return ring.coerce(bareiss_det(columns))


def lambda_character(g: GroupElem) -> Scalar:
    """chi_lambda(g): cociente de lambda por el jacobiano de la accion en W_0."""
    n, ring = g.n, g.ring
    if not is_in_P(g):
        raise ValueError("el caracter solo esta definido en P")
    d = g.diagonal()
    inv_mu = ring.inverse(g.mu)
    ratio = ring.one
    for (k, e) in zip(range(1, n // 2 + 1), lambda_exponents(n)):
        weight = ring.reduce(inv_mu * d[k - 1] * d[n - k - 1])
        ratio = ring.reduce(ratio * weight ** e)
    return ring.reduce(ratio * action_jacobian(g))
