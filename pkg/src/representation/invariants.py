"""
Invariantes de la representacion: inv, altura, lambda, Z y la seccion sigma_0.

inv(B) = (-1)^{floor(n/2)} det(xA + B) es monico de grado n.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from sympy import Matrix, Poly, Rational

from src.exactmath.poly import X, MonicPoly, is_degenerate, sturm_real_roots
from src.exactmath.rings import QQ, RR, ZZ, RingTag, Scalar
from src.exceptions import DegenerateInput, InvalidParity, LengthMismatch, RingTooSmall
from src.representation.matrices import ReducibleMatrix, Rows, SymMatrix

logger = logging.getLogger(__name__)


# =============================================================================
# DETERMINANTES E INTERPOLACION
# =============================================================================
def bareiss_det(rows: Sequence[Sequence[Union[int, Fraction]]]) -> Union[int, Fraction]:
    """Determinante por eliminacion de Bareiss (sin fracciones sobre Z)."""
    m = [list(row) for row in rows]
    n = len(m)
    exact_int = all(isinstance(x, int) for row in m for x in row)
    if not exact_int and not any(isinstance(x, float) for row in m for x in row):
        # entradas mixtas int/Fraction: todo a Fraction antes de dividir
        m = [[Fraction(x) for x in row] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, factor = m[i], m[i][k]
            for j in range(k + 1, n):
                value = row_i[j] * pivot - factor * m[k][j]
                row_i[j] = value // prev if exact_int else value / prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def modular_det(rows: Sequence[Sequence[int]], modulus: int) -> int:
    """Determinante por eliminacion en Z/p (p primo)."""
    m = [[x % modulus for x in row] for row in rows]
    n, det = len(m), 1
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if m[i][k]), None)
        if pivot_row is None:
            return 0
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            det = -det
        pivot = m[k][k]
        det = det * pivot % modulus
        inv_pivot = pow(pivot, -1, modulus)
        for i in range(k + 1, n):
            factor = m[i][k] * inv_pivot % modulus
            if factor:
                m[i] = [(a - factor * b) % modulus for a, b in zip(m[i], m[k])]
    return det % modulus


@lru_cache(maxsize=None)
def _lagrange_basis(n: int) -> tuple:
    """Coeficientes (grado n..0) de los polinomios de Lagrange en x = 0..n."""
    basis = []
    for k in range(n + 1):
        coeffs = [Fraction(1)]
        denom = 1
        for j in range(n + 1):
            if j == k:
                continue
            # multiplicar por (x - j)
            coeffs = [a - j * b for a, b in zip(coeffs + [Fraction(0)], [Fraction(0)] + coeffs)]
            denom *= k - j
        basis.append(tuple(c / denom for c in coeffs))
    return tuple(basis)


def interpolate(values: Sequence[Union[int, Fraction]]) -> list[Fraction]:
    """Coeficientes (grado n..0) del polinomio que toma values[x] en x = 0..n."""
    basis = _lagrange_basis(len(values) - 1)
    total = [Fraction(0)] * len(values)
    for y, poly in zip(values, basis):
        if y:
            total = [t + y * c for t, c in zip(total, poly)]
    return total


def _pencil(rows: Rows, x) -> list[list]:
    n = len(rows)
    return [[rows[i][j] + (x if i + j == n - 1 else 0) for j in range(n)] for i in range(n)]


def _inv_exact(rows: Rows) -> list[Fraction]:
    n = len(rows)
    values = [bareiss_det(_pencil(rows, x)) for x in range(n + 1)]
    sign = -1 if (n // 2) % 2 else 1
    return [sign * c for c in interpolate(values)]


def inv_coefficients(rows: Rows) -> list[Fraction]:
    """[f_1, ..., f_n] de inv sobre Q a partir de filas enteras o racionales."""
    return _inv_exact(rows)[1:]


def _inv_symbolic(rows: Rows) -> list[Fraction]:
    n = len(rows)
    pencil = Matrix(n, n, lambda i, j: Rational(Fraction(rows[i][j]).numerator, Fraction(rows[i][j]).denominator)
                    + (X if i + j == n - 1 else 0))
    det = Poly(pencil.det(method="bareiss"), X)
    sign = -1 if (n // 2) % 2 else 1
    coeffs = [Fraction(int(c.p), int(c.q)) for c in det.all_coeffs()]
    coeffs = [Fraction(0)] * (n + 1 - len(coeffs)) + coeffs
    return [sign * c for c in coeffs]


def _inv_in_ring(rows: Rows, ring: RingTag) -> list[Scalar]:
    """Evaluacion en x = 0..n dentro del propio anillo finito."""
    n, m = len(rows), ring.modulus
    if m <= n:
        raise RingTooSmall(f"{ring.name} tiene {m} <= {n} puntos")
    denominators = math.factorial(n)
    if math.gcd(denominators, m) != 1:
        raise RingTooSmall(f"las diferencias 0..{n} no son unidades en {ring.name}")
    values = [modular_det(_pencil(rows, x), m) if ring.is_field else bareiss_det(_pencil(rows, x)) % m
              for x in range(n + 1)]
    sign = -1 if (n // 2) % 2 else 1
    return [ring.coerce(sign * c) for c in interpolate(values)]


def inv(B: SymMatrix, method: str = "auto") -> MonicPoly:
    """
    Polinomio invariante de B.

    method: "auto" (interpolacion exacta sobre Z/Q; los anillos modulares se
    levantan a Z), "bareiss" (determinante simbolico en R[x]) o "ring"
    (interpolacion dentro del anillo finito).
    """
    ring, n = B.ring, B.n
    if method == "ring":
        coeffs = _inv_in_ring(B.rows, ring)
    else:
        rows = B.rows
        if ring == RR:
            rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        coeffs = _inv_symbolic(rows) if method == "bareiss" else _inv_exact(rows)
    if ring.coerce(coeffs[0]) != ring.one:
        raise AssertionError("inv(B) no resulto monico")
    return MonicPoly(n=n, coeffs=tuple(ring.coerce(c) for c in coeffs[1:]), ring=ring)


# =============================================================================
# ALTURA
# =============================================================================
def height(obj: Union[MonicPoly, SymMatrix]) -> float:
    """H(f) = max |f_i|^{1/i}; para matrices H(B) = H(inv(B))."""
    f = inv(obj) if isinstance(obj, SymMatrix) else obj
    if f.ring.is_modular:
        raise ValueError("la altura requiere un anillo dentro de R")
    return max((abs(float(c)) ** (1.0 / i) for i, c in enumerate(f.coeffs, start=1)), default=0.0)


def height_below(obj: Union[MonicPoly, SymMatrix], bound: Union[int, Fraction]) -> bool:
    """H < X sin flotantes: |f_i| < X^i para todo i."""
    f = inv(obj) if isinstance(obj, SymMatrix) else obj
    bound = Fraction(bound)
    return all(abs(Fraction(c)) < bound ** i for i, c in enumerate(f.coeffs, start=1))


# =============================================================================
# LAMBDA Y Z
# =============================================================================
def lambda_exponents(n: int) -> tuple[int, ...]:
    """Exponentes de las entradas de corte b_{k(n-k)} en lambda."""
    exps = [2 * k - 1 for k in range(1, n // 2 + 1)]
    if n % 2 == 0:
        exps[-1] = (n - 2) // 2
    return tuple(exps)


def zpoly_exponents(n: int) -> tuple[int, ...]:
    exps = [2 * k for k in range(1, n // 2 + 1)]
    if n % 2 == 0:
        exps[-1] = n // 2
    return tuple(exps)


def _monomial(values: Sequence[Scalar], exponents: Sequence[int], ring: RingTag) -> Scalar:
    result = ring.one
    for value, e in zip(values, exponents):
        result = ring.reduce(result * value ** e)
    return result


def lambda_(B: SymMatrix) -> Scalar:
    return _monomial(B.slicing(), lambda_exponents(B.n), B.ring)


def zpoly(b: Union[Sequence[Scalar], SymMatrix], n: int = None, ring: RingTag = ZZ) -> Scalar:
    """Z(b); acepta el vector de corte (con n) o una matriz de W_0."""
    if isinstance(b, SymMatrix):
        return _monomial(b.slicing(), zpoly_exponents(b.n), b.ring)
    if n is None or len(b) != n // 2:
        raise LengthMismatch(f"se esperaban {None if n is None else n // 2} entradas de corte, hay {len(b)}")
    return _monomial(b, zpoly_exponents(n), ring)


# =============================================================================
# SECCION sigma_0
# =============================================================================
def section_sign_vector(n: int) -> tuple[int, ...]:
    """Signos epsilon_j de las entradas dependientes de f (ver calibrate_section_signs)."""
    signs = [1 if j % 2 == 0 else -1 for j in range(1, n + 1)]
    if n % 2 == 1:
        signs[0] = 1
    return tuple(signs)


def _section_template(n: int, f: Sequence[Scalar], ring: RingTag) -> ReducibleMatrix:
    """Matriz de la seccion tal como se dibuja, sin corregir signos."""
    entries: dict[tuple[int, int], Scalar] = {(i, n - i): ring.one for i in range(1, n)}
    if n % 2 == 1:
        g = n // 2
        entries[(g + 1, g + 1)] = f[0]
        for k in range(1, g + 1):
            entries[(g + 1 + k, g + 1 + k)] = ring.reduce(-f[2 * k])
        for k in range(0, g):
            entries[(g + 1 + k, g + 2 + k)] = ring.reduce(-ring.half(f[2 * k + 1]))
    else:
        m = n // 2
        half_f1 = ring.half(f[0])
        entries[(m, m + 1)] = ring.reduce(-half_f1)
        entries[(m + 1, m + 1)] = ring.reduce(half_f1 * half_f1 - f[1])
        for k in range(2, m + 1):
            entries[(m + k, m + k)] = ring.reduce(-f[2 * k - 1])
        for k in range(1, m):
            entries[(m + k, m + k + 1)] = ring.reduce(-ring.half(f[2 * k]))
    return ReducibleMatrix.from_entries(n, entries, ring)


def calibrate_section_signs(n: int) -> tuple[int, ...]:
    """
    Recalcula epsilon sondeando la plantilla con f = 2 e_k sobre Q.

    Cada sonda debe devolver x^n + (+-2) x^{n-k}; el signo obtenido es epsilon_k.
    """
    signs = []
    for k in range(1, n + 1):
        basis = [Fraction(0)] * n
        basis[k - 1] = Fraction(2)
        got = inv(_section_template(n, basis, QQ)).coeffs
        expected_zero = [c for i, c in enumerate(got) if i != k - 1]
        if any(expected_zero) or abs(got[k - 1]) != 2:
            raise RuntimeError(f"la sonda f_{k} no aisla un coeficiente: {got}")
        signs.append(1 if got[k - 1] > 0 else -1)
    logger.debug(f"Signos de la seccion n={n}: {signs}")
    return tuple(signs)


def sigma0(f: MonicPoly) -> ReducibleMatrix:
    """Seccion polinomial de inv en W_0: inv(sigma0(f)) = f."""
    ring = f.ring
    signed = [ring.reduce(e * c) for e, c in zip(section_sign_vector(f.n), f.coeffs)]
    return _section_template(f.n, signed, ring)


def sigma(f: MonicPoly) -> ReducibleMatrix:
    """Seccion reescalada sobre R: H(f) * sigma0(f(Hx)/H^n); entradas O(H(f))."""
    if is_degenerate(f):
        raise DegenerateInput("disc(f) = 0")
    h = height(f)
    if h == 0:
        raise DegenerateInput("H(f) = 0")
    scaled = MonicPoly(n=f.n, coeffs=tuple(float(c) / h ** i for i, c in enumerate(f.coeffs, start=1)), ring=RR)
    base = sigma0(scaled)
    return ReducibleMatrix(n=f.n, rows=tuple(tuple(h * x for x in row) for row in base.rows), ring=RR)


# =============================================================================
# ESTRATIFICACION
# =============================================================================
def valid_root_counts(n: int) -> list[int]:
    return [r for r in range(n % 2, n + 1, 2)]


def stratify(f: MonicPoly) -> int:
    """r = numero de raices reales (Sturm); r tiene la paridad de n."""
    r = sturm_real_roots(f if f.ring in (QQ, RR, ZZ) else f.over(QQ))
    if r % 2 != f.n % 2:
        raise InvalidParity(f"r={r} incompatible con n={f.n}")
    return r


def in_stratum(obj: Union[MonicPoly, SymMatrix], r: int) -> bool:
    """Pertenencia a U^{(r)} o W^{(r)}; los degenerados no pertenecen a ninguno."""
    f = inv(obj) if isinstance(obj, SymMatrix) else obj
    try:
        return stratify(f) == r
    except DegenerateInput:
        return False
