"""
Productos de Euler con encierro riguroso.

El producto finito (p <= P_max) se evalua en aritmetica de intervalos de
mpmath. La cola p > P_max se encierra de dos maneras:
    zeta   prod_a zeta(a) * prod_{p <= P_max} (1 - p^{-a}), exacto salvo redondeo
    bound  [1, exp(sum_a 2 P_max^{1-a} / (a - 1))]
zeta(a) para a entero >= 2 sale de Euler-Maclaurin con todos los terminos
racionales; el resto esta acotado por el primer termino omitido.
"""
import logging
from fractions import Fraction
from typing import Callable, Literal, Mapping, Union

import mpmath
from mpmath import iv
from sympy import bernoulli, factorial, primerange

from src.local.densities import zeta_euler_factor, zeta_exponents

logger = logging.getLogger(__name__)

TailModel = Literal["zeta", "bound"]
Interval = tuple[Fraction, Fraction]

# =============================================================================
# CONFIGURACION
# =============================================================================
PRECISION_BITS = 128
EM_CUTOFF = 20
EM_TERMS = 10


# =============================================================================
# INTERVALOS
# =============================================================================
def _raw_to_fraction(raw: tuple) -> Fraction:
    sign, man, exp, _ = raw
    value = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -value if sign else value


def to_iv(x: Union[int, Fraction]):
    x = Fraction(x)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def from_iv(x) -> Interval:
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def interval_mul(a: Interval, b: Interval) -> Interval:
    products = [x * y for x in a for y in b]
    return min(products), max(products)


def interval_str(x: Interval, digits: int = 15) -> list[str]:
    """Extremos como cadenas decimales."""
    with mpmath.workdps(digits + 5):
        return [mpmath.nstr(mpmath.mpf(v.numerator) / v.denominator, digits) for v in x]


def contains(x: Interval, value: float, slack: float = 0.0) -> bool:
    return float(x[0]) - slack <= value <= float(x[1]) + slack


# =============================================================================
# ZETA
# =============================================================================
def _em_term(s: int, j: int, cutoff: int) -> Fraction:
    """B_{2j}/(2j)! * s (s+1) ... (s+2j-2) * N^{-s-2j+1}."""
    rising = 1
    for i in range(2 * j - 1):
        rising *= s + i
    b = bernoulli(2 * j)
    coeff = Fraction(int(b.p), int(b.q)) / int(factorial(2 * j))
    return coeff * rising / Fraction(cutoff) ** (s + 2 * j - 1)


def zeta_interval(s: int, cutoff: int = EM_CUTOFF, terms: int = EM_TERMS) -> Interval:
    """Encierro racional de zeta(s), s entero >= 2."""
    if s < 2:
        raise ValueError("zeta(s) requiere s >= 2")
    total = sum(Fraction(1, k ** s) for k in range(1, cutoff))
    total += Fraction(1, (s - 1) * cutoff ** (s - 1)) + Fraction(1, 2 * cutoff ** s)
    for j in range(1, terms + 1):
        total += _em_term(s, j, cutoff)
    remainder = abs(_em_term(s, terms + 1, cutoff))
    return total - remainder, total + remainder


# =============================================================================
# PRODUCTO
# =============================================================================
def euler_product(
    factors: Union[Mapping[int, Fraction], Callable[[int], Fraction], None],
    p_max: int,
    n: int,
    tail_model: TailModel = "zeta",
) -> Interval:
    """
    prod_p factor(p) con factor(p) = factor de zeta completo para p > p_max.
    factors puede ser un dict parcial (los primos ausentes usan el completo).
    """
    if isinstance(factors, Mapping):
        overrides = dict(factors)

        def factor(p: int) -> Fraction:
            return overrides.get(p, zeta_euler_factor(n, p))
    else:
        factor = factors or (lambda p: zeta_euler_factor(n, p))

    exps = zeta_exponents(n)
    saved = iv.prec
    iv.prec = PRECISION_BITS
    try:
        product = iv.mpf(1)
        partial_zeta = iv.mpf(1)
        for p in primerange(2, p_max + 1):
            product *= to_iv(factor(int(p)))
            if tail_model == "zeta":
                for a in exps:
                    partial_zeta *= 1 - to_iv(Fraction(1, int(p) ** a))
        if tail_model == "zeta":
            tail = partial_zeta
            for a in exps:
                lo, hi = zeta_interval(a)
                tail *= to_iv((lo + hi) / 2) + to_iv((hi - lo) / 2) * iv.mpf([-1, 1])
        elif tail_model == "bound":
            exponent = sum(to_iv(Fraction(2, a - 1)) * to_iv(p_max) ** (1 - a) for a in exps)
            tail = 1 + (iv.exp(exponent) - 1) * iv.mpf([0, 1])
        else:
            raise ValueError(f"modelo de cola desconocido: {tail_model}")
        result = from_iv(product * tail)
    finally:
        iv.prec = saved
    logger.debug(f"Producto de Euler n={n}, P_max={p_max}, cola={tail_model}: {interval_str(result, 10)}")
    return result
