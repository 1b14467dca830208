"""Constantes C_n^fin, C_{n,r}^inf y conteos predichos."""
import logging
from fractions import Fraction
from typing import Optional

from src.config import Caps
from src.local.densities import full_lambda_integral, local_lambda_integral
from src.local.euler import Interval, TailModel, euler_product, interval_mul
from src.local.families import FamilySpec
from src.archimedean.volume import VolumeEstimate, volume_Vr

logger = logging.getLogger(__name__)

DEFAULT_P_MAX = 10_000


def constant_Cfin(n: int, p_max: int = DEFAULT_P_MAX, tail_model: TailModel = "zeta") -> Interval:
    """prod zeta(2i) (n impar) o zeta(n/2) prod zeta(2i) (n par)."""
    return euler_product(None, p_max, n, tail_model)


def constant_Cinf(n: int, r: int, volume: VolumeEstimate) -> Interval:
    if (volume.n, volume.r) != (n, r):
        raise ValueError(f"la estimacion es de (n, r) = ({volume.n}, {volume.r})")
    lo, hi = volume.interval()
    if n % 2 == 0:
        scale = Fraction(1, 2 ** (n // 2))
        lo, hi = lo * scale, hi * scale
    return lo, hi


def height_exponent(n: int) -> int:
    return (n * n + n) // 2


def predicted_count(
    n: int,
    r: int,
    X: int,
    volume: Optional[VolumeEstimate] = None,
    cfin: Optional[Interval] = None,
    samples: int = 1_000_000,
    seed: int = 0,
) -> Interval:
    """C_n^fin * C_{n,r}^inf * X^{(n^2+n)/2}."""
    if X < 0:
        raise ValueError("X debe ser >= 0")
    if X == 0:
        return Fraction(0), Fraction(0)
    volume = volume or volume_Vr(n, r, samples, seed)
    cfin = cfin or constant_Cfin(n)
    lo, hi = interval_mul(cfin, constant_Cinf(n, r, volume))
    power = Fraction(X) ** height_exponent(n)
    return lo * power, hi * power


def family_ratio(n: int, family: FamilySpec, caps: Optional[Caps] = None) -> Fraction:
    """prod sobre primos condicionados de int_S |lambda| / int_full |lambda|."""
    ratio = Fraction(1)
    for p in family.conditioned_primes():
        ratio *= local_lambda_integral(n, p, family, caps).value / full_lambda_integral(n, p)
    return ratio


def predicted_family_count(
    n: int,
    r: int,
    X: int,
    family: FamilySpec,
    volume: Optional[VolumeEstimate] = None,
    cfin: Optional[Interval] = None,
    caps: Optional[Caps] = None,
    samples: int = 1_000_000,
    seed: int = 0,
) -> Interval:
    lo, hi = predicted_count(n, r, X, volume=volume, cfin=cfin, samples=samples, seed=seed)
    ratio = family_ratio(n, family, caps)
    logger.debug(f"Familia '{family.name}': factor local {ratio}")
    return lo * ratio, hi * ratio
