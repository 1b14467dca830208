"""
Volumen V^(r)(1) de {f en U(R) : H(f) < 1, f con r raices reales}.

H(f) < 1 equivale a |f_i| < 1 para todo i, asi que se muestrea el cubo
(-1, 1)^n. Cada muestra se clasifica por los autovalores de su matriz
companera; las muestras ambiguas (parte imaginaria cerca de cero o paridad
imposible) se resuelven con Sturm exacto sobre los coeficientes diadicos.

Muestreo por bloques de tamano fijo: cada bloque tiene su propio flujo Philox
derivado de SeedSequence(seed), de modo que el resultado no depende del
numero de hilos.
"""
import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel

from src.config import settings
from src.exactmath.poly import MonicPoly, is_degenerate, sturm_real_roots
from src.exactmath.rings import QQ
from src.exceptions import InvalidParity
from src.representation.invariants import valid_root_counts

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURACION
# =============================================================================
SHARD_SIZE = 50_000
MIN_SAMPLES = 10_000
Z_99 = 2.576
IMAG_TOL = 1e-9
AMBIGUOUS_BAND = 1e-5


class VolumeEstimate(BaseModel):
    n: int
    r: int
    estimate: float
    half_width: float
    samples: int
    seed: int
    degenerate: int = 0

    def interval(self) -> tuple[Fraction, Fraction]:
        top = 2 ** self.n
        lo = max(0.0, self.estimate - self.half_width)
        hi = min(float(top), self.estimate + self.half_width)
        return Fraction(lo), Fraction(hi)

    def to_json(self) -> dict:
        data = self.model_dump()
        data["monte_carlo"] = True
        return data


# =============================================================================
# CLASIFICACION
# =============================================================================
def companion_batch(coeffs: np.ndarray) -> np.ndarray:
    """Matrices companeras (m, n, n) de x^n + c_1 x^{n-1} + ... + c_n."""
    m, n = coeffs.shape
    mats = np.zeros((m, n, n))
    mats[:, 0, :] = -coeffs
    if n > 1:
        idx = np.arange(n - 1)
        mats[:, idx + 1, idx] = 1.0
    return mats


def _exact_count(row: np.ndarray) -> Optional[int]:
    f = MonicPoly.of([Fraction(float(c)) for c in row], QQ)
    if is_degenerate(f):
        return None
    return sturm_real_roots(f)


def real_root_counts(coeffs: np.ndarray, exact: bool = False) -> tuple[np.ndarray, int]:
    """
    Numero de raices reales por fila; -1 marca las degeneradas. Devuelve
    tambien cuantas filas se resolvieron con Sturm. exact=True las manda todas.
    """
    n = coeffs.shape[1]
    if exact:
        routed = np.ones(coeffs.shape[0], dtype=bool)
        counts = np.zeros(coeffs.shape[0], dtype=np.int64)
    else:
        eig = np.linalg.eigvals(companion_batch(coeffs))
        imag = np.abs(eig.imag)
        counts = (imag <= IMAG_TOL).sum(axis=1)
        routed = ((imag > IMAG_TOL) & (imag < AMBIGUOUS_BAND)).any(axis=1) | (counts % 2 != n % 2)
    for i in np.flatnonzero(routed):
        exact_count = _exact_count(coeffs[i])
        counts[i] = -1 if exact_count is None else exact_count
    return counts, int(routed.sum())


def _shard_histogram(n: int, size: int, seed_seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed_seq))
    coeffs = rng.uniform(-1.0, 1.0, size=(size, n))
    counts, _ = real_root_counts(coeffs)
    hist = np.zeros(n + 2, dtype=np.int64)
    for r in range(n + 1):
        hist[r] = int((counts == r).sum())
    hist[n + 1] = int((counts == -1).sum())
    return hist


def root_count_histogram(n: int, samples: int, seed: int, threads: Optional[int] = None) -> np.ndarray:
    """Histograma [N_0, ..., N_n, degeneradas] sumado en orden de bloque."""
    shards = [SHARD_SIZE] * (samples // SHARD_SIZE)
    if samples % SHARD_SIZE:
        shards.append(samples % SHARD_SIZE)
    children = np.random.SeedSequence(seed).spawn(len(shards))
    jobs = threads or settings.threads
    parts = Parallel(n_jobs=min(jobs, len(shards)))(
        delayed(_shard_histogram)(n, size, child) for size, child in zip(shards, children)
    )
    total = np.zeros(n + 2, dtype=np.int64)
    for part in parts:
        total += part
    logger.info(f"Monte Carlo n={n}: {samples} muestras en {len(shards)} bloques")
    return total


# =============================================================================
# ESTIMACION
# =============================================================================
def _estimate(n: int, r: int, hist: np.ndarray, samples: int, seed: int) -> VolumeEstimate:
    valid = int(hist[: n + 1].sum())
    p_hat = hist[r] / valid if valid else 0.0
    se = math.sqrt(p_hat * (1 - p_hat) / valid) if valid else 0.0
    scale = 2 ** n
    return VolumeEstimate(
        n=n, r=r, estimate=p_hat * scale, half_width=Z_99 * se * scale,
        samples=samples, seed=seed, degenerate=int(hist[n + 1]),
    )


def volume_Vr(n: int, r: int, samples: int, seed: int, threads: Optional[int] = None) -> VolumeEstimate:
    if r not in valid_root_counts(n):
        raise InvalidParity(f"r={r} no es valido para n={n}")
    if samples < MIN_SAMPLES:
        raise ValueError(f"se necesitan al menos {MIN_SAMPLES} muestras")
    hist = root_count_histogram(n, samples, seed, threads)
    return _estimate(n, r, hist, samples, seed)


def volume_table(n: int, samples: int, seed: int, threads: Optional[int] = None) -> dict[int, VolumeEstimate]:
    """Todas las r validas con las mismas muestras."""
    if samples < MIN_SAMPLES:
        raise ValueError(f"se necesitan al menos {MIN_SAMPLES} muestras")
    hist = root_count_histogram(n, samples, seed, threads)
    return {r: _estimate(n, r, hist, samples, seed) for r in valid_root_counts(n)}
