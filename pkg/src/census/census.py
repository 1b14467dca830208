"""
Censo global por productos locales: N(X) = sum_{H(f) < X} prod_p c_p^S(f).

El espacio de f se reparte por f_1 entre procesos (joblib) y los resultados
se mezclan en el orden de f_1, asi que el informe no depende del numero de
hilos. Para n = 3 cada bloque (f_1, f_2) se evalua vectorizado en f_3:
discriminante en int64, estrato por su signo y criba de p^2 | disc.
"""
import hashlib
import json
import logging
import math
import time
from collections import Counter, defaultdict
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from pydantic import BaseModel, Field
from sympy import primerange

from src.archimedean.constants import predicted_family_count
from src.archimedean.volume import volume_table
from src.config import Caps, RunConfig, settings
from src.exactmath.poly import MonicPoly, poly_disc
from src.exactmath.rings import IntegersMod
from src.exceptions import InstanceTooLarge, OrbitCountError
from src.groups.elements import p_order
from src.local.euler import interval_str
from src.local.families import FamilySpec, PrimeCondition
from src.local.orbits import cubic_exponents, orbit_count_graded
from src.census.enumerate import EnumerationStats, coefficient_ranges, enumerate_invariants, enumerate_shard, shard_keys
from src.census.global_count import global_graded
from src.reduction.oracles import stabilizer_fp
from src.representation.invariants import sigma0, valid_root_counts

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURACION
# =============================================================================
DEFAULT_M_CUTOFF = 10
SURVEY_SIZE = 20
SURVEY_PRIMES = (3, 5, 7, 11, 13)


class CensusReport(BaseModel):
    n: int
    r: Optional[int] = None
    X: int
    family: str = "full"
    empirical: int = 0
    polynomials: int = 0
    candidates: int = 0
    degenerate: int = 0
    filtered: int = 0
    predicted: list[str] = Field(default_factory=list)
    ratio: Optional[float] = None
    ratio_exact: Optional[str] = None
    product_histogram: dict[str, int] = Field(default_factory=dict)
    z_histogram: dict[str, int] = Field(default_factory=dict)
    m_cutoff: int = DEFAULT_M_CUTOFF
    below_cutoff: int = 0
    anomalies: list[dict] = Field(default_factory=list)
    stabilizer_survey: dict = Field(default_factory=dict)
    wall_time: float = 0.0
    config_hash: str = ""

    def to_json(self) -> dict:
        return self.model_dump(mode="json")

    def fingerprint(self) -> str:
        """Hash del contenido sin el tiempo de ejecucion."""
        payload = self.model_dump(mode="json", exclude={"wall_time"})
        return hashlib.sha256(json.dumps(payload, sort_keys=True, default=str).encode("utf-8")).hexdigest()

    def csv_row(self) -> dict:
        lo, hi = (self.predicted + [None, None])[:2]
        return {
            "X": self.X,
            "r": "all" if self.r is None else self.r,
            "empirical": self.empirical,
            "predicted_lo": lo,
            "predicted_hi": hi,
            "ratio": self.ratio,
            "anomalies": len(self.anomalies),
        }


# =============================================================================
# CONTEOS LOCALES RAPIDOS (n = 3)
# =============================================================================
def _valuation(d: int, p: int) -> int:
    d = abs(d)
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    return v


def _cubic_grades(coeffs: tuple, p: int, v: int, cond: Optional[PrimeCondition]) -> Optional[dict[int, int]]:
    """{2e: cuenta} en p, o None si la condicion necesita plantillas completas."""
    if cond is not None and cond.kind == "residues":
        return None
    if cond is not None and cond.kind == "inv-in" and not cond.admits_poly(coeffs):
        return {}
    units = cond is not None and (cond.kind == "unit-lambda" or cond.unit_lambda)
    if v <= 1 and not units:
        return {0: 1}
    hist: dict[int, int] = defaultdict(int)
    for e in cubic_exponents(coeffs, p, 0 if units else v):
        hist[2 * e] += 1
    return dict(hist)


def _combine(combined: dict[int, int], local: dict[int, int], p: int) -> dict[int, int]:
    step: dict[int, int] = defaultdict(int)
    for z, count in combined.items():
        for grade, local_count in local.items():
            step[z * p ** grade] += count * local_count
    return {z: c for z, c in step.items() if c}


class _Tally:
    """Acumulador de un bloque; se mezcla en orden."""

    def __init__(self, m_cutoff: int):
        self.m_cutoff = m_cutoff
        self.stats = EnumerationStats()
        self.empirical = 0
        self.polynomials = 0
        self.products: Counter = Counter()
        self.zs: Counter = Counter()
        self.below = 0
        self.anomalies: list[dict] = []

    def add(self, graded: dict[int, int]) -> None:
        total = sum(graded.values())
        self.polynomials += 1
        self.empirical += total
        self.products[total] += 1
        for z, count in graded.items():
            self.zs[z] += count
            if z < self.m_cutoff ** 2:
                self.below += count

    def anomaly(self, coeffs: Sequence[int], exc: Exception) -> None:
        # la orbita de la seccion entera existe siempre: cota inferior 1
        self.polynomials += 1
        self.empirical += 1
        self.anomalies.append({
            "status": "error",
            "f": [int(c) for c in coeffs],
            "error": type(exc).__name__,
            "message": str(exc),
        })

    def merge(self, other: "_Tally") -> None:
        self.stats.merge(other.stats)
        self.empirical += other.empirical
        self.polynomials += other.polynomials
        self.products.update(other.products)
        self.zs.update(other.zs)
        self.below += other.below
        self.anomalies.extend(other.anomalies)


def _cubic_shard(X: int, f1: int, r: Optional[int], family: FamilySpec, caps: Caps, m_cutoff: int) -> _Tally:
    tally = _Tally(m_cutoff)
    ranges = coefficient_ranges(3, X)
    f3 = np.arange(ranges[2].start, ranges[2].stop, dtype=np.int64)
    conditioned = family.conditioned_primes()
    for f2 in ranges[1]:
        disc = (-27 * f3 * f3 + (18 * f1 * f2 - 4 * f1 ** 3) * f3 + (f1 * f1 * f2 * f2 - 4 * f2 ** 3))
        tally.stats.candidates += len(f3)
        nonzero = disc != 0
        tally.stats.degenerate += int((~nonzero).sum())
        keep = nonzero if r is None else nonzero & ((disc > 0) if r == 3 else (disc < 0))
        tally.stats.filtered += int((nonzero & ~keep).sum())
        bad: dict[int, list[int]] = defaultdict(list)
        limit = math.isqrt(int(np.abs(disc).max()))
        for p in primerange(2, limit + 1):
            for idx in np.flatnonzero(keep & (disc % (p * p) == 0)):
                bad[int(idx)].append(int(p))
        for idx in np.flatnonzero(keep):
            d = int(disc[idx])
            coeffs = (f1, f2, int(f3[idx]))
            primes = sorted(set(bad.get(int(idx), [])) | set(conditioned))
            try:
                graded = {1: 1}
                for p in primes:
                    cond = family.condition_at(p)
                    local = _cubic_grades(coeffs, p, _valuation(d, p), cond)
                    if local is None:
                        local = orbit_count_graded(MonicPoly.of(coeffs), p, family, caps)
                    graded = _combine(graded, local, p)
            except OrbitCountError as exc:
                tally.anomaly(coeffs, exc)
                continue
            tally.add(graded)
    return tally


def _generic_shard(n: int, X: int, f1: int, r: Optional[int], family: FamilySpec, caps: Caps,
                   m_cutoff: int, parity_filter: bool) -> _Tally:
    tally = _Tally(m_cutoff)
    for f in enumerate_shard(n, X, f1, r, parity_filter, tally.stats):
        try:
            graded = global_graded(f, family, caps)
        except (OrbitCountError, ValueError) as exc:
            tally.anomaly(f.coeffs, exc)
            continue
        tally.add(graded)
    return tally


def _run_shard(n: int, X: int, f1: int, r: Optional[int], family: FamilySpec, caps: Caps,
               m_cutoff: int, parity_filter: bool) -> _Tally:
    if n == 3:
        return _cubic_shard(X, f1, r, family, caps, m_cutoff)
    return _generic_shard(n, X, f1, r, family, caps, m_cutoff, parity_filter)


# =============================================================================
# ENCUESTA DE ESTABILIZADORES
# =============================================================================
def stabilizer_survey(n: int, X: int, r: Optional[int], caps: Caps, size: int = SURVEY_SIZE) -> dict:
    """Primeros f del estrato: estabilizador de sigma_0(f) en P(F_p), p el menor primo impar con p no | disc."""
    checked = 0
    nontrivial = []
    for f in enumerate_invariants(n, X, r):
        if checked >= size:
            break
        d = int(poly_disc(f))
        p = next((q for q in SURVEY_PRIMES if d % q and p_order(n, q) <= caps.fiber_cap), None)
        if p is None:
            continue
        checked += 1
        stab = stabilizer_fp(sigma0(f.over(IntegersMod(p))), caps)
        if len(stab) != 1:
            nontrivial.append({"f": [int(c) for c in f.coeffs], "p": p, "order": len(stab)})
    return {"checked": checked, "nontrivial": nontrivial}


# =============================================================================
# CENSO
# =============================================================================
def _predicted(n: int, r: Optional[int], X: int, family: FamilySpec, samples: int, seed: int, caps: Caps):
    table = volume_table(n, samples, seed)
    strata = valid_root_counts(n) if r is None else [r]
    lo, hi = Fraction(0), Fraction(0)
    for stratum in strata:
        a, b = predicted_family_count(n, stratum, X, family, volume=table[stratum], caps=caps)
        lo, hi = lo + a, hi + b
    return lo, hi


def census(
    n: int,
    r: Optional[int],
    X: int,
    family: Optional[FamilySpec] = None,
    caps: Optional[Caps] = None,
    threads: Optional[int] = None,
    samples: int = 200_000,
    seed: int = 0,
    m_cutoff: int = DEFAULT_M_CUTOFF,
    parity_filter: bool = True,
    predict: bool = True,
    survey: bool = True,
    run_config: Optional[RunConfig] = None,
) -> CensusReport:
    caps = caps or Caps()
    family = family or FamilySpec.full()
    if n > caps.census_max_n:
        raise InstanceTooLarge(f"censo exhaustivo solo hasta n = {caps.census_max_n}")
    if r is not None and r not in valid_root_counts(n):
        raise ValueError(f"r={r} no es valido para n={n}")
    family.check_invariance(n)
    started = time.time()

    keys = shard_keys(n, X, parity_filter)
    jobs = threads or settings.threads
    logger.info(f"Censo n={n}, r={r}, X={X}, familia '{family.name}': {len(keys)} bloques en {jobs} procesos")
    parts = Parallel(n_jobs=min(jobs, len(keys)))(
        delayed(_run_shard)(n, X, f1, r, family, caps, m_cutoff, parity_filter) for f1 in keys
    )
    tally = _Tally(m_cutoff)
    for part in parts:
        tally.merge(part)

    report = CensusReport(
        n=n, r=r, X=X, family=family.name,
        empirical=tally.empirical, polynomials=tally.polynomials,
        candidates=tally.stats.candidates, degenerate=tally.stats.degenerate, filtered=tally.stats.filtered,
        product_histogram={str(k): v for k, v in sorted(tally.products.items())},
        z_histogram={str(k): v for k, v in sorted(tally.zs.items())},
        m_cutoff=m_cutoff, below_cutoff=tally.below, anomalies=tally.anomalies,
    )
    if predict:
        lo, hi = _predicted(n, r, X, family, samples, seed, caps)
        report.predicted = interval_str((lo, hi))
        mid = (lo + hi) / 2
        if mid:
            exact = Fraction(report.empirical) / mid
            report.ratio, report.ratio_exact = float(exact), f"{exact.numerator}/{exact.denominator}"
    if survey:
        report.stabilizer_survey = stabilizer_survey(n, X, r, caps)
        for item in report.stabilizer_survey["nontrivial"]:
            report.anomalies.append({"status": "error", "error": "NontrivialStabilizer", **item})

    config = run_config or RunConfig(subcommand="census", n=n, r=r, x=X, samples=samples, seed=seed, caps=caps)
    report.config_hash = config.config_hash()
    report.wall_time = round(time.time() - started, 3)
    logger.info(f"Censo X={X}: empirico {report.empirical}, predicho {report.predicted}, razon {report.ratio}")
    return report


def census_sweep(n: int, r: Optional[int], xs: Sequence[int], **kwargs) -> list[CensusReport]:
    return [census(n, r, X, **kwargs) for X in xs]


def sweep_frame(reports: Sequence[CensusReport]) -> pd.DataFrame:
    columns = ["X", "r", "empirical", "predicted_lo", "predicted_hi", "ratio", "anomalies"]
    return pd.DataFrame([rep.csv_row() for rep in reports], columns=columns)
