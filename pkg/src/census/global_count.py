"""
Conteo global por el principio local-global fuerte: el numero de
P(Z)-orbitas sobre f es prod_p c_p(f), y solo importan los p con p^2 | disc(f)
(mas los primos donde la familia impone condiciones).
"""
import logging
from collections import defaultdict
from typing import Optional

from sympy import factorint, isprime, pollard_rho

from src.config import Caps
from src.exactmath.poly import MonicPoly, poly_disc
from src.exactmath.rings import ZZ
from src.exceptions import DegenerateInput, FactorizationTimeout
from src.local.families import FamilySpec
from src.local.orbits import orbit_count_graded

logger = logging.getLogger(__name__)


def factor_discriminant(d: int, caps: Optional[Caps] = None) -> dict[int, int]:
    """Division por tentativa hasta trial_division_limit y rho con presupuesto."""
    caps = caps or Caps()
    d = abs(int(d))
    if d == 0:
        raise DegenerateInput("disc = 0")
    partial = factorint(d, limit=caps.trial_division_limit)
    factors: dict[int, int] = defaultdict(int)
    pending = []
    for p, e in partial.items():
        if p <= caps.trial_division_limit or isprime(p):
            factors[int(p)] += e
        else:
            pending.extend([int(p)] * e)
    while pending:
        m = pending.pop()
        if isprime(m):
            factors[m] += 1
            continue
        split = pollard_rho(m, max_steps=caps.rho_budget)
        if split is None:
            raise FactorizationTimeout(f"no se pudo factorizar {m}")
        pending.extend([int(split), m // int(split)])
    return dict(sorted(factors.items()))


def relevant_primes(f: MonicPoly, family: Optional[FamilySpec] = None, caps: Optional[Caps] = None) -> list[int]:
    """Primos con p^2 | disc(f) y primos condicionados por la familia."""
    factors = factor_discriminant(int(poly_disc(f)), caps)
    primes = {p for p, e in factors.items() if e >= 2}
    if family is not None:
        primes.update(family.conditioned_primes())
    return sorted(primes)


def global_graded(f: MonicPoly, family: Optional[FamilySpec] = None, caps: Optional[Caps] = None) -> dict[int, int]:
    """{|Z(B)|: numero de orbitas globales} combinando los conteos graduados locales."""
    if f.ring != ZZ:
        f = f.over(ZZ)
    combined = {1: 1}
    for p in relevant_primes(f, family, caps):
        local = orbit_count_graded(f, p, family, caps)
        step: dict[int, int] = defaultdict(int)
        for z, count in combined.items():
            for grade, local_count in local.items():
                step[z * p ** grade] += count * local_count
        combined = dict(step)
    return dict(sorted((z, c) for z, c in combined.items() if c))


def orbit_count_global(f: MonicPoly, family: Optional[FamilySpec] = None, caps: Optional[Caps] = None) -> int:
    total = sum(global_graded(f, family, caps).values())
    logger.debug(f"Orbitas globales sobre {list(f.coeffs)}: {total}")
    return total
