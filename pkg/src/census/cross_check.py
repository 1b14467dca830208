"""
Verificacion cruzada del censo para n = 3 por enumeracion directa de matrices.

Cada P(Z)-orbita reducible tiene un representante
    B = [[0, s, t], [s, a, b], [t, b, c]],  s > 0, 0 <= t < 2s,
con inv(B) = (x + a)(x + t)^2 - 2 s b (x + t) + s^2 c. Fijados (s, t, f_1),
a queda determinado y b, c recorren los intervalos que dejan |f_i| < X^i.
"""
import logging
import math
from typing import Optional

from src.config import Caps
from src.exceptions import BoxTooLarge, DegenerateInput
from src.exactmath.rings import ZZ
from src.reduction.canonical import canonical_form_Z
from src.representation.matrices import SymMatrix
from src.census.census import census

logger = logging.getLogger(__name__)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _cubic_disc(f1: int, f2: int, f3: int) -> int:
    return -27 * f3 * f3 + (18 * f1 * f2 - 4 * f1 ** 3) * f3 + f1 * f1 * f2 * f2 - 4 * f2 ** 3


def direct_box_size(X: int) -> int:
    """Cota del numero de matrices que recorre la enumeracion directa."""
    total = 0
    for s in range(1, math.isqrt(54 * X ** 6 - 1) + 1):
        betas = 2 * X * X // (2 * s) + 1
        gammas = 2 * X ** 3 // (s * s) + 1
        total += 2 * s * (2 * X - 1) * betas * gammas
    return total


def direct_orbits(X: int, r: Optional[int] = None, caps: Optional[Caps] = None) -> set[tuple]:
    """Claves canonicas de las orbitas reducibles con H(inv B) < X en el estrato r."""
    caps = caps or Caps()
    if X < 1:
        raise ValueError("X debe ser un entero positivo")
    size = direct_box_size(X)
    if size > caps.box_cap:
        raise BoxTooLarge(f"enumeracion directa de ~{size} matrices > {caps.box_cap}")
    b1, b2, b3 = X, X ** 2, X ** 3
    keys: set[tuple] = set()
    for s in range(1, math.isqrt(54 * X ** 6 - 1) + 1):
        for t in range(2 * s):
            for f1 in range(-(b1 - 1), b1):
                a = f1 - 2 * t
                head = t * t + 2 * a * t
                for b in range(_ceil_div(head - (b2 - 1), 2 * s), (head + b2 - 1) // (2 * s) + 1):
                    f2 = head - 2 * s * b
                    base = a * t * t - 2 * s * b * t
                    for c in range(_ceil_div(-(b3 - 1) - base, s * s), (b3 - 1 - base) // (s * s) + 1):
                        f3 = base + s * s * c
                        d = _cubic_disc(f1, f2, f3)
                        if d == 0:
                            continue
                        if r is not None and (d > 0) != (r == 3):
                            continue
                        B = SymMatrix.from_rows([[0, s, t], [s, a, b], [t, b, c]], ZZ)
                        try:
                            keys.add(canonical_form_Z(B).key())
                        except DegenerateInput:
                            continue
    logger.info(f"Enumeracion directa X={X}, r={r}: {len(keys)} orbitas")
    return keys


def cross_check_direct(n: int, X: int, r: Optional[int] = None, caps: Optional[Caps] = None) -> dict:
    """Compara el censo por productos locales con la enumeracion directa."""
    if n != 3:
        return {"status": "error", "message": "la enumeracion directa solo esta implementada para n = 3"}
    caps = caps or Caps()
    direct = len(direct_orbits(X, r, caps))
    report = census(3, r, X, caps=caps, threads=1, predict=False, survey=False)
    ok = direct == report.empirical
    result = {
        "status": "success" if ok else "error",
        "n": n,
        "X": X,
        "r": r,
        "direct": direct,
        "census": report.empirical,
        "anomalies": report.anomalies,
    }
    if not ok:
        logger.error(f"Verificacion cruzada fallida en X={X}: directa {direct}, censo {report.empirical}")
    return result
