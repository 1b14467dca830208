"""
Oraculos por fuerza bruta: clausura BFS de una orbita, particion en orbitas
con union-find y estabilizadores sobre F_p.
"""
import itertools
import logging
from collections import deque
from typing import Hashable, Iterable, Optional

from src.config import Caps
from src.exactmath.rings import RingKind, RingTag, ZZ
from src.exceptions import BoxTooLarge, InstanceTooLarge, ZeroSliceEntry
from src.groups.elements import (
    GroupElem,
    enumerate_P,
    is_middle,
    n_coords,
    p_order,
    slicing_scaler,
    unipotent_gen,
    units_of,
)
from src.representation.invariants import lambda_
from src.representation.matrices import ReducibleMatrix, Rows, SymMatrix, reducible_coords, slicing_coords

logger = logging.getLogger(__name__)


class UnionFind:
    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}
        self.size = {x: 1 for x in self.parent}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        self.size[x] += self.size[y]
        del self.rank[y]

    def reps(self) -> set:
        return set(self.rank)

    def __len__(self) -> int:
        return len(self.rank)


# =============================================================================
# GENERADORES
# =============================================================================
def p_generators(n: int, ring: RingTag) -> list[GroupElem]:
    """
    Generadores de P(R): u~_{ij}(+-1) (+-2 en la fila central sobre Z y
    Z/2^k) y el toro de unidades sobre cada entrada de corte.
    """
    even_middle = ring.kind is RingKind.INTEGERS or (ring.is_modular and ring.modulus % 2 == 0)
    gens = []
    for i, j in n_coords(n):
        step = 2 if even_middle and is_middle(i, n) else 1
        for v in (step, -step):
            gens.append(unipotent_gen(i, j, v, n, ring))
    units = [u for u in units_of(ring) if u != ring.one]
    for k in range(n // 2):
        for u in units:
            scales = [ring.one] * (n // 2)
            scales[k] = u
            gens.append(slicing_scaler(n, scales, ring))
    return gens


def find_orbits(points: Iterable[Rows], gens: list[GroupElem]) -> dict[Rows, list[Rows]]:
    """Particion de un conjunto cerrado bajo los generadores."""
    space = list(points)
    members = set(space)
    uf = UnionFind(space)
    for g in gens:
        for x in space:
            y = g.act_rows(x)
            if y in members:
                uf.union(x, y)
    orbits: dict[Rows, list[Rows]] = {rep: [] for rep in uf.reps()}
    for x in space:
        orbits[uf.find(x)].append(x)
    return orbits


# =============================================================================
# BFS
# =============================================================================
def _in_box(rows: Rows, ring: RingTag, bound: Optional[int]) -> bool:
    if bound is None or ring.is_modular:
        return True
    return all(abs(x) <= bound for row in rows for x in row)


def orbit_bfs_oracle(
    B: SymMatrix,
    entry_bound: Optional[int] = None,
    caps: Optional[Caps] = None,
) -> set[ReducibleMatrix]:
    """Clausura de B bajo p_generators, cortada a la caja max|b_ij| <= entry_bound."""
    caps = caps or Caps()
    ring, n = B.ring, B.n
    if ring.is_zero(lambda_(B)):
        raise ZeroSliceEntry("lambda(B) = 0")
    if ring.kind is RingKind.INTEGERS and entry_bound is None:
        raise ValueError("sobre Z hace falta entry_bound")
    gens = p_generators(n, ring)
    start = B.rows
    seen = {start}
    queue = deque([start])
    while queue:
        rows = queue.popleft()
        for g in gens:
            image = g.act_rows(rows)
            if image in seen or not _in_box(image, ring, entry_bound):
                continue
            seen.add(image)
            if len(seen) > caps.box_cap:
                raise BoxTooLarge(f"la orbita supera {caps.box_cap} elementos")
            queue.append(image)
    logger.debug(f"BFS n={n} en {ring.name}: {len(seen)} elementos")
    return {ReducibleMatrix(n=n, rows=rows, ring=ring) for rows in seen}


def box_matrices(n: int, bound: int) -> list[Rows]:
    """Todas las matrices de W_0(Z) con entradas en [-bound, bound] y corte no nulo."""
    coords = reducible_coords(n)
    sliced = set(slicing_coords(n))
    ranges = [
        [v for v in range(-bound, bound + 1) if v != 0] if c in sliced else range(-bound, bound + 1)
        for c in coords
    ]
    return [ReducibleMatrix.from_coords(n, values, ZZ).rows for values in itertools.product(*ranges)]


# =============================================================================
# ESTABILIZADOR
# =============================================================================
def stabilizer_fp(B: SymMatrix, caps: Optional[Caps] = None) -> list[GroupElem]:
    """Elementos de P(F_p) que fijan B (enumeracion completa)."""
    caps = caps or Caps()
    ring, n = B.ring, B.n
    if not (ring.is_modular and ring.is_field):
        raise ValueError("stabilizer_fp requiere F_p")
    if p_order(n, ring.modulus) > caps.fiber_cap:
        raise InstanceTooLarge(f"#P(F_{ring.modulus}) supera el tope")
    return [g for g in enumerate_P(n, ring) if g.act_rows(B.rows) == B.rows]
