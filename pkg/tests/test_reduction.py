import pytest
from hypothesis import assume, given, strategies as st

from src.exactmath.poly import MonicPoly, is_degenerate
from src.exactmath.rings import QQ, ZZ, IntegersMod, PadicTrunc
from src.exceptions import NonUnitDiscriminant, ZeroSliceEntry
from src.groups.elements import act, identity, p_order, random_P
from src.local.fibers import fiber_points
from src.reduction.canonical import canonical_form_Z, equivalent_Z
from src.reduction.field import reduce_over_field, reduce_stable
from src.reduction.oracles import UnionFind, find_orbits, orbit_bfs_oracle, p_generators, stabilizer_fp
from src.representation.invariants import inv, sigma0
from src.representation.matrices import ReducibleMatrix, SymMatrix

coefficient = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def test_section_reduces_with_identity():
    f = MonicPoly.of([1, -2, 3], QQ)
    result = reduce_over_field(sigma0(f))
    assert result.g == identity(3)
    assert result.target == sigma0(f)


@pytest.mark.parametrize("n", [3, 4, 5])
@given(data=st.data())
def test_round_trip_recovers_group_element(n, data):
    f = MonicPoly.of(data.draw(st.lists(coefficient, min_size=n, max_size=n)), QQ)
    assume(not is_degenerate(f))
    h = random_P(n, QQ, 3, data.draw(st.integers(0, 10_000)))
    B = act(h, sigma0(f))
    result = reduce_over_field(B)
    assert result.target == sigma0(f)
    assert result.g == h.inverse()
    assert act(result.g, B) == sigma0(f)


def test_whole_fiber_over_f5_reduces_to_section():
    ring = IntegersMod(5)
    coeffs = [0, 1, 1]
    f = MonicPoly.of(coeffs, ring)
    points = list(fiber_points(coeffs, 5))
    assert len(points) == p_order(3, 5)
    for rows in points:
        result = reduce_over_field(ReducibleMatrix(n=3, rows=rows, ring=ring))
        assert result.target == sigma0(f)


def test_two_adic_pattern_tracks_parity():
    ring = PadicTrunc(2, 3)
    B = SymMatrix.from_rows([[0, 1, 1], [1, 2, 3], [1, 3, 5]], ring)
    f = inv(B)
    result = reduce_over_field(B)
    assert result.mod2_pattern == (int(f.coeff(2)) % 2,)
    assert result.target.entry(1, 3) == int(f.coeff(2)) % 2
    assert inv(result.target) == f


def test_reduce_requires_unit_discriminant():
    B = SymMatrix.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 0]], IntegersMod(3))
    with pytest.raises(NonUnitDiscriminant):
        reduce_over_field(B)


def test_reduce_stable_over_padics():
    B = SymMatrix.from_rows([[0, 1, 2], [1, 4, 1], [2, 1, 3]], ZZ)
    low = reduce_stable(B, 5, 2)
    assert inv(low.target) == inv(B.over(PadicTrunc(5, 2)))


# =============================================================================
# FORMA CANONICA SOBRE Z
# =============================================================================
def _integer_matrix(n, values):
    entries = {(k, n - k): values[k - 1] for k in range(1, n // 2 + 1)}
    free = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1) if i + j > n]
    entries.update(dict(zip(free, values[n // 2:])))
    return ReducibleMatrix.from_entries(n, entries, ZZ)


@pytest.mark.parametrize("n", [3, 4])
@given(data=st.data())
def test_canonical_form_is_orbit_invariant(n, data):
    size = n // 2 + sum(1 for i in range(1, n + 1) for j in range(i, n + 1) if i + j > n)
    values = data.draw(st.lists(st.integers(-4, 4), min_size=size, max_size=size))
    assume(all(values[: n // 2]))
    B = _integer_matrix(n, values)
    assume(not is_degenerate(inv(B)))
    rep = canonical_form_Z(B)
    assert act(rep.witness, B) == rep.matrix
    assert canonical_form_Z(rep.matrix).matrix == rep.matrix
    g = random_P(n, ZZ, 3, data.draw(st.integers(0, 10_000)))
    assert canonical_form_Z(act(g, B)).key() == rep.key()
    assert equivalent_Z(B, act(g, B))


def test_inequivalent_by_lambda():
    B1 = ReducibleMatrix.from_entries(3, {(1, 2): 1, (2, 2): 1, (3, 3): 1}, ZZ)
    B2 = ReducibleMatrix.from_entries(3, {(1, 2): 2, (2, 2): 1, (3, 3): 1}, ZZ)
    assert not equivalent_Z(B1, B2)


def test_canonical_form_rejects_zero_slicing():
    B = ReducibleMatrix.from_entries(3, {(2, 2): 1, (3, 3): 1}, ZZ)
    with pytest.raises(ZeroSliceEntry):
        canonical_form_Z(B)


def test_bfs_closure_shares_canonical_form():
    B = ReducibleMatrix.from_entries(3, {(1, 2): 1, (2, 2): 1, (2, 3): 1, (3, 3): -1}, ZZ)
    key = canonical_form_Z(B).key()
    closure = orbit_bfs_oracle(B, entry_bound=2)
    assert B in closure
    assert all(canonical_form_Z(C).key() == key for C in closure)


# =============================================================================
# ORACULOS SOBRE F_p
# =============================================================================
def test_orbit_and_stabilizer_over_f3():
    ring = IntegersMod(3)
    f = MonicPoly.of([0, 2, 1], ring)
    B = sigma0(f)
    assert len(orbit_bfs_oracle(B)) == p_order(3, 3) == 6
    assert len(stabilizer_fp(B)) == 1


def test_orbit_and_stabilizer_over_f5_even():
    ring = IntegersMod(5)
    f = MonicPoly.of([0, 0, 1, 1], ring)
    B = sigma0(f)
    orbit = orbit_bfs_oracle(B)
    assert len(orbit) == p_order(4, 5)
    assert len(orbit) == sum(1 for _ in fiber_points([0, 0, 1, 1], 5))
    assert len(stabilizer_fp(B)) == 1


def test_bfs_rejects_zero_lambda():
    B = ReducibleMatrix.from_entries(3, {(2, 2): 1}, IntegersMod(3))
    with pytest.raises(ZeroSliceEntry):
        orbit_bfs_oracle(B)


def test_union_find_partitions_fiber():
    ring = IntegersMod(3)
    points = list(fiber_points([0, 2, 1], 3))
    orbits = find_orbits(points, p_generators(3, ring))
    assert len(orbits) == 1
    uf = UnionFind(range(4))
    uf.union(0, 1)
    uf.union(2, 3)
    assert len(uf) == 2
    assert uf.find(1) == uf.find(0)
