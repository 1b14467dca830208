from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from src.exactmath.rings import QQ, ZZ, IntegersMod
from src.exceptions import HalvingError
from src.groups.elements import (
    GroupElem,
    TorusCoords,
    act,
    action_jacobian,
    enumerate_P,
    gamma_group,
    haar_delta,
    identity,
    is_in_P,
    lambda_character,
    n_coords,
    n_element,
    p_order,
    random_P,
    raw_gamma_vectors,
    torus_elem,
    torus_vector,
    unipotent_gen,
)
from src.representation.invariants import lambda_
from src.representation.matrices import ReducibleMatrix, SymMatrix, antidiagonal_rows, mat_mul, transpose

small = st.fractions(min_value=-9, max_value=9, max_denominator=5)


def _preserves_form(g: GroupElem) -> bool:
    a = antidiagonal_rows(g.n, g.ring)
    lhs = mat_mul(mat_mul(transpose(g.rows), a, g.ring), g.rows, g.ring)
    return lhs == tuple(tuple(g.ring.reduce(g.mu * x) for x in row) for row in a)


def test_identity_acts_trivially():
    B = SymMatrix.from_entries(3, {(1, 2): 2, (2, 2): 5, (3, 3): -1}, QQ)
    assert act(identity(3), B) == B


def test_unipotent_n3_shape():
    g = unipotent_gen(2, 1, Fraction(3), 3)
    assert g.rows[1][0] == 3
    assert g.rows[2][1] == -3
    assert g.rows[2][0] == Fraction(-9, 2)
    assert is_in_P(g)
    assert _preserves_form(g)
    assert g.det() == 1
    assert unipotent_gen(2, 1, 0, 3) == identity(3)


@given(v=small, w=small)
def test_unipotent_one_parameter(v, w):
    for n, (i, j) in ((3, (2, 1)), (4, (3, 1)), (5, (3, 2))):
        assert unipotent_gen(i, j, v, n) * unipotent_gen(i, j, w, n) == unipotent_gen(i, j, v + w, n)


def test_middle_parameter_must_be_even_over_integers():
    with pytest.raises(HalvingError):
        unipotent_gen(2, 1, 1, 3, ZZ)
    assert is_in_P(unipotent_gen(2, 1, 2, 3, ZZ))
    with pytest.raises(IndexError):
        unipotent_gen(1, 1, 1, 3)


@pytest.mark.parametrize("n", [3, 4, 5])
@given(seed=st.integers(0, 10_000))
def test_action_composes(n, seed):
    g = random_P(n, QQ, 4, seed)
    h = random_P(n, QQ, 4, seed + 1)
    B = ReducibleMatrix.from_entries(n, {(k, n - k): k + 1 for k in range(1, n)} | {(n, n): seed % 11}, QQ)
    assert act(g * h, B) == act(g, act(h, B))
    assert act(g.inverse(), act(g, B)) == B
    assert _preserves_form(g)


def test_torus_examples():
    s = TorusCoords(s=(Fraction(3),))
    assert torus_vector(s, 3) == [Fraction(1, 3), 1, 3]
    assert haar_delta(s, 3) == Fraction(1, 3)
    assert torus_elem(TorusCoords(s=(1, 1)), 5) == identity(5)
    assert haar_delta(TorusCoords(s=(1, 1)), 5) == 1
    t = torus_vector(TorusCoords(s=(4, 1)), 4)
    assert t == [Fraction(1, 2), 2, Fraction(1, 2), 2]
    assert all(t[i] * t[3 - i] == 1 for i in range(4))


def test_gamma_group():
    for n in (3, 4, 5):
        assert len(raw_gamma_vectors(n)) == 2 ** ((n + 1) // 2)
        group = gamma_group(n)
        assert identity(n, ZZ) in group
        assert all(_preserves_form(g) for g in group)


def test_p_order_matches_enumeration_size():
    assert p_order(3, 3) == 6
    assert p_order(3, 5) == 20
    assert p_order(4, 3) == 4 * 9


@pytest.mark.parametrize("p", [3, 5])
def test_enumerated_parabolic_over_finite_field(p):
    group = list(enumerate_P(3, IntegersMod(p)))
    assert len({(g.rows, g.mu) for g in group}) == len(group) == p_order(3, p) == p * (p - 1)
    assert all(is_in_P(g) and _preserves_form(g) for g in group)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gamma_keeps_unipotent_sizes(n):
    values = {coord: Fraction(k + 2, k + 1) * (-1) ** k for k, coord in enumerate(n_coords(n))}
    u = n_element(values, n, QQ)
    for rho in gamma_group(n, QQ):
        conj = mat_mul(mat_mul(rho.rows, u.rows, QQ), rho.rows, QQ)
        assert all(abs(a) == abs(b) for row_a, row_b in zip(conj, u.rows) for a, b in zip(row_a, row_b))


def test_lambda_character_on_torus():
    # el cambio de lambda por el jacobiano es delta(s)^{-1}
    for n, s in ((3, (Fraction(2),)), (5, (Fraction(2), Fraction(3)))):
        coords = TorusCoords(s=s)
        g = torus_elem(coords, n)
        assert lambda_character(g) == 1 / haar_delta(coords, n)


def test_lambda_character_even_degree():
    coords = TorusCoords(s=(4, 1))
    assert lambda_character(torus_elem(coords, 4)) == 1 / haar_delta(coords, 4) == 4
    u = n_element({(2, 1): 3, (3, 1): -2}, 4, QQ)
    assert lambda_character(u) == 1
    B = ReducibleMatrix.from_entries(4, {(1, 3): 2, (1, 4): 1, (2, 2): 3, (3, 3): 5, (4, 4): -1}, QQ)
    assert lambda_(act(u, B)) == lambda_(B) == 6


def test_lambda_changes_by_character():
    g = random_P(3, QQ, 3, 7)
    B = ReducibleMatrix.from_entries(3, {(1, 2): 3, (2, 2): 1, (2, 3): 2, (3, 3): 5}, QQ)
    ratio = lambda_(act(g, B)) / lambda_(B)
    d = g.diagonal()
    assert ratio == d[0] * d[1] / g.mu
    assert action_jacobian(identity(3)) == 1


def test_modular_group_elements():
    ring = IntegersMod(5)
    g = random_P(4, ring, 2, 3)
    assert is_in_P(g)
    assert g * g.inverse() == identity(4, ring)
