import math
from fractions import Fraction

import numpy as np
import pytest

from src.archimedean.constants import (
    constant_Cfin,
    constant_Cinf,
    family_ratio,
    height_exponent,
    predicted_count,
    predicted_family_count,
)
from src.archimedean.slices import slice_sum, slice_values_below, tail_over_threshold
from src.archimedean.volume import real_root_counts, volume_table, volume_Vr
from src.exceptions import InvalidParity
from src.local.families import FamilySpec


@pytest.fixture(scope="module")
def cubic_volume():
    return volume_Vr(3, 1, 20_000, seed=11)


# =============================================================================
# SUMAS DE CORTE
# =============================================================================
def test_slice_sum_cubic():
    result = slice_sum(3, 1000)
    assert abs(float(result.partial[0]) - math.pi ** 2 / 6) < 1e-3
    assert result.total[0] <= Fraction(math.pi ** 2 / 6) <= result.total[1]
    assert 0 < result.tail < Fraction(1, 999)
    with pytest.raises(ValueError):
        slice_sum(3, 0)


@pytest.mark.parametrize("n", range(3, 9))
def test_slice_sum_matches_finite_constant(n):
    total = slice_sum(n, 200).total
    cfin = constant_Cfin(n, 1000)
    assert total[1] - total[0] < Fraction(1, 1000)
    assert total[0] <= cfin[1] and cfin[0] <= total[1]


def test_slice_values_below():
    assert sorted(slice_values_below(3, 10)) == [1, 4, 9]
    assert sorted(slice_values_below(4, 10)) == [1, 4, 4, 9, 9]


@pytest.mark.parametrize("m", [10, 100, 1000])
def test_tail_over_threshold_decays(m):
    lo, hi = tail_over_threshold(4, m)
    assert lo > -Fraction(1, 10 ** 9)
    assert hi * m <= 20


@pytest.mark.slow
def test_tail_over_threshold_large():
    assert tail_over_threshold(4, 10_000)[1] * 10_000 <= 20


# =============================================================================
# VOLUMENES
# =============================================================================
def test_real_root_counts():
    coeffs = np.array([[0.0, -1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.5]])
    counts, _ = real_root_counts(coeffs)
    assert counts.tolist() == [3, 1, 1]


def test_real_root_counts_agree_with_sturm():
    coeffs = np.random.default_rng(3).uniform(-1.0, 1.0, size=(200, 3))
    fast, _ = real_root_counts(coeffs)
    exact, routed = real_root_counts(coeffs, exact=True)
    assert routed == 200
    assert (fast == exact).all()
    near_double = np.array([[0.0, -3.0, 2.0 - 2.0 ** -40]])
    assert real_root_counts(near_double)[0].tolist() == [3]
    assert real_root_counts(near_double, exact=True)[0].tolist() == [3]


def test_volume_table_sums_to_cube():
    table = volume_table(3, 20_000, seed=1)
    assert set(table) == {1, 3}
    assert sum(v.estimate for v in table.values()) == pytest.approx(8.0)
    assert all(v.half_width > 0 for v in table.values())
    assert volume_table(4, 20_000, seed=1)[0].estimate > 0


def test_volume_input_checks():
    with pytest.raises(ValueError):
        volume_table(3, 5_000, seed=0)
    with pytest.raises(InvalidParity):
        volume_Vr(3, 2, 20_000, seed=0)


def test_volume_independent_of_threads():
    one = volume_table(3, 120_000, seed=5, threads=1)
    two = volume_table(3, 120_000, seed=5, threads=2)
    assert {r: v.estimate for r, v in one.items()} == {r: v.estimate for r, v in two.items()}


# =============================================================================
# CONSTANTES Y PREDICCION
# =============================================================================
def test_height_exponent():
    assert height_exponent(3) == 6
    assert height_exponent(4) == 10


def test_predicted_count_scaling(cubic_volume):
    cfin = constant_Cfin(3, 1000)
    assert predicted_count(3, 1, 0, volume=cubic_volume, cfin=cfin) == (0, 0)
    lo1, hi1 = predicted_count(3, 1, 5, volume=cubic_volume, cfin=cfin)
    lo2, hi2 = predicted_count(3, 1, 10, volume=cubic_volume, cfin=cfin)
    assert lo2 == lo1 * 2 ** 6
    assert hi2 == hi1 * 2 ** 6
    with pytest.raises(ValueError):
        predicted_count(3, 1, -1, volume=cubic_volume, cfin=cfin)


def test_cinf_scaling_for_even_n():
    volume = volume_Vr(4, 2, 20_000, seed=2)
    lo, hi = volume.interval()
    assert constant_Cinf(4, 2, volume) == (lo / 4, hi / 4)
    with pytest.raises(ValueError):
        constant_Cinf(4, 0, volume)


def test_family_prediction(cubic_volume):
    family = FamilySpec.unit_lambda_at(5)
    assert family_ratio(3, family) == Fraction(24, 25)
    assert family_ratio(3, FamilySpec.full()) == 1
    cfin = constant_Cfin(3, 1000)
    full = predicted_count(3, 1, 4, volume=cubic_volume, cfin=cfin)
    lo, hi = predicted_family_count(3, 1, 4, family, volume=cubic_volume, cfin=cfin)
    assert (lo, hi) == (full[0] * Fraction(24, 25), full[1] * Fraction(24, 25))
