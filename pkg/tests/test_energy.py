import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdlab import energy, measures, oracles
from fdlab.measures import CylinderSet, DyadicMeasure

from conftest import dyadic_measures


@pytest.mark.parametrize("depth", [6, 8, 11])
def test_lebesgue_half(depth):
    res = energy.riesz_energy(measures.lebesgue(depth), 0.5)
    assert abs(res.value - 8 / 3) < 1e-9


@pytest.mark.parametrize("s", [0.1, 0.3, 0.5, 0.8, 0.95])
def test_lebesgue_closed_form_vs_quadrature(s):
    closed = 2 / ((1 - s) * (2 - s))
    assert abs(energy.riesz_energy(measures.lebesgue(7), s).value - closed) < 1e-9 * closed
    assert abs(oracles.lebesgue_energy_by_quadrature(s) - closed) < 1e-7 * closed


def test_kernel_vs_quadrature_sample(rng):
    for _ in range(300):
        s = rng.uniform(0.05, 0.95)
        d = int(rng.integers(1, 21))
        p, q = (int(x) for x in rng.integers(0, 1 << d, 2))
        ref = oracles.kernel_by_quadrature(p, q, d, s)
        assert abs(energy.pair_kernel(p, q, d, s) - ref) < 1e-8 * ref


@pytest.mark.parametrize("s", [0.2, 0.5, 0.9])
def test_series_branch_continuity(s):
    d = np.array([15.0, 16.0, 17.0, 1000.0, 1e6])
    got = energy.cell_kernel(d, s)
    ref = [oracles.kernel_by_quadrature(0, int(x), 0, s) for x in d]
    np.testing.assert_allclose(got, ref, rtol=1e-10)


def test_separated_cells_cross_term():
    depth = 12
    w = np.zeros(1 << depth)
    w[0] = w[-1] = 1.0
    s = 0.5
    res = energy.riesz_energy(DyadicMeasure(depth, w), s)
    h = 2.0 ** -depth
    same = 2 * float(energy.cell_kernel(0.0, s)) * h ** -s
    cross = 2 * (1 - h) ** -s
    assert abs(res.value - same - cross) < 1e-6 * cross
    assert math.isclose(res.diagonal_share, same / res.value, rel_tol=1e-12)


@given(dyadic_measures(max_depth=9, sparse=True), st.floats(0.05, 0.95))
def test_reflection_invariance(mu, s):
    flipped = DyadicMeasure(mu.depth, mu.weights[::-1])
    a = energy.riesz_energy(mu, s).value
    b = energy.riesz_energy(flipped, s).value
    assert math.isclose(a, b, rel_tol=1e-10)


@given(dyadic_measures(max_depth=8, sparse=True), st.floats(0.05, 0.9), st.floats(0.01, 0.09))
def test_monotone_in_s(mu, s, ds):
    assert energy.riesz_energy(mu, s).value <= energy.riesz_energy(mu, s + ds).value * (1 + 1e-12)


@given(dyadic_measures(max_depth=8, sparse=True), st.floats(0.05, 0.95))
def test_positive(mu, s):
    res = energy.riesz_energy(mu, s)
    assert res.value > 0 and 0 < res.diagonal_share <= 1


@pytest.mark.parametrize("depth", [10, 13])
def test_pairs_and_fft_agree(depth, rng):
    w = rng.random(1 << depth) * (rng.random(1 << depth) < 0.3)
    mu = DyadicMeasure(depth, w)
    ref = energy.riesz_energy(mu, 0.7, method="fft").value
    assert math.isclose(energy.riesz_energy(mu, 0.7, method="pairs").value, ref, rel_tol=1e-10)


@pytest.mark.parametrize("coarse", [6, 9, 12])
def test_structured_matches_fft_on_digit_set(coarse):
    from fdlab import construction

    spec = construction.validate_parameters(0.8, 0.3, (2, 5, 10), depth=14)
    mu = construction.candidate_measure(spec, "lebesgue-A")
    ref = energy.riesz_energy(mu, 0.8, method="fft").value
    got = energy.riesz_energy(mu, 0.8, method="structured", coarse_depth=coarse).value
    assert math.isclose(got, ref, rel_tol=1e-10)


def test_structured_rejects_unstructured(rng):
    mu = DyadicMeasure(12, rng.random(1 << 12))
    with pytest.raises(ValueError):
        energy.riesz_energy(mu, 0.5, method="structured", coarse_depth=8)


def test_invalid_s():
    with pytest.raises(ValueError):
        energy.riesz_energy(measures.lebesgue(3), 0.0)
    with pytest.warns(energy.EnergyWarning):
        assert energy.riesz_energy(measures.lebesgue(3), 1.0).value == math.inf


def test_energy_json():
    data = json.loads(energy.riesz_energy(measures.lebesgue(6), 0.5).to_json())
    assert set(data) == {"s", "value", "diagonal_share"}


def test_cell_bound_examples():
    assert energy.energy_cell_lower_bound(0.0, 5, 0.1, 0.5) == 0.0
    assert energy.energy_cell_lower_bound(1.0, 1, 1.0, 0.7) == 1.0
    s, lj, mj, mk, a = 0.8, 20, 6, 2, 0.3
    got = energy.energy_cell_lower_bound(a, 2 ** (lj - mk), 2.0 ** -(lj + mj), s)
    assert math.isclose(got, 2 ** (s * (lj + mj)) * a * a / 2 ** (lj - mk), rel_tol=1e-14)


def test_domination_lebesgue_depth4():
    rep = energy.verify_energy_dominates_bound(measures.lebesgue(4), CylinderSet.full(4), 0.5)
    assert math.isclose(rep.energy, 8 / 3, rel_tol=1e-12)
    assert math.isclose(rep.bound, 0.25, rel_tol=1e-14)
    assert rep.holds


def test_domination_zero_mass_set():
    mu = DyadicMeasure(3, [1, 0, 0, 0, 0, 0, 0, 0])
    rep = energy.verify_energy_dominates_bound(mu, CylinderSet(3, [5]), 0.5)
    assert rep.bound == 0.0 and rep.holds


@given(dyadic_measures(min_depth=1, max_depth=8, sparse=True), st.floats(0.05, 0.95), st.data())
def test_unconditional_domination(mu, s, data):
    depth = data.draw(st.integers(0, mu.depth))
    cells = data.draw(st.lists(st.integers(0, (1 << depth) - 1), min_size=1, max_size=8))
    rep = energy.verify_energy_dominates_bound(mu, CylinderSet(depth, cells), s)
    assert rep.energy >= rep.bound


def test_domination_failure_raises():
    fake = energy.EnergyResult(0.5, 0.1, 1.0)
    with pytest.raises(AssertionError):
        energy.verify_energy_dominates_bound(measures.lebesgue(2), CylinderSet(2, [0]), 0.5, energy=fake)
