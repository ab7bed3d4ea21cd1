import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdlab import construction, fourier, measures
from fdlab.measures import CylinderSet, DyadicMeasure

from conftest import dyadic_measures


def test_restrict_full_set_is_identity():
    mu = measures.lebesgue(1)
    out = measures.restrict(mu, CylinderSet(1, [0, 1]))
    np.testing.assert_array_equal(out.weights, mu.weights)


def test_restrict_half():
    out = measures.restrict(measures.lebesgue(1), CylinderSet(1, [0]))
    assert out.mass == 0.5
    assert out.cells()[0].tolist() == [0]


def test_restrict_refines_coarse_measure():
    out = measures.restrict(measures.lebesgue(0), CylinderSet(3, [1, 5]))
    assert out.depth == 3
    assert out.exact_mass() == Fraction(1, 4)


def test_restrict_matches_enumeration_small_spec():
    spec = construction.validate_parameters(0.8, 0.3, (1,), depth=3)
    mu = construction.candidate_measure(spec, "lebesgue-A")
    a1 = construction.cylinder_decompose(spec, ["f-even", "block-1-zero"])
    brute = Fraction(0)
    for p in range(8):
        bits = format(p, "03b")
        if bits[1] == "0" and construction.classify_f(bits, spec) % 2 == 0:
            brute += Fraction(float(mu.weights[p]))
    assert mu.mass_of(a1, exact=True) == brute


@given(dyadic_measures(max_depth=9), st.data())
def test_restrict_mass_conservation(mu, data):
    mask = np.array(data.draw(st.lists(st.booleans(), min_size=1 << mu.depth, max_size=1 << mu.depth)))
    cset = CylinderSet.from_mask(mask)
    inside = measures.restrict(mu, cset).exact_mass()
    outside = measures.restrict(mu, cset.complement()).exact_mass()
    assert inside + outside == mu.exact_mass()


@given(dyadic_measures(max_depth=8, sparse=True), st.data())
def test_linearity_of_splitting(mu, data):
    mask = np.array(data.draw(st.lists(st.booleans(), min_size=1 << mu.depth, max_size=1 << mu.depth)))
    j = np.arange(-20, 21)
    a = fourier.fourier_transform(measures.restrict_mask(mu, mask), j)
    b = fourier.fourier_transform(measures.restrict_mask(mu, ~mask), j)
    np.testing.assert_allclose(a + b, fourier.fourier_transform(mu, j), atol=1e-12)


def test_pushforward_lebesgue_is_lebesgue():
    nu = measures.dyadic_pushforward(measures.lebesgue(10), 1)
    assert nu.depth == 9
    np.testing.assert_allclose(nu.weights, measures.lebesgue(9).weights, rtol=0, atol=1e-15)


def test_pushforward_zero_is_identity(rng):
    mu = DyadicMeasure(5, rng.random(32))
    assert measures.dyadic_pushforward(mu, 0) is mu


def test_pushforward_single_frequency(rng):
    mu = DyadicMeasure(8, rng.random(256))
    nu = measures.dyadic_pushforward(mu, 4)
    lhs = fourier.fourier_transform(nu, 3.0)
    rhs = fourier.fourier_transform(mu, 48.0)
    assert abs(lhs - rhs) < 1e-12


def test_pushforward_too_far():
    with pytest.raises(ValueError):
        measures.dyadic_pushforward(measures.lebesgue(3), 4)


@given(dyadic_measures(max_depth=10, sparse=True), st.integers(0, 6))
def test_pushforward_frequency_identity(mu, l):
    l = min(l, mu.depth)
    nu = measures.dyadic_pushforward(mu, l)
    j = np.arange(-16, 65)
    lhs = fourier.fourier_transform(nu, j)
    rhs = fourier.fourier_transform(mu, (1 << l) * j)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)
    assert math.isclose(nu.mass, mu.mass, rel_tol=1e-12)


def test_normalize_examples():
    out = measures.normalize(DyadicMeasure(1, [2.0, 2.0]))
    assert out.weights.tolist() == [0.5, 0.5]
    with pytest.raises(ValueError):
        measures.normalize(DyadicMeasure(1, [0.0, 0.0]))


@given(dyadic_measures(max_depth=8, sparse=True))
def test_normalize_idempotent(mu):
    once = measures.normalize(mu)
    twice = measures.normalize(once)
    np.testing.assert_allclose(twice.cells()[1], once.cells()[1], rtol=1e-15)
    assert math.isclose(once.mass, 1.0, rel_tol=1e-12)


def test_normalized_lebesgue_on_a_has_unit_mass():
    spec = construction.validate_parameters(0.8, 0.3, (2, 5, 10))
    mu = measures.normalize(measures.restrict_mask(measures.lebesgue(spec.working_depth),
                                                   construction.predicate_mask(spec, "f-even")))
    assert math.isclose(mu.mass, 1.0, rel_tol=1e-14)


def test_refine_depth_zero():
    assert measures.refine(measures.lebesgue(0), 1).weights.tolist() == [0.5, 0.5]


@given(dyadic_measures(max_depth=7, sparse=True), st.integers(0, 3))
def test_refinement_invariance(mu, extra):
    fine = measures.refine(mu, mu.depth + extra)
    j = np.arange(0, (1 << mu.depth) + 1)
    np.testing.assert_allclose(fourier.fourier_transform(fine, j), fourier.fourier_transform(mu, j), atol=1e-10)


@given(dyadic_measures(min_depth=2, max_depth=7), st.integers(0, 2), st.integers(0, 2))
def test_refine_commutes_with_pushforward(mu, l, extra):
    l = min(l, mu.depth)
    a = measures.refine(measures.dyadic_pushforward(mu, l), mu.depth - l + extra)
    b = measures.dyadic_pushforward(measures.refine(mu, mu.depth + extra), l)
    np.testing.assert_allclose(a.weights, b.weights, rtol=1e-13, atol=0)


def test_sparse_storage_chosen_for_thin_support():
    mu = DyadicMeasure.from_cells(20, [3, 70000], [0.25, 0.75])
    assert mu.is_sparse and mu.nnz == 2
    dense = DyadicMeasure.from_cells(4, [3, 7], [0.25, 0.75])
    assert not dense.is_sparse


def test_sparse_and_dense_agree(rng):
    idx = np.sort(rng.choice(1 << 12, 30, replace=False))
    val = rng.random(30)
    sparse = DyadicMeasure.from_cells(12, idx, val)
    w = np.zeros(1 << 12)
    w[idx] = val
    dense = DyadicMeasure(12, w)
    assert sparse.is_sparse
    j = np.arange(50)
    np.testing.assert_allclose(fourier.fourier_transform(sparse, j), fourier.fourier_transform(dense, j), atol=1e-13)
    np.testing.assert_array_equal(measures.dyadic_pushforward(sparse, 5).weights,
                                  measures.dyadic_pushforward(dense, 5).weights)


@pytest.mark.parametrize("weights", [[-1.0, 2.0], [np.nan, 1.0], [1.0, 2.0, 3.0]])
def test_invalid_weights(weights):
    with pytest.raises(ValueError):
        DyadicMeasure(1, weights)


def test_weights_are_immutable(rng):
    mu = DyadicMeasure(3, rng.random(8))
    with pytest.raises(ValueError):
        mu.weights[0] = 5.0


def test_cylinder_set_invariants():
    c = CylinderSet(3, [5, 1, 1, 3])
    assert c.indices.tolist() == [1, 3, 5]
    assert c.lebesgue_measure() == Fraction(3, 8)
    assert c.refine(4).lebesgue_measure() == Fraction(3, 8)
    assert c.union(CylinderSet(2, [0])) == CylinderSet(3, [0, 1, 3, 5])
    assert len(c.complement()) == 5
    with pytest.raises(ValueError):
        CylinderSet(2, [4])


def test_cylinder_set_does_not_alias_input():
    src = np.array([1, 2])
    c = CylinderSet(2, src)
    src[0] = 0
    assert c.indices.tolist() == [1, 2]


def test_json_round_trip(tmp_path, rng):
    mu = DyadicMeasure(4, rng.random(16) / 3)
    path = tmp_path / "m.json"
    measures.dump_json(mu, path)
    back = measures.load_measure(path)
    np.testing.assert_array_equal(back.weights, mu.weights)
    sparse = DyadicMeasure.from_cells(20, [1, 9], [1 / 3, 2 / 3])
    assert DyadicMeasure.from_dict(json.loads(json.dumps(sparse.to_dict()))).cells()[1].tolist() == [1 / 3, 2 / 3]
    c = CylinderSet(5, [2, 9])
    assert CylinderSet.from_dict(c.to_dict()) == c


def test_cantor_self_similarity():
    c = measures.CantorMeasure(12)
    base = abs(c.fourier(1.0))
    for k in range(1, 11):
        assert abs(abs(c.fourier(3.0 ** k)) - base) < 1e-9


def test_atomic_measure_support_checked():
    with pytest.raises(ValueError):
        measures.AtomicMeasure([0.1], [1.0], support=(0.5, 1.0))
    with pytest.raises(ValueError):
        measures.AtomicMeasure([0.6], [-1.0], support=(0.5, 1.0))
