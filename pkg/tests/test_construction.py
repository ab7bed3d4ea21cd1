import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdlab import construction, energy, fourier, measures, oracles
from fdlab.construction import SpecError, validate_parameters


@pytest.fixture(scope="module")
def small():
    return validate_parameters(0.8, 0.3, (2, 5, 10))


def test_default_parameters_valid():
    spec = validate_parameters(0.8, 0.3, (4, 20, 120))
    lo, hi = spec.b_window
    assert math.isclose(lo, 0.25) and math.isclose(hi, 0.4)
    assert spec.m == (2, 6, 36)
    assert spec.ratio_table == [5.0, 6.0]


def test_default_spec_truncation():
    spec = construction.default_spec()
    assert spec.l == (4, 20) and spec.m == (2, 6)
    assert spec.working_depth == 26 and spec.dropped == (120,)


@pytest.mark.parametrize("s, b, l, reason", [
    (0.7, 0.3, (4, 20), "s-window"),
    (0.8, 0.25, (4, 20), "b-window"),
    (0.8, 0.4, (4, 20), "b-window"),
    (0.8, 0.3, (4, 6), "block-overlap"),
    (0.8, 0.3, (20, 4), "l-increasing"),
    (0.8, 0.3, (), "l-positive"),
])
def test_rejections(s, b, l, reason):
    with pytest.raises(SpecError) as err:
        validate_parameters(s, b, l)
    assert err.value.reason == reason


def test_m_uses_decimal_ceiling():
    spec = validate_parameters(0.8, 0.3, (10, 30))
    assert spec.m == (3, 9)


def test_classify_examples(small):
    n = small.working_depth
    assert construction.classify_f("1" * n, small) == 0
    bits = ["1"] * n
    bits[5:7] = "00"
    assert construction.classify_f("".join(bits), small) == 2
    with pytest.raises(ValueError):
        construction.classify_f("0" * (n - 1), small)


def test_classify_exhaustive_vs_naive():
    spec = validate_parameters(0.8, 0.3, (2, 6))
    assert spec.m == (1, 2)
    for p in range(1 << 12):
        bits = format(p, "012b")
        assert construction.classify_f(bits, spec) == oracles.naive_f(bits, spec.l, spec.m)


@given(st.integers(0, (1 << 13) - 1))
def test_vectorized_stage_matches_scalar(p):
    spec = validate_parameters(0.8, 0.3, (2, 5, 10))
    assert int(construction.stage_of(np.array([p]), spec)[0]) == \
        construction.classify_f(format(p, "013b"), spec)


def test_tiny_partition_by_enumeration():
    spec = validate_parameters(0.8, 0.3, (1,), depth=2)
    a = construction.cylinder_decompose(spec, "f-even")
    b = construction.cylinder_decompose(spec, "f-odd")
    brute_a = [p for p in range(4) if oracles.naive_f(format(p, "02b"), spec.l, spec.m) % 2 == 0]
    assert a.indices.tolist() == brute_a
    assert a.lebesgue_measure() + b.lebesgue_measure() == 1


def test_stage_partition(small):
    sets = [construction.cylinder_decompose(small, f"f={j}") for j in range(small.K + 1)]
    assert sum(len(s) for s in sets) == 1 << small.working_depth
    for x, y in itertools.combinations(sets, 2):
        assert len(x.intersection(y)) == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_block_zero_measure(small, k):
    assert construction.cylinder_decompose(small, f"block-{k}-zero").lebesgue_measure() == \
        Fraction(1, 2 ** small.m[k - 1])


def test_a_k_is_union_of_a_k_j(small):
    a1 = construction.cylinder_decompose(small, ["f-even", "block-1-zero"])
    parts = [construction.cylinder_decompose(small, ["block-1-zero", f"f={j}"]) for j in (2,)]
    union = parts[0]
    for p in parts[1:]:
        union = union.union(p)
    assert a1 == union


def test_cover_cells_measure(small):
    cover = construction.cover_cells(small, 1, 2)
    assert len(cover) == 2 ** (small.l[1] - small.m[0])
    assert cover.lebesgue_measure() == Fraction(1, 2 ** (small.m[0] + small.m[1]))


def test_union_bound_arithmetic():
    spec = validate_parameters(0.8, 0.3, (4, 8, 12))
    assert spec.m == (2, 3, 4)
    rep = construction.mass_of_f_infinite_bound(spec, 1)
    assert rep.union_bound == Fraction(7, 16)
    assert rep.exact_mass < rep.union_bound
    assert rep.exact_mass == oracles.inclusion_exclusion_union(spec.m)
    last = construction.mass_of_f_infinite_bound(spec, 3)
    assert last.union_bound == last.exact_mass == Fraction(1, 16)


def test_threshold_value():
    spec = construction.default_spec()
    assert construction.p_threshold(spec, 1, 2) == Fraction(1, 48)


def test_stage_masses_match_enumeration(small):
    mu = construction.candidate_measure(small, "lebesgue-A")
    got = construction.stage_masses(mu, small, exact=True)
    ref = oracles.enumerate_stage_masses(mu.weights, small)
    assert got.alpha == {k: ref["alpha"].get(k, 0) for k in got.alpha}
    assert got.alpha_kj == {kj: ref["alpha_kj"].get(kj, 0) for kj in got.alpha_kj}
    for k in got.alpha:
        assert got.residual[k] == 0
        assert got.alpha[k] == sum(got.alpha_kj[k, j] for j in construction.partner_stages(small, k))


def test_float_and_exact_masses_agree(small):
    mu = construction.candidate_measure(small, "lebesgue-A")
    ex = construction.stage_masses(mu, small, exact=True)
    fl = construction.stage_masses(mu, small)
    for k in ex.alpha:
        assert math.isclose(float(ex.alpha[k]), fl.alpha[k], rel_tol=1e-14)


def test_stage_zero_measure_in_p(small):
    mu = construction.candidate_measure(small, "stage-0")
    masses = construction.stage_masses(mu, small, exact=True)
    assert all(v == 0 for v in masses.alpha.values())
    assert all(masses.in_p.values())


def test_witness_alpha_zero_reduction(small):
    mu = construction.candidate_measure(small, "stage-0")
    rep = construction.witness_frequency_bound(mu, small, 1)
    expected = 2.0 ** (small.s * small.l[0] / 2 - small.m[0]) / 30
    assert math.isclose(rep.combined_bound, expected, rel_tol=1e-12)
    assert rep.certified


def test_witness_exponent_default_spec():
    spec = construction.default_spec()
    assert math.isclose(spec.s * spec.l[0] / 2 - spec.m[0], -0.4)


def test_witness_pushforward_identity(small):
    mu = construction.candidate_measure(small, "lebesgue-A")
    rep = construction.witness_frequency_bound(mu, small, 1, r_max=32)
    assert rep.identity_error is not None and rep.identity_error < 1e-10
    assert rep.leaked_mass == 0.0


def test_witness_inconclusive_flag(small):
    mu = construction.candidate_measure(small, "lebesgue-A")
    rep = construction.witness_frequency_bound(mu, small, 1, r_max=1, slack=-10.0)
    assert rep.inconclusive and not rep.certified


def test_energy_branch_zero_mass(small):
    mu = construction.candidate_measure(small, "stage-0")
    rep = construction.energy_branch_bound(mu, small, 1, 2)
    assert rep.alpha_kj == 0.0 and rep.bound == 0.0 and rep.holds


def test_energy_branch_cell_count_default_arithmetic():
    spec = construction.default_spec()
    assert 2 ** (spec.l[1] - spec.m[0]) == 2 ** 18
    assert spec.block_end(2) == 26


@pytest.mark.parametrize("target", ["A", "B"])
@pytest.mark.parametrize("name", ["lebesgue", "stage"])
def test_dichotomy_exactly_one_branch(small, target, name):
    par = 0 if target == "A" else 1
    cand = f"lebesgue-{target}" if name == "lebesgue" else f"stage-{small.K - (small.K % 2 != par)}"
    mu = construction.candidate_measure(small, cand)
    for v in construction.dichotomy(mu, small, target):
        assert v.fired == 1
        for rep in v.energy_reports:
            assert rep.holds


def test_energy_branch_fires_when_threshold_broken(small):
    mu = construction.candidate_measure(small, "stage-2")
    verdicts = {v.k: v for v in construction.dichotomy(mu, small)}
    v = verdicts[1]
    assert not v.in_p and v.branch == "energy" and v.trigger.bound > 0


@pytest.fixture(scope="module")
def deep_sparse():
    spec = construction.default_spec()
    mask = construction.predicate_mask(spec, ["block-1-zero", "f=2"])
    mu = measures.lebesgue_on_mask(mask)
    return spec, mu


def test_depth26_sparse_full_chain(deep_sparse):
    spec, mu = deep_sparse
    assert mu.is_sparse and mu.depth == 26
    masses = construction.stage_masses(mu, spec, exact=True)
    assert masses.alpha[1] == 1 and masses.alpha_kj[1, 2] == 1
    en = energy.riesz_energy(mu, spec.s)
    assert en.method == "structured"
    (v,) = construction.dichotomy(mu, spec, masses=masses, energy=en)
    assert v.branch == "energy" and v.fired == 1
    rep = v.trigger
    assert rep.cell_count == 2 ** 18
    assert rep.energy >= rep.bound > 0
    assert math.isclose(rep.bound, 2 ** (spec.s * 26) / 2 ** 18, rel_tol=1e-12)


def test_candidates_are_probability_measures(small):
    for name in construction.candidate_names(small, "A") + construction.candidate_names(small, "B"):
        mu = construction.candidate_measure(small, name)
        assert math.isclose(mu.mass, 1.0, rel_tol=1e-13)
    with pytest.raises(ValueError):
        construction.candidate_measure(small, "nope")
