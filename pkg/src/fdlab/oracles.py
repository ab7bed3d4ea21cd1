"""Independent oracles: quadrature, enumeration, inclusion-exclusion, brute force.

None of these reuse the fast paths they check.  ``run_oracle_suite`` runs
every check and returns one :class:`OracleResult` per item.
"""
from __future__ import annotations

import itertools
import math
import time
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from . import construction, energy, fourier, lemma, measures


@dataclass
class OracleResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


# -- quadrature ----------------------------------------------------------------

def kernel_by_quadrature(p: int, q: int, depth: int, s: float) -> float:
    """Mean of ``|x - y|**-s`` over two depth-``depth`` cells by adaptive quadrature.

    With ``t`` the offset of the cells, the mean is
    ``h**-2 * integral (h - |v - t|) |v|**-s dv`` over ``v in [t - h, t + h]``.
    """
    h = math.ldexp(1.0, -depth)
    t = abs(q - p) * h
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=200)
    if p == q:
        val, _ = integrate.quad(lambda v: h - v, 0.0, h, weight="alg", wvar=(-s, 0.0), **opts)
        return 2.0 * val / h ** 2
    total = 0.0
    for a, b, tri in ((t - h, t, lambda v: v - t + h), (t, t + h, lambda v: t + h - v)):
        if a == 0.0:
            val, _ = integrate.quad(tri, a, b, weight="alg", wvar=(-s, 0.0), **opts)
        else:
            val, _ = integrate.quad(lambda v: tri(v) * v ** -s, a, b, **opts)
        total += val
    return total / h ** 2


def lebesgue_energy_by_quadrature(s: float) -> float:
    """``integral integral |x - y|**-s dx dy`` on the unit square, nested adaptive quadrature."""
    def inner(x):
        return integrate.quad(lambda y: 1.0, 0.0, x, weight="alg", wvar=(0.0, -s))[0] if x > 0 else 0.0
    return 2.0 * integrate.quad(inner, 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200)[0]


def transform_by_quadrature(mu: measures.DyadicMeasure, xi: float) -> complex:
    """``sum_p (w_p / h) integral_{cell p} exp(-2 pi i xi x) dx`` by per-cell quadrature."""
    h = mu.cell_length
    idx, val = mu.cells()
    total = 0j
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for p, w in zip(idx, val):
            total += w / h * _cell_quad(xi, p * h, (p + 1) * h)
    return total


def _cell_quad(xi: float, a: float, b: float) -> complex:
    re = integrate.quad(lambda x: math.cos(2 * math.pi * xi * x), a, b, epsabs=1e-15, epsrel=1e-12)[0]
    im = integrate.quad(lambda x: math.sin(2 * math.pi * xi * x), a, b, epsabs=1e-15, epsrel=1e-12)[0]
    return complex(re, -im)


def transform_by_cell_integrals(mu: measures.DyadicMeasure, j: np.ndarray) -> np.ndarray:
    """Closed-form cell integrals ``(e(-xi a) - e(-xi b)) / (2 pi i xi)``; ``j`` nonzero."""
    h = mu.cell_length
    idx, val = mu.cells()
    xi = np.asarray(j, dtype=np.float64)[:, None]
    a, b = idx[None, :] * h, (idx[None, :] + 1) * h
    cell = (np.exp(-2j * np.pi * xi * a) - np.exp(-2j * np.pi * xi * b)) / (2j * np.pi * xi * h)
    return cell @ val


def pulse_coefficient_by_quadrature(eps: float, k: int) -> float:
    """``|phi_hat(k)|`` for the explicit triangle density of height ``2/eps`` on ``[0, eps]``."""
    half = eps / 2.0

    def phi(x):
        return (2.0 / eps) * (1.0 - abs(x - half) / half) if 0 <= x <= eps else 0.0

    opts = dict(points=[half], epsabs=1e-14, epsrel=1e-12, limit=200)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda x: phi(x) * math.cos(2 * math.pi * k * x), 0.0, eps, **opts)[0]
        im = integrate.quad(lambda x: phi(x) * math.sin(2 * math.pi * k * x), 0.0, eps, **opts)[0]
    return math.hypot(re, im)


# -- enumeration ---------------------------------------------------------------

def naive_f(bits: str, l, m) -> int:
    """Reference ``f`` on a bit string using plain string comparisons."""
    found = 0
    for k, (lk, mk) in enumerate(zip(l, m), start=1):
        if bits[lk:lk + mk] == "0" * mk:
            found = k
    return found


def enumerate_stage_masses(weights: np.ndarray, spec, target: str = "A") -> dict:
    """``alpha_k`` and ``alpha_k^j`` by looping over every digit string."""
    n = spec.working_depth
    par = 0 if target == "A" else 1
    alpha, alpha_kj = {}, {}
    for p in range(1 << n):
        w = Fraction(float(weights[p]))
        if w == 0:
            continue
        bits = format(p, f"0{n}b")
        f = naive_f(bits, spec.l, spec.m)
        if f % 2 != par:
            continue
        for k in range(1, spec.K + 1):
            if k % 2 == par:
                continue
            lk, mk = spec.l[k - 1], spec.m[k - 1]
            if bits[lk:lk + mk] == "0" * mk:
                alpha[k] = alpha.get(k, 0) + w
                alpha_kj[k, f] = alpha_kj.get((k, f), 0) + w
    return {"alpha": alpha, "alpha_kj": alpha_kj}


def inclusion_exclusion_union(m_list) -> Fraction:
    """Lebesgue measure of a union of independent events of probability ``2**-m``."""
    total = Fraction(0)
    for r in range(1, len(m_list) + 1):
        for sub in itertools.combinations(m_list, r):
            total += (-1) ** (r + 1) * Fraction(1, 2 ** sum(sub))
    return total


def brute_force_minimax(eps: float, Q: int, J: int, step: float = 0.001) -> float:
    """``min_w max_{1<=j<=J} |sum_q w_q e(-j x_q)|`` over a simplex grid (Q = 3 only)."""
    if Q != 3:
        raise ValueError("grid search implemented for Q = 3")
    x = lemma.grid_atoms(eps, Q)
    n = int(round(1.0 / step))
    a = np.arange(n + 1)[:, None]
    b = np.arange(n + 1)[None, :]
    ok = a + b <= n
    w0, w1 = (a * step) * ok, (b * step) * ok
    w2 = 1.0 - w0 - w1
    worst = np.zeros(ok.shape)
    for j in range(1, J + 1):
        z = w0 * np.exp(-2j * np.pi * j * x[0]) + w1 * np.exp(-2j * np.pi * j * x[1]) + \
            w2 * np.exp(-2j * np.pi * j * x[2])
        worst = np.maximum(worst, np.abs(z))
    return float(worst[ok].min())


# -- suite ---------------------------------------------------------------------

def _check(name, fn) -> OracleResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # noqa: BLE001 - any crash is a failed oracle
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return OracleResult(name, bool(ok), detail, time.perf_counter() - t0)


def _kernel_pairs(n_pairs: int, seed: int):
    rng = np.random.default_rng(seed)
    s_vals = rng.uniform(0.05, 0.95, n_pairs)
    depths = rng.integers(1, 21, n_pairs)
    worst = 0.0
    for s, d in zip(s_vals, depths):
        p, q = rng.integers(0, 1 << int(d), 2)
        if rng.random() < 0.3:
            q = min((1 << int(d)) - 1, p + int(rng.integers(0, 3)))
        ref = kernel_by_quadrature(int(p), int(q), int(d), float(s))
        got = float(energy.pair_kernel(int(p), int(q), int(d), float(s)))
        worst = max(worst, abs(got - ref) / ref)
    return worst


def oracle_kernel(n_pairs: int = 10_000, seed: int = 7):
    worst = _kernel_pairs(n_pairs, seed)
    return worst < 1e-8, f"max relative error {worst:.2e} over {n_pairs} random cell pairs"


def oracle_lebesgue_energy():
    s = 0.5
    quad = lebesgue_energy_by_quadrature(s)
    closed = 2.0 / ((1 - s) * (2 - s))
    got = energy.riesz_energy(measures.lebesgue(8), s).value
    err = max(abs(got - closed), abs(quad - closed))
    return err < 1e-8, f"I_1/2(Lebesgue): computed {got:.12f}, quadrature {quad:.12f}, closed {closed:.12f}"


def oracle_transform_quadrature(seed: int = 3):
    rng = np.random.default_rng(seed)
    mu = measures.DyadicMeasure(4, rng.random(16))
    worst = 0.0
    for xi in (0.5, 1.0, 2.75, 7.0, 13.3):
        worst = max(worst, abs(fourier.fourier_transform(mu, xi) - transform_by_quadrature(mu, xi)))
    uni = abs(fourier.fourier_transform(measures.lebesgue(0), 0.5))
    ref = abs(transform_by_quadrature(measures.lebesgue(0), 0.5))
    worst = max(worst, abs(uni - ref))
    return worst < 1e-10, f"max |direct - quadrature| = {worst:.2e}"


def oracle_batch_transform(seed: int = 11):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for depth in (3, 8, 12):
        mu = measures.DyadicMeasure(depth, rng.random(1 << depth))
        j_max = min(256, 1 << depth)
        ref = transform_by_cell_integrals(mu, np.arange(1, j_max + 1))
        got = fourier.batch_integer_transform(mu, j_max)[1:]
        worst = max(worst, float(np.max(np.abs(got - ref))))
    return worst < 1e-10, f"max |batch - cell integrals| = {worst:.2e}"


def oracle_pushforward(seed: int = 5, trials: int = 100):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        depth = int(rng.integers(1, 11))
        l = int(rng.integers(0, min(6, depth) + 1))
        mu = measures.DyadicMeasure(depth, rng.random(1 << depth))
        nu = measures.dyadic_pushforward(mu, l)
        j = np.arange(65)
        lhs = fourier.fourier_transform(nu, j)
        rhs = transform_by_cell_integrals(mu, (1 << l) * j[1:])
        worst = max(worst, float(np.max(np.abs(lhs[1:] - rhs))), abs(lhs[0] - mu.mass))
    return worst < 1e-10, f"max |nu_hat(j) - mu_hat(2^l j)| = {worst:.2e} over {trials} measures"


def oracle_cantor():
    c = measures.CantorMeasure(12)
    base = abs(fourier.fourier_transform(c, 1.0))
    dev = max(abs(abs(fourier.fourier_transform(c, 3.0 ** k)) - base) for k in range(1, 11))
    atom_dev = max(abs(fourier.fourier_transform(c.atoms(12 + int(c.scale(xi))), xi) - c.fourier(xi))
                   for xi in (1.0, 9.0, 27.0))
    return dev < 1e-9 and atom_dev < 1e-12, f"power-of-3 deviation {dev:.2e}; atomic vs product {atom_dev:.2e}"


def oracle_classify():
    spec = construction.validate_parameters(0.8, 0.3, (2, 6))
    n = 12
    bad = 0
    for p in range(1 << n):
        bits = format(p, f"0{n}b")
        if construction.classify_f(bits, spec) != naive_f(bits, spec.l, spec.m):
            bad += 1
    vec = construction.stage_of(np.arange(1 << n), spec, n)
    bad += sum(int(vec[p]) != naive_f(format(p, f"0{n}b"), spec.l, spec.m) for p in range(1 << n))
    return bad == 0, f"{bad} disagreements over {1 << n} strings"


def oracle_union_bound():
    spec = construction.validate_parameters(0.8, 0.3, (2, 5, 10))
    issues = []
    for k in range(1, spec.K + 1):
        rep = construction.mass_of_f_infinite_bound(spec, k)
        ie = inclusion_exclusion_union(spec.m[k - 1:])
        if rep.exact_mass != ie or not rep.holds:
            issues.append(k)
    return not issues, f"depth {spec.working_depth}, m={spec.m}; mismatching stages: {issues or 'none'}"


def oracle_stage_masses():
    spec = construction.validate_parameters(0.8, 0.3, (2, 5, 10))
    bad = []
    for target in ("A", "B"):
        mu = construction.candidate_measure(spec, f"lebesgue-{target}")
        got = construction.stage_masses(mu, spec, target, exact=True)
        ref = enumerate_stage_masses(mu.weights, spec, target)
        for k, v in got.alpha.items():
            if v != ref["alpha"].get(k, 0):
                bad.append((target, k))
        for key, v in got.alpha_kj.items():
            if v != ref["alpha_kj"].get(key, 0):
                bad.append((target, key))
    return not bad, f"enumeration at depth {spec.working_depth}; mismatches: {bad or 'none'}"


def oracle_small_minimax():
    res = lemma.minimize_sup_transform(0.5, 3, 2)
    ref = brute_force_minimax(0.5, 3, 2)
    err = abs(res.achieved_sup - ref)
    return err < 0.005, f"LP achieved {res.achieved_sup:.6f}, grid search {ref:.6f}"


def oracle_pulse():
    eps = 1.0
    K = lemma.default_terms(eps)
    numeric, bound = lemma.pulse_sum_bound(eps, K)
    quad = math.fsum(pulse_coefficient_by_quadrature(eps, k) for k in range(1, K + 1))
    ok = abs(numeric - quad) < 1e-8 and numeric <= bound
    return ok, f"sum {numeric:.12f}, quadrature {quad:.12f}, bound {bound:.6f}"


def oracle_convolution(seed: int = 2):
    rng = np.random.default_rng(seed)
    a = measures.AtomicMeasure(rng.random(7), rng.random(7))
    b = measures.AtomicMeasure(rng.random(5), rng.random(5))
    ab = a.convolve(b)
    xi = rng.uniform(-40, 40, 50)
    err = np.max(np.abs(fourier.fourier_transform(ab, xi)
                        - fourier.fourier_transform(a, xi) * fourier.fourier_transform(b, xi)))
    return err < 1e-12, f"max |(a*b)^ - a^ b^| = {err:.2e}"


ORACLES = {
    "kernel-quadrature": oracle_kernel,
    "lebesgue-energy": oracle_lebesgue_energy,
    "transform-quadrature": oracle_transform_quadrature,
    "batch-transform": oracle_batch_transform,
    "pushforward-identity": oracle_pushforward,
    "cantor-self-similarity": oracle_cantor,
    "classify-brute-force": oracle_classify,
    "union-inclusion-exclusion": oracle_union_bound,
    "stage-mass-enumeration": oracle_stage_masses,
    "small-minimax-grid": oracle_small_minimax,
    "pulse-quadrature": oracle_pulse,
    "atomic-convolution": oracle_convolution,
}


def run_oracle_suite(names=None) -> list[OracleResult]:
    names = list(ORACLES) if names is None else names
    return [_check(n, ORACLES[n]) for n in names]
