"""Digit-block sets A and B at finite depth.

Stage ``k`` owns the binary digits ``l_k + 1 .. l_k + m_k`` with
``m_k = ceil(b l_k)``.  For ``x`` with digits ``x_1 x_2 ...``, ``f(x)`` is the
last stage whose block is all zeros (0 if none), and

    A = {f even},  B = {f odd},
    A_k = {x in A : block k all zero}     (k odd),
    A_k^j = {x in A_k : f(x) = j}        (j even, j > k).

A measure on A either puts little mass on every ``A_k^j`` (stage ``k`` in
P: then ``x -> 2**l_k x mod 1`` pushes the rest onto ``[2**-m_k, 1]`` and a
large Fourier coefficient appears at ``2**l_k r``), or some ``A_k^j`` is
heavy and the Riesz energy is large because ``A_k^j`` is covered by
``2**(l_j - m_k)`` intervals of length ``2**-(l_j + m_j)``.  Everything here
is evaluated at a finite working depth with exact cell counts.

``target="B"`` swaps the parities throughout.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .energy import EnergyResult, energy_cell_lower_bound, riesz_energy, verify_energy_dominates_bound
from .fourier import ResolutionWarning, batch_integer_transform
from .lemma import infsup_bound
from .measures import (MAX_DEPTH, CylinderSet, DyadicMeasure, dyadic_pushforward,
                       lebesgue_on_mask, restrict_mask)

SQRT3_M1 = math.sqrt(3.0) - 1.0
_CHUNK = 1 << 22


class SpecError(ValueError):
    """Invalid construction parameters; ``reason`` names the failed check."""

    def __init__(self, reason: str, message: str):
        super().__init__(f"{reason}: {message}")
        self.reason = reason


def _as_fraction(x) -> Fraction:
    # 0.3 * 10 == 3.0000000000000004 and (1 - 0.8) / 0.8 < 0.25 in binary; use the written decimal.
    return x if isinstance(x, Fraction) else Fraction(repr(float(x)))


@dataclass(frozen=True)
class DigitBlockSpec:
    s: float
    b: float
    l: tuple[int, ...]
    m: tuple[int, ...]
    working_depth: int
    dropped: tuple[int, ...] = ()

    @property
    def K(self) -> int:
        return len(self.l)

    @property
    def b_window(self) -> tuple[float, float]:
        return (1.0 - self.s) / self.s, self.s / 2.0

    @property
    def ratio_table(self) -> list[float]:
        return [self.l[i + 1] / self.l[i] for i in range(self.K - 1)]

    def block_end(self, k: int) -> int:
        return self.l[k - 1] + self.m[k - 1]

    def truncated(self, max_depth: int) -> "DigitBlockSpec":
        """Drop stages whose blocks end past ``max_depth``."""
        keep = [k for k in range(1, self.K + 1) if self.block_end(k) <= max_depth]
        if not keep:
            raise SpecError("depth", f"no stage fits in depth {max_depth}")
        l = tuple(self.l[k - 1] for k in keep)
        m = tuple(self.m[k - 1] for k in keep)
        dropped = self.dropped + tuple(x for x in self.l if x not in l)
        return DigitBlockSpec(self.s, self.b, l, m, l[-1] + m[-1], dropped)

    def with_depth(self, depth: int) -> "DigitBlockSpec":
        if depth < self.block_end(self.K):
            raise SpecError("depth", f"depth {depth} < l_K + m_K = {self.block_end(self.K)}")
        if depth > MAX_DEPTH:
            raise SpecError("depth", f"depth {depth} exceeds {MAX_DEPTH}")
        return DigitBlockSpec(self.s, self.b, self.l, self.m, int(depth), self.dropped)

    def to_dict(self) -> dict:
        return {"s": self.s, "b": self.b, "l": list(self.l), "m": list(self.m),
                "depth": self.working_depth, "dropped_l": list(self.dropped)}


def validate_parameters(s: float, b: float, l: Sequence[int], depth: int | None = None) -> DigitBlockSpec:
    """Check the parameter window and build a :class:`DigitBlockSpec`.

    Requires ``sqrt(3) - 1 < s < 1``, ``(1 - s)/s < b < s/2``, ``l`` strictly
    increasing positive integers and disjoint blocks ``l_{k+1} > l_k + m_k``.
    """
    s = float(s)
    if not SQRT3_M1 < s < 1.0:
        raise SpecError("s-window", f"s={s} not in (sqrt(3)-1, 1) = ({SQRT3_M1:.6f}, 1)")
    sf, bf = _as_fraction(s), _as_fraction(b)
    lo, hi = (1 - sf) / sf, sf / 2
    if not lo < bf < hi:
        raise SpecError("b-window", f"b={b} not in ((1-s)/s, s/2) = ({float(lo):.6f}, {float(hi):.6f})")
    l = tuple(int(x) for x in l)
    if not l or any(x < 1 for x in l):
        raise SpecError("l-positive", "l must be a nonempty list of positive integers")
    if any(l[i + 1] <= l[i] for i in range(len(l) - 1)):
        raise SpecError("l-increasing", f"l={l} is not strictly increasing")
    m = tuple(math.ceil(bf * x) for x in l)
    for i in range(len(l) - 1):
        if l[i + 1] <= l[i] + m[i]:
            raise SpecError("block-overlap", f"stage {i + 2} starts at digit {l[i + 1] + 1}, "
                            f"inside or adjacent to block {i + 1} ending at {l[i] + m[i]}")
    spec = DigitBlockSpec(s, float(b), l, m, l[-1] + m[-1])
    return spec if depth is None else spec.with_depth(depth)


def default_spec(dense: bool = True) -> DigitBlockSpec:
    """``s = 0.8, b = 0.3, l = (4, 20, 120)`` cut down to what fits in 30 digits."""
    return validate_parameters(0.8, 0.3, (4, 20, 120)).truncated(MAX_DEPTH)


def classify_f(bits, spec: DigitBlockSpec) -> int:
    """Last stage ``k <= K`` whose digit block is all zeros in ``bits`` (0 if none)."""
    digits = [int(c) for c in bits]
    if len(digits) < spec.block_end(spec.K):
        raise ValueError(f"need at least {spec.block_end(spec.K)} digits, got {len(digits)}")
    stage = 0
    for k in range(1, spec.K + 1):
        lk, mk = spec.l[k - 1], spec.m[k - 1]
        if not any(digits[lk:lk + mk]):
            stage = k
    return stage


def block_zero(indices: np.ndarray, spec: DigitBlockSpec, k: int, depth: int | None = None) -> np.ndarray:
    """Mask of depth-``depth`` cells whose stage-``k`` block is all zeros."""
    depth = spec.working_depth if depth is None else depth
    shift = depth - spec.block_end(k)
    if shift < 0:
        raise ValueError(f"block {k} not visible at depth {depth}")
    return ((indices >> shift) & ((1 << spec.m[k - 1]) - 1)) == 0


def stage_of(indices: np.ndarray, spec: DigitBlockSpec, depth: int | None = None) -> np.ndarray:
    """Vectorized ``f`` on depth-``depth`` cell indices."""
    indices = np.asarray(indices, dtype=np.int64)
    out = np.zeros(indices.shape, dtype=np.int8)
    for k in range(1, spec.K + 1):
        out[block_zero(indices, spec, k, depth)] = k
    return out


@functools.lru_cache(maxsize=2)
def _stage_array(spec: DigitBlockSpec) -> np.ndarray:
    n = 1 << spec.working_depth
    out = np.empty(n, dtype=np.int8)
    for a in range(0, n, _CHUNK):
        out[a:a + _CHUNK] = stage_of(np.arange(a, min(n, a + _CHUNK), dtype=np.int64), spec)
    out.flags.writeable = False
    return out


def stage_array(spec: DigitBlockSpec) -> np.ndarray:
    """``f`` for every working-depth cell (cached, read-only int8)."""
    return _stage_array(spec)


def stage_counts(spec: DigitBlockSpec) -> np.ndarray:
    """Exact number of working-depth cells with ``f = 0, 1, ..., K``."""
    return np.bincount(stage_array(spec), minlength=spec.K + 1).astype(np.int64)


def _parity(target: str) -> int:
    if target not in ("A", "B"):
        raise ValueError("target must be 'A' or 'B'")
    return 0 if target == "A" else 1


def predicate_mask(spec: DigitBlockSpec, predicate) -> np.ndarray:
    """Boolean cell mask for a predicate name or a list of names (intersection).

    Names: ``f-even``, ``f-odd``, ``f=<j>``, ``f>=<j>``, ``block-<k>-zero``,
    ``block-<k>-nonzero``.
    """
    if isinstance(predicate, (list, tuple)):
        mask = np.ones(1 << spec.working_depth, dtype=bool)
        for p in predicate:
            mask &= predicate_mask(spec, p)
        return mask
    stages = stage_array(spec)
    if predicate == "f-even":
        return stages % 2 == 0
    if predicate == "f-odd":
        return stages % 2 == 1
    if predicate.startswith("f>="):
        return stages >= int(predicate[3:])
    if predicate.startswith("f="):
        return stages == int(predicate[2:])
    if predicate.startswith("block-"):
        _, k, kind = predicate.split("-")
        k = int(k)
        if not 1 <= k <= spec.K:
            raise ValueError(f"no stage {k}")
        n = 1 << spec.working_depth
        mask = np.empty(n, dtype=bool)
        for a in range(0, n, _CHUNK):
            mask[a:a + _CHUNK] = block_zero(np.arange(a, min(n, a + _CHUNK), dtype=np.int64), spec, k)
        if kind == "zero":
            return mask
        if kind == "nonzero":
            return ~mask
    raise ValueError(f"unknown predicate {predicate!r}")


def cylinder_decompose(spec: DigitBlockSpec, predicate) -> CylinderSet:
    """Exact working-depth cylinder set of all digit strings satisfying ``predicate``."""
    if spec.working_depth > 28:
        raise MemoryError("working depth too large for an explicit index list")
    return CylinderSet.from_mask(predicate_mask(spec, predicate))


def target_set_predicate(target: str = "A") -> str:
    return "f-even" if _parity(target) == 0 else "f-odd"


def split_stages(spec: DigitBlockSpec, target: str = "A") -> list[int]:
    """Stages ``k`` used for the case split: odd for A, even (>= 2) for B."""
    par = _parity(target)
    return [k for k in range(1, spec.K + 1) if k % 2 != par]


def partner_stages(spec: DigitBlockSpec, k: int, target: str = "A") -> list[int]:
    par = _parity(target)
    return [j for j in range(k + 1, spec.K + 1) if j % 2 == par]


@dataclass
class InfiniteMassBound:
    k: int
    union_bound: Fraction  # sum_{j=k}^K 2**-m_j
    exact_mass: Fraction  # Lebesgue measure of {some zero block at stage >= k}

    @property
    def holds(self) -> bool:
        return self.exact_mass <= self.union_bound


def mass_of_f_infinite_bound(spec: DigitBlockSpec, k: int) -> InfiniteMassBound:
    """Union bound for ``{x : some block j >= k is all zeros}`` and its exact mass.

    ``f(x) >= k`` exactly when some block at stage ``>= k`` is zero, so the
    exact mass is read off the stage counts.
    """
    if not 1 <= k <= spec.K:
        raise ValueError(f"k must lie in [1, {spec.K}]")
    bound = sum((Fraction(1, 1 << spec.m[j - 1]) for j in range(k, spec.K + 1)), Fraction(0))
    counts = stage_counts(spec)
    exact = Fraction(int(counts[k:].sum()), 1 << spec.working_depth)
    out = InfiniteMassBound(k, bound, exact)
    if not out.holds:
        raise AssertionError(f"exact mass {exact} exceeds union bound {bound}")
    return out


def p_threshold(spec: DigitBlockSpec, k: int, j: int) -> Fraction:
    """``2**-(m_k + j - k) / 6``."""
    return Fraction(1, 6 * (1 << (spec.m[k - 1] + j - k)))


@dataclass
class StageMasses:
    target: str
    alpha: dict  # k -> mu(A_k)
    alpha_kj: dict  # (k, j) -> mu(A_k^j)
    thresholds: dict  # (k, j) -> Fraction
    residual: dict  # k -> alpha_k - sum_j alpha_k^j
    in_p: dict  # k -> bool
    exact: bool
    mass_off_target: float = 0.0

    def rows(self):
        for k in sorted(self.alpha):
            js = sorted(j for kk, j in self.alpha_kj if kk == k)
            if not js:
                yield k, None, self.alpha[k], None, self.in_p[k]
            for j in js:
                yield k, j, self.alpha_kj[k, j], self.thresholds[k, j], self.in_p[k]


def _grouped_sums(mu: DyadicMeasure, spec: DigitBlockSpec, exact: bool):
    """``sums[k][f]`` = mu(block k zero and f), with ``k = 0`` meaning no block constraint."""
    if mu.depth != spec.working_depth:
        raise ValueError(f"measure depth {mu.depth} != working depth {spec.working_depth}")
    nst = spec.K + 1
    idx, val = (None, None) if not mu.is_sparse else mu.cells()
    if exact:
        if mu.is_sparse:
            vals = val
        else:
            w = mu.weights
            vals = w[w > 0]
        uniq = np.unique(vals)
        if uniq.size > 4096:
            raise ValueError("exact stage masses need few distinct weights")
        acc = np.zeros((nst, nst, uniq.size), dtype=np.int64)
    else:
        acc = np.zeros((nst, nst))

    def absorb(ix, wv):
        st = stage_of(ix, spec)
        zero = [np.ones(ix.shape, bool)] + [block_zero(ix, spec, k) for k in range(1, nst)]
        for k in range(nst):
            sel = zero[k] & (wv > 0)
            if exact:
                code = st[sel].astype(np.int64) * uniq.size + np.searchsorted(uniq, wv[sel])
                acc[k] += np.bincount(code, minlength=nst * uniq.size).reshape(nst, uniq.size)
            else:
                acc[k] += np.bincount(st[sel], weights=wv[sel], minlength=nst)

    if mu.is_sparse:
        for a in range(0, idx.size, _CHUNK):
            absorb(idx[a:a + _CHUNK], val[a:a + _CHUNK])
    else:
        w = mu.weights
        for a in range(0, w.size, _CHUNK):
            absorb(np.arange(a, min(w.size, a + _CHUNK), dtype=np.int64), w[a:a + _CHUNK])
    if not exact:
        return acc
    fr = [Fraction(float(u)) for u in uniq]
    return [[sum((fr[i] * int(c) for i, c in enumerate(acc[k, f]) if c), Fraction(0))
             for f in range(nst)] for k in range(nst)]


def stage_masses(mu: DyadicMeasure, spec: DigitBlockSpec, target: str = "A", exact: bool = False) -> StageMasses:
    """Masses ``alpha_k``, ``alpha_k^j`` and P-membership for ``mu``.

    ``exact=True`` returns Fractions (float weights are dyadic rationals, and
    construction measures carry only a handful of distinct weights).
    """
    par = _parity(target)
    sums = _grouped_sums(mu, spec, exact)
    alpha, alpha_kj, thr, resid, in_p = {}, {}, {}, {}, {}
    for k in split_stages(spec, target):
        row = sums[k]
        alpha[k] = sum(row[f] for f in range(spec.K + 1) if f % 2 == par) if exact else \
            math.fsum(row[f] for f in range(spec.K + 1) if f % 2 == par)
        parts = []
        for j in partner_stages(spec, k, target):
            alpha_kj[k, j] = row[j] if exact else float(row[j])
            thr[k, j] = p_threshold(spec, k, j)
            parts.append(alpha_kj[k, j])
        resid[k] = alpha[k] - (sum(parts, Fraction(0)) if exact else math.fsum(parts))
        in_p[k] = all(alpha_kj[k, j] <= (thr[k, j] if exact else float(thr[k, j]))
                      for j in partner_stages(spec, k, target))
    off = sum(float(sums[0][f]) for f in range(spec.K + 1) if f % 2 != par)
    return StageMasses(target, alpha, alpha_kj, thr, resid, in_p, exact, off)


@dataclass
class WitnessReport:
    k: int
    alpha_k: float
    r_max: int
    r_star: int
    nu_sup: float  # max_{1<=r<=r_max} |nu_k_hat(r)|
    required: float  # (1 - alpha_k) 2**-m_k / 5 - slack
    lemma_required: float  # (1 - alpha_k) * pi eps / (8 + 2 pi eps), eps = 2**-m_k
    slack: float
    leaked_mass: float  # nu_k mass below 2**-m_k
    exponent: float  # s l_k / 2 - m_k
    combined_bound: float  # 2**exponent ((1 - alpha_k)/5 - 1/6)
    frequency: int  # 2**l_k r_star
    scaled_direct: float  # frequency**(s/2) |mu_hat(frequency)|
    scaled_triangle: float  # frequency**(s/2) (|mu_k_hat(frequency)| - alpha_k)
    identity_error: float | None = None

    @property
    def certified(self) -> bool:
        return self.nu_sup >= self.required

    @property
    def inconclusive(self) -> bool:
        return not self.certified


def witness_frequency_bound(mu: DyadicMeasure, spec: DigitBlockSpec, k: int, r_max: int = 64,
                            target: str = "A", slack: float = 0.0,
                            alpha_k: float | None = None) -> WitnessReport:
    """Frequency-witness branch for stage ``k``.

    ``mu_k`` is ``mu`` restricted to the target set minus ``A_k``; its image
    ``nu_k`` under ``x -> 2**l_k x mod 1`` lives on ``[2**-m_k, 1]``, so some
    ``r >= 1`` has ``|nu_k_hat(r)| >= (1 - alpha_k) 2**-m_k / 5``.  Only
    ``r <= r_max`` is scanned; failing to reach the bound there is reported
    as inconclusive, not as a failure.
    """
    if k not in split_stages(spec, target):
        raise ValueError(f"stage {k} is not a split stage for target {target}")
    lk, mk = spec.l[k - 1], spec.m[k - 1]
    a_k_mask = predicate_mask(spec, [target_set_predicate(target), f"block-{k}-zero"])
    rest_mask = predicate_mask(spec, [target_set_predicate(target), f"block-{k}-nonzero"])
    if alpha_k is None:
        alpha_k = restrict_mask(mu, a_k_mask).mass
    del a_k_mask
    mu_k = restrict_mask(mu, rest_mask)
    del rest_mask
    nu_k = dyadic_pushforward(mu_k, lk)
    idx, val = nu_k.cells()
    leaked = math.fsum(val[idx < (1 << (nu_k.depth - mk))])

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        nu_vals = batch_integer_transform(nu_k, r_max)
        nu_abs = np.abs(nu_vals[1:])
        r_star = int(np.argmax(nu_abs)) + 1
        freq = (1 << lk) * r_star
        mu_at = abs(batch_integer_transform(dyadic_pushforward(mu, lk), r_star)[r_star])
        identity_error = None
        if (1 << lk) * r_max <= 1 << 16:
            direct = batch_integer_transform(mu_k, (1 << lk) * r_max)[::1 << lk]
            identity_error = float(np.max(np.abs(direct - nu_vals)))

    exponent = spec.s * lk / 2.0 - mk
    return WitnessReport(
        k=k, alpha_k=float(alpha_k), r_max=r_max, r_star=r_star, nu_sup=float(nu_abs[r_star - 1]),
        required=(1.0 - alpha_k) * 2.0 ** -mk / 5.0 - slack,
        lemma_required=(1.0 - alpha_k) * infsup_bound(2.0 ** -mk),
        slack=slack, leaked_mass=leaked, exponent=exponent,
        combined_bound=2.0 ** exponent * ((1.0 - alpha_k) / 5.0 - 1.0 / 6.0),
        frequency=freq, scaled_direct=freq ** (spec.s / 2) * mu_at,
        scaled_triangle=freq ** (spec.s / 2) * (float(nu_abs[r_star - 1]) - alpha_k),
        identity_error=identity_error)


def cover_cells(spec: DigitBlockSpec, k: int, j: int) -> CylinderSet:
    """Cells of depth ``l_j + m_j`` with blocks ``k`` and ``j`` both zero."""
    depth = spec.block_end(j)
    n = 1 << depth
    keep = []
    for a in range(0, n, _CHUNK):
        ix = np.arange(a, min(n, a + _CHUNK), dtype=np.int64)
        keep.append(ix[block_zero(ix, spec, k, depth) & block_zero(ix, spec, j, depth)])
    return CylinderSet(depth, np.concatenate(keep))


@dataclass
class EnergyBranchReport:
    k: int
    j: int
    alpha_kj: float
    threshold: float
    violates_threshold: bool  # alpha_k^j > threshold, i.e. k not in P because of j
    cell_count: int
    cell_length: float
    bound: float  # cell bound with mass alpha_k^j
    cover_bound: float  # cell bound with mass mu(cover)
    energy: float
    growth_exponent: float  # (s(1+b) - 1) l_j - 2 j - m_k
    growth_value: float  # 2**growth_exponent / 36
    eps_exponent: float  # eps l_j - m_k with eps = (s(1+b) - 1) / 2

    @property
    def holds(self) -> bool:
        return self.energy >= self.bound and self.energy >= self.cover_bound


def energy_branch_bound(mu: DyadicMeasure, spec: DigitBlockSpec, k: int, j: int, target: str = "A",
                        energy: EnergyResult | None = None, alpha_kj: float | None = None) -> EnergyBranchReport:
    """Energy branch for the pair ``(k, j)``: cover ``A_k^j`` by equal cells and bound ``I_s``."""
    if j not in partner_stages(spec, k, target):
        raise ValueError(f"({k}, {j}) is not a split pair for target {target}")
    cover = cover_cells(spec, k, j)
    count = len(cover)
    expected = 1 << (spec.l[j - 1] - spec.m[k - 1])
    if count != expected:
        raise AssertionError(f"cover has {count} cells, expected 2**(l_j - m_k) = {expected}")
    if alpha_kj is None:
        alpha_kj = restrict_mask(mu, predicate_mask(spec, [f"block-{k}-zero", f"f={j}"])).mass
    if energy is None:
        energy = riesz_energy(mu, spec.s)
    length = math.ldexp(1.0, -cover.depth)
    dom = verify_energy_dominates_bound(mu, cover, spec.s, energy=energy)
    thr = float(p_threshold(spec, k, j))
    s, b = spec.s, spec.b
    lj, mk = spec.l[j - 1], spec.m[k - 1]
    expo = (s * (1 + b) - 1) * lj - 2 * j - mk
    return EnergyBranchReport(
        k=k, j=j, alpha_kj=float(alpha_kj), threshold=thr, violates_threshold=alpha_kj > thr,
        cell_count=count, cell_length=length,
        bound=energy_cell_lower_bound(float(alpha_kj), count, length, s),
        cover_bound=dom.bound, energy=energy.value, growth_exponent=expo,
        growth_value=2.0 ** expo / 36.0, eps_exponent=(s * (1 + b) - 1) / 2 * lj - mk)


@dataclass
class StageVerdict:
    k: int
    in_p: bool
    branch: str  # "witness" or "energy"
    witness: WitnessReport | None
    energy_reports: list = field(default_factory=list)
    trigger: EnergyBranchReport | None = None

    @property
    def fired(self) -> int:
        w = self.branch == "witness" and self.witness is not None
        e = self.branch == "energy" and self.trigger is not None and self.trigger.bound > 0
        return int(w) + int(e)


def dichotomy(mu: DyadicMeasure, spec: DigitBlockSpec, target: str = "A", r_max: int = 64,
              masses: StageMasses | None = None, energy: EnergyResult | None = None) -> list[StageVerdict]:
    """Run the two-branch case split for every split stage of ``mu``.

    Stage ``k`` in P gets a witness report; otherwise the first ``j`` whose
    ``alpha_k^j`` beats the threshold triggers the energy branch.  Energy
    bounds are computed for every pair either way.
    """
    if masses is None:
        masses = stage_masses(mu, spec, target)
    if energy is None:
        energy = riesz_energy(mu, spec.s)
    out = []
    for k in split_stages(spec, target):
        reports = [energy_branch_bound(mu, spec, k, j, target, energy=energy,
                                       alpha_kj=masses.alpha_kj[k, j])
                   for j in partner_stages(spec, k, target)]
        if masses.in_p[k]:
            wit = witness_frequency_bound(mu, spec, k, r_max, target, alpha_k=float(masses.alpha[k]))
            out.append(StageVerdict(k, True, "witness", wit, reports))
        else:
            trigger = next(r for r in reports if r.violates_threshold)
            out.append(StageVerdict(k, False, "energy", None, reports, trigger))
    return out


def candidate_names(spec: DigitBlockSpec, target: str = "A") -> list[str]:
    par = _parity(target)
    return [f"lebesgue-{target}"] + [f"stage-{j}" for j in range(spec.K + 1) if j % 2 == par]


def candidate_measure(spec: DigitBlockSpec, name: str) -> DyadicMeasure:
    """Normalized Lebesgue measure on the target set or on a single stage ``{f = j}``."""
    if name == "lebesgue-A":
        return lebesgue_on_mask(predicate_mask(spec, "f-even"))
    if name == "lebesgue-B":
        return lebesgue_on_mask(predicate_mask(spec, "f-odd"))
    if name == "lebesgue-AuB":
        return lebesgue_on_mask(np.ones(1 << spec.working_depth, dtype=bool))
    if name.startswith("stage-"):
        return lebesgue_on_mask(predicate_mask(spec, f"f={int(name[6:])}"))
    raise ValueError(f"unknown candidate {name!r}")
