"""Exact finite representations of measures on [0, 1].

Three kinds of measure live here:

``DyadicMeasure``
    Piecewise-constant density on the ``2**depth`` dyadic cells of [0, 1].
    Weights are *cell masses*, not densities.
``AtomicMeasure``
    Finitely many weighted point masses.
``CantorMeasure``
    The middle-thirds Cantor measure, kept only as a hardcoded oracle for
    non-decaying Fourier coefficients.

Together with ``CylinderSet`` (a finite union of dyadic cells) these support
restriction, pushforward under the doubling maps ``x -> 2**l x mod 1``,
refinement and normalization.  All values are immutable; every operation
returns a new object.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable

import numpy as np

MAX_DEPTH = 30
# Above this depth a dense weight array is refused (2**27 float64 = 1 GiB).
MAX_DENSE_DEPTH = 27
SPARSE_FRACTION = 0.01


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _check_depth(depth: int) -> int:
    depth = int(depth)
    if depth < 0 or depth > MAX_DEPTH:
        raise ValueError(f"depth must lie in [0, {MAX_DEPTH}], got {depth}")
    return depth


class CylinderSet:
    """Finite union of depth-``n`` dyadic cells ``[p 2**-n, (p+1) 2**-n)``."""

    __slots__ = ("depth", "indices")

    def __init__(self, depth: int, indices: Iterable[int] | np.ndarray = ()):
        depth = _check_depth(depth)
        idx = np.array(indices, dtype=np.int64).ravel()
        if idx.size:
            if idx.size > 1 and not np.all(idx[1:] > idx[:-1]):
                idx = np.unique(idx)
            if idx[0] < 0 or idx[-1] >= (1 << depth):
                raise ValueError(f"cell index out of range for depth {depth}")
        self.depth = depth
        self.indices = _frozen(idx)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "CylinderSet":
        mask = np.asarray(mask, dtype=bool)
        depth = int(mask.size).bit_length() - 1
        if mask.size != 1 << depth:
            raise ValueError("mask length must be a power of two")
        return cls(depth, np.flatnonzero(mask))

    @classmethod
    def full(cls, depth: int) -> "CylinderSet":
        return cls(depth, np.arange(1 << _check_depth(depth), dtype=np.int64))

    def __len__(self) -> int:
        return int(self.indices.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CylinderSet):
            return NotImplemented
        a, b = _common_depth(self, other)
        return np.array_equal(a.indices, b.indices)

    def __repr__(self) -> str:
        return f"CylinderSet(depth={self.depth}, cells={len(self)})"

    def lebesgue_measure(self) -> Fraction:
        """Exact Lebesgue measure ``len(self) / 2**depth``."""
        return Fraction(len(self), 1 << self.depth)

    def mask(self) -> np.ndarray:
        m = np.zeros(1 << self.depth, dtype=bool)
        m[self.indices] = True
        return m

    def refine(self, new_depth: int) -> "CylinderSet":
        new_depth = _check_depth(new_depth)
        if new_depth < self.depth:
            raise ValueError("cannot refine to a smaller depth")
        shift = new_depth - self.depth
        if shift == 0:
            return self
        kids = np.arange(1 << shift, dtype=np.int64)
        idx = ((self.indices[:, None] << shift) + kids[None, :]).ravel()
        return CylinderSet(new_depth, idx)

    def complement(self) -> "CylinderSet":
        return CylinderSet.from_mask(~self.mask())

    def union(self, other: "CylinderSet") -> "CylinderSet":
        a, b = _common_depth(self, other)
        return CylinderSet(a.depth, np.union1d(a.indices, b.indices))

    def intersection(self, other: "CylinderSet") -> "CylinderSet":
        a, b = _common_depth(self, other)
        return CylinderSet(a.depth, np.intersect1d(a.indices, b.indices, assume_unique=True))

    def difference(self, other: "CylinderSet") -> "CylinderSet":
        a, b = _common_depth(self, other)
        return CylinderSet(a.depth, np.setdiff1d(a.indices, b.indices, assume_unique=True))

    def to_dict(self) -> dict:
        return {"depth": self.depth, "indices": self.indices.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "CylinderSet":
        return cls(data["depth"], data["indices"])


def _common_depth(a: CylinderSet, b: CylinderSet) -> tuple[CylinderSet, CylinderSet]:
    d = max(a.depth, b.depth)
    return a.refine(d), b.refine(d)


class DyadicMeasure:
    """Nonnegative masses on the dyadic cells of depth ``depth``.

    ``weights[p]`` is the mass spread uniformly over ``[p h, (p + 1) h)`` with
    ``h = 2**-depth``.  Storage is dense unless fewer than 1% of the cells
    carry mass, in which case only ``(indices, masses)`` of the occupied cells
    are kept.

    Parameters
    ----------
    depth : int
        Dyadic depth ``n``, ``0 <= n <= 30``.
    weights : array_like
        ``2**n`` nonnegative cell masses.
    """

    __slots__ = ("depth", "_dense", "_idx", "_val")

    def __init__(self, depth: int, weights):
        depth = _check_depth(depth)
        w = np.array(weights, dtype=np.float64).ravel()
        if w.size != 1 << depth:
            raise ValueError(f"expected {1 << depth} weights, got {w.size}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        self.depth = depth
        self._dense = _frozen(w)
        self._idx = None
        self._val = None

    @classmethod
    def from_cells(cls, depth: int, indices, masses) -> "DyadicMeasure":
        """Build from occupied cells, choosing sparse storage when it pays."""
        depth = _check_depth(depth)
        idx = np.asarray(indices, dtype=np.int64).ravel()
        val = np.asarray(masses, dtype=np.float64).ravel()
        if idx.shape != val.shape:
            raise ValueError("indices and masses differ in length")
        if np.any(val < 0) or not np.all(np.isfinite(val)):
            raise ValueError("masses must be finite and nonnegative")
        if idx.size and (idx.min() < 0 or idx.max() >= (1 << depth)):
            raise ValueError(f"cell index out of range for depth {depth}")
        order = np.argsort(idx, kind="stable")
        idx, val = idx[order], val[order]
        if idx.size > 1 and np.any(idx[1:] == idx[:-1]):
            idx, inv = np.unique(idx, return_inverse=True)
            val = np.bincount(inv, weights=val, minlength=idx.size)
        keep = val > 0
        idx, val = idx[keep], val[keep]
        if idx.size >= SPARSE_FRACTION * (1 << depth) and depth <= MAX_DENSE_DEPTH:
            w = np.zeros(1 << depth)
            w[idx] = val
            return cls(depth, w)
        obj = cls.__new__(cls)
        obj.depth = depth
        obj._dense = None
        obj._idx = _frozen(idx)
        obj._val = _frozen(val)
        return obj

    # -- views -------------------------------------------------------------
    @property
    def is_sparse(self) -> bool:
        return self._dense is None

    @property
    def cell_length(self) -> float:
        return math.ldexp(1.0, -self.depth)

    @property
    def weights(self) -> np.ndarray:
        """Dense read-only weight array (materialized for sparse storage)."""
        if self._dense is not None:
            return self._dense
        if self.depth > MAX_DENSE_DEPTH:
            raise MemoryError(f"refusing to densify a depth-{self.depth} measure")
        w = np.zeros(1 << self.depth)
        w[self._idx] = self._val
        return _frozen(w)

    def cells(self) -> tuple[np.ndarray, np.ndarray]:
        """Indices and masses of the occupied cells, indices ascending."""
        if self._dense is None:
            return self._idx, self._val
        idx = np.flatnonzero(self._dense)
        return idx, self._dense[idx]

    @property
    def nnz(self) -> int:
        if self._dense is None:
            return int(self._idx.size)
        return int(np.count_nonzero(self._dense))

    @property
    def mass(self) -> float:
        _, val = self.cells()
        return math.fsum(val)

    def exact_mass(self) -> Fraction:
        """Total mass as an exact rational (every float is a dyadic rational)."""
        _, val = self.cells()
        return _exact_sum(val)

    def mass_of(self, cset: CylinderSet, exact: bool = False):
        """``mu(cset)``; exact Fraction arithmetic on request."""
        r = restrict(self, cset)
        return r.exact_mass() if exact else r.mass

    def __repr__(self) -> str:
        kind = "sparse" if self.is_sparse else "dense"
        return f"DyadicMeasure(depth={self.depth}, {kind}, cells={self.nnz}, mass={self.mass:.6g})"

    def to_dict(self) -> dict:
        if self.is_sparse:
            return {"depth": self.depth, "indices": self._idx.tolist(), "weights": self._val.tolist()}
        return {"depth": self.depth, "weights": self._dense.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "DyadicMeasure":
        if "indices" in data:
            return cls.from_cells(data["depth"], data["indices"], data["weights"])
        return cls(data["depth"], data["weights"])


def _exact_sum(values: np.ndarray) -> Fraction:
    # Group equal floats first; construction measures carry only a few distinct weights.
    if values.size == 0:
        return Fraction(0)
    uniq, counts = np.unique(values, return_counts=True)
    return sum((Fraction(float(u)) * int(c) for u, c in zip(uniq, counts)), Fraction(0))


def lebesgue(depth: int = 0) -> DyadicMeasure:
    """Lebesgue measure on [0, 1] at the given depth."""
    depth = _check_depth(depth)
    return DyadicMeasure(depth, np.full(1 << depth, math.ldexp(1.0, -depth)))


def lebesgue_on(cset: CylinderSet, normalized: bool = True) -> DyadicMeasure:
    """Lebesgue measure restricted to ``cset``, optionally normalized."""
    n = len(cset)
    if n == 0:
        if normalized:
            raise ValueError("cannot normalize Lebesgue measure on an empty set")
        return DyadicMeasure.from_cells(cset.depth, [], [])
    w = 1.0 / n if normalized else math.ldexp(1.0, -cset.depth)
    return DyadicMeasure.from_cells(cset.depth, cset.indices, np.full(n, w))


def lebesgue_on_mask(mask: np.ndarray, normalized: bool = True) -> DyadicMeasure:
    """Same as :func:`lebesgue_on` but from a boolean cell mask (no index list)."""
    mask = np.asarray(mask, dtype=bool)
    depth = mask.size.bit_length() - 1
    n = int(np.count_nonzero(mask))
    if n == 0 and normalized:
        raise ValueError("cannot normalize Lebesgue measure on an empty set")
    w = 1.0 / n if normalized else math.ldexp(1.0, -depth)
    if n < SPARSE_FRACTION * mask.size:
        return DyadicMeasure.from_cells(depth, np.flatnonzero(mask), np.full(n, w))
    return DyadicMeasure(depth, np.where(mask, w, 0.0))


def refine(mu: DyadicMeasure, new_depth: int) -> DyadicMeasure:
    """Split every cell mass uniformly over its ``2**(new_depth - depth)`` children."""
    new_depth = _check_depth(new_depth)
    if new_depth < mu.depth:
        raise ValueError(f"new_depth {new_depth} < current depth {mu.depth}")
    shift = new_depth - mu.depth
    if shift == 0:
        return mu
    scale = math.ldexp(1.0, -shift)
    if not mu.is_sparse and new_depth <= MAX_DENSE_DEPTH:
        return DyadicMeasure(new_depth, np.repeat(mu.weights * scale, 1 << shift))
    idx, val = mu.cells()
    kids = np.arange(1 << shift, dtype=np.int64)
    new_idx = ((idx[:, None] << shift) + kids[None, :]).ravel()
    return DyadicMeasure.from_cells(new_depth, new_idx, np.repeat(val * scale, 1 << shift))


def restrict(mu: DyadicMeasure, cset: CylinderSet) -> DyadicMeasure:
    """Restriction ``mu|_S`` of ``mu`` to the cylinder set ``S``.

    If ``S`` is finer than ``mu``, ``mu`` is refined first (up to depth 30).
    """
    if cset.depth > mu.depth:
        if cset.depth > MAX_DEPTH:
            raise ValueError("set depth exceeds the refinement budget")
        mu = refine(mu, cset.depth)
    shift = mu.depth - cset.depth
    if not mu.is_sparse:
        return restrict_mask(mu, np.repeat(cset.mask(), 1 << shift))
    idx, val = mu.cells()
    inside = _member(idx >> shift, cset.indices)
    return DyadicMeasure.from_cells(mu.depth, idx[inside], val[inside])


def restrict_mask(mu: DyadicMeasure, mask: np.ndarray) -> DyadicMeasure:
    """Restriction to the cells flagged in a boolean mask of length ``2**mu.depth``."""
    mask = np.asarray(mask, dtype=bool)
    if mask.size != 1 << mu.depth:
        raise ValueError("mask length does not match measure depth")
    if not mu.is_sparse:
        w = np.where(mask, mu.weights, 0.0)
        if np.count_nonzero(w) >= SPARSE_FRACTION * w.size:
            return DyadicMeasure(mu.depth, w)
        idx = np.flatnonzero(w)
        return DyadicMeasure.from_cells(mu.depth, idx, w[idx])
    idx, val = mu.cells()
    keep = mask[idx]
    return DyadicMeasure.from_cells(mu.depth, idx[keep], val[keep])


def _member(values: np.ndarray, sorted_set: np.ndarray) -> np.ndarray:
    if sorted_set.size == 0:
        return np.zeros(values.shape, dtype=bool)
    pos = np.searchsorted(sorted_set, values)
    pos[pos == sorted_set.size] = 0
    return sorted_set[pos] == values


def dyadic_pushforward(mu: DyadicMeasure, l: int) -> DyadicMeasure:
    """Image of ``mu`` under ``x -> 2**l x mod 1``.

    The image has depth ``mu.depth - l``; cell ``q`` collects the ``2**l``
    cells ``a 2**(n-l) + q``.  Fourier coefficients satisfy
    ``nu_hat(j) == mu_hat(2**l j)`` for every integer ``j``.
    """
    l = int(l)
    if l < 0:
        raise ValueError("l must be nonnegative")
    if l > mu.depth:
        raise ValueError(f"pushforward by {l} digits needs depth >= {l}, got {mu.depth}")
    if l == 0:
        return mu
    new_depth = mu.depth - l
    if not mu.is_sparse:
        return DyadicMeasure(new_depth, mu.weights.reshape(1 << l, 1 << new_depth).sum(axis=0))
    idx, val = mu.cells()
    return DyadicMeasure.from_cells(new_depth, idx & ((1 << new_depth) - 1), val)


def normalize(mu: DyadicMeasure) -> DyadicMeasure:
    total = mu.mass
    if total <= 0:
        raise ValueError("cannot normalize a zero measure")
    idx, val = mu.cells()
    if mu.is_sparse:
        return DyadicMeasure.from_cells(mu.depth, idx, val / total)
    return DyadicMeasure(mu.depth, mu.weights / total)


class AtomicMeasure:
    """Weighted point masses, declared to live inside ``support``."""

    __slots__ = ("positions", "masses", "support")

    def __init__(self, positions, masses, support: tuple[float, float] = (0.0, 1.0)):
        x = np.array(positions, dtype=np.float64).ravel()
        m = np.array(masses, dtype=np.float64).ravel()
        if x.shape != m.shape:
            raise ValueError("positions and masses differ in length")
        if np.any(m < 0):
            raise ValueError("masses must be nonnegative")
        lo, hi = float(support[0]), float(support[1])
        if np.any((x < lo) | (x > hi)):
            raise ValueError(f"atoms outside declared support [{lo}, {hi}]")
        self.positions = _frozen(x)
        self.masses = _frozen(m)
        self.support = (lo, hi)

    @property
    def mass(self) -> float:
        return math.fsum(self.masses)

    def convolve(self, other: "AtomicMeasure") -> "AtomicMeasure":
        x = (self.positions[:, None] + other.positions[None, :]).ravel()
        m = (self.masses[:, None] * other.masses[None, :]).ravel()
        lo = self.support[0] + other.support[0]
        hi = self.support[1] + other.support[1]
        return AtomicMeasure(x, m, support=(lo, hi))

    def __repr__(self) -> str:
        return f"AtomicMeasure(atoms={self.positions.size}, mass={self.mass:.6g}, support={self.support})"

    def to_dict(self) -> dict:
        return {"positions": self.positions.tolist(), "masses": self.masses.tolist(),
                "support": list(self.support)}


def delta(x: float, mass: float = 1.0) -> AtomicMeasure:
    return AtomicMeasure([x], [mass])


class CantorMeasure:
    """Middle-thirds Cantor measure, transform by a truncated infinite product.

    ``mu_hat(xi) = prod_i exp(-2 pi i xi 3**-i) cos(2 pi xi 3**-i)``.  The
    product is cut ``depth`` factors past the scale of ``xi`` (the first
    ``i`` with ``3**i >= |xi|``), which is the exact transform of the
    level-``(depth + scale)`` atomic approximation and differs from the true
    transform by a relative error of at most about ``2 pi**2 9**-depth``.
    The truncation makes ``|mu_hat(3**k)| == |mu_hat(1)|`` hold exactly.
    """

    def __init__(self, depth: int = 12):
        self.depth = int(depth)
        self.mass = 1.0

    def scale(self, xi) -> np.ndarray:
        a = np.abs(np.asarray(xi, dtype=np.float64))
        s = np.zeros(a.shape, dtype=np.int64)
        p = np.ones(a.shape)
        while True:
            short = p < a
            if not short.any():
                return s
            s[short] += 1
            p[short] *= 3.0

    def fourier(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=np.float64)
        flat = xi.ravel()
        terms = self.depth + self.scale(flat)
        out = np.ones(flat.shape, dtype=np.complex128)
        for i in range(1, int(terms.max(initial=0)) + 1):
            active = terms >= i
            t = 2 * np.pi * flat[active] * 3.0 ** -i
            out[active] *= np.exp(-1j * t) * np.cos(t)
        return out.reshape(xi.shape)

    def atoms(self, level: int) -> AtomicMeasure:
        """Uniform measure on the ``2**level`` left endpoints of level-``level`` intervals."""
        pts = np.zeros(1)
        for i in range(1, level + 1):
            pts = np.concatenate([pts, pts + 2.0 * 3.0 ** -i])
        pts.sort()
        return AtomicMeasure(pts, np.full(pts.size, math.ldexp(1.0, -level)))

    def __repr__(self) -> str:
        return f"CantorMeasure(depth={self.depth})"


def dump_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj.to_dict(), fh)


def load_measure(path) -> DyadicMeasure:
    with open(path) as fh:
        return DyadicMeasure.from_dict(json.load(fh))
