"""Fourier transforms of measures on [0, 1] and decay-exponent estimates.

Convention: ``mu_hat(xi) = integral exp(-2 pi i xi x) dmu(x)``.  For a dyadic
measure with cell length ``h`` and cell midpoints ``c_p``::

    mu_hat(xi) = sum_p w_p exp(-2 pi i xi c_p) sinc(pi xi h)
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .measures import AtomicMeasure, CantorMeasure, DyadicMeasure

NOISE_FLOOR = 1e-13
# Above this many complex entries per block the four-step transform is chunked.
_BLOCK_ENTRIES = 1 << 22


class ResolutionWarning(UserWarning):
    """Frequencies beyond ``2**depth`` only see the cell-shape sinc decay."""


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("LAB_THREADS", "1")))
    except ValueError:
        return 1


def sinc(x):
    """``sin(x) / x`` with ``sinc(0) = 1``; Taylor branch below ``|x| < 1e-6``."""
    x = np.asarray(x, dtype=np.float64)
    small = np.abs(x) < 1e-6
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


def fourier_transform(mu, xi):
    """Evaluate ``mu_hat`` at real frequency (or array of frequencies) ``xi``.

    Works for ``DyadicMeasure``, ``AtomicMeasure`` and ``CantorMeasure``.
    Returns a complex scalar for scalar input.
    """
    xi_arr = np.asarray(xi, dtype=np.float64)
    flat = xi_arr.ravel()
    if isinstance(mu, CantorMeasure):
        out = mu.fourier(flat)
    elif isinstance(mu, AtomicMeasure):
        out = _direct_sum(mu.positions, mu.masses, flat)
    elif isinstance(mu, DyadicMeasure):
        h = mu.cell_length
        idx, val = mu.cells()
        centers = (idx + 0.5) * h
        out = _direct_sum(centers, val, flat) * sinc(np.pi * flat * h)
    else:
        raise TypeError(f"unsupported measure type {type(mu).__name__}")
    out = out.reshape(xi_arr.shape)
    return complex(out) if out.ndim == 0 else out


def _direct_sum(x: np.ndarray, m: np.ndarray, xi: np.ndarray) -> np.ndarray:
    out = np.empty(xi.size, dtype=np.complex128)
    step = max(1, _BLOCK_ENTRIES // max(1, x.size))
    for a in range(0, xi.size, step):
        ph = np.exp(-2j * np.pi * np.outer(xi[a:a + step], x))
        out[a:a + step] = ph @ m
    return out


def _dft_head(w: np.ndarray, j_max: int, offset: float) -> np.ndarray:
    """``S(j) = sum_p w_p exp(-2 pi i (j + offset) p / N)`` for ``j = 0..j_max``.

    Four-step split ``p = a + A b``: a length-``B`` FFT over ``b`` for each
    residue ``a``, then a twiddle sum over ``a``.  Memory stays bounded for
    ``N`` up to ``2**27``.
    """
    n_cells = w.size
    j = np.arange(j_max + 1)
    b_len = min(n_cells, 1 << max(0, (j_max).bit_length()))
    a_len = n_cells // b_len
    grid = w.reshape(b_len, a_len)
    rows = j % b_len
    out = np.zeros(j_max + 1, dtype=np.complex128)
    chunk = max(1, min(a_len, _BLOCK_ENTRIES // max(b_len, j_max + 1)))
    b = np.arange(b_len)[:, None] * a_len
    for a0 in range(0, a_len, chunk):
        a = np.arange(a0, min(a_len, a0 + chunk))
        block = grid[:, a0:a0 + a.size]
        if offset:
            block = block * np.exp(-2j * np.pi * offset * (b + a[None, :]) / n_cells)
        spec = scipy.fft.fft(block, axis=0, workers=_workers())[rows]
        twiddle = np.exp(-2j * np.pi * np.outer(j, a) / n_cells)
        out += np.einsum("ja,ja->j", spec, twiddle)
    return out


def batch_integer_transform(mu: DyadicMeasure, j_max: int, offset: float = 0.0) -> np.ndarray:
    """``mu_hat(j + offset)`` for ``j = 0..j_max`` in one pass.

    A length-``2**depth`` discrete transform of the weights followed by the
    exact per-frequency phase and sinc correction.  ``offset=0.5`` gives the
    half-integer grid.  Frequencies past ``2**depth`` trigger a
    :class:`ResolutionWarning`; the values stay exact.
    """
    j_max = int(j_max)
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    if j_max > (1 << mu.depth):
        warnings.warn(
            f"j_max={j_max} exceeds 2**depth={1 << mu.depth}; decay is resolution-limited",
            ResolutionWarning, stacklevel=2)
    h = mu.cell_length
    xi = np.arange(j_max + 1) + offset
    if mu.is_sparse and mu.nnz * (j_max + 1) <= 1 << 26:
        idx, val = mu.cells()
        raw = _direct_sum(idx.astype(np.float64), val, xi * h)
    else:
        raw = _dft_head(mu.weights, j_max, offset)
    return raw * np.exp(-1j * np.pi * xi * h) * sinc(np.pi * xi * h)


def transform_grid(mu, j_max: int, offset: float = 0.0) -> np.ndarray:
    """``mu_hat(j + offset)``, ``j = 0..j_max``, dispatching on measure type."""
    if isinstance(mu, DyadicMeasure):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResolutionWarning)
            return batch_integer_transform(mu, j_max, offset)
    return np.asarray(fourier_transform(mu, np.arange(j_max + 1) + offset))


def sup_abs_transform(mu, j_lo: int, j_hi: int) -> tuple[int, float]:
    """Largest ``|mu_hat(j)|`` over integers ``j_lo <= j <= j_hi``, smallest argmax."""
    if not 1 <= j_lo <= j_hi:
        raise ValueError("need 1 <= j_lo <= j_hi")
    vals = np.abs(transform_grid(mu, j_hi)[j_lo:])
    k = int(np.argmax(vals))
    return j_lo + k, float(vals[k])


@dataclass
class DecayReport:
    """Per-band sup of ``|mu_hat|`` and the fitted power-law exponent.

    Band ``t`` covers integer ``j`` in ``[2**t, 2**(t+1))``; the transform is
    sampled at ``j + offset``.  ``fourier_dim_estimate = min(1, 2 beta)``.
    """

    j_max: int
    offset: float
    bands: list[tuple[int, int]]
    sup_abs: list[float]
    j_star: list[int]
    fitted_exponent: float
    fourier_dim_estimate: float
    bands_used: int = 0
    mass: float = 1.0
    notes: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["band_lo", "band_hi", "sup_abs", "j_star"])
        for (lo, hi), v, js in zip(self.bands, self.sup_abs, self.j_star):
            wr.writerow([lo, hi, repr(float(v)), js])
        return buf.getvalue()

    def summary(self) -> dict:
        beta = self.fitted_exponent
        return {
            "j_max": self.j_max,
            "offset": self.offset,
            "fitted_exponent": beta if math.isfinite(beta) else "inf",
            "fourier_dim_estimate": self.fourier_dim_estimate,
            "bands_used": self.bands_used,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def estimate_decay(mu, j_max: int, band_count: int | None = None, offset: float = 0.0) -> DecayReport:
    """Fit ``|mu_hat| ~ C xi**-beta`` from per-dyadic-band maxima.

    Parameters
    ----------
    mu : DyadicMeasure, AtomicMeasure or CantorMeasure
    j_max : int
        Largest integer frequency index scanned; only full bands below
        ``j_max`` are used.
    band_count : int, optional
        Keep only the top ``band_count`` bands (default: all).
    offset : float
        Sample at ``j + offset``; 0.5 avoids the integer zero set of
        Lebesgue-like measures.

    Bands whose sup falls under ``1e-13`` are dropped before the
    least-squares fit of ``log sup`` against ``log`` band centre.  If every
    band is below the floor the exponent is reported as ``inf`` and the
    dimension estimate as 1.
    """
    top = int(j_max).bit_length() - 1  # largest t with 2**(t+1) - 1 <= j_max
    if (1 << (top + 1)) - 1 > j_max:
        top -= 1
    n_bands = top + 1
    if n_bands < 4:
        raise ValueError("j_max too small: need at least four dyadic bands")
    first = 0 if band_count is None else max(0, n_bands - int(band_count))
    vals = np.abs(transform_grid(mu, (1 << (top + 1)) - 1, offset))
    mass = float(np.abs(transform_grid(mu, 0, 0.0))[0])

    bands, sups, stars = [], [], []
    for t in range(first, n_bands):
        lo, hi = 1 << t, 1 << (t + 1)
        k = int(np.argmax(vals[lo:hi]))
        bands.append((lo, hi))
        sups.append(float(vals[lo + k]))
        stars.append(lo + k)

    sup_arr = np.array(sups)
    keep = sup_arr >= NOISE_FLOOR
    notes = [f"j_max={j_max}: finite-frequency heuristic, not a limit"]
    if not keep.any():
        beta, dim = math.inf, 1.0
        notes.append("all band maxima below noise floor")
    elif keep.sum() == 1:
        beta, dim = 0.0, 0.0
        notes.append("single band above noise floor; slope undefined, reported as 0")
    else:
        centers = np.array([1.5 * lo for lo, _ in bands]) + offset
        slope = np.polyfit(np.log(centers[keep]), np.log(sup_arr[keep]), 1)[0]
        beta = max(0.0, -float(slope))
        dim = min(1.0, 2.0 * beta)
    return DecayReport(
        j_max=int(j_max), offset=float(offset), bands=bands, sup_abs=sups, j_star=stars,
        fitted_exponent=beta, fourier_dim_estimate=dim, bands_used=int(keep.sum()),
        mass=mass, notes=notes)
