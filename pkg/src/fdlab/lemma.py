"""Lower bound on ``inf_mu sup_{j>=1} |mu_hat(j)|`` over probability measures on [eps, 1].

Two independent routes:

* the pulse route: pair ``mu`` with the triangle pulse ``phi`` supported on
  ``[0, eps]``.  Since ``mu(phi) = 0``, ``1/2 <= sum_k |phi_hat(k)| |mu_hat(k)|``,
  and ``sum_{k>=1} |phi_hat(k)| <= (4 + pi eps) / (pi eps)`` gives the
  bound ``pi eps / (8 + 2 pi eps)``;
* the minimax route: solve the discretized ``min_w max_j |sum_q w_q e(-j x_q)|``
  as a linear program over a rotation polytope.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .fourier import fourier_transform, sinc
from .measures import AtomicMeasure, DyadicMeasure


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
    return eps


def infsup_bound(eps: float) -> float:
    """``pi eps / (8 + 2 pi eps)``, which is at least ``eps / 5`` on (0, 1]."""
    eps = _check_eps(eps)
    return math.pi * eps / (8.0 + 2.0 * math.pi * eps)


def default_terms(eps: float) -> int:
    return math.ceil(10.0 / eps ** 2) * 10


def tail_upper_bound(eps: float, K: int) -> float:
    """Upper bound on ``sum_{k>K} sinc**2(k pi eps / 2)`` via ``4/(k pi eps)**2``."""
    return 4.0 / (math.pi ** 2 * eps ** 2 * K)


def truncation_slack(eps: float, J: int) -> float:
    """How far ``sup_{j<=J} |mu_hat(j)|`` may fall below :func:`infsup_bound`.

    With ``T_J`` the pulse tail past ``J`` and ``|mu_hat| <= 1``,
    ``sup_{j<=J} |mu_hat(j)| >= (1/2 - T_J) / S`` where ``S`` is the full
    pulse sum, so the loss is at most ``T_J pi eps / (4 + pi eps)``.
    """
    eps = _check_eps(eps)
    return tail_upper_bound(eps, J) * math.pi * eps / (4.0 + math.pi * eps)


@dataclass
class PulseProfile:
    epsilon: float
    coefficients: np.ndarray  # |phi_hat(k)|, k = 0..K
    tail_bound: float  # bound on sum_{k>=1} |phi_hat(k)|

    @property
    def K(self) -> int:
        return self.coefficients.size - 1


def triangle_pulse_coefficients(eps: float, K: int) -> PulseProfile:
    """``|phi_hat(k)| = sinc**2(k pi eps / 2)`` for the unit-mass triangle on ``[0, eps]``."""
    eps = _check_eps(eps)
    if K < 1:
        raise ValueError("K must be at least 1")
    k = np.arange(K + 1)
    coeffs = sinc(k * math.pi * eps / 2.0) ** 2
    return PulseProfile(eps, coeffs, (4.0 + math.pi * eps) / (math.pi * eps))


def pulse_transform(eps: float, k) -> np.ndarray:
    """Signed ``phi_hat(k) = exp(-pi i k eps) sinc**2(k pi eps / 2)``."""
    k = np.asarray(k, dtype=np.float64)
    return np.exp(-1j * math.pi * k * eps) * sinc(k * math.pi * eps / 2.0) ** 2


def pulse_sum_bound(eps: float, K: int | None = None) -> tuple[float, float]:
    """``(sum_{k=1}^K sinc**2(k pi eps / 2), (4 + pi eps) / (pi eps))``."""
    eps = _check_eps(eps)
    K = default_terms(eps) if K is None else int(K)
    prof = triangle_pulse_coefficients(eps, K)
    return math.fsum(prof.coefficients[1:]), prof.tail_bound


@dataclass
class DualityBound:
    value: float  # certified lower bound on sup_j |mu_hat(j)|
    infsup_bound: float
    pairing_residual: float
    residual_allowance: float
    K: int


def _support_ok(mu, eps: float) -> bool:
    if isinstance(mu, AtomicMeasure):
        return bool(np.all(mu.positions[mu.masses > 0] >= eps) and np.all(mu.positions <= 1.0))
    if isinstance(mu, DyadicMeasure):
        idx, _ = mu.cells()
        return bool(np.all(idx * mu.cell_length >= eps))
    raise TypeError(f"unsupported measure type {type(mu).__name__}")


def duality_lower_bound(mu, eps: float, K: int | None = None) -> DualityBound:
    """Certified lower bound on ``sup_{j>=1} |mu_hat(j)|`` for ``mu`` in P([eps, 1]).

    The value ``(1/2) / (S_K + tail)`` depends on ``eps`` only.  The pairing
    identity ``1 + 2 Re sum_{k=1}^K phi_hat(k) conj(mu_hat(k)) = mu(phi) = 0``
    is checked against its truncation allowance ``2 * tail``.
    """
    eps = _check_eps(eps)
    if not _support_ok(mu, eps):
        raise ValueError(f"measure charges points below epsilon={eps}")
    if abs(mu.mass - 1.0) > 1e-9:
        raise ValueError("measure must be a probability measure")
    K = default_terms(eps) if K is None else int(K)
    partial, _ = pulse_sum_bound(eps, K)
    tail = tail_upper_bound(eps, K)
    k = np.arange(1, K + 1)
    pairing = 1.0 + 2.0 * float(np.real(np.sum(pulse_transform(eps, k) * np.conj(fourier_transform(mu, k)))))
    out = DualityBound(0.5 / (partial + tail), infsup_bound(eps), abs(pairing), 2.0 * tail, K)
    if out.pairing_residual > out.residual_allowance:
        raise AssertionError(f"pairing residual {out.pairing_residual} exceeds {out.residual_allowance}")
    return out


@dataclass
class MinimaxResult:
    epsilon: float
    grid_size: int
    j_max: int
    rotations: int
    optimal_value: float  # LP value over the rotation polytope
    achieved_sup: float  # true max_{j<=J} |mu_hat(j)| of the returned measure
    optimal_measure: AtomicMeasure
    lower_bound: float
    slack: float
    iterations: int
    status: str
    stats: dict = field(default_factory=dict)

    @property
    def rotation_factor(self) -> float:
        return math.cos(math.pi / self.rotations)

    @property
    def corrected_value(self) -> float:
        return self.optimal_value / self.rotation_factor

    @property
    def consistent(self) -> bool:
        return self.corrected_value + self.slack >= self.lower_bound

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon, "grid_size": self.grid_size, "j_max": self.j_max,
            "rotations": self.rotations, "optimal_value": self.optimal_value,
            "corrected_value": self.corrected_value, "achieved_sup": self.achieved_sup,
            "lower_bound": self.lower_bound, "slack": self.slack,
            "iterations": self.iterations, "status": self.status,
            "optimal_measure": self.optimal_measure.to_dict(),
        }


def grid_atoms(eps: float, Q: int) -> np.ndarray:
    return eps + (np.arange(Q) + 0.5) * (1.0 - eps) / Q


def minimize_sup_transform(eps: float, Q: int, J: int, R: int = 32) -> MinimaxResult:
    """Discretized ``min_mu max_{1<=j<=J} |mu_hat(j)|`` over mu on a grid in [eps, 1].

    ``|z| <= t`` is replaced by ``Re(exp(i theta_r) z) <= t`` for ``R``
    equispaced angles, which underestimates ``|z|`` by at most a factor
    ``cos(pi / R)``.  Solved with HiGHS interior point plus crossover.
    """
    eps = _check_eps(eps)
    if Q < 1 or J < 1 or R < 3:
        raise ValueError("need Q >= 1, J >= 1, R >= 3")
    x = grid_atoms(eps, Q)
    j = np.arange(1, J + 1)
    theta = 2 * np.pi * np.arange(R) / R
    # Row (j, r): sum_q w_q cos(theta_r - 2 pi j x_q) - t <= 0.
    phase = theta[None, :, None] - 2 * np.pi * j[:, None, None] * x[None, None, :]
    a_ub = np.hstack([np.cos(phase).reshape(J * R, Q), -np.ones((J * R, 1))])
    c = np.zeros(Q + 1)
    c[-1] = 1.0
    a_eq = np.hstack([np.ones((1, Q)), np.zeros((1, 1))])
    bounds = [(0, None)] * Q + [(None, None)]
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(J * R), A_eq=a_eq, b_eq=[1.0],
                  bounds=bounds, method="highs-ipm")
    if res.status != 0:
        raise RuntimeError(f"LP solver failed (status {res.status}): {res.message}; "
                           f"iterations={getattr(res, 'nit', None)}")
    w = np.clip(res.x[:Q], 0.0, None)
    w /= w.sum()
    mu = AtomicMeasure(x, w, support=(eps, 1.0))
    achieved = float(np.max(np.abs(fourier_transform(mu, j))))
    return MinimaxResult(
        epsilon=eps, grid_size=Q, j_max=J, rotations=R, optimal_value=float(res.x[-1]),
        achieved_sup=achieved, optimal_measure=mu, lower_bound=infsup_bound(eps),
        slack=truncation_slack(eps, J), iterations=int(getattr(res, "nit", 0)),
        status=res.message, stats={"constraints": J * R, "variables": Q + 1})
