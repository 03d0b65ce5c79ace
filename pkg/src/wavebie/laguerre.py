"""Laguerre transform in time.

A causal signal is represented as ``u(t) = kappa * sum_n u_n L_n(kappa t)``
with coefficients ``u_n = int_0^inf exp(-kappa t) L_n(kappa t) u(t) dt``.
Substituting the expansion into the wave equation turns it into a
lower-triangular sequence of modified Helmholtz problems coupled through
``beta_n = (kappa / c)^2 (n + 1)``.
"""

from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np
from numpy.polynomial.laguerre import laggauss

from .special import laguerre_table

DEFAULT_QUAD_NODES = 128


@dataclass(frozen=True)
class LaguerreParams:
    """Laguerre parameter ``kappa``, wave speed ``c`` and truncation order ``N``."""

    kappa: float
    c: float
    N: int

    def __post_init__(self):
        if not (np.isfinite(self.kappa) and self.kappa > 0):
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not (np.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be positive, got {self.c}")
        if int(self.N) != self.N or self.N < 0:
            raise ValueError(f"N must be a non-negative integer, got {self.N}")

    @property
    def gamma(self) -> float:
        return self.kappa / self.c

    def beta(self, n: int) -> float:
        return (self.kappa / self.c) ** 2 * (n + 1)

    @property
    def betas(self) -> np.ndarray:
        """``beta_0 .. beta_N``."""
        return (self.kappa / self.c) ** 2 * np.arange(1, self.N + 2, dtype=float)


def forward_transform(f: Callable, params: LaguerreParams, quad_nodes: int = DEFAULT_QUAD_NODES) -> np.ndarray:
    """Laguerre coefficients ``f_0 .. f_N`` of a time signal.

    Gauss-Laguerre quadrature after the substitution ``tau = kappa t``::

        f_n = (1 / kappa) * sum_i w_i L_n(tau_i) f(tau_i / kappa)

    Parameters
    ----------
    f : callable
        Vectorized function of time.
    params : LaguerreParams
    quad_nodes : int
        Number of Gauss-Laguerre nodes, at least ``2 (N + 1)``.

    Returns
    -------
    np.ndarray, shape (N + 1,)
    """
    if quad_nodes < 2 * (params.N + 1):
        raise ValueError(f"quad_nodes={quad_nodes} too small for N={params.N}; need >= {2 * (params.N + 1)}")
    tau, weights = laggauss(quad_nodes)
    samples = np.asarray(f(tau / params.kappa), dtype=float)
    samples = np.broadcast_to(samples, tau.shape)
    if not np.all(np.isfinite(samples)):
        raise ValueError("signal returned non-finite samples at the quadrature nodes")
    basis = laguerre_table(params.N, tau)
    return basis @ (weights * samples) / params.kappa


def evaluate_expansion(coeffs, params: LaguerreParams, t):
    """``kappa * sum_n coeffs[n] L_n(kappa t)``; ``t`` may be an array."""
    coeffs = np.asarray(coeffs, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    basis = laguerre_table(len(coeffs) - 1, params.kappa * t)
    return (params.kappa * np.tensordot(coeffs, basis, axes=1))[()]


def quadratic_pulse(t):
    """``(t^2 / 4) exp(1 - t)``, the boundary flux with closed-form coefficients below."""
    t = np.asarray(t, dtype=float)
    return 0.25 * t * t * np.exp(1.0 - t)


def quadratic_pulse_coefficients(params: LaguerreParams) -> np.ndarray:
    """Closed-form Laguerre coefficients of :func:`quadratic_pulse`.

    ``f_n = (e / 4) (2 + kappa n (kappa (n - 1) - 4)) / (kappa + 1)^(n + 3)``
    """
    k = params.kappa
    n = np.arange(params.N + 1, dtype=float)
    return np.e / 4.0 * (2.0 + k * n * (k * (n - 1.0) - 4.0)) / (k + 1.0) ** (n + 3.0)


# Named signals with an exact coefficient formula.  Anything else goes
# through ``forward_transform``.
SIGNALS: Dict[str, tuple] = {
    "quadratic_pulse": (quadratic_pulse, quadratic_pulse_coefficients),
}


def signal_coefficients(name: str, params: LaguerreParams) -> np.ndarray:
    try:
        _, closed_form = SIGNALS[name]
    except KeyError:
        raise ValueError(f"unknown signal {name!r}; known: {sorted(SIGNALS)}") from None
    return closed_form(params)


def tabulated_signal(times, values):
    """Piecewise-linear signal through ``(times, values)``, zero outside the samples."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.ndim != 1 or times.shape != values.shape or len(times) < 2:
        raise ValueError("tabulated signal needs matching 1-D times/values with >= 2 samples")
    if np.any(np.diff(times) <= 0):
        raise ValueError("tabulated times must be strictly increasing")

    def f(t):
        return np.interp(t, times, values, left=0.0, right=0.0)

    return f
