"""Parametrized boundary kernels and their logarithmic splittings.

Every kernel ``K(s, sigma)`` used by the Nystrom scheme is split as::

    K = K1 * ln((4/e) sin^2((s - sigma)/2)) + K2

with smooth ``K1``, ``K2``.  Off the diagonal ``K2`` follows by subtraction;
on the diagonal it is given in closed form.

Kernels
-------
W_n(s, sigma)       = 2 |x'(sigma)| Phi_n(r)
W~_n(s, sigma)      = nu(s).nu(sigma) sum_k beta_{n-k} W_k(s, sigma)
Q_n(s, sigma)       = 2 Psi_n(r) h(s, sigma)
Q~_n(s, sigma)      = 2 Omega_n(r) h1 + 2 Psi_n(r) h2 + 1 / (2 |x'(s)| sin^2((s - sigma)/2))

``Q~_n`` is ``d/dsigma [Q_n - cot((sigma - s)/2) / |x'(s)|]``; after an
integration by parts the tangential operator reads::

    (1/2pi) int f' Q_n = (1/(2pi |x'(s)|)) int f' cot((sigma - s)/2) - (1/2pi) int f Q~_n
"""

from typing import NamedTuple

import numpy as np

from .fundamental import (
    CoeffTable,
    RadialKernels,
    omega_constant,
    omega_log_limit,
)
from .geometry import Curve
from .special import EULER_GAMMA


class SplitKernel(NamedTuple):
    log_factor: np.ndarray
    smooth_part: np.ndarray


def log_weight(s, sigma):
    """``ln((4/e) sin^2((s - sigma)/2))``; ``-inf`` on the diagonal."""
    with np.errstate(divide="ignore"):
        return np.log(4.0 / np.e * np.sin(0.5 * (np.asarray(s, float) - np.asarray(sigma, float))) ** 2)


class KernelEvaluator:
    """All kernels on a fixed set of parameter pairs ``(s, sigma)``.

    Geometry and Bessel values are computed once; per-order kernels are
    cached, so evaluating ``W~_n`` for every ``n`` stays ``O(N)`` passes.
    """

    def __init__(self, table: CoeffTable, curve: Curve, s, sigma):
        s, sigma = np.broadcast_arrays(np.asarray(s, float), np.asarray(sigma, float))
        self.table = table
        self.curve = curve
        self.diag = np.abs(np.sin(0.5 * (s - sigma))) < 1e-13
        off = ~self.diag

        xs, xg = curve.x(s), curve.x(sigma)
        d1s, d1g = curve.dx(s), curve.dx(sigma)
        d2s, d3s = curve.ddx(s), curve.dddx(s)
        self.speed_s = np.linalg.norm(d1s, axis=-1)
        self.speed_sigma = np.linalg.norm(d1g, axis=-1)
        nu_s = np.stack([d1s[..., 1], -d1s[..., 0]], axis=-1) / self.speed_s[..., None]
        nu_g = np.stack([d1g[..., 1], -d1g[..., 0]], axis=-1) / self.speed_sigma[..., None]
        self.normal_dot = np.sum(nu_s * nu_g, axis=-1)

        diff = xs - xg
        self.r = np.where(off, np.linalg.norm(diff, axis=-1), 1.0)
        a = np.sum(diff * d1s, axis=-1)
        b = np.sum(diff * d1g, axis=-1)
        sp, r = self.speed_s, self.r
        self.h = np.where(off, a / (sp * r), 0.0)
        self.h1 = np.where(off, -b * a / (sp * r * r), -sp)
        self.h2 = np.where(off, -np.sum(d1s * d1g, axis=-1) / (sp * r) + b * a / (sp * r**3), 0.0)
        self.logw = np.where(off, log_weight(s, np.where(off, sigma, s + 1.0)), 0.0)
        half_sin = np.where(off, np.sin(0.5 * (s - sigma)), 1.0)
        self.inv_sin2 = np.where(off, 1.0 / (2.0 * sp * half_sin**2), 0.0)

        # curve terms of the diagonal Q~ limit
        self._diag_geom = (
            1.0 / (6.0 * sp)
            + np.sum(d1s * d2s, axis=-1) ** 2 / sp**5
            - np.sum(d1s * d3s, axis=-1) / (3.0 * sp**3)
            - np.sum(d2s * d2s, axis=-1) / (2.0 * sp**3)
        )
        self.radial = RadialKernels(table, self.r)
        self._W = {}
        self._Q = {}

    def W(self, n: int) -> SplitKernel:
        if n not in self._W:
            rad = self.radial
            log_factor = -self.speed_sigma * rad.phi_log(n)
            full = 2.0 * self.speed_sigma * rad.phi(n)
            smooth = np.where(self.diag, w_diagonal(self.table, n, self.speed_s), full - log_factor * self.logw)
            log_factor = np.where(self.diag, -self.speed_s, log_factor)
            self._W[n] = SplitKernel(log_factor, smooth)
        return self._W[n]

    def W_tilde(self, n: int) -> SplitKernel:
        betas = self.table.params.betas
        log_factor = sum(betas[n - k] * self.W(k).log_factor for k in range(n + 1))
        smooth = sum(betas[n - k] * self.W(k).smooth_part for k in range(n + 1))
        return SplitKernel(self.normal_dot * log_factor, self.normal_dot * smooth)

    def Q(self, n: int) -> np.ndarray:
        """Unsplit ``Q_n = 2 Psi_n(r) h``, off the diagonal only."""
        return np.where(self.diag, np.nan, 2.0 * self.radial.psi(n) * self.h)

    def Q_tilde(self, n: int) -> SplitKernel:
        if n not in self._Q:
            rad = self.radial
            h1, h2 = self.h1, self.h2
            log_factor = -h1 * rad.omega_log(n) - h2 * rad.psi_log(n)
            full = 2.0 * rad.omega(n) * h1 + 2.0 * rad.psi(n) * h2 + self.inv_sin2
            diag_log = -omega_log_limit(self.table, n) * h1
            diag_value = (
                np.log(np.e * self.speed_s**2) * diag_log
                + 2.0 * omega_constant(self.table, n) * h1
                + self._diag_geom
            )
            smooth = np.where(self.diag, diag_value, full - log_factor * self.logw)
            log_factor = np.where(self.diag, diag_log, log_factor)
            self._Q[n] = SplitKernel(log_factor, smooth)
        return self._Q[n]


def _single(table, curve, s, sigma):
    return KernelEvaluator(table, curve, s, sigma)


def _squeeze(k: SplitKernel) -> SplitKernel:
    return SplitKernel(k.log_factor[()], k.smooth_part[()])


def kernel_W(table: CoeffTable, curve: Curve, n: int, s, sigma) -> SplitKernel:
    """Split of ``W_n = 2 |x'(sigma)| Phi_n(|x(s) - x(sigma)|)``."""
    return _squeeze(_single(table, curve, s, sigma).W(n))


def kernel_W_tilde(table: CoeffTable, curve: Curve, n: int, s, sigma) -> SplitKernel:
    return _squeeze(_single(table, curve, s, sigma).W_tilde(n))


def kernel_Q(table: CoeffTable, curve: Curve, n: int, s, sigma):
    return _single(table, curve, s, sigma).Q(n)[()]


def kernel_Q_tilde(table: CoeffTable, curve: Curve, n: int, s, sigma) -> SplitKernel:
    """Split of ``Q~_n``; see the module docstring for its role."""
    return _squeeze(_single(table, curve, s, sigma).Q_tilde(n))


def w_diagonal(table: CoeffTable, n: int, speed):
    """Diagonal value of the smooth part of ``W_n``."""
    g = table.gamma
    return (-2.0 * np.log(g * speed / 2.0) - 1.0 - 2.0 * EULER_GAMMA + 2.0 * table.coeff(n, 1) / g) * speed
