"""Fundamental sequence of the Laguerre-coupled modified Helmholtz system.

The sequence ``Phi_n`` satisfies, away from ``x = y``::

    Delta Phi_n - sum_{m=0}^{n} beta_{n-m} Phi_m = 0

and has the closed form ``Phi_n(r) = K0(gamma r) v_n(r) + K1(gamma r) w_n(r)``
with even/odd polynomials ``v_n``/``w_n`` built from a triangular coefficient
table.  Radial derivatives ``Psi_n = Phi_n'`` and ``Omega_n = Phi_n''`` have
the same structure with four further polynomial families.
"""

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

from .laguerre import LaguerreParams
from .special import EULER_GAMMA, bessel_i01, bessel_k01

_OVERFLOW = 1e300


class PolyFamilies(NamedTuple):
    v: np.ndarray
    w: np.ndarray
    v_tilde: np.ndarray
    w_tilde: np.ndarray
    v_bar: np.ndarray
    w_bar: np.ndarray


class SplitParts(NamedTuple):
    """Smooth factors of ``ln(1/r)`` in ``Phi_n``, ``Psi_n``, ``Omega_n`` and the
    constants of their small-``r`` expansions."""

    phi_sing: np.ndarray
    phi_reg_const: float
    psi_sing: np.ndarray
    omega_sing: np.ndarray
    omega_const: float


@dataclass(frozen=True)
class CoeffTable:
    """Coefficients ``a[n, k]`` (zero for ``k > n``) and the polynomial families.

    ``poly[f][n]`` holds the power-basis coefficients of family ``f`` at order
    ``n``, with ``f`` indexing ``v, w, v_tilde, w_tilde, v_bar, w_bar``.  For
    ``w_bar`` the stored polynomial is the full factor that multiplies
    ``K1(gamma r) / r``.
    """

    params: LaguerreParams
    a: np.ndarray
    poly: tuple

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def gamma(self) -> float:
        return self.params.gamma

    def coeff(self, n: int, k: int) -> float:
        return float(self.a[n, k]) if k <= n else 0.0

    def write_csv(self, path) -> None:
        """Dump the triangle as ``n, k, a_nk`` rows."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "k", "a_nk"])
            for n in range(self.N + 1):
                for k in range(n + 1):
                    writer.writerow([n, k, f"{self.a[n, k]:.17g}"])


@np.errstate(over="ignore", invalid="ignore")
def _recurrence(params: LaguerreParams) -> np.ndarray:
    N = params.N
    g = params.gamma
    beta = params.betas
    # two spare columns so a[n, n+1] = 0 is addressable
    a = np.zeros((N + 1, N + 2))
    for n in range(N + 1):
        a[n, 0] = 1.0
        if n >= 1:
            a[n, n] = -beta[1] * a[n - 1, n - 1] / (2.0 * g * n)
        for k in range(n - 1, 0, -1):
            coupling = sum(beta[n - m] * a[m, k - 1] for m in range(k - 1, n))
            a[n, k] = (4.0 * ((k + 1) // 2) ** 2 * a[n, k + 1] - coupling) / (2.0 * g * k)
        if not np.all(np.isfinite(a[n])) or np.max(np.abs(a[n])) > _OVERFLOW:
            raise OverflowError(
                f"coefficient a[{n}, k] exceeds {_OVERFLOW:g} (kappa={params.kappa}, c={params.c}); reduce N"
            )
    return a[:, : N + 1]


def _families(a_n: np.ndarray, n: int, g: float):
    """Power-basis coefficient vectors of the six families at order ``n``."""
    deg = n + 2
    v = np.zeros(deg)
    w = np.zeros(deg)
    v[0 : n + 1 : 2] = a_n[0 : n + 1 : 2]
    w[1 : n + 1 : 2] = a_n[1 : n + 1 : 2]

    # sums over the even/odd coefficients, indexed by k
    even_k = np.arange(1, n // 2 + 1)
    odd_k = np.arange(1, (n - 1) // 2 + 1) if n >= 1 else np.arange(0)
    odd_k0 = np.arange(0, (n - 1) // 2 + 1) if n >= 1 else np.arange(0)

    def poly(powers, values):
        out = np.zeros(deg)
        for p, c in zip(powers, values):
            out[p] += c
        return out

    a_even = a_n[2 * even_k] if len(even_k) else np.zeros(0)
    a_odd = a_n[2 * odd_k + 1] if len(odd_k) else np.zeros(0)
    a_odd0 = a_n[2 * odd_k0 + 1] if len(odd_k0) else np.zeros(0)

    v_t = poly(2 * even_k - 1, 2 * even_k * a_even) - g * w
    w_t = poly(2 * odd_k, 2 * odd_k * a_odd) - g * v
    v_b = (
        poly(2 * even_k - 2, 2 * even_k * (2 * even_k - 1) * a_even)
        - g * poly(2 * odd_k0, (2 * odd_k0 + 1) * a_odd0)
        - g * w_t
    )
    r_times_v_t = np.concatenate([[0.0], v_t[:-1]])
    w_b = (
        poly(2 * odd_k, 4 * odd_k**2 * a_odd)
        - 2 * g * poly(2 * even_k, even_k * a_even)
        - g * r_times_v_t
        - w_t
    )
    if n == 0:
        v_b = np.zeros(deg)
        v_b[0] = g * g
    return v, w, v_t, w_t, v_b, w_b


def compute_coefficients(params: LaguerreParams) -> CoeffTable:
    """Build the coefficient triangle and polynomial families for ``params``."""
    a = _recurrence(params)
    fams = [[], [], [], [], [], []]
    for n in range(params.N + 1):
        for f, c in zip(fams, _families(a[n], n, params.gamma)):
            c.setflags(write=False)
            f.append(c)
    a.setflags(write=False)
    return CoeffTable(params=params, a=a, poly=tuple(tuple(f) for f in fams))


def _check_order(table: CoeffTable, n: int) -> None:
    if not 0 <= n <= table.N:
        raise IndexError(f"order n={n} outside 0..{table.N}")


def poly_families(table: CoeffTable, n: int, r) -> PolyFamilies:
    """Evaluate ``v, w, v~, w~, v-bar, w-bar`` at ``r`` (Horner)."""
    _check_order(table, n)
    r = np.asarray(r, dtype=float)
    return PolyFamilies(*(P.polyval(r, fam[n])[()] for fam in table.poly))


class RadialKernels:
    """``Phi_n``, ``Psi_n``, ``Omega_n`` and their log factors at fixed radii.

    The Bessel values at ``gamma r`` are computed once and shared by every
    order ``n``, which is what matrix assembly needs.
    """

    def __init__(self, table: CoeffTable, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise ValueError("radial kernels need r > 0")
        self.table = table
        self.r = r
        z = table.gamma * r
        self.i0, self.i1 = bessel_i01(z)
        self.k0, self.k1 = bessel_k01(z)
        self._polys = {}

    def polys(self, n: int) -> PolyFamilies:
        if n not in self._polys:
            self._polys[n] = poly_families(self.table, n, self.r)
        return self._polys[n]

    def phi(self, n):
        p = self.polys(n)
        return self.k0 * p.v + self.k1 * p.w

    def psi(self, n):
        p = self.polys(n)
        return self.k0 * p.v_tilde + self.k1 * p.w_tilde

    def omega(self, n):
        p = self.polys(n)
        return self.k0 * p.v_bar + self.k1 / self.r * p.w_bar

    def phi_log(self, n):
        """Factor of ``ln(1/r)`` in ``Phi_n``: ``I0 v_n - I1 w_n``."""
        p = self.polys(n)
        return self.i0 * p.v - self.i1 * p.w

    def psi_log(self, n):
        p = self.polys(n)
        return self.i0 * p.v_tilde - self.i1 * p.w_tilde

    def omega_log(self, n):
        p = self.polys(n)
        return self.i0 * p.v_bar - self.i1 / self.r * p.w_bar


def phi(table: CoeffTable, n: int, r):
    """``Phi_n(r) = K0(gamma r) v_n(r) + K1(gamma r) w_n(r)``."""
    _check_order(table, n)
    return RadialKernels(table, r).phi(n)[()]


def psi_radial(table: CoeffTable, n: int, r):
    """``Psi_n = dPhi_n/dr``."""
    _check_order(table, n)
    return RadialKernels(table, r).psi(n)[()]


def omega_radial(table: CoeffTable, n: int, r):
    """``Omega_n = d^2 Phi_n / dr^2``."""
    _check_order(table, n)
    return RadialKernels(table, r).omega(n)[()]


def phi_constant(table: CoeffTable, n: int) -> float:
    """Constant term of ``Phi_n(r) - ln(1/r) [..]`` as ``r -> 0``."""
    g = table.gamma
    return np.log(2.0 / g) - EULER_GAMMA + table.coeff(n, 1) / g


def omega_log_limit(table: CoeffTable, n: int) -> float:
    """``gamma^2/2 - gamma a_n1 + 2 a_n2``, the ``r -> 0`` limit of the
    ``ln(1/r)`` factor in ``Omega_n``."""
    g = table.gamma
    return g * g / 2.0 - g * table.coeff(n, 1) + 2.0 * table.coeff(n, 2)


def omega_constant(table: CoeffTable, n: int) -> float:
    """``omega_n``, the constant term of ``Omega_n(r) - 1/r^2 - ln(1/r)[..]``."""
    g = table.gamma
    a1, a2, a3 = table.coeff(n, 1), table.coeff(n, 2), table.coeff(n, 3)
    return (
        (np.log(2.0 / g) - EULER_GAMMA) * omega_log_limit(table, n)
        - g * g / 4.0
        + g * a1
        - 3.0 * a2
        + 2.0 * a3 / g
    )


def split_parts(table: CoeffTable, n: int, r) -> SplitParts:
    """Log factors at ``r >= 0`` and the expansion constants.

    ``r = 0`` is allowed; there ``I1(gamma r) w_n(r) = 0`` and
    ``I1(gamma r) / r -> gamma / 2``.
    """
    _check_order(table, n)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be non-negative")
    g = table.gamma
    p = poly_families(table, n, r)
    i0, i1 = bessel_i01(g * r)
    safe = np.where(r > 0, r, 1.0)
    i1_over_r = np.where(r > 0, i1 / safe, g / 2.0)
    return SplitParts(
        phi_sing=(i0 * p.v - i1 * p.w)[()],
        phi_reg_const=phi_constant(table, n),
        psi_sing=(i0 * p.v_tilde - i1 * p.w_tilde)[()],
        omega_sing=(i0 * p.v_bar - i1_over_r * p.w_bar)[()],
        omega_const=omega_constant(table, n),
    )
