"""Modified Bessel functions of orders 0 and 1, harmonic numbers, Laguerre polynomials.

All functions accept scalars or numpy arrays and return the same shape.

``I0``/``I1`` are summed from the power series up to ``z = 25`` and from the
large-argument Hankel expansion beyond.  ``K0``/``K1`` use the logarithmic
power series for ``z <= 2`` and Steed's continued fraction (CF2) above, which
is accurate to a few ulps for every ``z > 2``.
"""

import math

import numpy as np

EULER_GAMMA = 0.5772156649015329

_EPS = 1e-17
_I_SEAM = 25.0
_K_SEAM = 2.0
_MAX_TERMS = 500


def _as_float_array(z):
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError("Bessel argument must be finite")
    return z


def _i01_series(z):
    half = 0.5 * z
    t = half * half
    term0 = np.ones_like(z)
    term1 = np.ones_like(z)
    s0 = term0.copy()
    s1 = term1.copy()
    for k in range(1, _MAX_TERMS):
        term0 = term0 * t / (k * k)
        term1 = term1 * t / (k * (k + 1))
        s0 += term0
        s1 += term1
        if np.all(term0 <= _EPS * s0):
            break
    return s0, half * s1


def _i01_asymptotic(z):
    # I_nu(z) ~ e^z / sqrt(2 pi z) * sum_k (-1)^k a_k(nu) / z^k
    pref = np.exp(z) / np.sqrt(2.0 * np.pi * z)
    out = []
    for mu in (0.0, 4.0):
        term = np.ones_like(z)
        total = term.copy()
        for k in range(1, 40):
            term = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
            total += term
            if np.all(np.abs(term) <= _EPS * np.abs(total)):
                break
        out.append(pref * total)
    return out[0], out[1]


def bessel_i01(z):
    """Return ``(I0(z), I1(z))`` for ``z >= 0``."""
    z = _as_float_array(z)
    if np.any(z < 0):
        raise ValueError("bessel_i requires z >= 0")
    i0 = np.empty_like(z)
    i1 = np.empty_like(z)
    small = z <= _I_SEAM
    if np.any(small):
        i0[small], i1[small] = _i01_series(z[small])
    if np.any(~small):
        i0[~small], i1[~small] = _i01_asymptotic(z[~small])
    return i0[()], i1[()]


def _k01_series(z):
    # Only used for z <= 2, where (z/2)^(2k) / (k!)^2 < 1e-18 beyond k = 14.
    half = 0.5 * z
    t = half * half
    i0, i1 = _i01_series(z)
    lg = np.log(half) + EULER_GAMMA
    term0 = np.ones_like(z)
    term1 = half.copy()
    sum0 = np.zeros_like(z)
    sum1 = term1.copy()  # k = 0: psi(1) + psi(0) = 1
    harmonic = 0.0
    for k in range(1, 20):
        harmonic += 1.0 / k
        term0 = term0 * t / (k * k)
        term1 = term1 * t / (k * (k + 1))
        sum0 += harmonic * term0
        sum1 += (2.0 * harmonic + 1.0 / (k + 1)) * term1
    k0 = -lg * i0 + sum0
    k1 = 1.0 / z + lg * i1 - 0.5 * sum1
    return k0, k1


def _k01_steed(x):
    # Steed's CF2 for K_mu with mu = 0 (Temme's formulation).
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25
    q = np.full_like(x, a1)
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, _MAX_TERMS):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels) <= _EPS * np.abs(s)):
            break
    h = a1 * h
    k0 = np.sqrt(np.pi / (2.0 * x)) * np.exp(-x) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def bessel_k01(z):
    """Return ``(K0(z), K1(z))`` for ``z > 0``."""
    z = _as_float_array(z)
    if np.any(z <= 0):
        raise ValueError("bessel_k requires z > 0")
    k0 = np.empty_like(z)
    k1 = np.empty_like(z)
    small = z <= _K_SEAM
    if np.any(small):
        k0[small], k1[small] = _k01_series(z[small])
    if np.any(~small):
        k0[~small], k1[~small] = _k01_steed(z[~small])
    return k0[()], k1[()]


def bessel_i(order, z):
    """Modified Bessel function of the first kind, ``I_order(z)``, order 0 or 1."""
    if order not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {order!r}")
    return bessel_i01(z)[order]


def bessel_k(order, z):
    """Modified Bessel function of the second kind, ``K_order(z)``, order 0 or 1.

    ``K`` is logarithmically singular at the origin; callers that need the
    behaviour near ``z = 0`` must split the singularity off themselves.
    """
    if order not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {order!r}")
    return bessel_k01(z)[order]


def harmonic_psi(n: int) -> float:
    """``psi(n) = 1 + 1/2 + ... + 1/n`` with ``psi(0) = 0``."""
    if n < 0:
        raise ValueError("harmonic_psi requires n >= 0")
    return math.fsum(1.0 / m for m in range(1, n + 1))


def laguerre_table(n_max: int, x):
    """Laguerre polynomials ``L_0 .. L_{n_max}`` at ``x``, stacked along axis 0.

    Forward three-term recurrence
    ``(k + 1) L_{k+1} = (2k + 1 - x) L_k - k L_{k-1}``.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 - x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 - x) * out[k] - k * out[k - 1]) / (k + 1)
    return out


def laguerre_poly(n: int, x):
    """Laguerre polynomial ``L_n(x)``."""
    if n < 0:
        raise ValueError("laguerre_poly requires n >= 0")
    return laguerre_table(n, x)[n][()]
