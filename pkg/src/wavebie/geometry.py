"""2*pi-periodic boundary curves and the pair functions built on them.

Curves are oriented counterclockwise; the outward unit normal is
``nu = (x2', -x1') / |x'|``.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

Vec = Callable[[np.ndarray], np.ndarray]


def _stack(a, b):
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return np.stack([a, b], axis=-1)


@dataclass(frozen=True)
class Curve:
    """Parametrized closed curve ``s -> x(s)`` with derivatives up to third order.

    Each callable maps an array of parameters of shape ``S`` to points of
    shape ``S + (2,)``.  User curves must supply all four callables.
    """

    x: Vec
    dx: Vec
    ddx: Vec
    dddx: Vec
    name: str = "custom"

    def __post_init__(self):
        speed = self.speed(np.linspace(0.0, 2.0 * np.pi, 721))
        if not np.all(np.isfinite(speed)) or np.min(speed) <= 1e-12:
            raise ValueError(f"curve {self.name!r} is degenerate: |x'(s)| vanishes")

    def speed(self, s):
        return np.linalg.norm(self.dx(np.asarray(s, dtype=float)), axis=-1)

    def normal(self, s):
        d = self.dx(np.asarray(s, dtype=float))
        return _stack(d[..., 1], -d[..., 0]) / np.linalg.norm(d, axis=-1)[..., None]


def ellipse(a: float = 0.6, b: float = 0.4, center=(0.0, 0.0)) -> Curve:
    """``x(s) = center + (a cos s, b sin s)``."""
    c1, c2 = center
    return Curve(
        x=lambda s: _stack(c1 + a * np.cos(s), c2 + b * np.sin(s)),
        dx=lambda s: _stack(-a * np.sin(s), b * np.cos(s)),
        ddx=lambda s: _stack(-a * np.cos(s), -b * np.sin(s)),
        dddx=lambda s: _stack(a * np.sin(s), -b * np.cos(s)),
        name="ellipse",
    )


def circle(radius: float = 1.0, center=(0.0, 0.0)) -> Curve:
    return ellipse(radius, radius, center)


def kite(radius: float = 0.2, fold: float = 0.1, center=(-0.2, 0.1)) -> Curve:
    """``x(s) = (radius cos s + fold cos 2s, radius sin s) + center``."""
    c1, c2 = center
    return Curve(
        x=lambda s: _stack(radius * np.cos(s) + fold * np.cos(2 * s) + c1, radius * np.sin(s) + c2),
        dx=lambda s: _stack(-radius * np.sin(s) - 2 * fold * np.sin(2 * s), radius * np.cos(s)),
        ddx=lambda s: _stack(-radius * np.cos(s) - 4 * fold * np.cos(2 * s), -radius * np.sin(s)),
        dddx=lambda s: _stack(radius * np.sin(s) + 8 * fold * np.sin(2 * s), -radius * np.cos(s)),
        name="kite",
    )


def peanut(a: float = 0.5, b: float = 0.1) -> Curve:
    """``x(s) = sqrt(a cos^2 s + b sin^2 s) (cos s, sin s)``."""
    if a <= 0 or b <= 0:
        raise ValueError("peanut weights must be positive")

    def radial(s):
        s = np.asarray(s, dtype=float)
        # q = rho^2 = (a + b)/2 + (a - b)/2 cos 2s
        q = 0.5 * (a + b) + 0.5 * (a - b) * np.cos(2 * s)
        q1 = -(a - b) * np.sin(2 * s)
        q2 = -2.0 * (a - b) * np.cos(2 * s)
        q3 = 4.0 * (a - b) * np.sin(2 * s)
        rho = np.sqrt(q)
        rho1 = q1 / (2.0 * rho)
        rho2 = (q2 - 2.0 * rho1 * rho1) / (2.0 * rho)
        rho3 = (q3 - 6.0 * rho1 * rho2) / (2.0 * rho)
        e = _stack(np.cos(s), np.sin(s))
        e_perp = _stack(-np.sin(s), np.cos(s))
        return rho, rho1, rho2, rho3, e, e_perp

    def x(s):
        rho, _, _, _, e, _ = radial(s)
        return rho[..., None] * e

    def dx(s):
        rho, r1, _, _, e, ep = radial(s)
        return r1[..., None] * e + rho[..., None] * ep

    def ddx(s):
        rho, r1, r2, _, e, ep = radial(s)
        return (r2 - rho)[..., None] * e + (2.0 * r1)[..., None] * ep

    def dddx(s):
        rho, r1, r2, r3, e, ep = radial(s)
        return (r3 - 3.0 * r1)[..., None] * e + (3.0 * r2 - rho)[..., None] * ep

    return Curve(x=x, dx=dx, ddx=ddx, dddx=dddx, name="peanut")


_BUILTINS = {"ellipse": ellipse, "circle": circle, "peanut": peanut, "kite": kite}


def builtin_curve(kind: str, **params) -> Curve:
    """Construct one of ``ellipse``, ``circle``, ``peanut``, ``kite``."""
    try:
        factory = _BUILTINS[kind]
    except KeyError:
        raise ValueError(f"unknown curve kind {kind!r}; known: {sorted(_BUILTINS)}") from None
    return factory(**params)


def chord(curve: Curve, s, sigma):
    """``r(s, sigma) = |x(s) - x(sigma)|``."""
    return np.linalg.norm(curve.x(np.asarray(s, float)) - curve.x(np.asarray(sigma, float)), axis=-1)[()]


def _on_diagonal(s, sigma):
    return np.abs(np.sin(0.5 * (np.asarray(s, float) - np.asarray(sigma, float)))) < 1e-13


def h_tangent(curve: Curve, s, sigma):
    """``h = (x(s) - x(sigma)) . x'(s) / (|x'(s)| r)``, undefined on the diagonal."""
    s, sigma = np.broadcast_arrays(np.asarray(s, float), np.asarray(sigma, float))
    if np.any(_on_diagonal(s, sigma)):
        raise ValueError("h_tangent is undefined for s == sigma")
    d = curve.x(s) - curve.x(sigma)
    t = curve.dx(s)
    return (np.sum(d * t, axis=-1) / (np.linalg.norm(t, axis=-1) * np.linalg.norm(d, axis=-1)))[()]


def h1_h2(curve: Curve, s, sigma):
    """The pair functions ``h1``, ``h2``, with their limits ``-|x'(s)|`` and 0 on the diagonal."""
    s, sigma = np.broadcast_arrays(np.asarray(s, float), np.asarray(sigma, float))
    diag = _on_diagonal(s, sigma)
    d = curve.x(s) - curve.x(sigma)
    ts = curve.dx(s)
    tg = curve.dx(sigma)
    speed = np.linalg.norm(ts, axis=-1)
    r = np.where(diag, 1.0, np.linalg.norm(d, axis=-1))
    a = np.sum(d * ts, axis=-1)  # (x(s) - x(sigma)) . x'(s)
    b = np.sum(d * tg, axis=-1)  # (x(s) - x(sigma)) . x'(sigma)
    h1 = np.where(diag, -speed, -b * a / (speed * r * r))
    h2 = np.where(diag, 0.0, -np.sum(ts * tg, axis=-1) / (speed * r) + b * a / (speed * r**3))
    return h1[()], h2[()]


def _chunked(points, fn, size=256):
    points = np.asarray(points, dtype=float)
    flat = points.reshape(-1, 2)
    out = np.empty(flat.shape[0])
    for lo in range(0, flat.shape[0], size):
        out[lo : lo + size] = fn(flat[lo : lo + size])
    return out.reshape(points.shape[:-1])[()]


def winding_number(curve: Curve, points, n_nodes: int = 2048):
    """Winding number of the curve around each point (trapezoidal angle integral)."""
    s = np.arange(n_nodes) * (2.0 * np.pi / n_nodes)
    x = curve.x(s)
    t = curve.dx(s)

    def fn(pts):
        d = x[None, :, :] - pts[:, None, :]
        cross = d[..., 0] * t[None, :, 1] - d[..., 1] * t[None, :, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            return (cross / np.sum(d * d, axis=-1)).mean(axis=1)

    return _chunked(points, fn)


def is_inside(curve: Curve, points):
    return np.asarray(winding_number(curve, points)) > 0.5


def distance_to_curve(curve: Curve, points, n_nodes: int = 2048):
    """Distance from each point to the curve, from a dense sample of nodes."""
    x = curve.x(np.arange(n_nodes) * (2.0 * np.pi / n_nodes))
    return _chunked(points, lambda pts: np.linalg.norm(pts[:, None, :] - x[None], axis=-1).min(axis=1))
