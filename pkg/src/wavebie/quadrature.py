"""Equispaced periodic mesh and the trigonometric quadrature rules on it.

On the mesh ``s_k = k pi / M``, ``k = 0 .. 2M-1``:

* trapezoidal rule for ``(1/2pi) int f``,
* weights ``R_k(s)`` for ``(1/2pi) int f(sigma) ln((4/e) sin^2((s - sigma)/2))``,
* weights ``T_k(s)`` for ``(1/2pi) int f'(sigma) cot((sigma - s)/2)``.

Both weighted rules integrate the trigonometric interpolant of ``f`` exactly,
and depend on ``(i - j) mod 2M`` only, so a single row determines them.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Mesh:
    M: int
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 2:
            raise ValueError(f"M must be an integer >= 2, got {self.M}")
        nodes = np.arange(2 * self.M) * self.h
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def h(self) -> float:
        return np.pi / self.M

    @property
    def size(self) -> int:
        return 2 * self.M


def trapezoid_apply(mesh: Mesh, samples) -> float:
    samples = np.asarray(samples, dtype=float)
    if samples.shape[-1] != mesh.size:
        raise ValueError(f"expected {mesh.size} samples, got {samples.shape[-1]}")
    return samples.mean(axis=-1)[()]


def _log_row(M: int) -> np.ndarray:
    d = np.arange(2 * M) * (np.pi / M)  # s_0 - s_j up to sign; weights are even
    m = np.arange(1, M)
    series = np.cos(np.outer(d, m)) @ (1.0 / m)
    return -(1.0 + 2.0 * series + np.cos(M * d) / M) / (2 * M)


def _cot_row(M: int) -> np.ndarray:
    d = np.arange(2 * M) * (np.pi / M)
    m = np.arange(1, M)
    return -(np.cos(np.outer(d, m)) @ m) / M - 0.5 * np.cos(M * d)


def _circulant(row: np.ndarray) -> np.ndarray:
    n = len(row)
    idx = np.subtract.outer(np.arange(n), np.arange(n)) % n
    return row[idx]


def log_weights(mesh: Mesh, i: int) -> np.ndarray:
    """``R_j(s_i)`` for ``j = 0 .. 2M-1``."""
    return np.roll(_log_row(mesh.M), i)


def cot_weights(mesh: Mesh, i: int) -> np.ndarray:
    """``T_j(s_i)`` for ``j = 0 .. 2M-1``."""
    return np.roll(_cot_row(mesh.M), i)


def log_weight_matrix(mesh: Mesh) -> np.ndarray:
    """``R[i, j] = R_j(s_i)``."""
    return _circulant(_log_row(mesh.M))


def cot_weight_matrix(mesh: Mesh) -> np.ndarray:
    """``T[i, j] = T_j(s_i)``."""
    return _circulant(_cot_row(mesh.M))
