"""Nystrom discretization of the hypersingular equation sequence.

For each Laguerre order the unknown density ``psi_n`` on the mesh solves::

    M_0 psi_n = f_n - sum_{m<n} M_{n-m} psi_m

with the collocation matrices::

    M_n[i, j] = T_j(s_i) / |x'(s_i)|
                - (Q~1_n + W~1_n)(s_i, s_j) R_j(s_i)
                - (Q~2_n + W~2_n)(s_i, s_j) / (2M)

Only ``M_0`` is factorized; every order reuses the LU factors.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg.lapack import dgecon

from .fundamental import CoeffTable, RadialKernels
from .geometry import Curve, distance_to_curve, is_inside
from .kernels import KernelEvaluator
from .quadrature import Mesh, cot_weight_matrix, log_weight_matrix
from .special import laguerre_table

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12
BOUNDARY_FLOOR = 1e-3
_CHUNK = 1024


class NearBoundaryWarning(UserWarning):
    pass


class IllConditionedError(np.linalg.LinAlgError):
    pass


def _mesh_evaluator(table: CoeffTable, curve: Curve, mesh: Mesh) -> KernelEvaluator:
    s = mesh.nodes
    return KernelEvaluator(table, curve, s[:, None], s[None, :])


def _assemble_from(ev: KernelEvaluator, mesh: Mesh, n: int, T, R) -> np.ndarray:
    q = ev.Q_tilde(n)
    w = ev.W_tilde(n)
    speed = ev.speed_s[:, 0]
    return (
        T / speed[:, None]
        - (q.log_factor + w.log_factor) * R
        - (q.smooth_part + w.smooth_part) / (2 * mesh.M)
    )


def assemble(table: CoeffTable, curve: Curve, mesh: Mesh, n: int) -> np.ndarray:
    """Collocation matrix ``M_n`` of shape ``(2M, 2M)``."""
    ev = _mesh_evaluator(table, curve, mesh)
    return _assemble_from(ev, mesh, n, cot_weight_matrix(mesh), log_weight_matrix(mesh))


@dataclass
class KernelSystem:
    """Matrices ``M_0 .. M_N`` and the LU factors of ``M_0``."""

    table: CoeffTable
    curve: Curve
    mesh: Mesh
    matrices: List[np.ndarray]
    lu: tuple
    condition: float

    @classmethod
    def build(cls, table: CoeffTable, curve: Curve, mesh: Mesh, condition_limit: float = CONDITION_LIMIT):
        ev = _mesh_evaluator(table, curve, mesh)
        T = cot_weight_matrix(mesh)
        R = log_weight_matrix(mesh)
        matrices = [_assemble_from(ev, mesh, n, T, R) for n in range(table.N + 1)]
        for n, A in enumerate(matrices):
            if not np.all(np.isfinite(A)):
                raise FloatingPointError(f"non-finite entries in M_{n}")
        lu = lu_factor(matrices[0], check_finite=False)
        anorm = np.linalg.norm(matrices[0], 1)
        rcond, _ = dgecon(lu[0], anorm, norm="1")
        condition = np.inf if rcond == 0 else 1.0 / rcond
        logger.debug("M=%d N=%d: cond_1(M_0) ~ %.3e", mesh.M, table.N, condition)
        if not condition < condition_limit:
            raise IllConditionedError(f"M_0 is singular or ill-conditioned (cond ~ {condition:.3e})")
        return cls(table, curve, mesh, matrices, lu, condition)

    @property
    def N(self) -> int:
        return self.table.N

    def solve0(self, rhs: np.ndarray) -> np.ndarray:
        return lu_solve(self.lu, rhs, check_finite=False)


def solve_sequence(system: KernelSystem, data) -> np.ndarray:
    """Densities ``psi[n, j]`` for boundary data ``f[n, i] = f_n(x(s_i))``."""
    data = np.asarray(data, dtype=float)
    shape = (system.N + 1, system.mesh.size)
    if data.shape != shape:
        raise ValueError(f"boundary data must have shape {shape}, got {data.shape}")
    if not np.all(np.isfinite(data)):
        raise ValueError("boundary data contains non-finite values")
    psi = np.zeros(shape)
    for n in range(shape[0]):
        rhs = data[n].copy()
        for m in range(n):
            rhs -= system.matrices[n - m] @ psi[m]
        psi[n] = system.solve0(rhs)
    return psi


def boundary_data_from_source(table: CoeffTable, curve: Curve, mesh: Mesh, z1) -> np.ndarray:
    """Normal derivative of ``x -> Phi_n(|x - z1|)`` at the mesh nodes, ``n = 0 .. N``.

    ``z1`` must lie outside the closed domain; the interior solution is then
    ``Phi_n(|x - z1|)`` itself.
    """
    z1 = np.asarray(z1, dtype=float)
    if is_inside(curve, z1) or distance_to_curve(curve, z1) < 1e-8:
        raise ValueError(f"source point {tuple(z1)} must lie outside the domain")
    s = mesh.nodes
    d = curve.x(s) - z1
    dist = np.linalg.norm(d, axis=-1)
    cos_angle = np.sum(d * curve.normal(s), axis=-1) / dist
    rad = RadialKernels(table, dist)
    return np.array([rad.psi(n) * cos_angle for n in range(table.N + 1)])


def boundary_data_uniform(coeffs, mesh: Mesh) -> np.ndarray:
    """Spatially constant flux with Laguerre coefficients ``coeffs``."""
    coeffs = np.asarray(coeffs, dtype=float)
    return np.repeat(coeffs[:, None], mesh.size, axis=1)


def interior_values(system: KernelSystem, densities, points, floor: float = BOUNDARY_FLOOR) -> np.ndarray:
    """``u_{n,M}(x)`` for every order and point; shape ``(N + 1,) + points.shape[:-1]``.

    Double-layer representation on the mesh::

        u_n(x) = (1/M) sum_m sum_j psi[m, j] Psi_{n-m}(|x - x_j|) (x_j - x) . nu_j |x'(s_j)| / |x_j - x|
    """
    points = np.asarray(points, dtype=float)
    flat = points.reshape(-1, 2)
    psi = np.asarray(densities, dtype=float)
    if flat.size:
        near = distance_to_curve(system.curve, flat) < floor
        if np.any(near):
            warnings.warn(
                f"{int(near.sum())} evaluation point(s) closer than {floor:g} to the boundary; "
                "the quadrature is inaccurate there",
                NearBoundaryWarning,
                stacklevel=2,
            )
    out = np.zeros((system.N + 1, flat.shape[0]))
    for lo in range(0, flat.shape[0], _CHUNK):
        out[:, lo : lo + _CHUNK] = _interior_chunk(system, psi, flat[lo : lo + _CHUNK])
    return out.reshape((system.N + 1,) + points.shape[:-1])


def _interior_chunk(system: KernelSystem, psi: np.ndarray, pts: np.ndarray) -> np.ndarray:
    s = system.mesh.nodes
    xj = system.curve.x(s)
    d = xj[None, :, :] - pts[:, None, :]
    dist = np.linalg.norm(d, axis=-1)
    if np.any(dist == 0):
        raise ValueError("evaluation point coincides with a mesh node")
    h_field = np.sum(d * system.curve.normal(s)[None], axis=-1) * system.curve.speed(s)[None] / dist
    rad = RadialKernels(system.table, dist)
    N = system.N
    # proj[k, m, p] = sum_j psi[m, j] * Psi_k(p, j) h_field(p, j)
    kern = np.array([rad.psi(k) * h_field for k in range(N + 1)])
    proj = np.einsum("kpj,mj->kmp", kern, psi)
    out = np.zeros((N + 1, pts.shape[0]))
    for n in range(N + 1):
        for m in range(n + 1):
            out[n] += proj[n - m, m]
    return out / system.mesh.M


def evaluate_interior(system: KernelSystem, densities, n: int, x, floor: float = BOUNDARY_FLOOR):
    """``u_{n,M}(x)`` at a single point or an array of points."""
    if not 0 <= n <= system.N:
        raise IndexError(f"order n={n} outside 0..{system.N}")
    return interior_values(system, densities, x, floor)[n][()]


def evaluate_spacetime(system: KernelSystem, densities, x, t, floor: float = BOUNDARY_FLOOR):
    """``u_{N,M}(x, t) = kappa sum_n u_{n,M}(x) L_n(kappa t)``.

    Returns an array of shape ``t.shape + points.shape[:-1]``.
    """
    values = interior_values(system, densities, x, floor)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    kappa = system.table.params.kappa
    basis = laguerre_table(system.N, kappa * t.ravel())
    out = kappa * basis.T @ values.reshape(values.shape[0], -1)
    return out.reshape(t.shape + values.shape[1:])[()]
