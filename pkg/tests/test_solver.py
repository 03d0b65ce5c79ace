import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from wavebie.fundamental import compute_coefficients, phi
from wavebie.geometry import chord, circle, ellipse, kite, peanut
from wavebie.laguerre import LaguerreParams, quadratic_pulse_coefficients
from wavebie.quadrature import Mesh
from wavebie.solver import (
    IllConditionedError,
    KernelSystem,
    NearBoundaryWarning,
    assemble,
    boundary_data_from_source,
    boundary_data_uniform,
    evaluate_interior,
    evaluate_spacetime,
    interior_values,
    solve_sequence,
)
from wavebie.special import bessel_k

Z1_ELLIPSE = (0.6, 0.4)
Z2_ELLIPSE = (0.25, 0.0)


def _system(kappa, c, N, curve, M):
    table = compute_coefficients(LaguerreParams(kappa, c, N))
    return KernelSystem.build(table, curve, Mesh(M))


@pytest.fixture(scope="module")
def ellipse_system():
    return _system(1.0, 1.0, 5, ellipse(0.6, 0.4), 64)


@pytest.fixture(scope="module")
def ellipse_densities(ellipse_system):
    s = ellipse_system
    return solve_sequence(s, boundary_data_from_source(s.table, s.curve, s.mesh, Z1_ELLIPSE))


@pytest.mark.parametrize("i", [0, 7, 20])
def test_row_sum_against_adaptive_quadrature(i):
    table = compute_coefficients(LaguerreParams(1.0, 0.5, 1))
    curve = peanut()
    mesh = Mesh(32)
    A = assemble(table, curve, mesh, 0)
    si = mesh.nodes[i]
    beta0 = table.params.betas[0]

    def w_tilde(x):
        dot = np.sum(curve.normal(si) * curve.normal(x))
        return dot * beta0 * 2 * curve.speed(x) * phi(table, 0, chord(curve, si, x))

    ref = -quad(w_tilde, si, si + 2 * np.pi, limit=400, epsabs=1e-13)[0] / (2 * np.pi)
    assert A[i].sum() == pytest.approx(ref, abs=1e-8)


def test_circle_matrices_are_circulant():
    table = compute_coefficients(LaguerreParams(1.0, 1.0, 3))
    mesh = Mesh(8)
    for n in range(4):
        A = assemble(table, circle(0.7), mesh, n)
        for i in range(mesh.size):
            np.testing.assert_allclose(A[i], np.roll(A[0], i), rtol=1e-12, atol=1e-12)


def test_reproduces_point_source_field(ellipse_system, ellipse_densities):
    assert evaluate_interior(ellipse_system, ellipse_densities, 0, Z2_ELLIPSE) == pytest.approx(0.8742487910, abs=5e-10)
    r = np.hypot(0.35, 0.4)
    exact = [phi(ellipse_system.table, n, r) for n in range(6)]
    np.testing.assert_allclose(interior_values(ellipse_system, ellipse_densities, [Z2_ELLIPSE])[:, 0], exact, atol=1e-10)


def test_field_over_many_points(ellipse_system, ellipse_densities):
    rng = np.random.default_rng(3)
    theta = rng.uniform(0, 2 * np.pi, 50)
    rad = rng.uniform(0.0, 0.8, 50)
    pts = np.stack([0.6 * rad * np.cos(theta), 0.4 * rad * np.sin(theta)], axis=-1)
    u = interior_values(ellipse_system, ellipse_densities, pts)
    dist = np.linalg.norm(pts - np.array(Z1_ELLIPSE), axis=1)
    for n in range(6):
        np.testing.assert_allclose(u[n], phi(ellipse_system.table, n, dist), atol=1e-8)


def test_peanut_reference_value():
    system = _system(1.0, 0.5, 1, peanut(0.5, 0.1), 64)
    psi = solve_sequence(system, boundary_data_from_source(system.table, system.curve, system.mesh, (-0.8, 0.4)))
    assert evaluate_interior(system, psi, 1, (-0.1, 0.1)) == pytest.approx(-0.2012216749, abs=5e-10)


def test_zero_data_and_zero_densities(ellipse_system):
    zero = np.zeros((6, ellipse_system.mesh.size))
    np.testing.assert_array_equal(solve_sequence(ellipse_system, zero), 0.0)
    np.testing.assert_array_equal(interior_values(ellipse_system, zero, [[0.0, 0.0], [0.1, 0.1]]), 0.0)
    np.testing.assert_array_equal(evaluate_spacetime(ellipse_system, zero, [0.0, 0.0], [0.5, 1.0, 2.0]), 0.0)


def test_linearity(ellipse_system, rng):
    f = rng.standard_normal((6, ellipse_system.mesh.size))
    g = rng.standard_normal((6, ellipse_system.mesh.size))
    lhs = solve_sequence(ellipse_system, 2.0 * f - 3.0 * g)
    rhs = 2.0 * solve_sequence(ellipse_system, f) - 3.0 * solve_sequence(ellipse_system, g)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_solution_satisfies_every_order(ellipse_system, rng):
    f = rng.standard_normal((6, ellipse_system.mesh.size))
    psi = solve_sequence(ellipse_system, f)
    for n in range(6):
        lhs = sum(ellipse_system.matrices[n - m] @ psi[m] for m in range(n + 1))
        np.testing.assert_allclose(lhs, f[n], atol=1e-10)


def test_causality(ellipse_system, rng):
    """Changing data at order k leaves densities of lower orders untouched."""
    f = rng.standard_normal((6, ellipse_system.mesh.size))
    g = f.copy()
    g[3:] += rng.standard_normal((3, ellipse_system.mesh.size))
    np.testing.assert_array_equal(solve_sequence(ellipse_system, f)[:3], solve_sequence(ellipse_system, g)[:3])


def test_truncation_matches_separate_solve():
    curve = kite()
    big = _system(1.0, 0.5, 12, curve, 16)
    small = _system(1.0, 0.5, 6, curve, 16)
    f_big = boundary_data_uniform(quadratic_pulse_coefficients(big.table.params), big.mesh)
    f_small = boundary_data_uniform(quadratic_pulse_coefficients(small.table.params), small.mesh)
    np.testing.assert_allclose(solve_sequence(big, f_big)[:7], solve_sequence(small, f_small), atol=1e-13)


def test_kite_reference_values():
    system = _system(1.0, 0.5, 20, kite(), 64)
    psi = solve_sequence(system, boundary_data_uniform(quadratic_pulse_coefficients(system.table.params), system.mesh))
    u = evaluate_spacetime(system, psi, (-0.2, 0.2), [1.0, 3.0])
    assert u[0] == pytest.approx(0.0858239286, abs=5e-9)
    assert u[1] == pytest.approx(2.6046130293, abs=5e-9)
    assert evaluate_spacetime(system, psi, [[-0.2, 0.2]] * 2, [[1.0], [2.0]]).shape == (2, 1, 2)


def test_factorization_reuse(ellipse_system):
    A0 = ellipse_system.matrices[0]
    b = np.arange(ellipse_system.mesh.size, dtype=float)
    np.testing.assert_allclose(A0 @ ellipse_system.solve0(b), b, atol=1e-10)
    assert 1 < ellipse_system.condition < 1e12


def test_ill_conditioned_guard():
    table = compute_coefficients(LaguerreParams(1.0, 1.0, 1))
    with pytest.raises(IllConditionedError):
        KernelSystem.build(table, ellipse(), Mesh(8), condition_limit=1.0)


def test_data_validation(ellipse_system):
    with pytest.raises(ValueError):
        solve_sequence(ellipse_system, np.zeros((3, ellipse_system.mesh.size)))
    bad = np.zeros((6, ellipse_system.mesh.size))
    bad[2, 3] = np.nan
    with pytest.raises(ValueError):
        solve_sequence(ellipse_system, bad)
    with pytest.raises(IndexError):
        evaluate_interior(ellipse_system, bad, 6, (0.0, 0.0))
    with pytest.raises(ValueError):
        evaluate_spacetime(ellipse_system, np.zeros_like(bad), (0.0, 0.0), -1.0)


def test_boundary_data_sign_on_normal_ray():
    table = compute_coefficients(LaguerreParams(1.0, 1.0, 2))
    curve = circle()
    mesh = Mesh(8)
    d = 0.5
    z1 = np.array([1.0 + d, 0.0])  # on the outward normal through x(0)
    f = boundary_data_from_source(table, curve, mesh, z1)
    assert f[0, 0] == pytest.approx(bessel_k(1, d), rel=1e-13)
    assert np.all(np.isfinite(f))


def test_boundary_data_far_source_decays():
    table = compute_coefficients(LaguerreParams(1.0, 1.0, 2))
    curve, mesh = circle(), Mesh(8)
    near = np.abs(boundary_data_from_source(table, curve, mesh, (21.0, 0.0))).max(axis=1)
    far = np.abs(boundary_data_from_source(table, curve, mesh, (41.0, 0.0))).max(axis=1)
    # e^{-gamma d} up to algebraic factors: the log-rate tends to -gamma
    rate = np.log(far / near) / 20.0
    np.testing.assert_allclose(rate, -table.gamma, atol=0.15)


def test_boundary_data_rejects_interior_source():
    table = compute_coefficients(LaguerreParams(1.0, 1.0, 1))
    with pytest.raises(ValueError):
        boundary_data_from_source(table, ellipse(), Mesh(8), (0.1, 0.0))
    with pytest.raises(ValueError):
        boundary_data_from_source(table, ellipse(), Mesh(8), (0.6, 0.0))


def test_near_boundary_warning(ellipse_system, ellipse_densities):
    with pytest.warns(NearBoundaryWarning):
        interior_values(ellipse_system, ellipse_densities, [[0.5995, 0.0]])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        interior_values(ellipse_system, ellipse_densities, [[0.5, 0.0]])
