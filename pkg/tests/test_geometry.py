import numpy as np
import pytest

from wavebie.geometry import (
    Curve,
    builtin_curve,
    chord,
    circle,
    distance_to_curve,
    ellipse,
    h1_h2,
    h_tangent,
    is_inside,
    kite,
    peanut,
    winding_number,
)

CURVES = {
    "ellipse": ellipse(0.6, 0.4),
    "peanut": peanut(0.5, 0.1),
    "kite": kite(),
    "circle": circle(1.3, (0.2, -0.1)),
}


def test_curve_points():
    e = CURVES["ellipse"]
    np.testing.assert_allclose(e.x(0.0), [0.6, 0.0])
    np.testing.assert_allclose(e.normal(0.0), [1.0, 0.0])
    np.testing.assert_allclose(CURVES["kite"].x(0.0), [0.1, 0.1])
    np.testing.assert_allclose(CURVES["peanut"].x(np.pi / 2), [0.0, np.sqrt(0.1)], atol=1e-15)


@pytest.mark.parametrize("name", sorted(CURVES))
def test_derivatives_by_finite_differences(name):
    curve = CURVES[name]
    s = np.linspace(0.0, 2 * np.pi, 17)
    h = 1e-5
    for f, df in ((curve.x, curve.dx), (curve.dx, curve.ddx), (curve.ddx, curve.dddx)):
        fd = (f(s + h) - f(s - h)) / (2 * h)
        np.testing.assert_allclose(fd, df(s), atol=1e-8)


@pytest.mark.parametrize("name", sorted(CURVES))
def test_normals_point_outward(name):
    curve = CURVES[name]
    s = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    nu = curve.normal(s)
    np.testing.assert_allclose(np.linalg.norm(nu, axis=-1), 1.0)
    outside = curve.x(s) + 1e-3 * nu
    inside = curve.x(s) - 1e-3 * nu
    assert not np.any(is_inside(curve, outside))
    assert np.all(is_inside(curve, inside))


@pytest.mark.parametrize("name", sorted(CURVES))
def test_counterclockwise_orientation(name):
    curve = CURVES[name]
    s = np.linspace(0.0, 2 * np.pi, 4096, endpoint=False)
    x, dx = curve.x(s), curve.dx(s)
    area = 0.5 * np.mean(x[:, 0] * dx[:, 1] - x[:, 1] * dx[:, 0]) * 2 * np.pi
    assert area > 0


def test_circle_chord_and_h():
    c = circle()
    assert chord(c, 1.0, 0.2) == pytest.approx(2 * abs(np.sin(0.4)), abs=1e-15)
    assert chord(c, 1.0, 0.2) == pytest.approx(0.778837, abs=1e-6)
    assert chord(c, 0.7, 0.7) == 0.0
    assert h_tangent(c, np.pi / 2, 0.0) == pytest.approx(np.cos(np.pi / 4))
    delta = np.linspace(-3.0, 3.0, 13)
    delta = delta[delta != 0]
    np.testing.assert_allclose(h_tangent(c, delta, 0.0), np.sign(np.sin(delta / 2)) * np.cos(delta / 2))
    with pytest.raises(ValueError):
        h_tangent(c, 1.0, 1.0)


def test_h1_h2_circle_and_diagonal():
    c = circle()
    h1, h2 = h1_h2(c, 0.6, 0.0)
    assert h1 == pytest.approx(-np.cos(0.3) ** 2)
    assert h1 == pytest.approx(-0.9126678, abs=1e-7)
    e = CURVES["ellipse"]
    h1d, h2d = h1_h2(e, 1.1, 1.1)
    assert h1d == pytest.approx(-e.speed(1.1))
    assert h2d == 0.0


@pytest.mark.parametrize("name", ["ellipse", "peanut", "kite"])
def test_h1_h2_continuous_at_diagonal(name):
    curve = CURVES[name]
    s = 0.9
    d1, d2 = h1_h2(curve, s, s)
    for delta in (1e-3, 1e-4):
        h1, h2 = h1_h2(curve, s, s + delta)
        assert h1 == pytest.approx(d1, abs=10 * delta)
        assert h2 == pytest.approx(d2, abs=10 * delta)


def test_winding_and_distance():
    c = circle()
    pts = np.array([[0.0, 0.0], [0.5, 0.5], [2.0, 0.0], [0.0, -1.5]])
    np.testing.assert_allclose(winding_number(c, pts), [1, 1, 0, 0], atol=1e-10)
    np.testing.assert_allclose(distance_to_curve(c, pts), [1.0, 1 - np.sqrt(0.5), 1.0, 0.5], atol=1e-5)
    grid = np.zeros((3, 4, 2))
    assert is_inside(c, grid).shape == (3, 4)


def test_builtin_and_degenerate():
    assert builtin_curve("kite").name == "kite"
    with pytest.raises(ValueError):
        builtin_curve("triangle")
    with pytest.raises(ValueError):
        ellipse(0.0, 0.4)
    with pytest.raises(ValueError):
        peanut(-1.0, 0.1)
    zero = lambda s: np.zeros(np.shape(s) + (2,))
    with pytest.raises(ValueError):
        Curve(zero, zero, zero, zero)
