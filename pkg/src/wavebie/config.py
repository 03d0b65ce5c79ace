"""JSON run configuration for the command-line tool.

Example (the ellipse validation run)::

    {
      "curve": {"kind": "ellipse", "a": 0.6, "b": 0.4},
      "kappa": 1.0, "c": 1.0, "N": 5,
      "m_list": [8, 16, 32, 64],
      "boundary_data": {"mode": "point_source", "z1": [0.6, 0.4]},
      "points": [[0.25, 0.0]],
      "orders": [0, 1, 5]
    }

Keys
----
curve           ``kind`` (ellipse | circle | peanut | kite) plus that curve's keyword parameters
kappa, c        Laguerre parameter and wave speed
N               truncation order (``solve`` also accepts ``n_list``)
M, m_list       mesh half-size; ``m_list`` runs several meshes, ``M`` is the default for ``field``
boundary_data   ``{"mode": "point_source", "z1": [x, y]}``,
                ``{"mode": "signal", "name": "quadratic_pulse"}`` or
                ``{"mode": "tabulated", "times": [...], "values": [...]}``
points          evaluation points ``[[x, y], ...]``
orders          Laguerre orders reported by ``validate`` (default: all)
times           time samples for ``solve`` and ``field``
grid            ``{"x1": [min, max, count], "x2": [min, max, count]}`` for ``field``
boundary_floor  minimum distance of evaluation points to the boundary (default 1e-3)
quad_nodes      Gauss-Laguerre nodes for tabulated signals (default 128)
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from .geometry import Curve, builtin_curve, distance_to_curve, is_inside
from .laguerre import DEFAULT_QUAD_NODES, LaguerreParams, SIGNALS

_MODES = ("point_source", "signal", "tabulated")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    curve: dict
    kappa: float
    c: float
    n_list: List[int]
    m_list: List[int]
    boundary_data: dict
    points: List[Tuple[float, float]] = field(default_factory=list)
    orders: Optional[List[int]] = None
    times: List[float] = field(default_factory=list)
    grid: Optional[dict] = None
    boundary_floor: float = 1e-3
    quad_nodes: int = DEFAULT_QUAD_NODES

    @property
    def N(self) -> int:
        return max(self.n_list)

    @property
    def M(self) -> int:
        return self.m_list[-1]

    def params(self, N: Optional[int] = None) -> LaguerreParams:
        return LaguerreParams(self.kappa, self.c, self.N if N is None else N)

    def build_curve(self) -> Curve:
        kwargs = dict(self.curve)
        kind = kwargs.pop("kind", None)
        if kind is None:
            raise ConfigError("curve.kind is required")
        if "center" in kwargs:
            kwargs["center"] = tuple(kwargs["center"])
        try:
            return builtin_curve(kind, **kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad curve {kind!r}: {exc}") from None

    def grid_points(self) -> np.ndarray:
        if self.grid is None:
            raise ConfigError("the field command needs a 'grid' entry")
        axes = []
        for key in ("x1", "x2"):
            try:
                lo, hi, count = self.grid[key]
            except (KeyError, TypeError, ValueError):
                raise ConfigError(f"grid.{key} must be [min, max, count]") from None
            if int(count) < 1:
                raise ConfigError(f"grid.{key} count must be >= 1")
            axes.append(np.linspace(float(lo), float(hi), int(count)))
        g1, g2 = np.meshgrid(*axes, indexing="ij")
        return np.stack([g1, g2], axis=-1)


def _int_list(values, name, minimum):
    try:
        out = [int(v) for v in values]
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a list of integers") from None
    if not out or any(v < minimum or v != float(x) for v, x in zip(out, values)):
        raise ConfigError(f"{name} entries must be integers >= {minimum}")
    return out


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded JSON object; every failure surfaces as :class:`ConfigError`."""
    try:
        return _parse(raw)
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"malformed config: {exc}") from None


def _parse(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    for key in ("curve", "kappa", "c", "boundary_data"):
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")

    if "n_list" in raw:
        n_list = _int_list(raw["n_list"], "n_list", 0)
    elif "N" in raw:
        n_list = _int_list([raw["N"]], "N", 0)
    else:
        raise ConfigError("one of 'N' or 'n_list' is required")

    if "m_list" in raw:
        m_list = _int_list(raw["m_list"], "m_list", 2)
    elif "M" in raw:
        m_list = _int_list([raw["M"]], "M", 2)
    else:
        raise ConfigError("one of 'M' or 'm_list' is required")

    bd = raw["boundary_data"]
    if not isinstance(bd, dict) or bd.get("mode") not in _MODES:
        raise ConfigError(f"boundary_data.mode must be one of {_MODES}")
    if bd["mode"] == "point_source" and len(bd.get("z1", ())) != 2:
        raise ConfigError("point_source mode needs z1 = [x, y]")
    if bd["mode"] == "signal" and bd.get("name") not in SIGNALS:
        raise ConfigError(f"signal name must be one of {sorted(SIGNALS)}")
    if bd["mode"] == "tabulated" and not ("times" in bd and "values" in bd):
        raise ConfigError("tabulated mode needs 'times' and 'values'")

    points = [tuple(map(float, p)) for p in raw.get("points", [])]
    if any(len(p) != 2 for p in points):
        raise ConfigError("points must be [x, y] pairs")
    times = [float(t) for t in raw.get("times", [])]
    if any(t < 0 for t in times):
        raise ConfigError("times must be non-negative")

    cfg = RunConfig(
        curve=dict(raw["curve"]),
        kappa=float(raw["kappa"]),
        c=float(raw["c"]),
        n_list=n_list,
        m_list=m_list,
        boundary_data=dict(bd),
        points=points,
        orders=None if raw.get("orders") is None else _int_list(raw["orders"], "orders", 0),
        times=times,
        grid=raw.get("grid"),
        boundary_floor=float(raw.get("boundary_floor", 1e-3)),
        quad_nodes=int(raw.get("quad_nodes", DEFAULT_QUAD_NODES)),
    )
    cfg.params()
    if cfg.orders is not None and max(cfg.orders) > cfg.N:
        raise ConfigError(f"orders exceed N={cfg.N}")

    curve = cfg.build_curve()
    if bd["mode"] == "point_source":
        z1 = np.asarray(bd["z1"], dtype=float)
        if is_inside(curve, z1) or distance_to_curve(curve, z1) < 1e-8:
            raise ConfigError(f"source point z1={tuple(z1)} must lie outside the boundary curve")
    if points and not np.all(is_inside(curve, np.array(points))):
        raise ConfigError("all evaluation points must lie inside the boundary curve")
    return cfg


def load_config(path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    return parse_config(raw)
