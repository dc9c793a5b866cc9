"""Poisson-Delaunay approximation of convex sets."""

import json

from ._pdapprox import (
    ConfigError,
    c_d_bounds,
    c_d_voronoi,
    estimate_c_d,
    kappa,
    omega,
    simplex_moment,
    triangulate,
)
from . import _pdapprox

__all__ = [
    "ConfigError",
    "approximate",
    "c_d_bounds",
    "c_d_voronoi",
    "estimate",
    "estimate_c_d",
    "kappa",
    "normalize_config",
    "omega",
    "run_experiment",
    "simplex_moment",
    "target_volume",
    "triangulate",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def approximate(points, target):
    """Volume of the cells of the Delaunay triangulation of `points` whose
    circumcenter lies in `target` (a target dict or JSON string)."""
    return _pdapprox.approximate(points, _text(target))


def target_volume(target):
    return _pdapprox.target_volume(_text(target))


def normalize_config(config):
    return json.loads(_pdapprox.normalize_config(_text(config)))


def estimate(config):
    return _pdapprox.estimate(_text(config))


def run_experiment(config):
    """Returns (summary dict, records.csv text)."""
    summary, records = _pdapprox.run_experiment(_text(config))
    return json.loads(summary), records
