"""Deterministic sample generators (seeded numpy Generator in, points out)."""

from __future__ import annotations

import math

import numpy as np


def polydisk_points(rng: np.random.Generator, dim: int, n: int,
                    r_min: float = 0.05, r_max: float = 0.95) -> list[tuple[complex, ...]]:
    """Random points with every coordinate modulus in [r_min, r_max]."""
    points = []
    for _ in range(n):
        radii = rng.uniform(r_min, r_max, size=dim)
        phases = rng.uniform(0.0, 2.0 * math.pi, size=dim)
        points.append(tuple(r * complex(math.cos(p), math.sin(p))
                            for r, p in zip(radii, phases)))
    return points


def torus_points(rng: np.random.Generator, dim: int, n: int,
                 radius: float) -> list[tuple[complex, ...]]:
    """Random points with every coordinate of fixed modulus (polydisk skeleton)."""
    return polydisk_points(rng, dim, n, r_min=radius, r_max=radius)


def halfplane_points(rng: np.random.Generator, n: int,
                     x_range: tuple[float, float] = (0.1, 3.0),
                     y_range: tuple[float, float] = (-3.0, 3.0)) -> list[complex]:
    """Random points in a rectangle of the right half-plane."""
    xs = rng.uniform(*x_range, size=n)
    ys = rng.uniform(*y_range, size=n)
    return [complex(x, y) for x, y in zip(xs, ys)]
