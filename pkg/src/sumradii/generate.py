"""Seeded instance generators for benchmarks and tests."""

from __future__ import annotations

import random

from .metric import (
    Instance,
    TriangleViolation,
    rationalize_euclidean,
    validate_instance,
)


def random_metric_instance(n: int, k: int, seed, max_weight: int = 24) -> Instance:
    """Integer metric from the shortest-path closure of a random weighted
    complete graph; always validates."""
    if n < 1:
        raise ValueError("need at least one point")
    rng = random.Random(f"rm:{seed}")
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = rng.randint(1, max_weight)
    for t in range(n):
        for i in range(n):
            dit = d[i][t]
            for j in range(n):
                if dit + d[t][j] < d[i][j]:
                    d[i][j] = dit + d[t][j]
    return validate_instance(d, k)


def euclidean_instance(n: int, k: int, seed, grid: int = 40,
                       denom: int = 16) -> Instance:
    """Distinct integer-grid points with distances rounded to 1/denom.

    Rounding can break the triangle inequality for near-collinear triples;
    those draws are rare and simply redrawn with a salted seed.
    """
    if n < 1:
        raise ValueError("need at least one point")
    if n > (grid + 1) ** 2:
        raise ValueError("grid too small for that many distinct points")
    for salt in range(64):
        rng = random.Random(f"eu:{seed}:{salt}")
        pts: set = set()
        while len(pts) < n:
            pts.add((rng.randint(0, grid), rng.randint(0, grid)))
        coords = sorted(pts)
        rng.shuffle(coords)
        try:
            rows = rationalize_euclidean(coords, denom)
            return validate_instance(rows, k, coords=coords)
        except TriangleViolation:
            continue
    raise RuntimeError("could not draw a valid euclidean instance")


SPACES = ("random-metric", "euclidean2d")


def make_instance(space: str, n: int, k: int, seed) -> Instance:
    if space == "random-metric":
        return random_metric_instance(n, k, seed)
    if space == "euclidean2d":
        return euclidean_instance(n, k, seed)
    raise ValueError(f"unknown space {space!r}")


def suite(count: int, seed, n_range=(6, 12), k_range=(2, 4),
          spaces=SPACES):
    """Deterministic benchmark suite: (name, Instance) pairs with sizes
    drawn uniformly from the given ranges, alternating spaces."""
    out = []
    for idx in range(count):
        rng = random.Random(f"suite:{seed}:{idx}")
        n = rng.randint(*n_range)
        k = rng.randint(*k_range)
        space = spaces[idx % len(spaces)]
        name = f"{space}-n{n}-k{k}-i{idx:03d}"
        out.append((name, make_instance(space, n, k, f"{seed}:{idx}")))
    return out
