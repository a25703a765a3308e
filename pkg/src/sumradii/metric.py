"""Finite metric instances and ball primitives.

An Instance is a validated, deduplicated finite metric with a cluster
budget k.  Validation is exact: symmetry, nonnegativity, and every triangle
inequality are checked in rational arithmetic, and points at distance zero
are collapsed onto the lowest-id representative (the alias table remembers
the collapse for reporting).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .rational import Rat, ZERO, format_rat, nearest_sqrt, parse_rat, rat


class InvalidInstance(ValueError):
    """Malformed instance input (wrong shape, bad numbers, bad budget)."""


class AsymmetricMatrix(InvalidInstance):
    def __init__(self, i: int, j: int):
        super().__init__(f"dist[{i}][{j}] != dist[{j}][{i}]")
        self.pair = (i, j)


class NegativeDistance(InvalidInstance):
    def __init__(self, i: int, j: int):
        super().__init__(f"dist[{i}][{j}] < 0")
        self.pair = (i, j)


class TriangleViolation(InvalidInstance):
    def __init__(self, i: int, j: int, k: int, message: str | None = None):
        super().__init__(message or f"d({i},{k}) > d({i},{j}) + d({j},{k})")
        self.triple = (i, j, k)


class TriangleViolationAfterRounding(TriangleViolation):
    def __init__(self, i: int, j: int, k: int, denom: int):
        super().__init__(
            i, j, k,
            f"rounded distances violate d({i},{k}) <= d({i},{j}) + d({j},{k}); "
            f"try a larger denom than {denom}",
        )
        self.denom = denom


class EmptySubset(ValueError):
    """A diameter or enclosing-ball query over no points."""


class Ball(NamedTuple):
    center: int
    radius: Rat

    def key(self):
        """Canonical processing order: radius descending, center ascending."""
        return (-self.radius, self.center)


@dataclass(frozen=True)
class Instance:
    """A deduplicated finite metric with budget k.

    aliases[i] lists the original input ids collapsed onto point i; coords
    (if present) are the plane coordinates of the kept points, used only
    for rendering.
    """

    dist: tuple
    k: int
    aliases: tuple = field(default=())
    coords: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.dist)

    def d(self, i: int, j: int) -> Rat:
        return self.dist[i][j]

    def points(self) -> range:
        return range(self.n)


def validate_instance(dist, k, coords=None) -> Instance:
    """Parse, check, and deduplicate a raw distance matrix.

    Raises AsymmetricMatrix / NegativeDistance / TriangleViolation (with a
    witness triple in original ids) or InvalidInstance for shape problems.
    """
    rows = [[parse_rat(v) for v in row] for row in dist]
    n = len(rows)
    if n == 0:
        raise InvalidInstance("empty distance matrix")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InvalidInstance(f"row {i} has length {len(row)}, expected {n}")
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InvalidInstance(f"k must be a positive integer, got {k!r}")
    for i in range(n):
        if rows[i][i] != 0:
            raise InvalidInstance(f"dist[{i}][{i}] must be 0")
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise AsymmetricMatrix(i, j)
            if rows[i][j] < 0:
                raise NegativeDistance(i, j)

    # Collapse zero-distance pairs onto the lowest original id.
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] == 0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    kept = sorted(groups)
    # Colocated points must agree with the metric: equal rows, else some
    # triangle through the zero edge is violated.
    for rep, members in groups.items():
        for m in members:
            for j in range(n):
                if rows[rep][j] > rows[m][j]:
                    raise TriangleViolation(rep, m, j)
                if rows[m][j] > rows[rep][j]:
                    raise TriangleViolation(m, rep, j)

    index = {orig: idx for idx, orig in enumerate(kept)}
    reduced = tuple(
        tuple(rows[a][b] for b in kept) for a in kept
    )
    m = len(kept)
    for i in range(m):
        for j in range(m):
            if i != j and reduced[i][j] == 0:
                raise InvalidInstance("dedup left a zero off-diagonal distance")
            for t in range(m):
                if reduced[i][j] > reduced[i][t] + reduced[t][j]:
                    raise TriangleViolation(kept[i], kept[t], kept[j])

    aliases = tuple(tuple(groups[rep]) for rep in kept)
    kept_coords = None
    if coords is not None:
        kept_coords = tuple(tuple(rat(c) for c in coords[orig]) for orig in kept)
    return Instance(dist=reduced, k=k, aliases=aliases, coords=kept_coords)


def ball_members(inst: Instance, ball: Ball, restrict=None) -> frozenset:
    """Points of `restrict` (default: all) within the ball, center included."""
    pts = inst.points() if restrict is None else restrict
    c, r = ball
    return frozenset(j for j in pts if inst.d(c, j) <= r)


def covers(inst: Instance, balls, targets) -> bool:
    for j in targets:
        if not any(inst.d(c, j) <= r for c, r in balls):
            return False
    return True


def cost(balls, exponent: int = 1) -> Rat:
    """Sum of radius**exponent over a ball collection."""
    total = ZERO
    for _, r in balls:
        total += r ** exponent
    return total


def diameter(inst: Instance, subset) -> Rat:
    pts = sorted(subset)
    if not pts:
        raise EmptySubset("diameter of an empty subset")
    best = ZERO
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            d = inst.d(pts[a], pts[b])
            if d > best:
                best = d
    return best


def candidate_balls(inst: Instance, restrict, cap) -> list:
    """Every ball (i, r) with i in restrict and r in {0} + {d(i,j) <= cap},
    j ranging over restrict, in canonical order (radius desc, center asc)."""
    out = []
    for i in sorted(restrict):
        radii = {ZERO}
        for j in restrict:
            d = inst.d(i, j)
            if 0 < d <= cap:
                radii.add(d)
        out.extend(Ball(i, r) for r in radii)
    out.sort(key=Ball.key)
    return out


def rationalize_euclidean(coords: Sequence[Sequence], denom: int) -> list:
    """Pairwise Euclidean distances rounded to the nearest 1/denom, exactly.

    Input coordinates may be ints, rationals, or floats (floats are exact
    binary rationals and are converted losslessly).
    """
    if denom < 1:
        raise InvalidInstance(f"denom must be >= 1, got {denom}")
    pts = [tuple(rat(c) for c in p) for p in coords]
    n = len(pts)
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            sq = sum((a - b) ** 2 for a, b in zip(pts[i], pts[j]))
            rows[i][j] = rows[j][i] = nearest_sqrt(sq, denom)
    return rows


# --- instance JSON ---------------------------------------------------------

def instance_from_json(obj) -> Instance:
    """Build an Instance from the documented JSON object form.

    Either {"k": int, "dist": [[rational]]} or
    {"k": int, "coords": [[number]], "denom": int}.
    """
    if not isinstance(obj, dict):
        raise InvalidInstance("instance JSON must be an object")
    if "k" not in obj:
        raise InvalidInstance("instance JSON needs a 'k' field")
    k = obj["k"]
    if "dist" in obj:
        return validate_instance(obj["dist"], k, coords=obj.get("coords"))
    if "coords" in obj:
        denom = obj.get("denom", 1)
        if not isinstance(denom, int) or isinstance(denom, bool) or denom < 1:
            raise InvalidInstance(f"denom must be a positive integer, got {denom!r}")
        coords = obj["coords"]
        try:
            rows = rationalize_euclidean(coords, denom)
            return validate_instance(rows, k, coords=coords)
        except TriangleViolation as exc:
            i, j, t = exc.triple
            raise TriangleViolationAfterRounding(i, j, t, denom) from exc
    raise InvalidInstance("instance JSON needs 'dist' or 'coords'")


def instance_to_json(inst: Instance) -> dict:
    out = {
        "k": inst.k,
        "dist": [[format_rat(v) for v in row] for row in inst.dist],
    }
    if inst.coords is not None:
        out["coords"] = [[format_rat(c) for c in p] for p in inst.coords]
    return out
