"""Farthest-first traversal (the classic 2-approximation for k-center).

Used as the cheap feasibility precheck in front of the Lagrangian pipeline:
a guess only survives if k' farthest-first centers cover the uncovered
points within twice the smallest guessed radius.
"""

from __future__ import annotations

from typing import NamedTuple

from .metric import EmptySubset, Instance
from .rational import Rat


class KCenterResult(NamedTuple):
    centers: tuple
    radius: Rat


def farthest_first(inst: Instance, restrict, k: int) -> KCenterResult:
    """Pick up to k centers greedily; radius is the worst remaining distance.

    Deterministic: the first center is the lowest point id, and distance
    ties go to the lowest id.
    """
    pts = sorted(restrict)
    if not pts:
        raise EmptySubset("farthest_first over no points")
    if k < 1:
        raise ValueError("center budget must be at least 1")
    centers = []
    nearest = {p: None for p in pts}
    while len(centers) < k and len(centers) < len(pts):
        if not centers:
            pick = pts[0]
        else:
            pick, far = None, None
            for p in pts:
                d = nearest[p]
                if far is None or d > far:
                    pick, far = p, d
            if far == 0:
                break  # everything already coincides with a center
        centers.append(pick)
        for p in pts:
            d = inst.d(pick, p)
            if nearest[p] is None or d < nearest[p]:
                nearest[p] = d
    radius = max(nearest[p] for p in pts)
    return KCenterResult(centers=tuple(centers), radius=radius)
