"""Exact brute-force oracles for small instances.

Bitmask dynamic programs over scaled-integer costs (the lcm of all distance
denominators clears fractions, so int64 arithmetic is exact; a big-int
fallback covers pathological magnitudes).  Each oracle returns the exact
optimal value as a rational plus a deterministic witness.

The cover witness is normalized to the fewest balls among minimum-cost
covers: the DP minimizes (cost, ball count) lexicographically.  For the
linear objective that normalization forces the separation property (no
witness ball is centered inside another), which the correct-guess audit in
the solver relies on.

naive_* variants enumerate solutions outright and exist only to cross-check
the DPs on tiny inputs.
"""

from __future__ import annotations

import itertools

import numpy as np

from .metric import Ball, Instance, candidate_balls, diameter
from .rational import Rat, ZERO, denominator_lcm, rat

COVER_LIMIT = 16
PARTITION_LIMIT = 14
KCENTER_LIMIT = 16
NAIVE_LIMIT = 9

_INF = 1 << 62
_NUMPY_SAFE = 1 << 60


class InstanceTooLarge(ValueError):
    def __init__(self, n: int, limit: int, what: str):
        super().__init__(f"{what} oracle supports up to {limit} points, got {n}")
        self.n = n
        self.limit = limit


def _scaled_dists(inst: Instance, pts):
    q = denominator_lcm(inst.d(i, j) for i in pts for j in pts if i < j)
    scaled = {
        (i, j): int(inst.d(i, j) * q) for i in pts for j in pts
    }
    return q, scaled


def _cover_candidates(inst: Instance, pts, alpha: int):
    """Deduplicated, domination-pruned (mask, int cost, Ball) list in
    canonical order.  q is the denominator-clearing scale."""
    q, scaled = _scaled_dists(inst, pts)
    bit = {p: t for t, p in enumerate(pts)}
    cap = max((inst.d(i, j) for i in pts for j in pts), default=ZERO)
    raw = []
    seen_masks = {}
    for ball in candidate_balls(inst, pts, cap):
        mask = 0
        for j in pts:
            if inst.d(ball.center, j) <= ball.radius:
                mask |= 1 << bit[j]
        cost = int(ball.radius * q) ** alpha
        if mask in seen_masks:
            idx = seen_masks[mask]
            if cost < raw[idx][1]:
                raw[idx] = (mask, cost, ball)
            continue
        seen_masks[mask] = len(raw)
        raw.append((mask, cost, ball))
    kept = []
    for mask, cost, ball in raw:
        dominated = any(
            om != mask and om & mask == mask and oc <= cost
            for om, oc, _ in raw
        )
        if not dominated:
            kept.append((mask, cost, ball))
    return q, kept


def _cover_levels(cands, m: int, k: int):
    """best[t][mask] = min cost covering mask with <= t balls."""
    full = (1 << m) - 1
    kk = min(k, m)
    max_cost = max((c for _, c, _ in cands), default=0)
    if (max_cost + 1) * (kk + 1) < _NUMPY_SAFE:
        idx = np.arange(full + 1, dtype=np.int64)
        level = np.full(full + 1, _INF, dtype=np.int64)
        level[0] = 0
        levels = [level]
        for _ in range(kk):
            nxt = levels[-1].copy()
            for mask, cost, _ in cands:
                np.minimum(nxt, levels[-1][idx & ~mask] + cost, out=nxt)
            levels.append(nxt)
        return kk, [lv.tolist() for lv in levels]
    level = [_INF] * (full + 1)
    level[0] = 0
    levels = [level]
    for _ in range(kk):
        prev = levels[-1]
        nxt = list(prev)
        for mask, cost, _ in cands:
            for s in range(full + 1):
                v = prev[s & ~mask] + cost
                if v < nxt[s]:
                    nxt[s] = v
        levels.append(nxt)
    return kk, levels


def opt_ball_cover(inst: Instance, k: int, alpha: int = 1, restrict=None):
    """Exact optimum of 'cover with at most k balls, minimize sum r**alpha'.

    Returns (value, balls); the witness uses the fewest balls among all
    minimum-cost covers and is deterministic.
    """
    pts = sorted(inst.points() if restrict is None else restrict)
    m = len(pts)
    if m > COVER_LIMIT:
        raise InstanceTooLarge(m, COVER_LIMIT, "ball-cover")
    if k < 1:
        raise ValueError("k must be at least 1")
    if m == 0:
        return ZERO, ()
    q, cands = _cover_candidates(inst, pts, alpha)
    kk, levels = _cover_levels(cands, m, k)
    full = (1 << m) - 1
    best = levels[kk][full]
    assert best < _INF, "zero balls always cover"
    tmin = next(t for t in range(kk + 1) if levels[t][full] == best)

    balls = []
    mask, t = full, tmin
    while t > 0:
        if levels[t - 1][mask] == levels[t][mask]:
            t -= 1
            continue
        for cmask, ccost, ball in cands:
            if levels[t - 1][mask & ~cmask] + ccost == levels[t][mask]:
                balls.append(ball)
                mask &= ~cmask
                t -= 1
                break
        else:
            raise AssertionError("cover backtrack failed")
    assert mask == 0 and len(balls) == tmin
    balls.sort(key=Ball.key)
    return rat(best, q ** alpha), tuple(balls)


def opt_partition_msd(inst: Instance, k: int, restrict=None):
    """Exact optimum of 'partition into at most k clusters, minimize the sum
    of cluster diameters'.  Returns (value, clusters)."""
    pts = sorted(inst.points() if restrict is None else restrict)
    m = len(pts)
    if m > PARTITION_LIMIT:
        raise InstanceTooLarge(m, PARTITION_LIMIT, "partition")
    if k < 1:
        raise ValueError("k must be at least 1")
    if m == 0:
        return ZERO, ()
    q, scaled = _scaled_dists(inst, pts)
    full = (1 << m) - 1

    diam = [0] * (full + 1)
    for mask in range(1, full + 1):
        h = mask.bit_length() - 1
        rest = mask & ~(1 << h)
        best = diam[rest]
        t = rest
        while t:
            b = t & -t
            d = scaled[(pts[h], pts[b.bit_length() - 1])]
            if d > best:
                best = d
            t ^= b
        diam[mask] = best

    kk = min(k, m)
    levels = [[_INF] * (full + 1)]
    levels[0][0] = 0
    for _ in range(kk):
        prev = levels[-1]
        nxt = list(prev)
        for mask in range(1, full + 1):
            lb = mask & -mask
            rest = mask ^ lb
            best = nxt[mask]
            sub = rest
            while True:
                s = sub | lb
                v = prev[mask ^ s] + diam[s]
                if v < best:
                    best = v
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            nxt[mask] = best
        levels.append(nxt)

    best = levels[kk][full]
    clusters = []
    mask, t = full, kk
    while mask:
        assert t > 0, "partition backtrack failed"
        if levels[t - 1][mask] == levels[t][mask]:
            t -= 1
            continue
        lb = mask & -mask
        rest = mask ^ lb
        sub = rest
        found = False
        while True:
            s = sub | lb
            if levels[t - 1][mask ^ s] + diam[s] == levels[t][mask]:
                clusters.append(frozenset(pts[b] for b in _bits(s)))
                mask ^= s
                t -= 1
                found = True
                break
            if sub == 0:
                break
            sub = (sub - 1) & rest
        assert found, "partition backtrack failed"
    return rat(best, q), tuple(sorted(clusters, key=sorted))


def opt_kcenter(inst: Instance, k: int, restrict=None):
    """Exact k-center optimum over a point set (centers inside the set).

    Returns (radius, centers)."""
    pts = sorted(inst.points() if restrict is None else restrict)
    m = len(pts)
    if m > KCENTER_LIMIT:
        raise InstanceTooLarge(m, KCENTER_LIMIT, "k-center")
    if k < 1:
        raise ValueError("k must be at least 1")
    if m == 0:
        return ZERO, ()
    bit = {p: t for t, p in enumerate(pts)}
    full = (1 << m) - 1
    radii = sorted({ZERO} | {inst.d(i, j) for i in pts for j in pts if i < j})

    def masks_at(r):
        return [
            (c, _members_mask(inst, c, r, pts, bit)) for c in pts
        ]

    def feasible(r):
        masks = masks_at(r)
        cover = {0: ()}
        for _ in range(min(k, m)):
            nxt = dict(cover)
            for got, picks in cover.items():
                for c, cm in masks:
                    ng = got | cm
                    if ng not in nxt:
                        nxt[ng] = picks + (c,)
            cover = nxt
            if full in cover:
                return cover[full]
        return cover.get(full)

    lo, hi = 0, len(radii) - 1
    witness = feasible(radii[hi])
    assert witness is not None
    while lo < hi:
        mid = (lo + hi) // 2
        w = feasible(radii[mid])
        if w is not None:
            hi, witness = mid, w
        else:
            lo = mid + 1
    return radii[hi], tuple(sorted(witness))


def _members_mask(inst, c, r, pts, bit):
    mask = 0
    for j in pts:
        if inst.d(c, j) <= r:
            mask |= 1 << bit[j]
    return mask


def _bits(mask):
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


# --- naive enumerations (test cross-checks only) ---------------------------

def naive_ball_cover(inst: Instance, k: int, alpha: int = 1, restrict=None):
    pts = sorted(inst.points() if restrict is None else restrict)
    m = len(pts)
    if m > NAIVE_LIMIT:
        raise InstanceTooLarge(m, NAIVE_LIMIT, "naive cover")
    if m == 0:
        return ZERO, ()
    bit = {p: t for t, p in enumerate(pts)}
    full = (1 << m) - 1
    options = {
        c: sorted({ZERO} | {inst.d(c, j) for j in pts}) for c in pts
    }
    memb = {
        (c, r): _members_mask(inst, c, r, pts, bit)
        for c in pts for r in options[c]
    }
    best = None
    for size in range(1, min(k, m) + 1):
        for centers in itertools.combinations(pts, size):
            for rs in itertools.product(*(options[c] for c in centers)):
                got = 0
                for c, r in zip(centers, rs):
                    got |= memb[(c, r)]
                if got == full:
                    val = sum((r ** alpha for r in rs), ZERO)
                    key = (val, size)
                    if best is None or key < best[0]:
                        balls = tuple(sorted(
                            (Ball(c, r) for c, r in zip(centers, rs)), key=Ball.key
                        ))
                        best = (key, balls)
    assert best is not None
    return best[0][0], best[1]


def naive_partition_msd(inst: Instance, k: int, restrict=None):
    pts = sorted(inst.points() if restrict is None else restrict)
    m = len(pts)
    if m > NAIVE_LIMIT:
        raise InstanceTooLarge(m, NAIVE_LIMIT, "naive partition")
    best = [None]

    def rec(i, blocks):
        if i == m:
            val = sum((diameter(inst, b) for b in blocks), ZERO)
            if best[0] is None or val < best[0][0]:
                best[0] = (val, tuple(frozenset(b) for b in blocks))
            return
        p = pts[i]
        for b in blocks:
            b.append(p)
            rec(i + 1, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([p])
            rec(i + 1, blocks)
            blocks.pop()

    rec(0, [])
    assert best[0] is not None
    return best[0][0], tuple(sorted(best[0][1], key=sorted))


def naive_kcenter(inst: Instance, k: int, restrict=None):
    pts = sorted(inst.points() if restrict is None else restrict)
    m = len(pts)
    if m > NAIVE_LIMIT:
        raise InstanceTooLarge(m, NAIVE_LIMIT, "naive k-center")
    if m == 0:
        return ZERO, ()
    best = None
    for size in range(1, min(k, m) + 1):
        for centers in itertools.combinations(pts, size):
            r = max(min(inst.d(c, p) for c in centers) for p in pts)
            if best is None or r < best[0]:
                best = (r, centers)
    assert best is not None
    return best[0], tuple(best[1])
