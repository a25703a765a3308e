"""Turning a bi-point pair into one integral solution.

Each ball of the large side B1 is attached to the lowest-id ball of the
small side B2 it intersects; a group is an anchor plus its members.  For a
group we either keep the tripled members (cost A_g) or replace the whole
group by a single merged object covering the union of the tripled members
(cost M_g, bounded by an exact case analysis on the anchor radius R1 and
the two largest member radii R2 >= R3).  A one-row fractional knapsack
picks the cheaper mix that fits the ball budget, the lone fractional group
is rounded up, and the result competes against plain tripled B2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .audit import Audit
from .bipoint import BiPoint
from .lp import linprog, solve as lp_solve
from .metric import Ball, EmptySubset, Instance, ball_members, cost, diameter
from .rational import Rat, ZERO, rat

OBJECTIVES = ("msr", "msd", "mssr")
ALPHA = {"msr": 1, "msd": 1, "mssr": 2}
BETA = {"msr": rat(288, 85), "msd": rat(72, 11), "mssr": rat(144, 13)}


class NoIntersectingAnchor(RuntimeError):
    """A B1 ball met no B2 ball; the bi-point invariant was broken."""


class InfeasibleBudget(RuntimeError):
    """Even merging every group exceeds the ball budget; the bi-point
    size invariant was broken."""


@dataclass(frozen=True)
class Group:
    anchor: Ball
    members: tuple

    @property
    def i1(self) -> int:
        return self.anchor.center

    @property
    def r1(self) -> Rat:
        return self.anchor.radius

    @property
    def r2(self) -> Rat:
        return max(b.radius for b in self.members)

    @property
    def i2(self) -> int:
        r2 = self.r2
        return min(b.center for b in self.members if b.radius == r2)

    @property
    def r3(self) -> Rat:
        radii = sorted((b.radius for b in self.members), reverse=True)
        return radii[1] if len(radii) > 1 else ZERO

    @property
    def c_sum(self) -> Rat:
        return cost(self.members, 1)

    @property
    def c_sq(self) -> Rat:
        return cost(self.members, 2)


@dataclass(frozen=True)
class MergePlan:
    z: tuple
    lp_value: Rat
    int_value: Rat
    rounded: int | None


def form_groups(inst: Instance, x_prime, b1, b2) -> tuple:
    """Partition B1 among anchors from B2 (lowest intersecting center id,
    intersections taken inside X')."""
    pts = sorted(x_prime)
    mems2 = [(ball, ball_members(inst, ball, pts)) for ball in sorted(b2, key=Ball.key)]
    buckets: dict[Ball, list] = {}
    for ball in sorted(b1, key=Ball.key):
        mem = ball_members(inst, ball, pts)
        anchor = None
        for b2ball, mem2 in mems2:
            if mem & mem2:
                if anchor is None or b2ball.center < anchor.center:
                    anchor = b2ball
        if anchor is None:
            raise NoIntersectingAnchor(f"{ball} meets nothing in B2")
        buckets.setdefault(anchor, []).append(ball)
    groups = [
        Group(anchor=a, members=tuple(sorted(ms, key=Ball.key)))
        for a, ms in buckets.items()
    ]
    groups.sort(key=lambda g: g.anchor.center)
    return tuple(groups)


def anchor_witness(inst: Instance, x_prime, group: Group) -> int:
    """Lowest-id point of X' in both the anchor ball and the largest member
    ball; exists because the member was anchored through an intersection."""
    m1 = ball_members(inst, group.anchor, x_prime)
    m2 = ball_members(inst, Ball(group.i2, group.r2), x_prime)
    both = m1 & m2
    if not both:
        raise NoIntersectingAnchor(f"anchor witness missing for {group.anchor}")
    return min(both)


def min_enclosing_ball(inst: Instance, centers, targets) -> Ball:
    """Smallest ball on an allowed center covering all targets (ties to the
    lowest center id)."""
    tgt = sorted(targets)
    if not tgt:
        raise EmptySubset("min_enclosing_ball of no targets")
    best = None
    for c in sorted(centers):
        r = max(inst.d(c, j) for j in tgt)
        if best is None or r < best.radius:
            best = Ball(c, r)
    if best is None:
        raise EmptySubset("min_enclosing_ball with no allowed centers")
    return best


def tripled_union(inst: Instance, x_prime, group: Group) -> frozenset:
    out = frozenset()
    for b in group.members:
        out |= ball_members(inst, Ball(b.center, 3 * b.radius), x_prime)
    return out


def merge_bound_msr(group: Group, audit: Audit | None = None) -> Rat:
    """Case-selected upper bound on the merged ball radius (linear costs)."""
    r1, r2, r3, c = group.r1, group.r2, group.r3, group.c_sum
    wide = r1 + 4 * r2
    if 3 * r3 > r2:
        bound = wide
    elif 5 * r2 >= 6 * r1:
        bound = max(3 * r2, 2 * r1 + r2 + 4 * r3)
    elif 8 * r2 >= 3 * r1:
        bound = max(4 * r2, 2 * r1 + 4 * r3)
    else:
        bound = wide
    if audit is not None:
        audit.compare("merge_case_cap_msr", bound, "<=",
                      rat(11, 8) * r1 + 3 * c)
    return bound


def merge_bound_mssr(group: Group) -> Rat:
    """Case-selected upper bound on the merged ball squared radius."""
    r1, r2 = group.r1, group.r2
    if 2 * r2 >= r1:
        return 9 * r2 ** 2
    return rat(27, 4) * r1 ** 2 + 9 * r2 ** 2


def merge_ball_msr(inst: Instance, x_prime, group: Group, audit: Audit) -> Ball:
    ball = min_enclosing_ball(inst, x_prime, tripled_union(inst, x_prime, group))
    bound = merge_bound_msr(group, audit)
    audit.compare("merge_bound_msr", ball.radius, "<=", bound)
    return ball


def merge_ball_mssr(inst: Instance, x_prime, group: Group, audit: Audit) -> Ball:
    ball = min_enclosing_ball(inst, x_prime, tripled_union(inst, x_prime, group))
    audit.compare("merge_bound_mssr", ball.radius ** 2, "<=",
                  merge_bound_mssr(group))
    return ball


def merge_cluster_msd(inst: Instance, x_prime, group: Group, audit: Audit) -> frozenset:
    cluster = tripled_union(inst, x_prime, group)
    audit.compare("merge_bound_msd", diameter(inst, cluster), "<=",
                  2 * group.r1 + 6 * group.c_sum)
    return cluster


def choose_groups(entries, k_prime: int) -> MergePlan:
    """Exact optimum of the one-row relaxation: entries are (size, tripled
    cost A, merged cost M); z=1 means merge.  The at-most-one fractional
    coordinate of the LP optimum is rounded up."""
    n = len(entries)
    z = [0] * n
    count = sum(w for w, _, _ in entries)
    value = sum((a for _, a, _ in entries), ZERO)
    lp_value = value
    for idx, (w, a, m) in enumerate(entries):
        if m <= a:
            z[idx] = 1
            count -= w - 1
            value += m - a
            lp_value += m - a
    rounded = None
    if count > k_prime:
        rem = [
            (rat(m - a, w - 1), idx)
            for idx, (w, a, m) in enumerate(entries)
            if z[idx] == 0 and w >= 2
        ]
        rem.sort()
        need = count - k_prime
        for rate, idx in rem:
            w, a, m = entries[idx]
            save = w - 1
            z[idx] = 1
            value += m - a
            count -= save
            if save >= need:
                frac = rat(need, save)
                lp_value += frac * (m - a)
                if frac < 1:
                    rounded = idx
                need = 0
                break
            lp_value += m - a
            need -= save
        if need > 0:
            raise InfeasibleBudget(f"cannot reach {k_prime} objects")
    assert count <= k_prime
    return MergePlan(z=tuple(z), lp_value=lp_value, int_value=value,
                     rounded=rounded)


def choose_groups_lp(entries, k_prime: int):
    """The same relaxation through the exact simplex (cross-check only)."""
    n = len(entries)
    rows = []
    # merging group g frees w_g - 1 slots; enough must be freed to fit k'
    coeffs = tuple(rat(w - 1) for w, _, _ in entries)
    rows.append((coeffs, ">=", sum(w for w, _, _ in entries) - rat(k_prime)))
    for idx in range(n):
        unit = tuple(rat(1) if j == idx else ZERO for j in range(n))
        rows.append((unit, "<=", rat(1)))
    objective = [m - a for _, a, m in entries]
    res = lp_solve(linprog("min", objective, rows))
    offset = sum((a for _, a, _ in entries), ZERO)
    return res, offset


def _induced_clusters(inst: Instance, x_prime, point_sets):
    """Assign each point of X' to the first object containing it; returns
    the nonempty clusters in object order."""
    taken: dict[int, int] = {}
    for idx, pts in enumerate(point_sets):
        for p in sorted(pts):
            if p not in taken:
                taken[p] = idx
    missing = set(x_prime) - set(taken)
    clusters: dict[int, set] = {}
    for p, idx in taken.items():
        clusters.setdefault(idx, set()).add(p)
    ordered = [frozenset(clusters[i]) for i in sorted(clusters)]
    return ordered, not missing


@dataclass(frozen=True)
class CombineResult:
    objective: str
    objects: tuple
    value: Rat
    chosen: str
    a: Rat
    b: Rat
    cost1: Rat
    cost2: Rat
    groups: tuple
    plan: MergePlan
    rounded_cap: Rat


def combine_solutions(inst: Instance, ctx, objective: str, bp: BiPoint,
                      audit: Audit) -> CombineResult:
    alpha = ALPHA[objective]
    pts = sorted(ctx.x_prime)
    k_prime = ctx.k_prime

    if bp.k1 == bp.k2:
        a, b = rat(1), ZERO
    else:
        a = rat(k_prime - bp.k2, bp.k1 - bp.k2)
        b = rat(bp.k1 - k_prime, bp.k1 - bp.k2)
    audit.require("combine_ab",
                  ZERO <= a <= 1 and ZERO <= b <= 1
                  and a + b == 1 and a * bp.k1 + b * bp.k2 == k_prime)

    groups = form_groups(inst, pts, bp.b1, bp.b2)
    audit.compare("combine_member_count",
                  sum(len(g.members) for g in groups), "==", bp.k1)

    # Candidate 1: tripled B2.
    tripled_b2 = tuple(Ball(bl.center, 3 * bl.radius) for bl in bp.b2)
    entries = []
    merged = []
    for g in groups:
        anchor_witness(inst, pts, g)  # raises if the invariant broke
        if objective == "msr":
            mb = merge_ball_msr(inst, pts, g, audit)
            audit.compare("merge_cap_global_msr", merge_bound_msr(g), "<=",
                          14 * rat(ctx.r_m))
            entries.append((len(g.members), 3 * g.c_sum, mb.radius))
            merged.append(mb)
        elif objective == "mssr":
            mb = merge_ball_mssr(inst, pts, g, audit)
            entries.append((len(g.members), 9 * g.c_sq, mb.radius ** 2))
            merged.append(mb)
        else:
            cl = merge_cluster_msd(inst, pts, g, audit)
            entries.append((len(g.members), 6 * g.c_sum, diameter(inst, cl)))
            merged.append(cl)

    plan = choose_groups(entries, k_prime)
    audit.compare(
        "lp_choose_budget",
        sum((1 if z else w) for z, (w, _, _) in zip(plan.z, entries)),
        "<=", k_prime,
    )
    zb_value = sum(((1 - b) * a_g + b * m_g for _, a_g, m_g in entries), ZERO)
    audit.compare("lp_choose_zb", plan.lp_value, "<=", zb_value,
                  note="uniform z=b is feasible for the relaxation")
    rounded_cap = ZERO
    if plan.rounded is not None:
        rounded_cap = entries[plan.rounded][2]
    audit.compare("lp_choose_roundup", plan.int_value, "<=",
                  plan.lp_value + rounded_cap)

    if objective in ("msr", "mssr"):
        c1 = cost(bp.b1, alpha)
        c2 = cost(bp.b2, alpha)
        objects1 = tripled_b2
        value1 = cost(objects1, alpha)
        objects2 = []
        for g, z, mb in zip(groups, plan.z, merged):
            if z:
                objects2.append(mb)
            else:
                objects2.extend(Ball(m.center, 3 * m.radius) for m in g.members)
        objects2 = tuple(objects2)
        value2 = cost(objects2, alpha)
        audit.compare("combine_plan_value", value2, "==", plan.int_value)
        cover1 = frozenset().union(*(ball_members(inst, bl, pts) for bl in objects1))
        cover2 = frozenset().union(*(ball_members(inst, bl, pts) for bl in objects2))
        audit.require("combine_cover", cover1 == frozenset(pts) == cover2)
        tripled_cap = {1: 3, 2: 9}[alpha] * c2
    else:
        c1 = cost(bp.b1, 1)
        c2 = cost(bp.b2, 1)
        sets1 = [ball_members(inst, bl, pts) for bl in tripled_b2]
        objects1, ok1 = _induced_clusters(inst, pts, sets1)
        value1 = sum((diameter(inst, cl) for cl in objects1), ZERO)
        sets2 = []
        for g, z, mcl in zip(groups, plan.z, merged):
            if z:
                sets2.append(mcl)
            else:
                sets2.extend(
                    ball_members(inst, Ball(m.center, 3 * m.radius), pts)
                    for m in g.members
                )
        objects2, ok2 = _induced_clusters(inst, pts, sets2)
        value2 = sum((diameter(inst, cl) for cl in objects2), ZERO)
        audit.require("combine_cover", ok1 and ok2)
        audit.compare("combine_plan_value", value2, "<=", plan.int_value,
                      note="deduplication only shrinks diameters")
        objects1, objects2 = tuple(objects1), tuple(objects2)
        tripled_cap = 6 * c2

    audit.compare("combine_c1_cap", value1, "<=", tripled_cap)
    if value2 <= value1:
        chosen, objects, value = "merged", objects2, value2
    else:
        chosen, objects, value = "tripled_b2", objects1, value1
    audit.compare(
        f"combine_beta_{objective}",
        value, "<=",
        BETA[objective] * (a * c1 + b * c2) + rounded_cap,
        note="interpolated candidate bound",
    )
    return CombineResult(
        objective=objective, objects=objects, value=value, chosen=chosen,
        a=a, b=b, cost1=c1, cost2=c2, groups=groups, plan=plan,
        rounded_cap=rounded_cap,
    )
