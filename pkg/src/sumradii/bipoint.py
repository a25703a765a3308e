"""Lagrangian bi-point search over the exact covering relaxation.

For a surviving guess context (uncovered points X', ball budget k', radius
cap 2*R_m) this module binary-searches the Lagrange multiplier of the
"number of balls" term until it holds two rounded optimal solutions that
straddle the budget at a common multiplier: B1 with at least k' balls and
B2 with at most k', both pairwise disjoint, both covering X' when tripled,
and both satisfying cost + lambda*|B| <= OPT_LP(lambda).

The search is the plain bisection skeleton with two exits run eagerly every
iteration: the classic optimality check of the low solution at the high
multiplier, and the break-point probe (the largest multiplier at which the
low solution stays optimal, computed by an auxiliary exact LP over the dual).
Any rounded solution of exactly k' balls short-circuits immediately.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .audit import Audit
from .lp import OPTIMAL, UNBOUNDED, LinearProgram, linprog, solve
from .metric import Ball, Instance, ball_members, candidate_balls, cost
from .rational import ONE, Rat, ZERO, denominator_lcm, rat

log = logging.getLogger(__name__)


class EmptyXPrime(ValueError):
    """Bi-point search invoked with nothing left to cover."""


class AuxInfeasible(RuntimeError):
    """The break-point LP rejected a solution that should be optimal
    somewhere; indicates an arithmetic bug."""


class WindowCollapse(RuntimeError):
    """The search window shrank past the break-point gap without producing
    a bi-point; indicates an arithmetic bug."""


@dataclass(frozen=True)
class BiPoint:
    lam: Rat
    b1: tuple
    b2: tuple
    lp_value: Rat

    @property
    def k1(self) -> int:
        return len(self.b1)

    @property
    def k2(self) -> int:
        return len(self.b2)


class _CoverSystem:
    """The covering LP family over X' (only the objective moves with
    lambda), plus the member sets every rounding step needs."""

    def __init__(self, inst: Instance, x_prime, r_m, alpha: int):
        self.inst = inst
        self.pts = sorted(x_prime)
        self.x_prime = frozenset(x_prime)
        self.alpha = alpha
        self.cap = 2 * rat(r_m)
        self.cands = candidate_balls(inst, self.pts, self.cap)
        self.members = [ball_members(inst, b, self.pts) for b in self.cands]
        self.base = tuple(b.radius ** alpha for b in self.cands)
        rows = []
        for p in self.pts:
            coeffs = tuple(
                ONE if p in mem else ZERO for mem in self.members
            )
            rows.append((coeffs, ">=", ONE))
        self.rows = tuple(rows)

    def lp_at(self, lam) -> LinearProgram:
        lam = rat(lam)
        return LinearProgram(
            sense="min",
            objective=tuple(c + lam for c in self.base),
            rows=self.rows,
            labels=tuple(self.cands),
        )


class _Solution:
    def __init__(self, system: _CoverSystem, lam, res):
        self.lam = rat(lam)
        self.x = res.x
        self.value = res.value
        self.base_cost = sum(
            (c * v for c, v in zip(system.base, res.x) if v), ZERO
        )
        self.mass = sum((v for v in res.x if v), ZERO)
        self.balls = round_balls(system, res.x)

    def objective_at(self, lam) -> Rat:
        return self.base_cost + rat(lam) * self.mass


def build_primal(inst: Instance, ctx, lam, alpha: int) -> LinearProgram:
    """The covering LP at a single multiplier: one variable per candidate
    ball of the context with cost r**alpha + lambda, one >=1 row per point
    of X'."""
    return _CoverSystem(inst, ctx.x_prime, ctx.r_m, alpha).lp_at(lam)


def round_balls(system: _CoverSystem, x) -> tuple:
    """Greedy disjoint rounding of an LP support.

    Walk the support in canonical candidate order (radius descending,
    center ascending) and keep each ball that is disjoint, inside X', from
    everything kept so far."""
    kept = []
    used = frozenset()
    for ball, mem, xv in zip(system.cands, system.members, x):
        if xv > 0 and not (mem & used):
            kept.append(ball)
            used |= mem
    return tuple(kept)


def fill(system: _CoverSystem, b1, b2, k_prime: int):
    """Move disjoint balls of B1 into B2 (single pass, canonical order)
    until B2 reaches k' balls; if it does, both sides collapse onto B2."""
    out = list(b2)
    used = frozenset()
    for ball in out:
        used |= ball_members(system.inst, ball, system.pts)
    for ball in sorted(b1, key=Ball.key):
        if len(out) >= k_prime:
            break
        mem = ball_members(system.inst, ball, system.pts)
        if not (mem & used):
            out.append(ball)
            used |= mem
    if len(out) == k_prime:
        return tuple(out), tuple(out)
    return tuple(b1), tuple(out)


def max_lambda_optimal(system: _CoverSystem, x) -> Rat | None:
    """Largest multiplier at which the given LP point stays optimal.

    Maximizes lambda over dual vectors y >= 0 with every candidate row
    y(B(i,r)) <= r**alpha + lambda and total dual value matching the point's
    objective.  None means unbounded (optimal for every lambda)."""
    m = len(system.pts)
    nv = m + 1  # y_0..y_{m-1}, lambda
    rows = []
    for mem, base in zip(system.members, system.base):
        coeffs = [ONE if p in mem else ZERO for p in system.pts]
        coeffs.append(rat(-1))
        rows.append((tuple(coeffs), "<=", base))
    mass = sum((v for v in x if v), ZERO)
    base_cost = sum((c * v for c, v in zip(system.base, x) if v), ZERO)
    coeffs = [ONE] * m
    coeffs.append(-mass)
    rows.append((tuple(coeffs), "=", base_cost))
    objective = [ZERO] * m + [ONE]
    lp = linprog("max", objective, rows)
    res = solve(lp)
    if res.status == UNBOUNDED:
        return None
    if res.status != OPTIMAL:
        raise AuxInfeasible("no dual certifies the point anywhere")
    return res.value


def delta(n: int) -> int:
    """Denominator bound that separates adjacent break points of the
    integer-distance covering LP in dimension n."""
    return 8 * n * n * n ** (4 * n * n)


def find_bipoint(inst: Instance, ctx, alpha: int, audit: Audit) -> BiPoint:
    if not ctx.x_prime:
        raise EmptyXPrime("no uncovered points; context is direct")
    k_prime = ctx.k_prime
    if len(ctx.x_prime) <= k_prime:
        raise EmptyXPrime("context is direct; zero balls suffice")
    system = _CoverSystem(inst, ctx.x_prime, ctx.r_m, alpha)
    solves = 0
    round_ok = True

    def solve_at(lam) -> _Solution:
        nonlocal solves, round_ok
        res = solve(system.lp_at(lam))
        assert res.status == OPTIMAL, "covering LP is always solvable"
        solves += 1
        sol = _Solution(system, lam, res)
        round_ok &= _round_properties_hold(system, sol.balls)
        return sol

    low = solve_at(ZERO)
    audit.compare("endpoint_low_value", low.value, "==", ZERO)
    audit.compare("endpoint_low_round", len(low.balls), "==", len(system.pts))
    audit.require(
        "endpoint_low_unique",
        all(
            (xv == 1) == (ball.radius == 0) and (xv == 0) == (ball.radius > 0)
            for ball, xv in zip(system.cands, low.x)
        ),
        note="zero-radius indicator is the unique optimum at lambda=0",
    )

    lam2 = rat(k_prime) * (2 * rat(ctx.r_m)) ** alpha + 1
    high = solve_at(lam2)
    audit.compare("endpoint_high_round", len(high.balls), "<=", k_prime)

    q = denominator_lcm(
        inst.d(i, j) for i in system.pts for j in system.pts if i < j
    )
    delta_eff = delta(max(2, len(system.pts))) * q ** alpha
    thresh = rat(1, delta_eff)
    iter_bound = (int(lam2 * delta_eff) + 1).bit_length() + 2

    def finish(lam, b1, b2, lp_value) -> BiPoint:
        b1f, b2f = fill(system, b1, b2, k_prime)
        bp = BiPoint(lam=rat(lam), b1=b1f, b2=b2f, lp_value=lp_value)
        _audit_bipoint(system, ctx, bp, audit, iterations, iter_bound, round_ok)
        return bp

    iterations = 0
    if len(high.balls) == k_prime:
        return finish(lam2, high.balls, high.balls, high.value)

    probe = None  # (lam*, solution at lam*) for the current low side
    while True:
        # Exit 1: the low solution is optimal at the high multiplier.
        if low.objective_at(high.lam) == high.value:
            return finish(high.lam, low.balls, high.balls, high.value)
        # Exit 2: break-point probe.
        if probe is None:
            lam_star = max_lambda_optimal(system, low.x)
            assert lam_star is not None, "exit 1 must fire first"
            assert low.lam <= lam_star < high.lam
            star = solve_at(lam_star)
            assert low.objective_at(lam_star) == star.value
            probe = star
        if len(probe.balls) == k_prime:
            return finish(probe.lam, probe.balls, probe.balls, probe.value)
        if high.objective_at(probe.lam) == probe.value:
            if len(probe.balls) > k_prime:
                return finish(probe.lam, probe.balls, high.balls, probe.value)
            return finish(probe.lam, low.balls, probe.balls, probe.value)
        # Neither exit: halve the window.
        iterations += 1
        if low.lam + thresh >= high.lam or iterations > iter_bound:
            raise WindowCollapse(
                f"window [{low.lam}, {high.lam}] collapsed after "
                f"{iterations} iterations"
            )
        mid = (low.lam + high.lam) / 2
        sol = solve_at(mid)
        log.debug(
            "bipoint iter %d: lam=[%s, %s] mid=%s |round|=%d opt=%s",
            iterations, low.lam, high.lam, mid, len(sol.balls), sol.value,
        )
        if len(sol.balls) == k_prime:
            return finish(mid, sol.balls, sol.balls, sol.value)
        if len(sol.balls) > k_prime:
            low, probe = sol, None
        else:
            high = sol


def _round_properties_hold(system: _CoverSystem, balls) -> bool:
    mems = [ball_members(system.inst, b, system.pts) for b in balls]
    for i in range(len(mems)):
        for j in range(i + 1, len(mems)):
            if mems[i] & mems[j]:
                return False
    tripled = frozenset().union(
        *(
            ball_members(system.inst, Ball(b.center, 3 * b.radius), system.pts)
            for b in balls
        )
    ) if balls else frozenset()
    if tripled != frozenset(system.pts):
        return False
    return all(b.radius <= system.cap for b in balls)


def _audit_bipoint(system, ctx, bp: BiPoint, audit: Audit,
                   iterations: int, iter_bound: int, round_ok: bool):
    k_prime = ctx.k_prime
    audit.require("round_properties", round_ok,
                  note="disjoint, triple-cover, radius cap on every rounding")
    audit.compare("bipoint_k1", bp.k1, ">=", k_prime)
    audit.compare("bipoint_k2", bp.k2, "<=", k_prime)
    audit.compare("bipoint_radius_cap",
                  max((b.radius for b in bp.b1 + bp.b2), default=ZERO),
                  "<=", 2 * rat(ctx.r_m))
    for tag, balls in (("b1", bp.b1), ("b2", bp.b2)):
        audit.compare(
            f"bipoint_lagrange_{tag}",
            cost(balls, system.alpha) + bp.lam * len(balls),
            "<=", bp.lp_value,
            note="cost + lambda*|B| <= OPT_LP(lambda)",
        )
        audit.require(
            f"bipoint_round_{tag}",
            _round_properties_hold(system, balls),
            note="disjoint, triple-cover, radius cap",
        )
    mems2 = [ball_members(system.inst, b, system.pts) for b in bp.b2]
    ok = True
    for b in bp.b1:
        mem = ball_members(system.inst, b, system.pts)
        if not any(mem & m2 for m2 in mems2):
            ok = False
    audit.require("bipoint_intersect", ok,
                  note="every B1 ball meets some B2 ball inside X'")
    audit.compare("bipoint_iterations", iterations, "<=", iter_bound)
