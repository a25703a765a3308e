"""Guess-and-solve driver.

The driver enumerates small sets of "largest" balls, removes what they
cover, and runs the Lagrangian pipeline on the residual instance.  A guess
is kept only if a farthest-first precheck confirms the leftovers could
plausibly come from a solution whose remaining balls fit under the guessed
minimum radius.  The answer is the cheapest assembly over all kept guesses;
when the guessed balls really are the largest ones of an optimal solution,
the recorded inequality chain turns into an end-to-end cost guarantee.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .audit import Audit
from .bipoint import find_bipoint
from .combine import ALPHA, BETA, OBJECTIVES, combine_solutions
from .kcenter import farthest_first
from .metric import Ball, Instance, ball_members, cost, diameter
from .oracle import opt_ball_cover, opt_partition_msd
from .rational import Rat, ZERO

MSR_RATIO = BETA["msr"]
MSD_RATIO = BETA["msd"]
MSSR_RATIO = BETA["mssr"]


class NoFeasibleGuess(RuntimeError):
    """Every guess was rejected; unreachable for a valid instance since the
    guess covering the whole point set is solved directly."""


@dataclass(frozen=True)
class GuessContext:
    guessed: tuple
    x_prime: frozenset
    r_m: Rat
    k_prime: int

    def signature(self):
        return (self.x_prime, self.r_m, self.k_prime)

    @property
    def direct(self) -> bool:
        return len(self.x_prime) <= self.k_prime


@dataclass
class GuessOutcome:
    ctx: GuessContext
    status: str  # "direct", "bipoint", "rejected"
    rest_value: Rat = ZERO
    rest_objects: tuple = ()
    rounded_cap: Rat = ZERO
    a: Rat = ZERO
    b: Rat = ZERO
    cost1: Rat = ZERO
    cost2: Rat = ZERO
    total: Rat | None = None


@dataclass
class SolveResult:
    objective: str
    k: int
    g: int
    value: Rat
    objects: tuple
    guess: tuple
    audit: Audit
    outcomes: dict
    stats: dict = field(default_factory=dict)


def guessed_cost(objective: str, balls) -> Rat:
    """Cost the final assembly pays for the guessed balls: their radii (or
    squares); for diameter objectives a guessed ball becomes one cluster of
    diameter at most twice its radius."""
    if objective == "msd":
        return 2 * cost(balls, 1)
    return cost(balls, ALPHA[objective])


def _ball_space(inst: Instance, objective: str) -> list:
    radii_global = sorted({inst.d(i, j) for i in inst.points()
                           for j in inst.points() if i < j})
    balls = []
    for c in inst.points():
        if objective == "msd":
            radii = radii_global
        else:
            radii = sorted({inst.d(c, j) for j in inst.points() if j != c})
        balls.append(Ball(c, ZERO))
        balls.extend(Ball(c, r) for r in radii)
    balls.sort(key=Ball.key)
    return balls


def enumerate_guesses(inst: Instance, g: int, objective: str):
    """All size-g guesses over the per-objective ball space.  Ball-cost
    objectives only need radii realized as distances from the center;
    diameter values can pair any center with any distance."""
    if not 1 <= g < inst.k:
        raise ValueError("guess size must satisfy 1 <= g < k")
    pts = frozenset(inst.points())
    k_prime = inst.k - g
    for combo in itertools.combinations(_ball_space(inst, objective), g):
        covered = frozenset()
        for ball in combo:
            covered |= ball_members(inst, ball)
        yield GuessContext(
            guessed=combo,
            x_prime=pts - covered,
            r_m=min(b.radius for b in combo),
            k_prime=k_prime,
        )


def dedup_guesses(contexts, objective: str) -> list:
    """One context per (X', R_m, k'): the pipeline ignores everything else
    about the guess, so only the cheapest guessed set can win."""
    best: dict = {}
    order = []
    for ctx in contexts:
        sig = ctx.signature()
        gc = guessed_cost(objective, ctx.guessed)
        if sig not in best:
            best[sig] = (gc, ctx)
            order.append(sig)
        elif gc < best[sig][0]:
            best[sig] = (gc, ctx)
    return [best[sig][1] for sig in order]


def witness_guess(inst: Instance, objective: str, g: int):
    """Canonical correct guess: the g largest objects of the oracle
    optimum, padded with zero balls if the optimum is smaller than g.
    Returns (balls, optimum value)."""
    if objective == "msd":
        opt, clusters = opt_partition_msd(inst, inst.k)
        ranked = sorted(clusters, key=lambda c: (-diameter(inst, c), min(c)))
        balls = [Ball(min(c), diameter(inst, c)) for c in ranked[:g]]
    else:
        alpha = ALPHA[objective]
        opt, witness = opt_ball_cover(inst, inst.k, alpha)
        ranked = sorted(witness, key=Ball.key)
        balls = list(ranked[:g])
    used = {b.center for b in balls}
    for p in inst.points():
        if len(balls) == g:
            break
        if p not in used:
            balls.append(Ball(p, ZERO))
            used.add(p)
    return tuple(sorted(balls, key=Ball.key)), opt


def _direct_objects(objective: str, x_prime):
    if objective == "msd":
        return tuple(frozenset({p}) for p in sorted(x_prime))
    return tuple(Ball(p, ZERO) for p in sorted(x_prime))


def precheck(inst: Instance, ctx: GuessContext) -> bool:
    """A kept guess must allow covering the leftovers with k' balls of
    radius at most the guessed minimum; farthest-first certifies within 2x."""
    ff = farthest_first(inst, ctx.x_prime, ctx.k_prime)
    return ff.radius <= 2 * ctx.r_m


def run_context(inst: Instance, ctx: GuessContext, objective: str,
                cache: dict, audit: Audit, stats: dict) -> GuessOutcome:
    if ctx.direct:
        stats["direct"] = stats.get("direct", 0) + 1
        return GuessOutcome(ctx=ctx, status="direct",
                            rest_objects=_direct_objects(objective, ctx.x_prime))
    if ctx.k_prime == 0 or not precheck(inst, ctx):
        stats["rejected"] = stats.get("rejected", 0) + 1
        return GuessOutcome(ctx=ctx, status="rejected")

    alpha = ALPHA[objective]
    key = (ctx.x_prime, ctx.k_prime, alpha,
           min(2 * ctx.r_m, max(inst.d(i, j) for i in ctx.x_prime
                                for j in ctx.x_prime)))
    bp = cache.get(key)
    if bp is None:
        bp = find_bipoint(inst, ctx, alpha, audit)
        cache[key] = bp
        stats["bipoint"] = stats.get("bipoint", 0) + 1
    else:
        stats["cache_hits"] = stats.get("cache_hits", 0) + 1
    comb = combine_solutions(inst, ctx, objective, bp, audit)
    return GuessOutcome(
        ctx=ctx, status="bipoint", rest_value=comb.value,
        rest_objects=comb.objects, rounded_cap=comb.rounded_cap,
        a=comb.a, b=comb.b, cost1=comb.cost1, cost2=comb.cost2,
    )


def _assemble(inst: Instance, objective: str, out: GuessOutcome):
    """Final objects over the whole point set and their exact cost."""
    if objective in ("msr", "mssr"):
        objects = tuple(out.ctx.guessed) + tuple(out.rest_objects)
        return objects, cost(objects, ALPHA[objective])
    taken: set = set()
    clusters = []
    sets = [ball_members(inst, b) for b in out.ctx.guessed]
    sets.extend(out.rest_objects)
    for s in sets:
        keep = frozenset(s) - taken
        if keep:
            clusters.append(keep)
            taken |= keep
    value = sum((diameter(inst, cl) for cl in clusters), ZERO)
    return tuple(clusters), value


def brute_small(inst: Instance, objective: str):
    """Exact optimum straight from the verification oracles; used when the
    ball budget does not exceed the guess size."""
    if objective == "msd":
        value, clusters = opt_partition_msd(inst, inst.k)
        return value, tuple(clusters)
    value, balls = opt_ball_cover(inst, inst.k, ALPHA[objective])
    return value, tuple(balls)


def solve(inst: Instance, objective: str, g: int = 1,
          audit: Audit | None = None) -> SolveResult:
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if g < 1:
        raise ValueError("need at least one guessed ball")
    audit = audit if audit is not None else Audit()
    stats: dict = {}
    n, k = inst.n, inst.k

    if k >= n:
        out = GuessOutcome(
            ctx=GuessContext((), frozenset(inst.points()), ZERO, k),
            status="direct",
            rest_objects=_direct_objects(objective, inst.points()),
        )
        objects, value = _assemble(inst, objective, out)
        audit.compare("solve_trivial_value", value, "==", ZERO)
        return SolveResult(objective, k, 0, value, objects, (), audit, {},
                           stats)
    if k <= g:
        value, objects = brute_small(inst, objective)
        stats["brute_small"] = 1
        return SolveResult(objective, k, 0, value, objects, (), audit, {},
                           stats)

    contexts = dedup_guesses(enumerate_guesses(inst, g, objective), objective)
    stats["guesses"] = len(contexts)
    cache: dict = {}
    outcomes: dict = {}
    winner = None
    for ctx in contexts:
        out = run_context(inst, ctx, objective, cache, audit, stats)
        outcomes[ctx.signature()] = out
        if out.status == "rejected":
            continue
        objects, value = _assemble(inst, objective, out)
        out.total = value
        if winner is None or value < winner[0]:
            winner = (value, objects, out)
    if winner is None:
        raise NoFeasibleGuess("all guesses rejected")
    value, objects, out = winner
    g_eff = g

    covered = set()
    if objective == "msd":
        for cl in objects:
            covered |= cl
        audit.require("solve_partition",
                      len(covered) == sum(len(cl) for cl in objects))
    else:
        for b in objects:
            covered |= ball_members(inst, b)
    audit.require("solve_cover", covered == set(inst.points()))
    audit.compare("solve_count", len(objects), "<=", k)
    bound = guessed_cost(objective, out.ctx.guessed) + out.rest_value
    audit.compare("solve_value_cap", value, "<=", bound)
    return SolveResult(objective, k, g_eff, value, objects,
                       out.ctx.guessed, audit, outcomes, stats)
