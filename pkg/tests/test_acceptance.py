"""End-to-end guarantees over a seeded benchmark suite.

A session fixture solves 200 generated instances for all three objectives,
replays the correct-guess pipeline stages with exact numbers kept around,
and the ten tests below each assert one shipped guarantee, recording a
one-line verdict through conftest.record_criterion.  Every comparison is
exact rational arithmetic; the only tolerance anywhere is the wall-clock
budget of the ratio suite.
"""

import random
import time
from collections import Counter

import pytest

from sumradii.audit import Audit
from sumradii.bipoint import build_primal, find_bipoint
from sumradii.combine import (ALPHA, BETA, OBJECTIVES, choose_groups,
                              choose_groups_lp, combine_solutions)
from sumradii.generate import SPACES, make_instance, suite
from sumradii.kcenter import farthest_first
from sumradii.lp import OPTIMAL, is_feasible, objective_value
from sumradii.lp import solve as lp_solve
from sumradii.metric import ball_members, cost
from sumradii.oracle import (naive_ball_cover, naive_kcenter,
                             naive_partition_msd, opt_ball_cover,
                             opt_kcenter, opt_partition_msd)
from sumradii.rational import ZERO, rat
from sumradii.solver import (GuessContext, guessed_cost, precheck, solve,
                             witness_guess)

from conftest import record_criterion

SUITE_COUNT = 200
SUITE_SEED = "acceptance"
N_RANGE = (6, 12)
K_RANGE = (2, 4)
GUESS = 1
TIME_BUDGET = 600.0  # seconds


def _oracle(inst, k, objective, restrict=None):
    if objective == "msd":
        return opt_partition_msd(inst, k, restrict=restrict)
    return opt_ball_cover(inst, k, ALPHA[objective], restrict=restrict)


@pytest.fixture(scope="session")
def accept():
    t0 = time.perf_counter()
    instances = suite(SUITE_COUNT, SUITE_SEED, N_RANGE, K_RANGE)
    records = []
    for name, inst in instances:
        pts = frozenset(inst.points())
        for ob in OBJECTIVES:
            res = solve(inst, ob, g=GUESS)
            opt, _ = _oracle(inst, inst.k, ob)

            guess, _ = witness_guess(inst, ob, GUESS)
            covered = frozenset()
            for b in guess:
                covered |= ball_members(inst, b)
            ctx = GuessContext(
                guessed=guess,
                x_prime=pts - covered,
                r_m=min(b.radius for b in guess),
                k_prime=inst.k - GUESS,
            )
            opt_prime, _ = _oracle(inst, ctx.k_prime, ob,
                                   restrict=ctx.x_prime)
            chain = None
            if not ctx.direct:
                chain = {"precheck": precheck(inst, ctx)}
                if chain["precheck"]:
                    audit2 = Audit()
                    bp = find_bipoint(inst, ctx, ALPHA[ob], audit2)
                    comb = combine_solutions(inst, ctx, ob, bp, audit2)
                    chain.update(audit=audit2, bp=bp, comb=comb)
            records.append({
                "name": name,
                "inst": inst,
                "objective": ob,
                "value": res.value,
                "opt": opt,
                "audit": res.audit,
                "guess": guess,
                "gc": guessed_cost(ob, guess),
                "ctx": ctx,
                "opt_prime": opt_prime,
                "chain": chain,
            })
    elapsed = time.perf_counter() - t0
    return {"instances": instances, "records": records, "elapsed": elapsed}


def _checks(data, names):
    """(hits per name, failing (instance, objective, name) triples) over the
    solve audits and the correct-guess replays."""
    hits: Counter = Counter()
    bad = []
    for rec in data["records"]:
        audits = [rec["audit"]]
        if rec["chain"] is not None and "audit" in rec["chain"]:
            audits.append(rec["chain"]["audit"])
        for audit in audits:
            for c in audit.checks:
                if c.name in names:
                    hits[c.name] += 1
                    if not c.ok:
                        bad.append((rec["name"], rec["objective"], c.name))
    return hits, bad


def test_criterion_01_approximation_ratio_suite(accept):
    worst = {ob: ZERO for ob in OBJECTIVES}
    violations = []
    for rec in accept["records"]:
        ob = rec["objective"]
        if rec["opt"] == 0:
            if rec["value"] != 0:
                violations.append((rec["name"], ob, "zero-opt"))
            continue
        ratio = rec["value"] / rec["opt"]
        worst[ob] = max(worst[ob], ratio)
        if ratio > BETA[ob]:
            violations.append((rec["name"], ob, float(ratio)))
    count = len(accept["instances"])
    in_time = accept["elapsed"] < TIME_BUDGET
    detail = (", ".join(
        f"{ob} worst {float(worst[ob]):.3f} <= {float(BETA[ob]):.3f}"
        for ob in OBJECTIVES)
        + f"; {count} instances in {accept['elapsed']:.0f}s")
    record_criterion(
        1, "approximation ratios",
        count >= 200 and not violations and in_time, detail)


def test_criterion_02_correct_guess_chain(accept):
    paths = Counter()
    violations = []
    for rec in accept["records"]:
        ob = rec["objective"]
        beta, alpha = BETA[ob], ALPHA[ob]
        bound_tail = rec["gc"] + beta * rec["opt_prime"]
        if rec["chain"] is None:
            paths["direct"] += 1
            if rec["value"] > bound_tail:
                violations.append((rec["name"], ob, "final-direct"))
            continue
        paths["bipoint"] += 1
        if not rec["chain"]["precheck"]:
            violations.append((rec["name"], ob, "precheck"))
            continue
        bp, comb = rec["chain"]["bp"], rec["chain"]["comb"]
        if not rec["chain"]["audit"].ok:
            violations.append((rec["name"], ob, "replay-audit"))
        avg = comb.a * comb.cost1 + comb.b * comb.cost2
        if avg > rec["opt_prime"]:
            violations.append((rec["name"], ob, "a*C1+b*C2"))
        for balls, kl, tag in ((bp.b1, bp.k1, "b1"), (bp.b2, bp.k2, "b2")):
            if cost(balls, alpha) + bp.lam * kl > bp.lp_value:
                violations.append((rec["name"], ob, f"lagrange-{tag}"))
        if rec["value"] > bound_tail + comb.rounded_cap:
            violations.append((rec["name"], ob, "final"))
    detail = (f"{paths['direct']} direct + {paths['bipoint']} bi-point "
              f"chains, {len(violations)} violations")
    record_criterion(2, "correct-guess inequality chain",
                     not violations and paths["bipoint"] > 0, detail)


def test_criterion_03_round_output(accept):
    names = {"round_properties", "bipoint_round_b1", "bipoint_round_b2"}
    hits, bad = _checks(accept, names)
    detail = f"{sum(hits.values())} disjointness/coverage checks, {len(bad)} failed"
    record_criterion(3, "rounding disjoint and covering",
                     not bad and all(hits[n] for n in names), detail)


def test_criterion_04_bipoint_structure(accept):
    names = {"bipoint_k1", "bipoint_k2", "bipoint_radius_cap",
             "bipoint_intersect"}
    hits, bad = _checks(accept, names)
    detail = f"{hits['bipoint_k1']} searches, {len(bad)} failed"
    record_criterion(4, "bi-point structure",
                     not bad and all(hits[n] for n in names), detail)


def test_criterion_05_lambda_endpoints(accept):
    names = {"endpoint_low_value", "endpoint_low_round",
             "endpoint_low_unique", "endpoint_high_round"}
    hits, bad = _checks(accept, names)
    detail = f"{hits['endpoint_low_round']} windows, {len(bad)} failed"
    record_criterion(5, "lambda window endpoints",
                     not bad and all(hits[n] for n in names), detail)


def test_criterion_06_merge_bounds(accept):
    names = {"merge_bound_msr", "merge_case_cap_msr", "merge_cap_global_msr",
             "merge_bound_mssr", "merge_bound_msd"}
    hits, bad = _checks(accept, names)
    detail = (f"msr {hits['merge_bound_msr']}, msd {hits['merge_bound_msd']},"
              f" mssr {hits['merge_bound_mssr']} groups, {len(bad)} failed")
    record_criterion(6, "group merge bounds",
                     not bad and all(hits[n] for n in names), detail)


def test_criterion_07_knapsack_matches_simplex():
    rng = random.Random("accept-knap")
    systems = 0
    ok = True
    while systems < 60:
        n = rng.randint(1, 6)
        entries = []
        for _ in range(n):
            w = rng.randint(1, 5)
            a = rat(rng.randint(0, 40), rng.randint(1, 5))
            m = rat(rng.randint(0, 40), rng.randint(1, 5))
            entries.append((w, a, m))
        k_prime = rng.randint(n, sum(w for w, _, _ in entries))
        plan = choose_groups(entries, k_prime)
        res, offset = choose_groups_lp(entries, k_prime)
        fractional = [v for v in res.x if 0 < v < 1]
        ok = ok and (res.status == OPTIMAL
                     and res.value + offset == plan.lp_value
                     and len(fractional) <= 1)
        systems += 1
    record_criterion(7, "group-choice LP structure", ok,
                     f"{systems} systems, knapsack == simplex, <=1 fractional")


def _duality_holds(lp, res) -> bool:
    if res.status != OPTIMAL or not is_feasible(lp, res.x):
        return False
    if objective_value(lp, res.x) != res.value:
        return False
    if sum(y * rat(b) for y, (_, _, b) in zip(res.duals, lp.rows)) != res.value:
        return False
    for (coeffs, rel, b), y in zip(lp.rows, res.duals):
        if rel == "<=" and y > 0:
            return False
        if rel == ">=" and y < 0:
            return False
        act = sum(rat(a) * v for a, v in zip(coeffs, res.x))
        if y != 0 and act != rat(b):
            return False
    for j, cj in enumerate(lp.objective):
        red = rat(cj) - sum(y * rat(coeffs[j])
                            for (coeffs, _, _), y in zip(lp.rows, res.duals))
        if red < 0 or (res.x[j] != 0 and red != 0):
            return False
    return True


def test_criterion_08_lp_engine_and_kcenter(accept):
    kc_bad = []
    for name, inst in accept["instances"]:
        ff = farthest_first(inst, frozenset(inst.points()), inst.k)
        opt_r, _ = opt_kcenter(inst, inst.k)
        if ff.radius > 2 * opt_r:
            kc_bad.append(name)
    replayed = 0
    dual_ok = True
    for rec in accept["records"]:
        if replayed >= 40:
            break
        ch = rec["chain"]
        if ch is None or "bp" not in ch:
            continue
        lp = build_primal(rec["inst"], rec["ctx"], ch["bp"].lam,
                          ALPHA[rec["objective"]])
        dual_ok = dual_ok and _duality_holds(lp, lp_solve(lp))
        replayed += 1
    detail = (f"duality+CS on {replayed} pipeline LPs (engine self-checks "
              f"every solve); k-center 2-approx on {len(accept['instances'])}"
              f" instances, {len(kc_bad)} failed")
    record_criterion(8, "exact LP engine and k-center",
                     dual_ok and replayed > 0 and not kc_bad, detail)


def test_criterion_09_oracles_match_naive():
    bad = []
    count = 50
    for i in range(count):
        space = SPACES[i % len(SPACES)]
        n = 4 + i % 5
        k = 2 + i % 3
        inst = make_instance(space, n, k, f"accept-oracle:{i}")
        for alpha in (1, 2):
            if opt_ball_cover(inst, k, alpha)[0] != \
                    naive_ball_cover(inst, k, alpha)[0]:
                bad.append((i, f"cover-a{alpha}"))
        if opt_partition_msd(inst, k)[0] != naive_partition_msd(inst, k)[0]:
            bad.append((i, "partition"))
        if opt_kcenter(inst, k)[0] != naive_kcenter(inst, k)[0]:
            bad.append((i, "kcenter"))
    record_criterion(9, "oracles equal naive enumeration", not bad,
                     f"{count} instances x 4 oracles, {len(bad)} mismatches")


def test_criterion_10_msd_beats_doubled_msr(accept):
    exact = BETA["msd"] == rat(72, 11) and rat(72, 11) < 2 * rat(288, 85)
    hits, bad = _checks(accept, {"combine_beta_msd"})
    detail = (f"72/11 < 576/85; {hits['combine_beta_msd']} direct msd bound "
              f"checks, {len(bad)} failed")
    record_criterion(10, "msd bound beats doubled msr",
                     exact and not bad and hits["combine_beta_msd"] > 0,
                     detail)
