"""Exact linear programming over rationals.

Two-phase primal simplex on a dense tableau with Bland's rule: the entering
column is the lowest-index one with negative reduced cost, ratio ties leave
the lowest-index basic variable, so runs are deterministic and cycling is
impossible.  Every coefficient is a gmpy2 rational.

Every result is self-verified before it is returned:

* Optimal results carry exact primal and dual vectors; primal feasibility,
  dual feasibility, strong duality, and complementary slackness are asserted
  exactly.
* Infeasible results carry a Farkas vector y with sign conditions matching
  the row relations, y'A <= 0 componentwise and y'b > 0.
* Unbounded results carry an improving ray: feasible direction, negative
  (minimization) objective movement.

Intended scale is tens of rows by low hundreds of columns, which is all the
covering programs in this package ever need.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rational import Rat, ZERO, rat

REL_LE = "<="
REL_GE = ">="
REL_EQ = "="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_PIVOT_CAP_FACTOR = 200  # safety net; Bland terminates long before this


@dataclass(frozen=True)
class LinearProgram:
    """min or max of c'x subject to row relations, x >= 0."""

    sense: str
    objective: tuple
    rows: tuple  # of (coeffs tuple, relation, rhs)
    labels: tuple | None = None

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        for _, rel, _ in self.rows:
            if rel not in (REL_LE, REL_GE, REL_EQ):
                raise ValueError(f"bad relation {rel!r}")


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Rat | None
    x: tuple | None
    duals: tuple | None
    pivots: int
    basis: tuple | None = None
    ray: tuple | None = None
    farkas: tuple | None = None


def linprog(sense, objective, rows, labels=None) -> LinearProgram:
    """Convenience constructor that coerces every coefficient to a rational."""
    obj = tuple(rat(c) for c in objective)
    rws = tuple((tuple(rat(a) for a in coeffs), rel, rat(b)) for coeffs, rel, b in rows)
    return LinearProgram(sense=sense, objective=obj, rows=rws, labels=labels)


def objective_value(lp: LinearProgram, x) -> Rat:
    return sum((rat(c) * rat(v) for c, v in zip(lp.objective, x)), ZERO)


def is_feasible(lp: LinearProgram, x) -> bool:
    if len(x) != len(lp.objective):
        return False
    vals = [rat(v) for v in x]
    if any(v < 0 for v in vals):
        return False
    for coeffs, rel, b in lp.rows:
        act = sum((rat(a) * v for a, v in zip(coeffs, vals)), ZERO)
        b = rat(b)
        if rel == REL_LE and act > b:
            return False
        if rel == REL_GE and act < b:
            return False
        if rel == REL_EQ and act != b:
            return False
    return True


def is_optimal(lp: LinearProgram, x) -> bool:
    """Exact test: x is feasible and matches the optimal value."""
    if not is_feasible(lp, x):
        return False
    res = solve(lp)
    return res.status == OPTIMAL and objective_value(lp, x) == res.value


def solve(lp: LinearProgram) -> LPResult:
    if lp.sense == "max":
        flipped = LinearProgram(
            sense="min",
            objective=tuple(-rat(c) for c in lp.objective),
            rows=lp.rows,
            labels=lp.labels,
        )
        res = _solve_min(flipped)
        if res.status == OPTIMAL:
            return LPResult(
                status=OPTIMAL,
                value=-res.value,
                x=res.x,
                duals=tuple(-y for y in res.duals),
                pivots=res.pivots,
                basis=res.basis,
            )
        return res
    return _solve_min(lp)


def _solve_min(lp: LinearProgram) -> LPResult:
    nvars = len(lp.objective)
    c = [rat(v) for v in lp.objective]
    m = len(lp.rows)

    # Flip rows with negative rhs so the artificial start is feasible; the
    # flip multiplier converts standardized duals back to original rows.
    arows, rels, rhs, mult = [], [], [], []
    for coeffs, rel, b in lp.rows:
        a = [rat(v) for v in coeffs]
        if len(a) != nvars:
            raise ValueError("row length does not match objective length")
        b = rat(b)
        if b < 0:
            a = [-v for v in a]
            b = -b
            rel = {REL_LE: REL_GE, REL_GE: REL_LE, REL_EQ: REL_EQ}[rel]
            mult.append(-1)
        else:
            mult.append(1)
        arows.append(a)
        rels.append(rel)
        rhs.append(b)

    slack_col = {}
    ncols = nvars
    for i, rel in enumerate(rels):
        if rel != REL_EQ:
            slack_col[i] = ncols
            ncols += 1
    art_col = list(range(ncols, ncols + m))
    ncols += m

    tab = []
    for i in range(m):
        row = [ZERO] * (ncols + 1)
        row[:nvars] = arows[i]
        if i in slack_col:
            row[slack_col[i]] = rat(1) if rels[i] == REL_LE else rat(-1)
        row[art_col[i]] = rat(1)
        row[-1] = rhs[i]
        tab.append(row)
    basis = list(art_col)

    pivots = 0
    cap = _PIVOT_CAP_FACTOR * (m + ncols + 1)

    def run(obj, banned_from):
        nonlocal pivots
        while True:
            pc = -1
            for j in range(banned_from if banned_from else ncols):
                if obj[j] < 0:
                    pc = j
                    break
            if pc < 0:
                return None
            pr, best_ratio = -1, None
            for r in range(m):
                a = tab[r][pc]
                if a > 0:
                    ratio = tab[r][-1] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[r] < basis[pr])
                    ):
                        pr, best_ratio = r, ratio
            if pr < 0:
                return pc  # unbounded direction
            _pivot(tab, obj, basis, pr, pc)
            pivots += 1
            if pivots > cap:
                raise RuntimeError("simplex pivot cap exceeded; arithmetic bug")

    # Phase 1: drive the artificial variables to zero.
    obj1 = [ZERO] * (ncols + 1)
    for j in art_col:
        obj1[j] = rat(1)
    for r in range(m):
        for j, v in enumerate(tab[r]):
            if v:
                obj1[j] -= v
    esc = run(obj1, banned_from=0)
    assert esc is None, "phase 1 is bounded below by zero"
    phase1_value = -obj1[-1]
    if phase1_value > 0:
        y = tuple(mult[i] * (rat(1) - obj1[art_col[i]]) for i in range(m))
        _verify_farkas(lp, y)
        return LPResult(
            status=INFEASIBLE, value=None, x=None, duals=None,
            pivots=pivots, farkas=y,
        )

    # Degenerate basic artificials: pivot them out where the row allows it;
    # an all-zero row is redundant and its artificial stays harmlessly at 0.
    art_start = nvars + len(slack_col)
    for r in range(m):
        if basis[r] >= art_start and tab[r][-1] == 0:
            for j in range(art_start):
                if tab[r][j] != 0:
                    _pivot(tab, obj1, basis, r, j)
                    pivots += 1
                    break

    # Phase 2 on the real objective.
    obj2 = [ZERO] * (ncols + 1)
    obj2[:nvars] = list(c)
    cB = [c[b] if b < nvars else ZERO for b in basis]
    for r in range(m):
        if cB[r]:
            for j, v in enumerate(tab[r]):
                if v:
                    obj2[j] -= cB[r] * v
    esc = run(obj2, banned_from=art_start)
    if esc is not None:
        ray = _build_ray(tab, basis, esc, nvars, ncols)
        _verify_ray(lp, ray)
        return LPResult(
            status=UNBOUNDED, value=None, x=None, duals=None,
            pivots=pivots, ray=tuple(ray),
        )

    x = [ZERO] * nvars
    for r in range(m):
        if basis[r] < nvars:
            x[basis[r]] = tab[r][-1]
    value = sum((cv * xv for cv, xv in zip(c, x)), ZERO)
    y = tuple(mult[i] * (-obj2[art_col[i]]) for i in range(m))
    _verify_optimal(lp, x, y, value)
    return LPResult(
        status=OPTIMAL, value=value, x=tuple(x), duals=y,
        pivots=pivots, basis=tuple(basis),
    )


def _pivot(tab, obj, basis, pr, pc):
    prow = tab[pr]
    piv = prow[pc]
    if piv != 1:
        inv = 1 / piv
        prow = [v * inv for v in prow]
        tab[pr] = prow
    nz = [j for j, v in enumerate(prow) if v]
    for r, row in enumerate(tab):
        if r == pr:
            continue
        f = row[pc]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
    f = obj[pc]
    if f:
        for j in nz:
            obj[j] -= f * prow[j]
    basis[pr] = pc


def _build_ray(tab, basis, pc, nvars, ncols):
    d = [ZERO] * ncols
    d[pc] = rat(1)
    for r, row in enumerate(tab):
        if row[pc]:
            d[basis[r]] = -row[pc]
    return d[:nvars]


def _row_activity(coeffs, x):
    return sum((rat(a) * v for a, v in zip(coeffs, x)), ZERO)


def _verify_optimal(lp, x, y, value):
    assert all(v >= 0 for v in x), "primal negativity"
    for (coeffs, rel, b), yi in zip(lp.rows, y):
        act = _row_activity(coeffs, x)
        b = rat(b)
        if rel == REL_LE:
            assert act <= b, "primal row violated"
            assert yi <= 0, "dual sign on <= row"
        elif rel == REL_GE:
            assert act >= b, "primal row violated"
            assert yi >= 0, "dual sign on >= row"
        else:
            assert act == b, "primal row violated"
        if yi != 0:
            assert act == b, "complementary slackness (row)"
    ydotb = sum((yi * rat(b) for (_, _, b), yi in zip(lp.rows, y)), ZERO)
    assert ydotb == value, "strong duality"
    for j, cj in enumerate(lp.objective):
        red = rat(cj) - sum((yi * rat(coeffs[j]) for (coeffs, _, _), yi in zip(lp.rows, y)), ZERO)
        assert red >= 0, "dual feasibility"
        if x[j] != 0:
            assert red == 0, "complementary slackness (column)"


def _verify_farkas(lp, y):
    for (_, rel, _), yi in zip(lp.rows, y):
        if rel == REL_LE:
            assert yi <= 0, "farkas sign on <= row"
        elif rel == REL_GE:
            assert yi >= 0, "farkas sign on >= row"
    ydotb = sum((yi * rat(b) for (_, _, b), yi in zip(lp.rows, y)), ZERO)
    assert ydotb > 0, "farkas rhs"
    for j in range(len(lp.objective)):
        comb = sum((yi * rat(coeffs[j]) for (coeffs, _, _), yi in zip(lp.rows, y)), ZERO)
        assert comb <= 0, "farkas column"


def _verify_ray(lp, ray):
    assert any(v != 0 for v in ray), "zero ray"
    assert all(v >= 0 for v in ray), "ray negativity"
    for coeffs, rel, _ in lp.rows:
        act = _row_activity(coeffs, ray)
        if rel == REL_LE:
            assert act <= 0, "ray breaks <= row"
        elif rel == REL_GE:
            assert act >= 0, "ray breaks >= row"
        else:
            assert act == 0, "ray breaks = row"
    drop = sum((rat(c) * v for c, v in zip(lp.objective, ray)), ZERO)
    assert drop < 0, "ray does not improve"
