"""Command-line surface: gen, solve, oracle, compare.

All costs cross the boundary as exact "p/q" strings; decimal fields are
display-only.  Exit codes: 2 unusable input, 3 triangle violation, 4
instance too large for an oracle.
"""

from __future__ import annotations

import argparse
import csv
import json
import multiprocessing
import os
import sys

from .combine import ALPHA, BETA, OBJECTIVES
from .generate import SPACES, make_instance, suite
from .metric import (
    Instance,
    InvalidInstance,
    TriangleViolation,
    instance_from_json,
    instance_to_json,
)
from .oracle import InstanceTooLarge, opt_ball_cover, opt_partition_msd
from .rational import format_rat, rat_to_decimal
from .solver import solve


def _rat_field(value) -> dict:
    return {"exact": format_rat(value), "decimal": rat_to_decimal(value)}


def _orig_center(inst: Instance, p: int) -> int:
    return inst.aliases[p][0]


def _orig_cluster(inst: Instance, cluster) -> list:
    out = []
    for p in cluster:
        out.extend(inst.aliases[p])
    return sorted(out)


def _objects_json(inst: Instance, objective: str, objects) -> dict:
    if objective == "msd":
        return {"clusters": [_orig_cluster(inst, cl) for cl in objects]}
    return {"balls": [
        {"center": _orig_center(inst, b.center), "radius": _rat_field(b.radius)}
        for b in objects
    ]}


def _load_instance(path: str, k_override: int | None) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInstance(f"not valid JSON: {exc}") from exc
    if k_override is not None:
        if not isinstance(obj, dict):
            raise InvalidInstance("instance JSON must be an object")
        obj = dict(obj, k=k_override)
    return instance_from_json(obj)


def _emit(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = _load_instance(args.input, args.k)
    res = solve(inst, args.objective, g=args.guess_size)
    audit_obj = res.audit.to_json() if args.trace else {
        "pass": res.audit.ok, "checks": len(res.audit.checks),
    }
    payload = {
        "objective": res.objective,
        "n": inst.n,
        "k": res.k,
        "g": res.g,
        "cost": _rat_field(res.value),
        "solution": _objects_json(inst, res.objective, res.objects),
        "guessed": [
            {"center": _orig_center(inst, b.center),
             "radius": _rat_field(b.radius)}
            for b in res.guess
        ],
        "audit": audit_obj,
    }
    if any(len(a) > 1 for a in inst.aliases):
        payload["aliases"] = [list(a) for a in inst.aliases]
    _emit(payload, args.output)
    if args.svg:
        if inst.coords is None:
            print("no coordinates; skipping SVG render", file=sys.stderr)
        else:
            from .plotting import render_solution

            render_solution(inst, res.objects, res.guess, args.svg,
                            title=f"{res.objective} k={res.k} "
                                  f"cost={format_rat(res.value)}")
    return 0


def cmd_oracle(args) -> int:
    inst = _load_instance(args.input, args.k)
    if args.objective == "msd":
        value, witness = opt_partition_msd(inst, inst.k)
    else:
        value, witness = opt_ball_cover(inst, inst.k, ALPHA[args.objective])
    payload = {
        "objective": args.objective,
        "n": inst.n,
        "k": inst.k,
        "value": _rat_field(value),
        "witness": _objects_json(inst, args.objective, witness),
    }
    _emit(payload, args.output)
    return 0


def cmd_gen(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    for i in range(args.count):
        seed = args.seed if args.count == 1 else f"{args.seed}.{i}"
        inst = make_instance(args.space, args.n, args.k, seed)
        name = f"{args.space}-n{args.n}-k{args.k}-s{seed}.json"
        path = os.path.join(args.out, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(instance_to_json(inst), indent=2,
                                sort_keys=True) + "\n")
        print(path)
    return 0


def _compare_row(task) -> dict:
    name, obj, objective, g = task
    inst = instance_from_json(obj)
    row = {
        "instance": name,
        "objective": objective,
        "k": str(inst.k),
        "g": str(g),
        "alg_cost": "",
        "opt_cost": "",
        "ratio": "",
        "audit_pass": "skipped",
        "_ratio_float": None,
    }
    try:
        if objective == "msd":
            opt, _ = opt_partition_msd(inst, inst.k)
        else:
            opt, _ = opt_ball_cover(inst, inst.k, ALPHA[objective])
    except InstanceTooLarge:
        return row
    res = solve(inst, objective, g=g)
    alg = res.value
    if opt > 0:
        ratio = alg / opt
        ratio_s = format_rat(ratio)
        ratio_f = float(ratio)
    else:
        ratio = None
        ratio_s = "1" if alg == 0 else "inf"
        ratio_f = 1.0 if alg == 0 else float("inf")
    row.update({
        "alg_cost": format_rat(alg),
        "opt_cost": format_rat(opt),
        "ratio": ratio_s,
        "audit_pass": "true" if res.audit.ok else "false",
        "_ratio_float": ratio_f,
    })
    return row


CSV_COLUMNS = ["instance", "objective", "k", "g",
               "alg_cost", "opt_cost", "ratio", "audit_pass"]


def cmd_compare(args) -> int:
    objectives = [ob.strip() for ob in args.objectives.split(",") if ob.strip()]
    for ob in objectives:
        if ob not in OBJECTIVES:
            raise InvalidInstance(f"unknown objective {ob!r}")
    if args.batch:
        entries = []
        for fname in sorted(os.listdir(args.batch)):
            if fname.endswith(".json"):
                with open(os.path.join(args.batch, fname), encoding="utf-8") as fh:
                    entries.append((fname[:-len(".json")], json.load(fh)))
    else:
        spaces = SPACES if args.space == "both" else (args.space,)
        entries = [
            (name, instance_to_json(inst))
            for name, inst in suite(args.count, args.seed,
                                    (args.n_min, args.n_max),
                                    (args.k_min, args.k_max), spaces)
        ]
    tasks = [(name, obj, ob, args.guess_size)
             for name, obj in entries for ob in objectives]
    if args.workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(args.workers) as pool:
            rows = pool.map(_compare_row, tasks, chunksize=1)
    else:
        rows = [_compare_row(t) for t in tasks]
    rows.sort(key=lambda r: (r["instance"], r["objective"]))

    with open(args.csv, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS,
                                extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)

    widths = {c: max([len(c)] + [len(r[c]) for r in rows]) for c in CSV_COLUMNS}
    line = "  ".join(c.ljust(widths[c]) for c in CSV_COLUMNS)
    print(line)
    print("-" * len(line))
    for r in rows:
        print("  ".join(r[c].ljust(widths[c]) for c in CSV_COLUMNS))
    for ob in objectives:
        ratios = [(r["_ratio_float"], r["ratio"]) for r in rows
                  if r["objective"] == ob and r["_ratio_float"] is not None]
        if ratios:
            worst = max(ratios)
            print(f"{ob}: {len(ratios)} solved, max ratio {worst[1]} "
                  f"(~{worst[0]:.4f}), bound {format_rat(BETA[ob])} "
                  f"(~{float(BETA[ob]):.4f})")
        else:
            print(f"{ob}: nothing solved")

    figure = args.figure
    if figure is None:
        figure = os.path.splitext(args.csv)[0] + ".png"
    from .plotting import render_ratio_figure

    render_ratio_figure(
        [{"objective": r["objective"], "ratio": r["_ratio_float"]}
         for r in rows],
        {ob: BETA[ob] for ob in objectives},
        figure,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumradii",
        description="Approximation algorithms for minimum sum of radii, "
                    "diameters, and squared radii clustering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run the approximation pipeline")
    ps.add_argument("--input", required=True)
    ps.add_argument("--objective", required=True, choices=OBJECTIVES)
    ps.add_argument("--k", type=int, default=None,
                    help="override the instance ball budget")
    ps.add_argument("--guess-size", type=int, default=1)
    ps.add_argument("--output", default=None)
    ps.add_argument("--trace", action="store_true",
                    help="include every audit check in the JSON output")
    ps.add_argument("--svg", default=None,
                    help="render the solution (2D instances only)")
    ps.set_defaults(func=cmd_solve)

    po = sub.add_parser("oracle", help="exact optimum by brute force")
    po.add_argument("--input", required=True)
    po.add_argument("--objective", required=True, choices=OBJECTIVES)
    po.add_argument("--k", type=int, default=None)
    po.add_argument("--output", default=None)
    po.set_defaults(func=cmd_oracle)

    pg = sub.add_parser("gen", help="generate instances")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--k", type=int, required=True)
    pg.add_argument("--seed", default="0")
    pg.add_argument("--space", default="random-metric",
                    choices=list(SPACES))
    pg.add_argument("--count", type=int, default=1)
    pg.add_argument("--out", default=".")
    pg.set_defaults(func=cmd_gen)

    pc = sub.add_parser("compare",
                        help="solve a batch, compare against oracles")
    pc.add_argument("--batch", default=None,
                    help="directory of instance JSON files")
    pc.add_argument("--space", default="both",
                    choices=["both", *SPACES])
    pc.add_argument("--count", type=int, default=20)
    pc.add_argument("--seed", default="0")
    pc.add_argument("--n-min", type=int, default=6)
    pc.add_argument("--n-max", type=int, default=12)
    pc.add_argument("--k-min", type=int, default=2)
    pc.add_argument("--k-max", type=int, default=4)
    pc.add_argument("--objectives", default=",".join(OBJECTIVES))
    pc.add_argument("--guess-size", type=int, default=1)
    pc.add_argument("--csv", default="compare.csv")
    pc.add_argument("--figure", default=None,
                    help="ratio chart path (default: csv name with .png)")
    pc.add_argument("--workers", type=int, default=1)
    pc.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TriangleViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (InvalidInstance, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
