import csv
import json
import subprocess
import sys

import pytest

from sumradii.cli import main
from sumradii.metric import instance_from_json, instance_to_json
from sumradii.generate import random_metric_instance

from conftest import LINE5_COORDS, line_instance


@pytest.fixture()
def line5_file(tmp_path):
    inst = line_instance(LINE5_COORDS, 2)
    path = tmp_path / "line5.json"
    path.write_text(json.dumps(instance_to_json(inst)))
    return path


def run(args):
    return main([str(a) for a in args])


def test_gen_writes_loadable_instances(tmp_path, capsys):
    out = tmp_path / "batch"
    assert run(["gen", "--n", "7", "--k", "3", "--seed", "g1",
                "--count", "2", "--out", out]) == 0
    printed = capsys.readouterr().out.strip().splitlines()
    assert len(printed) == 2
    for line in printed:
        inst = instance_from_json(json.loads(open(line).read()))
        assert inst.n == 7 and inst.k == 3


def test_gen_byte_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "sumradii.cli", "gen", "--n", "6", "--k", "2",
           "--seed", "rep", "--space", "euclidean2d", "--count", "2"]
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        r = subprocess.run(cmd + ["--out", str(out)], capture_output=True)
        assert r.returncode == 0, r.stderr
    files_a = sorted(p.name for p in a.iterdir())
    files_b = sorted(p.name for p in b.iterdir())
    assert files_a == files_b and files_a
    for name in files_a:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_solve_line5_msr(line5_file, tmp_path, capsys):
    out = tmp_path / "res.json"
    assert run(["solve", "--input", line5_file, "--objective", "msr",
                "--output", out]) == 0
    payload = json.loads(out.read_text())
    assert payload["objective"] == "msr"
    assert payload["cost"]["exact"] == "2"
    assert payload["audit"]["pass"] is True
    assert len(payload["solution"]["balls"]) <= 2
    assert payload["guessed"]


def test_solve_trace_includes_checks(line5_file, capsys):
    assert run(["solve", "--input", line5_file, "--objective", "mssr",
                "--trace"]) == 0
    payload = json.loads(capsys.readouterr().out)
    checks = payload["audit"]["checks"]
    assert isinstance(checks, list) and checks
    assert all(c["ok"] for c in checks)
    assert {"name", "lhs", "op", "rhs"} <= set(checks[0])


def test_solve_msd_reports_clusters(line5_file, capsys):
    assert run(["solve", "--input", line5_file, "--objective", "msd"]) == 0
    payload = json.loads(capsys.readouterr().out)
    clusters = payload["solution"]["clusters"]
    assert sorted(map(sorted, clusters)) == [[0, 1, 2], [3, 4]]
    assert payload["cost"]["exact"] == "3"


def test_solve_k_override(line5_file, capsys):
    assert run(["solve", "--input", line5_file, "--objective", "msr",
                "--k", "5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["k"] == 5
    assert payload["cost"]["exact"] == "0"


def test_missing_input_exits_2(tmp_path, capsys):
    assert run(["solve", "--input", tmp_path / "nope.json",
                "--objective", "msr"]) == 2


def test_unparseable_json_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["solve", "--input", bad, "--objective", "msr"]) == 2


def test_triangle_violation_exits_3(tmp_path):
    bad = tmp_path / "tri.json"
    bad.write_text(json.dumps(
        {"k": 1, "dist": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]}))
    assert run(["oracle", "--input", bad, "--objective", "msr"]) == 3


def test_oversized_oracle_exits_4(tmp_path):
    inst = random_metric_instance(17, 2, "too-big")
    path = tmp_path / "big.json"
    path.write_text(json.dumps(instance_to_json(inst)))
    assert run(["oracle", "--input", path, "--objective", "msr"]) == 4


def test_svg_skipped_without_coords(line5_file, tmp_path, capsys):
    svg = tmp_path / "plot.svg"
    assert run(["solve", "--input", line5_file, "--objective", "msr",
                "--output", tmp_path / "r.json", "--svg", svg]) == 0
    assert "skipping SVG" in capsys.readouterr().err
    assert not svg.exists()


def test_svg_rendered_with_coords(tmp_path, capsys):
    src = tmp_path / "geo.json"
    src.write_text(json.dumps(
        {"k": 2, "coords": [[0, 0], [1, 0], [0, 1], [9, 9], [10, 9]],
         "denom": 16}))
    svg = tmp_path / "plot.svg"
    assert run(["solve", "--input", src, "--objective", "msr",
                "--output", tmp_path / "r.json", "--svg", svg]) == 0
    head = svg.read_text()[:300]
    assert "<svg" in head


def test_oracle_line5(line5_file, capsys):
    assert run(["oracle", "--input", line5_file, "--objective", "msd"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"]["exact"] == "3"
    assert payload["witness"]["clusters"]


def test_compare_batch(tmp_path, capsys):
    batch = tmp_path / "batch"
    batch.mkdir()
    for i, coords in enumerate(([0, 1, 2, 10, 11], [0, 3, 6, 20])):
        inst = line_instance(coords, 2)
        (batch / f"inst{i}.json").write_text(json.dumps(instance_to_json(inst)))
    csv_path = tmp_path / "report.csv"
    fig_path = tmp_path / "report.png"
    assert run(["compare", "--batch", batch, "--csv", csv_path,
                "--figure", fig_path]) == 0
    with open(csv_path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6                      # 2 instances x 3 objectives
    assert rows == sorted(rows, key=lambda r: (r["instance"], r["objective"]))
    for row in rows:
        assert row["audit_pass"] == "true"
        assert "/" in row["ratio"] or row["ratio"].isdigit()
    assert fig_path.exists() and fig_path.stat().st_size > 0
    out = capsys.readouterr().out
    assert "max ratio" in out


def test_compare_marks_oversized_as_skipped(tmp_path):
    batch = tmp_path / "batch"
    batch.mkdir()
    big = random_metric_instance(17, 2, "huge")
    (batch / "big.json").write_text(json.dumps(instance_to_json(big)))
    csv_path = tmp_path / "skip.csv"
    assert run(["compare", "--batch", batch, "--csv", csv_path,
                "--objectives", "msr"]) == 0
    with open(csv_path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert rows[0]["audit_pass"] == "skipped"
    assert rows[0]["alg_cost"] == "" and rows[0]["ratio"] == ""


def test_compare_empty_batch(tmp_path, capsys):
    batch = tmp_path / "none"
    batch.mkdir()
    csv_path = tmp_path / "empty.csv"
    assert run(["compare", "--batch", batch, "--csv", csv_path]) == 0
    with open(csv_path) as fh:
        assert list(csv.DictReader(fh)) == []
    assert (tmp_path / "empty.png").exists()


def test_compare_generated_suite_with_workers(tmp_path, capsys):
    csv_path = tmp_path / "suite.csv"
    assert run(["compare", "--count", "2", "--seed", "cli", "--n-min", "6",
                "--n-max", "8", "--csv", csv_path, "--workers", "2",
                "--objectives", "msr,msd"]) == 0
    with open(csv_path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert all(r["audit_pass"] == "true" for r in rows)


def test_compare_rejects_unknown_objective(tmp_path):
    assert run(["compare", "--count", "1", "--csv", tmp_path / "x.csv",
                "--objectives", "kmeans"]) == 2
