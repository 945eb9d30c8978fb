"""Acceptance criteria, one test and one PASS/FAIL line each.

The randomized criteria are measured by the seeded suite (seed 42, 200
cases); the lines are repeated in the pytest terminal summary.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from pickspace.embed import build_counterexample, example52_report
from pickspace.pick import decompose
from pickspace.rkhs import make_kernel
from pickspace.suite import run_suite
from conftest import ACCEPTANCE_LINES

SEED = 42
CASES = 200


@pytest.fixture(scope="module")
def suite():
    rep = run_suite(SEED, CASES)
    return {s["id"]: s for s in rep["sections"]}


def _check(section, name):
    return next(c for c in section["checks"] if c["name"] == name)


def _record(number, ok, text):
    line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_pick_verification(suite):
    s = suite[1]
    fams = sorted({c["family"] for c in s["cases"]})
    counts = {f: sum(c["family"] == f for c in s["cases"]) for f in fams}
    min_eig = min(c["min_eig"] for c in s["cases"])
    ok = all(c["pick"] for c in s["cases"]) and min_eig >= -1e-10 and \
        all(v == 5 for v in counts.values()) and len(fams) == 3
    _record(1, ok, f"pick verification: {counts}, min eigenvalue {min_eig:.2e} >= -1e-10")


def test_criterion_02_delta_projection(suite):
    worst = max(c["delta_projection"] for c in suite[1]["cases"])
    _record(2, worst <= 1e-10, f"delta projection: max residual {worst:.2e} <= 1e-10")


def test_criterion_03_beurling_round_trip(suite):
    s = suite[3]
    worst = max(c["residual"] for c in s["cases"])
    contractive = sum(c["contractive"] for c in s["cases"])
    ok = len(s["cases"]) == CASES and worst <= 1e-8 and contractive == CASES
    _record(3, ok, f"beurling round trip: max residual {worst:.2e} <= 1e-8, "
                   f"contractive {contractive}/{len(s['cases'])}")


def test_criterion_04_inner(suite):
    s = suite[4]
    worst = max(c["idempotence"] for c in s["cases"])
    ranks = sum(c["rank"] == c["dim_m"] for c in s["cases"])
    ok = len(s["cases"]) == 50 and worst <= 1e-8 and ranks == 50
    _record(4, ok, f"inner corollary: idempotence {worst:.2e} <= 1e-8, "
                   f"rank = dim M in {ranks}/{len(s['cases'])}")


def test_criterion_05_realization_identity(suite):
    s = suite[5]
    worst = max(c["identity"] for c in s["cases"])
    same = sum(c["same_range"] for c in s["cases"])
    ok = len(s["cases"]) == CASES and worst <= 1e-10 and same == CASES
    _record(5, ok, f"realization identity: max residual {worst:.2e} <= 1e-10, "
                   f"same_range {same}/{len(s['cases'])}")


def test_criterion_06_gleason(suite):
    s5, s6 = suite[5], suite[6]
    ident = max(c["gleason"] for c in s5["cases"])
    slack = min(c["slack"] for c in s5["cases"])
    whole = _check(s6, "whole_space")["value"]
    ok = ident <= 1e-10 and slack >= -1e-10 and whole <= 1e-10
    _record(6, ok, f"gleason: identity {ident:.2e} <= 1e-10, slack {slack:.2e} >= -1e-10, "
                   f"whole space {whole:.2e} <= 1e-10")


def test_criterion_07_complementary_round_trip(suite):
    s = suite[7]
    same = sum(c["same_range"] for c in s["cases"])
    rec = max(c["recovery"] for c in s["cases"] if "recovery" in c)
    kinds = sorted({c["kind"] for c in s["cases"]})
    ok = len(s["cases"]) == 100 and same == 100 and rec <= 1e-8
    _record(7, ok, f"complementary round trip: same_range {same}/{len(s['cases'])} "
                   f"({', '.join(kinds)}), isometric recovery {rec:.2e} <= 1e-8")


def test_criterion_08_example():
    rep = example52_report()
    ok = (rep["kernel_relative_error"] <= 1e-12 and rep["gamma_equality_residual"] <= 1e-12
          and rep["gamma_gram_gap"] <= 1e-12 and rep["kappa_min"] >= 0.1)
    _record(8, ok, f"two-point example: K(1/2,1/2) rel err {rep['kernel_relative_error']:.1e}, "
                   f"gamma gap {rep['gamma_equality_residual']:.1e}, gram gap "
                   f"{rep['gamma_gram_gap']:.1e}, min kappa {rep['kappa_min']:.4f} >= 0.1")


def test_criterion_09_counterexample():
    p = decompose(make_kernel("szego", [0.0, 0.5]))
    rep = build_counterexample(p, SEED, enlarge=True)
    ok = rep.distance_to_span >= 1e-6 and rep.invariance_defect >= 1e-6 and \
        rep.max_commutator == 0
    _record(9, ok, f"counterexample (enlarged B): distance {rep.distance_to_span:.3e} >= 1e-6, "
                   f"defect {rep.invariance_defect:.3e} >= 1e-6, "
                   f"commutators {rep.max_commutator:.1e}")


def test_criterion_10_embedding(suite):
    emb = max(c["embedding"] for c in suite[1]["cases"])
    inter = max(c["intertwining"] for c in suite[1]["cases"])
    n_xi = suite[10]["xi_per_kernel"]
    ok = emb <= 1e-12 and inter <= 1e-10 and n_xi == 20
    _record(10, ok, f"embedding: max |K - D| {emb:.2e} <= 1e-12, intertwining {inter:.2e} "
                    f"<= 1e-10 ({n_xi} xi per kernel)")


def _suite_cli():
    out = subprocess.run([sys.executable, "-m", "pickspace", "suite", "run", "--seed", str(SEED)],
                         capture_output=True, text=True, check=False)
    rep = json.loads(out.stdout)
    rep.pop("timestamp")
    return out.returncode, json.dumps(rep, sort_keys=True)


def test_criterion_11_determinism():
    (c1, r1), (c2, r2) = _suite_cli(), _suite_cli()
    ok = r1 == r2 and c1 == c2 == 0
    _record(11, ok, f"determinism: two `suite run --seed {SEED}` reports identical "
                    f"({len(r1)} bytes, exit codes {c1}/{c2})")
