"""The twelve acceptance criteria at their stated sizes, tolerances and time limits."""

import time

import numpy as np
import pytest

from conftest import eof_oracle, record_acceptance
import condent.propositions as P
from condent.cli import main
from condent.conditioning import c_I, e_sq_q_bound
from condent.exact_measures import c_squashed, entanglement_of_formation
from condent.optimize import OptimizerOptions
from condent.states import make_named_state, random_separable, random_state

DEFAULT = OptimizerOptions()
SEED = 2024


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def finish(capsys, number, title, ok, detail, seconds, limit):
    within = seconds < limit
    record_acceptance(capsys, number, title, ok and within, f"{detail}; {seconds:.1f} s (limit {limit:.0f} s)")
    assert ok, detail
    assert within, f"took {seconds:.1f} s, limit {limit} s"


def test_criterion_01_flower_value(tmp_path, capsys):
    worst, slowest, ok = 0.0, 0.0, True
    for d in (2, 3, 4):
        path = tmp_path / f"flower{d}.json"
        assert main(["make-state", "flower", str(path), "--d", str(d)]) == 0
        capsys.readouterr()
        with Timer() as t:
            code = main(["compute", str(path), "e_sq_q", "--split", "A1,A2:B1,B2", "--trivial-only"])
        printed = capsys.readouterr().out.strip()
        value = P.flower_trivial_value(d)
        target = 1 + 0.5 * np.log2(d)
        err = abs(value - target)
        ok &= code == 0 and err <= 1e-9 and printed == f"{target:.6f}"
        worst, slowest = max(worst, err), max(slowest, t.seconds)
    finish(capsys, 1, "flower value", ok, f"max deviation {worst:.2e} over d = 2, 3, 4", slowest, 10)


def test_criterion_02_locking(capsys):
    with Timer() as t:
        rep = P.check_flower(2, DEFAULT)
    d = rep.details
    ok = rep.passed and d["ppt_after_loss"] and d["c_I_after_loss"] < 0.375
    finish(capsys, 2, "locking", ok,
           f"PPT {d['ppt_after_loss']}, C_I after loss {d['c_I_after_loss']:.6f} < 0.375", t.seconds, 300)


def test_criterion_03_separable_zero(capsys):
    worst = 0.0
    with Timer() as t:
        for c in range(10):
            s, ens = random_separable(members=6, seed=SEED + c)
            for res in (c_I(s, "A:B", DEFAULT, seed_ensembles=[ens]),
                        e_sq_q_bound(s, "A:B", DEFAULT, seed_ensembles=[ens]),
                        c_squashed(s, "A", DEFAULT, seed_ensembles=[ens])):
                worst = max(worst, res.value)
    finish(capsys, 3, "separable zero", worst <= 5e-3, f"largest bound {worst:.2e} <= 5e-3", t.seconds, 120)


def test_criterion_04_ordering(capsys):
    with Timer() as t:
        rep = P.check_ordering(SEED, cases=10, werner=(0.5, 0.8, 1.0), opts=DEFAULT)
    ok = rep.passed and rep.margin >= -2e-8 and rep.cases_run == 13
    finish(capsys, 4, "ordering chain", ok, f"margin {rep.margin:.2e} >= -2e-8 on {rep.cases_run} states",
           t.seconds, 600)


def test_criterion_05_additivity(capsys):
    with Timer() as t:
        rep = P.check_additivity_CI(SEED, identity_cases=50, pairs=5, opts=DEFAULT)
    gaps = rep.details["gaps"]
    ok = rep.passed and len(gaps) == 5 and max(abs(g) for g in gaps) <= 0.05
    finish(capsys, 5, "additivity", ok, f"max |gap| {max(abs(g) for g in gaps):.2e} <= 0.05, "
           f"identity margin {rep.margin:.2e}", t.seconds, 1200)


def test_criterion_06_measurement_monotonicity(capsys):
    with Timer() as t:
        rep = P.check_measurement_monotonicity(SEED, cases=30)
    ok = rep.passed and rep.margin >= -1e-8 and rep.cases_run == 30
    finish(capsys, 6, "measurement monotonicity", ok, f"margin {rep.margin:.2e} >= -1e-8", t.seconds, 120)


def test_criterion_07_convexity(capsys):
    with Timer() as t:
        rep = P.check_convexity_flag(SEED, cases=20)
    ok = rep.passed and rep.margin >= -1e-8 and rep.cases_run == 20 * len(P.LAMBDA_GRID)
    finish(capsys, 7, "convexity identity", ok, f"max deviation {-rep.margin:.2e} <= 1e-8", t.seconds, 60)


def test_criterion_08_continuity(capsys):
    with Timer() as t:
        rep = P.check_continuity(SEED, cases=50, channel_cases=20, max_eps=0.1)
    ok = rep.passed and rep.cases_run == 70
    finish(capsys, 8, "continuity", ok, f"margin {rep.margin:.2e}", t.seconds, 180)


def test_criterion_09_chain_rule(capsys):
    with Timer() as t:
        rep = P.check_chain_rule(SEED, cases=30)
    ok = rep.passed and rep.margin >= -1e-9 and rep.cases_run == 30
    finish(capsys, 9, "chain rule", ok, f"margin {rep.margin:.2e} >= -1e-9", t.seconds, 60)


def test_criterion_10_eof_oracle(capsys):
    states = [random_state((2, 2), 2, SEED + c, ("A", "B")) for c in range(10)]
    states += [make_named_state("werner", {"p": p}) for p in (0.5, 0.7, 0.9)]
    worst = 0.0
    with Timer() as t:
        for s in states:
            res = entanglement_of_formation(s, "A", DEFAULT)
            worst = max(worst, abs(res.value - eof_oracle(s.matrix)))
    finish(capsys, 10, "convex-roof oracle", worst <= 5e-3, f"max |EoF - oracle| {worst:.2e} <= 5e-3",
           t.seconds, 300)


def test_criterion_11_multipartite(capsys):
    with Timer() as t:
        rep = P.check_multipartite_additivity(SEED, identity_cases=20, pairs=2, opts=DEFAULT)
    gaps = rep.details["gaps"]
    ok = rep.passed and max(abs(g) for g in gaps) <= 0.08
    finish(capsys, 11, "multipartite", ok, f"max |gap| {max(abs(g) for g in gaps):.2e} <= 0.08, "
           f"identity margin {rep.margin:.2e}", t.seconds, 900)


def test_criterion_12_determinism(tmp_path, capsys):
    a, b = tmp_path / "t1.json", tmp_path / "t2.json"
    with Timer() as t:
        c1 = main(["verify", "--profile", "quick", "--seed", "42", "--out", str(a), "--threads", "1"])
        c2 = main(["verify", "--profile", "quick", "--seed", "42", "--out", str(b), "--threads", "2"])
    capsys.readouterr()
    same = a.read_bytes() == b.read_bytes()
    record_acceptance(capsys, 12, "determinism", same and c1 == c2 == 0,
                      f"reports byte-identical across 1 and 2 threads: {same}; {t.seconds:.1f} s")
    assert c1 == c2 == 0
    assert same
