"""Command-line front end: state files, measures, sweeps and the verification harness.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 optimizer non-convergence (the partial result is still printed).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import conditioning, entropy, exact_measures as measures
from .optimize import OptimizationResult, OptimizerOptions
from .states import (
    LabelError,
    Partition,
    PureState,
    QuantumState,
    StateError,
    as_labels,
    make_named_state,
    partial_trace,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3

MEASURES = (
    "S", "I", "I_n", "S_n", "cmi", "log_neg", "ppt", "eof", "c_squashed",
    "e_sq_q", "c_I", "ce_logneg", "ce_eof", "c_I_multi", "c_S_multi",
)
OPTIMIZED = ("eof", "c_squashed", "e_sq_q", "c_I", "ce_logneg", "ce_eof", "c_I_multi", "c_S_multi")
FAMILY_PARAMS = ("p", "d", "n", "F", "seed")


class UsageError(ValueError):
    pass


# -- state files ------------------------------------------------------------------------


def _pairs(rows, name: str) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateError(f"field {name!r}: entries must be [re, im] number pairs ({exc})") from None
    if arr.shape[-1:] != (2,):
        raise StateError(f"field {name!r}: entries must be [re, im] pairs, got shape {arr.shape}")
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        raise StateError(f"field {name!r}: non-finite value at index {tuple(int(i) for i in bad[0][:-1])}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_from_json(obj: dict) -> QuantumState | PureState:
    """Parse a StateFile object; errors name the offending field and index."""
    if not isinstance(obj, dict):
        raise StateError("state file must hold a JSON object")
    for key in ("labels", "dims"):
        if key not in obj:
            raise StateError(f"missing field {key!r}")
    labels = obj["labels"]
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise StateError("field 'labels' must be a list of strings")
    dims = obj["dims"]
    if not isinstance(dims, list):
        raise StateError("field 'dims' must be a list of integers")
    for i, d in enumerate(dims):
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise StateError(f"field 'dims' index {i}: expected a positive integer, got {d!r}")
    if ("matrix" in obj) == ("vector" in obj):
        raise StateError("state file needs exactly one of 'matrix' or 'vector'")
    if "vector" in obj:
        return PureState(_pairs(obj["vector"], "vector"), tuple(dims), tuple(labels))
    rows = obj["matrix"]
    if not isinstance(rows, list):
        raise StateError("field 'matrix' must be a list of rows")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(rows):
            raise StateError(f"field 'matrix' row {i}: expected {len(rows)} entries")
    return QuantumState(_pairs(rows, "matrix"), tuple(dims), tuple(labels))


def state_to_json(s: QuantumState | PureState) -> dict:
    out: dict[str, Any] = {"labels": list(s.labels), "dims": [int(d) for d in s.dims]}
    if isinstance(s, PureState):
        out["vector"] = [[float(z.real), float(z.imag)] for z in s.vector]
    else:
        out["matrix"] = [[[float(z.real), float(z.imag)] for z in row] for row in s.matrix]
    return out


def load_state(path) -> QuantumState | PureState:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read state file {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return state_from_json(obj)


def save_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def as_mixed(s) -> QuantumState:
    return s.projector() if isinstance(s, PureState) else s


# -- configuration ------------------------------------------------------------------------


@dataclass
class RunConfig:
    restarts: int | None = None
    iterations: int | None = None
    tol: float | None = None
    seed: int | None = None
    threads: int | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(args.restarts, args.iterations, args.tol, args.seed, args.threads)

    def options(self) -> OptimizerOptions:
        kw = {k: v for k, v in (("restarts", self.restarts), ("iterations", self.iterations),
                                 ("tol", self.tol), ("seed", self.seed), ("threads", self.threads))
              if v is not None}
        try:
            return OptimizerOptions(**kw)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def _apply_threads(n: int | None) -> None:
    if n is not None:
        if n < 1:
            raise UsageError("--threads must be >= 1")
        os.environ["CONDENT_THREADS"] = str(n)


# -- measures ---------------------------------------------------------------------------------


@dataclass
class Outcome:
    value: float
    result: OptimizationResult | None = None

    @property
    def converged(self) -> bool:
        return self.result is None or self.result.converged


def _groups(split: str | None, need: int | None = None, at_least: int | None = None):
    if split is None:
        raise UsageError("this measure needs --split")
    try:
        groups = Partition.parse(split).groups
    except ValueError as exc:
        raise UsageError(f"bad --split {split!r}: {exc}") from None
    if need is not None and len(groups) != need:
        raise UsageError(f"--split needs {need} groups, got {len(groups)}")
    if at_least is not None and len(groups) < at_least:
        raise UsageError(f"--split needs at least {at_least} groups, got {len(groups)}")
    return groups


def _check_labels(s, groups) -> None:
    unknown = [x for g in groups for x in g if x not in s.labels]
    if unknown:
        raise UsageError(f"labels {unknown} are not in the state {list(s.labels)}")


def compute_measure(s, measure: str, split: str | None, opts: OptimizerOptions, *,
                    trivial_only: bool = False, half: bool = False) -> Outcome:
    """Dispatch one named measure on a loaded state."""
    if measure not in MEASURES:
        raise UsageError(f"unknown measure {measure!r}; choose from {', '.join(MEASURES)}")
    rho = as_mixed(s)
    if measure == "S":
        if split is None:
            return Outcome(entropy.von_neumann_entropy(rho))
        groups = _groups(split)
        _check_labels(rho, groups)
        return Outcome(entropy.EntropyOracle.of(rho)(tuple(x for g in groups for x in g)))
    if measure in ("I_n", "S_n", "c_I_multi", "c_S_multi"):
        groups = _groups(split, at_least=2)
    elif measure == "cmi":
        groups = _groups(split, need=3)
    else:
        groups = _groups(split, need=2)
    _check_labels(rho, groups)
    flat = tuple(x for g in groups for x in g)
    if measure == "cmi":
        return Outcome(entropy.conditional_mutual_information(rho, *groups))
    if measure == "e_sq_q":
        return _e_sq_q(s, groups, opts, trivial_only)
    sub = partial_trace(rho, flat) if sorted(flat) != sorted(rho.labels) else rho
    ent = entropy.EntropyOracle.of(sub)
    if measure == "I":
        return Outcome(entropy.mi_from(ent, *groups))
    if measure == "I_n":
        return Outcome(entropy.In_from(ent, groups))
    if measure == "S_n":
        return Outcome(entropy.Sn_from(ent, groups))
    if measure == "log_neg":
        return Outcome(measures.log_negativity(sub, groups[0]))
    if measure == "ppt":
        return Outcome(1.0 if measures.ppt_check(sub, groups[0]) else 0.0)
    if measure == "eof":
        res = measures.entanglement_of_formation(sub, groups[0], opts)
        return Outcome(res.value, res)
    if measure == "c_squashed":
        res = measures.c_squashed(sub, groups[0], opts)
        return Outcome(res.value, res)
    kw = {"trivial_only": trivial_only}
    if measure == "c_I":
        res = conditioning.c_I(sub, groups, opts, **kw)
    elif measure == "ce_logneg":
        res = conditioning.conditional_entanglement(sub, groups, "log_negativity", opts, **kw)
    elif measure == "ce_eof":
        res = conditioning.conditional_entanglement(sub, groups, "ent_of_formation", opts, **kw)
    else:
        which = "I_n" if measure == "c_I_multi" else "S_n"
        res = conditioning.multipartite_conditioned(sub, groups, which, opts, factor=0.5 if half else 1.0, **kw)
    return Outcome(res.value, res)


def _e_sq_q(s, groups, opts, trivial_only) -> Outcome:
    """E_sq^q bound; labels outside the split form a given extension system E."""
    rho = as_mixed(s)
    flat = tuple(x for g in groups for x in g)
    rest = tuple(x for x in rho.labels if x not in flat)
    if rest:
        ent = entropy.EntropyOracle.of(s)
        given = 0.5 * entropy.cmi_from(ent, groups[0], groups[1], rest)
        if trivial_only:
            cert = {"kind": "given", "extension": list(rest)}
            return Outcome(given, OptimizationResult(given, cert, [given], True, 0, {"mode": "asymmetric"}))
        ext = conditioning.Extension(rho, groups, (rest,), "asymmetric")
        sub = partial_trace(rho, flat)
        res = conditioning.e_sq_q_bound(sub, groups, opts, seed_extensions=[ext])
        return Outcome(res.value, res)
    res = conditioning.e_sq_q_bound(rho, groups, opts, trivial_only=trivial_only)
    return Outcome(res.value, res)


def _fmt(v: float) -> str:
    return f"{v + 0.0:.6f}" if abs(v) >= 5e-7 else "0.000000"


# -- commands -------------------------------------------------------------------------------


def _family_params(args) -> dict:
    return {k: getattr(args, k) for k in FAMILY_PARAMS if getattr(args, k, None) is not None}


def cmd_make_state(args) -> int:
    s = make_named_state(args.name, _family_params(args))
    save_json(state_to_json(s), args.out)
    print(f"wrote {args.name} ({'x'.join(str(d) for d in s.dims)}) to {args.out}")
    return EXIT_OK


def _cert_path(args) -> Path:
    if args.cert:
        return Path(args.cert)
    p = Path(args.state)
    return p.with_name(f"{p.stem}.{args.measure}.cert.json")


def cmd_compute(args) -> int:
    cfg = RunConfig.from_args(args)
    _apply_threads(cfg.threads)
    s = load_state(args.state)
    out = compute_measure(s, args.measure, args.split, cfg.options(), trivial_only=args.trivial_only, half=args.half)
    print(_fmt(out.value))
    if out.result is not None:
        path = _cert_path(args)
        save_json(out.result.to_json(), path)
        print(f"certificate: {path}", file=sys.stderr)
    if not out.converged:
        print("warning: optimizer did not converge; value is an upper bound from the best run", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def parse_grid(text: str) -> list[float]:
    """``a,b,c`` or ``start:stop:count`` (inclusive linspace)."""
    text = text.strip()
    if not text:
        return []
    try:
        if ":" in text:
            a, b, n = text.split(":")
            return [float(f"{x:.12g}") for x in np.linspace(float(a), float(b), int(n))]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad grid {text!r}; use a,b,c or start:stop:count") from None


def cmd_sweep(args) -> int:
    cfg = RunConfig.from_args(args)
    _apply_threads(cfg.threads)
    grid = parse_grid(args.grid)
    if not grid:
        raise UsageError("empty parameter grid")
    opts = cfg.options()
    fixed = _family_params(args)
    rows, failed = [], 0
    for x in grid:
        params = dict(fixed)
        params[args.param] = int(x) if args.param in ("d", "n", "seed") else x
        t0 = time.perf_counter()
        try:
            s = make_named_state(args.family, params)
            out = compute_measure(s, args.measure, args.split, opts, trivial_only=args.trivial_only, half=args.half)
            value, conv = out.value, out.converged
            restarts = out.result.restarts_used if out.result is not None else 0
        except UsageError:
            raise
        except (ValueError, RuntimeError) as exc:
            print(f"row {args.param}={x}: {exc}", file=sys.stderr)
            value, conv, restarts = float("nan"), False, 0
        secs = 0.0 if args.no_timing else time.perf_counter() - t0
        failed += not conv
        rows.append([repr(float(x)), f"{value:.9f}", "true" if conv else "false", str(restarts), f"{secs:.3f}"])
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["param", "value", "converged", "restarts_used", "seconds"])
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_NONCONVERGED if failed else EXIT_OK


def reports_json(reports) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True) + "\n"


def cmd_verify(args) -> int:
    from . import propositions

    _apply_threads(args.threads)
    reports = propositions.run_all(args.seed, args.profile, only=args.only)
    text = reports_json(reports)
    if args.out:
        Path(args.out).write_text(text)
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} margin={r.margin:.3e} cases={r.cases_run}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


# -- parser ---------------------------------------------------------------------------------


def _add_family(p) -> None:
    p.add_argument("--p", type=float, help="mixing parameter (werner)")
    p.add_argument("--F", type=float, help="fidelity (isotropic)")
    p.add_argument("--d", type=int, help="local dimension")
    p.add_argument("--n", type=int, help="number of parties")
    p.add_argument("--seed", type=int, dest="seed", help="seed (product family / optimizer)")


def _add_opt(p, seed: bool = True) -> None:
    p.add_argument("--restarts", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--tol", type=float)
    if seed:
        p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, help="worker threads (default: CONDENT_THREADS or 1)")


def _add_measure(p) -> None:
    p.add_argument("--split", help="partition such as A1,A2:B1,B2")
    p.add_argument("--trivial-only", action="store_true", help="evaluate the trivial (or given) extension only")
    p.add_argument("--half", action="store_true", help="factor 1/2 for multipartite measures")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="condent", description="Conditioned entanglement measures.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-state", help="write a named state family member")
    p.add_argument("name")
    p.add_argument("out")
    _add_family(p)
    p.set_defaults(func=cmd_make_state)

    p = sub.add_parser("compute", help="evaluate a measure on a state file")
    p.add_argument("state")
    p.add_argument("measure", choices=MEASURES)
    _add_measure(p)
    _add_opt(p)
    p.add_argument("--cert", help="certificate output path")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="sweep a family parameter and write CSV")
    p.add_argument("family")
    p.add_argument("measure", choices=MEASURES)
    p.add_argument("--param", required=True, choices=FAMILY_PARAMS)
    p.add_argument("--grid", required=True, help="a,b,c or start:stop:count")
    p.add_argument("--out", required=True)
    p.add_argument("--no-timing", action="store_true", help="write 0 in the seconds column")
    _add_measure(p)
    _add_family(p)
    _add_opt(p, seed=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the verification checks")
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.add_argument("--only", nargs="+", help="run only these checks")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, LabelError, StateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
