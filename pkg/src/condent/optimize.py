"""Seeded multi-start Nelder-Mead with injected candidates.

Every variational quantity in the package is an upper bound found by this
search. Known good points (trivial extensions, flag constructions, combined
certificates) enter either as explicit starting points or as pre-evaluated
candidates, so the reported value never exceeds them.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Sequence

import numpy as np
from scipy.optimize import minimize

AGREE_TOL = 1e-4
BOUND_TOL = 1e-10


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CONDENT_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class OptimizerOptions:
    restarts: int = 16
    iterations: int = 2000
    tol: float = 1e-7
    xtol: float = 1e-4
    seed: int = 42
    step: float = 0.5
    threads: int | None = None

    def __post_init__(self):
        if not 1 <= self.restarts <= 256:
            raise ValueError(f"restarts must be in [1, 256], got {self.restarts}")
        if not 10 <= self.iterations <= 100000:
            raise ValueError(f"iterations must be in [10, 100000], got {self.iterations}")

    def scaled(self, restarts=None, iterations=None) -> "OptimizerOptions":
        return replace(
            self,
            restarts=self.restarts if restarts is None else restarts,
            iterations=self.iterations if iterations is None else iterations,
        )

    def derive(self, *key: int) -> "OptimizerOptions":
        """Same budget with a seed deterministically derived from ``key``."""
        ss = np.random.SeedSequence([self.seed, *key])
        return replace(self, seed=int(ss.generate_state(1)[0]))


@dataclass
class OptimizationResult:
    """Best value found, with a certificate that reproduces it."""

    value: float
    certificate: dict[str, Any]
    trace: list[float] = field(default_factory=list)
    converged: bool = False
    restarts_used: int = 0
    info: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "converged": self.converged,
            "restarts_used": self.restarts_used,
            "trace": self.trace,
            "certificate": self.certificate,
            "info": self.info,
        }


@dataclass
class _Run:
    value: float
    x: np.ndarray | None
    trace: list[float]
    success: bool


def _nelder_mead(fun, x0: np.ndarray, opts: OptimizerOptions, step: float) -> _Run:
    best = [np.inf, x0]
    trace: list[float] = []

    def wrapped(x):
        v = float(fun(x))
        if not np.isfinite(v):
            v = 1e300
        if v < best[0]:
            best[0], best[1] = v, np.array(x)
        return v

    n = x0.size
    simplex = np.vstack([x0, x0 + step * np.eye(n)])
    res = minimize(
        wrapped,
        x0,
        method="Nelder-Mead",
        callback=lambda xk: trace.append(best[0]),
        options={
            "maxiter": opts.iterations,
            "xatol": opts.xtol,
            "fatol": opts.tol,
            "initial_simplex": simplex,
            "adaptive": n > 8,
        },
    )
    trace.append(best[0])
    return _Run(best[0], best[1], trace, bool(res.success))


def multistart_minimize(
    fun: Callable[[np.ndarray], float],
    n_params: int,
    opts: OptimizerOptions,
    *,
    starts: Sequence[np.ndarray] = (),
    candidates: Sequence[tuple[float, dict]] = (),
    random_start: Callable[[np.random.Generator], np.ndarray] | None = None,
    lower_bound: float | None = None,
) -> OptimizationResult:
    """Minimize ``fun`` over R^n_params from ``opts.restarts`` starting points.

    ``starts`` fill the first restarts; the rest draw from ``random_start``
    (standard normal by default) using per-restart seeds spawned from
    ``opts.seed``. ``candidates`` are ``(value, certificate)`` pairs already
    evaluated by the caller. Ties are broken by position, candidates first,
    so the result does not depend on ``opts.threads``. When a candidate is
    within ``BOUND_TOL`` of a known ``lower_bound`` it is optimal and no
    restart is run.
    """
    hit = bound_candidate(candidates, lower_bound)
    if hit is not None:
        return hit
    seeds = np.random.SeedSequence(opts.seed).spawn(opts.restarts)
    if random_start is None:
        random_start = lambda rng: rng.standard_normal(n_params)  # noqa: E731

    def one(i: int) -> _Run:
        if n_params == 0:
            v = float(fun(np.zeros(0)))
            return _Run(v, np.zeros(0), [v], True)
        rng = np.random.default_rng(seeds[i])
        x0 = np.asarray(starts[i], dtype=float) if i < len(starts) else random_start(rng)
        step = opts.step * (0.2 if i < len(starts) else 1.0)
        return _nelder_mead(fun, x0, opts, step)

    n_runs = opts.restarts if n_params > 0 else 1
    threads = opts.threads or default_threads()
    if threads > 1 and n_runs > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(one, range(n_runs)))
    else:
        runs = [one(i) for i in range(n_runs)]

    values = [float(v) for v, _ in candidates] + [r.value for r in runs]
    raw = [float(v) for v, _ in candidates] + [x for r in runs for x in r.trace]
    trace = np.minimum.accumulate(np.array(raw)).tolist() if raw else []
    best = int(np.argmin(values))
    if best < len(candidates):
        cert = dict(candidates[best][1])
        success = False
    else:
        run = runs[best - len(candidates)]
        cert = {"kind": "params", "params": run.x.tolist(), "restart": best - len(candidates)}
        success = run.success
    value = values[best]
    agree = sum(1 for v in values if v <= value + AGREE_TOL) >= 2
    return OptimizationResult(
        value=value,
        certificate=cert,
        trace=trace,
        converged=success or agree,
        restarts_used=n_runs,
    )


def bound_candidate(candidates, lower_bound) -> OptimizationResult | None:
    """The first candidate attaining ``lower_bound``, as a converged result."""
    if lower_bound is None:
        return None
    for v, cert in candidates:
        if v <= lower_bound + BOUND_TOL:
            return OptimizationResult(float(v), dict(cert), [float(v)], True, 0, {"at_lower_bound": True})
    return None


def merge_results(results: Sequence[OptimizationResult]) -> OptimizationResult:
    """Combine passes: minimum value wins (earliest on ties), traces chain."""
    if not results:
        raise ValueError("nothing to merge")
    best = min(range(len(results)), key=lambda i: (results[i].value, i))
    raw = [x for r in results for x in r.trace]
    trace = np.minimum.accumulate(np.array(raw)).tolist()
    out = results[best]
    return OptimizationResult(
        value=out.value,
        certificate=out.certificate,
        trace=trace,
        converged=out.converged or sum(r.value <= out.value + AGREE_TOL for r in results) >= 2,
        restarts_used=sum(r.restarts_used for r in results),
        info=dict(out.info),
    )
