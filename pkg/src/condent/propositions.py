"""Seeded numerical checks of the identities and inequalities behind conditioned measures.

Each ``check_*`` function samples cases, records the worst slack and returns
a :class:`CheckReport`. Slack is positive when a case satisfies its
criterion; a check passes when its worst slack is at least ``-tolerance``.
Negative slacks of sub-criteria with their own tolerance are rescaled onto
the report tolerance, so ``passed`` is always ``margin >= -tolerance``.

Tolerances are module constants so that callers (and tests) can tighten or
tamper with them.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .conditioning import (
    C_I,
    E_SQ_Q,
    ConditionedMeasure,
    Extension,
    _ensemble_from_cert,
    c_I,
    conditioned_objective,
    e_sq_q_bound,
    extension_from_certificate,
    flag_extension,
    minimize_conditioned,
    symmetric_to_asymmetric,
)
from .entropy import (
    EntropyOracle,
    In_from,
    Sn_from,
    cmi_from,
    conditional_entropy,
    continuity_bound,
    continuity_bound_CI,
    holevo_quantity,
    marginal_ensemble,
    mi_from,
)
from .exact_measures import c_squashed, negativity_trace_norm, ppt_check, roof_ensemble
from .optimize import OptimizerOptions
from .states import (
    Ensemble,
    QuantumState,
    fidelity,
    make_named_state,
    measurement_pushforward,
    partial_trace,
    partial_transpose,
    random_isometry,
    random_pure_vector,
    random_state,
    tensor,
    trace_distance,
)

IDENTITY_TOL = 1e-8
CHAIN_RULE_TOL = 1e-9
ORDERING_TOL = 2e-8
FLOWER_TOL = 1e-9
PPT_TOL = 1e-9
LOCK_FRACTION = 0.25
ADDITIVITY_TOL = 0.05
MULTI_ADDITIVITY_TOL = 0.08
CONTINUITY_TOL = 1e-6
LAMBDA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
SPLIT_DIM_LIMIT = 1024

QUICK_OPTS = OptimizerOptions(restarts=4, iterations=500)
FULL_OPTS = OptimizerOptions()


@dataclass
class CheckReport:
    name: str
    passed: bool
    margin: float
    cases_run: int
    seed: int
    details: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "margin": _round(self.margin),
            "cases_run": self.cases_run,
            "seed": self.seed,
            "details": _round(self.details),
        }


def _round(x):
    """12 significant digits, so reports are stable text."""
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    return x


class _Tally:
    """Worst slack over cases; negative slacks are rescaled from their own tolerance onto ``tol``."""

    def __init__(self, name: str, tol: float, seed: int):
        self.name, self.tol, self.seed = name, tol, seed
        self.margin = np.inf
        self.worst = ""
        self.cases = 0
        self.extra: dict[str, Any] = {}

    def add(self, slack: float, desc: str, tol: float | None = None) -> None:
        slack = float(slack)
        own = self.tol if tol is None else tol
        if slack >= 0 or own == self.tol:
            shifted = slack
        elif own > 0:
            shifted = slack * self.tol / own
        else:
            shifted = slack - self.tol
        if shifted < self.margin:
            self.margin, self.worst = shifted, desc

    def case(self) -> None:
        self.cases += 1

    def report(self) -> CheckReport:
        margin = float(self.margin) if np.isfinite(self.margin) else 0.0
        details = {"worst": self.worst, "tolerance": self.tol, **self.extra}
        return CheckReport(self.name, bool(margin >= -self.tol), margin, self.cases, self.seed, details)


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def _rand_state(dims, labels, rng, rank=None) -> QuantumState:
    return random_state(dims, rank, int(rng.integers(2**63)), labels)


def _random_instrument(d: int, outcomes: int, rng) -> list[np.ndarray]:
    v = random_isometry(d * outcomes, d, int(rng.integers(2**63)))
    return [v[k * d:(k + 1) * d] for k in range(outcomes)]


def _ext(state, parties, ancillas, mode="symmetric") -> Extension:
    return Extension(state, tuple(parties), tuple(ancillas), mode)


# -- exact identities -------------------------------------------------------------


def _flag_mix(r: QuantumState, s: QuantumState, lam: float, flags) -> QuantumState:
    """lam r (x) |00><00| + (1 - lam) s (x) |11><11| on extra flag labels."""
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    f0, f1 = p0, p1
    for _ in flags[1:]:
        f0, f1 = np.kron(f0, p0), np.kron(f1, p1)
    m = lam * np.kron(r.matrix, f0) + (1 - lam) * np.kron(s.matrix, f1)
    return QuantumState(m, r.dims + (2,) * len(flags), r.labels + tuple(flags))


def check_convexity_flag(seed: int = 0, cases: int = 20) -> CheckReport:
    """Flagged mixtures of two extensions are extensions with averaged objective.

    Base I: the conditioned objective of the mixture is the lam-average.
    Base E_N: the log is not affine, so the exact statement is on the
    partial-transpose trace norm of both splits; the objective itself is
    checked at the endpoints of the grid.
    """
    t = _Tally("convexity_flag", IDENTITY_TOL, seed)
    labels = ("A", "B", "A'", "B'")
    parties, anc = (("A",), ("B",)), (("A'",), ("B'",))
    flagged_anc = (("A'", "A0"), ("B'", "B0"))
    logneg = ConditionedMeasure("log_negativity", "symmetric", 1.0)
    for c in range(cases):
        rng = _rng(seed, c)
        r = _rand_state((2, 2, 2, 2), labels, rng)
        s = _rand_state((2, 2, 2, 2), labels, rng)
        er, es = _ext(r, parties, anc), _ext(s, parties, anc)
        vr, vs = conditioned_objective(er, C_I), conditioned_objective(es, C_I)
        nr = [_pt_norm(r, ("A", "A'")), _pt_norm(r, ("A'",), ("A'", "B'"))]
        ns = [_pt_norm(s, ("A", "A'")), _pt_norm(s, ("A'",), ("A'", "B'"))]
        er_n, es_n = conditioned_objective(er, logneg), conditioned_objective(es, logneg)
        for lam in LAMBDA_GRID:
            tau = _flag_mix(r, s, lam, ("A0", "B0"))
            et = _ext(tau, parties, flagged_anc)
            diff = conditioned_objective(et, C_I) - (lam * vr + (1 - lam) * vs)
            t.add(-abs(diff), f"case {c} lam {lam}: base I deviation {diff:.3e}")
            tn = [_pt_norm(tau, ("A", "A'", "A0")), _pt_norm(tau, ("A'", "A0"), ("A'", "A0", "B'", "B0"))]
            for j in range(2):
                diff = tn[j] - (lam * nr[j] + (1 - lam) * ns[j])
                t.add(-abs(diff), f"case {c} lam {lam}: trace-norm deviation {diff:.3e}")
            if lam in (0.0, 1.0):
                diff = conditioned_objective(et, logneg) - (er_n if lam == 1.0 else es_n)
                t.add(-abs(diff), f"case {c} lam {lam}: E_N endpoint deviation {diff:.3e}")
            t.case()
    return t.report()


def _pt_norm(s: QuantumState, side, keep=None) -> float:
    if keep is not None:
        s = partial_trace(s, keep)
    return negativity_trace_norm(s.matrix, s.dims, list(s.index(side)))


def check_measurement_monotonicity(seed: int = 0, cases: int = 30) -> CheckReport:
    """Local measurement on A does not increase I(AA':BB') - I(A':B') on average.

    Per case: (a) the averaged inequality; (b) the Holevo combination
    chi(BB') + chi(A'B') - chi(A') - chi(B') is nonnegative; (c) the exact
    decomposition of the flagged post-measurement objective into the
    member average plus that combination.
    """
    t = _Tally("measurement_monotonicity", IDENTITY_TOL, seed)
    labels = ("A", "B", "A'", "B'")
    for c in range(cases):
        rng = _rng(seed, c)
        st = _rand_state((2, 2, 2, 2), labels, rng)
        outcomes = int(rng.integers(2, 4))
        kraus = [np.eye(2)] if c == 0 else _random_instrument(2, outcomes, rng)
        ens, flagged = measurement_pushforward(st, kraus, ("A",), flag_label="A0")
        before = _diff_I(EntropyOracle.of(st), ("A", "A'"), ("B", "B'"), ("A'",), ("B'",))
        after = sum(p * _diff_I(EntropyOracle.of(m), ("A", "A'"), ("B", "B'"), ("A'",), ("B'",)) for p, m in ens)
        t.add(before - after, f"case {c}: averaged inequality slack {before - after:.3e}")
        chi = {k: holevo_quantity(marginal_ensemble(ens, k)) for k in [("B", "B'"), ("A'", "B'"), ("A'",), ("B'",)]}
        combo = chi[("B", "B'")] + chi[("A'", "B'")] - chi[("A'",)] - chi[("B'",)]
        t.add(combo, f"case {c}: Holevo combination {combo:.3e}")
        flagged_val = _diff_I(EntropyOracle.of(flagged), ("A0", "A", "A'"), ("B", "B'"), ("A'",), ("B'",))
        diff = flagged_val - (after + combo)
        t.add(-abs(diff), f"case {c}: flagged decomposition deviation {diff:.3e}")
        t.case()
    return t.report()


def _diff_I(ent, big_a, big_b, anc_a, anc_b) -> float:
    return mi_from(ent, big_a, big_b) - mi_from(ent, anc_a, anc_b)


def chain_rule_terms(ent, a, b, a1, b1) -> tuple[float, float, float]:
    """I(A':B|B'), I(A:B'|A'), I(A:B|A'B') whose sum is I(AA':BB') - I(A':B')."""
    return cmi_from(ent, a1, b, b1), cmi_from(ent, a, b1, a1), cmi_from(ent, a, b, a1 + b1)


def check_chain_rule(seed: int = 0, cases: int = 30) -> CheckReport:
    """Four-term expansion of I(AA':BB') - I(A':B') and its CMI lower bound."""
    t = _Tally("chain_rule", CHAIN_RULE_TOL, seed)
    labels = ("A", "B", "A'", "B'")
    for c in range(cases):
        rng = _rng(seed, c)
        dims = tuple(int(x) for x in rng.integers(2, 4, size=4))
        ent = EntropyOracle.of(_rand_state(dims, labels, rng))
        lhs = _diff_I(ent, ("A", "A'"), ("B", "B'"), ("A'",), ("B'",))
        terms = chain_rule_terms(ent, ("A",), ("B",), ("A'",), ("B'",))
        t.add(-abs(lhs - sum(terms)), f"case {c} dims {dims}: expansion deviation {lhs - sum(terms):.3e}")
        t.add(min(terms), f"case {c}: smallest CMI term {min(terms):.3e}")
        t.case()
    return t.report()


def check_superadditivity_decomposition(seed: int = 0, cases: int = 20) -> CheckReport:
    """Telescoping of extensions of product-split states.

    On random states of A1 A2 A' B1 B2 B' (and C E' D F'), the two-step
    telescoping is an identity and each step dominates its chain-rule
    conditional mutual information. Flag-structured extensions match the
    ensemble formula.
    """
    t = _Tally("superadditivity_decomposition", IDENTITY_TOL, seed)
    labels = ("A1", "A2", "A'", "B1", "B2", "B'")
    for c in range(cases):
        rng = _rng(seed, c)
        ent = EntropyOracle.of(_rand_state((2,) * 6, labels, rng))
        full = mi_from(ent, ("A1", "A2", "A'"), ("B1", "B2", "B'"))
        mid = mi_from(ent, ("A2", "A'"), ("B2", "B'"))
        anc = mi_from(ent, ("A'",), ("B'",))
        steps = (full - mid, mid - anc)
        diff = (full - anc) - sum(steps)
        t.add(-abs(diff), f"case {c}: telescoping deviation {diff:.3e}")
        cmi1 = cmi_from(ent, ("A1",), ("B1",), ("A2", "A'", "B2", "B'"))
        cmi2 = cmi_from(ent, ("A2",), ("B2",), ("A'", "B'"))
        t.add(steps[0] - cmi1, f"case {c}: first step minus CMI {steps[0] - cmi1:.3e}")
        t.add(steps[1] - cmi2, f"case {c}: second step minus CMI {steps[1] - cmi2:.3e}")
        # flag-structured extension: objective equals the member average
        ens = Ensemble((0.3, 0.7), tuple(_rand_state((2, 2), ("A", "B"), rng) for _ in range(2)))
        val = conditioned_objective(flag_extension(ens, (("A",), ("B",))), C_I)
        avg = sum(p * 0.5 * mi_from(EntropyOracle.of(m), ("A",), ("B",)) for p, m in ens)
        t.add(-abs(val - avg), f"case {c}: flag formula deviation {val - avg:.3e}")
        t.case()
    return t.report()


# -- additivity -------------------------------------------------------------------


def _relabel(s: QuantumState, names) -> QuantumState:
    return s.relabel(dict(zip(s.labels, names)))


def _cert_ensemble(s: QuantumState, cert) -> Ensemble | None:
    if cert["kind"] == "trivial":
        return Ensemble((1.0,), (s,))
    if cert["kind"] == "flag":
        return _ensemble_from_cert(s, cert)
    return None


def _product_seed(s1, g1, r1, s2, g2, r2, cm):
    """Combine two certificates into a seed for the product run."""
    e1, e2 = _cert_ensemble(s1, r1.certificate), _cert_ensemble(s2, r2.certificate)
    if e1 is not None and e2 is not None:
        members, probs = [], []
        for p, a in e1:
            for q, b in e2:
                probs.append(p * q)
                members.append(tensor(a, b))
        return {"seed_ensembles": [Ensemble(tuple(probs), tuple(members))]}
    x1 = extension_from_certificate(s1, g1, r1.certificate) if e1 is None else flag_extension(e1, g1)
    x2 = extension_from_certificate(s2, g2, r2.certificate) if e2 is None else flag_extension(e2, g2)
    if x1.state.dim * x2.state.dim > SPLIT_DIM_LIMIT:
        return {}
    st = tensor(x1.state, x2.state)
    parties = tuple(a + b for a, b in zip(x1.parties, x2.parties))
    ancillas = tuple(a + b for a, b in zip(x1.ancillas, x2.ancillas))
    return {"seed_extensions": [Extension(st, parties, ancillas, x1.mode)]}


def _base(cm, ent, groups) -> float:
    groups = [tuple(g) for g in groups]
    if cm.base == "I" or (cm.base == "I_n" and len(groups) == 2):
        return mi_from(ent, groups[0], groups[1])
    return In_from(ent, groups) if cm.base == "I_n" else Sn_from(ent, groups)


def split_values(prod: QuantumState, parties, g1, g2, cm, cert) -> tuple[float, float] | None:
    """Read a product-run certificate as certificates for each factor.

    Factor 1 conditions on (factor-2 systems + ancillas), factor 2 on the
    ancillas alone; the two values sum to the product value.
    """
    ens = _cert_ensemble(prod, cert)
    if ens is not None:
        members = [(p, EntropyOracle.of(m), [()] * len(g1)) for p, m in ens]
    else:
        ext = extension_from_certificate(prod, parties, cert)
        if ext.state.dim > SPLIT_DIM_LIMIT or ext.mode == "asymmetric":
            return None
        members = [(1.0, EntropyOracle.of(ext.state), list(ext.ancillas))]
    v1 = v2 = 0.0
    for p, ent, anc in members:
        mid = [b + a for b, a in zip(g2, anc)]
        top = [x + m for x, m in zip(g1, mid)]
        v1 += p * cm.factor * (_base(cm, ent, top) - _base(cm, ent, mid))
        v2 += p * cm.factor * (_base(cm, ent, mid) - _base(cm, ent, anc))
    return v1, v2


def additivity_pair(s1: QuantumState, s2: QuantumState, g1, g2, cm: ConditionedMeasure, opts) -> dict:
    """Optimize both factors and their product with certificate exchange.

    The product run is seeded with the combined factor certificates, and
    the product certificate is split back into factor certificates. Returns
    the resulting values and the gap ``product - (v1 + v2)``.
    """
    g1 = tuple(tuple(g) for g in g1)
    g2 = tuple(tuple(g) for g in g2)
    r1 = minimize_conditioned(s1, cm, g1, opts)
    r2 = minimize_conditioned(s2, cm, g2, opts)
    prod = tensor(s1, s2)
    parties = tuple(a + b for a, b in zip(g1, g2))
    rank = prod.rank()
    seed = _product_seed(s1, g1, r1, s2, g2, r2, cm)
    rp = minimize_conditioned(prod, cm, parties, opts.scaled(restarts=max(1, opts.restarts // 4)),
                              roof_seed=rank <= 4, **seed)
    v1, v2 = r1.value, r2.value
    split = split_values(prod, parties, g1, g2, cm, rp.certificate)
    split_dev = 0.0
    if split is not None:
        split_dev = split[0] + split[1] - rp.value
        v1, v2 = min(v1, split[0]), min(v2, split[1])
    return {
        "v1": v1,
        "v2": v2,
        "product": rp.value,
        "gap": rp.value - v1 - v2,
        "split_deviation": split_dev,
        "converged": r1.converged and r2.converged and rp.converged,
    }


def check_additivity_CI(seed: int = 0, identity_cases: int = 50, pairs: int = 5,
                        opts: OptimizerOptions | None = None) -> CheckReport:
    """C_I on products: exact identity on product extensions, optimizer gap on pairs."""
    opts = opts or FULL_OPTS
    t = _Tally("additivity_CI", IDENTITY_TOL, seed)
    la, lb = ("A", "B", "A'", "B'"), ("C", "D", "C'", "D'")
    for c in range(identity_cases):
        rng = _rng(seed, c)
        r, s = _rand_state((2,) * 4, la, rng), _rand_state((2,) * 4, lb, rng)
        ent = EntropyOracle.of(tensor(r, s))
        lhs = _diff_I(ent, ("A", "A'", "C", "C'"), ("B", "B'", "D", "D'"), ("A'", "C'"), ("D'", "B'"))
        rhs = (_diff_I(EntropyOracle.of(r), ("A", "A'"), ("B", "B'"), ("A'",), ("B'",))
               + _diff_I(EntropyOracle.of(s), ("C", "C'"), ("D", "D'"), ("C'",), ("D'",)))
        t.add(-abs(lhs - rhs), f"product extension {c}: deviation {lhs - rhs:.3e}")
        t.case()
    gaps, nonconv = [], 0
    for c in range(pairs):
        rng = _rng(seed, 1000 + c)
        r = _rand_state((2, 2), ("A", "B"), rng)
        s = _rand_state((2, 2), ("C", "D"), rng)
        out = additivity_pair(r, s, (("A",), ("B",)), (("C",), ("D",)), C_I, opts)
        t.add(ADDITIVITY_TOL - abs(out["gap"]), f"pair {c}: gap {out['gap']:.3e}", tol=0.0)
        t.add(-abs(out["split_deviation"]), f"pair {c}: split deviation {out['split_deviation']:.3e}")
        gaps.append(out["gap"])
        nonconv += not out["converged"]
        t.case()
    t.extra.update({"gaps": gaps, "nonconverged": nonconv, "gap_tolerance": ADDITIVITY_TOL})
    return t.report()


def _ghz_diagonal(p: float, labels) -> QuantumState:
    v0 = np.zeros(8)
    v1 = np.zeros(8)
    v0[0] = v0[7] = 1 / np.sqrt(2)
    v1[0], v1[7] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    m = p * np.outer(v0, v0) + (1 - p) * np.outer(v1, v1)
    return QuantumState(m, (2, 2, 2), tuple(labels))


def check_multipartite_additivity(seed: int = 0, identity_cases: int = 20, pairs: int = 2,
                                  opts: OptimizerOptions | None = None) -> CheckReport:
    """Multipartite C_I / C_S on products: telescoping identity and optimizer gap.

    Identities use random pure extensions of three parties with one qubit
    ancilla each (the environment carried as an extra system). Pairs are
    ghz(3) with a rank-2 GHZ-diagonal state, plus ghz(3) with a product state.
    """
    opts = opts or FULL_OPTS
    t = _Tally("multipartite_additivity", IDENTITY_TOL, seed)
    la = ("A1", "A2", "A3", "A1'", "A2'", "A3'", "FA")
    lb = ("B1", "B2", "B3", "B1'", "B2'", "B3'", "FB")
    for c in range(identity_cases):
        rng = _rng(seed, c)
        va, vb = random_pure_vector(2**7, rng), random_pure_vector(2**7, rng)
        ent = EntropyOracle((2,) * 14, la + lb, vector=np.kron(va, vb))
        ea = EntropyOracle((2,) * 7, la, vector=va)
        eb = EntropyOracle((2,) * 7, lb, vector=vb)
        for fn in (In_from, Sn_from):
            big = [(f"A{i}", f"A{i}'", f"B{i}", f"B{i}'") for i in (1, 2, 3)]
            anc = [(f"A{i}'", f"B{i}'") for i in (1, 2, 3)]
            lhs = fn(ent, big) - fn(ent, anc)
            rhs = (fn(ea, [(f"A{i}", f"A{i}'") for i in (1, 2, 3)]) - fn(ea, [(f"A{i}'",) for i in (1, 2, 3)])
                   + fn(eb, [(f"B{i}", f"B{i}'") for i in (1, 2, 3)]) - fn(eb, [(f"B{i}'",) for i in (1, 2, 3)]))
            t.add(-abs(lhs - rhs), f"case {c} {fn.__name__}: deviation {lhs - rhs:.3e}")
        t.case()
    gaps, nonconv = [], 0
    g1 = (("A",), ("B",), ("C",))
    g2 = (("D",), ("E",), ("F",))
    ghz = make_named_state("ghz", {"n": 3})
    for c in range(pairs):
        rng = _rng(seed, 1000 + c)
        if c % 2 == 0:
            other = _ghz_diagonal(float(rng.uniform(0.55, 0.95)), ("D", "E", "F"))
        else:
            other = _relabel(make_named_state("product", {"n": 3, "seed": int(rng.integers(2**31))}), ("D", "E", "F"))
        for which in ("I_n", "S_n"):
            cm = ConditionedMeasure(which, "symmetric", 1.0)
            out = additivity_pair(ghz, other, g1, g2, cm, opts)
            t.add(MULTI_ADDITIVITY_TOL - abs(out["gap"]), f"pair {c} {which}: gap {out['gap']:.3e}", tol=0.0)
            t.add(-abs(out["split_deviation"]), f"pair {c} {which}: split deviation {out['split_deviation']:.3e}")
            gaps.append(out["gap"])
            nonconv += not out["converged"]
        t.case()
    t.extra.update({"gaps": gaps, "nonconverged": nonconv, "gap_tolerance": MULTI_ADDITIVITY_TOL})
    return t.report()


# -- ordering and locking ------------------------------------------------------------


def ordering_chain(s: QuantumState, opts: OptimizerOptions) -> dict:
    """Certified E_sq^q <= C_I <= E_sq^c on one two-party state.

    The C_I search is seeded with the best convex-roof decomposition, and the
    E_sq^q search with the best C_I extension, so each link is certified by
    re-evaluating a converted certificate.
    """
    parties = ((s.labels[0],), (s.labels[1],))
    roof = c_squashed(s, parties[0], opts)
    ens = roof_ensemble(s, roof.certificate)
    ci = c_I(s, parties, opts, roof=roof)
    flag_val = conditioned_objective(flag_extension(ens, parties), C_I)
    ci_ext = extension_from_certificate(s, parties, ci.certificate)
    esq_from_ci = conditioned_objective(symmetric_to_asymmetric(ci_ext), E_SQ_Q)
    esq = e_sq_q_bound(s, parties, opts, seed_extensions=[ci_ext], roof=roof)
    return {
        "e_sq_q": esq.value,
        "c_I": ci.value,
        "e_sq_c": roof.value,
        "esq_from_ci": esq_from_ci,
        "ci_from_roof": flag_val,
        "converged": roof.converged and ci.converged and esq.converged,
    }


def check_ordering(seed: int = 0, cases: int = 10, werner=(0.5, 0.8, 1.0),
                   opts: OptimizerOptions | None = None) -> CheckReport:
    opts = opts or FULL_OPTS
    t = _Tally("ordering", ORDERING_TOL, seed)
    states = [(f"random {c}", _rand_state((2, 2), ("A", "B"), _rng(seed, c))) for c in range(cases)]
    states += [(f"werner {p}", make_named_state("werner", {"p": p})) for p in werner]
    nonconv = 0
    for name, s in states:
        out = ordering_chain(s, opts)
        t.add(out["c_I"] - out["esq_from_ci"], f"{name}: converted C_I certificate exceeds C_I by "
              f"{out['esq_from_ci'] - out['c_I']:.3e}", tol=IDENTITY_TOL)
        t.add(-abs(out["ci_from_roof"] - out["e_sq_c"]), f"{name}: roof flag deviation "
              f"{out['ci_from_roof'] - out['e_sq_c']:.3e}", tol=IDENTITY_TOL)
        t.add(out["c_I"] - out["e_sq_q"], f"{name}: E_sq^q - C_I = {out['e_sq_q'] - out['c_I']:.3e}")
        t.add(out["e_sq_c"] - out["c_I"], f"{name}: C_I - E_sq^c = {out['c_I'] - out['e_sq_c']:.3e}")
        nonconv += not out["converged"]
        t.case()
    t.extra["nonconverged"] = nonconv
    return t.report()


def flower_trivial_value(d: int) -> float:
    """(1/2) I(A1A2:B1B2|C) on the flower state, C its own purifying system."""
    st = make_named_state("flower", {"d": d})
    ent = EntropyOracle(st.dims, st.labels, vector=st.vector)
    return 0.5 * cmi_from(ent, ("A1", "A2"), ("B1", "B2"), ("C",))


def check_flower(d: int = 2, opts: OptimizerOptions | None = None, lock: bool = True) -> CheckReport:
    """Flower state value, PPT after losing A2, and the drop of C_I."""
    if d not in (2, 3, 4):
        raise ValueError(f"flower check is defined for d in {{2, 3, 4}}, got {d}")
    opts = opts or FULL_OPTS
    t = _Tally(f"flower_d{d}", FLOWER_TOL, d)
    target = 1 + 0.5 * np.log2(d)
    val = flower_trivial_value(d)
    t.add(-abs(val - target), f"trivial value {val:.12f} vs {target:.12f}")
    t.case()
    rho = partial_trace(make_named_state("flower", {"d": d}).projector(), ("A1", "B1", "B2"))
    ppt = ppt_check(rho, ("A1",), PPT_TOL)
    low = float(np.linalg.eigvalsh(partial_transpose(rho, ("A1",)))[0])
    t.add(low, f"smallest partial-transpose eigenvalue after losing A2 {low:.3e}", tol=PPT_TOL)
    t.extra.update({"value": val, "ppt_after_loss": ppt})
    if lock:
        res = c_I(rho, (("A1",), ("B1", "B2")), opts)
        bound = LOCK_FRACTION * target
        t.add(bound - res.value, f"C_I after loss {res.value:.6f} vs {bound:.6f}", tol=0.0)
        t.extra.update({"c_I_after_loss": res.value, "lock_bound": bound, "converged": res.converged})
        t.case()
    return t.report()


# -- continuity ------------------------------------------------------------------------


def _nearby(rho: QuantumState, eps: float, rng) -> QuantumState:
    """A state at trace-norm distance at most eps from rho."""
    other = _rand_state(rho.dims, rho.labels, rng)
    dist = trace_distance(rho, other)
    t = min(1.0, eps / dist) if dist > 0 else 0.0
    return QuantumState((1 - t) * rho.matrix + t * other.matrix, rho.dims, rho.labels)


def aligned_purifications(rho: QuantumState, sigma: QuantumState) -> tuple[np.ndarray, np.ndarray]:
    """Purification matrices (system x C) whose overlap is the root fidelity."""
    from .states import _psd_sqrt

    x = _psd_sqrt(rho.matrix)
    y = _psd_sqrt(sigma.matrix)
    u, _, vh = np.linalg.svd(x @ y)
    return x, y @ (vh.conj().T @ u.conj().T)


def check_continuity(seed: int = 0, cases: int = 50, channel_cases: int = 20, max_eps: float = 0.1) -> CheckReport:
    """Conditional-entropy continuity and the shared-channel extension argument.

    (a) |S(A|B)_rho - S(A|B)_sigma| <= 4 eps log2 dA + 2 H(eps).
    (b) A common isometry from the purifying system into A'B'F applied to
    fidelity-aligned purifications yields extensions within 2 sqrt(eps), and
    C_I objectives within 16 sqrt(eps) log2(dA dB) + 6 H(2 sqrt(eps)).
    """
    t = _Tally("continuity", CONTINUITY_TOL, seed)
    for c in range(cases):
        rng = _rng(seed, c)
        da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        rho = _rand_state((da, db), ("A", "B"), rng)
        sigma = _nearby(rho, float(rng.uniform(0, max_eps)), rng)
        eps = min(1.0, trace_distance(rho, sigma))
        gap = abs(conditional_entropy(rho, "A", "B") - conditional_entropy(sigma, "A", "B"))
        t.add(continuity_bound(eps, da) - gap, f"pair {c}: conditional-entropy slack")
        t.case()
    for c in range(channel_cases):
        rng = _rng(seed, 5000 + c)
        rho = _rand_state((2, 2), ("A", "B"), rng)
        eps_target = 0.0 if c == 0 else float(rng.uniform(0, max_eps))
        sigma = rho if c == 0 else _nearby(rho, eps_target, rng)
        eps = min(1.0, trace_distance(rho, sigma))
        x, y = aligned_purifications(rho, sigma)
        v = random_isometry(8, 4, int(rng.integers(2**63)))
        exts = []
        for m in (x, y):
            vec = (m @ v.T).reshape(-1)  # A B A' B' F
            mat = vec.reshape(-1, 2)
            exts.append(QuantumState(mat @ mat.conj().T, (2, 2, 2, 2), ("A", "B", "A'", "B'")))
        dist = trace_distance(*exts)
        t.add(2 * np.sqrt(eps) - dist, f"channel pair {c}: extension distance {dist:.3e} vs eps {eps:.3e}")
        parties, anc = (("A",), ("B",)), (("A'",), ("B'",))
        diff = abs(conditioned_objective(_ext(exts[0], parties, anc), C_I)
                   - conditioned_objective(_ext(exts[1], parties, anc), C_I))
        bound = continuity_bound_CI(eps, 4)
        t.add(bound - diff, f"channel pair {c}: objective difference {diff:.3e} vs bound {bound:.3e}")
        fid = fidelity(rho, sigma)
        t.add(np.sqrt(fid) - (1.0 - 0.5 * eps), f"channel pair {c}: fidelity-distance relation", tol=IDENTITY_TOL)
        t.case()
    return t.report()


# -- driver -------------------------------------------------------------------------------


def _profile(profile: str) -> dict[str, Callable[[int], CheckReport]]:
    if profile == "quick":
        o = QUICK_OPTS
        return {
            "additivity_CI": lambda s: check_additivity_CI(s, identity_cases=10, pairs=1, opts=o),
            "chain_rule": lambda s: check_chain_rule(s, cases=10),
            "continuity": lambda s: check_continuity(s, cases=10, channel_cases=5),
            "convexity_flag": lambda s: check_convexity_flag(s, cases=5),
            "flower_d2": lambda s: check_flower(2, o),
            "flower_d3": lambda s: check_flower(3, o, lock=False),
            "flower_d4": lambda s: check_flower(4, o, lock=False),
            "measurement_monotonicity": lambda s: check_measurement_monotonicity(s, cases=10),
            "multipartite_additivity": lambda s: check_multipartite_additivity(s, identity_cases=5, pairs=1, opts=o),
            "ordering": lambda s: check_ordering(s, cases=2, werner=(1.0,), opts=o),
            "superadditivity_decomposition": lambda s: check_superadditivity_decomposition(s, cases=5),
        }
    if profile == "full":
        o = FULL_OPTS
        return {
            "additivity_CI": lambda s: check_additivity_CI(s, opts=o),
            "chain_rule": lambda s: check_chain_rule(s),
            "continuity": lambda s: check_continuity(s),
            "convexity_flag": lambda s: check_convexity_flag(s),
            "flower_d2": lambda s: check_flower(2, o),
            "flower_d3": lambda s: check_flower(3, o),
            "flower_d4": lambda s: check_flower(4, o),
            "measurement_monotonicity": lambda s: check_measurement_monotonicity(s),
            "multipartite_additivity": lambda s: check_multipartite_additivity(s, opts=o),
            "ordering": lambda s: check_ordering(s, opts=o),
            "superadditivity_decomposition": lambda s: check_superadditivity_decomposition(s),
        }
    raise ValueError(f"unknown profile {profile!r}; expected quick or full")


def check_seed(master_seed: int, name: str) -> int:
    """Per-check seed derived from the master seed and the check name."""
    ss = np.random.SeedSequence([int(master_seed), zlib.crc32(name.encode())])
    return int(ss.generate_state(1)[0])


def run_all(master_seed: int = 42, profile: str = "quick", only=None) -> list[CheckReport]:
    """Run every check of a profile; reports are sorted by name."""
    checks = _profile(profile)
    names = sorted(checks if only is None else [n for n in checks if n in set(only)])
    reports = []
    for name in names:
        seed = check_seed(master_seed, name)
        rep = checks[name](seed)
        rep.name, rep.seed = name, seed
        reports.append(rep)
    return reports


__all__ = [
    "CheckReport",
    "check_convexity_flag",
    "check_measurement_monotonicity",
    "check_chain_rule",
    "check_superadditivity_decomposition",
    "check_additivity_CI",
    "check_multipartite_additivity",
    "check_ordering",
    "check_flower",
    "check_continuity",
    "run_all",
]
