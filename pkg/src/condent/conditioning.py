"""Extension-based conditioned measures.

A conditioned measure takes a functional ``f`` on a multipartite split and
minimizes ``f(big split) - f(ancilla split)`` over extensions of the input.
Extensions are generated from a purification by an isometry from the
purifying system into the ancillas and a discarded environment ``F``.

Conventions: bipartite ``C_I`` and ``E_sq^q`` carry a factor 1/2; the
multipartite ``C_I`` / ``C_S`` (functionals ``I_n`` / ``S_n``) carry none.
Ancilla groups are never empty; the trivial extension uses dimension-1
ancillas.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .entropy import EntropyOracle, In_from, Sn_from, cmi_from, mi_from
from .exact_measures import (
    HalfMutualInformation,
    _ensemble_cert,
    convex_roof,
    entanglement_of_formation,
    negativity_trace_norm,
    roof_ensemble,
)
from .optimize import AGREE_TOL, OptimizationResult, bound_candidate, OptimizerOptions, merge_results, multistart_minimize
from .states import (
    Ensemble,
    LabelError,
    Partition,
    QuantumState,
    as_labels,
    params_from_isometry,
    partial_trace,
    polar_isometry,
    ptrace_array,
)

BASES = ("I", "I_n", "S_n", "log_negativity", "ent_of_formation")
MODES = ("symmetric", "asymmetric", "multipartite")
ENV_LABEL = "_F"
MAX_PASS_PARAMS = 100
EXTENSION_TOL = 1e-9
# bases whose conditioned versions are nonnegative (monotone under local partial trace)
NONNEGATIVE_BASES = ("I", "I_n", "log_negativity", "ent_of_formation")


def _debug() -> bool:
    return os.environ.get("CONDENT_DEBUG", "") not in ("", "0")


@dataclass(frozen=True)
class ConditionedMeasure:
    base: str = "I"
    conditioning: str = "symmetric"
    factor: float = 0.5
    inner: OptimizerOptions = field(default_factory=lambda: OptimizerOptions(restarts=4, iterations=500))

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"unknown base functional {self.base!r}")
        if self.conditioning not in ("symmetric", "asymmetric"):
            raise ValueError(f"unknown conditioning {self.conditioning!r}")
        if self.conditioning == "asymmetric" and self.base != "I":
            raise ValueError("asymmetric conditioning is implemented for base I only")
        if not self.factor > 0:
            raise ValueError("factor must be positive")

    @property
    def entropic(self) -> bool:
        return self.base in ("I", "I_n", "S_n")


C_I = ConditionedMeasure("I", "symmetric", 0.5)
E_SQ_Q = ConditionedMeasure("I", "asymmetric", 0.5)
C_I_MULTI = ConditionedMeasure("I_n", "symmetric", 1.0)
C_S_MULTI = ConditionedMeasure("S_n", "symmetric", 1.0)


@dataclass(frozen=True)
class ExtensionAnsatz:
    """Stinespring isometry from the purifying system into ancillas (x) F."""

    mode: str
    out_dims: tuple[int, ...]
    env_extra: int = 1
    params: Any = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown ansatz mode {self.mode!r}")
        if any(int(d) < 1 for d in self.out_dims) or int(self.env_extra) < 1:
            raise ValueError("ansatz dimensions must be >= 1")
        object.__setattr__(self, "out_dims", tuple(int(d) for d in self.out_dims))
        object.__setattr__(self, "env_extra", int(self.env_extra))

    @property
    def rows(self) -> int:
        return int(np.prod(self.out_dims)) * self.env_extra

    def n_params(self, rank: int) -> int:
        return 2 * self.rows * rank

    def with_params(self, params) -> "ExtensionAnsatz":
        return ExtensionAnsatz(self.mode, self.out_dims, self.env_extra, np.asarray(params, dtype=float))

    def isometry(self, rank: int) -> np.ndarray:
        if self.params is None:
            raise ValueError("ansatz has no parameters")
        v = polar_isometry(self.params, self.rows, rank)
        err = np.max(np.abs(v.conj().T @ v - np.eye(rank)))
        if err > EXTENSION_TOL:
            raise RuntimeError(f"ansatz isometry defect {err:.3g}")
        return v


@dataclass(frozen=True)
class Extension:
    """An extension state plus the bookkeeping needed to condition on it.

    ``parties`` are the original groups (A, B, ...); ``ancillas`` holds one
    group per party in symmetric/multipartite mode, or the single group E in
    asymmetric mode.
    """

    state: QuantumState
    parties: tuple[tuple[str, ...], ...]
    ancillas: tuple[tuple[str, ...], ...]
    mode: str

    def __post_init__(self):
        parties = tuple(as_labels(g) for g in self.parties)
        ancillas = tuple(as_labels(g) for g in self.ancillas)
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "ancillas", ancillas)
        Partition(parties + ancillas)
        for x in [x for g in parties + ancillas for x in g]:
            if x not in self.state.labels:
                raise LabelError(f"extension is missing label {x!r}")
        if self.mode == "asymmetric" and len(ancillas) != 1:
            raise ValueError("asymmetric extensions have a single ancilla group")
        if self.mode != "asymmetric" and len(ancillas) != len(parties):
            raise ValueError("need one ancilla group per party")

    @property
    def party_labels(self) -> tuple[str, ...]:
        return tuple(x for g in self.parties for x in g)

    def marginal(self) -> QuantumState:
        return partial_trace(self.state, self.party_labels)


def ancilla_names(parties, mode: str, taken=()) -> tuple[str, ...]:
    taken = set(taken) | {x for g in parties for x in g} | {ENV_LABEL}
    base = ["E"] if mode == "asymmetric" else [g[0] + "'" for g in parties]
    out = []
    for name in base:
        while name in taken:
            name += "'"
        taken.add(name)
        out.append(name)
    return tuple(out)


def _mode_for(parties, cm: ConditionedMeasure) -> str:
    if cm.conditioning == "asymmetric":
        return "asymmetric"
    return "symmetric" if len(parties) == 2 else "multipartite"


# -- objective ------------------------------------------------------------------


def _base_value(cm: ConditionedMeasure, ent, groups, getter, info: dict) -> float:
    groups = [as_labels(g) for g in groups]
    if cm.base in ("I", "I_n", "S_n"):
        if cm.base == "I" and len(groups) != 2:
            raise ValueError("base I needs a bipartite split")
        if len(groups) == 2 and cm.base != "S_n":
            return mi_from(ent, groups[0], groups[1])
        return In_from(ent, groups) if cm.base == "I_n" else Sn_from(ent, groups)
    if len(groups) != 2:
        raise ValueError(f"base {cm.base} needs a bipartite split")
    rho = getter(groups[0] + groups[1])
    if min(np.prod(rho.dims_of(groups[0])), np.prod(rho.dims_of(groups[1]))) == 1:
        return 0.0
    if cm.base == "log_negativity":
        return float(np.log2(negativity_trace_norm(rho.matrix, rho.dims, list(rho.index(groups[0])))))
    res = entanglement_of_formation(rho, groups[0], cm.inner)
    info["inner_converged"] = info.get("inner_converged", True) and res.converged
    return res.value


def _objective(cm, ent, getter, parties, ancillas, mode, info) -> float:
    if mode == "asymmetric":
        if cm.conditioning != "asymmetric":
            raise ValueError("symmetric measure evaluated on an asymmetric extension")
        a, b = parties
        # I(A:BE) - I(A:E) = I(A:B|E)
        return cm.factor * cmi_from(ent, a, b, ancillas[0])
    if cm.conditioning != "symmetric":
        raise ValueError("asymmetric measure evaluated on a symmetric extension")
    big = [p + a for p, a in zip(parties, ancillas)]
    return cm.factor * (_base_value(cm, ent, big, getter, info) - _base_value(cm, ent, ancillas, getter, info))


def conditioned_objective(ext: Extension, cm: ConditionedMeasure, info: dict | None = None) -> float:
    """``factor * [f(party_i ancilla_i ...) - f(ancilla_i ...)]`` on one extension.

    In asymmetric mode this is ``factor * [I(A:BE) - I(A:E)]``.
    """
    info = {} if info is None else info
    st = ext.state
    return _objective(cm, EntropyOracle.of(st), lambda labs: partial_trace(st, labs),
                      ext.parties, ext.ancillas, ext.mode, info)


# -- building extensions ----------------------------------------------------------


def _purification_columns(s: QuantumState) -> np.ndarray:
    w, v = np.linalg.eigh(s.matrix)
    mask = w > 1e-12
    w = w[mask] / w[mask].sum()
    return v[:, mask] * np.sqrt(w)


class _Problem:
    """Objective over isometry parameters for one state, measure and ansatz shape."""

    def __init__(self, s, cm, parties, ansatz: ExtensionAnsatz, anc_labels):
        self.s = s
        self.cm = cm
        self.parties = parties
        self.ansatz = ansatz
        self.anc_labels = anc_labels
        self.psi = _purification_columns(s)
        self.rank = self.psi.shape[1]
        self.dims = list(s.dims) + list(ansatz.out_dims) + [ansatz.env_extra]
        self.labels = list(s.labels) + list(anc_labels) + [ENV_LABEL]
        self.ancillas = tuple((x,) for x in anc_labels)
        self.inner_ok = True
        self.terms = None
        if cm is not None and (cm.entropic or ansatz.mode == "asymmetric"):
            lin = _objective(cm, _Symbolic(), None, parties, self.ancillas, ansatz.mode, {})
            self.terms = _group_plans(self.dims, self.labels, lin)

    @property
    def n_params(self) -> int:
        return self.ansatz.n_params(self.rank)

    def vector(self, params) -> np.ndarray:
        v = polar_isometry(params, self.ansatz.rows, self.rank)
        return (self.psi @ v.T).reshape(-1)

    def state(self, params) -> QuantumState:
        vec = self.vector(params)
        m = vec.reshape(-1, self.ansatz.env_extra)
        rho = m @ m.conj().T
        return QuantumState(rho, self.dims[:-1], self.labels[:-1])

    def __call__(self, params) -> float:
        if _debug():
            check_extension(self.state(params), self.s)
        if self.terms is not None:
            return _combined_entropy(self.vector(params), self.terms)
        st = self.state(params)
        info: dict = {}
        val = _objective(self.cm, EntropyOracle.of(st), lambda labs: partial_trace(st, labs),
                         self.parties, self.ancillas, self.ansatz.mode, info)
        self.inner_ok = self.inner_ok and info.get("inner_converged", True)
        return val


class _Lin(dict):
    """Linear combination of marginal entropies, keyed by label set."""

    def __add__(self, other):
        out = _Lin(self)
        for k, v in (other.items() if isinstance(other, dict) else ()):
            out[k] = out.get(k, 0.0) + v
        return out

    __radd__ = __add__

    def __neg__(self):
        return _Lin({k: -v for k, v in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        return _Lin({k: c * v for k, v in self.items()})

    __rmul__ = __mul__


class _Symbolic:
    def __call__(self, labels):
        return _Lin({frozenset(as_labels(labels)): 1.0})


def _entropy_plan(dims, labels, key):
    """Reshape plan for S(key) of a pure vector, diagonalizing the smaller side."""
    n = len(dims)
    idx = sorted(labels.index(x) for x in key)
    rest = [i for i in range(n) if i not in idx]
    dk = int(np.prod([dims[i] for i in idx]))
    dr = int(np.prod([dims[i] for i in rest]))
    if dk > dr:
        idx, rest, dk = rest, idx, dr
    return tuple(dims), tuple(idx + rest), dk


def _group_plans(dims, labels, lin: dict):
    """Group entropy terms by reduced dimension so each size needs one batched eigvalsh."""
    groups: dict[int, list] = {}
    for key, c in lin.items():
        if c == 0:
            continue
        shape, perm, dk = _entropy_plan(dims, labels, key)
        if dk > 1:
            groups.setdefault(dk, []).append((c, shape, perm))
    return [(dk, np.array([t[0] for t in ts]), [t[1:] for t in ts]) for dk, ts in sorted(groups.items())]


def _combined_entropy(vec, plans) -> float:
    total = 0.0
    for dk, coef, layouts in plans:
        ms = np.stack([vec.reshape(shape).transpose(perm).reshape(dk, -1) for shape, perm in layouts])
        lam = np.linalg.eigvalsh(ms @ ms.conj().transpose(0, 2, 1))
        with np.errstate(divide="ignore", invalid="ignore"):
            h = np.where(lam > 1e-12, -lam * np.log2(lam), 0.0).sum(axis=1)
        total += float(coef @ h)
    return total


def check_extension(ext_state: QuantumState, s: QuantumState, tol: float = EXTENSION_TOL) -> float:
    """Max deviation of the extension's marginal from ``s``; raises beyond ``tol``."""
    marg = partial_trace(ext_state, s.labels)
    order = [marg.labels.index(x) for x in s.labels]
    n = len(order)
    m = marg.matrix.reshape(marg.dims + marg.dims).transpose(order + [n + i for i in order]).reshape(s.matrix.shape)
    err = float(np.max(np.abs(m - s.matrix)))
    if err > tol:
        raise RuntimeError(f"extension marginal deviates from the input by {err:.3g}")
    return err


def build_extension(s: QuantumState, ansatz: ExtensionAnsatz, parties=None, anc_labels=None) -> QuantumState:
    """Global state on ``s.labels`` plus ancilla labels, environment traced out."""
    parties = parties or _default_parties(s, ansatz)
    anc_labels = anc_labels or ancilla_names(parties, ansatz.mode, s.labels)
    if len(anc_labels) != len(ansatz.out_dims):
        raise ValueError("one output dimension per ancilla label required")
    prob = _Problem(s, None, parties, ansatz, anc_labels)
    if ansatz.rows < prob.rank:
        raise ValueError(f"ansatz output dimension {ansatz.rows} below purification rank {prob.rank}")
    st = prob.state(ansatz.params)
    check_extension(st, s)
    return st


def _default_parties(s, ansatz):
    if ansatz.mode == "multipartite":
        return tuple((x,) for x in s.labels)
    return ((s.labels[0],), tuple(s.labels[1:]))


def trivial_extension(s: QuantumState, parties, mode: str) -> Extension:
    n_anc = 1 if mode == "asymmetric" else len(parties)
    names = ancilla_names(parties, mode, s.labels)
    st = QuantumState(s.matrix, s.dims + (1,) * n_anc, s.labels + names)
    return Extension(st, parties, tuple((x,) for x in names), mode)


def flag_extension(ens: Ensemble, parties, symmetric: bool = True, n_flags: int | None = None) -> Extension:
    """Attach classical flags |i><i| to an ensemble.

    Symmetric: one copy of the flag per party (``sum p_i rho_i (x) |i><i| (x)
    |i><i|``); asymmetric: a single flag system E.
    """
    parties = tuple(as_labels(g) for g in parties)
    ref = ens.states[0]
    k = len(ens)
    mode = ("symmetric" if len(parties) == 2 else "multipartite") if symmetric else "asymmetric"
    n_flags = n_flags or (len(parties) if symmetric else 1)
    names = ancilla_names(parties, mode, ref.labels)
    m = 0
    for i, (p, st) in enumerate(ens):
        e = np.zeros(k)
        e[i] = 1.0
        flag = np.diag(e)
        f = flag
        for _ in range(n_flags - 1):
            f = np.kron(f, flag)
        m = m + p * np.kron(st.matrix, f)
    state = QuantumState(m, ref.dims + (k,) * n_flags, ref.labels + names)
    return Extension(state, parties, tuple((x,) for x in names), mode)


def symmetric_to_asymmetric(ext: Extension) -> Extension:
    """Regard the joint ancillas A'B' as a single extension system E."""
    if ext.mode == "asymmetric":
        return ext
    if len(ext.parties) != 2:
        raise ValueError("asymmetric conversion needs a bipartite extension")
    return Extension(ext.state, ext.parties, (tuple(x for g in ext.ancillas for x in g),), "asymmetric")


# -- certificates ---------------------------------------------------------------


def _matrix_json(m: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(a, b) for a, b in row] for row in rows])


def explicit_certificate(ext: Extension) -> dict:
    st = ext.state
    return {
        "kind": "explicit",
        "mode": ext.mode,
        "labels": list(st.labels),
        "dims": list(st.dims),
        "parties": [list(g) for g in ext.parties],
        "ancillas": [list(g) for g in ext.ancillas],
        "matrix": _matrix_json(st.matrix),
    }


def extension_from_certificate(s: QuantumState, parties, cert: dict) -> Extension:
    """Rebuild the extension certified by a conditioning result."""
    parties = tuple(as_labels(g) for g in parties)
    kind = cert["kind"]
    if kind == "trivial":
        return trivial_extension(s, parties, cert["mode"])
    if kind == "flag":
        ens = _ensemble_from_cert(s, cert)
        return flag_extension(ens, parties, symmetric=cert["mode"] != "asymmetric")
    if kind == "isometry":
        ans = ExtensionAnsatz(cert["mode"], tuple(cert["out_dims"]), cert["env_extra"], np.asarray(cert["params"]))
        prob = _Problem(s, None, parties, ans, tuple(cert["ancilla_labels"]))
        return Extension(prob.state(ans.params), parties, prob.ancillas, cert["mode"])
    if kind == "explicit":
        st = QuantumState(_matrix_from_json(cert["matrix"]), tuple(cert["dims"]), tuple(cert["labels"]))
        return Extension(st, tuple(map(tuple, cert["parties"])), tuple(map(tuple, cert["ancillas"])), cert["mode"])
    raise ValueError(f"unknown certificate kind {kind!r}")


def _ensemble_from_cert(s, cert) -> Ensemble:
    mats = [_matrix_from_json(m) for m in cert["matrices"]]
    return Ensemble(tuple(cert["probs"]), tuple(QuantumState(m, s.dims, s.labels) for m in mats))


def flag_value(ens: Ensemble, cm: ConditionedMeasure, parties) -> float:
    """Objective of the flag extension of ``ens`` for an entropic base: factor * sum p_i f(rho_i)."""
    if not cm.entropic:
        raise ValueError("the ensemble formula holds for entropic bases only")
    parties = tuple(as_labels(g) for g in parties)
    return float(sum(p * cm.factor * _base_value(cm, EntropyOracle.of(st), parties, None, {}) for p, st in ens))


def evaluate_certificate(s: QuantumState, parties, cm: ConditionedMeasure, cert: dict) -> float:
    if cert["kind"] == "flag" and cm.entropic:
        return flag_value(_ensemble_from_cert(s, cert), cm, parties)
    return conditioned_objective(extension_from_certificate(s, parties, cert), cm)


# -- minimization -----------------------------------------------------------------


def default_schedule(mode: str, rank: int, n_parties: int = 2) -> list[ExtensionAnsatz]:
    """Ansatz shapes tried in order; F is raised until each can hold the rank.

    Symmetric: ancillas (2, 2) then (r, r), F = 2. Asymmetric: E of dimension
    2 then r, with F = r (with F = 1 the objective would be constant, since
    I(A:B|E) = I(A:B) whenever ABE is pure). Multipartite: one qubit ancilla
    per party, F = 2. Later passes are skipped once they exceed
    ``MAX_PASS_PARAMS`` parameters.
    """
    if mode == "asymmetric":
        shapes = [((2,), rank)]
        if rank > 2:
            shapes.append(((rank,), rank))
    elif mode == "symmetric":
        shapes = [((2, 2), 2)]
        if rank > 2:
            shapes.append(((rank, rank), 2))
    else:
        shapes = [((2,) * n_parties, 2)]
    out = []
    for dims, env in shapes:
        env = max(env, -(-rank // int(np.prod(dims))))
        out.append(ExtensionAnsatz(mode, dims, env))
    return out


def _embed_params(params, old: ExtensionAnsatz, new: ExtensionAnsatz, rank: int):
    """Place an isometry for ``old`` into the larger output space of ``new``."""
    if len(old.out_dims) != len(new.out_dims):
        return None
    if any(a > b for a, b in zip(old.out_dims + (old.env_extra,), new.out_dims + (new.env_extra,))):
        return None
    v = polar_isometry(params, old.rows, rank).reshape(old.out_dims + (old.env_extra, rank))
    big = np.zeros(new.out_dims + (new.env_extra, rank), dtype=complex)
    big[tuple(slice(0, d) for d in old.out_dims + (old.env_extra,))] = v
    return params_from_isometry(big.reshape(new.rows, rank))


def _trivial_params(ans: ExtensionAnsatz, rank: int):
    """Ancillas in |0...0>, purifying system copied into F (needs F >= rank)."""
    if ans.env_extra < rank:
        return None
    v = np.zeros((ans.rows, rank), dtype=complex)
    v[:rank, :rank] = np.eye(rank)
    return params_from_isometry(v)


def minimize_conditioned(
    s: QuantumState,
    cm: ConditionedMeasure,
    parties,
    opts: OptimizerOptions | None = None,
    *,
    schedule: Sequence[ExtensionAnsatz] | None = None,
    seed_ensembles: Sequence[Ensemble] = (),
    seed_extensions: Sequence[Extension] = (),
    spectral_seed: bool = True,
    roof_seed: bool = True,
    roof: OptimizationResult | None = None,
    trivial_only: bool = False,
) -> OptimizationResult:
    """Certified upper bound on a conditioned measure of ``s``.

    ``s`` must carry exactly the labels in ``parties``. The trivial extension,
    flag extensions of ``seed_ensembles`` (plus the spectral decomposition
    when ``spectral_seed``), and any ``seed_extensions`` are evaluated as
    candidates before the isometry search, so the returned value never
    exceeds any of them. ``roof`` is a precomputed :func:`member_roof`
    result used in place of the one ``roof_seed`` would compute. For bases
    in ``NONNEGATIVE_BASES`` a candidate at 0 is optimal and ends the run.
    """
    opts = opts or OptimizerOptions()
    parties = tuple(as_labels(g) for g in parties)
    Partition(parties).validate(s)
    if sorted(x for g in parties for x in g) != sorted(s.labels):
        raise LabelError(f"parties {parties} must cover the state labels {s.labels} exactly")
    mode = _mode_for(parties, cm)
    symmetric = mode != "asymmetric"

    triv = trivial_extension(s, parties, mode)
    info: dict = {}
    candidates = [(conditioned_objective(triv, cm, info), {"kind": "trivial", "mode": mode})]
    if trivial_only:
        v, cert = candidates[0]
        return OptimizationResult(v, cert, [v], True, 0, {"mode": mode, "trivial_only": True})

    def add_flags(ensembles):
        for ens in ensembles:
            cert = _ensemble_cert(ens)
            cert.update(kind="flag", mode=mode)
            if cm.entropic:
                val = flag_value(ens, cm, parties)
            else:
                val = conditioned_objective(flag_extension(ens, parties, symmetric=symmetric), cm, info)
            candidates.append((val, cert))

    add_flags(list(seed_ensembles) + ([spectral_ensemble(s)] if spectral_seed else []))
    for ext in seed_extensions:
        if ext.mode != mode:
            ext = symmetric_to_asymmetric(ext) if mode == "asymmetric" else ext
        check_extension(ext.state, s)
        candidates.append((conditioned_objective(ext, cm, info), explicit_certificate(ext)))
    bound = 0.0 if cm.base in NONNEGATIVE_BASES else None
    hit = bound_candidate(candidates, bound)
    if hit is None and roof is None and roof_seed and cm.entropic:
        roof = member_roof(s, cm, parties, opts)
    if hit is None and roof is not None:
        add_flags([roof_ensemble(s, roof.certificate)])
        hit = bound_candidate(candidates, bound)
    if hit is not None:
        return _finish(hit, s, parties, cm, info, mode, None, roof)

    rank = _purification_columns(s).shape[1]
    schedule = list(schedule) if schedule is not None else default_schedule(mode, rank, len(parties))
    passes = []
    prev = None
    for i, ans in enumerate(schedule):
        if ans.mode != mode:
            raise ValueError(f"ansatz mode {ans.mode} does not match measure mode {mode}")
        if ans.rows < rank:
            ans = ExtensionAnsatz(ans.mode, ans.out_dims, -(-rank // int(np.prod(ans.out_dims))))
        if i > 0 and ans.n_params(rank) > MAX_PASS_PARAMS:
            continue
        names = ancilla_names(parties, mode, s.labels)
        prob = _Problem(s, cm, parties, ans, names)
        starts = []
        if prev is not None:
            emb = _embed_params(prev[1], prev[0], ans, rank)
            if emb is not None:
                starts.append(emb)
        tp = _trivial_params(ans, rank)
        if tp is not None:
            starts.append(tp)
        res = multistart_minimize(prob, prob.n_params, opts.derive(i, *ans.out_dims, ans.env_extra),
                                  starts=starts, candidates=candidates if not passes else ())
        if res.certificate.get("kind") == "params":
            params = res.certificate["params"]
            res.certificate = {"kind": "isometry", "mode": mode, "out_dims": list(ans.out_dims),
                               "env_extra": ans.env_extra, "ancilla_labels": list(names), "params": params}
            prev = (ans, np.asarray(params))
        if not prob.inner_ok:
            res.converged = False
        passes.append(res)
    if passes:
        out = merge_results(passes)
    else:
        best = min(range(len(candidates)), key=lambda i: (candidates[i][0], i))
        v, cert = candidates[best]
        out = OptimizationResult(v, dict(cert), [v], False, 0)
    return _finish(out, s, parties, cm, info, mode, rank, roof)


def _finish(out, s, parties, cm, info, mode, rank, roof) -> OptimizationResult:
    # the reported certificate is re-evaluated once in every profile
    check = evaluate_certificate(s, parties, cm, out.certificate)
    if abs(check - out.value) > 1e-9:
        raise RuntimeError(f"certificate re-evaluates to {check!r}, reported {out.value!r}")
    if not info.get("inner_converged", True):
        out.converged = False
    if rank is None:
        rank = _purification_columns(s).shape[1]
    out.info.update({"mode": mode, "rank": rank})
    if roof is not None:
        out.info["roof_value"] = roof.value
        # a winning roof flag is as converged as the roof search behind it
        if out.certificate.get("kind") == "flag" and abs(out.value - roof.value) <= AGREE_TOL:
            out.converged = out.converged or roof.converged
    return out


class _MemberFunctional:
    """factor * f(parties) of a member state, the flag-extension value per member."""

    def __init__(self, s: QuantumState, cm: ConditionedMeasure, parties):
        self.s, self.cm, self.parties = s, cm, parties
        self.half_mi = None
        if cm.base == "I" or (len(parties) == 2 and cm.base == "I_n"):
            self.half_mi = HalfMutualInformation(s.dims, s.labels, parties[0])

    def __call__(self, rho) -> float:
        ent = EntropyOracle(self.s.dims, self.s.labels, matrix=rho)
        return self.cm.factor * _base_value(self.cm, ent, self.parties, None, {})

    def pure_batch(self, vecs):
        if self.half_mi is not None:
            return 2 * self.cm.factor * self.half_mi.pure_batch(vecs)
        out = []
        for v in vecs:
            ent = EntropyOracle(self.s.dims, self.s.labels, vector=v)
            out.append(self.cm.factor * _base_value(self.cm, ent, self.parties, None, {}))
        return np.array(out)


def member_roof(s: QuantumState, cm: ConditionedMeasure, parties, opts=None, **kw) -> OptimizationResult:
    """Convex roof of the per-member flag value; its flag extension certifies the same value."""
    if not cm.entropic:
        raise ValueError("member roofs are defined for entropic bases only")
    return convex_roof(_MemberFunctional(s, cm, parties), s, opts=opts, **kw)


def spectral_ensemble(s: QuantumState) -> Ensemble:
    w, v = np.linalg.eigh(s.matrix)
    keep = w > 1e-12
    w, v = w[keep], v[:, keep]
    w = w / w.sum()
    states = tuple(QuantumState(np.outer(v[:, j], v[:, j].conj()), s.dims, s.labels) for j in range(len(w)))
    return Ensemble(tuple(w), states)


def _reduce(s: QuantumState, parties) -> QuantumState:
    labels = [x for g in parties for x in g]
    if sorted(labels) == sorted(s.labels):
        return s
    return partial_trace(s, labels)


def c_I(s: QuantumState, split, opts=None, **kw) -> OptimizationResult:
    """(1/2) inf [I(AA':BB') - I(A':B')]."""
    parties = _parties(split)
    return minimize_conditioned(_reduce(s, parties), C_I, parties, opts, **kw)


def e_sq_q_bound(s: QuantumState, split, opts=None, **kw) -> OptimizationResult:
    """(1/2) inf [I(A:BE) - I(A:E)] over extensions rho_ABE."""
    parties = _parties(split)
    return minimize_conditioned(_reduce(s, parties), E_SQ_Q, parties, opts, **kw)


def conditional_entanglement(s: QuantumState, split, base: str, opts=None, **kw) -> OptimizationResult:
    """inf [E(AA':BB') - E(A':B')] for a generating measure ``base``."""
    parties = _parties(split)
    return minimize_conditioned(_reduce(s, parties), ConditionedMeasure(base, "symmetric", 1.0), parties, opts, **kw)


def multipartite_conditioned(s: QuantumState, groups, which: str = "I_n", opts=None, *,
                             factor: float = 1.0, **kw) -> OptimizationResult:
    """inf [F(A_1A'_1 : ... : A_nA'_n) - F(A'_1 : ... : A'_n)] for F in {I_n, S_n}."""
    if which not in ("I_n", "S_n"):
        raise ValueError(f"which must be I_n or S_n, got {which!r}")
    parties = _parties(groups)
    if len(parties) < 2:
        raise ValueError("need at least 2 groups")
    cm = ConditionedMeasure(which, "symmetric", factor)
    return minimize_conditioned(_reduce(s, parties), cm, parties, opts, **kw)


def _parties(split) -> tuple[tuple[str, ...], ...]:
    if isinstance(split, str):
        split = Partition.parse(split)
    if isinstance(split, Partition):
        return split.groups
    return tuple(as_labels(g) for g in split)
