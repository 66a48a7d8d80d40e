"""Directly computable entanglement measures and the convex-roof engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .entropy import EntropyOracle, matrix_entropy, mi_from, spectrum_entropy
from .optimize import OptimizationResult, OptimizerOptions, bound_candidate, merge_results, multistart_minimize
from .states import (
    Ensemble,
    Partition,
    QuantumState,
    as_labels,
    params_from_isometry,
    partial_transpose_array,
    polar_isometry,
    ptrace_array,
)

MEASURE_KINDS = ("log_negativity", "ent_of_formation", "mutual_information_half", "I_n", "S_n")
PPT_TOL = 1e-9
P_MIN = 1e-14


@dataclass(frozen=True)
class MeasureSpec:
    kind: str
    partition: Partition
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")

    def validate(self, s: QuantumState) -> None:
        self.partition.validate(s)


def _side(s_labels, a) -> list[int]:
    a = set(as_labels(a))
    unknown = a - set(s_labels)
    if unknown:
        raise ValueError(f"labels {sorted(unknown)} not in {tuple(s_labels)}")
    return [i for i, x in enumerate(s_labels) if x in a]


def negativity_trace_norm(mat: np.ndarray, dims, on_idx) -> float:
    """Trace norm of the partial transpose."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(partial_transpose_array(mat, dims, on_idx)))))


def log_negativity(s: QuantumState, a) -> float:
    """log2 of the trace norm of the partial transpose across ``a`` : rest."""
    return float(np.log2(negativity_trace_norm(s.matrix, s.dims, _side(s.labels, a))))


def ppt_check(s: QuantumState, a, tol: float = PPT_TOL) -> bool:
    ev = np.linalg.eigvalsh(partial_transpose_array(s.matrix, s.dims, _side(s.labels, a)))
    return bool(ev[0] >= -tol)


# -- functionals on members -------------------------------------------------------


class EntanglementEntropy:
    """S(rho_a) of a member state; the entropy of entanglement for pure members."""

    def __init__(self, dims, labels, a):
        self.dims = list(dims)
        self.idx = _side(labels, a)
        self.rest = [i for i in range(len(self.dims)) if i not in self.idx]
        self.da = int(np.prod([self.dims[i] for i in self.idx]))

    def __call__(self, rho: np.ndarray) -> float:
        return matrix_entropy(ptrace_array(rho, self.dims, self.idx))

    def pure_batch(self, vecs: np.ndarray) -> np.ndarray:
        """Entropies of normalized pure vectors stacked along axis 0."""
        k = vecs.shape[0]
        t = vecs.reshape([k] + self.dims).transpose([0] + [1 + i for i in self.idx + self.rest])
        sv = np.linalg.svd(t.reshape(k, self.da, -1), compute_uv=False)
        lam = sv**2
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(lam > 1e-12, -lam * np.log2(lam), 0.0)
        return terms.sum(axis=1)


class HalfMutualInformation(EntanglementEntropy):
    """(1/2) I(a : rest) of a member state; equals S(rho_a) on pure members."""

    def __init__(self, dims, labels, a):
        super().__init__(dims, labels, a)
        self.labels = list(labels)
        self.a = [self.labels[i] for i in self.idx]
        self.b = [self.labels[i] for i in self.rest]

    def __call__(self, rho: np.ndarray) -> float:
        ent = EntropyOracle(self.dims, self.labels, matrix=rho)
        return 0.5 * mi_from(ent, self.a, self.b)


# -- convex roof -------------------------------------------------------------------


@dataclass
class _RoofProblem:
    psi: np.ndarray  # system x rank, columns sqrt(lambda_j) e_j
    k: int
    env_extra: int
    f: Any

    @property
    def rank(self) -> int:
        return self.psi.shape[1]

    @property
    def n_params(self) -> int:
        return 2 * self.k * self.env_extra * self.rank

    def members(self, params):
        w = polar_isometry(params, self.k * self.env_extra, self.rank)
        x = (self.psi @ w.T).reshape(self.psi.shape[0], self.k, self.env_extra)
        return np.moveaxis(x, 1, 0)  # k x system x env_extra

    def __call__(self, params) -> float:
        x = self.members(params)
        p = np.einsum("kse,kse->k", x, x.conj()).real
        keep = p > P_MIN
        if self.env_extra == 1 and hasattr(self.f, "pure_batch"):
            vecs = x[keep, :, 0] / np.sqrt(p[keep])[:, None]
            return float(np.dot(p[keep], self.f.pure_batch(vecs)))
        total = 0.0
        for pi, xi in zip(p[keep], x[keep]):
            xi = xi.reshape(xi.shape[0], -1)
            total += pi * self.f((xi @ xi.conj().T) / pi)
        return total

    def ensemble(self, params, dims, labels) -> Ensemble:
        x = self.members(params)
        probs, states = [], []
        for xi in x:
            rho = xi @ xi.conj().T
            pi = float(np.trace(rho).real)
            if pi > P_MIN:
                probs.append(pi)
                states.append(rho / pi)
        tot = sum(probs)
        return Ensemble(tuple(p / tot for p in probs), tuple(QuantumState(m, dims, labels) for m in states))


def _purification_columns(s: QuantumState) -> np.ndarray:
    w, v = np.linalg.eigh(s.matrix)
    mask = w > 1e-12
    w = w[mask] / w[mask].sum()
    return v[:, mask] * np.sqrt(w)


def ensemble_value(f, ens: Ensemble) -> float:
    return float(sum(p * f(st.matrix) for p, st in ens))


def _spectral_start(k: int, env_extra: int, r: int) -> np.ndarray:
    v = np.zeros((k * env_extra, r), dtype=complex)
    for j in range(r):
        v[j * env_extra, j] = 1.0
    return params_from_isometry(v)


def _embed(params, k_old, k_new, env_extra, r) -> np.ndarray:
    w = polar_isometry(params, k_old * env_extra, r)
    big = np.zeros((k_new * env_extra, r), dtype=complex)
    big[: k_old * env_extra] = w
    return params_from_isometry(big)


def convex_roof(f, s: QuantumState, k: int | None = None, opts: OptimizerOptions | None = None, *,
                env_extra: int = 1, seed_ensembles=(), lower_bound: float | None = None) -> OptimizationResult:
    """Upper bound on min over decompositions rho = sum p_i rho_i of sum p_i f(rho_i).

    Decompositions with ``k`` members are parameterized by isometries from
    the purifying system into ``k (x) env_extra`` (``env_extra > 1`` gives
    mixed members). Passes run on the doubling ladder ``r, 2r, ... , k``,
    each seeded with the previous pass's best. The single-member
    decomposition and any ``seed_ensembles`` are always candidates; a
    candidate at a known ``lower_bound`` of ``f`` ends the search.
    """
    opts = opts or OptimizerOptions()
    psi = _purification_columns(s)
    r = psi.shape[1]
    if k is None:
        k = min(2 * r, r * r)
    if k < r:
        raise ValueError(f"member count k={k} is below the state rank {r}")
    candidates = [(float(f(s.matrix)), {"kind": "trivial"})]
    for ens in seed_ensembles:
        candidates.append((ensemble_value(f, ens), _ensemble_cert(ens)))
    hit = bound_candidate(candidates, lower_bound)
    if hit is not None:
        hit.info.update({"rank": r, "k": k, "env_extra": env_extra})
        return hit

    ladder = [r]
    while ladder[-1] < k:
        ladder.append(min(2 * ladder[-1], k))
    passes = []
    start = None
    for kk in ladder:
        prob = _RoofProblem(psi, kk, env_extra, f)
        if start is None:
            starts = [_spectral_start(kk, env_extra, r)]
        else:
            starts = [start, _spectral_start(kk, env_extra, r)]
        res = multistart_minimize(prob, prob.n_params, opts.derive(kk, env_extra),
                                  starts=starts, candidates=candidates if not passes else ())
        start = None
        if res.certificate.get("kind") == "params":
            res.certificate = {"kind": "decomposition", "k": kk, "env_extra": env_extra,
                               "params": res.certificate["params"]}
            if kk != ladder[-1]:
                nxt = ladder[ladder.index(kk) + 1]
                start = _embed(res.certificate["params"], kk, nxt, env_extra, r)
        passes.append(res)
    out = merge_results(passes)
    out.info.update({"rank": r, "k": k, "env_extra": env_extra})
    return out


def _ensemble_cert(ens: Ensemble) -> dict:
    return {
        "kind": "ensemble",
        "probs": list(ens.probs),
        "matrices": [[[[z.real, z.imag] for z in row] for row in st.matrix] for st in ens.states],
    }


def roof_ensemble(s: QuantumState, cert: dict) -> Ensemble:
    """Rebuild the decomposition certified by a convex-roof result."""
    kind = cert["kind"]
    if kind == "trivial":
        return Ensemble((1.0,), (s,))
    if kind == "ensemble":
        mats = [np.array([[complex(*z) for z in row] for row in m]) for m in cert["matrices"]]
        return Ensemble(tuple(cert["probs"]), tuple(QuantumState(m, s.dims, s.labels) for m in mats))
    if kind == "decomposition":
        psi = _purification_columns(s)
        prob = _RoofProblem(psi, cert["k"], cert["env_extra"], None)
        return prob.ensemble(np.asarray(cert["params"]), s.dims, s.labels)
    raise ValueError(f"not a decomposition certificate: {kind!r}")


def entanglement_of_formation(s: QuantumState, a, opts: OptimizerOptions | None = None, *,
                              k: int | None = None, seed_ensembles=()) -> OptimizationResult:
    """Convex roof of the entropy of entanglement across ``a`` : rest."""
    f = EntanglementEntropy(s.dims, s.labels, a)
    return convex_roof(f, s, k, opts, seed_ensembles=seed_ensembles, lower_bound=0.0)


def c_squashed(s: QuantumState, a, opts: OptimizerOptions | None = None, *, k: int | None = None,
               env_extra: int = 1, seed_ensembles=()) -> OptimizationResult:
    """Mixed convex roof of (1/2) I(a : rest): an upper bound on c-squashed entanglement.

    With the default ``env_extra=1`` only pure-member decompositions are
    searched (seeded ensembles may still have mixed members).
    """
    f = HalfMutualInformation(s.dims, s.labels, a)
    return convex_roof(f, s, k, opts, env_extra=env_extra, seed_ensembles=seed_ensembles, lower_bound=0.0)


def pure_entanglement_entropy(vec: np.ndarray, dims, labels, a) -> float:
    f = EntanglementEntropy(dims, labels, a)
    return float(f.pure_batch(np.asarray(vec)[None, :])[0])


def measure_value(spec: MeasureSpec, s: QuantumState, opts: OptimizerOptions | None = None):
    """Evaluate a generating measure on ``s``; returns (value, result or None)."""
    spec.validate(s)
    groups = spec.partition.groups
    if spec.kind == "log_negativity":
        return log_negativity(s, groups[0]), None
    if spec.kind == "ent_of_formation":
        res = entanglement_of_formation(s, groups[0], opts)
        return res.value, res
    ent = EntropyOracle.of(s)
    if spec.kind == "mutual_information_half":
        return 0.5 * mi_from(ent, groups[0], groups[1]), None
    from .entropy import In_from, Sn_from

    if spec.kind == "I_n":
        return In_from(ent, groups), None
    return Sn_from(ent, groups), None


__all__ = [
    "MeasureSpec",
    "log_negativity",
    "ppt_check",
    "convex_roof",
    "entanglement_of_formation",
    "c_squashed",
    "roof_ensemble",
    "EntanglementEntropy",
    "HalfMutualInformation",
    "spectrum_entropy",
]
