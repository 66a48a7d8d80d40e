"""Entropic and correlation functionals, in bits.

All functionals take label sets and evaluate on marginals computed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .states import Ensemble, LabelError, Partition, QuantumState, as_labels, ptrace_array

CLAMP = 1e-12


@dataclass(frozen=True)
class EntropyReport:
    value: float
    spectrum: tuple[float, ...]
    clamped_mass: float


def spectrum_entropy(evals: np.ndarray) -> float:
    """-sum(l log2 l) over a spectrum, with small and negative values dropped."""
    lam = evals[evals > CLAMP]
    return float(-np.sum(lam * np.log2(lam)))


def matrix_entropy(m: np.ndarray) -> float:
    if m.shape[0] == 1:
        return 0.0
    return spectrum_entropy(np.linalg.eigvalsh(m))


def entropy_report(s: QuantumState) -> EntropyReport:
    ev = np.linalg.eigvalsh(s.matrix)
    clamped = float(-np.sum(ev[ev < -CLAMP]))
    ev = np.where(np.abs(ev) < CLAMP, 0.0, ev)
    ev = np.clip(ev, 0.0, None)
    return EntropyReport(spectrum_entropy(ev), tuple(float(x) for x in ev), clamped)


def von_neumann_entropy(s: QuantumState) -> float:
    return entropy_report(s).value


def _marginal_entropy(s: QuantumState, labels) -> float:
    labels = as_labels(labels)
    if not labels:
        return 0.0
    idx = sorted(set(s.index(labels)))
    if len(idx) == len(s.dims):
        return matrix_entropy(s.matrix)
    return matrix_entropy(ptrace_array(s.matrix, s.dims, idx))


def _disjoint(*sets):
    seen: set[str] = set()
    for st in sets:
        st = set(as_labels(st))
        if seen & st:
            raise LabelError(f"label sets overlap on {sorted(seen & st)}")
        seen |= st


class EntropyOracle:
    """Cached marginal entropies of one state, keyed by label set.

    Works for a density matrix or (cheaper) a pure global vector, in which
    case the smaller of a subset and its complement is diagonalized.
    """

    def __init__(self, dims: Sequence[int], labels: Sequence[str], matrix=None, vector=None):
        self.dims = list(dims)
        self.labels = list(labels)
        self.matrix = matrix
        self.vector = vector
        self._cache: dict[frozenset, float] = {}

    @classmethod
    def of(cls, s) -> "EntropyOracle":
        if isinstance(s, QuantumState):
            return cls(s.dims, s.labels, matrix=s.matrix)
        return cls(s.dims, s.labels, vector=s.vector)

    def __call__(self, labels) -> float:
        key = frozenset(as_labels(labels))
        if key not in self._cache:
            self._cache[key] = self._compute(key)
        return self._cache[key]

    def _compute(self, key: frozenset) -> float:
        if not key:
            return 0.0
        idx = sorted(self.labels.index(x) for x in key)
        n = len(self.dims)
        if self.vector is not None:
            rest = [i for i in range(n) if i not in idx]
            if not rest:
                return 0.0
            dk = int(np.prod([self.dims[i] for i in idx]))
            dr = int(np.prod([self.dims[i] for i in rest]))
            if dk > dr:
                idx = rest
            m = self.vector.reshape(self.dims).transpose(idx + [i for i in range(n) if i not in idx])
            m = m.reshape(min(dk, dr), -1)
            return matrix_entropy(m @ m.conj().T)
        if len(idx) == n:
            return matrix_entropy(self.matrix)
        return matrix_entropy(ptrace_array(self.matrix, self.dims, idx))


def conditional_entropy(s: QuantumState, a, b) -> float:
    """S(ab) - S(b)."""
    _disjoint(a, b)
    return _marginal_entropy(s, as_labels(a) + as_labels(b)) - _marginal_entropy(s, b)


def mutual_information(s: QuantumState, a, b) -> float:
    _disjoint(a, b)
    ent = EntropyOracle.of(s)
    return mi_from(ent, a, b)


def conditional_mutual_information(s: QuantumState, a, b, e) -> float:
    """I(a:b|e) = S(ae) + S(be) - S(e) - S(abe)."""
    _disjoint(a, b, e)
    return cmi_from(EntropyOracle.of(s), a, b, e)


def mi_from(ent: Callable, a, b) -> float:
    a, b = as_labels(a), as_labels(b)
    return ent(a) + ent(b) - ent(a + b)


def cmi_from(ent: Callable, a, b, e) -> float:
    a, b, e = as_labels(a), as_labels(b), as_labels(e)
    return ent(a + e) + ent(b + e) - ent(e) - ent(a + b + e)


def In_from(ent: Callable, groups) -> float:
    groups = [as_labels(g) for g in groups]
    union = tuple(x for g in groups for x in g)
    return sum(ent(g) for g in groups) - ent(union)


def Sn_from(ent: Callable, groups) -> float:
    groups = [as_labels(g) for g in groups]
    n = len(groups)
    union = tuple(x for g in groups for x in g)
    leave_one = sum(ent(tuple(x for j, g in enumerate(groups) if j != i for x in g)) for i in range(n))
    return leave_one - (n - 1) * ent(union)


def _groups(groups):
    if isinstance(groups, Partition):
        groups = groups.groups
    groups = [as_labels(g) for g in groups]
    if len(groups) < 2:
        raise ValueError("multipartite information needs at least 2 groups")
    _disjoint(*groups)
    return groups


def multipartite_I_n(s: QuantumState, groups) -> float:
    """sum_i S(A_i) - S(A_1...A_n)."""
    return In_from(EntropyOracle.of(s), _groups(groups))


def multipartite_S_n(s: QuantumState, groups) -> float:
    """sum_i S(all but A_i) - (n-1) S(A_1...A_n)."""
    return Sn_from(EntropyOracle.of(s), _groups(groups))


def holevo_quantity(ens: Ensemble) -> float:
    if len(ens) == 0:
        raise ValueError("empty ensemble")
    avg = sum(p * st.matrix for p, st in ens)
    return matrix_entropy(avg) - sum(p * matrix_entropy(st.matrix) for p, st in ens)


def marginal_ensemble(ens: Ensemble, keep) -> Ensemble:
    from .states import partial_trace

    return Ensemble(ens.probs, tuple(partial_trace(st, keep) for st in ens.states))


def binary_entropy(e: float) -> float:
    if not 0.0 <= e <= 1.0:
        raise ValueError(f"binary entropy argument outside [0, 1]: {e!r}")
    if e in (0.0, 1.0):
        return 0.0
    return float(-e * np.log2(e) - (1 - e) * np.log2(1 - e))


def continuity_bound(eps: float, dA: int) -> float:
    """Conditional-entropy continuity bound 4 eps log2 dA + 2 H(eps)."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps outside [0, 1]: {eps!r}")
    return 4 * eps * np.log2(dA) + 2 * binary_entropy(eps)


def continuity_bound_CI(eps: float, dA_times_dB: int) -> float:
    """16 sqrt(eps) log2(dA dB) + 6 H(2 sqrt(eps)); H is taken as 1 once 2 sqrt(eps) > 1."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps outside [0, 1]: {eps!r}")
    x = 2 * np.sqrt(eps)
    h = binary_entropy(x) if x <= 1 else 1.0
    return float(16 * np.sqrt(eps) * np.log2(dA_times_dB) + 6 * h)
