"""Finite-dimensional quantum state algebra.

States carry an ordered list of subsystem labels and dimensions; every
regrouping (``AA':BB'`` versus ``A':B'``) is expressed through label sets,
never through positional indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-12
RANK_TOL = 1e-12


class LabelError(ValueError):
    """Raised for duplicate, unknown or otherwise inconsistent labels."""


class StateError(ValueError):
    """Raised when a matrix or vector violates the state invariants."""


def as_labels(labels) -> tuple[str, ...]:
    """Normalize a label or an iterable of labels to a tuple of strings."""
    if isinstance(labels, str):
        return (labels,)
    return tuple(labels)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def _check_layout(dims, labels, size):
    dims = tuple(int(d) for d in dims)
    labels = tuple(labels)
    if len(dims) != len(labels):
        raise LabelError(f"{len(labels)} labels for {len(dims)} subsystems")
    if len(set(labels)) != len(labels):
        raise LabelError(f"duplicate labels in {labels}")
    if any(d < 1 for d in dims):
        raise StateError(f"subsystem dimensions must be >= 1, got {dims}")
    if int(np.prod(dims, dtype=np.int64)) != size:
        raise StateError(f"dims {dims} do not match size {size}")
    return dims, labels


@dataclass(frozen=True)
class QuantumState:
    """Density matrix on labeled subsystems.

    The matrix is symmetrized on construction and checked for unit trace and
    positivity. Instances are immutable.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StateError(f"matrix must be square, got shape {m.shape}")
        dims, labels = _check_layout(self.dims, self.labels, m.shape[0])
        herm_err = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if herm_err > HERMITIAN_TOL:
            raise StateError(f"matrix not Hermitian (max deviation {herm_err:.3g})")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateError(f"trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise StateError(f"matrix not positive semidefinite (min eigenvalue {lo:.3g})")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def index(self, labels) -> tuple[int, ...]:
        """Positions of ``labels`` in this state's label list."""
        out = []
        for lab in as_labels(labels):
            try:
                out.append(self.labels.index(lab))
            except ValueError:
                raise LabelError(f"unknown label {lab!r}; state has {self.labels}") from None
        return tuple(out)

    def dims_of(self, labels) -> tuple[int, ...]:
        return tuple(self.dims[i] for i in self.index(labels))

    def relabel(self, mapping: dict[str, str]) -> "QuantumState":
        return QuantumState(self.matrix, self.dims, tuple(mapping.get(x, x) for x in self.labels))

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def rank(self, tol: float = RANK_TOL) -> int:
        return int(np.sum(self.eigvalsh() > tol))


@dataclass(frozen=True)
class PureState:
    """Unit vector on labeled subsystems."""

    vector: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).reshape(-1)
        dims, labels = _check_layout(self.dims, self.labels, v.shape[0])
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > NORM_TOL:
            raise StateError(f"vector norm is {nrm!r}, expected 1")
        object.__setattr__(self, "vector", _frozen(v))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    def projector(self) -> QuantumState:
        v = self.vector
        return QuantumState(np.outer(v, v.conj()), self.dims, self.labels)


@dataclass(frozen=True)
class Partition:
    """Ordered groups of labels, e.g. ``[("A", "A'"), ("B", "B'")]``."""

    groups: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        groups = tuple(as_labels(g) for g in self.groups)
        flat = [x for g in groups for x in g]
        if any(len(g) == 0 for g in groups):
            raise LabelError("empty group in partition")
        if len(set(flat)) != len(flat):
            raise LabelError(f"partition groups overlap: {groups}")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"A1,A2:B1,B2"`` style notation."""
        groups = [tuple(x.strip() for x in part.split(",") if x.strip()) for part in text.split(":")]
        return cls(tuple(groups))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(x for g in self.groups for x in g)

    def validate(self, state) -> None:
        known = set(state.labels)
        for lab in self.labels:
            if lab not in known:
                raise LabelError(f"partition label {lab!r} not in state labels {state.labels}")

    def __len__(self):
        return len(self.groups)

    def __str__(self):
        return ":".join(",".join(g) for g in self.groups)


@dataclass(frozen=True)
class Ensemble:
    """Probability-weighted states sharing one layout."""

    probs: tuple[float, ...]
    states: tuple[QuantumState, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        states = tuple(self.states)
        if len(probs) != len(states):
            raise ValueError("probabilities and states differ in length")
        if not states:
            raise ValueError("empty ensemble")
        if min(probs) < 0:
            raise ValueError("negative probability in ensemble")
        if abs(sum(probs) - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {sum(probs)!r}")
        layout = (states[0].dims, states[0].labels)
        for st in states[1:]:
            if (st.dims, st.labels) != layout:
                raise LabelError("ensemble members have different layouts")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    def __iter__(self):
        return iter(zip(self.probs, self.states))

    def __len__(self):
        return len(self.probs)

    def average(self) -> QuantumState:
        m = sum(p * st.matrix for p, st in self)
        ref = self.states[0]
        return QuantumState(m, ref.dims, ref.labels)


# -- array-level kernels ------------------------------------------------------


def ptrace_array(mat: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of a density matrix, keeping subsystem positions ``keep``.

    Kept subsystems come out in the order given by ``keep``.
    """
    dims = list(dims)
    n = len(dims)
    keep = list(keep)
    drop = [i for i in range(n) if i not in keep]
    t = mat.reshape(dims + dims)
    perm = keep + drop + [n + i for i in keep] + [n + i for i in drop]
    dk = int(np.prod([dims[i] for i in keep], dtype=np.int64))
    dd = int(np.prod([dims[i] for i in drop], dtype=np.int64))
    t = t.transpose(perm).reshape(dk, dd, dk, dd)
    return np.einsum("ajbj->ab", t)


def pure_marginal(vec: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of a pure vector on the kept positions."""
    dims = list(dims)
    keep = list(keep)
    drop = [i for i in range(len(dims)) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep], dtype=np.int64))
    m = vec.reshape(dims).transpose(keep + drop).reshape(dk, -1)
    return m @ m.conj().T


def partial_transpose_array(mat: np.ndarray, dims: Sequence[int], on: Sequence[int]) -> np.ndarray:
    dims = list(dims)
    n = len(dims)
    t = mat.reshape(dims + dims)
    perm = list(range(2 * n))
    for i in on:
        perm[i], perm[n + i] = n + i, i
    return t.transpose(perm).reshape(mat.shape)


# -- operations -----------------------------------------------------------------


def tensor(a: QuantumState, b: QuantumState) -> QuantumState:
    """Kronecker product with concatenated layouts."""
    clash = set(a.labels) & set(b.labels)
    if clash:
        raise LabelError(f"labels {sorted(clash)} appear on both factors")
    return QuantumState(np.kron(a.matrix, b.matrix), a.dims + b.dims, a.labels + b.labels)


def partial_trace(s: QuantumState, keep) -> QuantumState:
    """Reduce ``s`` to the subsystems in ``keep`` (returned in original order)."""
    keep = as_labels(keep)
    if not keep:
        raise ValueError("keep set must be nonempty")
    idx = sorted(set(s.index(keep)))
    m = ptrace_array(s.matrix, s.dims, idx)
    return QuantumState(m, tuple(s.dims[i] for i in idx), tuple(s.labels[i] for i in idx))


def reorder(s: QuantumState, labels) -> QuantumState:
    """Permute subsystems into the given label order (all labels required)."""
    labels = as_labels(labels)
    if sorted(labels) != sorted(s.labels):
        raise LabelError(f"reorder needs a permutation of {s.labels}, got {labels}")
    idx = list(s.index(labels))
    n = len(s.dims)
    t = s.matrix.reshape(s.dims + s.dims).transpose(idx + [n + i for i in idx])
    return QuantumState(t.reshape(s.matrix.shape), tuple(s.dims[i] for i in idx), labels)


def purify(s: QuantumState, env_label: str = "C") -> PureState:
    """Purification with environment dimension equal to the numerical rank."""
    if env_label in s.labels:
        raise LabelError(f"environment label {env_label!r} already used")
    w, v = np.linalg.eigh(s.matrix)
    mask = w > RANK_TOL
    w, v = w[mask], v[:, mask]
    w = w / w.sum()
    vec = (v * np.sqrt(w)).reshape(-1)
    vec = vec / np.linalg.norm(vec)
    return PureState(vec, s.dims + (len(w),), s.labels + (env_label,))


def partial_transpose(s: QuantumState, on) -> np.ndarray:
    on = as_labels(on)
    if not on:
        raise ValueError("partial transpose needs at least one label")
    return partial_transpose_array(s.matrix, s.dims, s.index(on))


def _check_kraus(kraus, din, tol=1e-10):
    ks = [np.asarray(k, dtype=complex) for k in kraus]
    if not ks:
        raise ValueError("empty Kraus set")
    for k in ks:
        if k.ndim != 2 or k.shape[1] != din:
            raise ValueError(f"Kraus operator of shape {k.shape} does not act on dimension {din}")
    tp = sum(k.conj().T @ k for k in ks)
    err = np.max(np.abs(tp - np.eye(din)))
    if err > tol:
        raise ValueError(f"Kraus set is not trace preserving (deviation {err:.3g})")
    return ks


def apply_channel(s: QuantumState, kraus, target, out_dims=None, out_labels=None) -> QuantumState:
    """Apply a CPTP map given by Kraus operators to the ``target`` subsystems.

    The untouched subsystems keep their order; the channel outputs are
    appended after them with ``out_labels``. With ``out_dims`` omitted the
    output replaces the target with identical layout, in place.
    """
    target = as_labels(target)
    tidx = list(s.index(target))
    rest = [i for i in range(len(s.dims)) if i not in tidx]
    din = int(np.prod([s.dims[i] for i in tidx], dtype=np.int64))
    ks = _check_kraus(kraus, din)
    in_place = out_dims is None
    if in_place:
        out_dims = tuple(s.dims[i] for i in tidx)
        out_labels = target
    out_dims = tuple(int(d) for d in out_dims)
    out_labels = as_labels(out_labels)
    dout = int(np.prod(out_dims, dtype=np.int64))
    if any(k.shape[0] != dout for k in ks):
        raise ValueError(f"Kraus output dimension does not match out_dims {out_dims}")
    n = len(s.dims)
    dr = int(np.prod([s.dims[i] for i in rest], dtype=np.int64))
    perm = rest + tidx
    t = s.matrix.reshape(s.dims + s.dims).transpose(perm + [n + i for i in perm])
    t = t.reshape(dr, din, dr, din)
    res = sum(np.einsum("ot,atbu,pu->aobp", k, t, k.conj()) for k in ks).reshape(dr * dout, dr * dout)
    out = QuantumState(
        res,
        tuple(s.dims[i] for i in rest) + out_dims,
        tuple(s.labels[i] for i in rest) + out_labels,
    )
    if in_place:
        return reorder(out, s.labels)
    return out


def measurement_pushforward(s: QuantumState, kraus, target, flag_label: str = "A0"):
    """Measure ``target`` with instrument ``kraus`` and record outcomes in a flag.

    Returns ``(ensemble, flagged)`` where ``flagged`` is
    ``sum_k p_k rho_k (x) |k><k|`` on the original labels plus ``flag_label``.
    Zero-probability outcomes are dropped and get no flag slot.
    """
    target = as_labels(target)
    if flag_label in s.labels:
        raise LabelError(f"flag label {flag_label!r} already used")
    tidx = list(s.index(target))
    din = int(np.prod([s.dims[i] for i in tidx], dtype=np.int64))
    ks = _check_kraus(kraus, din)
    if any(k.shape[0] != din for k in ks):
        raise ValueError("measurement Kraus operators must be square on the target")
    probs, mats = [], []
    for k in ks:
        m = _apply_single(s, k, tidx)
        p = float(np.trace(m).real)
        if p > RANK_TOL:
            probs.append(p)
            mats.append(m / p)
    total = sum(probs)
    probs = [p / total for p in probs]
    members = tuple(QuantumState(m, s.dims, s.labels) for m in mats)
    ens = Ensemble(tuple(probs), members)
    nk = len(probs)
    flagged = sum(p * np.kron(m, _basis_proj(nk, i)) for i, (p, m) in enumerate(zip(probs, mats)))
    return ens, QuantumState(flagged, s.dims + (nk,), s.labels + (flag_label,))


def _apply_single(s: QuantumState, k: np.ndarray, tidx: list[int]) -> np.ndarray:
    n = len(s.dims)
    rest = [i for i in range(n) if i not in tidx]
    perm = rest + tidx
    dr = int(np.prod([s.dims[i] for i in rest], dtype=np.int64))
    dt = k.shape[0]
    t = s.matrix.reshape(s.dims + s.dims).transpose(perm + [n + i for i in perm]).reshape(dr, dt, dr, dt)
    t = np.einsum("ot,atbu,pu->aobp", k, t, k.conj())
    sub = [s.dims[i] for i in perm]
    inv = list(np.argsort(perm))
    t = t.reshape(sub + sub).transpose(inv + [n + i for i in inv])
    return t.reshape(s.matrix.shape)


def _basis_proj(d: int, i: int) -> np.ndarray:
    p = np.zeros((d, d), dtype=complex)
    p[i, i] = 1.0
    return p


def trace_distance(a: QuantumState, b: QuantumState) -> float:
    """Trace norm of ``a - b`` (no factor 1/2)."""
    if a.dims != b.dims:
        raise StateError(f"dimension mismatch {a.dims} vs {b.dims}")
    return float(np.sum(np.abs(np.linalg.eigvalsh(a.matrix - b.matrix))))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """Uhlmann fidelity ``(Tr |sqrt(a) sqrt(b)|)**2``."""
    if a.dims != b.dims:
        raise StateError(f"dimension mismatch {a.dims} vs {b.dims}")
    sv = np.linalg.svd(_psd_sqrt(a.matrix) @ _psd_sqrt(b.matrix), compute_uv=False)
    return float(min(1.0, np.sum(sv) ** 2))


def default_labels(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(chr(ord("A") + i) for i in range(n))
    return tuple(f"X{i + 1}" for i in range(n))


def random_pure_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_state(dims, rank=None, seed=None, labels=None) -> QuantumState:
    """Induced-measure random state: trace out a Haar pure state on dims x rank."""
    dims = tuple(int(d) for d in dims)
    d = int(np.prod(dims))
    rank = d if rank is None else int(rank)
    if rank < 1:
        raise ValueError("rank must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return QuantumState(m, dims, labels or default_labels(len(dims)))


def random_isometry(rows: int, cols: int, seed=None) -> np.ndarray:
    """Haar-distributed isometry ``V`` with ``V^dag V = I`` (rows >= cols)."""
    if cols > rows:
        raise ValueError(f"isometry needs rows >= cols, got {rows} x {cols}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_unitary(d: int, seed=None) -> np.ndarray:
    return random_isometry(d, d, seed)


# -- named families -----------------------------------------------------------------


def _proj(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def _ket(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def dft_matrix(d: int) -> np.ndarray:
    """Unitary discrete Fourier transform of the computational basis."""
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return np.exp(2j * np.pi * j * k / d) / np.sqrt(d)


def flower_vector(d: int) -> np.ndarray:
    """Amplitudes on A1(d) A2(2) B1(d) B2(2) C(d)."""
    us = (np.eye(d), dft_matrix(d))
    psi = np.zeros((d, 2, d, 2, d), dtype=complex)
    for i in range(d):
        for j in (0, 1):
            psi[i, j, i, j, :] = us[j][:, i]
    return psi.reshape(-1) / np.sqrt(2 * d)


def _need_int(params, key, lo=1):
    if key not in params:
        raise ValueError(f"missing parameter {key!r}")
    v = params[key]
    if int(v) != v or int(v) < lo:
        raise ValueError(f"{key} must be an integer >= {lo}, got {v!r}")
    return int(v)


def _need_prob(params, key):
    if key not in params:
        raise ValueError(f"missing parameter {key!r}")
    v = float(params[key])
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{key} out of range [0, 1]: {v!r}")
    return v


def make_named_state(name: str, params: dict | None = None):
    """Build a member of a named state family.

    Families: ``bell``, ``ghz`` (n), ``w`` (n), ``werner`` (p, d),
    ``isotropic`` (F, d), ``maximally_mixed`` (d), ``flower`` (d),
    ``product`` (factors, or n/d/seed for random pure factors),
    ``classically_correlated`` (d). ``flower`` returns a :class:`PureState`;
    everything else a :class:`QuantumState`.
    """
    params = dict(params or {})
    if name == "bell":
        v = (_ket(4, 0) + _ket(4, 3)) / np.sqrt(2)
        return QuantumState(_proj(v), (2, 2), ("A", "B"))
    if name in ("ghz", "w"):
        n = _need_int({"n": 3, **params}, "n", lo=2)
        d = 2**n
        if name == "ghz":
            v = (_ket(d, 0) + _ket(d, d - 1)) / np.sqrt(2)
        else:
            v = sum(_ket(d, 1 << k) for k in range(n)) / np.sqrt(n)
        return QuantumState(_proj(v), (2,) * n, default_labels(n))
    if name == "werner":
        p = _need_prob(params, "p")
        d = _need_int({"d": 2, **params}, "d", lo=2)
        swap = np.zeros((d * d, d * d))
        for i in range(d):
            for j in range(d):
                swap[i * d + j, j * d + i] = 1.0
        anti = (np.eye(d * d) - swap) / 2
        m = p * anti / np.trace(anti) + (1 - p) * np.eye(d * d) / d**2
        return QuantumState(m, (d, d), ("A", "B"))
    if name == "isotropic":
        f = _need_prob(params, "F")
        d = _need_int({"d": 2, **params}, "d", lo=2)
        phi = sum(_ket(d * d, i * d + i) for i in range(d)) / np.sqrt(d)
        pp = _proj(phi)
        m = f * pp + (1 - f) * (np.eye(d * d) - pp) / (d * d - 1)
        return QuantumState(m, (d, d), ("A", "B"))
    if name == "maximally_mixed":
        d = _need_int(params, "d")
        return QuantumState(np.eye(d) / d, (d,), ("A",))
    if name == "flower":
        d = _need_int(params, "d", lo=2)
        return PureState(flower_vector(d), (d, 2, d, 2, d), ("A1", "A2", "B1", "B2", "C"))
    if name == "classically_correlated":
        d = _need_int({"d": 2, **params}, "d", lo=2)
        m = sum(_proj(_ket(d * d, i * d + i)) for i in range(d)) / d
        return QuantumState(m, (d, d), ("A", "B"))
    if name == "product":
        return _product_state(params)
    raise ValueError(f"unknown state family {name!r}")


def _product_state(params):
    if "factors" in params:
        mats = []
        for f in params["factors"]:
            if isinstance(f, QuantumState):
                mats.append(f.matrix)
                continue
            f = np.asarray(f, dtype=complex)
            mats.append(_proj(f / np.linalg.norm(f)) if f.ndim == 1 else f)
    else:
        n = _need_int({"n": 2, **params}, "n")
        d = _need_int({"d": 2, **params}, "d")
        rng = np.random.default_rng(params.get("seed", 0))
        mats = [_proj(random_pure_vector(d, rng)) for _ in range(n)]
    m = mats[0]
    for x in mats[1:]:
        m = np.kron(m, x)
    dims = tuple(x.shape[0] for x in mats)
    return QuantumState(m, dims, default_labels(len(dims)))


def random_separable(dims=(2, 2), members: int = 6, seed=None, labels=("A", "B")):
    """Random mixture of product pure states; returns ``(state, ensemble)``."""
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(members))
    mats = []
    for _ in range(members):
        m = _proj(random_pure_vector(dims[0], rng))
        for d in dims[1:]:
            m = np.kron(m, _proj(random_pure_vector(d, rng)))
        mats.append(m)
    ens = Ensemble(tuple(p), tuple(QuantumState(m, tuple(dims), tuple(labels)) for m in mats))
    return ens.average(), ens


def local_unitary(s: QuantumState, unitaries: dict[str, np.ndarray]) -> QuantumState:
    """Conjugate ``s`` by a product of single-subsystem unitaries."""
    u = np.array([[1.0 + 0j]])
    for lab, d in zip(s.labels, s.dims):
        u = np.kron(u, unitaries.get(lab, np.eye(d)))
    return QuantumState(u @ s.matrix @ u.conj().T, s.dims, s.labels)


# -- isometry parameterization --------------------------------------------------


def polar_isometry(params: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Map ``2*rows*cols`` reals to the isometry nearest ``M = X + iY``.

    ``V = U W^dag`` from the thin SVD ``M = U S W^dag``; surjective, smooth
    wherever ``M`` has full column rank, and ``params_from_isometry(V)`` is
    an exact inverse on isometries.
    """
    p = np.asarray(params, dtype=float)
    m = (p[: rows * cols] + 1j * p[rows * cols :]).reshape(rows, cols)
    u, _, vh = np.linalg.svd(m, full_matrices=False)
    return u @ vh


def params_from_isometry(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real.reshape(-1), v.imag.reshape(-1)])
