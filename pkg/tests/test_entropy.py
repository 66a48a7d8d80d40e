import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import binary_entropy as h2
from conftest import rand_state, seeds
from condent.entropy import (
    EntropyOracle,
    binary_entropy,
    conditional_entropy,
    conditional_mutual_information,
    continuity_bound,
    continuity_bound_CI,
    entropy_report,
    holevo_quantity,
    marginal_ensemble,
    multipartite_I_n,
    multipartite_S_n,
    mutual_information,
    von_neumann_entropy,
)
from condent.states import Ensemble, QuantumState, make_named_state, partial_trace, purify, random_state


def test_entropy_examples(bell):
    assert von_neumann_entropy(bell) == pytest.approx(0.0, abs=1e-10)
    assert von_neumann_entropy(make_named_state("maximally_mixed", {"d": 4})) == pytest.approx(2.0)
    assert von_neumann_entropy(partial_trace(bell, "A")) == pytest.approx(1.0)
    rep = entropy_report(bell)
    assert rep.value == pytest.approx(0.0, abs=1e-10) and sum(x > 0 for x in rep.spectrum) == 1


@given(st.floats(0.0, 1.0))
def test_binary_entropy_matches_diag(p):
    s = QuantumState(np.diag([p, 1 - p]), (2,), ("A",))
    assert von_neumann_entropy(s) == pytest.approx(h2(p), abs=1e-9)
    assert binary_entropy(p) == pytest.approx(h2(p), abs=1e-12)


def test_binary_entropy_domain():
    with pytest.raises(ValueError):
        binary_entropy(1.5)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), seeds)
def test_entropy_bounds(dims, seed):
    s = rand_state(dims, seed, tuple(f"X{i}" for i in range(len(dims))))
    v = von_neumann_entropy(s)
    assert -1e-10 <= v <= np.log2(s.dim) + 1e-10


def test_mutual_information_examples(bell):
    assert mutual_information(bell, "A", "B") == pytest.approx(2.0)
    cc = make_named_state("classically_correlated", {"d": 2})
    assert mutual_information(cc, "A", "B") == pytest.approx(1.0)
    prod = make_named_state("product", {"n": 2, "seed": 1})
    assert mutual_information(prod, "A", "B") == pytest.approx(0.0, abs=1e-10)
    assert conditional_entropy(bell, "A", "B") == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        mutual_information(bell, "A", "A")


@given(seeds)
def test_cmi_nonnegative_and_bounded(seed):
    s = rand_state((2, 2, 2), seed, ("A", "B", "E"))
    v = conditional_mutual_information(s, "A", "B", "E")
    assert -1e-9 <= v <= 2 * np.log2(2) + 1e-9


def test_cmi_markov_zero():
    # A - E - B classical Markov chain: copies of a classical E
    d = np.zeros(8)
    d[0] = d[7] = 0.5
    s = QuantumState(np.diag(d), (2, 2, 2), ("A", "B", "E"))
    assert conditional_mutual_information(s, "A", "B", "E") == pytest.approx(0.0, abs=1e-10)


@given(seeds)
def test_pure_state_entropy_symmetry(seed):
    s = random_state((2, 3), None, seed, ("A", "B"))
    p = purify(s).projector()
    assert von_neumann_entropy(partial_trace(p, ("A", "B"))) == pytest.approx(
        von_neumann_entropy(partial_trace(p, "C")), abs=1e-9
    )


@given(seeds)
def test_oracle_matches_direct(seed):
    s = rand_state((2, 2, 2), seed, ("A", "B", "C"))
    ent = EntropyOracle.of(s)
    assert ent(("A", "B")) == pytest.approx(von_neumann_entropy(partial_trace(s, ("A", "B"))), abs=1e-10)
    assert ent(()) == 0.0
    p = purify(rand_state((2, 2), seed, ("A", "B")), "E")
    pe = EntropyOracle.of(p)
    assert pe(("A",)) == pytest.approx(pe(("B", "E")), abs=1e-9)


def test_multipartite_examples():
    ghz = make_named_state("ghz", {"n": 3})
    g = [("A",), ("B",), ("C",)]
    assert multipartite_I_n(ghz, g) == pytest.approx(3.0)
    assert multipartite_S_n(ghz, g) == pytest.approx(3.0)
    bell = make_named_state("bell")
    assert multipartite_I_n(bell, [("A",), ("B",)]) == pytest.approx(mutual_information(bell, "A", "B"))
    assert multipartite_S_n(bell, [("A",), ("B",)]) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        multipartite_I_n(bell, [("A",)])


@given(seeds)
def test_multipartite_bipartite_reduction(seed):
    s = rand_state((2, 2), seed, ("A", "B"))
    mi = mutual_information(s, "A", "B")
    assert multipartite_I_n(s, [("A",), ("B",)]) == pytest.approx(mi, abs=1e-10)
    assert multipartite_S_n(s, [("A",), ("B",)]) == pytest.approx(mi, abs=1e-10)


@given(seeds)
def test_multipartite_nonnegative(seed):
    s = rand_state((2, 2, 2), seed, ("A", "B", "C"))
    g = [("A",), ("B",), ("C",)]
    assert multipartite_I_n(s, g) >= -1e-9
    assert multipartite_S_n(s, g) >= -1e-9


def test_holevo():
    z0 = QuantumState(np.diag([1.0, 0.0]), (2,), ("A",))
    z1 = QuantumState(np.diag([0.0, 1.0]), (2,), ("A",))
    assert holevo_quantity(Ensemble((0.5, 0.5), (z0, z1))) == pytest.approx(1.0)
    assert holevo_quantity(Ensemble((0.5, 0.5), (z0, z0))) == pytest.approx(0.0, abs=1e-12)
    bell = make_named_state("bell")
    m = marginal_ensemble(Ensemble((1.0,), (bell,)), "A")
    assert m.states[0].dims == (2,)


def test_continuity_bounds():
    assert continuity_bound(0.0, 4) == 0.0
    assert continuity_bound(0.1, 2) == pytest.approx(0.4 + 2 * h2(0.1))
    assert continuity_bound_CI(0.0, 4) == 0.0
    assert continuity_bound_CI(0.3, 4) == pytest.approx(16 * np.sqrt(0.3) * 2 + 6)
    with pytest.raises(ValueError):
        continuity_bound(-0.1, 2)


@given(seeds, st.floats(0.0, 0.1))
def test_conditional_entropy_continuity(seed, t):
    a = rand_state((2, 2), seed, ("A", "B"))
    b = rand_state((2, 2), seed + 3, ("A", "B"))
    c = QuantumState((1 - t) * a.matrix + t * b.matrix, a.dims, a.labels)
    eps = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(a.matrix - c.matrix)))
    diff = abs(conditional_entropy(a, "A", "B") - conditional_entropy(c, "A", "B"))
    assert diff <= continuity_bound(eps, 2) + 1e-9
