import numpy as np
import pytest
from hypothesis import given, settings

from conftest import eof_oracle, rand_state, seeds
from condent.entropy import mutual_information, von_neumann_entropy
from condent.exact_measures import (
    EntanglementEntropy,
    HalfMutualInformation,
    MeasureSpec,
    c_squashed,
    convex_roof,
    ensemble_value,
    entanglement_of_formation,
    log_negativity,
    measure_value,
    ppt_check,
    roof_ensemble,
)
from condent.optimize import OptimizerOptions
from condent.states import (
    Partition,
    QuantumState,
    local_unitary,
    make_named_state,
    partial_trace,
    random_separable,
    random_state,
    random_unitary,
)

FAST = OptimizerOptions(restarts=4, iterations=1500)


def test_log_negativity_examples(bell):
    assert log_negativity(bell, "A") == pytest.approx(1.0)
    assert log_negativity(make_named_state("product", {"n": 2, "seed": 2}), "A") == pytest.approx(0.0, abs=1e-12)
    assert log_negativity(make_named_state("werner", {"p": 0.2}), "A") == pytest.approx(0.0, abs=1e-12)
    assert log_negativity(make_named_state("werner", {"p": 1.0}), "A") == pytest.approx(1.0)
    assert ppt_check(make_named_state("werner", {"p": 1 / 3}), "A")
    assert not ppt_check(bell, "A")


@given(seeds)
def test_log_negativity_nonnegative_and_lu_invariant(seed):
    s = rand_state((2, 3), seed, ("A", "B"))
    v = log_negativity(s, "A")
    assert v >= -1e-12
    u = local_unitary(s, {"A": random_unitary(2, seed), "B": random_unitary(3, seed + 1)})
    assert log_negativity(u, "A") == pytest.approx(v, abs=1e-9)


def test_functionals_on_pure_members(bell):
    ee = EntanglementEntropy(bell.dims, bell.labels, "A")
    hm = HalfMutualInformation(bell.dims, bell.labels, "A")
    assert ee(bell.matrix) == pytest.approx(1.0)
    assert hm(bell.matrix) == pytest.approx(1.0)
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert ee.pure_batch(v[None, :])[0] == pytest.approx(1.0)
    assert hm.pure_batch(v[None, :])[0] == pytest.approx(1.0)


def test_eof_pure_is_entanglement_entropy(bell):
    res = entanglement_of_formation(bell, "A", FAST)
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_eof_werner_oracle():
    for p in (0.5, 0.9):
        s = make_named_state("werner", {"p": p})
        res = entanglement_of_formation(s, "A", FAST)
        assert res.value == pytest.approx(eof_oracle(s.matrix), abs=5e-3)


def test_eof_rank2_oracle():
    s = random_state((2, 2), 2, 11, ("A", "B"))
    res = entanglement_of_formation(s, "A", FAST)
    assert res.value == pytest.approx(eof_oracle(s.matrix), abs=5e-3)
    assert res.value >= eof_oracle(s.matrix) - 1e-9


def test_eof_separable_at_zero():
    s, ens = random_separable(seed=3)
    res = entanglement_of_formation(s, "A", FAST, seed_ensembles=[ens])
    assert res.value < 1e-10 and res.converged and res.restarts_used == 0


def test_roof_certificate_reproduces_value():
    s = random_state((2, 2), 2, 5, ("A", "B"))
    f = EntanglementEntropy(s.dims, s.labels, "A")
    res = convex_roof(f, s, opts=FAST)
    ens = roof_ensemble(s, res.certificate)
    assert np.allclose(ens.average().matrix, s.matrix, atol=1e-9)
    assert ensemble_value(f, ens) == pytest.approx(res.value, abs=1e-9)


def test_roof_rejects_small_k():
    s = random_state((2, 2), 3, 5, ("A", "B"))
    with pytest.raises(ValueError):
        convex_roof(EntanglementEntropy(s.dims, s.labels, "A"), s, k=2)


@settings(max_examples=5)
@given(seeds)
def test_c_squashed_bounds(seed):
    s = random_state((2, 2), 2, seed, ("A", "B"))
    res = c_squashed(s, "A", OptimizerOptions(restarts=2, iterations=300))
    assert res.value <= 0.5 * mutual_information(s, "A", "B") + 1e-9
    assert res.value >= -1e-12


def test_measure_value_dispatch(bell):
    part = Partition.parse("A:B")
    assert measure_value(MeasureSpec("log_negativity", part), bell)[0] == pytest.approx(1.0)
    assert measure_value(MeasureSpec("mutual_information_half", part), bell)[0] == pytest.approx(1.0)
    assert measure_value(MeasureSpec("I_n", part), bell)[0] == pytest.approx(2.0)
    assert measure_value(MeasureSpec("S_n", part), bell)[0] == pytest.approx(2.0)
    v, res = measure_value(MeasureSpec("ent_of_formation", part), bell, FAST)
    assert v == pytest.approx(1.0) and res is not None
    with pytest.raises(ValueError):
        MeasureSpec("nope", part)


def test_eof_pure_marginal_entropy():
    s = random_state((2, 3), 1, 4, ("A", "B"))
    res = entanglement_of_formation(s, "A", FAST)
    assert res.value == pytest.approx(von_neumann_entropy(partial_trace(s, "A")), abs=1e-9)
