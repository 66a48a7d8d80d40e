import numpy as np
import pytest

from condent.optimize import (
    OptimizationResult,
    OptimizerOptions,
    bound_candidate,
    merge_results,
    multistart_minimize,
)


def quad(x):
    return float(np.sum((x - 1.0) ** 2))


def test_options_validation():
    with pytest.raises(ValueError):
        OptimizerOptions(restarts=0)
    with pytest.raises(ValueError):
        OptimizerOptions(iterations=5)
    o = OptimizerOptions()
    assert o.scaled(restarts=3).restarts == 3
    assert o.derive(1).seed == o.derive(1).seed != o.derive(2).seed


def test_quadratic_minimum():
    res = multistart_minimize(quad, 3, OptimizerOptions(restarts=3, iterations=2000))
    assert res.value < 1e-6
    assert res.converged
    assert res.certificate["kind"] == "params"
    assert np.allclose(res.certificate["params"], 1.0, atol=1e-2)
    assert all(b <= a for a, b in zip(res.trace, res.trace[1:]))


def test_candidate_wins_ties():
    res = multistart_minimize(lambda x: 5.0, 2, OptimizerOptions(restarts=2, iterations=20),
                              candidates=[(5.0, {"kind": "trivial"})])
    assert res.certificate == {"kind": "trivial"}
    assert res.value == 5.0


def test_candidate_is_upper_bound():
    res = multistart_minimize(quad, 2, OptimizerOptions(restarts=1, iterations=10),
                              candidates=[(-1.0, {"kind": "given"})])
    assert res.value == -1.0


def test_lower_bound_early_exit():
    calls = []
    res = multistart_minimize(lambda x: calls.append(1) or 1.0, 2, OptimizerOptions(),
                              candidates=[(1e-12, {"kind": "flag"})], lower_bound=0.0)
    assert not calls
    assert res.converged and res.restarts_used == 0 and res.info["at_lower_bound"]
    assert bound_candidate([(0.5, {})], 0.0) is None
    assert bound_candidate([(0.0, {})], None) is None


def test_zero_parameters():
    res = multistart_minimize(lambda x: 3.0, 0, OptimizerOptions(restarts=4))
    assert res.value == 3.0 and res.restarts_used == 1


def test_thread_independence():
    f = lambda x: float(np.sum(np.cos(3 * x)) + 0.1 * np.sum(x ** 2))  # noqa: E731
    a = multistart_minimize(f, 3, OptimizerOptions(restarts=6, iterations=300, threads=1))
    b = multistart_minimize(f, 3, OptimizerOptions(restarts=6, iterations=300, threads=3))
    assert a.value == b.value and a.certificate == b.certificate and a.trace == b.trace


def test_merge_results():
    r1 = OptimizationResult(1.0, {"a": 1}, [2.0, 1.0], False, 2)
    r2 = OptimizationResult(0.5, {"b": 1}, [0.7, 0.5], False, 3)
    m = merge_results([r1, r2])
    assert m.value == 0.5 and m.certificate == {"b": 1} and m.restarts_used == 5
    assert m.trace == [2.0, 1.0, 0.7, 0.5]
    with pytest.raises(ValueError):
        merge_results([])
    assert "certificate" in m.to_json()
