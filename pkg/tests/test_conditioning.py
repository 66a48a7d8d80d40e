import numpy as np
import pytest
from hypothesis import given, settings

from conftest import rand_state, seeds
from condent.conditioning import (
    C_I,
    C_I_MULTI,
    C_S_MULTI,
    E_SQ_Q,
    ConditionedMeasure,
    Extension,
    ExtensionAnsatz,
    build_extension,
    c_I,
    check_extension,
    conditional_entanglement,
    conditioned_objective,
    default_schedule,
    e_sq_q_bound,
    explicit_certificate,
    extension_from_certificate,
    flag_extension,
    flag_value,
    member_roof,
    multipartite_conditioned,
    spectral_ensemble,
    symmetric_to_asymmetric,
    trivial_extension,
)
from condent.entropy import conditional_mutual_information, multipartite_I_n, mutual_information
from condent.exact_measures import log_negativity
from condent.optimize import OptimizerOptions
from condent.states import (
    Ensemble,
    LabelError,
    QuantumState,
    make_named_state,
    random_isometry,
    random_separable,
    random_state,
    tensor,
)

TINY = OptimizerOptions(restarts=2, iterations=200)
AB = (("A",), ("B",))


def random_ensemble(dims, labels, k, seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(k))
    states = tuple(random_state(dims, None, seed + i, labels) for i in range(k))
    return Ensemble(tuple(p), states)


def test_measure_validation():
    with pytest.raises(ValueError):
        ConditionedMeasure("nope")
    with pytest.raises(ValueError):
        ConditionedMeasure("I_n", "asymmetric")
    with pytest.raises(ValueError):
        ConditionedMeasure("I", "symmetric", 0.0)
    with pytest.raises(ValueError):
        ExtensionAnsatz("weird", (2,))


@given(seeds)
def test_trivial_extension_gives_half_mi(seed):
    s = rand_state((2, 2), seed, ("A", "B"))
    half = 0.5 * mutual_information(s, "A", "B")
    assert conditioned_objective(trivial_extension(s, AB, "symmetric"), C_I) == pytest.approx(half, abs=1e-10)
    assert conditioned_objective(trivial_extension(s, AB, "asymmetric"), E_SQ_Q) == pytest.approx(half, abs=1e-10)


@given(seeds)
def test_flag_formula_symmetric_I(seed):
    ens = random_ensemble((2, 2), ("A", "B"), 3, seed)
    ext = flag_extension(ens, AB)
    direct = conditioned_objective(ext, C_I)
    assert direct == pytest.approx(flag_value(ens, C_I, AB), abs=1e-9)
    assert direct == pytest.approx(sum(p * 0.5 * mutual_information(st, "A", "B") for p, st in ens), abs=1e-9)


@given(seeds)
def test_flag_formula_asymmetric_I(seed):
    ens = random_ensemble((2, 2), ("A", "B"), 3, seed)
    ext = flag_extension(ens, AB, symmetric=False)
    assert ext.mode == "asymmetric"
    assert conditioned_objective(ext, E_SQ_Q) == pytest.approx(flag_value(ens, E_SQ_Q, AB), abs=1e-9)


@settings(max_examples=10)
@given(seeds)
def test_flag_formula_multipartite(seed):
    labels = ("A", "B", "C")
    ens = random_ensemble((2, 2, 2), labels, 2, seed)
    parties = (("A",), ("B",), ("C",))
    ext = flag_extension(ens, parties)
    for cm in (C_I_MULTI, C_S_MULTI):
        assert conditioned_objective(ext, cm) == pytest.approx(flag_value(ens, cm, parties), abs=1e-9)


def test_flag_formula_fails_for_log_negativity():
    # the flagged log-negativity is log of an average, not an average of logs
    bell = make_named_state("bell")
    prod = make_named_state("product", {"n": 2, "seed": 0})
    ens = Ensemble((0.5, 0.5), (bell, prod))
    cm = ConditionedMeasure("log_negativity", "symmetric", 1.0)
    direct = conditioned_objective(flag_extension(ens, AB), cm)
    naive = 0.5 * log_negativity(bell, "A") + 0.5 * log_negativity(prod, "A")
    assert direct == pytest.approx(np.log2(1.5))
    assert abs(direct - naive) > 0.05
    with pytest.raises(ValueError):
        flag_value(ens, cm, AB)


@given(seeds)
def test_symmetric_to_asymmetric_does_not_increase(seed):
    ens = random_ensemble((2, 2), ("A", "B"), 2, seed)
    sym = build_extension(ens.average(), ExtensionAnsatz("symmetric", (2, 2), 4, np.random.default_rng(seed).standard_normal(2 * 16 * 4)), AB)
    ext = Extension(sym, AB, (("A'",), ("B'",)), "symmetric")
    asym = symmetric_to_asymmetric(ext)
    assert conditioned_objective(asym, E_SQ_Q) <= conditioned_objective(ext, C_I) + 1e-9
    cmi = conditional_mutual_information(sym, "A", "B", ("A'", "B'"))
    assert conditioned_objective(asym, E_SQ_Q) == pytest.approx(0.5 * cmi, abs=1e-9)


def test_check_extension_rejects_wrong_marginal():
    s = rand_state((2, 2), 1, ("A", "B"))
    other = rand_state((2, 2), 2, ("A", "B"))
    ext = trivial_extension(other, AB, "symmetric")
    with pytest.raises(RuntimeError):
        check_extension(ext.state, s)
    assert check_extension(trivial_extension(s, AB, "symmetric").state, s) == 0.0


def test_build_extension_rejects_small_output():
    s = random_state((2, 2), 4, 1, ("A", "B"))
    ans = ExtensionAnsatz("symmetric", (1, 1), 2, np.zeros(2 * 2 * 4))
    with pytest.raises(ValueError):
        build_extension(s, ans, AB)


def test_default_schedule_shapes():
    a = default_schedule("asymmetric", 4)
    assert [(x.out_dims, x.env_extra) for x in a] == [((2,), 4), ((4,), 4)]
    s = default_schedule("symmetric", 2)
    assert [(x.out_dims, x.env_extra) for x in s] == [((2, 2), 2)]
    s4 = default_schedule("symmetric", 16)
    assert s4[0].env_extra == 4 and s4[1].out_dims == (16, 16)
    m = default_schedule("multipartite", 2, 3)
    assert m[0].out_dims == (2, 2, 2)
    for ans in a + s + s4 + m:
        assert ans.rows >= 2


@given(seeds)
def test_certificate_roundtrip(seed):
    s = random_state((2, 2), 2, seed, ("A", "B"))
    rng = np.random.default_rng(seed)
    ans = ExtensionAnsatz("symmetric", (2, 2), 2)
    st = build_extension(s, ans.with_params(rng.standard_normal(ans.n_params(2))), AB)
    ext = Extension(st, AB, (("A'",), ("B'",)), "symmetric")
    back = extension_from_certificate(s, AB, explicit_certificate(ext))
    assert np.allclose(back.state.matrix, ext.state.matrix)
    assert conditioned_objective(back, C_I) == pytest.approx(conditioned_objective(ext, C_I))


def test_bell_c_I():
    res = c_I(make_named_state("bell"), "A:B", TINY)
    assert res.value == pytest.approx(1.0, abs=1e-9)
    res = e_sq_q_bound(make_named_state("bell"), "A:B", TINY)
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_classically_correlated_is_zero():
    s = make_named_state("classically_correlated", {"d": 3})
    for fn in (c_I, e_sq_q_bound):
        res = fn(s, "A:B", TINY)
        assert res.value < 1e-10 and res.converged and res.restarts_used == 0


def test_separable_with_seed_ensemble_is_zero():
    s, ens = random_separable(seed=8)
    res = c_I(s, "A:B", TINY, seed_ensembles=[ens])
    assert res.value < 1e-10 and res.converged


def test_trivial_only_and_upper_bound():
    s = random_state((2, 2), 2, 3, ("A", "B"))
    half = 0.5 * mutual_information(s, "A", "B")
    t = c_I(s, "A:B", TINY, trivial_only=True)
    assert t.value == pytest.approx(half) and t.certificate["kind"] == "trivial"
    r = c_I(s, "A:B", TINY)
    assert -1e-12 <= r.value <= half + 1e-12
    ext = extension_from_certificate(s, AB, r.certificate)
    assert conditioned_objective(ext, C_I) == pytest.approx(r.value, abs=1e-9)


def test_roof_flag_certifies_roof_value():
    s = random_state((2, 2), 2, 21, ("A", "B"))
    roof = member_roof(s, C_I, AB, TINY)
    res = c_I(s, "A:B", TINY, roof=roof)
    assert res.value <= roof.value + 1e-12
    assert res.info["roof_value"] == roof.value


def test_spectral_ensemble_average():
    s = rand_state((2, 3), 4, ("A", "B"))
    ens = spectral_ensemble(s)
    assert np.allclose(ens.average().matrix, s.matrix, atol=1e-10)


def test_labels_must_match():
    s = rand_state((2, 2, 2), 1, ("A", "B", "C"))
    with pytest.raises(LabelError):
        c_I(s, "A:D", TINY)


def test_marginal_is_used():
    s = tensor(make_named_state("bell"), make_named_state("maximally_mixed", {"d": 2}).relabel({"A": "C"}))
    res = c_I(s, "A:B", TINY)
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_multipartite_ghz_trivial():
    ghz = make_named_state("ghz", {"n": 3})
    res = multipartite_conditioned(ghz, "A:B:C", "I_n", TINY, trivial_only=True)
    assert res.value == pytest.approx(multipartite_I_n(ghz, [("A",), ("B",), ("C",)]))
    half = multipartite_conditioned(ghz, "A:B:C", "I_n", TINY, factor=0.5, trivial_only=True)
    assert half.value == pytest.approx(0.5 * res.value)
    with pytest.raises(ValueError):
        multipartite_conditioned(ghz, "A:B:C", "S_m", TINY)


def test_conditional_log_negativity_bell():
    res = conditional_entanglement(make_named_state("bell"), "A:B", "log_negativity", TINY)
    assert res.value == pytest.approx(1.0, abs=1e-6)


def test_local_isometry_extension_invariance():
    # a local isometry on the ancilla A' leaves the conditioned objective unchanged
    ens = random_ensemble((2, 2), ("A", "B"), 2, 5)
    ext = flag_extension(ens, AB)
    v = random_isometry(3, 2, 1)
    big = np.kron(np.kron(np.eye(4), v), np.eye(2))
    st = QuantumState(big @ ext.state.matrix @ big.conj().T, (2, 2, 3, 2), ext.state.labels)
    moved = Extension(st, AB, ext.ancillas, "symmetric")
    assert conditioned_objective(moved, C_I) == pytest.approx(conditioned_objective(ext, C_I), abs=1e-9)


@given(seeds)
def test_local_unitary_invariance_of_objective(seed):
    from condent.states import local_unitary, random_unitary

    s = random_state((2, 2), 2, seed, ("A", "B"))
    rng = np.random.default_rng(seed)
    ans = ExtensionAnsatz("symmetric", (2, 2), 2)
    st = build_extension(s, ans.with_params(rng.standard_normal(ans.n_params(2))), AB)
    ext = Extension(st, AB, (("A'",), ("B'",)), "symmetric")
    us = {"A": random_unitary(2, seed), "B": random_unitary(2, seed + 1)}
    moved = Extension(local_unitary(st, us), AB, ext.ancillas, "symmetric")
    check_extension(moved.state, local_unitary(s, us))
    assert conditioned_objective(moved, C_I) == pytest.approx(conditioned_objective(ext, C_I), abs=1e-9)


@given(seeds)
def test_chain_rule_lower_bound_on_extensions(seed):
    s = random_state((2, 2), 3, seed, ("A", "B"))
    rng = np.random.default_rng(seed)
    ans = ExtensionAnsatz("symmetric", (2, 2), 2)
    st = build_extension(s, ans.with_params(rng.standard_normal(ans.n_params(3))), AB)
    ext = Extension(st, AB, (("A'",), ("B'",)), "symmetric")
    cmi = conditional_mutual_information(st, "A", "B", ("A'", "B'"))
    assert conditioned_objective(ext, C_I) >= 0.5 * cmi - 1e-9


def test_multipartite_two_parties_matches_c_I():
    bell = make_named_state("bell")
    m = multipartite_conditioned(bell, "A:B", "I_n", TINY, factor=0.5)
    assert m.value == pytest.approx(c_I(bell, "A:B", TINY).value, abs=5e-3)


def test_multipartite_product_is_zero():
    prod = make_named_state("product", {"n": 3, "seed": 4})
    for which in ("I_n", "S_n"):
        assert multipartite_conditioned(prod, "A:B:C", which, TINY).value <= 5e-3
