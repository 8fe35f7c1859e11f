import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from instances import random_instances
from ontodp.errors import RuleError
from ontodp.graph import Graph, Triple
from ontodp.rules import Atom, RuleSet
from ontodp.sensitivity import (
    CountQuery,
    classical_report,
    classical_sensitivity,
    enumerate_space,
    evaluate,
    global_sensitivity,
    onto_report,
    onto_sensitivity,
    perceived_report,
    perceived_sensitivity,
    sensitivity_report,
)
from ontodp.spaces import SpaceConfig, attacker_union

INSTANCES = random_instances(40, start=300)
QUERIES = [
    CountQuery((Atom("r", "?x", "?y"),), "?x"),
    CountQuery((Atom("p", "?x", "?y"),), "?y"),
    CountQuery((Atom("p", "?x", "?y"), Atom("q", "?x", "?z")), "?x"),
]


def test_query_validation():
    with pytest.raises(RuleError):
        CountQuery((), "?x")
    with pytest.raises(RuleError):
        CountQuery((Atom("p", "?x", "a"),), "?y")
    with pytest.raises(RuleError):
        CountQuery((Atom("p", "?x", "a"),), "x")


def test_evaluate_hospital(hospital):
    assert evaluate(hospital.query, hospital.antecedent) == 0
    assert evaluate(hospital.query, hospital.true_db) == 1
    assert evaluate(hospital.query, hospital.plausible) == 3


def test_evaluate_counts_distinct():
    q = CountQuery((Atom("p", "?x", "?y"),), "?x")
    g = Graph([Triple("a", "p", "b"), Triple("a", "p", "c"), Triple("b", "p", "c")])
    assert evaluate(q, g) == 2
    assert evaluate(q, Graph()) == 0


NODES = ["a", "b", "c"]
small = st.frozensets(st.builds(Triple, st.sampled_from(NODES), st.sampled_from(["p", "q"]), st.sampled_from(NODES)), max_size=6)


@given(g=small, extra=small)
def test_evaluate_monotone(g, extra):
    for q in QUERIES[1:]:
        assert evaluate(q, Graph(g)) <= evaluate(q, Graph(g | extra))


def test_hospital_classical_is_zero(hospital):
    r = classical_report(hospital.query, hospital.true_db, hospital.space())
    assert r.value == 0
    assert r.empty_neighborhood and r.witness is None


def test_hospital_perceived_is_two(hospital):
    # Frozen from the brute-force oracle in tests/oracles.py.
    assert oracles.hospital_perceived_sensitivity() == 2
    r = perceived_report(hospital.query, hospital.true_db, hospital.space())
    assert r.value == 2
    lo, hi = r.witness
    assert {lo, hi} <= attacker_union(hospital.true_db, hospital.space())
    assert evaluate(hospital.query, hi) - evaluate(hospital.query, lo) == 2


def test_hospital_onto(hospital):
    r = onto_report(hospital.query, hospital.true_db, hospital.space())
    assert r.value == 2
    assert not r.empty_neighborhood
    assert abs(evaluate(hospital.query, r.witness[1]) - evaluate(hospital.query, r.witness[0])) == r.value


def test_hospital_unrestricted_classical(hospital):
    # The counted edges are immutable, so no single swap moves the count even without membership.
    cfg = hospital.space(restrict_to_valid=False)
    r = classical_report(hospital.query, hospital.true_db, cfg)
    assert r.value == 0 and r.neighborhood_size > 0


def test_constant_query_has_zero_sensitivity(hospital):
    q = CountQuery((Atom("hasType", "?x", "doctor"),), "?x")
    for sem in ("classical", "onto", "perceived"):
        assert sensitivity_report(q, hospital.true_db, hospital.space(), sem).value == 0


def test_unknown_semantics(hospital):
    with pytest.raises(ValueError):
        sensitivity_report(hospital.query, hospital.true_db, hospital.space(), "global")


def test_report_serialization(hospital):
    r = perceived_report(hospital.query, hospital.true_db, hospital.space())
    assert "witness" not in r.to_dict()
    d = r.to_dict(verbose=True)
    assert d["sensitivity"] == 2 and len(d["witness"]) == 2
    assert "P1 patientIn Oncology" in d["witness"][1]


def test_hospital_global_values(hospital):
    cfg = hospital.space()
    base = Graph(t for t in hospital.true_db if t.predicate == "hasType")
    from ontodp.rules import saturate

    reachable = {saturate(g, cfg.rules) for g in enumerate_space(base, cfg.universe(base), SpaceConfig(cfg.schema))}
    space = {g for g in reachable if cfg.admits(g)}
    expected = {Graph(g) for g in oracles.hospital_global_space()}
    assert space == expected and len(space) == 32
    assert global_sensitivity(hospital.query, space, cfg, "classical") == 0
    assert global_sensitivity(hospital.query, space, cfg, "onto") == 3


@pytest.mark.parametrize("inst", INSTANCES, ids=lambda i: f"seed{i.seed}")
def test_random_relations(inst):
    d, cfg = inst.d, inst.cfg
    plain = inst.without_rules()
    for q in QUERIES:
        onto = onto_sensitivity(q, d, cfg)
        perceived = perceived_sensitivity(q, d, cfg)
        if cfg.restrict_to_valid:
            assert classical_sensitivity(q, d, cfg) <= onto
        # Every graph in an attack space is d or an onto neighbor, so no gap exceeds twice onto.
        assert perceived <= 2 * onto
        base = evaluate(q, d)
        for g in attacker_union(d, cfg):
            assert abs(evaluate(q, g) - base) <= onto
        assert classical_sensitivity(q, plain.d, plain.cfg) == onto_sensitivity(q, plain.d, plain.cfg)


def test_no_rules_semantics_agree(hospital):
    cfg = SpaceConfig(hospital.schema, RuleSet(), restrict_to_valid=False)
    q = CountQuery((Atom("worksIn", "?x", "Oncology"),), "?x")
    assert classical_sensitivity(q, hospital.antecedent, cfg) == onto_sensitivity(q, hospital.antecedent, cfg) == 1
