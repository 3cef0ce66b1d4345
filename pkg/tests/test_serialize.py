import pytest

from causal_forge.cnf import CnfFormula
from causal_forge.errors import FormatError, MalformedOperatorError
from causal_forge.gadgets import chain_instance, gadget_in_star
from causal_forge.graphs import Digraph, make_fence, make_in_star
from causal_forge.planning import Operator, PartialState, Plan, PlanningInstance, Variable
from causal_forge.serialize import (
    graph_from_edge_list,
    graph_to_dot,
    graph_to_edge_list,
    instance_from_json,
    instance_to_json,
    plan_from_text,
    plan_to_text,
)

from conftest import random_instance


class TestInstanceJson:
    def test_roundtrip(self, rng):
        for _ in range(20):
            inst = random_instance(rng, max_vars=5)
            text = instance_to_json(inst)
            back = instance_from_json(text)
            assert instance_to_json(back) == text
            assert back.init == inst.init and back.goal == inst.goal
            assert {a.name for a in back.operators} == {a.name for a in inst.operators}

    def test_canonical_ordering(self):
        inst = gadget_in_star(CnfFormula(2, [(1, -2, 1)]))
        text = instance_to_json(inst)
        lines = [l.strip() for l in text.splitlines() if '"name"' in l]
        names = [l.split(":")[1].strip(' ",') for l in lines]
        assert names == sorted(names)

    def test_emission_is_deterministic(self):
        inst = chain_instance(3)
        assert instance_to_json(inst) == instance_to_json(chain_instance(3))

    def test_dummy_operator_not_serialized(self):
        inst = PlanningInstance(
            (Variable("x", ("0", "1")),),
            PartialState({"x": "0"}),
            PartialState({}),
            (Operator("dum", {}, {}, dummy=True),),
        )
        with pytest.raises(MalformedOperatorError):
            instance_to_json(inst)

    def test_bad_json(self):
        with pytest.raises(FormatError):
            instance_from_json("{")
        with pytest.raises(FormatError):
            instance_from_json('{"variables": []}')


class TestPlanText:
    def test_roundtrip(self):
        plan = Plan.of("a", "b", "c")
        assert plan_from_text(plan_to_text(plan)) == plan

    def test_blank_lines_skipped(self):
        assert plan_from_text("a\n\n  \nb\n") == Plan.of("a", "b")

    def test_empty(self):
        assert plan_to_text(Plan()) == ""
        assert plan_from_text("") == Plan()


class TestEdgeList:
    def test_roundtrip_with_isolated_vertices(self):
        g = Digraph(frozenset(["a", "b", "lonely"]), frozenset([("a", "b")]))
        text = graph_to_edge_list(g)
        assert graph_from_edge_list(text) == g
        assert "lonely\n" in text

    def test_comments(self):
        g = graph_from_edge_list("# a header\nu v  # trailing\nw\n")
        assert g.edges == {("u", "v")} and "w" in g.vertices

    def test_bad_line(self):
        with pytest.raises(FormatError) as err:
            graph_from_edge_list("a b c\n")
        assert "line 1" in str(err.value)

    def test_self_loop(self):
        with pytest.raises(FormatError):
            graph_from_edge_list("a a\n")

    def test_canonical_order(self):
        g = make_fence(2, 1)
        text = graph_to_edge_list(g)
        assert text == graph_to_edge_list(make_fence(2, 1))
        assert text.splitlines() == sorted(text.splitlines())


class TestDot:
    def test_contains_all_elements(self):
        g = Digraph(frozenset(["a", "b", "iso"]), frozenset([("a", "b")]))
        dot = graph_to_dot(g)
        assert '"a" -> "b";' in dot and '"iso";' in dot
        assert dot.startswith("digraph G {")

    def test_quoting(self):
        g = Digraph(frozenset(['we"ird']), frozenset())
        assert '\\"' in graph_to_dot(g)

    def test_star_shape(self):
        dot = graph_to_dot(make_in_star(2))
        assert dot.count("->") == 2
