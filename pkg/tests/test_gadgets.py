import pytest

from causal_forge.cnf import CnfFormula, brute_force_sat
from causal_forge.errors import BadParameterError, UnusedVariableError
from causal_forge.gadgets import (
    chain_instance,
    gadget_fence,
    gadget_in_star,
    gadget_out_star,
)
from causal_forge.graphs import is_isomorphic, make_dpath, make_fence, make_in_star, make_out_star
from causal_forge.planning import arity_stats, causal_graph, is_solution
from causal_forge.solver import brute_force_plan, reachable_states

from conftest import random_formula

ONE_CLAUSE = CnfFormula(3, [(1, 2, -3)])
UNSAT = CnfFormula(1, [(1, 1, 1), (-1, -1, -1)])


class TestInStar:
    def test_shape_and_size(self):
        inst = gadget_in_star(ONE_CLAUSE)
        assert len(inst.variables) == 4
        assert len(inst.operators) == 9
        assert is_isomorphic(causal_graph(inst), make_in_star(3))

    def test_shortest_plan_length(self):
        result = brute_force_plan(gadget_in_star(ONE_CLAUSE))
        assert result.solvable and len(result.plan) == 2

    def test_unsat_is_unsolvable(self):
        assert brute_force_plan(gadget_in_star(UNSAT)).status == "unsolvable"

    def test_empty_formula(self):
        inst = gadget_in_star(CnfFormula(0, []))
        assert len(inst.variables) == 1
        assert brute_force_plan(inst).solvable

    def test_unused_variable_rejected(self):
        with pytest.raises(UnusedVariableError) as err:
            gadget_in_star(CnfFormula(3, [(1, 1, 1)]))
        assert err.value.indices == [2, 3]

    def test_arity(self):
        assert arity_stats(gadget_in_star(ONE_CLAUSE)).as_tuple() == (2, 1, 1)

    def test_commitment_is_permanent(self):
        # in no reachable state does a decided variable read u again after
        # both of its setters became inapplicable
        inst = gadget_in_star(CnfFormula(2, [(1, -2, 2)]))
        seen_decided = set()
        for state in reachable_states(inst):
            for name in ("v_1", "v_2"):
                if state[name] != "u":
                    seen_decided.add((name, state[name]))
        # every decided value is reachable and no operator undoes it
        assert seen_decided == {("v_1", "f"), ("v_1", "t"), ("v_2", "f"), ("v_2", "t")}
        for a in inst.operators:
            for name in ("v_1", "v_2"):
                assert a.post.get(name) != "u"


class TestOutStar:
    def test_shape(self):
        inst = gadget_out_star(ONE_CLAUSE)
        assert is_isomorphic(causal_graph(inst), make_out_star(1))
        inst2 = gadget_out_star(CnfFormula(2, [(1, 2, 2), (-1, -2, 1)]))
        assert is_isomorphic(causal_graph(inst2), make_out_star(2))

    def test_solvable_with_partial_walk(self):
        inst = gadget_out_star(ONE_CLAUSE)
        result = brute_force_plan(inst)
        assert result.solvable
        # stopping at level 1 of 3 suffices: one walker step plus the verify
        assert len(result.plan) == 2
        assert is_solution(inst, result.plan, strict=True)

    def test_unsat(self):
        assert brute_force_plan(gadget_out_star(UNSAT)).status == "unsolvable"

    def test_dummy_level_zero_value_is_inert(self):
        inst = gadget_out_star(ONE_CLAUSE)
        assert "t_0" in inst.variable("v_c").domain
        assert all("t_0" not in (a.post.get("v_c"),) for a in inst.operators)

    def test_no_clauses_rejected(self):
        with pytest.raises(BadParameterError):
            gadget_out_star(CnfFormula(2, []))

    def test_arity(self):
        assert arity_stats(gadget_out_star(ONE_CLAUSE)).as_tuple() == (1, 1, 1)


class TestFence:
    def test_shapes(self):
        two = CnfFormula(2, [(1, 2, -1), (-2, 1, 2)])
        for shape, c in (("+1", 1), ("0", 0), ("-1", -1)):
            inst = gadget_fence(two, shape=shape)
            assert is_isomorphic(causal_graph(inst), make_fence(2, c))

    def test_variable_and_domain_accounting(self):
        f = random_formula(__import__("random").Random(3), 3, 2, occurring=True)
        inst = gadget_fence(f, shape="+1", variant="base3")
        n, m = f.num_vars, f.num_clauses
        assert len(inst.variables) == 2 * m + 1
        for j in range(0, m + 1):
            assert len(inst.variable(f"u_{j}").domain) == 2 * (n + 1)
        for j in range(1, m + 1):
            assert len(inst.variable(f"v_{j}").domain) == 4 * (n + 1) + 1

    def test_arity_by_variant(self):
        two = CnfFormula(2, [(1, 2, -1), (-2, 1, 2)])
        assert arity_stats(gadget_fence(two, variant="base3")).as_tuple() == (3, 1, 2)
        assert arity_stats(gadget_fence(two, variant="split2")).as_tuple() == (2, 1, 1)

    def test_equisolvable_variants(self, rng):
        for _ in range(12):
            f = random_formula(rng, rng.randint(1, 3), rng.randint(1, 2))
            truths = {brute_force_plan(gadget_fence(f, shape=s, variant=v)).solvable
                      for s in ("+1", "0") for v in ("base3", "split2")}
            assert truths == {brute_force_sat(f).satisfiable}

    def test_unsat(self):
        assert brute_force_plan(gadget_fence(UNSAT, shape="+1")).status == "unsolvable"

    def test_degenerate_parameters(self):
        with pytest.raises(BadParameterError):
            gadget_fence(CnfFormula(1, []), shape="+1")
        with pytest.raises(BadParameterError):
            gadget_fence(CnfFormula(1, [(1, 1, 1)]), shape="-1")


class TestChain:
    def test_length_one(self):
        inst = chain_instance(1)
        result = brute_force_plan(inst)
        assert result.solvable and len(result.plan) == 1

    def test_shortest_plan_is_ordered_walk(self):
        result = brute_force_plan(chain_instance(4))
        assert list(result.plan) == ["flip(1)", "flip(2)", "flip(3)", "flip(4)"]

    def test_causal_graph_is_directed_path(self):
        for length in range(1, 9):
            assert is_isomorphic(causal_graph(chain_instance(length)), make_dpath(length))

    def test_bad_length(self):
        with pytest.raises(BadParameterError):
            chain_instance(0)
