import random

import pytest

from causal_forge.cnf import CnfFormula, brute_force_sat
from causal_forge.embedder import (
    capacity_report,
    compile_to_graph,
    embed_in_tournament,
    family_instance,
    tournament_ham_path,
)
from causal_forge.errors import BadParameterError, CapacityError, ValidationError
from causal_forge.gadgets import chain_instance
from causal_forge.graphs import (
    Digraph,
    cc_size,
    classify,
    is_isomorphic,
    make_dpath,
    make_fence,
    make_in_star,
    make_out_star,
    subdivide,
)
from causal_forge.planning import causal_graph
from causal_forge.solver import brute_force_plan

from conftest import random_formula

SAT1 = CnfFormula(3, [(1, 2, -3)])
UNSAT = CnfFormula(1, [(1, 1, 1), (-1, -1, -1)])


def random_tournament(rng: random.Random, n: int) -> Digraph:
    verts = [f"t{i}" for i in range(1, n + 1)]
    edges = set()
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            edges.add((u, v) if rng.random() < 0.5 else (v, u))
    return Digraph(frozenset(verts), frozenset(edges))


class TestCapacity:
    def test_star_read_offs(self):
        rep = capacity_report(make_in_star(5))
        assert rep.max_in_star == 5 and rep.in_star_center == "c"
        assert rep.max_out_star == 1

    def test_fence_polypath(self):
        rep = capacity_report(make_fence(3, 1))
        assert rep.polypath_sinks == 3 and rep.polypath_sources == 4
        assert not rep.capped

    def test_directed_path(self):
        rep = capacity_report(make_dpath(9))
        assert rep.polypath_sinks == 1 and rep.polypath_sources == 1
        assert rep.max_in_star == 1 and rep.max_out_star == 1

    def test_budget_caps(self):
        from test_graphs import random_digraph

        g = random_digraph(random.Random(1), 8, 0.5)
        rep = capacity_report(g, budget=5)
        assert rep.capped


class TestCompile:
    def test_in_star_case(self):
        h = Digraph.from_edges(
            [("s1", "hub"), ("s2", "hub"), ("s3", "hub"), ("hub", "tail")]
        )
        res = compile_to_graph(SAT1, h)
        assert res.case == "in-star"
        assert causal_graph(res.instance) == h
        assert brute_force_plan(res.instance).solvable == brute_force_sat(SAT1).satisfiable

    def test_out_star_case(self):
        f = CnfFormula(2, [(1, 2, 2), (-1, -2, 1)])
        h = Digraph.from_edges([("hub", "a"), ("hub", "b"), ("x", "hub")])
        res = compile_to_graph(f, h, case="out-star")
        assert res.case == "out-star"
        assert causal_graph(res.instance) == h
        assert brute_force_plan(res.instance).solvable

    def test_polypath_case_with_stretching(self):
        f = CnfFormula(2, [(1, 2, -2), (-1, 2, 1)])
        base = make_fence(2, 1)
        target = base
        for e in sorted(base.edges)[:2]:
            target = subdivide(target, e)
        res = compile_to_graph(f, target, case="polypath")
        assert res.case == "polypath"
        assert causal_graph(res.instance) == target
        assert brute_force_plan(res.instance).solvable == brute_force_sat(f).satisfiable
        assert res.provenance["schedule"]

    def test_unsat_formulas_compile_to_unsolvable(self):
        h = Digraph.from_edges([("a", "c"), ("b", "c")])
        res = compile_to_graph(UNSAT, h)
        assert not brute_force_plan(res.instance).solvable

    def test_insufficient_capacity(self):
        f = CnfFormula(2, [(1, 1, 2), (-1, -1, -1), (2, 2, 2)])
        with pytest.raises(CapacityError) as err:
            compile_to_graph(f, make_dpath(12))
        assert err.value.proven
        assert err.value.report.polypath_sinks == 1

    def test_capped_capacity_reported_as_unproven(self):
        from test_graphs import random_digraph

        f = CnfFormula(4, [(1, 2, 3), (-1, -2, -4), (3, 4, 4), (1, -3, 4)])
        g = random_digraph(random.Random(3), 9, 0.5)
        # tiny budget: the polypath search cannot finish
        try:
            compile_to_graph(f, g, budget=3)
        except CapacityError as exc:
            assert not exc.proven

    def test_unused_variables_rejected(self):
        with pytest.raises(Exception):
            compile_to_graph(CnfFormula(3, [(1, 1, 1)]), make_in_star(3))


class TestFamily:
    def test_default_seed(self):
        inst = family_instance(2, 3)
        cg = causal_graph(inst)
        assert len(cg.vertices) == 9 and cc_size(cg) == 3
        assert brute_force_plan(inst).solvable

    def test_cube_family(self):
        inst = family_instance(3, 2)
        cg = causal_graph(inst)
        assert len(cg.vertices) == 8 and cc_size(cg) == 2

    def test_unsolvable_seed(self):
        from causal_forge.planning import Operator, PartialState, PlanningInstance, Variable

        seed = PlanningInstance(
            (Variable("a", ("0", "1")), Variable("b", ("0", "1"))),
            PartialState({"a": "0", "b": "0"}),
            PartialState({"b": "1"}),
            (
                Operator("start", {"a": "1"}, {"a": "1"}),
                Operator("push", {"a": "1"}, {"b": "1"}),
            ),
        )
        inst = family_instance(2, 2, seed)
        assert not brute_force_plan(inst).solvable

    def test_seed_shape_checked(self):
        with pytest.raises(ValidationError):
            family_instance(2, 3, chain_instance(2))

    def test_parameters(self):
        with pytest.raises(BadParameterError):
            family_instance(1, 3)


class TestTournament:
    def test_three_cycle(self):
        t = Digraph.from_edges([("a", "b"), ("b", "c"), ("c", "a")])
        path = tournament_ham_path(t)
        assert sorted(path) == ["a", "b", "c"]
        assert all(t.has_edge(u, v) for u, v in zip(path, path[1:]))

    def test_transitive_tournament_gives_topological_order(self):
        verts = ["a", "b", "c", "d"]
        edges = [(u, v) for i, u in enumerate(verts) for v in verts[i + 1:]]
        path = tournament_ham_path(Digraph.from_edges(edges))
        assert path == verts

    def test_single_vertex(self):
        t = Digraph(frozenset(["only"]), frozenset())
        assert tournament_ham_path(t) == ["only"]

    def test_not_a_tournament(self):
        with pytest.raises(ValidationError):
            tournament_ham_path(make_dpath(3))

    def test_random_tournaments_all_give_valid_paths(self, rng):
        for _ in range(40):
            t = random_tournament(rng, rng.randint(1, 8))
            path = tournament_ham_path(t)
            assert sorted(path) == sorted(t.vertices)
            assert all(t.has_edge(u, v) for u, v in zip(path, path[1:]))


class TestEmbed:
    def test_three_cycle_embedding(self):
        t = Digraph.from_edges([("a", "b"), ("b", "c"), ("c", "a")])
        out = embed_in_tournament(chain_instance(3), t)
        assert causal_graph(out) == t
        assert brute_force_plan(out).solvable

    def test_unsolvable_chain_variant(self):
        from causal_forge.planning import Operator, PartialState, PlanningInstance, Variable

        bad = PlanningInstance(
            (Variable("a", ("0", "1")), Variable("b", ("0", "1")), Variable("c", ("0", "1"))),
            PartialState({"a": "0", "b": "0", "c": "0"}),
            PartialState({"c": "1"}),
            (
                Operator("ab", {"a": "1"}, {"b": "1"}),
                Operator("bc", {"b": "1"}, {"c": "1"}),
            ),
        )
        assert is_isomorphic(causal_graph(bad), make_dpath(3))
        t = Digraph.from_edges([("x", "y"), ("y", "z"), ("z", "x")])
        out = embed_in_tournament(bad, t)
        assert causal_graph(out) == t
        assert not brute_force_plan(out).solvable

    def test_size_mismatch(self):
        t = Digraph.from_edges([("a", "b")])
        with pytest.raises(BadParameterError):
            embed_in_tournament(chain_instance(3), t)

    def test_single_vertex_identity(self):
        t = Digraph(frozenset(["z"]), frozenset())
        out = embed_in_tournament(chain_instance(1), t)
        assert causal_graph(out) == t
        assert brute_force_plan(out).solvable

    def test_random_embeddings_equisolvable(self, rng):
        for _ in range(15):
            n = rng.randint(1, 4)
            t = random_tournament(rng, n)
            ch = chain_instance(n)
            out = embed_in_tournament(ch, t)
            assert causal_graph(out) == t
            assert brute_force_plan(out).solvable


class TestEndToEnd:
    def test_mixed_targets_and_formulas(self, rng):
        # all three cases, equisolvability against the SAT oracle
        hosts = {
            "in-star": lambda n, m: Digraph(
                make_in_star(n).vertices | {"pad"},
                make_in_star(n).edges | {("c", "pad")},
            ),
            "out-star": lambda n, m: Digraph(
                make_out_star(max(m, 1)).vertices | {"pad"},
                make_out_star(max(m, 1)).edges | {("pad", "c")},
            ),
        }
        for case, host in hosts.items():
            for _ in range(6):
                n, m = rng.randint(1, 3), rng.randint(1, 3)
                f = random_formula(rng, n, m, occurring=True)
                res = compile_to_graph(f, host(n, m), case=case)
                assert res.case == case
                assert causal_graph(res.instance) == host(n, m)
                assert (
                    brute_force_plan(res.instance).solvable
                    == brute_force_sat(f).satisfiable
                )
