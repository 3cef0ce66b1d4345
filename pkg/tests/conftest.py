"""Shared generators for randomized and exhaustive suites.

Everything is seeded; reruns are byte-for-byte identical.
"""

from __future__ import annotations

import random
import sys
from functools import lru_cache
from itertools import combinations_with_replacement
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from causal_forge.cnf import CnfFormula
from causal_forge.planning import Operator, PartialState, PlanningInstance, Variable


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)


@lru_cache(maxsize=None)
def exhaustive_formulas(n: int, m: int) -> tuple[CnfFormula, ...]:
    """Every 3SAT formula with exactly n variables and m clauses, one
    representative per clause multiset (clause order and literal order do
    not affect satisfiability or any gadget's solvability)."""
    literals = sorted(range(-n, 0)) + list(range(1, n + 1))
    clauses = list(combinations_with_replacement(literals, 3)) if n else []
    out = []
    for combo in combinations_with_replacement(clauses, m):
        out.append(CnfFormula(n, tuple(combo)))
    if m == 0:
        out = [CnfFormula(n, ())]
    return tuple(out)


def random_formula(rng: random.Random, n: int, m: int, occurring: bool = False) -> CnfFormula:
    """Uniform random clauses; with ``occurring`` every variable index is
    patched into some literal slot so none is unused."""
    slots = [
        [rng.choice([1, -1]) * rng.randint(1, n) for _ in range(3)]
        for _ in range(m)
    ]
    if occurring and m:
        flat = [(i, j) for i in range(m) for j in range(3)]
        rng.shuffle(flat)
        missing = [k for k in range(1, n + 1)
                   if all(abs(lit) != k for row in slots for lit in row)]
        for k, (i, j) in zip(missing, flat):
            slots[i][j] = rng.choice([1, -1]) * k
    return CnfFormula(n, tuple(tuple(row) for row in slots))


def random_instance(
    rng: random.Random,
    max_vars: int = 9,
    max_component: int = 3,
    max_domain: int = 3,
) -> PlanningInstance:
    """Random instance whose causal graph components stay within
    ``max_component`` vertices: operators only relate variables inside one
    planned block."""
    total = rng.randint(1, max_vars)
    blocks: list[list[str]] = []
    next_id = 1
    while total > 0:
        size = rng.randint(1, min(max_component, total))
        blocks.append([f"v{next_id + i}" for i in range(size)])
        next_id += size
        total -= size

    variables = []
    domains = {}
    for block in blocks:
        for name in block:
            d = rng.randint(2, max_domain)
            domains[name] = tuple(str(i) for i in range(d))
            variables.append(Variable(name, domains[name]))

    ops = []
    idx = 1
    for block in blocks:
        for _ in range(rng.randint(1, 2 * len(block))):
            post_vars = rng.sample(block, rng.randint(1, min(2, len(block))))
            post = {v: rng.choice(domains[v]) for v in post_vars}
            pre_vars = rng.sample(block, rng.randint(0, min(2, len(block))))
            pre = {v: rng.choice(domains[v]) for v in pre_vars}
            ops.append(Operator(f"op{idx}", pre, post))
            idx += 1

    init = {v.name: rng.choice(v.domain) for v in variables}
    goal = {}
    for block in blocks:
        for name in rng.sample(block, rng.randint(0, len(block))):
            goal[name] = rng.choice(domains[name])
    return PlanningInstance(
        tuple(variables), PartialState(init), PartialState(goal), tuple(ops)
    )


def random_polypath_instance(
    rng: random.Random, n_vars: int = 4, max_domain: int = 3
) -> PlanningInstance:
    """Instance whose causal graph is a polypath over v1..vN: every path edge
    is realized by at least one operator, plus some unary noise."""
    names = [f"v{i}" for i in range(1, n_vars + 1)]
    domains = {name: tuple(str(i) for i in range(rng.randint(2, max_domain)))
               for name in names}
    variables = [Variable(name, domains[name]) for name in names]

    ops = []
    idx = 1
    for a, b in zip(names, names[1:]):
        src, dst = (a, b) if rng.random() < 0.5 else (b, a)
        for _ in range(rng.randint(1, 2)):
            pre = {src: rng.choice(domains[src])}
            if rng.random() < 0.5:
                pre[dst] = rng.choice(domains[dst])
            ops.append(Operator(f"op{idx}", pre, {dst: rng.choice(domains[dst])}))
            idx += 1
    for name in names:
        if rng.random() < 0.6:
            ops.append(Operator(
                f"op{idx}", {name: rng.choice(domains[name])},
                {name: rng.choice(domains[name])},
            ))
            idx += 1

    init = {name: rng.choice(domains[name]) for name in names}
    goal = {name: rng.choice(domains[name])
            for name in rng.sample(names, rng.randint(1, n_vars))}
    return PlanningInstance(
        tuple(variables), PartialState(init), PartialState(goal), tuple(ops)
    )
