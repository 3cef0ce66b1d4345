"""Plan existence and plan extraction.

The brute-force search runs breadth-first over full states packed into
integers (one bit field per variable), so it doubles as the verification
oracle for every construction in the package. The component planner splits
the instance along the weakly connected components of its causal graph and
searches each factor's much smaller state space separately.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import ValidationError
from .graphs import weak_components
from .planning import (
    PartialState,
    Plan,
    PlanningInstance,
    causal_graph,
)

DEFAULT_MAX_STATES = 1_000_000
DEFAULT_MAX_PLAN_STEPS = 1_000_000

SOLVABLE = "solvable"
UNSOLVABLE = "unsolvable"
BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = DEFAULT_MAX_STATES
    max_plan_steps: int = DEFAULT_MAX_PLAN_STEPS

    def __post_init__(self):
        if self.max_states < 1 or self.max_plan_steps < 1:
            raise ValidationError("budgets must be positive")


class _Compiled:
    """Bit-packed view of an instance: states are integers, operators are
    (precondition mask/bits, postcondition clear-mask/bits) quadruples."""

    def __init__(self, instance: PlanningInstance):
        self.instance = instance
        self.names = sorted(instance.variable_names)
        self.offsets: dict[str, int] = {}
        self.value_index: dict[str, dict[str, int]] = {}
        self.widths: dict[str, int] = {}
        shift = 0
        for name in self.names:
            domain = instance.domain(name)
            width = max(1, (len(domain) - 1).bit_length())
            self.offsets[name] = shift
            self.widths[name] = width
            self.value_index[name] = {tok: i for i, tok in enumerate(domain)}
            shift += width

        def mask_bits(ps: PartialState) -> tuple[int, int]:
            mask = bits = 0
            for var, val in ps.items():
                off = self.offsets[var]
                mask |= ((1 << self.widths[var]) - 1) << off
                bits |= self.value_index[var][val] << off
            return mask, bits

        self.ops: list[tuple[str, int, int, int, int]] = []
        for op in sorted(instance.operators, key=lambda a: a.name):
            pre_mask, pre_bits = mask_bits(op.pre)
            post_mask, post_bits = mask_bits(op.post)
            self.ops.append((op.name, pre_mask, pre_bits, ~post_mask, post_bits))
        self.goal_mask, self.goal_bits = mask_bits(instance.goal)

    def encode(self, state: PartialState) -> int:
        packed = 0
        for var, val in state.items():
            packed |= self.value_index[var][val] << self.offsets[var]
        return packed

    def decode(self, packed: int) -> PartialState:
        out = {}
        for name in self.names:
            idx = (packed >> self.offsets[name]) & ((1 << self.widths[name]) - 1)
            out[name] = self.instance.domain(name)[idx]
        return PartialState(out)


@dataclass(frozen=True)
class SearchResult:
    status: str
    plan: Plan | None
    states_expanded: int
    states_visited: int

    @property
    def solvable(self) -> bool:
        return self.status == SOLVABLE


def brute_force_plan(instance: PlanningInstance, budget: SearchBudget | None = None) -> SearchResult:
    """Breadth-first search from init over full states.

    Returns a shortest plan when solvable and declares unsolvable only after
    the whole reachable space was exhausted. Successors are generated in
    lexicographic operator-name order, so results are reproducible.
    """
    budget = budget or SearchBudget()
    comp = _Compiled(instance)
    start = comp.encode(instance.init)
    goal_mask, goal_bits = comp.goal_mask, comp.goal_bits
    if start & goal_mask == goal_bits:
        return SearchResult(SOLVABLE, Plan(), 0, 1)

    ops = comp.ops
    visited = {start}
    parents: dict[int, tuple[int, str]] = {}
    frontier = deque([start])
    expanded = 0
    depth = 0

    def reconstruct(state: int) -> Plan:
        steps = []
        while state != start:
            state, name = parents[state]
            steps.append(name)
        return Plan(tuple(reversed(steps)))

    while frontier:
        depth += 1
        if depth > budget.max_plan_steps:
            return SearchResult(BUDGET_EXCEEDED, None, expanded, len(visited))
        for _ in range(len(frontier)):
            state = frontier.popleft()
            expanded += 1
            for name, pre_mask, pre_bits, clear, post_bits in ops:
                if state & pre_mask != pre_bits:
                    continue
                nxt = (state & clear) | post_bits
                if nxt in visited:
                    continue
                if len(visited) >= budget.max_states:
                    return SearchResult(BUDGET_EXCEEDED, None, expanded, len(visited))
                visited.add(nxt)
                parents[nxt] = (state, name)
                if nxt & goal_mask == goal_bits:
                    return SearchResult(SOLVABLE, reconstruct(nxt), expanded, len(visited))
                frontier.append(nxt)
    return SearchResult(UNSOLVABLE, None, expanded, len(visited))


def reachable_states(instance: PlanningInstance, max_states: int = DEFAULT_MAX_STATES) -> list[PartialState]:
    """Every full state reachable from init, in breadth-first discovery
    order. Useful for asserting reachability invariants at desk scale."""
    comp = _Compiled(instance)
    start = comp.encode(instance.init)
    visited = {start}
    order = [start]
    frontier = deque([start])
    while frontier:
        state = frontier.popleft()
        for _, pre_mask, pre_bits, clear, post_bits in comp.ops:
            if state & pre_mask != pre_bits:
                continue
            nxt = (state & clear) | post_bits
            if nxt not in visited:
                if len(visited) >= max_states:
                    raise ValidationError("reachable state enumeration exceeded its cap")
                visited.add(nxt)
                order.append(nxt)
                frontier.append(nxt)
    return [comp.decode(s) for s in order]


def decompose(instance: PlanningInstance) -> list[PlanningInstance]:
    """One sub-instance per weakly connected component of the causal graph,
    ordered by their least variable name.

    Every operator lands in exactly one sub-instance: all variables it reads
    or writes share a component by construction of the causal graph.
    """
    comps = weak_components(causal_graph(instance))
    owner: dict[str, int] = {}
    for idx, comp in enumerate(comps):
        for v in comp.vertices:
            owner[v] = idx

    grouped_ops: list[list] = [[] for _ in comps]
    for op in instance.operators:
        involved = op.pre.names | op.post.names
        idxs = {owner[v] for v in involved}
        if len(idxs) != 1:
            raise ValidationError(
                f"operator {op.name!r} spans several components"
            )
        grouped_ops[idxs.pop()].append(op)

    out = []
    for idx, comp in enumerate(comps):
        names = comp.vertices
        out.append(PlanningInstance(
            variables=tuple(v for v in instance.variables if v.name in names),
            init=instance.init.restrict(names),
            goal=instance.goal.restrict(names),
            operators=tuple(grouped_ops[idx]),
        ))
    return out


@dataclass(frozen=True)
class ComponentStats:
    name: str  # least variable name of the component
    status: str
    plan_length: int | None
    states_expanded: int
    states_visited: int


@dataclass(frozen=True)
class ComponentResult:
    status: str
    plan: Plan | None
    components: tuple[ComponentStats, ...]
    failed_component: str | None = None

    @property
    def solvable(self) -> bool:
        return self.status == SOLVABLE


def component_plan(
    instance: PlanningInstance,
    budget: SearchBudget | None = None,
    jobs: int = 1,
) -> ComponentResult:
    """Solve each causal-graph component separately and concatenate the
    component plans in component order.

    Components are independent, so the concatenation solves the whole
    instance exactly when every component is solvable. Reporting is
    deterministic in component order regardless of how the searches ran.
    """
    budget = budget or SearchBudget()
    subs = decompose(instance)

    def solve(sub: PlanningInstance) -> SearchResult:
        return brute_force_plan(sub, budget)

    if jobs > 1 and len(subs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(solve, subs))
    else:
        results = [solve(sub) for sub in subs]

    stats = []
    for sub, res in zip(subs, results):
        least = min(sub.variable_names)
        stats.append(ComponentStats(
            name=least,
            status=res.status,
            plan_length=len(res.plan) if res.plan is not None else None,
            states_expanded=res.states_expanded,
            states_visited=res.states_visited,
        ))

    for sub, res in zip(subs, results):
        if res.status == UNSOLVABLE:
            return ComponentResult(UNSOLVABLE, None, tuple(stats), min(sub.variable_names))
    for sub, res in zip(subs, results):
        if res.status == BUDGET_EXCEEDED:
            return ComponentResult(BUDGET_EXCEEDED, None, tuple(stats), min(sub.variable_names))

    plan = Plan()
    for res in results:
        plan = plan + res.plan
    return ComponentResult(SOLVABLE, plan, tuple(stats))
