"""Multi-valued planning instances and their permissive plan semantics.

States map variable names to symbolic value tokens. Applying an operator
whose precondition does not hold leaves the state unchanged (a no-op) rather
than failing; a strict check that rejects such plans is available on top.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    DuplicateNameError,
    InvalidPlanError,
    MalformedOperatorError,
    ValidationError,
)
from .graphs import Digraph


class PartialState(Mapping):
    """Immutable assignment of value tokens to a subset of the variables."""

    __slots__ = ("_m", "_hash")

    def __init__(self, assignments: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        m = dict(assignments)
        for var, val in m.items():
            if not isinstance(var, str) or not var:
                raise ValidationError(f"bad variable name in partial state: {var!r}")
            if not isinstance(val, str) or not val:
                raise ValidationError(f"bad value for {var!r}: {val!r}")
        object.__setattr__(self, "_m", m)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("PartialState is immutable")

    def __getitem__(self, key: str) -> str:
        return self._m[key]

    def __iter__(self):
        return iter(self._m)

    def __len__(self) -> int:
        return len(self._m)

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self._m)

    def restrict(self, names: Iterable[str]) -> "PartialState":
        keep = set(names)
        return PartialState({v: x for v, x in self._m.items() if v in keep})

    def updated(self, other: Mapping[str, str]) -> "PartialState":
        merged = dict(self._m)
        merged.update(other)
        return PartialState(merged)

    def __eq__(self, other) -> bool:
        if isinstance(other, PartialState):
            return self._m == other._m
        if isinstance(other, Mapping):
            return self._m == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(frozenset(self._m.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}={x}" for v, x in sorted(self._m.items()))
        return f"PartialState({inner})"


@dataclass(frozen=True)
class Variable:
    name: str
    domain: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.name:
            raise ValidationError("variable name must be non-empty")
        if not self.domain:
            raise ValidationError(f"variable {self.name!r} has an empty domain")
        seen = set()
        for tok in self.domain:
            if not isinstance(tok, str) or not tok:
                raise ValidationError(f"variable {self.name!r}: bad value token {tok!r}")
            if tok in seen:
                raise ValidationError(f"variable {self.name!r}: duplicate value {tok!r}")
            seen.add(tok)


@dataclass(frozen=True)
class Operator:
    """A named pair of partial states: precondition and postcondition.

    Operators with an empty postcondition are rejected; the only exception is
    the explicit ``dummy`` kind used as a do-nothing placeholder in tests and
    internal plan rewriting. Dummy operators are never serialized.
    """

    name: str
    pre: PartialState
    post: PartialState
    dummy: bool = False

    def __post_init__(self):
        if not isinstance(self.pre, PartialState):
            object.__setattr__(self, "pre", PartialState(self.pre))
        if not isinstance(self.post, PartialState):
            object.__setattr__(self, "post", PartialState(self.post))
        if not self.name:
            raise ValidationError("operator name must be non-empty")
        if not self.post and not self.dummy:
            raise MalformedOperatorError(
                f"operator {self.name!r} has an empty postcondition"
            )
        if self.dummy and (self.pre or self.post):
            raise MalformedOperatorError(
                f"dummy operator {self.name!r} must have empty conditions"
            )


@dataclass(frozen=True)
class Plan:
    """A sequence of operator names, applied left to right."""

    steps: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    @classmethod
    def of(cls, *names: str) -> "Plan":
        return cls(names)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other: "Plan") -> "Plan":
        return Plan(self.steps + other.steps)


@dataclass(frozen=True)
class PlanningInstance:
    """Variables with finite domains, a total initial state, a partial goal
    and a set of operators."""

    variables: tuple[Variable, ...]
    init: PartialState
    goal: PartialState
    operators: tuple[Operator, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "operators", tuple(self.operators))
        if not isinstance(self.init, PartialState):
            object.__setattr__(self, "init", PartialState(self.init))
        if not isinstance(self.goal, PartialState):
            object.__setattr__(self, "goal", PartialState(self.goal))
        self._validate()

    def _validate(self):
        names = [v.name for v in self.variables]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise DuplicateNameError("variable", list(dup))
        op_names = [a.name for a in self.operators]
        dup = {n for n in op_names if op_names.count(n) > 1}
        if dup:
            raise DuplicateNameError("operator", list(dup))

        domains = {v.name: set(v.domain) for v in self.variables}
        missing = sorted(set(domains) - self.init.names)
        if missing:
            raise ValidationError(f"init does not assign: {', '.join(missing)}")
        for ps, label in ((self.init, "init"), (self.goal, "goal")):
            for var, val in ps.items():
                if var not in domains:
                    raise ValidationError(f"{label} assigns unknown variable {var!r}")
                if val not in domains[var]:
                    raise ValidationError(
                        f"{label} assigns {var!r} the out-of-domain value {val!r}"
                    )
        for a in self.operators:
            for ps, side in ((a.pre, "pre"), (a.post, "post")):
                for var, val in ps.items():
                    if var not in domains:
                        raise MalformedOperatorError(
                            f"operator {a.name!r} {side} uses unknown variable {var!r}"
                        )
                    if val not in domains[var]:
                        raise MalformedOperatorError(
                            f"operator {a.name!r} {side} assigns {var!r} "
                            f"the out-of-domain value {val!r}"
                        )

    @cached_property
    def _var_map(self) -> dict[str, Variable]:
        return {v.name: v for v in self.variables}

    @cached_property
    def _op_map(self) -> dict[str, Operator]:
        return {a.name: a for a in self.operators}

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def variable(self, name: str) -> Variable:
        try:
            return self._var_map[name]
        except KeyError:
            raise ValidationError(f"unknown variable {name!r}") from None

    def domain(self, name: str) -> tuple[str, ...]:
        return self.variable(name).domain

    def operator(self, name: str) -> Operator:
        try:
            return self._op_map[name]
        except KeyError:
            raise InvalidPlanError(f"unknown operator {name!r}") from None

    def resolve(self, plan: Plan) -> tuple[Operator, ...]:
        unknown = sorted(set(plan.steps) - self._op_map.keys())
        if unknown:
            raise InvalidPlanError(f"plan names unknown operators: {', '.join(unknown)}")
        return tuple(self._op_map[name] for name in plan.steps)


@dataclass(frozen=True)
class SolutionCheck:
    """Outcome of checking a plan against an instance's goal."""

    valid: bool
    inapplicable: tuple[int, ...]
    final_state: PartialState = field(repr=False)

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class ArityStats:
    max_preconditions: int
    max_postconditions: int
    max_k_dependence: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.max_preconditions, self.max_postconditions, self.max_k_dependence)


def apply_step(state: PartialState, op: Operator) -> PartialState:
    """Apply one operator; when the precondition does not hold the state is
    returned unchanged."""
    missing = (op.pre.names | op.post.names) - state.names
    if missing:
        raise MalformedOperatorError(
            f"operator {op.name!r} references variables outside the state: "
            + ", ".join(sorted(missing))
        )
    for var, val in op.pre.items():
        if state[var] != val:
            return state
    if not op.post:
        return state
    return state.updated(op.post)


def apply_plan(instance: PlanningInstance, state: PartialState, plan: Plan) -> PartialState:
    """Left fold of apply_step over the plan's operators."""
    for op in instance.resolve(plan):
        state = apply_step(state, op)
    return state


def is_solution(instance: PlanningInstance, plan: Plan, strict: bool = False) -> SolutionCheck:
    """Check whether applying the plan to init yields a goal state.

    The diagnostic lists the 0-based indices of steps that were inapplicable
    at their position; with ``strict`` any such step invalidates the plan.
    """
    ops = instance.resolve(plan)
    state = instance.init
    noops = []
    for i, op in enumerate(ops):
        nxt = apply_step(state, op)
        if nxt is state:
            noops.append(i)
        state = nxt
    reaches_goal = instance.goal == state.restrict(instance.goal.names)
    valid = reaches_goal and not (strict and noops)
    return SolutionCheck(valid, tuple(noops), state)


def causal_graph(instance: PlanningInstance) -> Digraph:
    """Directed graph on the variables with an edge (u, v) whenever some
    operator reads or writes u and writes v."""
    edges = set()
    for a in instance.operators:
        post_vars = a.post.names
        involved = a.pre.names | post_vars
        for v in post_vars:
            for u in involved:
                if u != v:
                    edges.add((u, v))
    return Digraph(frozenset(instance.variable_names), frozenset(edges))


def dtg(instance: PlanningInstance, name: str) -> Digraph:
    """Domain-transition graph of one variable: an edge (x, y) for every
    operator that writes y into the variable while requiring x of it, or
    edges from every other value when the operator has no such requirement."""
    var = instance.variable(name)
    edges = set()
    for a in instance.operators:
        if name not in a.post.names:
            continue
        y = a.post[name]
        if name in a.pre.names:
            x = a.pre[name]
            if x != y:
                edges.add((x, y))
        else:
            for x in var.domain:
                if x != y:
                    edges.add((x, y))
    return Digraph(frozenset(var.domain), frozenset(edges))


def substitute(x, v: str, w: str, instance: PlanningInstance | None = None):
    """Move variable v's binding onto w; v and any prior w binding are dropped.

    Works on partial states and on operators (applied to both conditions).
    When an instance is supplied the moved value is checked against w's domain.
    """
    if isinstance(x, Operator):
        return Operator(
            x.name,
            substitute(x.pre, v, w, instance),
            substitute(x.post, v, w, instance),
            x.dummy,
        )
    if not isinstance(x, PartialState):
        raise ValidationError(f"cannot substitute in {type(x).__name__}")
    result = {name: val for name, val in x.items() if name not in (v, w)}
    if v in x.names:
        val = x[v]
        if instance is not None and val not in instance.domain(w):
            raise ValidationError(
                f"substitution [{v}/{w}]: value {val!r} is not in the domain of {w!r}"
            )
        result[w] = val
    return PartialState(result)


def k_dependence(op: Operator) -> int:
    """Number of variables the operator requires but does not write."""
    return len(op.pre.names - op.post.names)


def arity_stats(instance: PlanningInstance) -> ArityStats:
    """Maxima over all operators of precondition size, postcondition size and
    k-dependence."""
    max_pre = max_post = max_dep = 0
    for a in instance.operators:
        max_pre = max(max_pre, len(a.pre))
        max_post = max(max_post, len(a.post))
        max_dep = max(max_dep, k_dependence(a))
    return ArityStats(max_pre, max_post, max_dep)


def rename_variables(instance: PlanningInstance, mapping: Mapping[str, str]) -> PlanningInstance:
    """Simultaneously rename variables everywhere they occur.

    Unmapped variables keep their names; the resulting name set must be free
    of collisions. Operator names are left untouched.
    """
    known = set(instance.variable_names)
    unknown = sorted(set(mapping) - known)
    if unknown:
        raise ValidationError(f"rename of unknown variables: {', '.join(unknown)}")
    full = {name: mapping.get(name, name) for name in instance.variable_names}
    targets = list(full.values())
    dup = {n for n in targets if targets.count(n) > 1}
    if dup:
        raise DuplicateNameError("variable", list(dup))

    def remap(ps: PartialState) -> PartialState:
        return PartialState({full[var]: val for var, val in ps.items()})

    return PlanningInstance(
        variables=tuple(Variable(full[v.name], v.domain) for v in instance.variables),
        init=remap(instance.init),
        goal=remap(instance.goal),
        operators=tuple(
            Operator(a.name, remap(a.pre), remap(a.post), a.dummy)
            for a in instance.operators
        ),
    )
