"""Compilers from 3SAT formulas to planning instances whose causal graphs
are exact named shapes and whose solvability equals satisfiability.

Three constructions are provided. The in-star gadget keeps one committing
variable per formula variable and steps a central clause counter. The
out-star gadget walks a central assignment variable along a layered path and
lets one variable per clause observe it. The fence gadget synchronizes a row
of assignment walkers through clause variables wedged between them.
"""

from __future__ import annotations

from collections.abc import Callable

from .cnf import CnfFormula
from .errors import BadParameterError, UnusedVariableError
from .planning import Operator, PartialState, PlanningInstance, Variable

FENCE_SHAPES = ("+1", "0", "-1")
FENCE_VARIANTS = ("base3", "split2")


def gadget_in_star(formula: CnfFormula) -> PlanningInstance:
    """Causal graph: all formula-variable vertices point at one clause
    counter. Each v_i commits once to t or f; the counter advances from i-1
    to i only through an operator matching a literal of clause i.

    Every declared variable must occur in some clause, otherwise the star
    would silently lose points.
    """
    n, m = formula.num_vars, formula.num_clauses
    unused = sorted(set(range(1, n + 1)) - formula.variables_used())
    if unused:
        raise UnusedVariableError(unused)

    variables = [Variable("v_c", tuple(str(i) for i in range(m + 1)))]
    variables += [Variable(f"v_{i}", ("u", "f", "t")) for i in range(1, n + 1)]
    init = {"v_c": "0", **{f"v_{i}": "u" for i in range(1, n + 1)}}
    goal = {"v_c": str(m)}

    ops: list[Operator] = []
    for i in range(1, n + 1):
        ops.append(Operator(f"set-f({i})", {f"v_{i}": "u"}, {f"v_{i}": "f"}))
        ops.append(Operator(f"set-t({i})", {f"v_{i}": "u"}, {f"v_{i}": "t"}))
    for i, clause in enumerate(formula.clauses, start=1):
        for j, lit in enumerate(clause, start=1):
            k = abs(lit)
            if lit > 0:
                ops.append(Operator(
                    f"verify-clause-pos({i},{j})",
                    {"v_c": str(i - 1), f"v_{k}": "t"},
                    {"v_c": str(i)},
                ))
            else:
                ops.append(Operator(
                    f"verify-clause-neg({i},{j})",
                    {"v_c": str(i - 1), f"v_{k}": "f"},
                    {"v_c": str(i)},
                ))
    return PlanningInstance(tuple(variables), PartialState(init), PartialState(goal), tuple(ops))


def _assignment_domain(n: int) -> tuple[str, ...]:
    # f_0 is the start; t_0 is retained as an inert companion value.
    return tuple([f"f_{i}" for i in range(n + 1)] + [f"t_{i}" for i in range(n + 1)])


def _assignment_steps(var: str, namer: Callable[[str, str], str], n: int) -> list[Operator]:
    """The four value-path steps per level: from f/t at level i-1 to f/t at i."""
    ops = []
    for i in range(1, n + 1):
        for prev in ("f", "t"):
            for nxt in ("f", "t"):
                frm, to = f"{prev}_{i-1}", f"{nxt}_{i}"
                ops.append(Operator(namer(frm, to), {var: frm}, {var: to}))
    return ops


def gadget_out_star(formula: CnfFormula) -> PlanningInstance:
    """Causal graph: one central assignment walker pointing at one vertex per
    clause. The walker passes either t_i or f_i for each formula variable;
    clause variables flip from u to s while the walker sits on a matching
    literal value. A partial walk can already witness satisfiability."""
    n, m = formula.num_vars, formula.num_clauses
    if m < 1:
        raise BadParameterError("the out-star gadget needs at least one clause")

    variables = [Variable("v_c", _assignment_domain(n))]
    variables += [Variable(f"v_{i}", ("u", "s")) for i in range(1, m + 1)]
    init = {"v_c": "f_0", **{f"v_{i}": "u" for i in range(1, m + 1)}}
    goal = {f"v_{i}": "s" for i in range(1, m + 1)}

    ops = _assignment_steps("v_c", lambda a, b: f"step-c({a},{b})", n)
    for i, clause in enumerate(formula.clauses, start=1):
        for j, lit in enumerate(clause, start=1):
            k = abs(lit)
            if lit > 0:
                ops.append(Operator(
                    f"verify-clause-pos({i},{j})", {"v_c": f"t_{k}"}, {f"v_{i}": "s"},
                ))
            else:
                ops.append(Operator(
                    f"verify-clause-neg({i},{j})", {"v_c": f"f_{k}"}, {f"v_{i}": "s"},
                ))
    return PlanningInstance(tuple(variables), PartialState(init), PartialState(goal), tuple(ops))


def _clause_domain(n: int, variant: str) -> tuple[str, ...]:
    vals = [f"f_{i}^u" for i in range(n + 1)] + [f"t_{i}^u" for i in range(n + 1)]
    vals += [f"f_{i}^s" for i in range(n + 1)] + [f"t_{i}^s" for i in range(n + 1)]
    if variant == "split2":
        for i in range(1, n + 1):
            for copy in ("u", "s"):
                for prev in ("f", "t"):
                    for nxt in ("f", "t"):
                        vals.append(f"{prev}{nxt}_{i}^{copy}")
    vals.append("s")
    return tuple(vals)


def gadget_fence(formula: CnfFormula, shape: str = "+1", variant: str = "base3") -> PlanningInstance:
    """Causal graph: a fence whose sinks are clause variables and whose
    sources are synchronized assignment walkers.

    Every clause variable mirrors the walk of its adjacent sources through a
    doubled copy of their value path (superscript u, then s after witnessing
    a literal) and finishes on s. Shapes 0 and -1 omit one or both of the
    outermost walkers. The split2 variant replaces each 3-precondition
    synchronizer by two 2-precondition halves through an extra value, which
    requires the two neighbors in sequence rather than at once.
    """
    n, m = formula.num_vars, formula.num_clauses
    if m < 1 or n < 1:
        raise BadParameterError("the fence gadget needs m >= 1 clauses and n >= 1 variables")
    if shape not in FENCE_SHAPES:
        raise BadParameterError(f"shape must be one of {FENCE_SHAPES}")
    if variant not in FENCE_VARIANTS:
        raise BadParameterError(f"variant must be one of {FENCE_VARIANTS}")
    if shape == "-1" and m < 2:
        raise BadParameterError("a fence with 1 sink and 0 sources does not exist")

    lo = 1 if shape == "-1" else 0
    hi = m - 1 if shape in ("0", "-1") else m
    source_ids = list(range(lo, hi + 1))

    variables = [Variable(f"u_{j}", _assignment_domain(n)) for j in source_ids]
    variables += [Variable(f"v_{j}", _clause_domain(n, variant)) for j in range(1, m + 1)]
    init = {f"u_{j}": "f_0" for j in source_ids}
    init.update({f"v_{j}": "f_0^u" for j in range(1, m + 1)})
    goal = {f"v_{j}": "s" for j in range(1, m + 1)}

    ops: list[Operator] = []
    for j in source_ids:
        ops += _assignment_steps(
            f"u_{j}", lambda a, b, j=j: f"step-x({j},{a},{b})", n
        )

    def sync_ops(j: int, copy: str) -> list[Operator]:
        left = f"u_{j-1}" if j - 1 in source_ids else None
        right = f"u_{j}" if j in source_ids else None
        var = f"v_{j}"
        out = []
        for i in range(1, n + 1):
            for prev in ("f", "t"):
                for nxt in ("f", "t"):
                    frm = f"{prev}_{i-1}^{copy}"
                    to = f"{nxt}_{i}^{copy}"
                    if variant == "base3":
                        pre = {var: frm}
                        if left:
                            pre[left] = f"{nxt}_{i}"
                        if right:
                            pre[right] = f"{nxt}_{i}"
                        out.append(Operator(
                            f"step-clause-{copy}({j},{frm},{to})", pre, {var: to},
                        ))
                    else:
                        mid = f"{prev}{nxt}_{i}^{copy}"
                        pre1 = {var: frm}
                        if left:
                            pre1[left] = f"{nxt}_{i}"
                        pre2 = {var: mid}
                        if right:
                            pre2[right] = f"{nxt}_{i}"
                        out.append(Operator(
                            f"step-clause-{copy}({j},{frm},{mid})", pre1, {var: mid},
                        ))
                        out.append(Operator(
                            f"step-clause-{copy}({j},{mid},{to})", pre2, {var: to},
                        ))
        return out

    for j in range(1, m + 1):
        ops += sync_ops(j, "u")
        ops += sync_ops(j, "s")
    for i, clause in enumerate(formula.clauses, start=1):
        for j, lit in enumerate(clause, start=1):
            k = abs(lit)
            if lit > 0:
                ops.append(Operator(
                    f"verify-pos({i},{j})", {f"v_{i}": f"t_{k}^u"}, {f"v_{i}": f"t_{k}^s"},
                ))
            else:
                ops.append(Operator(
                    f"verify-neg({i},{j})", {f"v_{i}": f"f_{k}^u"}, {f"v_{i}": f"f_{k}^s"},
                ))
    for j in range(1, m + 1):
        ops.append(Operator(f"finalize-clause-f({j})", {f"v_{j}": f"f_{n}^s"}, {f"v_{j}": "s"}))
        ops.append(Operator(f"finalize-clause-t({j})", {f"v_{j}": f"t_{n}^s"}, {f"v_{j}": "s"}))

    return PlanningInstance(tuple(variables), PartialState(init), PartialState(goal), tuple(ops))


def chain_instance(length: int) -> PlanningInstance:
    """Binary variables in a line; flip(i) sets x_i once its predecessor is
    set. Always solvable, shortest plan walks the chain in order."""
    if length < 1:
        raise BadParameterError("chain needs length >= 1")
    variables = [Variable(f"x_{i}", ("0", "1")) for i in range(1, length + 1)]
    init = {f"x_{i}": "0" for i in range(1, length + 1)}
    goal = {f"x_{length}": "1"}
    ops = [Operator("flip(1)", {}, {"x_1": "1"})]
    ops += [
        Operator(f"flip({i})", {f"x_{i-1}": "1"}, {f"x_{i}": "1"})
        for i in range(2, length + 1)
    ]
    return PlanningInstance(tuple(variables), PartialState(init), PartialState(goal), tuple(ops))
