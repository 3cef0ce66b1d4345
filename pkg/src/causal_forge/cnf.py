"""3SAT formulas: DIMACS round-tripping and an exhaustive satisfiability
oracle for desk-scale inputs."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, FormatError, ValidationError

SAT_ORACLE_CAP = 24


@dataclass(frozen=True)
class CnfFormula:
    """Clauses are triples of nonzero signed variable indices in [1..n];
    a literal may repeat within a clause."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise ValidationError("num_vars must be nonnegative")
        for i, clause in enumerate(self.clauses, start=1):
            if len(clause) != 3:
                raise ValidationError(f"clause {i} has {len(clause)} literals, expected 3")
            for lit in clause:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
                    raise ValidationError(f"clause {i} has a bad literal {lit!r}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def variables_used(self) -> frozenset[int]:
        return frozenset(abs(lit) for clause in self.clauses for lit in clause)


def parse_dimacs(text: str) -> CnfFormula:
    header: tuple[int, int] | None = None
    literals: list[tuple[int, int]] = []  # (literal, source line)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise FormatError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"malformed header {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"malformed header {line!r}", lineno) from None
            continue
        if header is None:
            raise FormatError("clause before header", lineno)
        for tok in line.split():
            try:
                literals.append((int(tok), lineno))
            except ValueError:
                raise FormatError(f"bad token {tok!r}", lineno) from None
    if header is None:
        raise FormatError("missing 'p cnf' header")
    num_vars, num_clauses = header

    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    start_line = None
    for lit, lineno in literals:
        if lit == 0:
            if len(current) != 3:
                raise FormatError(
                    f"clause {len(clauses) + 1} has {len(current)} literals, expected 3",
                    start_line,
                )
            clauses.append(tuple(current))
            current = []
            start_line = None
        else:
            if abs(lit) > num_vars:
                raise FormatError(f"literal {lit} out of range 1..{num_vars}", lineno)
            if start_line is None:
                start_line = lineno
            current.append(lit)
    if current:
        raise FormatError("unterminated clause at end of input", start_line)
    if len(clauses) != num_clauses:
        raise FormatError(
            f"header declares {num_clauses} clauses but {len(clauses)} were given"
        )
    return CnfFormula(num_vars, tuple(clauses))


def emit_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    assignment: tuple[bool, ...] | None

    def __bool__(self) -> bool:
        return self.satisfiable


def brute_force_sat(formula: CnfFormula, max_vars: int = SAT_ORACLE_CAP) -> SatResult:
    """Exhaust all 2^n assignments; the first satisfying one (in binary
    counting order, bit i = variable i + 1) is returned as witness."""
    n = formula.num_vars
    if n > max_vars:
        raise BudgetExceededError(f"{n} variables exceed the oracle cap of {max_vars}")
    clauses = formula.clauses
    for bits in range(1 << n):
        ok = True
        for clause in clauses:
            sat = False
            for lit in clause:
                val = bool(bits >> (abs(lit) - 1) & 1)
                if val == (lit > 0):
                    sat = True
                    break
            if not sat:
                ok = False
                break
        if ok:
            return SatResult(True, tuple(bool(bits >> i & 1) for i in range(n)))
    return SatResult(False, None)
