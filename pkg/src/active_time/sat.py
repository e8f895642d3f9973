"""CNF formulas, DIMACS I/O, the balancing transform and brute-force oracles.

Literals are signed integers in the DIMACS convention: ``k`` is x_k and
``-k`` is its negation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .model import dumps

MAX_BRUTE_VARS = 24

Clause = tuple[int, ...]


class FormulaError(ValueError):
    pass


class DimacsError(FormulaError):
    pass


def canonical_clause(literals: Iterable[int]) -> Clause:
    """Drop repeated literals (keeping first appearance); reject tautologies."""
    out: list[int] = []
    for lit in literals:
        if lit == 0:
            raise FormulaError("literal 0 is not allowed")
        if -lit in out:
            raise FormulaError(f"tautological clause: contains {abs(lit)} and -{abs(lit)}")
        if lit not in out:
            out.append(lit)
    if not out:
        raise FormulaError("empty clause")
    return tuple(out)


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise FormulaError("num_vars must be >= 0")
        clauses = tuple(canonical_clause(c) for c in self.clauses)
        for clause in clauses:
            for lit in clause:
                if abs(lit) > self.num_vars:
                    raise FormulaError(f"variable {abs(lit)} exceeds num_vars {self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def occurring_vars(self) -> set[int]:
        return {abs(lit) for clause in self.clauses for lit in clause}

    def unused_vars(self) -> list[int]:
        used = self.occurring_vars()
        return [v for v in range(1, self.num_vars + 1) if v not in used]

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for clause in self.clauses:
            lits = sorted(clause, key=abs)
            lines.append(" ".join(map(str, lits)) + " 0")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"num_vars": self.num_vars, "clauses": [list(c) for c in self.clauses]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "CnfFormula":
        return cls(int(data["num_vars"]), tuple(tuple(int(x) for x in c) for c in data["clauses"]))

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CnfFormula":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Assignment:
    values: Mapping[int, bool]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", dict(sorted(self.values.items())))

    @classmethod
    def from_bits(cls, bits: Sequence[bool]) -> "Assignment":
        return cls({i + 1: bool(b) for i, b in enumerate(bits)})

    def __getitem__(self, var: int) -> bool:
        return self.values[var]

    def num_true(self) -> int:
        return sum(self.values.values())

    def is_total(self, num_vars: int) -> bool:
        return set(self.values) == set(range(1, num_vars + 1))

    def is_balanced(self) -> bool:
        return 2 * self.num_true() == len(self.values)

    def to_dict(self) -> dict:
        return {"values": {str(k): v for k, v in self.values.items()}}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Assignment":
        return cls({int(k): bool(v) for k, v in data["values"].items()})

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Assignment":
        return cls.from_dict(json.loads(text))


def parse_dimacs(text: str | Iterable[str]) -> CnfFormula:
    lines = text.splitlines() if isinstance(text, str) else text
    header: tuple[int, int] | None = None
    clauses: list[Clause] = []
    pending: list[int] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsError(f"line {lineno}: second header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if min(header) < 0:
                raise DimacsError(f"line {lineno}: negative counts in header")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                try:
                    clauses.append(canonical_clause(pending))
                except FormulaError as exc:
                    raise DimacsError(f"line {lineno}: {exc}") from None
                pending = []
                continue
            if abs(lit) > header[0]:
                raise DimacsError(f"line {lineno}: variable {abs(lit)} > {header[0]}")
            pending.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if pending:
        raise DimacsError("last clause not terminated by 0")
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def serialize_dimacs(f: CnfFormula) -> str:
    return f.to_dimacs()


def to_balanced(f: CnfFormula) -> CnfFormula:
    """Add y_i = not x_i (as variable n + i) for every variable.

    Any satisfying assignment of the result sets exactly half its
    variables true, and it is satisfiable iff ``f`` is.
    """
    n = f.num_vars
    extra: list[Clause] = []
    for i in range(1, n + 1):
        extra.append((i, n + i))
        extra.append((-i, -(n + i)))
    return CnfFormula(2 * n, f.clauses + tuple(extra))


def evaluate(f: CnfFormula, a: Assignment) -> bool:
    return all(any(a[abs(lit)] == (lit > 0) for lit in clause) for clause in f.clauses)


def unsatisfied_clauses(f: CnfFormula, a: Assignment) -> list[int]:
    """1-based indices of clauses falsified by ``a``."""
    return [
        k for k, clause in enumerate(f.clauses, 1)
        if not any(a[abs(lit)] == (lit > 0) for lit in clause)
    ]


def _guard(f: CnfFormula) -> None:
    if f.num_vars > MAX_BRUTE_VARS:
        raise FormulaError(f"brute force limited to {MAX_BRUTE_VARS} variables")


def brute_sat(f: CnfFormula) -> Assignment | None:
    """First satisfying assignment in lexicographic order (true before false)."""
    _guard(f)
    for bits in product((True, False), repeat=f.num_vars):
        a = Assignment.from_bits(bits)
        if evaluate(f, a):
            return a
    return None


def brute_balanced_sat(f: CnfFormula) -> Assignment | None:
    """Like :func:`brute_sat` but only over assignments with n/2 true variables."""
    _guard(f)
    n = f.num_vars
    if n % 2:
        raise FormulaError("balanced SAT needs an even number of variables")
    # combinations() in lex order is the true-first lex order on bit vectors
    for trues in combinations(range(1, n + 1), n // 2):
        chosen = set(trues)
        a = Assignment({v: v in chosen for v in range(1, n + 1)})
        if evaluate(f, a):
            return a
    return None
