"""Clause container used by every solver in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..errors import ModelAcqError

Clause = Tuple[int, ...]
Assignment = Dict[int, bool]


class CnfError(ModelAcqError):
    pass


@dataclass
class Cnf:
    """A (possibly weighted) CNF formula.

    ``weights[i]`` is ``None`` for a hard clause and a positive integer for a
    soft one. When ``weights`` is ``None`` every clause is hard.
    """

    num_vars: int = 0
    clauses: List[Clause] = field(default_factory=list)
    weights: Optional[List[Optional[int]]] = None
    allow_empty: bool = False

    def __post_init__(self):
        clauses, weights = self.clauses, self.weights
        self.clauses = []
        self.weights = None
        if weights is not None and len(weights) != len(clauses):
            raise CnfError("weights and clauses differ in length")
        for i, c in enumerate(clauses):
            self.add_clause(c, None if weights is None else weights[i])

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add_clause(self, lits: Iterable[int], weight: Optional[int] = None) -> None:
        clause = tuple(int(l) for l in lits)
        if not clause and not self.allow_empty:
            raise CnfError("empty clause (set allow_empty=True to permit)")
        for l in clause:
            if l == 0:
                raise CnfError("literal 0 is reserved as a terminator")
            if abs(l) > self.num_vars:
                self.num_vars = abs(l)
        if weight is not None:
            if weight <= 0:
                raise CnfError(f"soft clause weight must be positive, got {weight}")
            if self.weights is None:
                self.weights = [None] * len(self.clauses)
        if self.weights is not None:
            self.weights.append(weight)
        self.clauses.append(clause)

    def extend(self, clauses: Iterable[Sequence[int]], weight: Optional[int] = None) -> None:
        for c in clauses:
            self.add_clause(c, weight)

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None and any(w is not None for w in self.weights)

    def hard(self) -> Iterator[Clause]:
        for i, c in enumerate(self.clauses):
            if self.weights is None or self.weights[i] is None:
                yield c

    def soft(self) -> Iterator[Tuple[Clause, int]]:
        if self.weights is None:
            return
        for c, w in zip(self.clauses, self.weights):
            if w is not None:
                yield c, w

    def hard_part(self) -> "Cnf":
        return Cnf(self.num_vars, list(self.hard()), allow_empty=True)

    def copy(self) -> "Cnf":
        return Cnf(
            self.num_vars,
            list(self.clauses),
            None if self.weights is None else list(self.weights),
            allow_empty=self.allow_empty,
        )

    def __len__(self) -> int:
        return len(self.clauses)


def satisfies(assignment: Assignment, clause: Sequence[int]) -> bool:
    """True if some literal of ``clause`` is made true by ``assignment``.

    Unassigned variables count as false.
    """
    return any(assignment.get(abs(l), False) == (l > 0) for l in clause)


def cost(cnf: Cnf, assignment: Assignment) -> int:
    """Total weight of soft clauses falsified by ``assignment``."""
    return sum(w for c, w in cnf.soft() if not satisfies(assignment, c))


def is_model(cnf: Cnf, assignment: Assignment) -> bool:
    return all(satisfies(assignment, c) for c in cnf.hard())
