"""Weighted partial MaxSAT by SAT-UNSAT linear search.

Each soft clause gets a relaxation literal; a generalized totalizer over the
weighted relaxation literals exposes one output per reachable partial sum.
After every model of cost ``c`` the outputs for sums ``>= c`` are forbidden
and the solver is called again, until UNSAT proves the last model optimal.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Tuple

from ..errors import ModelAcqError
from .cnf import Assignment, Cnf, satisfies
from .sat import SatSolver

log = logging.getLogger(__name__)


class HardUnsat(ModelAcqError):
    """The hard clauses alone are unsatisfiable."""


class SolverBudgetExceeded(ModelAcqError):
    pass


@dataclass
class MaxSatResult:
    assignment: Assignment
    cost: int
    optimal: bool
    iterations: int


class _Totalizer:
    """Generalized totalizer with outputs capped at ``cap``.

    ``root`` maps each reachable sum (sums >= cap collapse onto ``cap``) to a
    literal forced true whenever the true inputs reach that sum.
    """

    def __init__(self, solver: SatSolver, inputs: List[Tuple[int, int]], cap: int):
        self.solver = solver
        self.cap = cap
        self.num_clauses = 0
        nodes = [{min(w, cap): lit} for lit, w in inputs]
        self.root = self._build(nodes) if nodes else {}

    def _new_var(self) -> int:
        self.solver.ensure_vars(self.solver.num_vars + 1)
        return self.solver.num_vars

    def _merge(self, a: Dict[int, int], b: Dict[int, int]) -> Dict[int, int]:
        cap = self.cap
        out: Dict[int, int] = {}

        def out_lit(s: int) -> int:
            s = min(s, cap)
            if s not in out:
                out[s] = self._new_var()
            return out[s]

        add = self.solver.add_clause
        for sa, la in a.items():
            add([-la, out_lit(sa)])
            self.num_clauses += 1
        for sb, lb in b.items():
            add([-lb, out_lit(sb)])
            self.num_clauses += 1
        for sa, la in a.items():
            for sb, lb in b.items():
                add([-la, -lb, out_lit(sa + sb)])
                self.num_clauses += 1
        return out

    def _build(self, nodes: List[Dict[int, int]]) -> Dict[int, int]:
        # balanced pairwise reduction keeps intermediate output sets small
        while len(nodes) > 1:
            nxt = []
            for i in range(0, len(nodes) - 1, 2):
                nxt.append(self._merge(nodes[i], nodes[i + 1]))
            if len(nodes) % 2:
                nxt.append(nodes[-1])
            nodes = nxt
        return nodes[0]

    def forbid_at_least(self, bound: int) -> bool:
        """Forbid every root output whose sum is >= ``bound``."""
        ok = True
        for s, lit in self.root.items():
            if s >= bound:
                ok = self.solver.add_clause([-lit]) and ok
        return ok


def _relax(cnf: Cnf, solver: SatSolver) -> List[Tuple[Tuple[int, ...], int, int]]:
    """Relaxation literal per soft clause, merging duplicates. Returns (clause, weight, lit)."""
    merged: Dict[Tuple[int, ...], int] = {}
    for c, w in cnf.soft():
        key = tuple(sorted(set(c)))
        merged[key] = merged.get(key, 0) + w
    relaxed = []
    for c, w in merged.items():
        if not c:
            relaxed.append((c, w, 0))  # always falsified
        elif len(c) == 1:
            relaxed.append((c, w, -c[0]))
        else:
            solver.ensure_vars(solver.num_vars + 1)
            r = solver.num_vars
            solver.add_clause(list(c) + [r])
            relaxed.append((c, w, r))
    return relaxed


def solve_maxsat(cnf: Cnf, max_iterations: Optional[int] = None,
                 max_conflicts: Optional[int] = None) -> MaxSatResult:
    """Minimize the total weight of falsified soft clauses subject to the hard ones.

    Raises :class:`HardUnsat` when the hard clauses are contradictory and
    :class:`SolverBudgetExceeded` if the first SAT call exhausts ``max_conflicts``.
    When a later call runs out of budget the best model so far is returned
    with ``optimal=False``.
    """
    solver = SatSolver(cnf.num_vars)
    for c in cnf.hard():
        if not solver.add_clause(c):
            raise HardUnsat("hard clauses are unsatisfiable")
    relaxed = _relax(cnf, solver)
    base_cost = sum(w for c, w, lit in relaxed if lit == 0)
    relaxed = [t for t in relaxed if t[2] != 0]

    # heavy soft clauses are decided first, towards satisfaction
    for c, w, lit in sorted(relaxed, key=lambda t: -t[1]):
        solver.set_phase(-lit)
        solver.bump(abs(lit), amount=w / max(1, max((t[1] for t in relaxed), default=1)))

    def true_cost(m: Assignment) -> int:
        return base_cost + sum(w for c, w, _ in relaxed if not satisfies(m, c))

    status = solver.solve(max_conflicts=max_conflicts)
    if status is None:
        raise SolverBudgetExceeded("no model found within the conflict budget")
    if not status:
        raise HardUnsat("hard clauses are unsatisfiable")
    best = solver.model()
    best_cost = true_cost(best)
    iterations = 1
    log.debug("maxsat: initial cost %d over %d soft clauses", best_cost, len(relaxed))
    if best_cost == base_cost or not relaxed:
        return MaxSatResult(_restrict(best, cnf.num_vars), best_cost, True, iterations)

    g = reduce(gcd, (w for _, w, _ in relaxed))
    inputs = [(lit, w // g) for _, w, lit in relaxed]
    bound = -(-(best_cost - base_cost) // g)  # scaled cost, rounded up
    tot = _Totalizer(solver, inputs, cap=bound)
    log.debug("maxsat: totalizer with %d root outputs, %d clauses", len(tot.root), tot.num_clauses)
    optimal = True
    while best_cost > base_cost:
        if max_iterations is not None and iterations >= max_iterations:
            optimal = False
            break
        scaled = (best_cost - base_cost) // g
        if not tot.forbid_at_least(scaled):
            break
        status = solver.solve(max_conflicts=max_conflicts)
        iterations += 1
        if status is None:
            optimal = False
            break
        if not status:
            break
        m = solver.model()
        c = true_cost(m)
        # true cost <= relaxed sum < previous bound, so every model improves
        assert c < best_cost, (c, best_cost)
        best, best_cost = m, c
        log.debug("maxsat: improved cost %d", best_cost)
    return MaxSatResult(_restrict(best, cnf.num_vars), best_cost, optimal, iterations)


def _restrict(m: Assignment, n: int) -> Assignment:
    return {v: m.get(v, False) for v in range(1, n + 1)}
