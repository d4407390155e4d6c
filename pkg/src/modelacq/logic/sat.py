"""CDCL SAT solver: two watched literals, VSIDS activities, Luby restarts,
first-UIP clause learning and phase saving.

The solver is incremental in the weak sense linear-search MaxSAT needs:
clauses may be added between calls to :meth:`SatSolver.solve`.
"""

from __future__ import annotations

import heapq
from typing import Iterable, List, Optional

from .cnf import Assignment, Cnf

_UNDEF = 0
_TRUE = 1
_FALSE = -1


def _luby(i: int) -> int:
    # i is 1-based
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


class SatSolver:
    """Conflict-driven clause learning over integer literals.

    Variables are ``1..num_vars``; literal ``-v`` is the negation of ``v``.
    """

    def __init__(self, num_vars: int = 0, restart_base: int = 100, var_decay: float = 0.95):
        self.num_vars = 0
        self.ok = True
        # literal code: 2*v for v, 2*v+1 for -v
        self.watches: List[List[list]] = [[], []]
        self.lit_val: List[int] = [_UNDEF, _UNDEF]
        self.level: List[int] = [0]
        self.reason: List[Optional[list]] = [None]
        self.activity: List[float] = [0.0]
        self.phase: List[bool] = [False]
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.var_inc = 1.0
        self.var_decay = var_decay
        self.restart_base = restart_base
        self.heap: List[tuple] = []
        self.learnts: List[list] = []
        self.max_learnts = 2000
        self.conflicts = 0
        self.decisions = 0
        self.ensure_vars(num_vars)

    # -- bookkeeping -------------------------------------------------------

    def ensure_vars(self, n: int) -> None:
        while self.num_vars < n:
            self.num_vars += 1
            v = self.num_vars
            self.watches += [[], []]
            self.lit_val += [_UNDEF, _UNDEF]
            self.level.append(0)
            self.reason.append(None)
            self.activity.append(0.0)
            self.phase.append(False)
            heapq.heappush(self.heap, (0.0, v))

    @staticmethod
    def _code(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def value(self, lit: int) -> int:
        return self.lit_val[2 * lit if lit > 0 else -2 * lit + 1]

    def _enqueue(self, lit: int, reason: Optional[list]) -> None:
        v = lit if lit > 0 else -lit
        lv = self.lit_val
        if lit > 0:
            lv[2 * v] = _TRUE
            lv[2 * v + 1] = _FALSE
        else:
            lv[2 * v] = _FALSE
            lv[2 * v + 1] = _TRUE
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def bump(self, v: int, amount: float = 1.0) -> None:
        """Raise the decision priority of ``v`` (also usable as an initial hint)."""
        self.activity[v] += self.var_inc * amount
        if self.activity[v] > 1e100:
            for i in range(1, self.num_vars + 1):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[i], i) for i in range(1, self.num_vars + 1)
                         if self.lit_val[2 * i] == _UNDEF]
            heapq.heapify(self.heap)
        else:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def set_phase(self, lit: int) -> None:
        self.ensure_vars(abs(lit))
        self.phase[abs(lit)] = lit > 0

    # -- clause database ---------------------------------------------------

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a clause at decision level 0. Returns False once UNSAT is known."""
        if not self.ok:
            return False
        if self.trail_lim:
            self._backtrack(0)
        seen = set()
        clause = []
        for l in lits:
            self.ensure_vars(abs(l))
            if -l in seen:
                return True  # tautology
            if l in seen:
                continue
            val = self.value(l)
            if val == _TRUE:
                return True
            if val == _FALSE:
                continue
            seen.add(l)
            clause.append(l)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self.watches[self._code(clause[0])].append(clause)
        self.watches[self._code(clause[1])].append(clause)
        return True

    def add_cnf(self, cnf: Cnf) -> bool:
        self.ensure_vars(cnf.num_vars)
        for c in cnf.hard():
            if not self.add_clause(c):
                return False
        return True

    # -- search ------------------------------------------------------------

    def _propagate(self) -> Optional[list]:
        lv = self.lit_val
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            false_lit = -p
            fcode = 2 * false_lit if false_lit > 0 else -2 * false_lit + 1
            ws = watches[fcode]
            keep = []
            n = len(ws)
            i = 0
            while i < n:
                c = ws[i]
                i += 1
                if not c:  # deleted learnt clause
                    continue
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                fval = lv[2 * first if first > 0 else -2 * first + 1]
                if fval == _TRUE:
                    keep.append(c)
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if lv[2 * lk if lk > 0 else -2 * lk + 1] != _FALSE:
                        c[1] = lk
                        c[k] = false_lit
                        watches[2 * lk if lk > 0 else -2 * lk + 1].append(c)
                        break
                else:
                    keep.append(c)
                    if fval == _FALSE:
                        keep.extend(ws[i:])
                        watches[fcode] = keep
                        return c
                    self._enqueue(first, c)
            watches[fcode] = keep
        return None

    def _analyze(self, confl: list):
        seen = set()
        learnt = [0]
        path = 0
        p = None
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        c = confl
        while True:
            for q in (c if p is None else c[1:]):
                v = q if q > 0 else -q
                if v not in seen and self.level[v] > 0:
                    seen.add(v)
                    self.bump(v)
                    if self.level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while True:
                lit = self.trail[idx]
                idx -= 1
                if abs(lit) in seen:
                    break
            p = lit
            v = abs(p)
            path -= 1
            if path == 0:
                break
            c = self.reason[v]
        learnt[0] = -p
        learnt = self._minimize(learnt)
        if len(learnt) == 1:
            back = 0
        else:
            best = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = self.level[abs(learnt[1])]
        return learnt, back

    def _minimize(self, learnt: List[int]) -> List[int]:
        # local minimization: drop literals whose reason is subsumed by the clause
        in_clause = {abs(l) for l in learnt}
        out = [learnt[0]]
        for l in learnt[1:]:
            r = self.reason[abs(l)]
            if r is None:
                out.append(l)
                continue
            if all(abs(q) in in_clause or self.level[abs(q)] == 0 for q in r[1:]):
                continue
            out.append(l)
        return out

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        lim = self.trail_lim[lvl]
        lv = self.lit_val
        for lit in reversed(self.trail[lim:]):
            v = abs(lit)
            self.phase[v] = lit > 0
            lv[2 * v] = _UNDEF
            lv[2 * v + 1] = _UNDEF
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[lim:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick_branch(self) -> int:
        heap = self.heap
        lv = self.lit_val
        while heap:
            neg_act, v = heapq.heappop(heap)
            if lv[2 * v] == _UNDEF and -neg_act == self.activity[v]:
                return v if self.phase[v] else -v
        for v in range(1, self.num_vars + 1):
            if lv[2 * v] == _UNDEF:
                return v if self.phase[v] else -v
        return 0

    def _reduce_db(self) -> None:
        locked = set()
        for lit in self.trail:
            r = self.reason[abs(lit)]
            if r is not None:
                locked.add(id(r))
        self.learnts.sort(key=len)
        keep = len(self.learnts) // 2
        survivors = []
        for i, c in enumerate(self.learnts):
            if i < keep or id(c) in locked or len(c) <= 2:
                survivors.append(c)
            else:
                c.clear()
        self.learnts = survivors
        self.max_learnts = int(self.max_learnts * 1.1)

    def solve(self, max_conflicts: Optional[int] = None) -> Optional[bool]:
        """Return True (SAT), False (UNSAT) or None (conflict budget hit)."""
        if not self.ok:
            return False
        self._backtrack(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        restarts = 0
        budget = self.restart_base * _luby(1)
        since_restart = 0
        start_conflicts = self.conflicts
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.watches[self._code(learnt[0])].append(learnt)
                    self.watches[self._code(learnt[1])].append(learnt)
                    self.learnts.append(learnt)
                    self._enqueue(learnt[0], learnt)
                self.var_inc /= self.var_decay
                if max_conflicts is not None and self.conflicts - start_conflicts >= max_conflicts:
                    self._backtrack(0)
                    return None
                continue
            if since_restart >= budget:
                restarts += 1
                since_restart = 0
                budget = self.restart_base * _luby(restarts + 1)
                self._backtrack(0)
                if len(self.heap) > 8 * self.num_vars + 64:
                    self.heap = [(-self.activity[i], i) for i in range(1, self.num_vars + 1)
                                 if self.lit_val[2 * i] == _UNDEF]
                    heapq.heapify(self.heap)
                continue
            if len(self.learnts) - len(self.trail) >= self.max_learnts:
                self._reduce_db()
            lit = self._pick_branch()
            if lit == 0:
                return True
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)

    def model(self) -> Assignment:
        """Assignment of the last satisfying call; unassigned variables read False."""
        return {v: self.lit_val[2 * v] == _TRUE for v in range(1, self.num_vars + 1)}


def solve_sat(cnf: Cnf) -> Optional[Assignment]:
    """Return a satisfying assignment of the hard clauses of ``cnf`` or None."""
    s = SatSolver(cnf.num_vars)
    if not s.add_cnf(cnf):
        return None
    if not s.solve():
        return None
    m = s.model()
    return {v: m[v] for v in range(1, cnf.num_vars + 1)}
