"""Decision-DNNF compilation, conditioning and model counting.

Compilation records the search tree of an exhaustive DPLL procedure with
unit propagation, connected-component decomposition and formula caching.
Every OR node produced is a decision on one variable, so determinism holds
by construction; components never share variables, so AND nodes are
decomposable.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from itertools import count as _counter
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from ..errors import ModelAcqError
from .cnf import Assignment, Cnf

TRUE, FALSE, LIT, AND, OR = "true", "false", "lit", "and", "or"


class CapExceeded(ModelAcqError):
    pass


class InvalidDdnnf(ModelAcqError):
    pass


_ids = _counter()


@dataclass(frozen=True, eq=False)
class Node:
    kind: str
    lit: int = 0
    children: Tuple["Node", ...] = ()
    vars: FrozenSet[int] = frozenset()
    uid: int = field(default_factory=lambda: next(_ids))

    def __repr__(self):
        if self.kind == LIT:
            return f"Lit({self.lit})"
        if self.kind in (TRUE, FALSE):
            return self.kind.capitalize()
        return f"{self.kind.capitalize()}#{self.uid}({len(self.children)})"


class _Factory:
    """Hash-consing node constructor with the usual simplifications."""

    def __init__(self):
        self.unique: Dict[tuple, Node] = {}
        self.true = self._make(TRUE)
        self.false = self._make(FALSE)

    def _make(self, kind, lit=0, children=(), vars=frozenset()):
        key = (kind, lit, tuple(c.uid for c in children))
        node = self.unique.get(key)
        if node is None:
            node = Node(kind, lit, tuple(children), frozenset(vars))
            self.unique[key] = node
        return node

    def lit(self, l: int) -> Node:
        return self._make(LIT, l, (), frozenset((abs(l),)))

    def conj(self, children: Iterable[Node]) -> Node:
        flat: List[Node] = []
        for c in children:
            if c.kind == FALSE:
                return self.false
            if c.kind == TRUE:
                continue
            if c.kind == AND:
                flat.extend(c.children)
            else:
                flat.append(c)
        if not flat:
            return self.true
        if len(flat) == 1:
            return flat[0]
        flat.sort(key=lambda n: n.uid)
        vs = frozenset().union(*(c.vars for c in flat))
        return self._make(AND, 0, flat, vs)

    def disj(self, children: Iterable[Node], decision: int = 0) -> Node:
        kids = [c for c in children if c.kind != FALSE]
        if not kids:
            return self.false
        if len(kids) == 1:
            return kids[0]
        vs = frozenset().union(*(c.vars for c in kids))
        return self._make(OR, decision, kids, vs)


_FACTORY = _Factory()


@dataclass(frozen=True)
class Ddnnf:
    """A compiled circuit over variables ``1..num_vars``."""

    root: Node
    num_vars: int

    def __repr__(self):
        return f"Ddnnf(root={self.root!r}, num_vars={self.num_vars}, size={self.size()})"

    def nodes(self) -> List[Node]:
        seen: Dict[int, Node] = {}
        stack = [self.root]
        while stack:
            n = stack.pop()
            if n.uid in seen:
                continue
            seen[n.uid] = n
            stack.extend(n.children)
        return list(seen.values())

    def size(self) -> int:
        return len(self.nodes())

    @property
    def is_false(self) -> bool:
        return self.root.kind == FALSE


# -- compilation -------------------------------------------------------------


def _propagate(clauses: FrozenSet[FrozenSet[int]], lit: int):
    """Assign ``lit`` and unit-propagate. Returns (implied literals, residual) or None."""
    implied = [lit]
    assigned = {lit}
    current = clauses
    queue = [lit]
    while queue:
        l = queue.pop()
        nxt = set()
        for c in current:
            if l in c:
                continue
            if -l in c:
                c = c - {-l}
                if not c:
                    return None
                if len(c) == 1:
                    (u,) = c
                    if -u in assigned:
                        return None
                    if u not in assigned:
                        assigned.add(u)
                        implied.append(u)
                        queue.append(u)
                    continue
            nxt.add(c)
        current = frozenset(c for c in nxt if not (c & assigned))
    return implied, current


def _components(clauses: FrozenSet[FrozenSet[int]]) -> List[FrozenSet[FrozenSet[int]]]:
    parent: Dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in clauses:
        vs = [abs(l) for l in c]
        r = find(vs[0])
        for v in vs[1:]:
            rv = find(v)
            if rv != r:
                parent[rv] = r
    groups: Dict[int, set] = {}
    for c in clauses:
        groups.setdefault(find(abs(next(iter(c)))), set()).add(c)
    return [frozenset(g) for g in groups.values()]


class _Compiler:
    def __init__(self, factory: _Factory):
        self.f = factory
        self.cache: Dict[FrozenSet[FrozenSet[int]], Node] = {}

    def compile(self, clauses: FrozenSet[FrozenSet[int]]) -> Node:
        if not clauses:
            return self.f.true
        hit = self.cache.get(clauses)
        if hit is not None:
            return hit
        comps = _components(clauses)
        if len(comps) > 1:
            node = self.f.conj(self._decide(c) for c in comps)
        else:
            node = self._decide(clauses)
        self.cache[clauses] = node
        return node

    def _decide(self, clauses: FrozenSet[FrozenSet[int]]) -> Node:
        hit = self.cache.get(clauses)
        if hit is not None:
            return hit
        occ: Dict[int, int] = {}
        for c in clauses:
            for l in c:
                occ[abs(l)] = occ.get(abs(l), 0) + 1
        # most frequent variable, lowest index on ties
        v = min(occ, key=lambda x: (-occ[x], x))
        branches = []
        for lit in (v, -v):
            res = _propagate(clauses, lit)
            if res is None:
                continue
            implied, rest = res
            sub = self.compile(rest)
            branches.append(self.f.conj([self.f.lit(u) for u in implied] + [sub]))
        node = self.f.disj(branches, decision=v)
        self.cache[clauses] = node
        return node


def compile_ddnnf(cnf: Cnf, cap: int = 64) -> Ddnnf:
    """Compile the hard clauses of ``cnf`` into a Decision-DNNF."""
    if cnf.num_vars > cap:
        raise CapExceeded(f"{cnf.num_vars} variables exceeds the compilation cap of {cap}")
    f = _FACTORY
    clauses = set()
    for c in cnf.hard():
        cl = frozenset(c)
        if not cl:
            return Ddnnf(f.false, cnf.num_vars)
        if any(-l in cl for l in cl):
            continue
        clauses.add(cl)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10000))
    try:
        root = _Compiler(f).compile(frozenset(clauses))
    finally:
        sys.setrecursionlimit(old)
    return Ddnnf(root, cnf.num_vars)


# -- queries -----------------------------------------------------------------


def count_models(d: Ddnnf) -> int:
    """Number of assignments to ``1..num_vars`` satisfying ``d``."""
    memo: Dict[int, int] = {}

    def rec(n: Node) -> int:
        r = memo.get(n.uid)
        if r is not None:
            return r
        if n.kind == TRUE:
            r = 1
        elif n.kind == FALSE:
            r = 0
        elif n.kind == LIT:
            r = 1
        elif n.kind == AND:
            r = 1
            for c in n.children:
                r *= rec(c)
                if r == 0:
                    break
        else:
            r = sum(rec(c) << (len(n.vars) - len(c.vars)) for c in n.children)
        memo[n.uid] = r
        return r

    return rec(d.root) << (d.num_vars - len(d.root.vars))


def _restrict(n: Node, lit: int, memo: Dict[int, Node]) -> Node:
    """``n`` with ``lit`` set true: a node not mentioning ``abs(lit)``."""
    if abs(lit) not in n.vars:
        return n
    r = memo.get(n.uid)
    if r is not None:
        return r
    f = _FACTORY
    if n.kind == LIT:
        r = f.true if n.lit == lit else f.false
    elif n.kind == AND:
        r = f.conj(_restrict(c, lit, memo) for c in n.children)
    else:
        r = f.disj((_restrict(c, lit, memo) for c in n.children), decision=n.lit)
    memo[n.uid] = r
    return r


def condition(d: Ddnnf, lit: int) -> Ddnnf:
    """Return ``d AND lit`` as a d-DNNF (possibly the false node)."""
    if lit == 0 or abs(lit) > d.num_vars:
        raise ValueError(f"literal {lit} outside 1..{d.num_vars}")
    f = _FACTORY
    body = _restrict(d.root, lit, {})
    return Ddnnf(f.conj([f.lit(lit), body]), d.num_vars)


def evaluate(d: Ddnnf, assignment: Assignment) -> bool:
    memo: Dict[int, bool] = {}

    def rec(n: Node) -> bool:
        r = memo.get(n.uid)
        if r is not None:
            return r
        if n.kind == TRUE:
            r = True
        elif n.kind == FALSE:
            r = False
        elif n.kind == LIT:
            r = assignment.get(abs(n.lit), False) == (n.lit > 0)
        elif n.kind == AND:
            r = all(rec(c) for c in n.children)
        else:
            r = any(rec(c) for c in n.children)
        memo[n.uid] = r
        return r

    return rec(d.root)


def _entailed_lits(n: Node) -> FrozenSet[int]:
    if n.kind == LIT:
        return frozenset((n.lit,))
    if n.kind == AND:
        return frozenset(c.lit for c in n.children if c.kind == LIT)
    return frozenset()


def validate(d: Ddnnf) -> None:
    """Check decomposability and (decision) determinism node by node.

    Raises :class:`InvalidDdnnf` naming the offending node.
    """
    for n in d.nodes():
        if n.kind == AND:
            seen: set = set()
            for c in n.children:
                if seen & c.vars:
                    raise InvalidDdnnf(f"{n!r}: children share variables {sorted(seen & c.vars)}")
                seen |= c.vars
            if seen != n.vars:
                raise InvalidDdnnf(f"{n!r}: stale variable set")
        elif n.kind == OR:
            if len(n.children) != 2 or not n.lit:
                raise InvalidDdnnf(f"{n!r}: OR node is not a binary decision")
            v = n.lit
            lits = [_entailed_lits(c) for c in n.children]
            if not ((v in lits[0] and -v in lits[1]) or (-v in lits[0] and v in lits[1])):
                raise InvalidDdnnf(f"{n!r}: children do not disagree on decision variable {v}")
            if n.vars != frozenset().union(*(c.vars for c in n.children)):
                raise InvalidDdnnf(f"{n!r}: stale variable set")
        elif n.kind == LIT and n.vars != frozenset((abs(n.lit),)):
            raise InvalidDdnnf(f"{n!r}: bad variable set")
    if any(v > d.num_vars for v in d.root.vars):
        raise InvalidDdnnf("root mentions variables beyond num_vars")


def smallest_model(d: Ddnnf, order: Optional[Sequence[int]] = None) -> Optional[Assignment]:
    """Lexicographically smallest model with False < True along ``order``."""
    if count_models(d) == 0:
        return None
    order = list(order) if order is not None else list(range(1, d.num_vars + 1))
    out: Assignment = {}
    for v in order:
        neg = condition(d, -v)
        if count_models(neg) > 0:
            d, out[v] = neg, False
        else:
            d, out[v] = condition(d, v), True
    return out
