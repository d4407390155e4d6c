"""ARMS-lite: action models from partially observed traces via weighted MaxSAT.

Decision variables ``pre/add/del(S, F)`` exist for every action schema ``S``
(action name and arity) and every relevant fluent schema ``F``. For a
parameterized action a fluent schema is relevant when all its arguments are
action parameters; for an action without parameters every fluent is relevant
as a ground atom. Types play no part in learning.

Clause families, with their weights:

* hard: ``add -> not pre``, ``del -> pre``, ``not (add and del)``, and a
  fluent actually observed false before an action is not its precondition
* state: the truth of every fluent at every unobserved point is a variable
  tied to the effect variables by STRIPS successor-state clauses (hard), and
  a precondition must hold where its action is taken (hard).
* information (``info_weight``): the successor-state clauses that end in an
  observed value; they say a fluent seen false after an action was not added
  by it, one seen true was added or persisted, and so on. Those ending at
  the final observation use ``info3_default`` instead.
* precondition frequency: a fluent known true before at least ``threshold``
  of the occurrences where it is observed becomes a soft precondition of
  weight ``max(info3_default, round(rate * info_weight))``.
* plan constraints: consecutive action pairs sharing objects that occur at
  least ``min_support`` times with relative frequency ``>= threshold`` must be
  linked by some fluent (pre/pre not deleted, add/pre, or del/add), weight
  ``max(plan_default, round(rate * action_weight))``.

The initial state is known in full and the goal holds at the end. Up to
``upper_bound`` rounds are solved; after each round the unfixed schemas
with the highest occurrence count are frozen and their effects propagated into unknown
observations before re-encoding.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from ..logic import Cnf, HardUnsat, solve_maxsat, solve_sat, write_wcnf
from ..observation import ObservedTrace, TokenType
from ..pddl import Atom, LearnedAction, LearnedModel
from .common import (ExtractionError, object_types, param_types, require_tags, shared_vocabulary,
                     split_label)

log = logging.getLogger(__name__)

Schema = Tuple[str, int]  # action name, arity
FSchema = Tuple[str, Tuple[Union[int, str], ...]]  # predicate, positions or constants
View = List[Optional[bool]]


class Unsatisfiable(ExtractionError):
    pass


@dataclass(frozen=True)
class ArmsParams:
    upper_bound: int = 2
    min_support: int = 2
    action_weight: int = 110
    info_weight: int = 100
    threshold: float = 0.6
    info3_default: int = 30
    plan_default: int = 30

    def __post_init__(self):
        if self.upper_bound < 1 or self.min_support < 1:
            raise ValueError("upper_bound and min_support must be positive")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        for w in (self.action_weight, self.info_weight, self.info3_default, self.plan_default):
            if w <= 0:
                raise ValueError("weights must be positive")


@dataclass
class _Occ:
    trace: int
    step: int
    schema: Schema
    args: Tuple[str, ...]
    ground: Dict[FSchema, int]  # relevant fluent schema -> fluent id
    inv: Dict[int, List[FSchema]]


class _Problem:
    """Occurrences, relevant schemas and observation views shared by all rounds."""

    def __init__(self, observed: Sequence[ObservedTrace], init: Iterable[str], goal: Iterable[str]):
        self.fluents = shared_vocabulary(observed)
        index = {f: i for i, f in enumerate(self.fluents)}
        parsed = [f.split() for f in self.fluents]
        by_objects: Dict[FrozenSet[str], List[int]] = defaultdict(list)
        for i, (_, *objs) in enumerate(parsed):
            by_objects[frozenset(objs)].append(i)
        init_ids = {index[f] for f in init if f in index}
        goal_ids = {index[f] for f in goal if f in index}
        missing = (set(init) | set(goal)) - set(index)
        if missing:
            raise ExtractionError(f"init/goal fluents outside the vocabulary: {sorted(missing)[:5]}")

        self.views: List[List[View]] = []
        self.occs: List[_Occ] = []
        self.relevant: Dict[Schema, Set[FSchema]] = defaultdict(set)
        for t, o in enumerate(observed):
            views = [list(tok.view) if tok.view is not None else [None] * len(self.fluents) for tok in o.tokens]
            if views:
                views[0] = [i in init_ids for i in range(len(self.fluents))]
                for g in goal_ids:
                    if views[-1][g] is None:
                        views[-1][g] = True
            self.views.append(views)
            for j, tok in enumerate(o.tokens[:-1]):
                if tok.action is None:
                    raise ExtractionError(f"trace {t} step {j} has no action label")
                name, args = split_label(tok.action)
                schema = (name, len(args))
                ground: Dict[FSchema, int] = {}
                if not args:
                    for i, (p, *objs) in enumerate(parsed):
                        ground[(p, tuple(objs))] = i
                else:
                    argset = set(args)
                    for objs_key, ids in by_objects.items():
                        if not objs_key <= argset:
                            continue
                        for i in ids:
                            p, *objs = parsed[i]
                            choices = [[k for k, a in enumerate(args) if a == ob] for ob in objs]
                            for pos in product(*choices):
                                ground[(p, pos)] = i
                inv: Dict[int, List[FSchema]] = defaultdict(list)
                for fs, i in ground.items():
                    inv[i].append(fs)
                self.relevant[schema].update(ground)
                self.occs.append(_Occ(t, j, schema, args, ground, dict(inv)))
        self.by_step = {(oc.trace, oc.step): oc for oc in self.occs}
        self.counts = Counter(oc.schema for oc in self.occs)
        self.base_views = [[list(v) for v in vs] for vs in self.views]
        self.contradicted = {(oc.schema, fs) for oc in self.occs for fs, f in oc.ground.items()
                             if self.base_views[oc.trace][oc.step][f] is False}


class _Encoder:
    def __init__(self, prob: _Problem, params: ArmsParams):
        self.p = prob
        self.params = params
        self.cnf = Cnf()
        self.var: Dict[Tuple[str, Schema, FSchema], int] = {}
        for s in sorted(prob.relevant):
            for fs in sorted(prob.relevant[s], key=repr):
                for kind in ("pre", "add", "del"):
                    self.var[(kind, s, fs)] = self.cnf.new_var()

    def v(self, kind: str, s: Schema, fs: FSchema) -> int:
        return self.var[(kind, s, fs)]

    def encode(self, views: List[List[View]], fixed: Dict[Schema, Dict[str, Set[FSchema]]]) -> Cnf:
        p, cnf = self.p, self.cnf
        for s in sorted(p.relevant):
            for fs in sorted(p.relevant[s], key=repr):
                pre, add, dele = (self.v(k, s, fs) for k in ("pre", "add", "del"))
                cnf.add_clause([-add, -pre])
                cnf.add_clause([-dele, pre])
                cnf.add_clause([-add, -dele])
                if (s, fs) in p.contradicted:
                    cnf.add_clause([-pre])
                if s in fixed:
                    for kind in ("pre", "add", "del"):
                        x = self.v(kind, s, fs)
                        cnf.add_clause([x if fs in fixed[s][kind] else -x])
        self._information(views)
        self._frequency(views)
        self._plan_constraints()
        return cnf

    def _information(self, views: List[List[View]]) -> None:
        """Successor-state clauses per trace and fluent.

        ``x[m]`` is the truth of the fluent at token ``m``: a constant where
        observed (or inferable without any relevant action), else a fresh
        variable. Across step ``j`` with add literals ``A`` and delete literals
        ``D`` of the acting schema, ``x[j+1] = A or (x[j] and not D)``.
        Clauses defining an unobserved ``x[j+1]`` are hard; clauses whose
        target is observed are information constraints.
        """
        p, prm, cnf = self.p, self.params, self.cnf
        for t, vs in enumerate(views):
            last = len(vs) - 1
            for f in range(len(p.fluents)):
                x: Union[bool, int] = vs[0][f] if vs and vs[0][f] is not None else cnf.new_var()
                for j in range(last):
                    oc = p.by_step[(t, j)]
                    fss = oc.inv.get(f, ())
                    adds = [self.v("add", oc.schema, fs) for fs in fss]
                    dels = [self.v("del", oc.schema, fs) for fs in fss]
                    for fs in fss:
                        self._clause([-self.v("pre", oc.schema, fs), x], None)
                    y = vs[j + 1][f]
                    if y is None:
                        if not fss:
                            continue  # frame: x carries over unchanged
                        y = cnf.new_var()
                        weight = None
                    else:
                        weight = prm.info3_default if j + 1 == last else prm.info_weight
                    for a in adds:
                        self._clause([-a, y], weight)
                    self._clause([_neg(x)] + dels + [y], weight)
                    self._clause([_neg(y)] + adds + [x], weight)
                    for d in dels:
                        self._clause([_neg(y)] + adds + [-d], weight)
                    x = y

    def _clause(self, lits: List[Union[bool, int]], weight: Optional[int]) -> None:
        """Add after simplifying boolean constants; drop satisfied or empty clauses."""
        out = []
        for lit in lits:
            if lit is True:
                return
            if lit is not False:
                out.append(lit)
        if out:
            self.cnf.add_clause(sorted(set(out)), weight)

    def _frequency(self, views: List[List[View]]) -> None:
        p, prm, cnf = self.p, self.params, self.cnf
        seen: Dict[Tuple[Schema, FSchema], List[int]] = defaultdict(lambda: [0, 0])
        for oc in p.occs:
            view = views[oc.trace][oc.step]
            for fs, f in oc.ground.items():
                if view[f] is not None:
                    c = seen[(oc.schema, fs)]
                    c[0] += 1
                    c[1] += view[f]
        for (s, fs), (n, true) in sorted(seen.items(), key=repr):
            rate = true / n
            if true and rate >= prm.threshold:
                cnf.add_clause([self.v("pre", s, fs)], max(prm.info3_default, round(rate * prm.info_weight)))

    def frequent_pairs(self) -> List[Tuple[Schema, Schema, Tuple[Optional[int], ...], float]]:
        p, prm = self.p, self.params
        support: Counter = Counter()
        followed: Counter = Counter()
        for oc in p.occs:
            nxt = p.by_step.get((oc.trace, oc.step + 1))
            if nxt is None:
                continue
            followed[oc.schema] += 1
            if not set(oc.args) & set(nxt.args):
                continue
            mapping = tuple(oc.args.index(a) if a in oc.args else None for a in nxt.args)
            support[(oc.schema, nxt.schema, mapping)] += 1
        out = []
        for (s1, s2, mapping), n in sorted(support.items(), key=repr):
            rate = n / followed[s1]
            if n >= prm.min_support and rate >= prm.threshold:
                out.append((s1, s2, mapping, rate))
        return out

    def _plan_constraints(self) -> None:
        p, prm, cnf = self.p, self.params, self.cnf
        for s1, s2, mapping, rate in self.frequent_pairs():
            disjuncts = []
            for f2 in sorted(p.relevant[s2], key=repr):
                pred, args = f2
                if any(isinstance(a, int) and mapping[a] is None for a in args):
                    continue
                f1 = (pred, tuple(mapping[a] if isinstance(a, int) else a for a in args))
                if f1 not in p.relevant[s1]:
                    continue
                v = lambda k, s, fs: self.v(k, s, fs)  # noqa: E731
                disjuncts.append([v("pre", s1, f1), v("pre", s2, f2), -v("del", s1, f1)])
                disjuncts.append([v("add", s1, f1), v("pre", s2, f2)])
                disjuncts.append([v("del", s1, f1), v("add", s2, f2)])
            if not disjuncts:
                continue
            aux = []
            for conj in disjuncts:
                z = cnf.new_var()
                for lit in conj:
                    cnf.add_clause([-z, lit])
                aux.append(z)
            cnf.add_clause(aux, max(prm.plan_default, round(rate * prm.action_weight)))

    def decode(self, assignment) -> Dict[Schema, Dict[str, Set[FSchema]]]:
        out: Dict[Schema, Dict[str, Set[FSchema]]] = {s: {"pre": set(), "add": set(), "del": set()}
                                                     for s in self.p.relevant}
        for (kind, s, fs), x in self.var.items():
            if assignment.get(x):
                out[s][kind].add(fs)
        return out


def _neg(lit: Union[bool, int]) -> Union[bool, int]:
    return (not lit) if isinstance(lit, bool) else -lit


def _propagate(prob: _Problem, views: List[List[View]], fixed: Dict[Schema, Dict[str, Set[FSchema]]]) -> None:
    """Fill unknown values that follow from frozen schemas, frame included."""
    for oc in prob.occs:
        if oc.schema not in fixed:
            continue
        m = fixed[oc.schema]
        before, after = views[oc.trace][oc.step], views[oc.trace][oc.step + 1]
        for fs in m["pre"]:
            f = oc.ground[fs]
            if before[f] is None:
                before[f] = True
        changed = set()
        for fs in m["del"]:
            f = oc.ground[fs]
            changed.add(f)
            if after[f] is None:
                after[f] = False
        for fs in m["add"]:
            f = oc.ground[fs]
            changed.add(f)
            if after[f] is None:
                after[f] = True
        for f, v in enumerate(before):
            if v is not None and f not in changed and after[f] is None:
                after[f] = v


def encode_arms(observed: Sequence[ObservedTrace], params: ArmsParams, init: Iterable[str],
                goal: Iterable[str]) -> Cnf:
    """First-round encoding only, e.g. for dumping to an external solver."""
    prob = _Problem(observed, init, goal)
    return _Encoder(prob, params).encode(prob.views, {})


def dump_wcnf(observed: Sequence[ObservedTrace], params: ArmsParams, init: Iterable[str],
              goal: Iterable[str]) -> str:
    return write_wcnf(encode_arms(observed, params, init, goal))


def _atom(fs: FSchema) -> Atom:
    pred, args = fs
    return Atom(pred, tuple(f"?x{a + 1}" if isinstance(a, int) else a for a in args))


def extract_arms(observed: Sequence[ObservedTrace], params: ArmsParams = ArmsParams(),
                 init: Iterable[str] = (), goal: Iterable[str] = (),
                 max_conflicts: Optional[int] = None) -> LearnedModel:
    require_tags(observed, {TokenType.IDENTITY, TokenType.PARTIAL_STATE}, "arms")
    init, goal = list(init), list(goal)
    prob = _Problem(observed, init, goal)
    model = LearnedModel(fluents=prob.fluents)
    if not prob.occs:
        return model

    views = [[list(v) for v in vs] for vs in prob.views]
    fixed: Dict[Schema, Dict[str, Set[FSchema]]] = {}
    order = sorted(prob.counts, key=lambda s: (-prob.counts[s], s))
    learned = {}
    for rnd in range(params.upper_bound):
        enc = _Encoder(prob, params)
        cnf = enc.encode(views, fixed)
        log.info("arms round %d: %d vars, %d clauses", rnd + 1, cnf.num_vars, len(cnf))
        try:
            res = solve_maxsat(cnf, max_conflicts=max_conflicts)
        except HardUnsat as e:
            raise Unsatisfiable(str(e)) from None
        learned = enc.decode(res.assignment)
        unfixed = [s for s in order if s not in fixed]
        if rnd == params.upper_bound - 1 or not unfixed:
            break
        top = prob.counts[unfixed[0]]
        for s in unfixed:
            if prob.counts[s] == top:
                fixed[s] = learned[s]
        _propagate(prob, views, fixed)

    # guard: preconditions contradicted by an observation never survive decoding
    contradicted = prob.contradicted
    types = object_types(observed)
    for s in sorted(learned):
        name, arity = s
        sets = learned[s]
        variables = tuple(f"?x{i + 1}" for i in range(arity))
        ptypes = param_types((oc.args for oc in prob.occs if oc.schema == s), types, arity)
        model.add_action(LearnedAction(
            name, tuple(zip(variables, ptypes)),
            {_atom(fs) for fs in sets["pre"] if (s, fs) not in contradicted},
            {_atom(fs) for fs in sets["add"]},
            {_atom(fs) for fs in sets["del"]},
        ))
    return model


def hard_clauses_hold(model: LearnedModel, observed: Sequence[ObservedTrace], params: ArmsParams,
                      init: Iterable[str] = (), goal: Iterable[str] = ()) -> bool:
    """True when ``model`` extends to a model of the hard first-round clauses.

    Every pre/add/del variable is pinned to the model; the state variables
    stay free and are left to the SAT solver.
    """
    prob = _Problem(observed, list(init), list(goal))
    enc = _Encoder(prob, params)
    hard = enc.encode(prob.views, {}).hard_part()
    by_schema = {(a.name, len(a.params)): a for a in model.actions.values() if not a.objects}
    sets = {"pre": "precond", "add": "add", "del": "delete"}
    for (kind, s, fs), x in enc.var.items():
        a = by_schema.get(s)
        present = a is not None and _atom(fs) in getattr(a, sets[kind])
        hard.add_clause([x if present else -x])
    return solve_sat(hard) is not None
