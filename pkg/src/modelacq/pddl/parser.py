"""Reader for the ``:strips`` + ``:typing`` subset of PDDL.

Identifiers are case-insensitive and normalized to lowercase. Anything outside
the subset (ADL connectives, conditional effects, numeric fluents, durative
actions, ...) is rejected with :class:`UnsupportedFeature`.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple, Union

from .model import (ROOT_TYPE, ArityMismatch, Atom, Domain, Fluent, LiftedAction, PDDLSyntaxError,
                    PlanningObject, Problem, TypeMismatch, UndeclaredObject, UndeclaredPredicate,
                    UndeclaredType, UnsupportedFeature)

SUPPORTED_REQUIREMENTS = {":strips", ":typing"}

_TOKEN = re.compile(r";[^\n]*|\(|\)|[^\s()]+")

# keywords that signal formulas or effects beyond STRIPS
_UNSUPPORTED_FORMULA = {
    "not": "negative-preconditions",
    "or": "disjunctive-preconditions",
    "imply": "disjunctive-preconditions",
    "exists": "existential-preconditions",
    "forall": "universal-preconditions",
    "=": "equality",
    "when": "conditional-effects",
    "increase": "action-costs",
    "decrease": "numeric-fluents",
    "assign": "numeric-fluents",
}
_UNSUPPORTED_SECTIONS = {
    ":functions": "numeric-fluents",
    ":derived": "derived-predicates",
    ":durative-action": "durative-actions",
    ":metric": "action-costs",
    ":constraints": "constraints",
    ":timed-initial-literals": "timed-initial-literals",
}


class Tok(str):
    """A lowercase token that remembers where it came from."""

    line: int
    col: int

    def __new__(cls, text: str, line: int, col: int):
        t = super().__new__(cls, text.lower())
        t.line, t.col = line, col
        return t


SExpr = Union[Tok, "SList"]


class SList(list):
    line: int = 0
    col: int = 0


def _pos(x) -> Tuple[int, int]:
    return getattr(x, "line", 0), getattr(x, "col", 0)


def tokenize(text: str) -> List[Tok]:
    toks = []
    line_starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            line_starts.append(i + 1)
    line = 0
    for m in _TOKEN.finditer(text):
        s = m.group()
        if s.startswith(";"):
            continue
        while line + 1 < len(line_starts) and line_starts[line + 1] <= m.start():
            line += 1
        toks.append(Tok(s, line + 1, m.start() - line_starts[line] + 1))
    return toks


def read_sexpr(text: str) -> SList:
    toks = tokenize(text)
    if not toks:
        raise PDDLSyntaxError("empty input", 1, 1)
    stack: List[SList] = []
    result: Optional[SList] = None
    for t in toks:
        if t == "(":
            lst = SList()
            lst.line, lst.col = t.line, t.col
            if stack:
                stack[-1].append(lst)
            elif result is not None:
                raise PDDLSyntaxError("trailing content after top-level expression", t.line, t.col)
            stack.append(lst)
        elif t == ")":
            if not stack:
                raise PDDLSyntaxError("unbalanced ')'", t.line, t.col)
            done = stack.pop()
            if not stack:
                result = done
        else:
            if not stack:
                raise PDDLSyntaxError(f"unexpected token {t!r} outside parentheses", t.line, t.col)
            stack[-1].append(t)
    if stack:
        raise PDDLSyntaxError("unclosed '('", stack[-1].line, stack[-1].col)
    assert result is not None
    return result


def _expect_list(x, what: str) -> SList:
    if not isinstance(x, SList):
        raise PDDLSyntaxError(f"expected {what}, got {x!r}", *_pos(x))
    return x


def _expect_name(x, what: str) -> Tok:
    if not isinstance(x, Tok) or x in ("(", ")"):
        raise PDDLSyntaxError(f"expected {what}, got {x!r}", *_pos(x))
    return x


def parse_typed_list(items: List[SExpr], variables: bool) -> List[Tuple[str, str]]:
    out: List[Tuple[str, str]] = []
    pending: List[Tok] = []
    i = 0
    while i < len(items):
        it = items[i]
        if isinstance(it, SList):
            if it and it[0] == "either":
                raise UnsupportedFeature("either", it.line, it.col)
            raise PDDLSyntaxError("unexpected list in typed list", it.line, it.col)
        if it == "-":
            if i + 1 >= len(items):
                raise PDDLSyntaxError("dangling '-' in typed list", it.line, it.col)
            t = items[i + 1]
            if isinstance(t, SList):
                if t and t[0] == "either":
                    raise UnsupportedFeature("either", t.line, t.col)
                raise PDDLSyntaxError("expected type name", t.line, t.col)
            if not pending:
                raise PDDLSyntaxError("type without names", it.line, it.col)
            out.extend((p, str(t)) for p in pending)
            pending = []
            i += 2
            continue
        if variables and not it.startswith("?"):
            raise PDDLSyntaxError(f"expected variable, got {it!r}", it.line, it.col)
        if not variables and it.startswith("?"):
            raise PDDLSyntaxError(f"unexpected variable {it!r}", it.line, it.col)
        pending.append(it)
        i += 1
    out.extend((p, ROOT_TYPE) for p in pending)
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise PDDLSyntaxError(f"duplicate name {dup!r}", *_pos(dup))
    return [(str(n), t) for n, t in out]


def _check_requirements(section: SList) -> Tuple[str, ...]:
    reqs = []
    for r in section[1:]:
        r = _expect_name(r, "requirement flag")
        if r not in SUPPORTED_REQUIREMENTS:
            raise UnsupportedFeature(r.lstrip(":"), r.line, r.col)
        reqs.append(str(r))
    return tuple(reqs)


def _atoms(formula: SExpr, effect: bool) -> Tuple[List[SList], List[SList]]:
    """Split a conjunction into positive and negative atoms."""
    if isinstance(formula, Tok):
        raise PDDLSyntaxError(f"expected formula, got {formula!r}", formula.line, formula.col)
    if not formula:
        return [], []
    head = formula[0]
    if isinstance(head, SList):
        raise PDDLSyntaxError("formula must start with a name", formula.line, formula.col)
    if head == "and":
        pos: List[SList] = []
        neg: List[SList] = []
        for sub in formula[1:]:
            p, n = _atoms(sub, effect)
            pos += p
            neg += n
        return pos, neg
    if head == "not" and effect:
        if len(formula) != 2 or not isinstance(formula[1], SList):
            raise PDDLSyntaxError("malformed (not ...)", formula.line, formula.col)
        inner = formula[1]
        if inner and inner[0] in _UNSUPPORTED_FORMULA:
            raise UnsupportedFeature(_UNSUPPORTED_FORMULA[inner[0]], inner.line, inner.col)
        return [], [inner]
    if head in _UNSUPPORTED_FORMULA:
        feat = _UNSUPPORTED_FORMULA[head]
        if effect and head == "forall":
            feat = "conditional-effects"
        raise UnsupportedFeature(feat, formula.line, formula.col)
    return [formula], []


def _lifted_atom(expr: SList, predicates, scope: Dict[str, str], constants: Dict[str, str],
                 domain_types: Dict[str, str]) -> Atom:
    name = _expect_name(expr[0], "predicate name")
    if name not in predicates:
        raise UndeclaredPredicate(f"{expr.line}:{expr.col}: undeclared predicate {name!r}")
    sig = predicates[name]
    args = [_expect_name(a, "term") for a in expr[1:]]
    if len(args) != len(sig):
        raise ArityMismatch(f"{expr.line}:{expr.col}: {name} expects {len(sig)} arguments, got {len(args)}")
    probe = Domain("", (), domain_types, {}, {}, ())
    for a, (_, ptype) in zip(args, sig):
        if a.startswith("?"):
            if a not in scope:
                raise PDDLSyntaxError(f"unbound variable {a!r}", a.line, a.col)
            atype = scope[a]
        elif a in constants:
            atype = constants[a]
        else:
            raise UndeclaredObject(f"{a.line}:{a.col}: undeclared constant {a!r}")
        if not probe.is_subtype(atype, ptype):
            raise TypeMismatch(f"{a.line}:{a.col}: {a} of type {atype} used where {ptype} expected in {name}")
    return Atom(str(name), tuple(str(a) for a in args))


def _sections(root: SList, kind: str) -> Tuple[str, List[SList]]:
    if not root or root[0] != "define":
        raise PDDLSyntaxError("expected (define ...)", root.line, root.col)
    if len(root) < 2:
        raise PDDLSyntaxError(f"missing ({kind} name)", root.line, root.col)
    header = _expect_list(root[1], f"({kind} name)")
    if len(header) != 2 or header[0] != kind:
        raise PDDLSyntaxError(f"expected ({kind} name)", header.line, header.col)
    name = _expect_name(header[1], f"{kind} name")
    secs = []
    for s in root[2:]:
        s = _expect_list(s, "section")
        if not s or not isinstance(s[0], Tok):
            raise PDDLSyntaxError("empty section", s.line, s.col)
        if s[0] in _UNSUPPORTED_SECTIONS:
            raise UnsupportedFeature(_UNSUPPORTED_SECTIONS[s[0]], s.line, s.col)
        secs.append(s)
    return str(name), secs


def parse_domain(text: str) -> Domain:
    name, secs = _sections(read_sexpr(text), "domain")
    requirements: Tuple[str, ...] = ()
    types: Dict[str, str] = {ROOT_TYPE: ROOT_TYPE}
    constants: Dict[str, str] = {}
    predicates: Dict[str, Tuple[Tuple[str, str], ...]] = {}
    raw_actions: List[SList] = []
    for s in secs:
        key = s[0]
        if key == ":requirements":
            requirements = _check_requirements(s)
        elif key == ":types":
            for child, parent in parse_typed_list(s[1:], variables=False):
                if child != ROOT_TYPE:
                    types[child] = parent
            for t in list(types.values()):
                types.setdefault(t, ROOT_TYPE)
        elif key == ":constants":
            constants.update(parse_typed_list(s[1:], variables=False))
        elif key == ":predicates":
            for p in s[1:]:
                p = _expect_list(p, "predicate declaration")
                pname = _expect_name(p[0], "predicate name")
                if pname in predicates:
                    raise PDDLSyntaxError(f"duplicate predicate {pname!r}", pname.line, pname.col)
                predicates[str(pname)] = tuple(parse_typed_list(p[1:], variables=True))
        elif key == ":action":
            raw_actions.append(s)
        else:
            raise PDDLSyntaxError(f"unknown domain section {key!r}", key.line, key.col)

    def check_type(t: str, where) -> None:
        if t not in types:
            raise UndeclaredType(f"{where}: undeclared type {t!r}")

    for c, t in constants.items():
        check_type(t, f"constant {c}")
    for p, sig in predicates.items():
        for _, t in sig:
            check_type(t, f"predicate {p}")

    actions = []
    for s in raw_actions:
        actions.append(_parse_action(s, predicates, constants, types, check_type))
    names = [a.name for a in actions]
    if len(set(names)) != len(names):
        raise PDDLSyntaxError("duplicate action name")
    return Domain(name, requirements, types, constants, predicates, tuple(actions))


def _parse_action(s: SList, predicates, constants, types, check_type) -> LiftedAction:
    if len(s) < 2:
        raise PDDLSyntaxError("action without name", s.line, s.col)
    aname = _expect_name(s[1], "action name")
    fields: Dict[str, SExpr] = {}
    i = 2
    while i < len(s):
        k = _expect_name(s[i], "action field")
        if k not in (":parameters", ":precondition", ":effect"):
            raise PDDLSyntaxError(f"unknown action field {k!r}", k.line, k.col)
        if i + 1 >= len(s):
            raise PDDLSyntaxError(f"missing value for {k}", k.line, k.col)
        fields[str(k)] = s[i + 1]
        i += 2
    params = parse_typed_list(_expect_list(fields.get(":parameters", SList()), "parameter list"),
                              variables=True)
    for _, t in params:
        check_type(t, f"action {aname}")
    scope = dict(params)
    pre_pos, _ = _atoms(fields.get(":precondition", SList()), effect=False)
    add_pos, del_neg = _atoms(fields.get(":effect", SList()), effect=True)

    def conv(items):
        return frozenset(_lifted_atom(e, predicates, scope, constants, types) for e in items)

    return LiftedAction(str(aname), tuple(params), conv(pre_pos), conv(add_pos), conv(del_neg))


def parse_problem(text: str, domain: Domain) -> Problem:
    name, secs = _sections(read_sexpr(text), "problem")
    domain_name = None
    objects: Dict[str, str] = {}
    init_raw: List[SList] = []
    goal_raw: Optional[SExpr] = None
    for s in secs:
        key = s[0]
        if key == ":domain":
            domain_name = str(_expect_name(s[1], "domain name"))
        elif key == ":requirements":
            _check_requirements(s)
        elif key == ":objects":
            objects.update(parse_typed_list(s[1:], variables=False))
        elif key == ":init":
            for f in s[1:]:
                f = _expect_list(f, "init atom")
                if f and f[0] in _UNSUPPORTED_FORMULA or (f and f[0] == "not"):
                    raise UnsupportedFeature(_UNSUPPORTED_FORMULA.get(f[0], "negative-init"), f.line, f.col)
                init_raw.append(f)
        elif key == ":goal":
            goal_raw = s[1] if len(s) > 1 else SList()
        else:
            raise PDDLSyntaxError(f"unknown problem section {key!r}", key.line, key.col)
    if domain_name is not None and domain_name != domain.name:
        raise PDDLSyntaxError(f"problem targets domain {domain_name!r}, got {domain.name!r}")
    for o, t in objects.items():
        if t not in domain.types:
            raise UndeclaredType(f"object {o}: undeclared type {t!r}")
    universe = dict(domain.constants)
    universe.update(objects)

    def ground_atom(e: SList) -> Fluent:
        pname = _expect_name(e[0], "predicate name")
        if pname not in domain.predicates:
            raise UndeclaredPredicate(f"{e.line}:{e.col}: undeclared predicate {pname!r}")
        sig = domain.predicates[pname]
        args = [_expect_name(a, "object") for a in e[1:]]
        if len(args) != len(sig):
            raise ArityMismatch(f"{e.line}:{e.col}: {pname} expects {len(sig)} arguments, got {len(args)}")
        objs = []
        for a, (_, ptype) in zip(args, sig):
            if a.startswith("?"):
                raise PDDLSyntaxError(f"variable {a!r} in problem", a.line, a.col)
            if a not in universe:
                raise UndeclaredObject(f"{a.line}:{a.col}: undeclared object {a!r}")
            if not domain.is_subtype(universe[a], ptype):
                raise TypeMismatch(f"{a.line}:{a.col}: {a} of type {universe[a]} where {ptype} expected")
            objs.append(PlanningObject(universe[a], str(a)))
        return Fluent(str(pname), tuple(objs))

    init = frozenset(ground_atom(f) for f in init_raw)
    goal_pos: List[SList] = []
    if goal_raw is not None:
        goal_pos, _ = _atoms(goal_raw, effect=False)
    goal = frozenset(ground_atom(f) for f in goal_pos)
    return Problem(name, domain_name or domain.name, objects, init, goal)
