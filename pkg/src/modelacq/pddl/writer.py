"""PDDL output for domains and learned models."""

from __future__ import annotations

from typing import Dict, List

from .learned import LearnedModel, to_lifted_action
from .model import ROOT_TYPE, Atom, Domain, LiftedAction


def _typed(pairs) -> str:
    # group consecutive names sharing a type: "?a ?b - block"
    out: List[str] = []
    i = 0
    pairs = list(pairs)
    while i < len(pairs):
        j = i
        while j < len(pairs) and pairs[j][1] == pairs[i][1]:
            j += 1
        out.append(" ".join(n for n, _ in pairs[i:j]) + f" - {pairs[i][1]}")
        i = j
    return " ".join(out)


def _atom(a: Atom) -> str:
    return "(" + " ".join((a.predicate,) + tuple(a.args)) + ")"


def _conj(items: List[str], indent: str) -> str:
    if not items:
        return "()"
    if len(items) == 1:
        return items[0]
    return "(and\n" + "\n".join(indent + "  " + s for s in items) + ")"


def write_action(a: LiftedAction) -> str:
    pre = sorted(_atom(x) for x in a.precond)
    eff = sorted(_atom(x) for x in a.add) + sorted(f"(not {_atom(x)})" for x in a.delete)
    return "\n".join([
        f"  (:action {a.name}",
        f"    :parameters ({_typed(a.params)})",
        f"    :precondition {_conj(pre, '    ')}",
        f"    :effect {_conj(eff, '    ')})",
    ])


def write_domain(d: Domain) -> str:
    lines = [f"(define (domain {d.name})"]
    if d.requirements:
        lines.append(f"  (:requirements {' '.join(d.requirements)})")
    subtypes = [(t, p) for t, p in sorted(d.types.items()) if t != ROOT_TYPE]
    if subtypes:
        lines.append(f"  (:types {_typed(subtypes)})")
    if d.constants:
        lines.append(f"  (:constants {_typed(sorted(d.constants.items()))})")
    preds = [f"({p}{' ' + _typed(sig) if sig else ''})" for p, sig in sorted(d.predicates.items())]
    lines.append("  (:predicates" + ("\n    " + "\n    ".join(preds) if preds else "") + ")")
    for a in d.actions:
        lines.append(write_action(a))
    lines.append(")")
    return "\n".join(lines) + "\n"


def model_to_domain(model: LearnedModel, name: str = "learned") -> Domain:
    types: Dict[str, str] = {ROOT_TYPE: ROOT_TYPE}
    arity: Dict[str, int] = {}
    constants: Dict[str, str] = {}
    actions = []
    for sig in sorted(model.actions):
        la = model.actions[sig]
        for _, t in la.params:
            if t != ROOT_TYPE:
                types[t] = ROOT_TYPE
        for o in la.objects:
            constants[o] = ROOT_TYPE
        for atoms in (la.precond, la.add, la.delete):
            for x in atoms:
                if arity.setdefault(x.predicate, len(x.args)) != len(x.args):
                    raise ValueError(f"predicate {x.predicate} used with different arities")
                for arg in x.args:
                    if not arg.startswith("?"):
                        constants[arg] = ROOT_TYPE
        actions.append(to_lifted_action(la))
    predicates = {p: tuple((f"?a{i + 1}", ROOT_TYPE) for i in range(k)) for p, k in arity.items()}
    for f in model.fluents:
        p, *args = f.split()
        predicates.setdefault(p, tuple((f"?a{i + 1}", ROOT_TYPE) for i in range(len(args))))
    return Domain(name, (":strips", ":typing"), types, constants, predicates, tuple(actions))


def serialize_model(model: LearnedModel, name: str = "learned", details: bool = True) -> str:
    """PDDL domain text, followed by the details block as PDDL comments."""
    text = write_domain(model_to_domain(model, name))
    if details:
        text += "\n" + "".join(f"; {line}".rstrip() + "\n" for line in model.details().splitlines())
    return text
