"""Representation of extracted action theories, shared by every extractor."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .model import Atom, Domain, LiftedAction

GROUND_SEP = "__"


@dataclass
class LearnedAction:
    """Precondition/add/delete sets of one learned action.

    Lifted actions carry typed ``params`` and atoms over those variables.
    Ground actions carry the concrete ``objects`` and atoms over object names.
    """

    name: str
    params: Tuple[Tuple[str, str], ...] = ()
    precond: Set[Atom] = field(default_factory=set)
    add: Set[Atom] = field(default_factory=set)
    delete: Set[Atom] = field(default_factory=set)
    objects: Tuple[str, ...] = ()

    @property
    def is_ground(self) -> bool:
        return bool(self.objects) or not self.params

    @property
    def signature(self) -> str:
        if self.objects:
            return " ".join((self.name,) + self.objects)
        return " ".join((self.name,) + tuple(t for _, t in self.params))

    def instantiate(self, args: Iterable[str]) -> Tuple[Set[str], Set[str], Set[str]]:
        """Ground the three sets for a call with ``args``; returns fluent strings."""
        binding = {v: a for (v, _), a in zip(self.params, args)}

        def g(atoms):
            return {" ".join([x.predicate, *(binding.get(t, t) for t in x.args)]) for x in atoms}

        return g(self.precond), g(self.add), g(self.delete)

    def _typed(self, atom: Atom) -> str:
        types = dict(self.params)
        return " ".join([atom.predicate, *(types.get(a, a) for a in atom.args)])

    def details(self, width: int = 32) -> str:
        """Text block: header with parameter types, then precond/add/delete."""
        words = list(self.objects) if self.objects else [t for _, t in self.params]
        one_line = "(" + " ".join([self.name] + words) + "):"
        if len(one_line) <= width or len(words) <= 1:
            header = one_line
        else:
            pad = " " * (len(self.name) + 2)
            rows = [f"({self.name} {words[0]}"] + [pad + w for w in words[1:]]
            header = "\n".join(rows) + "):"
        lines = [header]
        for title, atoms in (("precond", self.precond), ("add", self.add), ("delete", self.delete)):
            lines.append(f"  {title}:")
            lines.extend(f"    {s}" for s in sorted(self._typed(a) for a in atoms))
        return "\n".join(lines)


@dataclass
class LearnedModel:
    actions: Dict[str, LearnedAction] = field(default_factory=dict)
    fluents: Tuple[str, ...] = ()

    def add_action(self, action: LearnedAction) -> None:
        self.actions[action.signature] = action

    def lookup(self, label: str) -> Optional[Tuple[LearnedAction, Tuple[str, ...]]]:
        """Find the action covering a ground call ``name obj1 ...``; ground entries win."""
        if label in self.actions and self.actions[label].objects:
            return self.actions[label], ()
        parts = label.split()
        name, args = parts[0], tuple(parts[1:])
        for a in self.actions.values():
            if a.name == name and not a.objects and len(a.params) == len(args):
                return a, args
        if label in self.actions:
            return self.actions[label], ()
        return None

    def details(self) -> str:
        body = [self.actions[k].details() for k in sorted(self.actions)]
        return "\n".join(["Actions:"] + body) + "\n"

    def canonical(self):
        """Order-free value used for equality checks and round-trip tests."""
        return {
            sig: (a.name, tuple(a.params), a.objects, frozenset(a.precond), frozenset(a.add),
                  frozenset(a.delete))
            for sig, a in self.actions.items()
        }

    def to_json(self) -> dict:
        return {
            "fluents": list(self.fluents),
            "actions": [
                {
                    "name": a.name,
                    "params": [list(p) for p in a.params],
                    "objects": list(a.objects),
                    "precond": sorted(str(x) for x in a.precond),
                    "add": sorted(str(x) for x in a.add),
                    "delete": sorted(str(x) for x in a.delete),
                }
                for _, a in sorted(self.actions.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LearnedModel":
        m = cls(fluents=tuple(data.get("fluents", ())))
        for d in data["actions"]:
            m.add_action(LearnedAction(
                d["name"], tuple(tuple(p) for p in d.get("params", ())),
                {Atom.parse(s) for s in d["precond"]}, {Atom.parse(s) for s in d["add"]},
                {Atom.parse(s) for s in d["delete"]}, tuple(d.get("objects", ())),
            ))
        return m

    @classmethod
    def from_domain(cls, domain: Domain) -> "LearnedModel":
        """Inverse of :func:`modelacq.pddl.writer.model_to_domain`."""
        m = cls()
        for a in domain.actions:
            name, objects = a.name, ()
            if not a.params and GROUND_SEP in a.name:
                name, *rest = a.name.split(GROUND_SEP)
                objects = tuple(rest)
            m.add_action(LearnedAction(name, tuple(a.params), set(a.precond), set(a.add),
                                       set(a.delete), objects))
        return m


def pddl_action_name(action: LearnedAction) -> str:
    return GROUND_SEP.join((action.name,) + action.objects)


def to_lifted_action(action: LearnedAction) -> LiftedAction:
    return LiftedAction(pddl_action_name(action), tuple(action.params), frozenset(action.precond),
                        frozenset(action.add), frozenset(action.delete))


def atoms_of(model: LearnedModel) -> List[Tuple[LearnedAction, Atom]]:
    return [(a, x) for a in model.actions.values() for s in (a.precond, a.add, a.delete) for x in s]
