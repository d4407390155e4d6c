"""Planning-task data types: objects, fluents, lifted and ground actions, states."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from ..errors import ModelAcqError

ROOT_TYPE = "object"


class PDDLError(ModelAcqError):
    pass


class PDDLSyntaxError(PDDLError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.line, self.col = line, col


class UnsupportedFeature(PDDLError):
    def __init__(self, feature: str, line: int = 0, col: int = 0):
        super().__init__(f"unsupported PDDL feature {feature!r} (line {line}, col {col})")
        self.feature = feature


class UndeclaredPredicate(PDDLError):
    pass


class UndeclaredObject(PDDLError):
    pass


class UndeclaredType(PDDLError):
    pass


class TypeMismatch(PDDLError):
    pass


class ArityMismatch(PDDLError):
    pass


class GroundingExplosion(PDDLError):
    pass


class PreconditionViolation(PDDLError):
    def __init__(self, action: str, missing: Sequence[str]):
        super().__init__(f"{action}: unsatisfied preconditions {list(missing)}")
        self.action = action
        self.missing = list(missing)


@dataclass(frozen=True)
class PlanningObject:
    obj_type: str
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("object name must be nonempty")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Fluent:
    predicate: str
    args: Tuple[PlanningObject, ...] = ()

    def __str__(self):
        return " ".join([self.predicate, *(o.name for o in self.args)])


class Atom(NamedTuple):
    """A predicate applied to variables (``?x``) and/or object names."""

    predicate: str
    args: Tuple[str, ...] = ()

    def __str__(self):
        return " ".join((self.predicate,) + tuple(self.args))

    @classmethod
    def parse(cls, text: str) -> "Atom":
        parts = text.strip().strip("()").split()
        return cls(parts[0], tuple(parts[1:]))


@dataclass(frozen=True)
class LiftedAction:
    name: str
    params: Tuple[Tuple[str, str], ...]
    precond: FrozenSet[Atom]
    add: FrozenSet[Atom]
    delete: FrozenSet[Atom]


@dataclass(frozen=True)
class Domain:
    name: str
    requirements: Tuple[str, ...]
    types: Dict[str, str]  # child -> parent; the root type maps to itself
    constants: Dict[str, str]
    predicates: Dict[str, Tuple[Tuple[str, str], ...]]
    actions: Tuple[LiftedAction, ...]

    def is_subtype(self, t: str, ancestor: str) -> bool:
        seen = set()
        while t not in seen:
            if t == ancestor:
                return True
            seen.add(t)
            t = self.types.get(t, ROOT_TYPE)
        return ancestor == ROOT_TYPE

    def action(self, name: str) -> LiftedAction:
        for a in self.actions:
            if a.name == name:
                return a
        raise KeyError(name)


@dataclass(frozen=True)
class Problem:
    name: str
    domain_name: str
    objects: Dict[str, str]
    init: FrozenSet[Fluent]
    goal: FrozenSet[Fluent]


@dataclass(frozen=True)
class State:
    """Truth assignment over a fluent universe, stored as an int bitset."""

    bits: int
    size: int

    def __contains__(self, idx: int) -> bool:
        return (self.bits >> idx) & 1 == 1

    def __len__(self) -> int:
        return self.size

    def indices(self) -> List[int]:
        out, b, i = [], self.bits, 0
        while b:
            if b & 1:
                out.append(i)
            b >>= 1
            i += 1
        return out

    def to_list(self) -> List[int]:
        return [(self.bits >> i) & 1 for i in range(self.size)]

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "State":
        bits = 0
        for i, v in enumerate(values):
            if v not in (0, 1, True, False):
                raise ValueError(f"state entries must be 0/1, got {v!r}")
            if v:
                bits |= 1 << i
        return cls(bits, len(values))

    @classmethod
    def from_indices(cls, idx: Iterable[int], size: int) -> "State":
        bits = 0
        for i in idx:
            if not 0 <= i < size:
                raise IndexError(i)
            bits |= 1 << i
        return cls(bits, size)


def mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def mask_indices(m: int) -> List[int]:
    return State(m, m.bit_length()).indices()


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: Tuple[PlanningObject, ...]
    pre: int
    add: int
    delete: int

    @property
    def label(self) -> str:
        return " ".join([self.name, *(o.name for o in self.args)])

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class GroundTask:
    name: str
    fluents: Tuple[Fluent, ...]
    actions: Tuple[GroundAction, ...]
    init: State
    goal: FrozenSet[int]
    objects: Dict[str, str] = field(default_factory=dict)
    fluent_index: Dict[str, int] = field(default_factory=dict, compare=False)
    action_index: Dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.fluent_index:
            object.__setattr__(self, "fluent_index", {str(f): i for i, f in enumerate(self.fluents)})
        if not self.action_index:
            object.__setattr__(self, "action_index", {a.label: i for i, a in enumerate(self.actions)})

    @property
    def fluent_names(self) -> List[str]:
        return [str(f) for f in self.fluents]

    @property
    def goal_mask(self) -> int:
        return mask(self.goal)

    def state_of(self, names: Iterable[str]) -> State:
        return State.from_indices((self.fluent_index[n] for n in names), len(self.fluents))

    def names_of(self, state_or_mask) -> List[str]:
        bits = state_or_mask.bits if isinstance(state_or_mask, State) else state_or_mask
        return [str(self.fluents[i]) for i in State(bits, len(self.fluents)).indices()]

    def applicable(self, state: State) -> List[int]:
        b = state.bits
        return [i for i, a in enumerate(self.actions) if b & a.pre == a.pre]

    def satisfies_goal(self, state: State, goal: Optional[Iterable[int]] = None) -> bool:
        g = self.goal_mask if goal is None else mask(goal)
        return state.bits & g == g


def apply(state: State, action: int, task: GroundTask) -> State:
    """STRIPS successor: delete effects first, then add effects."""
    a = task.actions[action]
    if state.size != len(task.fluents):
        raise ValueError(f"state has {state.size} entries, task has {len(task.fluents)} fluents")
    if state.bits & a.pre != a.pre:
        missing = task.names_of(a.pre & ~state.bits)
        raise PreconditionViolation(a.label, missing)
    return State((state.bits & ~a.delete) | a.add, state.size)
