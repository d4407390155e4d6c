"""Set-based extraction from fully observed, noise-free traces.

For every ground action the precondition is the intersection of its
pre-states, the add effects the intersection of what became true, and the
delete effects the intersection of what became false. Ground actions of one
name are then lifted when their effects agree after replacing arguments by
parameter positions.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, FrozenSet, List, Sequence, Tuple

from ..observation import ObservedTrace, TokenType
from ..pddl import Atom, LearnedAction, LearnedModel
from .common import (ExtractionError, lift_fluent, object_types, param_types, require_tags,
                     shared_vocabulary, split_label)


class InconsistentTransitions(ExtractionError):
    pass


Sets = Tuple[FrozenSet[int], FrozenSet[int], FrozenSet[int]]


def ground_effects(observed: Sequence[ObservedTrace]) -> Dict[str, Sets]:
    """label -> (precond, add, delete) as fluent-id sets."""
    acc: Dict[str, List[FrozenSet[int]]] = {}
    for o in observed:
        states = [frozenset(i for i, v in enumerate(t.view) if v) for t in o.tokens]
        for i, tok in enumerate(o.tokens[:-1]):
            s, t = states[i], states[i + 1]
            if tok.action not in acc:
                acc[tok.action] = [s, t - s, s - t, t - s, s - t]
            else:
                pre, add, dele, seen_add, seen_del = acc[tok.action]
                acc[tok.action] = [pre & s, add & (t - s), dele & (s - t), seen_add | (t - s),
                                   seen_del | (s - t)]
    out = {}
    for label, (pre, add, dele, seen_add, seen_del) in acc.items():
        clash = seen_add & seen_del
        if clash:
            f = observed[0].fluents[min(clash)]
            raise InconsistentTransitions(f"{label!r} both adds and deletes {f!r} in different occurrences")
        out[label] = (pre, add, dele)
    return out


def _lift_group(name: str, members: Dict[Tuple[str, ...], Tuple[set, set, set]], types):
    """One lifted action if every member agrees on its effects, else None."""
    arity = len(next(iter(members)))
    variables = tuple(f"?x{i + 1}" for i in range(arity))
    lifted = None
    for args, (pre, add, dele) in members.items():
        lift = lambda fs: frozenset(lift_fluent(f, args, variables) for f in fs)  # noqa: E731
        cur = (lift(pre), lift(add), lift(dele))
        if lifted is None:
            lifted = cur
        elif cur[1:] != lifted[1:]:
            return None
        else:
            lifted = (lifted[0] & cur[0],) + lifted[1:]
    ptypes = param_types(members, types, arity)
    return LearnedAction(name, tuple(zip(variables, ptypes)), set(lifted[0]), set(lifted[1]), set(lifted[2]))


def extract_observer(observed: Sequence[ObservedTrace], lift: bool = True) -> LearnedModel:
    require_tags(observed, {TokenType.IDENTITY}, "observer")
    fluents = shared_vocabulary(observed)
    model = LearnedModel(fluents=fluents)
    ground = ground_effects(observed)

    def names(ids):
        return {fluents[i] for i in ids}

    groups: Dict[Tuple[str, int], Dict[Tuple[str, ...], Tuple[set, set, set]]] = defaultdict(dict)
    for label, (pre, add, dele) in sorted(ground.items()):
        name, args = split_label(label)
        sets = (names(pre), names(add), names(dele))
        if lift and args and len(set(args)) == len(args):
            groups[(name, len(args))][args] = sets
        else:
            model.add_action(_ground_action(name, args, sets))
    types = object_types(observed)
    for (name, _), members in sorted(groups.items()):
        la = _lift_group(name, members, types)
        if la is None:
            for args, sets in members.items():
                model.add_action(_ground_action(name, args, sets))
        else:
            model.add_action(la)
    return model


def _ground_action(name: str, args: Tuple[str, ...], sets) -> LearnedAction:
    pre, add, dele = ({Atom.parse(f) for f in s} for s in sets)
    return LearnedAction(name, (), pre, add, dele, args)
