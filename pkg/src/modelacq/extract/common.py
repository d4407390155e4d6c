from __future__ import annotations

from typing import Collection, Dict, Iterable, List, Mapping, Sequence, Tuple

from ..errors import ModelAcqError
from ..observation import ObservedTrace, TokenType
from ..pddl import ROOT_TYPE, Atom


class ExtractionError(ModelAcqError):
    pass


class IncompatibleTokens(ExtractionError):
    pass


def split_label(label: str) -> Tuple[str, Tuple[str, ...]]:
    name, *args = label.split()
    return name, tuple(args)


def require_tags(observed: Sequence[ObservedTrace], accepted: Collection[TokenType], method: str) -> None:
    for o in observed:
        if o.tag not in accepted:
            names = ", ".join(sorted(t.value for t in accepted))
            raise IncompatibleTokens(f"{method} cannot use {o.tag.value} tokens (accepts {names})")


def shared_vocabulary(observed: Sequence[ObservedTrace]) -> Tuple[str, ...]:
    fluents = observed[0].fluents if observed else ()
    for o in observed:
        if o.fluents != fluents:
            raise ExtractionError("observed traces use different fluent vocabularies")
    return tuple(fluents)


def object_types(observed: Iterable[ObservedTrace]) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for o in observed:
        out.update(o.objects)
    return out


def param_types(arg_lists: Iterable[Sequence[str]], types: Mapping[str, str], arity: int) -> Tuple[str, ...]:
    """Per position, the common type of the objects seen there (``object`` if mixed or unknown)."""
    seen: List[set] = [set() for _ in range(arity)]
    for args in arg_lists:
        for i, a in enumerate(args):
            seen[i].add(types.get(a, ROOT_TYPE))
    return tuple(next(iter(s)) if len(s) == 1 else ROOT_TYPE for s in seen)


def lift_fluent(fluent: str, args: Sequence[str], variables: Sequence[str]) -> Atom:
    """Replace each object of ``fluent`` that is an action argument by its variable."""
    pred, *objs = fluent.split()
    pos = {a: v for a, v in zip(args, variables)}
    return Atom(pred, tuple(pos.get(o, o) for o in objs))
