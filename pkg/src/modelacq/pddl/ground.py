"""Full instantiation of a typed STRIPS task with dense, sorted ids."""

from __future__ import annotations

from itertools import product
from math import prod
from typing import Dict, List, Tuple

from .model import (Domain, Fluent, GroundAction, GroundingExplosion, GroundTask, PlanningObject,
                    Problem, State, mask)

DEFAULT_ACTION_CAP = 10 ** 6


def _objects_by_type(domain: Domain, objects: Dict[str, str]) -> Dict[str, List[PlanningObject]]:
    out: Dict[str, List[PlanningObject]] = {}
    for t in domain.types:
        out[t] = sorted((PlanningObject(ot, o) for o, ot in objects.items() if domain.is_subtype(ot, t)),
                        key=lambda p: p.name)
    return out


def ground(domain: Domain, problem: Problem, max_actions: int = DEFAULT_ACTION_CAP) -> GroundTask:
    """Instantiate every predicate and action over all type-consistent objects.

    Fluents and actions are sorted by their canonical strings, so ids are a
    pure function of the inputs.
    """
    objects = dict(domain.constants)
    objects.update(problem.objects)
    by_type = _objects_by_type(domain, objects)

    total = 0
    for a in domain.actions:
        total += prod(len(by_type[t]) for _, t in a.params)
        if total > max_actions:
            raise GroundingExplosion(f"more than {max_actions} ground actions (at action {a.name})")

    fluents = []
    for pred, sig in domain.predicates.items():
        for combo in product(*(by_type[t] for _, t in sig)):
            fluents.append(Fluent(pred, tuple(combo)))
    fluents.sort(key=str)
    index = {str(f): i for i, f in enumerate(fluents)}

    def inst(atoms, binding) -> int:
        return mask(index[" ".join([a.predicate, *(binding.get(x, x) for x in a.args)])] for a in atoms)

    actions: List[Tuple[str, GroundAction]] = []
    for a in domain.actions:
        for combo in product(*(by_type[t] for _, t in a.params)):
            binding = {var: obj.name for (var, _), obj in zip(a.params, combo)}
            ga = GroundAction(a.name, tuple(combo), inst(a.precond, binding), inst(a.add, binding),
                              inst(a.delete, binding))
            actions.append((ga.label, ga))
    actions.sort(key=lambda t: t[0])

    n = len(fluents)
    init = State.from_indices((index[str(f)] for f in problem.init), n)
    goal = frozenset(index[str(f)] for f in problem.goal)
    return GroundTask(problem.name, tuple(fluents), tuple(a for _, a in actions), init, goal, objects)


def reachable_actions(task: GroundTask, limit: int = 200_000) -> List[int]:
    """Ids of ground actions applicable in some state reachable from init (BFS)."""
    seen = {task.init.bits}
    frontier = [task.init.bits]
    used = set()
    acts = task.actions
    while frontier:
        nxt = []
        for b in frontier:
            for i, a in enumerate(acts):
                if b & a.pre == a.pre:
                    used.add(i)
                    s = (b & ~a.delete) | a.add
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
                        if len(seen) > limit:
                            raise GroundingExplosion(f"more than {limit} reachable states")
        frontier = nxt
    return sorted(used)
