"""Greedy best-first search with the goal-count heuristic, plus blind BFS."""

from __future__ import annotations

import heapq
from collections import deque
from itertools import count
from typing import Dict, Iterable, List, Optional, Tuple

from ..errors import ModelAcqError
from ..pddl import GroundTask, State, mask

DEFAULT_BUDGET = 100_000


class PlanningFailure(ModelAcqError):
    pass


class BudgetExhausted(PlanningFailure):
    pass


class ProvedUnsolvable(PlanningFailure):
    """The full reachable state space was closed without meeting the goal."""


def goal_count(bits: int, goal_mask: int) -> int:
    return bin(goal_mask & ~bits).count("1")


def _extract(parents: Dict[int, Tuple[int, int]], end: int) -> List[int]:
    plan = []
    while parents[end][0] != -1:
        prev, a = parents[end]
        plan.append(a)
        end = prev
    return plan[::-1]


def plan(task: GroundTask, goal: Iterable[int], budget: int = DEFAULT_BUDGET,
         init: Optional[State] = None) -> List[int]:
    """Return a list of action ids reaching ``goal`` (fluent ids) from ``init``.

    Not optimal. Raises :class:`BudgetExhausted` after ``budget`` expansions and
    :class:`ProvedUnsolvable` when every reachable state was expanded.
    """
    gm = mask(goal)
    start = (init or task.init).bits
    if start & gm == gm:
        return []
    acts = [(a.pre, a.add, a.delete) for a in task.actions]
    tie = count()
    frontier = [(goal_count(start, gm), next(tie), start)]
    parents: Dict[int, Tuple[int, int]] = {start: (-1, -1)}
    closed = set()
    expansions = 0
    while frontier:
        _, _, s = heapq.heappop(frontier)
        if s in closed:
            continue
        closed.add(s)
        expansions += 1
        if expansions > budget:
            raise BudgetExhausted(f"no plan within {budget} expansions")
        for i, (pre, add, dele) in enumerate(acts):
            if s & pre != pre:
                continue
            t = (s & ~dele) | add
            if t in parents:
                continue
            parents[t] = (s, i)
            if t & gm == gm:
                return _extract(parents, t)
            heapq.heappush(frontier, (goal_count(t, gm), next(tie), t))
    raise ProvedUnsolvable("goal unreachable from the initial state")


def bfs_plan(task: GroundTask, goal: Iterable[int], init: Optional[State] = None,
             limit: int = 1_000_000) -> Optional[List[int]]:
    """Shortest plan by blind breadth-first search, or None if unreachable."""
    gm = mask(goal)
    start = (init or task.init).bits
    if start & gm == gm:
        return []
    parents: Dict[int, Tuple[int, int]] = {start: (-1, -1)}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for i, a in enumerate(task.actions):
            if s & a.pre != a.pre:
                continue
            t = (s & ~a.delete) | a.add
            if t in parents:
                continue
            parents[t] = (s, i)
            if t & gm == gm:
                return _extract(parents, t)
            if len(parents) > limit:
                raise BudgetExhausted(f"BFS exceeded {limit} states")
            queue.append(t)
    return None
