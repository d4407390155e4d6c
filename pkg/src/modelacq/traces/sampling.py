"""Trace generators: uniform random walks, heuristic-depth walks and
goal-oriented sampling.

Every walk draws from its own generator seeded with ``(seed, trace_index)``,
so generating traces one by one or all at once gives the same result.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import List, Optional, Sequence

import numpy as np

from ..errors import ModelAcqError
from ..pddl import GroundTask, State, apply
from .planner import DEFAULT_BUDGET, PlanningFailure, goal_count, plan
from .trace import Step, Trace, TraceList, trace_from_plan


class NoCandidates(ModelAcqError):
    pass


def walk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & (2 ** 64 - 1), index])


def _trace_list(task: GroundTask) -> TraceList:
    return TraceList(tuple(task.fluent_names), objects=dict(task.objects))


def walk(task: GroundTask, length: int, rng: np.random.Generator, init: Optional[State] = None) -> Trace:
    """A single walk of up to ``length`` uniformly chosen applicable actions."""
    state = init or task.init
    steps: List[Step] = []
    meta = {}
    for i in range(length):
        options = task.applicable(state)
        if not options:
            meta["dead_end"] = i
            break
        a = options[int(rng.integers(len(options)))]
        steps.append(Step(state, task.actions[a].label))
        state = apply(state, a, task)
    steps.append(Step(state, None))
    return Trace(steps, task.name, None, meta)


def random_walk(task: GroundTask, length: int, count: int, seed: int) -> TraceList:
    if length < 0 or count < 1:
        raise ValueError("length must be >= 0 and count >= 1")
    out = _trace_list(task)
    for i in range(count):
        out.append(walk(task, length, walk_rng(seed, i)))
    return out


def sample_walk_length(h: int, rng: np.random.Generator, constant: float = 2.0,
                       max_length: Optional[int] = None) -> int:
    """Binomial(2*h*c, 1/2) length, mean h*c, truncated at ``max_length``."""
    n = int(round(2 * h * constant))
    length = int(rng.binomial(n, 0.5)) if n > 0 else 0
    return length if max_length is None else min(length, max_length)


def heuristic_depth_walk(task: GroundTask, count: int, seed: int, constant: float = 2.0,
                         max_length: Optional[int] = None) -> TraceList:
    if count < 1:
        raise ValueError("count must be >= 1")
    h = goal_count(task.init.bits, task.goal_mask)
    out = _trace_list(task)
    for i in range(count):
        rng = walk_rng(seed, i)
        out.append(walk(task, sample_walk_length(h, rng, constant, max_length), rng))
    return out


@dataclass(frozen=True)
class GoalSamplerConfig:
    k: int
    g: int
    num_goals: int
    seed: int = 0
    goal_weight: float = 4.0
    min_plan_fraction: float = 0.25
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.g < 1:
            raise ValueError("g must be >= 1")
        if self.num_goals < 1:
            raise ValueError("num_goals must be >= 1")


@dataclass(frozen=True)
class GoalCandidate:
    goal: tuple  # sorted fluent names
    plan: tuple  # action labels
    quality: float


def goal_quality(plan_length: int, k: int) -> float:
    """1 when the plan is exactly ``k`` long, falling linearly to 0."""
    return min(1.0, max(0.0, 1.0 - abs(plan_length - k) / k))


def sample_goals(task: GroundTask, cfg: GoalSamplerConfig) -> List[GoalCandidate]:
    """Random walk of length k, pick g true fluents of the final state
    (goal predicates weighted up), keep the subset if the planner reaches it
    with a plan of at least ceil(k * min_plan_fraction) steps."""
    if cfg.g > len(task.fluents):
        raise ValueError("g exceeds the number of fluents")
    goal_preds = {task.fluents[i].predicate for i in task.goal}
    min_len = ceil(cfg.k * cfg.min_plan_fraction)
    seen = set()
    out: List[GoalCandidate] = []
    for i in range(cfg.num_goals):
        rng = walk_rng(cfg.seed, i)
        final = walk(task, cfg.k, rng).steps[-1].state
        true = final.indices()
        if len(true) < cfg.g:
            continue
        w = np.array([cfg.goal_weight if task.fluents[f].predicate in goal_preds else 1.0 for f in true])
        chosen = rng.choice(len(true), size=cfg.g, replace=False, p=w / w.sum())
        goal = sorted(true[j] for j in chosen)
        key = tuple(goal)
        if key in seen:
            continue
        seen.add(key)
        try:
            p = plan(task, goal, cfg.budget)
        except PlanningFailure:
            continue
        if len(p) < min_len:
            continue
        out.append(GoalCandidate(tuple(task.fluent_names[f] for f in goal),
                                 tuple(task.actions[a].label for a in p), goal_quality(len(p), cfg.k)))
    if not out:
        raise NoCandidates(f"none of {cfg.num_goals} sampled goals passed planning")
    return out


def trace_from_goal(task: GroundTask, goal: Sequence[str], budget: int = DEFAULT_BUDGET) -> Trace:
    """Plan from init to ``goal`` (fluent names) and return the resulting trace."""
    ids = [task.fluent_index[g] for g in goal]
    return trace_from_plan(task, plan(task, ids, budget), goal)


def traces_from_goals(task: GroundTask, candidates: Sequence[GoalCandidate]) -> TraceList:
    out = _trace_list(task)
    for c in candidates:
        t = trace_from_plan(task, [task.action_index[a] for a in c.plan], c.goal)
        t.metadata["quality"] = c.quality
        out.append(t)
    return out
