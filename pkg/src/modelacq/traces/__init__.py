"""Trace data types, CSV/JSON IO and trace generators."""

from .planner import (DEFAULT_BUDGET, BudgetExhausted, PlanningFailure, ProvedUnsolvable, bfs_plan,
                      goal_count, plan)
from .sampling import (GoalCandidate, GoalSamplerConfig, NoCandidates, goal_quality,
                       heuristic_depth_walk, random_walk, sample_goals, sample_walk_length,
                       trace_from_goal, traces_from_goals, walk, walk_rng)
from .trace import (EmptyFile, MissingActionColumn, ReplayMismatch, Step, Trace, TraceError, TraceList,
                    load_csv, trace_from_plan, write_csv)

__all__ = [
    "DEFAULT_BUDGET", "BudgetExhausted", "PlanningFailure", "ProvedUnsolvable", "bfs_plan",
    "goal_count", "plan", "GoalCandidate", "GoalSamplerConfig", "NoCandidates", "goal_quality",
    "heuristic_depth_walk", "random_walk", "sample_goals", "sample_walk_length", "trace_from_goal",
    "traces_from_goals", "walk", "walk_rng", "EmptyFile", "MissingActionColumn", "ReplayMismatch",
    "Step", "Trace", "TraceError", "TraceList", "load_csv", "trace_from_plan", "write_csv",
]
