"""STRIPS + typing PDDL front-end: parsing, grounding, successor function and
serialization of learned models."""

from .ground import DEFAULT_ACTION_CAP, ground, reachable_actions
from .learned import LearnedAction, LearnedModel
from .model import (ROOT_TYPE, ArityMismatch, Atom, Domain, Fluent, GroundAction, GroundingExplosion,
                    GroundTask, LiftedAction, PDDLError, PDDLSyntaxError, PlanningObject,
                    PreconditionViolation, Problem, State, TypeMismatch, UndeclaredObject,
                    UndeclaredPredicate, UndeclaredType, UnsupportedFeature, apply, mask,
                    mask_indices)
from .parser import parse_domain, parse_problem
from .writer import model_to_domain, serialize_model, write_domain

__all__ = [
    "DEFAULT_ACTION_CAP", "ground", "reachable_actions", "LearnedAction", "LearnedModel",
    "ROOT_TYPE", "ArityMismatch", "Atom", "Domain", "Fluent", "GroundAction", "GroundingExplosion",
    "GroundTask", "LiftedAction", "PDDLError", "PDDLSyntaxError", "PlanningObject",
    "PreconditionViolation", "Problem", "State", "TypeMismatch", "UndeclaredObject",
    "UndeclaredPredicate", "UndeclaredType", "UnsupportedFeature", "apply", "mask", "mask_indices",
    "parse_domain", "parse_problem", "model_to_domain", "serialize_model", "write_domain",
    "load_task",
]


def load_task(domain_text: str, problem_text: str, max_actions: int = DEFAULT_ACTION_CAP) -> GroundTask:
    """Parse and ground in one call."""
    d = parse_domain(domain_text)
    return ground(d, parse_problem(problem_text, d), max_actions)
