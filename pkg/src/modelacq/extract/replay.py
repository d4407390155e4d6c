"""Check a learned model against observed traces.

The simulation is anchored: each step predicts the next state from the
previous merged state, and then every value the observation actually shows
overrides the prediction. Unknown values stay unknown unless an effect sets
them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from ..observation import ObservedTrace
from ..pddl import LearnedModel
from .common import ExtractionError


class VocabularyMismatch(ExtractionError):
    pass


@dataclass
class TraceReport:
    steps: int = 0
    state_violations: int = 0
    precondition_violations: int = 0
    unknown_actions: int = 0
    details: List[str] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return self.state_violations + self.precondition_violations


@dataclass
class ReplayReport:
    traces: List[TraceReport]

    @property
    def steps(self) -> int:
        return sum(t.steps for t in self.traces)

    @property
    def state_violations(self) -> int:
        return sum(t.state_violations for t in self.traces)

    @property
    def precondition_violations(self) -> int:
        return sum(t.precondition_violations for t in self.traces)

    @property
    def violations(self) -> int:
        return self.state_violations + self.precondition_violations

    def precondition_violation_rate(self) -> float:
        return self.precondition_violations / self.steps if self.steps else 0.0

    def to_json(self) -> dict:
        return {
            "steps": self.steps, "state_violations": self.state_violations,
            "precondition_violations": self.precondition_violations,
            "traces": [{"steps": t.steps, "state_violations": t.state_violations,
                        "precondition_violations": t.precondition_violations,
                        "unknown_actions": t.unknown_actions} for t in self.traces],
        }


def replay_consistency(model: LearnedModel, observed: Sequence[ObservedTrace],
                       keep_details: bool = False) -> ReplayReport:
    """Count (i) observed-true fluents simulated false and (ii) learned
    preconditions that are false in the merged state, per trace."""
    reports = []
    for o in observed:
        if model.fluents and set(model.fluents) != set(o.fluents):
            raise VocabularyMismatch("model and observations use different fluents")
        index = {f: i for i, f in enumerate(o.fluents)}
        rep = TraceReport()

        def ids(names, label):
            try:
                return [index[n] for n in names]
            except KeyError as e:
                raise VocabularyMismatch(f"{label!r} refers to unknown fluent {e.args[0]!r}") from None

        toks = o.tokens
        merged: List[Optional[bool]] = list(toks[0].view) if toks and toks[0].view else [None] * len(o.fluents)
        for i, tok in enumerate(toks[:-1]):
            rep.steps += 1
            nxt_view = toks[i + 1].view
            found = model.lookup(tok.action) if tok.action is not None else None
            if found is None:
                rep.unknown_actions += tok.action is not None
                merged = list(nxt_view) if nxt_view else [None] * len(o.fluents)
                continue
            action, args = found
            pre, add, dele = action.instantiate(args)
            bad = [f for f in ids(pre, tok.action) if merged[f] is False]
            if bad:
                rep.precondition_violations += 1
                if keep_details:
                    rep.details.append(f"step {i}: {tok.action} needs {[o.fluents[f] for f in bad]}")
            predicted = list(merged)
            for f in ids(dele, tok.action):
                predicted[f] = False
            for f in ids(add, tok.action):
                predicted[f] = True
            if nxt_view:
                wrong = [f for f, v in enumerate(nxt_view) if v is True and predicted[f] is False]
                if wrong:
                    rep.state_violations += 1
                    if keep_details:
                        rep.details.append(f"step {i}: after {tok.action} expected {[o.fluents[f] for f in wrong]}")
                predicted = [p if v is None else v for p, v in zip(predicted, nxt_view)]
            merged = predicted
        reports.append(rep)
    return ReplayReport(reports)
