"""Plan traces and their CSV / JSON forms."""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..errors import ModelAcqError
from ..pddl import GroundTask, State, apply


class TraceError(ModelAcqError):
    pass


class MissingActionColumn(TraceError):
    pass


class EmptyFile(TraceError):
    pass


class ReplayMismatch(TraceError):
    pass


@dataclass(frozen=True)
class Step:
    state: State
    action: Optional[str] = None  # canonical ground-action string, None on the final step


@dataclass
class Trace:
    steps: List[Step]
    task_ref: Optional[str] = None
    goal: Optional[Tuple[str, ...]] = None
    metadata: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    def __getitem__(self, i: int) -> Step:
        return self.steps[i]

    @property
    def actions(self) -> List[str]:
        return [s.action for s in self.steps if s.action is not None]

    def transitions(self) -> Iterator[Tuple[State, str, State]]:
        for a, b in zip(self.steps, self.steps[1:]):
            if a.action is not None:
                yield a.state, a.action, b.state

    def check(self, task: GroundTask) -> None:
        """Raise :class:`ReplayMismatch` unless every step follows by ``apply``."""
        for i, (s, act, nxt) in enumerate(self.transitions()):
            if act not in task.action_index:
                raise ReplayMismatch(f"step {i}: unknown action {act!r}")
            if apply(s, task.action_index[act], task) != nxt:
                raise ReplayMismatch(f"step {i}: state after {act!r} differs from replay")


@dataclass
class TraceList:
    fluents: Tuple[str, ...]
    traces: List[Trace] = field(default_factory=list)
    objects: Dict[str, str] = field(default_factory=dict)  # object name -> type, when known

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self) -> Iterator[Trace]:
        return iter(self.traces)

    def __getitem__(self, i: int) -> Trace:
        return self.traces[i]

    def append(self, trace: Trace) -> None:
        self.traces.append(trace)

    def names(self, state: State) -> List[str]:
        return [self.fluents[i] for i in state.indices()]

    def to_json(self) -> dict:
        out: dict = {"fluents": list(self.fluents)}
        if self.objects:
            out["objects"] = dict(sorted(self.objects.items()))
        traces = []
        for t in self.traces:
            d: dict = {"steps": [{"state": s.state.to_list(), "action": s.action} for s in t.steps]}
            if t.task_ref is not None:
                d["task"] = t.task_ref
            if t.goal is not None:
                d["goal"] = list(t.goal)
            if t.metadata:
                d["metadata"] = t.metadata
            traces.append(d)
        out["traces"] = traces
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "TraceList":
        fluents = tuple(data["fluents"])
        tl = cls(fluents, objects=dict(data.get("objects", {})))
        for d in data["traces"]:
            steps = []
            for s in d["steps"]:
                if len(s["state"]) != len(fluents):
                    raise TraceError(f"state of length {len(s['state'])} for {len(fluents)} fluents")
                steps.append(Step(State.from_list(s["state"]), s.get("action")))
            goal = tuple(d["goal"]) if d.get("goal") is not None else None
            tl.append(Trace(steps, d.get("task"), goal, dict(d.get("metadata", {}))))
        return tl

    @classmethod
    def loads(cls, text: str) -> "TraceList":
        try:
            return cls.from_json(json.loads(text))
        except (KeyError, TypeError, ValueError) as e:
            raise TraceError(f"not a trace file: {type(e).__name__}: {e}") from None


def trace_from_plan(task: GroundTask, plan: Sequence[int], goal: Optional[Iterable[str]] = None) -> Trace:
    state = task.init
    steps = []
    for a in plan:
        steps.append(Step(state, task.actions[a].label))
        state = apply(state, a, task)
    steps.append(Step(state, None))
    return Trace(steps, task.name, tuple(goal) if goal is not None else None)


# -- CSV ---------------------------------------------------------------------


def write_csv(trace: Trace, fluents: Sequence[str], action_column: str = "action") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(fluents) + [action_column])
    for s in trace.steps:
        w.writerow(s.state.to_list() + [s.action or ""])
    return buf.getvalue()


def load_csv(text: str, action_column: str = "action") -> TraceList:
    """One CSV file becomes one trace.

    Columns holding only ``0``/``1`` become boolean fluents named by their
    header; every other column (besides ``action_column``) is dropped with a
    warning. An empty action cell marks a step without action.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise EmptyFile("CSV input has no header row")
    header = [h.strip() for h in rows[0]]
    if header.count(action_column) != 1:
        raise MissingActionColumn(f"expected exactly one {action_column!r} column, header is {header}")
    a_idx = header.index(action_column)
    body = rows[1:]
    for n, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise TraceError(f"row {n} has {len(r)} cells, header has {len(header)}")
    keep = []
    for j, h in enumerate(header):
        if j == a_idx:
            continue
        values = {r[j].strip() for r in body}
        if values <= {"0", "1"}:
            keep.append(j)
        else:
            bad = sorted(values - {"0", "1"})[:3]
            warnings.warn(f"dropping non-boolean column {h!r} (values such as {bad})", stacklevel=2)
    fluents = tuple(header[j] for j in keep)
    steps = []
    for r in body:
        label = " ".join(r[a_idx].split()) or None
        steps.append(Step(State.from_list([int(r[j]) for j in keep]), label))
    return TraceList(fluents, [Trace(steps)])
