"""Observation tokens: what an extractor gets to see of a trace.

A token carries a ternary view of the fluents (``True``/``False``/``None`` for
unknown), an action label, or an opaque state id, depending on its type.
Casting only ever removes information.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import ModelAcqError
from .traces import TraceList
from .traces.sampling import walk_rng

View = Tuple[Optional[bool], ...]


class ObservationError(ModelAcqError):
    pass


class InvalidProbability(ObservationError):
    pass


class InfeasibleCast(ObservationError):
    def __init__(self, source: "TokenType", target: "TokenType"):
        super().__init__(f"cannot cast {source.value} tokens to {target.value}")
        self.source, self.target = source, target


class TokenType(enum.Enum):
    IDENTITY = "Identity"
    PARTIAL_STATE = "PartialState"
    STATE_ID = "StateID"
    NOISY_STATE = "NoisyState"
    ACTION_ONLY = "ActionOnly"


CAST_EDGES: Dict[TokenType, FrozenSet[TokenType]] = {
    TokenType.IDENTITY: frozenset({TokenType.PARTIAL_STATE, TokenType.NOISY_STATE, TokenType.STATE_ID,
                                   TokenType.ACTION_ONLY}),
    TokenType.PARTIAL_STATE: frozenset({TokenType.ACTION_ONLY}),
    TokenType.NOISY_STATE: frozenset({TokenType.ACTION_ONLY}),
    TokenType.STATE_ID: frozenset(),
    TokenType.ACTION_ONLY: frozenset(),
}

_PARAMS = {
    TokenType.IDENTITY: set(),
    TokenType.PARTIAL_STATE: {"percent_missing", "eligible"},
    TokenType.NOISY_STATE: {"flip_prob"},
    TokenType.STATE_ID: set(),
    TokenType.ACTION_ONLY: set(),
}


@dataclass(frozen=True)
class ObservationToken:
    tag: TokenType
    action: Optional[str] = None
    view: Optional[View] = None
    state_id: Optional[int] = None

    def __post_init__(self):
        t = self.tag
        if t in (TokenType.IDENTITY, TokenType.NOISY_STATE):
            if self.view is None or any(v is None for v in self.view):
                raise ObservationError(f"{t.value} token needs a fully known view")
        if t is TokenType.PARTIAL_STATE and self.view is None:
            raise ObservationError("PartialState token needs a view")
        if t is TokenType.ACTION_ONLY and (self.view is not None or self.state_id is not None):
            raise ObservationError("ActionOnly token carries no state information")
        if t is TokenType.STATE_ID and (self.view is not None or self.action is not None
                                        or self.state_id is None):
            raise ObservationError("StateID token carries only a state id")
        if t is not TokenType.STATE_ID and self.state_id is not None:
            raise ObservationError("only StateID tokens carry a state id")

    def known(self) -> Dict[int, bool]:
        return {i: v for i, v in enumerate(self.view or ()) if v is not None}


@dataclass(frozen=True)
class ObservedTrace:
    tag: TokenType
    tokens: Tuple[ObservationToken, ...]
    fluents: Tuple[str, ...]
    provenance: Mapping[str, object] = field(default_factory=dict)
    objects: Mapping[str, str] = field(default_factory=dict)  # object name -> type, when known

    def __post_init__(self):
        for tok in self.tokens:
            if tok.tag is not self.tag:
                raise ObservationError("tokens of one trace must share a type")
            if tok.view is not None and len(tok.view) != len(self.fluents):
                raise ObservationError("view length differs from the fluent count")
        if self.tag is TokenType.IDENTITY and any(t.action is None for t in self.tokens[:-1]):
            raise ObservationError("Identity tokens need an action on every non-final step")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    @property
    def actions(self) -> List[str]:
        return [t.action for t in self.tokens if t.action is not None]

    def to_json(self) -> dict:
        def cell(v):
            return "unknown" if v is None else int(v)

        toks = []
        for t in self.tokens:
            d: dict = {"action": t.action}
            if t.view is not None:
                d["state"] = [cell(v) for v in t.view]
            if t.state_id is not None:
                d["state_id"] = t.state_id
            toks.append(d)
        out = {"token_type": self.tag.value, "fluents": list(self.fluents), "tokens": toks,
               "provenance": dict(self.provenance)}
        if self.objects:
            out["objects"] = dict(sorted(self.objects.items()))
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ObservedTrace":
        tag = TokenType(data["token_type"])
        toks = []
        for d in data["tokens"]:
            view = None
            if "state" in d:
                view = tuple(None if v == "unknown" else bool(v) for v in d["state"])
            toks.append(ObservationToken(tag, d.get("action"), view, d.get("state_id")))
        return cls(tag, tuple(toks), tuple(data["fluents"]), dict(data.get("provenance", {})),
                   dict(data.get("objects", {})))


def dumps_observations(obs: Sequence[ObservedTrace]) -> str:
    return json.dumps([o.to_json() for o in obs], indent=1)


def loads_observations(text: str) -> List[ObservedTrace]:
    try:
        data = json.loads(text)
        if isinstance(data, dict):
            data = [data]
        return [ObservedTrace.from_json(d) for d in data]
    except (KeyError, TypeError, ValueError) as e:
        raise ObservationError(f"not an observation file: {type(e).__name__}: {e}") from None


# -- tokenization -------------------------------------------------------------


def _check_params(tag: TokenType, params: Mapping[str, object]) -> Dict[str, object]:
    extra = set(params) - _PARAMS[tag]
    if extra:
        raise ObservationError(f"parameters {sorted(extra)} do not apply to {tag.value}")
    for key in ("percent_missing", "flip_prob"):
        if key in params:
            p = params[key]
            if not isinstance(p, (int, float)) or not 0.0 <= float(p) <= 1.0:
                raise InvalidProbability(f"{key} must lie in [0, 1], got {p!r}")
    return dict(params)


def _identity(trace, fluents, index: int, objects: Mapping[str, str]) -> ObservedTrace:
    n = len(fluents)
    toks = tuple(
        ObservationToken(TokenType.IDENTITY, s.action, tuple(bool(s.state.bits >> i & 1) for i in range(n)))
        for s in trace.steps
    )
    prov = {"index": index}
    if trace.task_ref is not None:
        prov["task"] = trace.task_ref
    if trace.goal is not None:
        prov["goal"] = list(trace.goal)
    return ObservedTrace(TokenType.IDENTITY, toks, tuple(fluents), prov, dict(objects))


def _eligible_columns(fluents: Sequence[str], eligible: Optional[Iterable[str]]) -> np.ndarray:
    if eligible is None:
        return np.ones(len(fluents), dtype=bool)
    names = set(eligible)
    unknown = names - set(fluents)
    if unknown:
        raise ObservationError(f"eligible fluents not in vocabulary: {sorted(unknown)[:5]}")
    return np.array([f in names for f in fluents], dtype=bool)


def _views(obs: ObservedTrace) -> np.ndarray:
    return np.array([[bool(v) for v in t.view] for t in obs.tokens], dtype=bool).reshape(len(obs.tokens),
                                                                                    len(obs.fluents))


def _cast_one(obs: ObservedTrace, target: TokenType, params: Dict[str, object],
              rng: Optional[np.random.Generator], ids: Optional[Dict[View, int]]) -> ObservedTrace:
    if target not in CAST_EDGES[obs.tag]:
        raise InfeasibleCast(obs.tag, target)
    prov = dict(obs.provenance)
    prov.setdefault("casts", [])
    prov["casts"] = list(prov["casts"]) + [{"to": target.value, **{k: v for k, v in params.items()
                                                                   if k != "eligible"}}]
    if target is TokenType.ACTION_ONLY:
        toks = tuple(ObservationToken(target, t.action) for t in obs.tokens)
    elif target is TokenType.STATE_ID:
        ids = {} if ids is None else ids
        toks = tuple(ObservationToken(target, state_id=ids.setdefault(t.view, len(ids))) for t in obs.tokens)
    else:
        truth = _views(obs)
        draw = rng.random(truth.shape)
        if target is TokenType.PARTIAL_STATE:
            hide = (draw < float(params.get("percent_missing", 0.0))) & _eligible_columns(
                obs.fluents, params.get("eligible"))
            toks = tuple(
                ObservationToken(target, t.action, tuple(None if h else bool(v) for v, h in zip(row, hrow)))
                for t, row, hrow in zip(obs.tokens, truth, hide)
            )
        else:
            noisy = truth ^ (draw < float(params.get("flip_prob", 0.0)))
            toks = tuple(ObservationToken(target, t.action, tuple(bool(v) for v in row))
                         for t, row in zip(obs.tokens, noisy))
    return ObservedTrace(target, toks, obs.fluents, prov, obs.objects)


def cast(obs: ObservedTrace, target: TokenType, params: Optional[Mapping[str, object]] = None,
         seed: int = 0) -> ObservedTrace:
    """Transform ``obs`` to ``target`` along an edge of :data:`CAST_EDGES`."""
    params = _check_params(target, params or {})
    return _cast_one(obs, target, params, walk_rng(seed, int(obs.provenance.get("index", 0))), None)


def cast_all(obs: Sequence[ObservedTrace], target: TokenType, params: Optional[Mapping[str, object]] = None,
             seed: int = 0) -> List[ObservedTrace]:
    """Cast a whole list; state ids are shared across the list."""
    params = _check_params(target, params or {})
    ids: Dict[View, int] = {}
    return [_cast_one(o, target, params, walk_rng(seed, int(o.provenance.get("index", i))), ids)
            for i, o in enumerate(obs)]


def tokenize(traces: TraceList, tag: TokenType, params: Optional[Mapping[str, object]] = None,
             seed: int = 0) -> List[ObservedTrace]:
    """Observation tokens of type ``tag`` for every trace.

    PartialState takes ``percent_missing`` and optionally ``eligible`` (fluent
    names that may be hidden; default all). NoisyState takes ``flip_prob``.
    """
    params = _check_params(tag, params or {})
    base = [_identity(t, traces.fluents, i, traces.objects) for i, t in enumerate(traces)]
    if tag is TokenType.IDENTITY:
        return base
    return cast_all(base, tag, params, seed)


# -- extractor registry -------------------------------------------------------


@dataclass(frozen=True)
class ExtractorInfo:
    name: str
    accepts: FrozenSet[TokenType]
    run: Optional[Callable] = None
    description: str = ""

    @property
    def implemented(self) -> bool:
        return self.run is not None


class ExtractorRegistry:
    def __init__(self, entries: Iterable[ExtractorInfo] = ()):
        self._entries: Dict[str, ExtractorInfo] = {}
        for e in entries:
            self.register(e)

    def register(self, info: ExtractorInfo) -> None:
        self._entries[info.name] = info

    def __getitem__(self, name: str) -> ExtractorInfo:
        return self._entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __iter__(self):
        return iter(sorted(self._entries.values(), key=lambda e: e.name))

    def __len__(self) -> int:
        return len(self._entries)


def compatible_extractors(obs: ObservedTrace, registry: ExtractorRegistry) -> List[str]:
    """Names of registered extractors accepting the token type of ``obs``."""
    return [e.name for e in registry if obs.tag in e.accepts]

