"""Registry validation and recommendations of unexplored feature profiles.

The theory is the schema constraints plus one clause per registered
technique ruling out its feature cube. It is compiled once to d-DNNF;
preferences are then enforced greedily by conditioning, and the final
assignment is the smallest remaining model in declared feature order with
absent before present.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from ..errors import ModelAcqError
from ..logic import Cnf, compile_ddnnf, condition, count_models, smallest_model, solve_sat
from .schema import FeatureSchema, Literal, PreferenceList, TechniqueEntry


class FieldSaturated(ModelAcqError):
    """Every valid feature profile is already covered by the registry."""


@dataclass
class EntryVerdict:
    id: str
    valid: bool
    violated: List[str] = field(default_factory=list)


@dataclass
class RegistryReport:
    verdicts: List[EntryVerdict]

    @property
    def valid(self) -> bool:
        return all(v.valid for v in self.verdicts)

    def invalid(self) -> List[EntryVerdict]:
        return [v for v in self.verdicts if not v.valid]


def _cube_units(schema: FeatureSchema, entry: TechniqueEntry) -> List[List[int]]:
    entry.check(schema)
    return [[schema.lit(x)] for x in entry.cube]


def _sat(num_vars: int, clauses: Sequence[Sequence[int]]) -> bool:
    return solve_sat(Cnf(num_vars, [list(c) for c in clauses], allow_empty=True)) is not None


def validate_registry(schema: FeatureSchema, entries: Sequence[TechniqueEntry]) -> RegistryReport:
    """An entry is valid when its cube is consistent with the constraints.

    For an invalid entry, ``violated`` names a minimal set of constraints that
    together contradict the cube (deletion-based shrinking).
    """
    n = len(schema.features)
    verdicts = []
    for e in entries:
        units = _cube_units(schema, e)
        cons = [(c.name, schema.clause(c)) for c in schema.constraints]
        if _sat(n, units + [c for _, c in cons]):
            verdicts.append(EntryVerdict(e.id, True))
            continue
        core = list(cons)
        i = 0
        while i < len(core):
            trial = core[:i] + core[i + 1:]
            if not _sat(n, units + [c for _, c in trial]):
                core = trial
            else:
                i += 1
        verdicts.append(EntryVerdict(e.id, False, [name for name, _ in core]))
    return RegistryReport(verdicts)


def build_theory(schema: FeatureSchema, entries: Sequence[TechniqueEntry]) -> Cnf:
    """Constraints plus, for each entry, the single clause negating its cube."""
    cnf = schema.constraint_cnf()
    for e in entries:
        e.check(schema)
        cnf.add_clause([-schema.lit(x) for x in e.cube])
    return cnf


@dataclass
class Recommendation:
    assignment: Dict[str, bool]
    enforced: List[Literal]
    skipped: List[Literal]

    def literals(self) -> List[Literal]:
        return list(self.assignment.items())


def recommend(schema: FeatureSchema, entries: Sequence[TechniqueEntry], prefs: PreferenceList,
              cap: int = 64) -> Recommendation:
    theory = build_theory(schema, entries)
    s = compile_ddnnf(theory, cap=cap)
    if count_models(s) == 0:
        raise FieldSaturated("no feature profile satisfies the constraints and avoids every entry")
    enforced, skipped = [], []
    for p in prefs:
        c = condition(s, schema.lit(p))
        if count_models(c) > 0:
            s = c
            enforced.append(p)
        else:
            skipped.append(p)
    model = smallest_model(s, order=list(range(1, len(schema.features) + 1)))
    assignment = {f.name: bool(model[i + 1]) for i, f in enumerate(schema.features)}
    return Recommendation(assignment, enforced, skipped)


def recommend_iterated_sat(schema: FeatureSchema, entries: Sequence[TechniqueEntry],
                           prefs: PreferenceList) -> Recommendation:
    """Same greedy pass with plain SAT calls and accumulated unit clauses."""
    theory = build_theory(schema, entries)
    n = len(schema.features)
    base = [list(c) for c in theory.clauses]
    if not _sat(n, base):
        raise FieldSaturated("no feature profile satisfies the constraints and avoids every entry")
    units: List[List[int]] = []
    enforced, skipped = [], []
    for p in prefs:
        if _sat(n, base + units + [[schema.lit(p)]]):
            units.append([schema.lit(p)])
            enforced.append(p)
        else:
            skipped.append(p)
    # smallest model: fix variables in order, false first
    for v in range(1, n + 1):
        units.append([-v] if _sat(n, base + units + [[-v]]) else [v])
    assignment = {f.name: units[-n + i][0] > 0 for i, f in enumerate(schema.features)}
    return Recommendation(assignment, enforced, skipped)


@dataclass
class Neighbor:
    entry: TechniqueEntry
    distance: int
    diff: List[Tuple[str, bool, str]]  # feature, value in the entry, "relax" or "extend"
    unspecified: int = 0


def nearest_techniques(assignment: Dict[str, bool], entries: Sequence[TechniqueEntry],
                       k: int = 3) -> List[Neighbor]:
    """The ``k`` entries whose cubes are contradicted by the fewest literals.

    Ties go to entries leaving fewer features unspecified, then to the id.
    A contradicted literal is tagged ``relax`` when the entry has the feature
    and the recommendation drops it, ``extend`` when the recommendation adds it.
    """
    scored = []
    for e in entries:
        diff = [(n, v, "relax" if v else "extend") for n, v in e.cube if assignment[n] != v]
        unspecified = len(assignment) - len({n for n, _ in e.cube})
        scored.append(((len(diff), unspecified, e.id), Neighbor(e, len(diff), diff, unspecified)))
    scored.sort(key=lambda t: t[0])
    return [nb for _, nb in scored[:k]]


def greedy_check(schema: FeatureSchema, entries: Sequence[TechniqueEntry], prefs: PreferenceList,
                 rec: Recommendation) -> bool:
    """Replay the preference pass: each enforced literal was consistent with the
    ones enforced before it, each skipped one was not, and the result obeys all."""
    theory = build_theory(schema, entries)
    n = len(schema.features)
    base = [list(c) for c in theory.clauses]
    units: List[List[int]] = []
    enforced = set(rec.enforced)
    for p in prefs:
        ok = _sat(n, base + units + [[schema.lit(p)]])
        if ok != (p in enforced):
            return False
        if ok:
            units.append([schema.lit(p)])
    return all(rec.assignment[name] == v for name, v in rec.enforced)

