"""Feature taxonomy, literature registry and preference lists, loaded from YAML.

Literals are written ``name`` (feature holds) or ``-name`` (feature absent).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import yaml

from ..errors import ModelAcqError
from ..logic import Cnf

Literal = Tuple[str, bool]


class SchemaError(ModelAcqError):
    pass


class UnknownFeature(SchemaError):
    def __init__(self, owner: str, name: str):
        super().__init__(f"{owner}: unknown feature {name!r}")
        self.owner, self.name = owner, name


def parse_literal(text: str) -> Literal:
    text = str(text).strip()
    if text.startswith("-"):
        return text[1:].strip(), False
    return text, True


def format_literal(lit: Literal) -> str:
    return lit[0] if lit[1] else f"-{lit[0]}"


@dataclass(frozen=True)
class Feature:
    name: str
    facet: str = ""
    group: str = ""
    description: str = ""


@dataclass(frozen=True)
class Constraint:
    name: str
    clause: Tuple[Literal, ...]
    note: str = ""


@dataclass(frozen=True)
class FeatureSchema:
    features: Tuple[Feature, ...]
    constraints: Tuple[Constraint, ...] = ()

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate feature names")
        for c in self.constraints:
            for n, _ in c.clause:
                if n not in names:
                    raise UnknownFeature(f"constraint {c.name}", n)

    @property
    def names(self) -> List[str]:
        return [f.name for f in self.features]

    def var(self, name: str) -> int:
        try:
            return self._index()[name]
        except KeyError:
            raise UnknownFeature("schema", name) from None

    def _index(self) -> Dict[str, int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {f.name: i + 1 for i, f in enumerate(self.features)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def lit(self, lit: Literal) -> int:
        v = self.var(lit[0])
        return v if lit[1] else -v

    def clause(self, c: Constraint) -> List[int]:
        return [self.lit(x) for x in c.clause]

    def constraint_cnf(self) -> Cnf:
        cnf = Cnf(len(self.features), allow_empty=True)
        for c in self.constraints:
            cnf.add_clause(self.clause(c))
        return cnf

    def holds(self, c: Constraint, assignment: Mapping[str, bool]) -> bool:
        return any(assignment[n] == v for n, v in c.clause)


@dataclass(frozen=True)
class TechniqueEntry:
    id: str
    title: str = ""
    year: Optional[int] = None
    cube: Tuple[Literal, ...] = ()
    note: str = ""

    def check(self, schema: FeatureSchema) -> None:
        seen = {}
        for n, v in self.cube:
            if n not in schema._index():
                raise UnknownFeature(self.id, n)
            if seen.get(n, v) != v:
                raise SchemaError(f"{self.id}: feature {n!r} given both values")
            seen[n] = v

    def matches(self, assignment: Mapping[str, bool]) -> bool:
        return all(assignment[n] == v for n, v in self.cube)


@dataclass(frozen=True)
class PreferenceList:
    literals: Tuple[Literal, ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.literals]
        if len(set(names)) != len(names):
            raise SchemaError("a preference list holds at most one literal per feature")

    def __iter__(self):
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def reversed(self) -> "PreferenceList":
        return PreferenceList(tuple(reversed(self.literals)))


@dataclass(frozen=True)
class Taxonomy:
    schema: FeatureSchema
    entries: Tuple[TechniqueEntry, ...] = ()
    preferences: PreferenceList = field(default_factory=PreferenceList)


def _literals(items: Iterable) -> Tuple[Literal, ...]:
    return tuple(parse_literal(x) for x in items or ())


def taxonomy_from_dict(data: Mapping) -> Taxonomy:
    feats = []
    for f in data.get("features", []):
        if isinstance(f, str):
            feats.append(Feature(f))
        else:
            feats.append(Feature(f["name"], f.get("facet", ""), f.get("group", ""), f.get("description", "")))
    cons = tuple(Constraint(c.get("name", f"c{i}"), _literals(c["clause"]), c.get("note", ""))
                 for i, c in enumerate(data.get("constraints", [])))
    schema = FeatureSchema(tuple(feats), cons)
    entries = tuple(TechniqueEntry(str(e["id"]), e.get("title", ""), e.get("year"), _literals(e.get("cube")),
                                   e.get("note", ""))
                    for e in data.get("entries", []))
    for e in entries:
        e.check(schema)
    prefs = PreferenceList(_literals(data.get("preferences")))
    for n, _ in prefs:
        if n not in schema._index():
            raise UnknownFeature("preferences", n)
    return Taxonomy(schema, entries, prefs)


def taxonomy_to_dict(tax: Taxonomy) -> dict:
    return {
        "features": [{"name": f.name, "facet": f.facet, "group": f.group, "description": f.description}
                     for f in tax.schema.features],
        "constraints": [{"name": c.name, "clause": [format_literal(x) for x in c.clause], "note": c.note}
                        for c in tax.schema.constraints],
        "entries": [{"id": e.id, "title": e.title, "year": e.year, "cube": [format_literal(x) for x in e.cube],
                     "note": e.note} for e in tax.entries],
        "preferences": [format_literal(x) for x in tax.preferences],
    }


def load_taxonomy(source: Union[str, Path, None] = None) -> Taxonomy:
    """Load a taxonomy document; ``None`` loads the bundled default."""
    if source is None:
        text = resources.files("modelacq.recommend").joinpath("data/taxonomy.yaml").read_text("utf-8")
    else:
        text = Path(source).read_text("utf-8")
    return taxonomy_from_dict(yaml.safe_load(text) or {})


def load_preferences(source: Union[str, Path]) -> PreferenceList:
    """A preference file is a YAML list of literals, or a mapping with ``preferences``."""
    data = yaml.safe_load(Path(source).read_text("utf-8"))
    if isinstance(data, Mapping):
        data = data.get("preferences", [])
    return PreferenceList(_literals(data))


def merge(tax: Taxonomy, entries: Optional[Sequence[TechniqueEntry]] = None,
          preferences: Optional[PreferenceList] = None) -> Taxonomy:
    return Taxonomy(tax.schema, tuple(entries) if entries is not None else tax.entries,
                    preferences if preferences is not None else tax.preferences)
