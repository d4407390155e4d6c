from __future__ import annotations

import json
from typing import List, Sequence

from .engine import Neighbor, Recommendation
from .schema import FeatureSchema, SchemaError, format_literal, parse_literal


def render_text(schema: FeatureSchema, rec: Recommendation, neighbors: Sequence[Neighbor]) -> str:
    lines = ["Unexplored feature profile", "=========================="]
    by_facet: dict = {}
    for f in schema.features:
        by_facet.setdefault(f.facet or "features", []).append(f)
    for facet, feats in by_facet.items():
        lines.append(f"[{facet}]")
        for f in feats:
            mark = "+" if rec.assignment[f.name] else "-"
            group = f"{f.group}/" if f.group else ""
            lines.append(f"  {mark} {group}{f.name}")
    lines += ["", "Preferences"]
    lines.append("  enforced: " + (" ".join(format_literal(p) for p in rec.enforced) or "none"))
    if rec.skipped:
        lines.append("  skipped:  " + " ".join(format_literal(p) for p in rec.skipped))
    else:
        lines.append("  all preferences enforced")
    for i, nb in enumerate(neighbors, 1):
        e = nb.entry
        meta = ", ".join(str(x) for x in (e.title, e.year) if x)
        lines += ["", f"Neighbor {i}: {e.id}" + (f" ({meta})" if meta else ""),
                  f"  distance {nb.distance}, {nb.unspecified} features unspecified"]
        for name, value, tag in nb.diff:
            lines.append(f"  {tag:<6} {format_literal((name, value))}")
        if not nb.diff:
            lines.append("  no feature changes needed")
    return "\n".join(lines) + "\n"


def report_json(schema: FeatureSchema, rec: Recommendation, neighbors: Sequence[Neighbor]) -> str:
    data = {
        "assignment": [format_literal((f.name, rec.assignment[f.name])) for f in schema.features],
        "enforced": [format_literal(p) for p in rec.enforced],
        "skipped": [format_literal(p) for p in rec.skipped],
        "neighbors": [
            {"id": nb.entry.id, "title": nb.entry.title, "year": nb.entry.year, "distance": nb.distance,
             "unspecified": nb.unspecified,
             "diff": [{"feature": n, "entry_value": v, "tag": t} for n, v, t in nb.diff]}
            for nb in neighbors
        ],
    }
    return json.dumps(data, indent=1)


def parse_report_json(text: str, schema: FeatureSchema) -> Recommendation:
    """Read back the recommendation part of :func:`report_json`, checking feature names."""
    data = json.loads(text)
    lits = [parse_literal(x) for x in data["assignment"]]
    names = [n for n, _ in lits]
    if sorted(names) != sorted(schema.names):
        raise SchemaError("report assignment does not cover the schema features exactly")
    for key in ("enforced", "skipped"):
        for x in data[key]:
            schema.var(parse_literal(x)[0])
    return Recommendation(dict(lits), [parse_literal(x) for x in data["enforced"]],
                          [parse_literal(x) for x in data["skipped"]])


def neighbor_ids(text: str) -> List[str]:
    return [nb["id"] for nb in json.loads(text)["neighbors"]]
