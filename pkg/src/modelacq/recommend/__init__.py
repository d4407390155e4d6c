"""Feature taxonomy, registry validation and recommendations of unexplored profiles."""

from .engine import (EntryVerdict, FieldSaturated, Neighbor, Recommendation, RegistryReport, build_theory,
                     greedy_check, nearest_techniques, recommend, recommend_iterated_sat, validate_registry)
from .report import parse_report_json, render_text, report_json
from .schema import (Constraint, Feature, FeatureSchema, PreferenceList, SchemaError, Taxonomy,
                     TechniqueEntry, UnknownFeature, format_literal, load_preferences, load_taxonomy,
                     parse_literal, taxonomy_from_dict, taxonomy_to_dict)

__all__ = [
    "EntryVerdict", "FieldSaturated", "Neighbor", "Recommendation", "RegistryReport", "build_theory",
    "greedy_check", "nearest_techniques", "recommend", "recommend_iterated_sat", "validate_registry",
    "parse_report_json", "render_text", "report_json", "Constraint", "Feature", "FeatureSchema",
    "PreferenceList", "SchemaError", "Taxonomy", "TechniqueEntry", "UnknownFeature", "format_literal",
    "load_preferences", "load_taxonomy", "parse_literal", "taxonomy_from_dict", "taxonomy_to_dict",
]
