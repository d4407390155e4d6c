"""Registry check and recommendation on the bundled taxonomy, under the default
preference order and its reverse.

    python3 scripts/recommend_report.py [--taxonomy FILE] [-k 3]
"""

import argparse

from modelacq.recommend import (load_taxonomy, nearest_techniques, recommend, render_text,
                                validate_registry)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--taxonomy")
    ap.add_argument("-k", type=int, default=3)
    args = ap.parse_args()
    tax = load_taxonomy(args.taxonomy)
    rep = validate_registry(tax.schema, tax.entries)
    print(f"registry: {len(rep.verdicts)} entries, {len(rep.invalid())} invalid")
    for v in rep.invalid():
        print(f"  {v.id}: {', '.join(v.violated)}")
    results = {}
    for label, prefs in (("default order", tax.preferences), ("reversed order", tax.preferences.reversed())):
        rec = recommend(tax.schema, tax.entries, prefs)
        results[label] = rec.assignment
        print(f"\n### {label}\n")
        print(render_text(tax.schema, rec, nearest_techniques(rec.assignment, tax.entries, args.k)))
    a, b = results.values()
    changed = [n for n in tax.schema.names if a[n] != b[n]]
    print("features that depend on the order:", ", ".join(changed) or "none")


if __name__ == "__main__":
    main()
