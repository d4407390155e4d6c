import itertools
import random

import pytest

from modelacq import domains
from modelacq.logic import Cnf


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int, width: int = 3,
               weighted: bool = False) -> Cnf:
    cnf = Cnf(num_vars)
    for _ in range(num_clauses):
        k = rng.randint(1, min(width, num_vars))
        lits = [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, num_vars + 1), k)]
        w = None
        if weighted and rng.random() < 0.6:
            w = rng.randint(1, 9)
        cnf.add_clause(lits, w)
    return cnf


def assignments(n: int):
    for bits in itertools.product((False, True), repeat=n):
        yield {i + 1: b for i, b in enumerate(bits)}


def brute_models(cnf: Cnf):
    return [a for a in assignments(cnf.num_vars)
            if all(any(a[abs(l)] == (l > 0) for l in c) for c in cnf.hard())]


@pytest.fixture(scope="session")
def blocks():
    return domains.task("blocksworld-4")


@pytest.fixture(scope="session")
def rover():
    return domains.task("rover-1")


def random_taxonomy(rng: random.Random, n_features: int, n_constraints: int, n_cubes: int):
    from modelacq.recommend import (Constraint, Feature, FeatureSchema, PreferenceList, Taxonomy,
                                    TechniqueEntry)
    names = [f"f{i}" for i in range(n_features)]
    feats = tuple(Feature(n, facet=rng.choice(["a", "b"])) for n in names)
    cons = []
    for i in range(n_constraints):
        k = rng.randint(1, min(3, n_features))
        cons.append(Constraint(f"c{i}", tuple((n, rng.random() < 0.5) for n in rng.sample(names, k))))
    schema = FeatureSchema(feats, tuple(cons))
    entries = []
    for i in range(n_cubes):
        k = rng.randint(1, n_features)
        entries.append(TechniqueEntry(f"e{i}", cube=tuple((n, rng.random() < 0.5) for n in rng.sample(names, k))))
    pref_names = rng.sample(names, rng.randint(0, n_features))
    prefs = PreferenceList(tuple((n, rng.random() < 0.5) for n in pref_names))
    return Taxonomy(schema, tuple(entries), prefs)


def brute_recommend(tax):
    """Greedy preference pass over an explicit list of admissible assignments.

    Returns (assignment, enforced, skipped) or None when nothing is admissible.
    """
    names = tax.schema.names
    pool = []
    for bits in itertools.product((False, True), repeat=len(names)):
        a = dict(zip(names, bits))
        if all(tax.schema.holds(c, a) for c in tax.schema.constraints) and not any(
                e.matches(a) for e in tax.entries):
            pool.append(a)
    if not pool:
        return None
    enforced, skipped = [], []
    for name, value in tax.preferences:
        kept = [a for a in pool if a[name] == value]
        if kept:
            pool = kept
            enforced.append((name, value))
        else:
            skipped.append((name, value))
    best = min(pool, key=lambda a: [a[n] for n in names])
    return best, enforced, skipped


def brute_neighbors(assignment, entries, k):
    scored = []
    for e in entries:
        distance = sum(assignment[n] != v for n, v in e.cube)
        unspecified = len(assignment) - len({n for n, _ in e.cube})
        scored.append((distance, unspecified, e.id))
    return [x[2] for x in sorted(scored)[:k]]
