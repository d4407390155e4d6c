"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line, even under capture."""

import random
import time
from collections import Counter

import numpy as np
import pytest

from conftest import brute_neighbors, brute_recommend, random_cnf, random_taxonomy
from modelacq import domains
from modelacq.extract import (ArmsParams, extract_arms, extract_observer, hard_clauses_hold,
                              replay_consistency)
from modelacq.extract.observer import ground_effects
from modelacq.logic import (Cnf, compile_ddnnf, condition, count_models, read_dimacs, solve_maxsat,
                            solve_sat, validate, write_dimacs, write_wcnf)
from modelacq.observation import TokenType, dumps_observations, loads_observations, tokenize
from modelacq.pddl import LearnedModel, mask_indices, parse_domain, reachable_actions, serialize_model
from modelacq.recommend import greedy_check, load_taxonomy, nearest_techniques, recommend
from modelacq.traces import (GoalSamplerConfig, TraceList, bfs_plan, load_csv, random_walk, sample_goals,
                             trace_from_goal, write_csv)

ARMS_FIG1 = ArmsParams(2, 2, 110, 100, 0.6, 30, 30)
ROVER_GOALS = [
    ["communicated_soil_data waypoint2", "communicated_rock_data waypoint3",
     "communicated_image_data objective1 high_res"],
    ["communicated_soil_data waypoint3", "communicated_rock_data waypoint2",
     "communicated_image_data objective1 high_res"],
]


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[acceptance] criterion {n}: {'PASS' if ok else 'FAIL'} -- {detail}")
        assert ok, detail
    return emit


# -- truth-table oracle -------------------------------------------------------


def truth_tables(n: int) -> np.ndarray:
    """Row v-1 is the value of variable v in each of the 2^n assignments."""
    idx = np.arange(2 ** n, dtype=np.int64)
    return np.stack([(idx >> (v - 1)) & 1 for v in range(1, n + 1)]).astype(bool)


def clause_table(tt: np.ndarray, clause) -> np.ndarray:
    out = np.zeros(tt.shape[1], dtype=bool)
    for l in clause:
        out |= tt[l - 1] if l > 0 else ~tt[-l - 1]
    return out


def hard_table(tt: np.ndarray, cnf: Cnf) -> np.ndarray:
    ok = np.ones(tt.shape[1], dtype=bool)
    for c in cnf.hard():
        ok &= clause_table(tt, c)
    return ok


def random_3cnf(rng: random.Random, n: int, m: int) -> Cnf:
    cnf = Cnf(n)
    for _ in range(m):
        cnf.add_clause([v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)])
    return cnf


# -- 1 ------------------------------------------------------------------------


def test_criterion_1_observer_exact_recovery(report):
    t0 = time.time()
    rows, ok = [], True
    for name in ("blocksworld-4", "logistics-3", "gripper-2"):
        task = domains.task(name)
        reach = [task.actions[a] for a in reachable_actions(task)]
        traces = TraceList(tuple(task.fluent_names), objects=dict(task.objects))
        counts: Counter = Counter()
        seed = 0
        while any(counts[a.label] < 5 for a in reach):
            w = random_walk(task, 50, 1, seed).traces[0]
            seed += 1
            traces.append(w)
            counts.update(w.actions)
        obs = tokenize(traces, TokenType.IDENTITY)
        model = extract_observer(obs, lift=False)
        # brute-force replay of every observed pair through the learned ground actions
        pairs = agree = 0
        for tr in traces:
            for s, label, s2 in tr.transitions():
                pre, add, dele = model.actions[label].instantiate(())
                names = set(traces.names(s))
                pairs += 1
                agree += pre <= names and (names - dele) | add == set(traces.names(s2))
        eff = ground_effects(obs)
        exact = all(eff[a.label][1] == frozenset(mask_indices(a.add))
                    and eff[a.label][2] == frozenset(mask_indices(a.delete)) for a in reach)
        ok &= agree == pairs and exact
        rows.append(f"{name}: {agree}/{pairs} pairs, effects exact={exact}, {len(traces)} walks")
    dt = time.time() - t0
    ok &= dt < 10
    report(1, ok, "; ".join(rows) + f"; {dt:.2f}s (< 10s)")


# -- 2 ------------------------------------------------------------------------


def test_criterion_2_arms_pipeline(report):
    task = domains.task("rover-1")
    traces = TraceList(tuple(task.fluent_names), objects=dict(task.objects))
    for g in ROVER_GOALS:
        traces.append(trace_from_goal(task, g))
    obs = tokenize(traces, TokenType.PARTIAL_STATE, {"percent_missing": 0.6}, seed=0)
    init, goal = task.names_of(task.init), task.names_of(task.goal_mask)
    t0 = time.time()
    model = extract_arms(obs, ARMS_FIG1, init, goal)
    dt = time.time() - t0
    hard = hard_clauses_hold(model, obs, ARMS_FIG1, init, goal)
    rate = replay_consistency(model, obs).precondition_violation_rate()
    soil = next(a for a in model.actions.values() if a.name == "communicate_soil_data")
    types = dict(soil.params)
    has_at = any(x.predicate == "at" and [types.get(v) for v in x.args] == ["rover", "waypoint"]
                 for x in soil.precond)
    ok = dt < 60 and hard and rate <= 0.05 and has_at
    report(2, ok, f"{dt:.2f}s (< 60s), hard clauses hold={hard}, precondition violation rate {rate:.3f} "
                  f"(<= 0.05), communicate_soil_data precond has at rover waypoint={has_at}")


# -- 3 ------------------------------------------------------------------------


def test_criterion_3_tokenization_statistics(report, blocks):
    traces = random_walk(blocks, 30, 10, seed=0)
    truth = np.array([[v for v in t.view] for o in tokenize(traces, TokenType.IDENTITY) for t in o], dtype=bool)
    rows, ok = [], True
    for p in (0.1, 0.6):
        obs = tokenize(traces, TokenType.PARTIAL_STATE, {"percent_missing": p}, seed=1)
        hidden = np.array([[v is None for v in t.view] for o in obs for t in o])
        frac = hidden.mean()
        ok &= hidden.size >= 1000 and abs(frac - p) <= 0.03
        rows.append(f"masked {frac:.4f} vs {p} (n={hidden.size})")
    for q in (0.05, 0.3):
        obs = tokenize(traces, TokenType.NOISY_STATE, {"flip_prob": q}, seed=2)
        flipped = np.array([[v for v in t.view] for o in obs for t in o], dtype=bool) != truth
        frac = flipped.mean()
        ok &= flipped.size >= 1000 and abs(frac - q) <= 0.03
        rows.append(f"flipped {frac:.4f} vs {q} (n={flipped.size})")
    report(3, ok, "; ".join(rows))


# -- 4 ------------------------------------------------------------------------


def test_criterion_4_sat_and_maxsat_oracles(report):
    rng = random.Random(2024)
    t0 = time.time()
    sat_ok = unsat = 0
    for _ in range(500):
        n = rng.randint(3, 20)
        cnf = random_3cnf(rng, n, max(1, round(4.26 * n)))
        brute = bool(hard_table(truth_tables(n), cnf).any())
        model = solve_sat(cnf)
        got = model is not None
        if got and not all(any(model[abs(l)] == (l > 0) for l in c) for c in cnf.clauses):
            got = None  # a wrong model counts as a mismatch
        sat_ok += got == brute
        unsat += not brute
    max_ok = 0
    for _ in range(200):
        n = rng.randint(2, 15)
        cnf = random_cnf(rng, n, rng.randint(n, 3 * n), width=3, weighted=True)
        tt = truth_tables(n)
        feasible = hard_table(tt, cnf)
        costs = np.zeros(tt.shape[1], dtype=np.int64)
        for c, w in cnf.soft():
            costs += w * ~clause_table(tt, c)
        if not feasible.any():
            try:
                solve_maxsat(cnf)
            except Exception:
                max_ok += 1
            continue
        max_ok += solve_maxsat(cnf).cost == int(costs[feasible].min())
    dt = time.time() - t0
    ok = sat_ok == 500 and max_ok == 200 and dt < 60
    report(4, ok, f"SAT parity {sat_ok}/500 ({unsat} unsat), MaxSAT cost parity {max_ok}/200, {dt:.1f}s (< 60s)")


# -- 5 ------------------------------------------------------------------------


def test_criterion_5_knowledge_compilation(report):
    rng = random.Random(77)
    count_ok = cond_ok = 0
    for _ in range(200):
        n = rng.randint(2, 16)
        cnf = random_cnf(rng, n, rng.randint(1, 3 * n))
        d = compile_ddnnf(cnf)
        try:
            validate(d)
            valid = True
        except Exception:
            valid = False
        models = hard_table(truth_tables(n), cnf)
        count_ok += valid and count_models(d) == int(models.sum())
        v = rng.randint(1, n)
        lit = v if rng.random() < 0.5 else -v
        tt = truth_tables(n)
        filtered = int((models & (tt[v - 1] if lit > 0 else ~tt[v - 1])).sum())
        cond_ok += count_models(condition(d, lit)) == filtered
    ok = count_ok == 200 and cond_ok == 200
    report(5, ok, f"validated+count parity {count_ok}/200, condition parity {cond_ok}/200")


# -- 6 ------------------------------------------------------------------------


def test_criterion_6_recommendation(report):
    rng = random.Random(6)
    agree = 0
    for _ in range(50):
        n = rng.randint(4, 14)
        t = random_taxonomy(rng, n, rng.randint(0, n), rng.randint(3, 10))
        ref = brute_recommend(t)
        if ref is None:
            agree += 1  # covered by FieldSaturated tests; counts only if recommend raises
            try:
                recommend(t.schema, t.entries, t.preferences)
                agree -= 1
            except Exception:
                pass
            continue
        rec = recommend(t.schema, t.entries, t.preferences)
        agree += (rec.assignment, rec.enforced, rec.skipped) == ref
    tax = load_taxonomy()
    rec = recommend(tax.schema, tax.entries, tax.preferences)
    a = all(tax.schema.holds(c, rec.assignment) for c in tax.schema.constraints)
    b = not any(e.matches(rec.assignment) for e in tax.entries)
    c = greedy_check(tax.schema, tax.entries, tax.preferences, rec)
    nbs = [nb.entry.id for nb in nearest_techniques(rec.assignment, tax.entries, 3)]
    d = len(nbs) == 3 and nbs == brute_neighbors(rec.assignment, tax.entries, 3)
    ok = agree == 50 and a and b and c and d
    report(6, ok, f"random schemas {agree}/50 match oracle; shipped taxonomy: constraints={a}, "
                  f"novel={b}, greedy-maximal={c}, neighbours {nbs} match={d}")


# -- 7 ------------------------------------------------------------------------


def test_criterion_7_goal_sampling(report, blocks):
    cands = sample_goals(blocks, GoalSamplerConfig(k=6, g=2, num_goals=20, seed=0))
    reach = quality = 0
    for cand in cands:
        ids = [blocks.fluent_index[f] for f in cand.goal]
        reach += bfs_plan(blocks, ids) is not None
        quality += cand.quality == 1 - abs(len(cand.plan) - 6) / 6
    ok = bool(cands) and reach == len(cands) == quality
    report(7, ok, f"{len(cands)} goals; BFS-reachable {reach}, quality recomputed exactly {quality}")


# -- 8 ------------------------------------------------------------------------


def _learned_models():
    out = []
    for name in ("blocksworld-4", "logistics-3", "gripper-2", "rover-1"):
        task = domains.task(name)
        for seed in range(3):
            obs = tokenize(random_walk(task, 15, 3, seed), TokenType.IDENTITY)
            out.append(extract_observer(obs, lift=seed != 0))
        part = tokenize(random_walk(task, 10, 2, 9), TokenType.PARTIAL_STATE, {"percent_missing": 0.3}, seed=1)
        out.append(extract_arms(part, init=task.names_of(task.init)))
        out.append(LearnedModel.from_domain(parse_domain(domains.texts(name)[0])))
    return out


def test_criterion_8_round_trips(report):
    models = _learned_models()
    pddl = sum(LearnedModel.from_domain(parse_domain(serialize_model(m))).canonical() == m.canonical()
               for m in models)
    csv_ok = json_ok = obs_ok = 0
    traces = 0
    for name in ("blocksworld-4", "rover-1"):
        task = domains.task(name)
        tl = random_walk(task, 12, 5, seed=3)
        again = TraceList.loads(tl.dumps())
        json_ok += again.to_json() == tl.to_json()
        for t in tl:
            traces += 1
            back = load_csv(write_csv(t, tl.fluents)).traces[0]
            csv_ok += [(s.state, s.action) for s in back.steps] == [(s.state, s.action) for s in t.steps]
        obs = tokenize(tl, TokenType.PARTIAL_STATE, {"percent_missing": 0.4}, seed=5)
        obs_ok += loads_observations(dumps_observations(obs)) == obs
    rng = random.Random(8)
    dimacs = 0
    for i in range(100):
        n = rng.randint(1, 30)
        cnf = random_cnf(rng, n, rng.randint(0, 40), width=4, weighted=i % 2 == 1)
        text = write_wcnf(cnf) if i % 2 else write_dimacs(cnf)
        back = read_dimacs(text)
        same = back.num_vars == cnf.num_vars and back.clauses == cnf.clauses and \
            (back.weights or [None] * len(back.clauses)) == (cnf.weights or [None] * len(cnf.clauses))
        dimacs += same and (write_wcnf(back) if i % 2 else write_dimacs(back)) == text
    ok = len(models) == 20 and pddl == 20 and csv_ok == traces and json_ok == 2 and obs_ok == 2 and dimacs == 100
    report(8, ok, f"PDDL {pddl}/{len(models)} models, CSV {csv_ok}/{traces} traces, JSON {json_ok}/2 trace lists, "
                  f"observation JSON {obs_ok}/2, DIMACS/WCNF {dimacs}/100")

