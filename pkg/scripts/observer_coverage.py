"""Random walks until every reachable ground action is seen 5 times, then
compare Observer's ground effects with the task's.

    python3 scripts/observer_coverage.py [--min-count 5] [--length 50]
"""

import argparse
import time
from collections import Counter

from modelacq import domains
from modelacq.extract import extract_observer, replay_consistency
from modelacq.extract.observer import ground_effects
from modelacq.observation import TokenType, tokenize
from modelacq.pddl import mask_indices, reachable_actions
from modelacq.traces import TraceList, random_walk


def run(name, min_count, length):
    task = domains.task(name)
    reach = [task.actions[a] for a in reachable_actions(task)]
    traces = TraceList(tuple(task.fluent_names), objects=dict(task.objects))
    counts = Counter()
    seed = 0
    while any(counts[a.label] < min_count for a in reach):
        w = random_walk(task, length, 1, seed).traces[0]
        seed += 1
        traces.append(w)
        counts.update(w.actions)
    obs = tokenize(traces, TokenType.IDENTITY)
    eff = ground_effects(obs)
    exact = sum(eff[a.label][1] == frozenset(mask_indices(a.add))
                and eff[a.label][2] == frozenset(mask_indices(a.delete)) for a in reach)
    extra_pre = sum(len(eff[a.label][0]) - len(mask_indices(a.pre)) for a in reach)
    lifted = extract_observer(obs)
    viol = replay_consistency(lifted, obs).violations
    return len(traces), len(reach), exact, extra_pre, len(lifted.actions), viol


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--min-count", type=int, default=5)
    ap.add_argument("--length", type=int, default=50)
    args = ap.parse_args()
    print(f"{'task':<15}{'walks':>6}{'actions':>8}{'exact':>7}{'extra pre':>10}{'lifted':>7}{'viol':>5}{'sec':>7}")
    for name in ("blocksworld-4", "logistics-3", "gripper-2", "rover-1"):
        t0 = time.time()
        row = run(name, args.min_count, args.length)
        print(f"{name:<15}" + "".join(f"{x:>{w}}" for x, w in zip(row, (6, 8, 7, 10, 7, 5)))
              + f"{time.time() - t0:>7.2f}")


if __name__ == "__main__":
    main()
