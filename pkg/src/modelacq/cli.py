"""Command line: generate -> tokenize -> extract, plus recommend and validate.

Every stage reads and writes files, so stages can be rerun independently.
Exit status is 0 on success, 1 on domain errors and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import domains
from .errors import ModelAcqError
from .extract import DEFAULT_REGISTRY, ArmsParams, dump_wcnf, extract_arms, extract_observer
from .extract.common import require_tags
from .logic import write_dimacs
from .observation import TokenType, dumps_observations, loads_observations, tokenize
from .pddl import GroundTask, load_task, serialize_model
from .recommend import (build_theory, load_preferences, load_taxonomy, nearest_techniques, recommend,
                        render_text, report_json, validate_registry)
from .traces import (GoalSamplerConfig, TraceList, heuristic_depth_walk, load_csv, random_walk,
                     sample_goals, trace_from_goal, traces_from_goals, write_csv)


class UsageError(Exception):
    pass


TOKEN_TYPES = {
    "identity": TokenType.IDENTITY,
    "partial": TokenType.PARTIAL_STATE,
    "noisy": TokenType.NOISY_STATE,
    "stateid": TokenType.STATE_ID,
    "actiononly": TokenType.ACTION_ONLY,
}


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MACQ_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"MACQ_SEED must be an integer, got {env!r}") from None


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"file not found: {path}")
    return p.read_text("utf-8")


def _write(path: str, text: str) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, "utf-8")


def _task(args) -> Optional[GroundTask]:
    if getattr(args, "task", None):
        if args.task not in domains.TASKS:
            raise UsageError(f"--task: unknown bundled task {args.task!r} (choose from {sorted(domains.TASKS)})")
        return domains.task(args.task)
    if getattr(args, "domain", None) or getattr(args, "problem", None):
        if not (args.domain and args.problem):
            raise UsageError("--domain and --problem go together")
        return load_task(_read(args.domain), _read(args.problem))
    return None


def _add_task_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--task", help="bundled task name, e.g. blocksworld-4")
    p.add_argument("--domain", help="PDDL domain file")
    p.add_argument("--problem", help="PDDL problem file")


# -- subcommands --------------------------------------------------------------


def cmd_generate(args) -> int:
    seed = _seed(args)
    if args.from_csv:
        traces = None
        for path in args.from_csv:
            tl = load_csv(_read(path), args.action_column)
            if traces is None:
                traces = tl
            elif tl.fluents != traces.fluents:
                raise UsageError(f"--from-csv: {path} has different fluent columns")
            else:
                traces.traces.extend(tl.traces)
    else:
        task = _task(args)
        if task is None:
            raise UsageError("generate needs --task, --domain/--problem or --from-csv")
        if args.goal:
            traces = TraceList(tuple(task.fluent_names), objects=dict(task.objects))
            for g in args.goal:
                traces.append(trace_from_goal(task, [x.strip() for x in g.split(";") if x.strip()]))
        elif args.method == "random":
            traces = random_walk(task, args.length, args.count, seed)
        elif args.method == "heuristic":
            traces = heuristic_depth_walk(task, args.count, seed, args.constant, args.max_length)
        else:
            cfg = GoalSamplerConfig(args.k, args.g, args.num_goals, seed)
            traces = traces_from_goals(task, sample_goals(task, cfg))
    if args.csv_dir:
        for i, t in enumerate(traces):
            _write(os.path.join(args.csv_dir, f"trace_{i:03d}.csv"), write_csv(t, traces.fluents, args.action_column))
    _write(args.out, json.dumps(traces.to_json(), indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(traces)} traces to {args.out}")
    return 0


def cmd_tokenize(args) -> int:
    traces = TraceList.loads(_read(args.input))
    tag = TOKEN_TYPES[args.type]
    params = {}
    if tag is TokenType.PARTIAL_STATE:
        params["percent_missing"] = args.percent_missing
        if args.eligible:
            params["eligible"] = [x.strip() for x in args.eligible.split(";") if x.strip()]
    elif tag is TokenType.NOISY_STATE:
        params["flip_prob"] = args.flip_prob
    elif args.percent_missing is not None or args.flip_prob is not None:
        raise UsageError(f"--percent-missing/--flip-prob do not apply to --type {args.type}")
    if tag is TokenType.PARTIAL_STATE and params["percent_missing"] is None:
        raise UsageError("--type partial needs --percent-missing")
    if tag is TokenType.NOISY_STATE and params["flip_prob"] is None:
        raise UsageError("--type noisy needs --flip-prob")
    obs = tokenize(traces, tag, params, _seed(args))
    _write(args.out, dumps_observations(obs) + "\n")
    print(f"wrote {len(obs)} {tag.value} traces to {args.out}")
    return 0


def _arms_params(args) -> ArmsParams:
    return ArmsParams(args.upper_bound, args.min_support, args.action_weight, args.info_weight,
                      args.threshold, args.info3_default, args.plan_default)


def cmd_extract(args) -> int:
    obs = loads_observations(_read(args.input))
    require_tags(obs, DEFAULT_REGISTRY[args.method].accepts, args.method)
    if args.method == "observer":
        model = extract_observer(obs, lift=not args.ground)
    else:
        task = _task(args)
        if task is None:
            raise UsageError("--method arms needs the initial state and goal: give --task or --domain/--problem")
        init, goal = task.names_of(task.init), task.names_of(task.goal_mask)
        params = _arms_params(args)
        if args.dump_wcnf:
            _write(args.dump_wcnf, dump_wcnf(obs, params, init, goal))
        model = extract_arms(obs, params, init, goal)
    out = Path(args.out_dir)
    _write(str(out / "model.json"), json.dumps(model.to_json(), indent=1, sort_keys=True) + "\n")
    _write(str(out / "domain.pddl"), serialize_model(model, args.name))
    _write(str(out / "details.txt"), model.details())
    print(model.details(), end="")
    return 0


def cmd_recommend(args) -> int:
    tax = load_taxonomy(args.taxonomy)
    prefs = load_preferences(args.prefs) if args.prefs else tax.preferences
    if args.reverse:
        prefs = prefs.reversed()
    if args.dimacs:
        _write(args.dimacs, write_dimacs(build_theory(tax.schema, tax.entries)))
    rec = recommend(tax.schema, tax.entries, prefs)
    neighbors = nearest_techniques(rec.assignment, tax.entries, args.k)
    text = render_text(tax.schema, rec, neighbors)
    if args.json:
        _write(args.json, report_json(tax.schema, rec, neighbors) + "\n")
    if args.out:
        _write(args.out, text)
    print(text, end="")
    return 0


def cmd_validate(args) -> int:
    tax = load_taxonomy(args.taxonomy)
    report = validate_registry(tax.schema, tax.entries)
    for v in report.verdicts:
        print(f"{v.id}: {'ok' if v.valid else 'violates ' + ', '.join(v.violated)}")
    if not report.valid:
        raise ModelAcqError(f"{len(report.invalid())} registry entries violate the constraints")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="macq", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=None, help="random seed (default: $MACQ_SEED or 0)")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a TraceList JSON from a task or CSV files")
    _add_task_args(g)
    g.add_argument("--method", choices=["random", "heuristic", "goals"], default="random")
    g.add_argument("--length", type=int, default=10, help="random walk length")
    g.add_argument("--count", type=int, default=5, help="number of walks")
    g.add_argument("--constant", type=float, default=2.0, help="heuristic depth constant")
    g.add_argument("--max-length", type=int, default=None, help="cap on heuristic walk length")
    g.add_argument("--k", type=int, default=6, help="goal sampling walk length")
    g.add_argument("--g", type=int, default=2, help="goal size")
    g.add_argument("--num-goals", type=int, default=10)
    g.add_argument("--goal", action="append", help="explicit goal, fluents separated by ';' (repeatable)")
    g.add_argument("--from-csv", nargs="+", help="CSV trace files, one trace each")
    g.add_argument("--action-column", default="action")
    g.add_argument("--csv-dir", help="also write each trace as CSV into this directory")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("tokenize", help="turn a TraceList into observation tokens")
    t.add_argument("--in", dest="input", required=True)
    t.add_argument("--type", choices=sorted(TOKEN_TYPES), required=True)
    t.add_argument("--percent-missing", type=float, default=None)
    t.add_argument("--eligible", help="fluents that may be hidden, separated by ';'")
    t.add_argument("--flip-prob", type=float, default=None)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_tokenize)

    e = sub.add_parser("extract", help="learn an action model from observation tokens")
    _add_task_args(e)
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--method", choices=["observer", "arms"], required=True)
    e.add_argument("--ground", action="store_true", help="observer: skip lifting")
    e.add_argument("--name", default="learned", help="PDDL domain name")
    d = ArmsParams()
    e.add_argument("--upper-bound", type=int, default=d.upper_bound)
    e.add_argument("--min-support", type=int, default=d.min_support)
    e.add_argument("--action-weight", type=int, default=d.action_weight)
    e.add_argument("--info-weight", type=int, default=d.info_weight)
    e.add_argument("--threshold", type=float, default=d.threshold)
    e.add_argument("--info3-default", type=int, default=d.info3_default)
    e.add_argument("--plan-default", type=int, default=d.plan_default)
    e.add_argument("--dump-wcnf", help="arms: write the first-round encoding as WCNF")
    e.add_argument("--out-dir", required=True)
    e.set_defaults(func=cmd_extract)

    r = sub.add_parser("recommend", help="propose an unexplored feature profile")
    r.add_argument("--taxonomy", help="taxonomy YAML (default: bundled)")
    r.add_argument("--prefs", help="preference YAML overriding the taxonomy's list")
    r.add_argument("--reverse", action="store_true", help="reverse the preference order")
    r.add_argument("-k", type=int, default=3, help="number of neighbours")
    r.add_argument("--json", help="also write the report as JSON")
    r.add_argument("--dimacs", help="write the theory as DIMACS")
    r.add_argument("--out", help="write the text report here")
    r.set_defaults(func=cmd_recommend)

    v = sub.add_parser("validate", help="check registry entries against the constraints")
    v.add_argument("--taxonomy", help="taxonomy YAML (default: bundled)")
    v.set_defaults(func=cmd_validate)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except ModelAcqError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
