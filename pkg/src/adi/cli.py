"""Command-line entry point: dataset synthesis, single-request runs, and
benchmark evaluation.

Typed requests (--request-type and friends) run fully offline through the
rule-based planner; free-text requests need an LLM backend.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import requests_io as rq
from .config import load_config, make_backend
from .errors import AdiError, MalformedManifest
from .executor import execute_plan, write_trace
from .harness import format_summary, load_dataset, run_benchmark
from .planning import generate_plan, parse_points, rule_based_plan
from .scene import load_scene
from .synth import SynthParams, synth_dataset

EXIT_OK = 0
EXIT_BAD_PARAMS = 1
EXIT_IO = 2
EXIT_NEEDS_BACKEND = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adi", description="Adaptive disaster interpretation harness"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    p_synth.add_argument("--seeds", type=int, required=True, help="number of scenes")
    p_synth.add_argument("--out", required=True, help="output dataset directory")
    p_synth.add_argument("--config", default=None)

    p_run = sub.add_parser("run", help="run a single request against a scene")
    p_run.add_argument("--dataset", required=True)
    p_run.add_argument("--scene", required=True, help="scene id")
    p_run.add_argument("--request-type", choices=rq.REQUEST_TYPES)
    p_run.add_argument("--category", default=None)
    p_run.add_argument("--endpoints", default=None, help='"x,y;x,y"')
    p_run.add_argument("--request-text", default=None)
    p_run.add_argument("--backend", choices=("none", "scripted", "remote"), default=None)
    p_run.add_argument("--config", default=None)
    p_run.add_argument("--out", default=None, help="directory for the trace JSON")

    p_eval = sub.add_parser("eval", help="evaluate a dataset end to end")
    p_eval.add_argument("--dataset", required=True)
    p_eval.add_argument("--traces", default=None, help="directory for per-request traces")
    p_eval.add_argument("--out", default="report.json")
    p_eval.add_argument("--jobs", type=int, default=1)
    p_eval.add_argument("--backend", choices=("none", "scripted", "remote"), default=None)
    p_eval.add_argument("--config", default=None)
    p_eval.add_argument("--json-only", action="store_true")

    return parser


def cmd_synth(args) -> int:
    if args.seeds < 1:
        print("error: --seeds must be >= 1", file=sys.stderr)
        return EXIT_BAD_PARAMS
    try:
        config = load_config(args.config)
        del config  # synth currently takes no knobs from the config file
        counts = synth_dataset(args.seeds, args.out, SynthParams(seed=0))
    except (ValueError, MalformedManifest) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    print(f"scenes: {counts['scenes']}")
    print(f"requests: {counts['requests']}")
    for rtype in rq.REQUEST_TYPES:
        print(f"  {rtype:<14} {counts['types'].get(rtype, 0)}")
    return EXIT_OK


def _build_request(args) -> rq.Request:
    endpoints = parse_points(args.endpoints) if args.endpoints else None
    return rq.Request(
        request_id=f"cli-{args.scene}-{args.request_type}",
        scene_id=args.scene,
        rtype=args.request_type,
        text=args.request_text or f"({args.request_type})",
        target_category=args.category,
        endpoints=endpoints,
    )


def cmd_run(args) -> int:
    try:
        config = load_config(args.config)
        if args.backend is not None:
            config.backend = args.backend
            config.validate()
        manifest = Path(args.dataset) / "scenes" / args.scene / "manifest.json"
        scene = load_scene(manifest)
    except AdiError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO

    backend = make_backend(config)
    if args.request_text and not args.request_type:
        # Free-text mode: the plan comes from the LLM.
        if backend is None:
            print(
                "error: free-text requests need an LLM backend "
                "(--backend scripted|remote)",
                file=sys.stderr,
            )
            return EXIT_NEEDS_BACKEND
        request = rq.Request(
            request_id=f"cli-{args.scene}-freetext",
            scene_id=args.scene,
            rtype=rq.SEGMENT,  # placeholder type; the plan decides the work
            text=args.request_text,
        )
        plan = generate_plan(request, scene, backend, config.planner)
    elif args.request_type:
        try:
            request = _build_request(args)
        except (AdiError, ValueError) as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_BAD_PARAMS
        plan = rule_based_plan(request)
    else:
        print("error: give --request-type or --request-text", file=sys.stderr)
        return EXIT_BAD_PARAMS

    if plan is None:
        print("planner produced no valid plan")
        return EXIT_OK

    print("plan:")
    for action in plan.actions:
        print(f"  {action.tool}({', '.join(action.inputs)}) -> {', '.join(action.outputs)}")
    trace = execute_plan(plan, scene, request, backend, config.tools)
    print("records:")
    for record in trace.records:
        print(f"  {record.tool}: {record.summary}")
    if trace.status != "completed":
        print(f"failed at action {trace.failed_at}: {trace.error}")
    print(f"final answer: {trace.final_answer}")
    out_dir = Path(args.out) if args.out else Path(args.dataset) / "traces"
    path = write_trace(trace, request, plan, out_dir)
    print(f"trace written to {path}")
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        config = load_config(args.config)
        if args.backend is not None:
            config.backend = args.backend
            config.validate()
        load_dataset(args.dataset)  # fail fast on an unreadable dataset
    except AdiError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO

    report = run_benchmark(
        args.dataset,
        config,
        traces_dir=args.traces,
        jobs=max(1, args.jobs),
    )
    report.write(args.out)
    if not args.json_only:
        print(format_summary(report))
        print()
    print(f"report written to {args.out}")
    if report.harness_errors:
        print(f"error: {report.harness_errors} request(s) crashed the harness", file=sys.stderr)
        return EXIT_BAD_PARAMS
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "synth":
        return cmd_synth(args)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "eval":
        return cmd_eval(args)
    return EXIT_BAD_PARAMS


if __name__ == "__main__":
    sys.exit(main())
