"""
Main Entry Point for BodySlice

This module provides the command-line entry point. It handles:
1. Argument parsing (flags default to the solver settings / .env)
2. Conversion to a RunConfig
3. Workflow execution
4. Artifact output and exit code

Exit codes: 0 success, 1 input error, 2 solver failure.
"""

import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional, Tuple

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

# Load environment variables from .env file before importing other modules
from utils.env_loader import load_project_env
load_project_env()

from core import create_workflow, RunState, EXIT_INPUT_ERROR, EXIT_SOLVER_FAILURE
from models import Command, RunConfig, default_format
from utils.formatters import format_errors, format_json
from utils.solver_config import get_config_warnings, get_setting, SettingKey
from utils.tracing import (
    clear_trace_metadata,
    set_trace_metadata,
    get_opik_config,
    trace_print,
)


def run(config: RunConfig) -> Tuple[int, RunState]:
    """
    Execute one run through the workflow.

    Args:
        config: Resolved run configuration

    Returns:
        (exit_code, final_state); final_state["output"] holds the artifact on
        success
    """
    clear_trace_metadata()
    set_trace_metadata("request_id", str(time.time()))

    enabled, use_local_opik, opik_url = get_opik_config()
    workflow, tracer = create_workflow(
        enable_tracing=enabled,
        use_local_opik=use_local_opik,
        opik_url=opik_url
    )

    initial_state: RunState = {"config": config, "errors": [], "exit_code": 0}

    run_config = {"configurable": {"thread_id": f"run_{config.command.value}_{config.seed}"}}
    if tracer:
        run_config["callbacks"] = [tracer]
        trace_print("[TRACE] Opik tracer attached to workflow execution")

    start = time.perf_counter()
    result_state = workflow.invoke(initial_state, config=run_config)
    elapsed = time.perf_counter() - start
    set_trace_metadata("total_execution_time", elapsed)
    trace_print(f"[TRACE] Total execution time: {elapsed:.3f}s")

    exit_code = int(result_state.get("exit_code", 0))
    if result_state.get("errors") and exit_code == 0:
        exit_code = EXIT_SOLVER_FAILURE
    return exit_code, result_state


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bodyslice",
        description="John/Loewner slices of the GL(n) action on symmetric convex bodies.",
    )
    parser.add_argument("command", choices=[c.value for c in Command], help="operation to run")
    parser.add_argument("inputs", nargs="*", help="body JSON files")
    parser.add_argument("--eps", type=float, default=get_setting(SettingKey.EPS), help="MVEE tolerance in (0, 1e-2]")
    parser.add_argument("--seed", type=int, default=get_setting(SettingKey.SEED), help="random seed")
    parser.add_argument("--samples", type=int, default=get_setting(SettingKey.SAMPLES), help="direction samples")
    parser.add_argument(
        "--workers", type=int, default=get_setting(SettingKey.WORKERS),
        help="worker count (0 = machine parallelism, 1 = serial)",
    )
    parser.add_argument("--out", default=None, help="output file (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json", "svg"], default=None, help="output format")
    parser.add_argument("--n", type=int, default=2, help="dimension for gen/net corpora")
    parser.add_argument("--count", type=int, default=10, help="corpus size for gen/net")
    parser.add_argument("--net-eps", type=float, default=0.25, help="covering radius for net")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """
    Raises:
        ValueError: if a flag value violates the RunConfig invariants
    """
    command = Command(args.command)
    return RunConfig(
        command=command,
        inputs=list(args.inputs),
        eps=args.eps,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
        out=args.out,
        format=args.format or default_format(command),
        n=args.n,
        count=args.count,
        net_eps=args.net_eps,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    for warning in get_config_warnings():
        print(f"[WARNING] {warning}", file=sys.stderr)

    try:
        config = config_from_args(args)
    except ValueError as e:
        sys.stderr.write(format_errors([str(e)]))
        return EXIT_INPUT_ERROR

    exit_code, state = run(config)

    if exit_code != 0:
        sys.stderr.write(format_errors(state.get("errors", [])))
        if state.get("solver_report") is not None:
            sys.stderr.write(format_json(state["solver_report"]))
        return exit_code

    output = state.get("output", "")
    if config.out:
        Path(config.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
