"""
LangGraph Node Functions for BodySlice runs

Each node receives the current state, performs one step of the run and
returns the updated state:

1. validate_input_node - Checks the command's input count and output path
2. load_bodies_node - Parses and validates the body files
3. compute_node - Runs the command handler, mapping errors to exit codes
4. format_output_node - Renders the result as JSON, CSV or SVG
"""

from core.commands import COMMAND_HANDLERS
from core.state import EXIT_INPUT_ERROR, EXIT_OK, EXIT_SOLVER_FAILURE, RunState
from models.errors import (
    BodySliceError,
    DimensionMismatch,
    InvalidBodyError,
    NoConvergence,
    NotFullDimensional,
)
from utils.tracing import set_trace_metadata, trace_print, TimingContext

# Errors caused by what the user passed in, not by the solver.
INPUT_ERRORS = (InvalidBodyError, DimensionMismatch, NotFullDimensional)


def _fail(state: RunState, message: str, exit_code: int, node: str) -> RunState:
    state["errors"].append(message)
    state["exit_code"] = exit_code
    trace_print(f"[DEBUG] {node}: {message}")
    return state


def validate_input_node(state: RunState) -> RunState:
    """
    Node 1: Validate the run configuration before reading any file.

    Returns:
        Updated state; errors (exit code 1) if the input count or output
        path is invalid
    """
    trace_print("[DEBUG] Node 1: validate_input_node - Starting")
    from utils.validators import validate_run_inputs

    if "errors" not in state:
        state["errors"] = []

    config = state["config"]
    set_trace_metadata("command", config.command.value)
    set_trace_metadata("seed", config.seed)

    for error in validate_run_inputs(config):
        _fail(state, error, EXIT_INPUT_ERROR, "Node 1")

    trace_print("[DEBUG] Node 1: validate_input_node - Completed")
    return state


def load_bodies_node(state: RunState) -> RunState:
    """
    Node 2: Parse every input file into bodies.

    Returns:
        Updated state with bodies; errors (exit code 1) for malformed JSON,
        schema violations, degenerate bodies or mixed dimensions
    """
    trace_print("[DEBUG] Node 2: load_bodies_node - Starting")
    from utils.validators import load_body_file, validate_output_dimension, validate_same_dimension

    if "errors" not in state:
        state["errors"] = []

    config = state["config"]
    bodies = []
    for path in config.inputs:
        loaded, errors = load_body_file(path)
        for error in errors:
            _fail(state, error, EXIT_INPUT_ERROR, "Node 2")
        bodies.extend(loaded)

    if not state["errors"]:
        for error in (validate_same_dimension(bodies), validate_output_dimension(config, bodies)):
            if error:
                _fail(state, error, EXIT_INPUT_ERROR, "Node 2")

    state["bodies"] = bodies
    trace_print(f"[DEBUG] Node 2: loaded {len(bodies)} body(ies)")
    trace_print("[DEBUG] Node 2: load_bodies_node - Completed")
    return state


def compute_node(state: RunState) -> RunState:
    """
    Node 3: Run the command.

    Returns:
        Updated state with result; on NoConvergence the partial MVEE report
        is stored and the exit code is 2
    """
    trace_print("[DEBUG] Node 3: compute_node - Starting")

    if "errors" not in state:
        state["errors"] = []

    config = state["config"]
    handler = COMMAND_HANDLERS[config.command]

    try:
        with TimingContext(f"command {config.command.value}"):
            state["result"] = handler(config, state.get("bodies", []))
    except NoConvergence as e:
        state["solver_report"] = e.report.to_dict() if e.report is not None else None
        return _fail(state, f"Solver did not converge: {e}", EXIT_SOLVER_FAILURE, "Node 3")
    except INPUT_ERRORS as e:
        return _fail(state, f"Invalid input: {e}", EXIT_INPUT_ERROR, "Node 3")
    except (BodySliceError, ValueError) as e:
        return _fail(state, f"Computation failed: {e}", EXIT_SOLVER_FAILURE, "Node 3")

    trace_print("[DEBUG] Node 3: compute_node - Completed")
    return state


def format_output_node(state: RunState) -> RunState:
    """
    Node 4: Render the command result in the configured format.

    Returns:
        Updated state with output text and exit code 0
    """
    trace_print("[DEBUG] Node 4: format_output_node - Starting")
    from utils.formatters import format_result

    if "errors" not in state:
        state["errors"] = []

    config = state["config"]
    result = state.get("result")
    if result is None:
        return _fail(state, "Format output: no result to format", EXIT_SOLVER_FAILURE, "Node 4")

    try:
        state["output"] = format_result(result, config.format, title=config.command.value)
    except ValueError as e:
        return _fail(state, f"Format output failed: {e}", EXIT_INPUT_ERROR, "Node 4")

    state["exit_code"] = EXIT_OK
    trace_print(f"[DEBUG] Node 4: formatted {len(state['output'])} characters as {config.format.value}")
    trace_print("[DEBUG] Node 4: format_output_node - Completed")
    return state
