"""
LangGraph State Definition for BodySlice runs

This module defines the state that flows between nodes in the run workflow.
The state is a TypedDict that tracks a run from configuration to artifact.

State Flow:
1. Run configuration (command, inputs, solver settings)
2. Parsed bodies (after validation)
3. Command result (JSON payload, CSV tables, SVG figure)
4. Rendered output text
5. Exit code and error tracking
"""

from typing import TypedDict, Optional, List, Dict, Any, Annotated

from models.geometry_models import SymBody
from models.run_models import CommandResult, RunConfig


EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_SOLVER_FAILURE = 2


def merge_error_lists(left: List[str] | None, right: List[str] | None) -> List[str]:
    """
    Reducer for merging error lists across nodes.

    Ensures:
        - Existing errors are preserved
        - New errors are appended in order of arrival
        - Duplicate prefixes (from nodes returning full error lists) are avoided
    """
    left = list(left or [])
    right = list(right or [])

    if not left:
        return right
    if not right:
        return left

    prefix_len = 0
    max_prefix = min(len(left), len(right))
    while prefix_len < max_prefix and left[prefix_len] == right[prefix_len]:
        prefix_len += 1

    if prefix_len == len(left):
        # Right extends left (sequential append)
        return right
    if prefix_len == len(right):
        # Left already contains everything in right
        return left

    return left + right[prefix_len:]


class RunState(TypedDict, total=False):
    """
    State definition for the BodySlice run workflow.

    Required Fields (set before the workflow starts):
    - config: resolved RunConfig

    Processing Fields (set by nodes):
    - bodies: bodies parsed from the input files (or generated)
    - result: CommandResult of the command
    - output: rendered artifact text (JSON, CSV or SVG)

    Outcome Fields:
    - exit_code: 0 success, 1 input error, 2 solver failure
    - solver_report: MveeReport dict of a failed solve
    - errors: error messages; the workflow stops at the first node adding any
    """

    config: RunConfig
    """Resolved run configuration. Required field."""

    bodies: List[SymBody]
    """Validated bodies, in input-file order."""

    result: Optional[CommandResult]
    """Command output before formatting."""

    output: Optional[str]
    """Formatted artifact text."""

    exit_code: int
    """Process exit code."""

    solver_report: Optional[Dict[str, Any]]
    """Partial MVEE report when a solve did not converge."""

    errors: Annotated[List[str], merge_error_lists]
    """Error messages encountered during the run. Empty if none."""
