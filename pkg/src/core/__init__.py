"""Run workflow"""

from .state import RunState, EXIT_OK, EXIT_INPUT_ERROR, EXIT_SOLVER_FAILURE
from .workflow import create_workflow
from .nodes import (
    validate_input_node,
    load_bodies_node,
    compute_node,
    format_output_node,
)

__all__ = [
    "RunState",
    "EXIT_OK",
    "EXIT_INPUT_ERROR",
    "EXIT_SOLVER_FAILURE",
    "create_workflow",
    "validate_input_node",
    "load_bodies_node",
    "compute_node",
    "format_output_node",
]
