"""
LangGraph Workflow Definition for BodySlice runs

This module defines the graph that executes one CLI run. The workflow
consists of 4 nodes:

1. validate_input - Checks the command's input count and output path
2. load_bodies - Parses and validates the body files
3. compute - Runs the command handler
4. format_output - Renders the result

After each of the first three nodes the run stops if errors were recorded.

Observability:
- Optional Opik tracing (BODYSLICE_TRACING) attached to the graph run
- [TRACE]/[DEBUG] console lines on stderr when BODYSLICE_TRACE is set
"""

from typing import Any, Tuple, Optional
from langgraph.graph import StateGraph, START, END
from core.state import RunState
from core.nodes import (
    validate_input_node,
    load_bodies_node,
    compute_node,
    format_output_node,
)
from utils.tracing import initialize_tracer, set_tracer, trace_print


def should_continue_workflow(state: RunState) -> str:
    """
    Conditional routing function to check if the run should continue.

    Returns:
        "stop" if errors exist (route to END)
        "continue" if no errors (route to next node)
    """
    errors = state.get("errors", [])
    if errors:
        trace_print(f"[DEBUG] Workflow stopping early due to {len(errors)} error(s)")
        return "stop"
    return "continue"


def create_workflow(
    enable_tracing: bool = False,
    use_local_opik: bool = True,
    opik_url: Optional[str] = None
) -> Tuple[Any, Any]:
    """
    Create and compile the run workflow graph.

    Args:
        enable_tracing: Whether to attach an Opik tracer (default: False)
        use_local_opik: Whether to use a local Opik server
        opik_url: URL of the local Opik instance (optional)

    Returns:
        Tuple of (compiled_workflow, tracer); tracer is None when tracing is
        disabled or unavailable

    Workflow Flow:
        START → validate_input → [check errors] → load_bodies → [check errors] →
        compute → [check errors] → format_output → END
    """
    workflow = StateGraph(RunState)

    workflow.add_node("validate_input", validate_input_node)
    workflow.add_node("load_bodies", load_bodies_node)
    workflow.add_node("compute", compute_node)
    workflow.add_node("format_output", format_output_node)

    workflow.add_edge(START, "validate_input")
    for node, next_node in (
        ("validate_input", "load_bodies"),
        ("load_bodies", "compute"),
        ("compute", "format_output"),
    ):
        workflow.add_conditional_edges(
            node,
            should_continue_workflow,
            {"stop": END, "continue": next_node},
        )
    workflow.add_edge("format_output", END)

    compiled_workflow = workflow.compile()

    # Must be done after compiling so the graph can be handed to the tracer
    tracer = None
    if enable_tracing:
        try:
            tracer = initialize_tracer(
                graph=compiled_workflow.get_graph(xray=True),
                project_name="bodyslice",
                use_local=use_local_opik,
                url=opik_url
            )
            if tracer:
                set_tracer(tracer)
                trace_print("[TRACE] Opik tracer initialized successfully")
                trace_print(f"[TRACE] Opik mode: {'Local' if use_local_opik else 'Cloud'}")
            else:
                trace_print("[TRACE] Opik tracer initialization failed (tracing disabled)")
        except Exception as e:
            trace_print(f"[TRACE] Failed to initialize Opik tracer: {e}")
            trace_print("[TRACE] Continuing without tracing")

    return compiled_workflow, tracer
