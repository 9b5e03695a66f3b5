"""
Unit tests for the LangGraph run state definition.

Tests cover:
- State structure and field annotations
- Exit code constants
- The error-list reducer
"""

import pytest
import sys
from pathlib import Path

# Add src to path so we can import
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core import RunState, EXIT_OK, EXIT_INPUT_ERROR, EXIT_SOLVER_FAILURE
from core.state import merge_error_lists
from models import Command, RunConfig


# ============================================================================
# State Structure Tests
# ============================================================================

class TestStateStructure:
    """Test the structure of RunState"""

    def test_state_is_typed_dict(self):
        """Test that RunState is a TypedDict"""
        assert hasattr(RunState, "__annotations__")
        assert isinstance(RunState.__annotations__, dict)

    def test_fields_exist(self):
        """Test that every run field is declared"""
        annotations = RunState.__annotations__
        for name in ("config", "bodies", "result", "output", "exit_code", "solver_report", "errors"):
            assert name in annotations

    def test_all_fields_optional(self):
        """Test that the state can be built incrementally"""
        assert RunState.__total__ is False

    def test_minimal_state(self):
        """Test a state holding only the configuration"""
        state: RunState = {"config": RunConfig(command=Command.GEN), "errors": []}
        assert state["config"].command is Command.GEN
        assert state["errors"] == []


class TestExitCodes:
    """Test the exit code constants"""

    def test_values(self):
        assert (EXIT_OK, EXIT_INPUT_ERROR, EXIT_SOLVER_FAILURE) == (0, 1, 2)


# ============================================================================
# Error Reducer Tests
# ============================================================================

class TestMergeErrorLists:
    """Test the errors channel reducer"""

    def test_both_empty(self):
        assert merge_error_lists([], []) == []

    def test_none_inputs(self):
        assert merge_error_lists(None, None) == []
        assert merge_error_lists(None, ["a"]) == ["a"]
        assert merge_error_lists(["a"], None) == ["a"]

    def test_right_extends_left(self):
        """Test that a node returning the full list does not duplicate"""
        assert merge_error_lists(["a"], ["a", "b"]) == ["a", "b"]

    def test_left_contains_right(self):
        assert merge_error_lists(["a", "b"], ["a"]) == ["a", "b"]

    def test_identical_lists(self):
        assert merge_error_lists(["a", "b"], ["a", "b"]) == ["a", "b"]

    def test_disjoint_lists_append(self):
        assert merge_error_lists(["a"], ["b"]) == ["a", "b"]

    def test_partial_overlap(self):
        """Test that the shared prefix is kept once"""
        assert merge_error_lists(["a", "b"], ["a", "c"]) == ["a", "b", "c"]

    def test_inputs_not_mutated(self):
        left, right = ["a"], ["b"]
        merge_error_lists(left, right)
        assert left == ["a"]
        assert right == ["b"]
