"""
Input Validation Utilities for BodySlice

This module validates everything a run reads before any solver starts:
- Body JSON documents ({"n", "rep", "gens"}), single or as {"bodies": [...]}
- Input file counts per command
- Dimension agreement between bodies

Validators return an error message (or a list of them) and never raise, so
the run workflow can collect them into its errors list.
"""

import json
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from models.errors import InvalidBodyError
from models.geometry_models import SymBody, VALID_REPS
from models.run_models import Command, COMMAND_ARITY, OutputFormat, RunConfig


# ============================================================================
# Configuration Constants
# ============================================================================

REQUIRED_BODY_KEYS = ("n", "rep", "gens")
SVG_DIMENSION = 2


# ============================================================================
# Body documents
# ============================================================================

def validate_body_dict(data: Any, source: str = "body") -> Optional[str]:
    """
    Validate one body document against the body JSON schema.

    Args:
        data: Parsed JSON value
        source: Label used in error messages

    Returns:
        Error message if validation fails, None otherwise
    """
    if not isinstance(data, dict):
        return f"{source}: expected a JSON object, got {type(data).__name__}"

    missing = [key for key in REQUIRED_BODY_KEYS if key not in data]
    if missing:
        return f"{source}: missing required field(s) {missing}"

    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        return f"{source}: n must be a positive integer, got {n!r}"

    if data["rep"] not in VALID_REPS:
        return f"{source}: rep must be one of {list(VALID_REPS)}, got {data['rep']!r}"

    gens = data["gens"]
    if not isinstance(gens, list) or not gens:
        return f"{source}: gens must be a non-empty list of rows"
    for i, row in enumerate(gens):
        if not isinstance(row, list) or len(row) != n:
            return f"{source}: gens[{i}] must be a list of {n} numbers"
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in row):
            return f"{source}: gens[{i}] contains a non-numeric entry"

    matrix = np.array(gens, dtype=float)
    if not np.all(np.isfinite(matrix)):
        return f"{source}: gens contains non-finite values"
    zero_rows = np.flatnonzero(np.all(matrix == 0.0, axis=1))
    if zero_rows.size:
        return f"{source}: gens[{int(zero_rows[0])}] is the zero vector"
    if len(gens) < n or np.linalg.matrix_rank(matrix) < n:
        return f"{source}: gens do not span R^{n} (rank-deficient body)"

    return None


def parse_bodies(text: str, source: str = "input") -> Tuple[List[SymBody], List[str]]:
    """
    Parse a body file: one body object, a list of them, or {"bodies": [...]}.

    Returns:
        (bodies, errors); malformed JSON reports line and column
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        return [], [f"{source}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}"]

    if isinstance(data, dict) and "bodies" in data:
        data = data["bodies"]
    documents = data if isinstance(data, list) else [data]
    if not documents:
        return [], [f"{source}: no bodies found"]

    bodies: List[SymBody] = []
    errors: List[str] = []
    for i, doc in enumerate(documents):
        label = source if len(documents) == 1 else f"{source}[{i}]"
        error = validate_body_dict(doc, label)
        if error:
            errors.append(error)
            continue
        try:
            bodies.append(SymBody(doc["n"], doc["rep"], doc["gens"]))
        except InvalidBodyError as e:
            errors.append(f"{label}: {e}")
    return bodies, errors


def load_body_file(path: str) -> Tuple[List[SymBody], List[str]]:
    """Read and parse a body file; unreadable files are reported, not raised."""
    file_path = Path(path)
    if not file_path.is_file():
        return [], [f"{path}: file not found"]
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as e:
        return [], [f"{path}: cannot read file ({e})"]
    return parse_bodies(text, path)


# ============================================================================
# Run inputs
# ============================================================================

def validate_input_count(command: Command, inputs: Sequence[str]) -> Optional[str]:
    """
    Validate the number of body files for a command.

    Returns:
        Error message if validation fails, None otherwise
    """
    arity = COMMAND_ARITY[Command(command)]
    count = len(inputs)
    if arity is None:
        if command is Command.SLICE_AUDIT and count == 0:
            return f"'{command.value}' needs at least one body file"
        return None
    if count != arity:
        return f"'{command.value}' takes {arity} body file(s), got {count}"
    return None


def validate_same_dimension(bodies: Sequence[SymBody]) -> Optional[str]:
    """All bodies of one run must live in the same R^n."""
    dims = sorted({body.n for body in bodies})
    if len(dims) > 1:
        return f"bodies have different dimensions {dims}"
    return None


def validate_output_dimension(config: RunConfig, bodies: Sequence[SymBody]) -> Optional[str]:
    """SVG plots are drawn for planar bodies only."""
    if config.format is OutputFormat.SVG and any(body.n != SVG_DIMENSION for body in bodies):
        return "svg output needs bodies in dimension 2"
    return None


def validate_run_inputs(config: RunConfig) -> List[str]:
    """
    Validate a run before any file is opened.

    Args:
        config: Resolved run configuration

    Returns:
        List of error messages (empty if valid)
    """
    errors = []

    count_error = validate_input_count(config.command, config.inputs)
    if count_error:
        errors.append(count_error)

    if config.out is not None:
        parent = Path(config.out).parent
        if not parent.exists():
            errors.append(f"output directory does not exist: {parent}")

    return errors
