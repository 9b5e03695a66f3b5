"""
Output Formatting Utilities for BodySlice

This module turns command results into the artifacts a run emits:
- JSON documents with every float at 12 significant digits
- CSV blocks (csv module, "\\n" line endings)
- SVG plots of planar bodies with their ellipsoids (matplotlib, Agg backend)

All three are byte-deterministic for equal inputs: no timestamps, fixed SVG
id salt, stable key order.
"""

import csv
import io
import json
import math
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np

from models.geometry_models import Ellipsoid, SymBody
from models.run_models import CommandResult, OutputFormat, ResultTable

SIGNIFICANT_DIGITS = 12
SVG_HASH_SALT = "bodyslice"
ELLIPSE_POINTS = 361


# ============================================================================
# Numbers
# ============================================================================

def format_number(value: float) -> str:
    """Render a float with 12 significant digits (no trailing noise)."""
    return f"{float(value):.{SIGNIFICANT_DIGITS}g}"


def round_significant(value: Any) -> Any:
    """
    Recursively round floats (and numpy scalars/arrays) to 12 significant digits.

    Non-finite floats become None so the JSON stays standard.
    """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return None
        return float(format_number(value))
    if isinstance(value, np.ndarray):
        return round_significant(value.tolist())
    if isinstance(value, dict):
        return {str(k): round_significant(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_significant(v) for v in value]
    return value


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_number(value)
    return str(value)


# ============================================================================
# JSON and CSV
# ============================================================================

def format_json(payload: Any) -> str:
    return json.dumps(round_significant(payload), indent=2) + "\n"


def format_csv(tables: Sequence[ResultTable]) -> str:
    """Write the CSV blocks one after another, separated by a blank line."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for i, table in enumerate(tables):
        if i:
            buffer.write("\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def matrix_table(name: str, matrix: Iterable[Iterable[float]]) -> ResultTable:
    """CSV block of a matrix: one row per matrix row, columns name_0, name_1, ..."""
    rows = [list(row) for row in matrix]
    width = len(rows[0]) if rows else 0
    return ResultTable(header=[f"{name}_{j}" for j in range(width)], rows=rows)


# ============================================================================
# SVG
# ============================================================================

def _outline(body: SymBody) -> np.ndarray:
    """Closed boundary polygon of a planar body, ordered by angle."""
    from geometry.body import to_h_rep, vertices

    V = vertices(to_h_rep(body))
    points = np.vstack([V, -V])
    order = np.argsort(np.arctan2(points[:, 1], points[:, 0]), kind="stable")
    points = points[order]
    return np.vstack([points, points[:1]])


def _ellipse_curve(ellipsoid: Ellipsoid) -> np.ndarray:
    theta = np.linspace(0.0, 2.0 * np.pi, ELLIPSE_POINTS)
    circle = np.column_stack([np.cos(theta), np.sin(theta)])
    return circle @ ellipsoid.sqrt_factor().T


def render_svg(body: SymBody, ellipsoids: Sequence[Ellipsoid], title: Optional[str] = None) -> str:
    """
    Plot a planar body outline with ellipsoid outlines as SVG text.

    Raises:
        ValueError: if the body is not planar
    """
    if body.n != 2:
        raise ValueError(f"svg output needs a planar body, got n={body.n}")

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(5, 5))
        try:
            outline = _outline(body)
            ax.plot(outline[:, 0], outline[:, 1], color="black", linewidth=1.2, label="body")
            for i, ellipsoid in enumerate(ellipsoids):
                curve = _ellipse_curve(ellipsoid)
                ax.plot(curve[:, 0], curve[:, 1], linewidth=1.0, linestyle="--", label=f"ellipsoid {i}")
            ax.set_aspect("equal")
            ax.axhline(0.0, color="0.85", linewidth=0.5)
            ax.axvline(0.0, color="0.85", linewidth=0.5)
            if title:
                ax.set_title(title)
            ax.legend(loc="upper right", fontsize="small")

            buffer = io.StringIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
            return buffer.getvalue()
        finally:
            plt.close(fig)


# ============================================================================
# Dispatch
# ============================================================================

def format_result(result: CommandResult, output_format: OutputFormat, title: Optional[str] = None) -> str:
    """
    Render a command result in the requested format.

    Raises:
        ValueError: if the result has nothing to render in that format
    """
    output_format = OutputFormat(output_format)
    if output_format is OutputFormat.JSON:
        return format_json(result.payload)
    if output_format is OutputFormat.CSV:
        if not result.tables:
            raise ValueError("this command has no CSV output")
        return format_csv(result.tables)
    if result.figure is None:
        raise ValueError("this command has no SVG output")
    body, ellipsoids = result.figure
    return render_svg(body, ellipsoids, title)


def format_errors(errors: List[str]) -> str:
    """One error per line, prefixed like the console log lines."""
    return "".join(f"[ERROR] {error}\n" for error in errors)
