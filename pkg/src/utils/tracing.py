"""
Tracing and Observability Utilities for BodySlice

This module provides timing and optional Opik tracing for CLI runs:
- [TRACE] timing lines for solver entry points (MVEE, distances, audits)
- per-run trace metadata (command, seed, iterations, timings)
- an Opik tracer attached to the LangGraph run workflow when enabled

All console output goes to stderr so stdout artifacts stay byte-identical
between runs, and only when BODYSLICE_TRACE is on.
"""

import os
import sys
import time
from functools import wraps
from typing import Any, Callable, Dict, Optional, Tuple

from .solver_config import get_setting, SettingKey, trace_enabled


# Global tracer instance (initialized in workflow.py)
_tracer: Optional[Any] = None
_trace_metadata: Dict[str, Any] = {}


def trace_print(message: str) -> None:
    """Print a tagged diagnostic line on stderr when tracing output is on."""
    if trace_enabled():
        print(message, file=sys.stderr)


def get_opik_config() -> Tuple[bool, bool, Optional[str]]:
    """
    Get Opik configuration from environment variables.

    Environment variables:
    - BODYSLICE_TRACING: "true" to attach an Opik tracer (default: off)
    - OPIK_USE_LOCAL: "true" for a local Opik server, "false" for cloud
    - OPIK_URL: URL of the local server (default: http://localhost:5173/api/)

    Returns:
        Tuple of (enabled, use_local, url)
    """
    enabled = bool(get_setting(SettingKey.TRACING))

    use_local_str = os.getenv("OPIK_USE_LOCAL", "false").strip().lower()
    use_local = use_local_str in ("true", "1", "yes", "on")

    url = None
    if use_local:
        url = os.getenv("OPIK_URL", "").strip() or "http://localhost:5173/api/"

    return enabled, use_local, url


def _normalize_local_opik_url(url: Optional[str]) -> str:
    """
    Ensure the provided URL points to the Opik REST API root.

    Users commonly provide `http://localhost:5173`; the SDK needs the `/api/`
    suffix and a trailing slash.
    """
    default_base = "http://localhost:5173/api/"
    if not url or not url.strip():
        return default_base

    normalized = url.strip().rstrip("/")
    if not normalized.endswith("/api"):
        normalized += "/api"
    return normalized + "/"


def initialize_tracer(
    graph: Any,
    project_name: str = "bodyslice",
    use_local: bool = True,
    url: Optional[str] = None,
) -> Any:
    """
    Initialize an Opik tracer for the run workflow.

    Args:
        graph: The compiled workflow graph (compiled.get_graph(xray=True))
        project_name: Project name on the Opik dashboard
        use_local: Use a local Opik server instead of the cloud
        url: Local server URL, only used when use_local is True

    Returns:
        OpikTracer instance, or None when Opik is unavailable
    """
    try:
        if use_local:
            normalized_url = _normalize_local_opik_url(url)
            os.environ["OPIK_URL_OVERRIDE"] = normalized_url
            trace_print(f"[TRACE] Opik configured for LOCAL mode: api_root={normalized_url}")

        import opik
        from opik.integrations.langchain import OpikTracer

        if not use_local:
            os.environ.pop("OPIK_URL_OVERRIDE", None)
            try:
                opik.configure(use_local=False, automatic_approvals=True)
                trace_print("[TRACE] Opik configured for CLOUD mode")
            except Exception as e:
                trace_print(f"[TRACE] Warning: Could not configure Opik cloud mode: {e}")

        return OpikTracer(graph=graph, project_name=project_name)

    except ImportError:
        trace_print("[WARNING] Opik not installed. Tracing will be disabled.")
        return None
    except Exception as e:
        trace_print(f"[WARNING] Failed to initialize Opik tracer: {e}")
        trace_print("[WARNING] Tracing will be disabled.")
        return None


def set_tracer(tracer: Any) -> None:
    """Set the global tracer instance."""
    global _tracer
    _tracer = tracer


def get_tracer() -> Optional[Any]:
    """Get the global tracer instance."""
    return _tracer


def set_trace_metadata(key: str, value: Any) -> None:
    """Set metadata for the current trace."""
    _trace_metadata[key] = value


def get_trace_metadata() -> Dict[str, Any]:
    """Get all trace metadata."""
    return _trace_metadata.copy()


def clear_trace_metadata() -> None:
    """Clear trace metadata (call at start of a new run)."""
    _trace_metadata.clear()


class TimingContext:
    """Context manager for timing operations and tracking metrics."""

    def __init__(self, operation_name: str, metadata: Optional[Dict[str, Any]] = None):
        self.operation_name = operation_name
        self.metadata = metadata or {}
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None
        self.duration: Optional[float] = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.end_time = time.perf_counter()
        self.duration = self.end_time - self.start_time

        trace_print(f"[TRACE] {self.operation_name}: {self.duration:.3f}s")
        if self.metadata:
            trace_print(f"[TRACE] Metadata: {self.metadata}")

        return False

    def get_metrics(self) -> Dict[str, Any]:
        """Get timing metrics."""
        metrics = {
            "operation": self.operation_name,
            "duration": self.duration,
        }
        if self.metadata:
            metrics["metadata"] = self.metadata
        return metrics


def trace_operation(operation_name: str):
    """
    Decorator to time an operation.

    The duration is accumulated in trace metadata under
    "<operation_name>_seconds" and "<operation_name>_calls".

    Usage:
        @trace_operation("mvee")
        def mvee_centered(...):
            ...
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            op_metadata: Dict[str, Any] = {"function": func.__name__}
            timer = TimingContext(operation_name, op_metadata)
            try:
                with timer:
                    return func(*args, **kwargs)
            except Exception as e:
                op_metadata["error"] = str(e)
                raise
            finally:
                key = f"{operation_name}_seconds"
                _trace_metadata[key] = _trace_metadata.get(key, 0.0) + (timer.duration or 0.0)
                calls = f"{operation_name}_calls"
                _trace_metadata[calls] = _trace_metadata.get(calls, 0) + 1
        return wrapper
    return decorator
