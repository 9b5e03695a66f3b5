"""
Environment Variable Loader Utility

This module loads the project .env file (repository root) so that solver
defaults and tracing switches can be set without command-line flags.
"""

from pathlib import Path
from typing import Optional


_loaded_path: Optional[Path] = None
_attempted = False


def load_project_env(override: bool = False) -> Optional[Path]:
    """
    Load environment variables from the .env file at the repository root.

    This file is at: <root>/src/utils/env_loader.py, so .env is two levels
    above the utils package. Existing environment variables win unless
    override is set. Later calls without override return the first result.

    Returns:
        Path to the .env file if found and loaded, None otherwise

    Example:
        >>> env_path = load_project_env()
        >>> if env_path:
        ...     print(f"Loaded .env from {env_path}")
    """
    global _loaded_path, _attempted

    # one read per process
    if _attempted and not override:
        return _loaded_path
    _attempted = True

    try:
        from dotenv import load_dotenv
    except ImportError:
        # python-dotenv not installed
        return None

    env_path = Path(__file__).parent.parent.parent / ".env"

    if env_path.exists():
        load_dotenv(env_path, override=override)
        _loaded_path = env_path
        return env_path

    return None


def loaded_env_path() -> Optional[Path]:
    """Path of the last .env file loaded, if any."""
    return _loaded_path
