"""Utility functions and helpers"""

from .validators import (
    validate_body_dict,
    parse_bodies,
    load_body_file,
    validate_input_count,
    validate_same_dimension,
    validate_output_dimension,
    validate_run_inputs,
)
from .formatters import (
    format_number,
    round_significant,
    format_json,
    format_csv,
    matrix_table,
    render_svg,
    format_result,
    format_errors,
)
from .solver_config import get_setting, get_config_warnings, SettingKey
from .parallel import parallel_map, resolve_workers

__all__ = [
    "validate_body_dict",
    "parse_bodies",
    "load_body_file",
    "validate_input_count",
    "validate_same_dimension",
    "validate_output_dimension",
    "validate_run_inputs",
    "format_number",
    "round_significant",
    "format_json",
    "format_csv",
    "matrix_table",
    "render_svg",
    "format_result",
    "format_errors",
    "get_setting",
    "get_config_warnings",
    "SettingKey",
    "parallel_map",
    "resolve_workers",
]
