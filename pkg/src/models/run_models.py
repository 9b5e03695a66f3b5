"""
Run configuration for the BodySlice command line.

RunConfig is built by main.py from argparse flags (which in turn default to
values from utils.solver_config) and is the input of the run workflow.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple


class Command(str, Enum):
    """Subcommands of the CLI."""
    JOHN = "john"
    LOWNER = "lowner"
    JOHN_POSITION = "john-position"
    SLICE_MAP = "slice-map"
    HAUSDORFF = "hausdorff"
    BM_DIST = "bm-dist"
    QUOTIENT_DIST = "quotient-dist"
    SLICE_AUDIT = "slice-audit"
    DEMO_REMARK = "demo-remark"
    NET = "net"
    GEN = "gen"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


# Number of body files each command reads; None means "one or more".
COMMAND_ARITY = {
    Command.JOHN: 1,
    Command.LOWNER: 1,
    Command.JOHN_POSITION: 1,
    Command.SLICE_MAP: 1,
    Command.HAUSDORFF: 2,
    Command.BM_DIST: 2,
    Command.QUOTIENT_DIST: 2,
    Command.SLICE_AUDIT: None,
    Command.DEMO_REMARK: 0,
    Command.NET: None,
    Command.GEN: 0,
}

MAX_EPS = 1e-2


@dataclass
class RunConfig:
    """
    Fully resolved configuration of one CLI run.

    Required:
    - command: which operation to run
    Optional:
    - inputs: body JSON paths (count depends on the command)
    - eps: solver tolerance in (0, 1e-2]
    - samples: direction samples for support-function sweeps
    - seed: RNG seed (default 42)
    - workers: worker count, 0 = machine parallelism, 1 = serial
    - out: output path, None = stdout
    - format: csv | json | svg
    - n / count: dimension and corpus size for `gen` (and `net` when no inputs)
    - net_eps: covering radius for `net`
    """

    command: Command
    inputs: List[str] = field(default_factory=list)
    eps: float = 1e-7
    samples: int = 4096
    seed: int = 42
    workers: int = 0
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.JSON
    n: int = 2
    count: int = 10
    net_eps: float = 0.25

    def __post_init__(self):
        self.command = Command(self.command)
        self.format = OutputFormat(self.format)

        if not (0.0 < self.eps <= MAX_EPS):
            raise ValueError(f"eps must lie in (0, {MAX_EPS}], got {self.eps}")
        if self.samples < 16:
            raise ValueError(f"samples must be at least 16, got {self.samples}")
        if self.workers < 0:
            raise ValueError(f"workers must be non-negative, got {self.workers}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.count < 1:
            raise ValueError(f"count must be positive, got {self.count}")
        if self.net_eps <= 0.0:
            raise ValueError(f"net eps must be positive, got {self.net_eps}")
        if self.format is OutputFormat.SVG and self.command not in (
            Command.JOHN, Command.LOWNER, Command.JOHN_POSITION
        ):
            raise ValueError(f"svg output is not available for '{self.command.value}'")


def default_format(command: Command) -> OutputFormat:
    """The discontinuity table is a CSV artifact; everything else is JSON."""
    return OutputFormat.CSV if Command(command) is Command.DEMO_REMARK else OutputFormat.JSON


@dataclass
class ResultTable:
    """One CSV block: a header row and data rows."""
    header: List[str]
    rows: List[List[Any]]


@dataclass
class CommandResult:
    """
    Output of one command before formatting.

    payload is the JSON document; tables are the CSV blocks (written one after
    another, separated by a blank line); figure is (body, ellipsoids) for SVG.
    """
    payload: Dict[str, Any]
    tables: List[ResultTable] = field(default_factory=list)
    figure: Optional[Tuple[Any, List[Any]]] = None
