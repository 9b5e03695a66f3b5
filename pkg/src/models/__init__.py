"""Data models, reports and errors"""

from .errors import (
    BodySliceError,
    InvalidBodyError,
    DimensionMismatch,
    SingularMatrix,
    UnboundedBody,
    NotFullDimensional,
    NoConvergence,
    NotEquivariantOnSlice,
)
from .geometry_models import SymBody, GroupElem, Direction, Ellipsoid, MveeReport, PosDef
from .demo_models import (
    DemoPoint,
    DemoGroupElem,
    DemoSlice,
    SliceKind,
    Ball,
    Annulus,
    Rectangle,
    SetDescriptor,
)
from .report_models import (
    ContainmentBounds,
    LownerBounds,
    SliceAuditReport,
    OrbitPoint,
    NetReport,
    TransporterEstimate,
    SmallnessReport,
)
from .run_models import RunConfig, Command, OutputFormat, CommandResult, ResultTable, default_format

__all__ = [
    "BodySliceError",
    "InvalidBodyError",
    "DimensionMismatch",
    "SingularMatrix",
    "UnboundedBody",
    "NotFullDimensional",
    "NoConvergence",
    "NotEquivariantOnSlice",
    "SymBody",
    "GroupElem",
    "Direction",
    "Ellipsoid",
    "MveeReport",
    "PosDef",
    "DemoPoint",
    "DemoGroupElem",
    "DemoSlice",
    "SliceKind",
    "Ball",
    "Annulus",
    "Rectangle",
    "SetDescriptor",
    "ContainmentBounds",
    "LownerBounds",
    "SliceAuditReport",
    "OrbitPoint",
    "NetReport",
    "TransporterEstimate",
    "SmallnessReport",
    "RunConfig",
    "Command",
    "OutputFormat",
    "CommandResult",
    "ResultTable",
    "default_format",
]
