"""
Report and result models for BodySlice.

These are the values returned by audits and experiments:
- ContainmentBounds: John/Loewner sandwich factors of a body
- SliceAuditReport: sampled check of the four slice axioms
- OrbitPoint: canonical slice representative of a GL(n)-orbit
- NetReport: greedy epsilon-net over orbit representatives
- TransporterEstimate / SmallnessReport: R_+ transporter envelopes
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

from .geometry_models import Ellipsoid, GroupElem, SymBody


class ContainmentBounds(NamedTuple):
    """inner ellipsoid E and the smallest t with A contained in t*E."""
    inner: Ellipsoid
    outer_factor: float


class LownerBounds(NamedTuple):
    """outer ellipsoid E and the largest s with s*E contained in A."""
    outer: Ellipsoid
    inner_factor: float


@dataclass
class SliceAuditReport:
    """
    Result of auditing a membership predicate against the slice axioms.

    disjointness_witnesses holds (g, violation) pairs where g has a
    non-orthogonal PD part and both s and gs were members; violation is
    ||P - I||_F for the PD part P of g. An empty witness list together with
    the three boolean proxies means every sampled check passed.
    """

    h_invariant: bool
    disjointness_witnesses: List[Tuple[GroupElem, float]] = field(default_factory=list)
    saturation_open_proxy: bool = True
    closedness_proxy: bool = True
    members_checked: int = 0
    pairs_checked: int = 0

    @property
    def passed(self) -> bool:
        return (
            self.h_invariant
            and not self.disjointness_witnesses
            and self.saturation_open_proxy
            and self.closedness_proxy
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "axiom_1_h_invariant": self.h_invariant,
            "axiom_2_closedness_proxy": self.closedness_proxy,
            "axiom_3_disjointness": not self.disjointness_witnesses,
            "axiom_4_saturation_open_proxy": self.saturation_open_proxy,
            "witnesses": [
                {"g": g.mat.tolist(), "violation": violation}
                for g, violation in self.disjointness_witnesses
            ],
            "members_checked": self.members_checked,
            "pairs_checked": self.pairs_checked,
        }


@dataclass(frozen=True, eq=False)
class OrbitPoint:
    """
    A body in John position standing for its whole GL(n)-orbit.

    john_residual is ||M_j(rep) - I||_F as measured when the representative
    was built; gauge_ambiguous marks near-ties in the O(n) gauge rule.
    """

    rep: SymBody
    john_residual: float = 0.0
    gauge_ambiguous: bool = False

    def __post_init__(self):
        if self.john_residual > 1e-6:
            raise ValueError(
                f"representative is not in John position (residual {self.john_residual:.3e})"
            )


@dataclass
class NetReport:
    """Greedy epsilon-net over orbit representatives."""

    eps: float
    centers: List[OrbitPoint]
    coverage_fraction: float
    center_indices: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not 0.0 <= self.coverage_fraction <= 1.0:
            raise ValueError(f"coverage_fraction must lie in [0, 1], got {self.coverage_fraction}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eps": self.eps,
            "centers": [c.rep.to_dict() for c in self.centers],
            "center_indices": list(self.center_indices),
            "coverage_fraction": self.coverage_fraction,
        }


@dataclass(frozen=True)
class TransporterEstimate:
    """
    Envelope [lam_min, lam_max] of a transporter in R_+.

    The flags report relative non-compactness: the envelope escapes
    [1/threshold, threshold].
    """

    lam_min: Optional[float]
    lam_max: Optional[float]
    unbounded_below: bool = False
    unbounded_above: bool = False
    exact: bool = False

    @property
    def empty(self) -> bool:
        return self.lam_min is None

    @property
    def relatively_compact(self) -> bool:
        return not self.empty and not (self.unbounded_below or self.unbounded_above)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lam_min": self.lam_min,
            "lam_max": self.lam_max,
            "unbounded_below": self.unbounded_below,
            "unbounded_above": self.unbounded_above,
            "empty": self.empty,
            "exact": self.exact,
        }


@dataclass
class SmallnessReport:
    """Verdict of the smallness test with the probes that failed it."""

    small: bool
    witnesses: List[Tuple[Tuple[float, float], List[TransporterEstimate]]] = field(
        default_factory=list
    )
