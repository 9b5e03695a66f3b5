"""
Data models for the scalar action of R_+ on the punctured plane.

- DemoPoint: point of R^2 without the origin
- DemoGroupElem: positive real lambda acting by scalar multiplication
- DemoSlice: one of the two global slices (unit circle, hyperbola cross)
- Ball, Annulus, Rectangle: set descriptors for transporter estimates
"""

from dataclasses import dataclass
from enum import Enum
from typing import Union
import math


class SliceKind(str, Enum):
    """Global {1}-slices of R_+ acting on R^2 without the origin."""
    CIRCLE = "circle"
    HYPERBOLA = "hyperbola"


@dataclass(frozen=True)
class DemoPoint:
    """A point (x, y) with x^2 + y^2 > 0."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x}, {self.y})")
        if self.x * self.x + self.y * self.y <= 0.0:
            raise ValueError("the origin is not a point of the punctured plane")

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def as_tuple(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class DemoGroupElem:
    """Multiplicative group element lambda > 0."""

    lam: float

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam <= 0.0:
            raise ValueError(f"lambda must be a positive real, got {self.lam}")

    def inverse(self) -> "DemoGroupElem":
        return DemoGroupElem(1.0 / self.lam)


@dataclass(frozen=True)
class DemoSlice:
    """
    Parametric slice description.

    CIRCLE is {||p|| = 1}; HYPERBOLA is {(x, +/-1/x)} together with the four
    axis points (0, +/-1), (+/-1, 0).
    """

    kind: SliceKind

    def __post_init__(self):
        object.__setattr__(self, "kind", SliceKind(self.kind))

    def contains(self, p: DemoPoint, tol: float = 1e-9) -> bool:
        if self.kind is SliceKind.CIRCLE:
            return abs(p.norm - 1.0) <= tol
        if p.x == 0.0 or p.y == 0.0:
            return abs(abs(p.x) + abs(p.y) - 1.0) <= tol
        return abs(abs(p.x * p.y) - 1.0) <= tol


# ============================================================================
# Set descriptors for transporters
# ============================================================================

@dataclass(frozen=True)
class Ball:
    """Closed Euclidean disk around center; must avoid the origin."""

    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not math.isfinite(self.radius) or self.radius <= 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if math.hypot(*self.center) <= self.radius:
            raise ValueError("ball must not contain the origin")


@dataclass(frozen=True)
class Annulus:
    """{p : r_min <= ||p|| <= r_max}."""

    r_min: float
    r_max: float

    def __post_init__(self):
        if not 0.0 < self.r_min <= self.r_max or not math.isfinite(self.r_max):
            raise ValueError(f"need 0 < r_min <= r_max, got [{self.r_min}, {self.r_max}]")


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned closed rectangle not containing the origin."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError("rectangle bounds are reversed")
        if self.x_min <= 0.0 <= self.x_max and self.y_min <= 0.0 <= self.y_max:
            raise ValueError("rectangle must not contain the origin")


SetDescriptor = Union[Ball, Annulus, Rectangle, DemoSlice]
