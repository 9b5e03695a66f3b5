"""
The proper action of R_+ on the punctured plane by scalar multiplication.

Both the unit circle and the hyperbola cross

    {(x, +/-1/x)} together with (0, +/-1), (+/-1, 0)

are global {1}-slices. The circle is small; the hyperbola is not: the
transporter between its points and any neighbourhood of (0, 1) escapes to 0,
and its slicing map jumps at (0, 1).

Transporters <U, V> = {lam : lam U meets V} are estimated per sampled point
of U, with the set of admissible lam for each point solved in closed form
against V. Radial pairs (circle, annulus) and equal slices are exact.
"""

import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from models.demo_models import (
    Annulus,
    Ball,
    DemoGroupElem,
    DemoPoint,
    DemoSlice,
    Rectangle,
    SetDescriptor,
    SliceKind,
)
from models.report_models import SmallnessReport, TransporterEstimate
from utils.parallel import parallel_map

SMALLNESS_THRESHOLD = 1e6
SHRINK_FACTORS = (0.5, 0.1, 0.01)
REMARK_KS = (1, 10, 100, 1000, 10000, 100000, 1000000)

# offsets used to approach the coordinate axes inside sampled sets
AXIS_APPROACH = 10.0 ** -np.arange(1, 16)
HYPERBOLA_DECADES = 12

PointLike = Union[DemoPoint, Tuple[float, float]]
Descriptors = Union[SetDescriptor, Sequence[SetDescriptor]]


def _as_point(p: PointLike) -> DemoPoint:
    return p if isinstance(p, DemoPoint) else DemoPoint(float(p[0]), float(p[1]))


def _as_slice(S: Union[DemoSlice, SliceKind, str]) -> DemoSlice:
    return S if isinstance(S, DemoSlice) else DemoSlice(SliceKind(S))


# ============================================================================
# Action and slicing maps
# ============================================================================

def demo_act(lam: Union[DemoGroupElem, float], p: PointLike) -> DemoPoint:
    """lam * (x, y) = (lam x, lam y)."""
    lam = lam if isinstance(lam, DemoGroupElem) else DemoGroupElem(float(lam))
    p = _as_point(p)
    return DemoPoint(lam.lam * p.x, lam.lam * p.y)


def _slicing_values(kind: SliceKind, pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    if kind is SliceKind.CIRCLE:
        return np.hypot(x, y)
    on_axis = (x == 0.0) | (y == 0.0)
    return np.where(on_axis, np.abs(x) + np.abs(y), np.sqrt(np.abs(x * y)))


def demo_slicing_map(S: Union[DemoSlice, SliceKind, str], p: PointLike) -> float:
    """
    The unique lam > 0 with p / lam in S.

    Circle: ||p||. Hyperbola: sqrt(|xy|) off the axes, |x| + |y| on them.
    """
    S = _as_slice(S)
    p = _as_point(p)
    if S.kind is SliceKind.CIRCLE:
        return p.norm
    if p.x == 0.0 or p.y == 0.0:
        return abs(p.x) + abs(p.y)
    return math.sqrt(abs(p.x * p.y))


# ============================================================================
# Set sampling
# ============================================================================

def _all_signs(pts: np.ndarray) -> np.ndarray:
    return np.vstack([pts * np.array(s) for s in ((1, 1), (-1, 1), (1, -1), (-1, -1))])


def _member_mask(U: SetDescriptor, pts: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    if isinstance(U, Ball):
        cx, cy = U.center
        return np.hypot(x - cx, y - cy) <= U.radius * (1.0 + tol)
    if isinstance(U, Annulus):
        r = np.hypot(x, y)
        return (r >= U.r_min * (1.0 - tol)) & (r <= U.r_max * (1.0 + tol))
    if isinstance(U, Rectangle):
        return (x >= U.x_min) & (x <= U.x_max) & (y >= U.y_min) & (y <= U.y_max)
    S = _as_slice(U)
    if S.kind is SliceKind.CIRCLE:
        return np.abs(np.hypot(x, y) - 1.0) <= 1e-9
    return np.abs(_slicing_values(SliceKind.HYPERBOLA, pts) - 1.0) <= 1e-9


def sample_set(U: SetDescriptor, grid: int = 256) -> np.ndarray:
    """
    Points of U as an (m, 2) array.

    Besides a regular grid, sets crossing a coordinate axis get sequences
    approaching the crossing; these carry the escaping transporter elements.
    """
    if isinstance(U, DemoSlice):
        if U.kind is SliceKind.CIRCLE:
            theta = 2.0 * np.pi * np.arange(4 * grid) / (4 * grid)
            return np.column_stack([np.cos(theta), np.sin(theta)])
        t = np.logspace(-HYPERBOLA_DECADES, HYPERBOLA_DECADES, 8 * grid + 1)
        branch = np.column_stack([t, 1.0 / t])
        axes = np.array([[0.0, 1.0], [0.0, -1.0], [1.0, 0.0], [-1.0, 0.0]])
        return np.vstack([_all_signs(branch), axes])

    theta = 2.0 * np.pi * np.arange(grid) / grid
    if isinstance(U, Ball):
        cx, cy = U.center
        radii = np.linspace(0.0, U.radius, max(2, grid // 8))
        pts = np.array([cx, cy]) + np.concatenate(
            [r * np.column_stack([np.cos(theta), np.sin(theta)]) for r in radii]
        )
        approach = np.concatenate([[0.0], AXIS_APPROACH, -AXIS_APPROACH])
        extra = [np.column_stack([approach, np.full(approach.size, cy)]),
                 np.column_stack([np.full(approach.size, cx), approach])]
    elif isinstance(U, Annulus):
        radii = np.linspace(U.r_min, U.r_max, max(2, grid // 8))
        pts = np.concatenate([r * np.column_stack([np.cos(theta), np.sin(theta)]) for r in radii])
        r_mid = 0.5 * (U.r_min + U.r_max)
        near_axis = np.concatenate([k * np.pi / 2 + s * AXIS_APPROACH for k in range(4) for s in (1, -1)])
        extra = [r_mid * np.column_stack([np.cos(near_axis), np.sin(near_axis)])]
    elif isinstance(U, Rectangle):
        xs = np.linspace(U.x_min, U.x_max, max(2, grid // 4))
        ys = np.linspace(U.y_min, U.y_max, max(2, grid // 4))
        gx, gy = np.meshgrid(xs, ys)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        approach = np.concatenate([[0.0], AXIS_APPROACH, -AXIS_APPROACH])
        x_mid, y_mid = 0.5 * (U.x_min + U.x_max), 0.5 * (U.y_min + U.y_max)
        extra = [np.column_stack([approach, np.full(approach.size, y_mid)]),
                 np.column_stack([np.full(approach.size, x_mid), approach])]
    else:
        raise TypeError(f"unsupported set descriptor: {type(U).__name__}")

    pts = np.vstack([pts] + extra)
    pts = pts[_member_mask(U, pts)]
    return pts[np.hypot(pts[:, 0], pts[:, 1]) > 0.0]


# ============================================================================
# Transporters
# ============================================================================

def _lambda_intervals(V: SetDescriptor, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per point p, the interval {lam > 0 : lam p in V}; empty where lo > hi."""
    x, y = pts[:, 0], pts[:, 1]
    norm = np.hypot(x, y)

    if isinstance(V, DemoSlice):
        lam = 1.0 / _slicing_values(V.kind, pts)
        return lam, lam.copy()
    if isinstance(V, Annulus):
        return V.r_min / norm, V.r_max / norm
    if isinstance(V, Ball):
        cx, cy = V.center
        a = norm ** 2
        b = x * cx + y * cy
        c = cx * cx + cy * cy - V.radius ** 2
        disc = b * b - a * c
        ok = (disc >= 0.0) & (b > 0.0)
        root = np.sqrt(np.where(ok, disc, 0.0))
        big = np.where(ok, b + root, 1.0)
        # product of roots is c / a; avoids cancellation for tiny lam
        lo = np.where(ok, c / big, np.inf)
        hi = np.where(ok, big / a, -np.inf)
        return lo, hi
    if isinstance(V, Rectangle):
        lo = np.zeros_like(x)
        hi = np.full_like(x, np.inf)
        for coord, low, high in ((x, V.x_min, V.x_max), (y, V.y_min, V.y_max)):
            with np.errstate(divide="ignore", invalid="ignore"):
                a, b = low / coord, high / coord
            pos, neg, zero = coord > 0.0, coord < 0.0, coord == 0.0
            lo = np.where(pos, np.maximum(lo, a), np.where(neg, np.maximum(lo, b), lo))
            hi = np.where(pos, np.minimum(hi, b), np.where(neg, np.minimum(hi, a), hi))
            if not low <= 0.0 <= high:
                hi = np.where(zero, -np.inf, hi)
        hi = np.where(hi <= 0.0, -np.inf, hi)
        return lo, hi
    raise TypeError(f"unsupported set descriptor: {type(V).__name__}")


def _radial_range(U: SetDescriptor) -> Optional[Tuple[float, float]]:
    if isinstance(U, Annulus):
        return U.r_min, U.r_max
    if isinstance(U, DemoSlice) and U.kind is SliceKind.CIRCLE:
        return 1.0, 1.0
    return None


def _exact_envelope(U: SetDescriptor, V: SetDescriptor) -> Optional[Tuple[float, float]]:
    if isinstance(U, DemoSlice) and isinstance(V, DemoSlice) and U.kind is V.kind:
        return 1.0, 1.0
    ru, rv = _radial_range(U), _radial_range(V)
    if ru is None or rv is None:
        return None
    return rv[0] / ru[1], rv[1] / ru[0]


def _estimate(lo: Optional[float], hi: Optional[float], exact: bool, threshold: float) -> TransporterEstimate:
    if lo is None:
        return TransporterEstimate(None, None, exact=exact)
    return TransporterEstimate(
        lam_min=lo,
        lam_max=hi,
        unbounded_below=lo < 1.0 / threshold,
        unbounded_above=hi > threshold,
        exact=exact,
    )


def _single_transporter(U: SetDescriptor, V: SetDescriptor, grid: int):
    exact = _exact_envelope(U, V)
    if exact is not None:
        return exact[0], exact[1], True
    lo, hi = _lambda_intervals(V, sample_set(U, grid))
    valid = lo <= hi
    if not np.any(valid):
        return None, None, False
    return float(np.min(lo[valid])), float(np.max(hi[valid])), False


def transporter(
    U: Descriptors,
    V: Descriptors,
    grid: int = 256,
    threshold: float = SMALLNESS_THRESHOLD,
) -> TransporterEstimate:
    """
    Envelope [lam_min, lam_max] of <U, V> = {lam : lam U meets V}.

    U and V are descriptors or sequences of descriptors (unions). Exact for
    circle/annulus pairs, giving [r_min(V)/r_max(U), r_max(V)/r_min(U)], and
    for a slice against itself, giving {1}. The flags mark envelopes leaving
    [1/threshold, threshold]; an empty transporter has lam_min None.
    """
    us = list(U) if isinstance(U, (list, tuple)) else [U]
    vs = list(V) if isinstance(V, (list, tuple)) else [V]

    lows, highs, exact = [], [], True
    for u in us:
        for v in vs:
            lo, hi, is_exact = _single_transporter(u, v, grid)
            exact = exact and is_exact
            if lo is not None:
                lows.append(lo)
                highs.append(hi)
    if not lows:
        return _estimate(None, None, exact, threshold)
    return _estimate(min(lows), max(highs), exact, threshold)


# ============================================================================
# Smallness and openness
# ============================================================================

def is_small(
    S: Union[DemoSlice, SliceKind, str],
    probes: Iterable[PointLike],
    threshold: float = SMALLNESS_THRESHOLD,
    shrink: Sequence[float] = SHRINK_FACTORS,
    grid: int = 256,
    workers: Optional[int] = None,
) -> SmallnessReport:
    """
    Whether every probe has a ball neighbourhood U with <S, U> relatively compact.

    Balls of radius factor * ||p|| shrink through the given factors; a probe
    fails when every ball gives an envelope escaping [1/threshold, threshold],
    and is then reported with those envelopes.
    """
    S = _as_slice(S)
    probes = [_as_point(p) for p in probes]
    if not probes:
        raise ValueError("at least one probe point is required")

    def check(p: DemoPoint):
        estimates: List[TransporterEstimate] = []
        for factor in shrink:
            est = transporter(S, Ball(p.as_tuple(), factor * p.norm), grid, threshold)
            if est.empty or est.relatively_compact:
                return None
            estimates.append(est)
        return p.as_tuple(), estimates

    failures = [w for w in parallel_map(check, probes, workers) if w is not None]
    return SmallnessReport(small=not failures, witnesses=failures)


def _slice_window(S: DemoSlice, s0: DemoPoint, slice_radius: float) -> np.ndarray:
    pts = sample_set(S, 1024)
    return pts[np.hypot(pts[:, 0] - s0.x, pts[:, 1] - s0.y) <= slice_radius]


def action_image_is_open_at(
    S: Union[DemoSlice, SliceKind, str],
    point: PointLike,
    lam_window: Tuple[float, float] = (0.5, 2.0),
    slice_radius: float = 0.25,
    radius: float = 0.05,
    grid: int = 16,
) -> bool:
    """
    Grid proxy: does lam_window * (S near s0) contain a ball around point?

    s0 = point / f_S(point). A probe q lies in the image exactly when
    f_S(q) is in lam_window and q / f_S(q) is within slice_radius of s0,
    because lam s = q forces lam = f_S(q).
    """
    S = _as_slice(S)
    p = _as_point(point)
    lam0 = demo_slicing_map(S, p)
    s0 = DemoPoint(p.x / lam0, p.y / lam0)

    theta = 2.0 * np.pi * np.arange(grid) / grid
    rings = [r * np.column_stack([np.cos(theta), np.sin(theta)]) for r in np.linspace(0.0, radius, grid // 2 + 1)[1:]]
    probes = np.array([p.x, p.y]) + np.vstack(rings)
    probes = probes[np.hypot(probes[:, 0], probes[:, 1]) > 0.0]

    lam = _slicing_values(S.kind, probes)
    base = probes / lam[:, None]
    in_window = (lam >= lam_window[0]) & (lam <= lam_window[1])
    near_s0 = np.hypot(base[:, 0] - s0.x, base[:, 1] - s0.y) <= slice_radius
    return bool(np.all(in_window & near_s0))


def orbit_map_open_proxy(
    S: Union[DemoSlice, SliceKind, str],
    slice_points: Iterable[PointLike],
    slice_radius: float = 0.25,
    radius: float = 0.05,
    grid: int = 16,
) -> bool:
    """
    Openness of S -> X/G at the given slice points.

    The image of a window W of S is open in X/G exactly when the saturation
    G(W) is open in X; this checks a ball around each point of W within half
    the window radius.
    """
    S = _as_slice(S)
    for s in slice_points:
        s = _as_point(s)
        centers = _slice_window(S, s, slice_radius / 2.0)
        if centers.size == 0:
            centers = np.array([[s.x, s.y]])
        for c in centers[:: max(1, len(centers) // 16)]:
            if not action_image_is_open_at(S, (c[0], c[1]), (0.5, 2.0), slice_radius, radius, grid):
                return False
    return True


# ============================================================================
# The non-small slice, reproduced
# ============================================================================

def remark_table(ks: Sequence[float] = REMARK_KS) -> List[Dict[str, float]]:
    """Rows (k, x, y, f_S(x, y), k^{-1/2}) along p_k = (1/k, 1) -> (0, 1)."""
    hyperbola = DemoSlice(SliceKind.HYPERBOLA)
    rows = []
    for k in ks:
        p = DemoPoint(1.0 / k, 1.0)
        rows.append({
            "k": float(k),
            "x": p.x,
            "y": p.y,
            "f_S": demo_slicing_map(hyperbola, p),
            "k_inv_sqrt": float(k) ** -0.5,
        })
    return rows


def remark_envelopes(grid: int = 256) -> Dict[str, TransporterEstimate]:
    """Transporter envelopes contrasting the circle and hyperbola slices."""
    circle = DemoSlice(SliceKind.CIRCLE)
    hyperbola = DemoSlice(SliceKind.HYPERBOLA)
    neighbourhood = Ball((0.0, 1.0), 0.1)
    return {
        "hyperbola_to_neighbourhood": transporter(hyperbola, neighbourhood, grid),
        "neighbourhood_to_hyperbola": transporter(neighbourhood, hyperbola, grid),
        "circle_to_neighbourhood": transporter(circle, neighbourhood, grid),
        "circle_to_annulus": transporter(circle, Annulus(1.0, 2.0), grid),
        "circle_to_circle": transporter(circle, circle, grid),
    }
