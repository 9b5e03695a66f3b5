"""
Origin-symmetric convex bodies: support, gauge, polarity, the GL(n) action
and the Hausdorff metric.

A V-rep body is conv{+/-gens_i}; an H-rep body is {x : |<gens_i, x>| <= 1}.
Swapping the tag is exact polarity. Representation conversion goes through
the convex hull of {+/-gens}: the facets of conv{+/-P} are the vertices of the
polar body, so one qhull call serves both directions.
"""

import weakref
from typing import Optional, Union

import numpy as np
from scipy.optimize import linprog, minimize
from scipy.spatial import ConvexHull

from models.errors import BodySliceError, DimensionMismatch, UnboundedBody
from models.geometry_models import Direction, GroupElem, SymBody
from utils.solver_config import get_setting, SettingKey
from .sampling import sphere_directions

# H-rep support and V-rep gauge use exact vertex enumeration up to this
# dimension and a linear program above it.
EXACT_ENUMERATION_MAX_DIM = 3

GEOMETRY_TOLERANCE = 1e-9

_vertex_cache: "weakref.WeakKeyDictionary[SymBody, np.ndarray]" = weakref.WeakKeyDictionary()
_facet_cache: "weakref.WeakKeyDictionary[SymBody, np.ndarray]" = weakref.WeakKeyDictionary()

VectorLike = Union[Direction, np.ndarray, list, tuple]


# ============================================================================
# Representation conversion
# ============================================================================

def _canonical_sign(rows: np.ndarray) -> np.ndarray:
    """Flip each row so that its first non-negligible coordinate is positive."""
    rows = np.array(rows, dtype=float)
    for i, row in enumerate(rows):
        idx = np.flatnonzero(np.abs(row) > 1e-12 * max(1.0, np.max(np.abs(row))))
        if idx.size and row[idx[0]] < 0.0:
            rows[i] = -row
    return rows


def _polar_vertices(points: np.ndarray) -> np.ndarray:
    """
    Facet functionals of conv{+/-points}, one per +/- pair.

    Each returned f satisfies max_i |<f, p_i>| = 1, so they are both the
    H-rep of conv{+/-points} and the vertices of {x : |<p_i, x>| <= 1}.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[1]

    if n == 1:
        return np.array([[1.0 / np.max(np.abs(points))]])

    hull = ConvexHull(np.vstack([points, -points]))
    normals = hull.equations[:, :n]
    offsets = hull.equations[:, n]
    if np.any(offsets >= 0.0):
        raise BodySliceError("origin is not interior to the hull of the generators")

    functionals = _canonical_sign(normals / (-offsets)[:, None])
    _, first = np.unique(np.round(functionals, 9), axis=0, return_index=True)
    return functionals[np.sort(first)]


def vertices(A: SymBody) -> np.ndarray:
    """Vertex representatives of A (one per +/- pair); may include redundant V gens."""
    if A.rep == "V":
        return A.gens
    cached = _vertex_cache.get(A)
    if cached is None:
        cached = _polar_vertices(A.gens)
        cached.setflags(write=False)
        _vertex_cache[A] = cached
    return cached


def facets(A: SymBody) -> np.ndarray:
    """Facet functionals of A (one per +/- pair): A = {x : |<f, x>| <= 1}."""
    if A.rep == "H":
        return A.gens
    cached = _facet_cache.get(A)
    if cached is None:
        cached = _polar_vertices(A.gens)
        cached.setflags(write=False)
        _facet_cache[A] = cached
    return cached


def to_v_rep(A: SymBody) -> SymBody:
    return A if A.rep == "V" else SymBody(A.n, "V", vertices(A))


def to_h_rep(A: SymBody) -> SymBody:
    return A if A.rep == "H" else SymBody(A.n, "H", facets(A))


# ============================================================================
# Support and gauge
# ============================================================================

def _as_vector(u: VectorLike) -> np.ndarray:
    if isinstance(u, Direction):
        return u.u
    return Direction(np.asarray(u, dtype=float)).u


def _lp_support(gens: np.ndarray, x: np.ndarray) -> float:
    """max <y, x> subject to |<gens_i, y>| <= 1."""
    A_ub = np.vstack([gens, -gens])
    b_ub = np.ones(A_ub.shape[0])
    result = linprog(-x, A_ub=A_ub, b_ub=b_ub, bounds=(None, None), method="highs")
    if result.status == 3:
        raise UnboundedBody("support linear program is unbounded (generators do not span)")
    if result.status != 0:
        raise BodySliceError(f"support linear program failed: {result.message}")
    return float(-result.fun)


def support_function(A: SymBody, X: np.ndarray) -> np.ndarray:
    """
    h_A evaluated at every row of X (rows need not be unit vectors).

    h_A is positively homogeneous, so non-unit rows give scaled values.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != A.n:
        raise DimensionMismatch(A.n, X.shape[1], "body and directions")

    if A.rep == "V" or A.n <= EXACT_ENUMERATION_MAX_DIM:
        return np.max(np.abs(vertices(A) @ X.T), axis=0)
    return np.array([_lp_support(A.gens, x) for x in X])


def support(A: SymBody, u: VectorLike) -> float:
    """
    Support function h_A(u) = max_{a in A} <a, u> at a unit direction.

    V-rep: max_i |<gens_i, u>|. H-rep: vertex enumeration for n <= 3,
    linear program otherwise.

    Raises:
        UnboundedBody: if the H-rep linear program is unbounded
    """
    return float(support_function(A, _as_vector(u)[None, :])[0])


def gauge(A: SymBody, x: VectorLike) -> float:
    """
    Minkowski functional inf{t > 0 : x in tA}.

    H-rep: max_i |<gens_i, x>|. V-rep: the support function of the polar
    body, which by LP duality is min sum|lambda_i| over x = sum lambda_i gens_i.
    """
    x = np.asarray(x.u if isinstance(x, Direction) else x, dtype=float)
    if x.shape != (A.n,):
        raise DimensionMismatch(A.n, x.size, "body and point")
    if not np.any(x):
        return 0.0
    if A.rep == "H":
        return float(np.max(np.abs(A.gens @ x)))
    if A.n <= EXACT_ENUMERATION_MAX_DIM:
        return float(np.max(np.abs(facets(A) @ x)))
    return _lp_support(A.gens, x)


def contains(A: SymBody, x: VectorLike, tol: float = GEOMETRY_TOLERANCE) -> bool:
    return gauge(A, x) <= 1.0 + tol


def outer_radius(A: SymBody) -> float:
    """Radius of the smallest centred ball containing A."""
    return float(np.max(np.linalg.norm(vertices(A), axis=1)))


def inner_radius(A: SymBody) -> float:
    """Radius of the largest centred ball inside A (distance to the nearest facet)."""
    return float(1.0 / np.max(np.linalg.norm(facets(A), axis=1)))


# ============================================================================
# Polarity and the GL(n) action
# ============================================================================

def polar(A: SymBody) -> SymBody:
    """Polar body: same generators, swapped tag. polar(polar(A)) == A bit-exactly."""
    return SymBody(A.n, "H" if A.rep == "V" else "V", A.gens)


def act(g: GroupElem, A: SymBody) -> SymBody:
    """
    Linear image gA.

    V-rep generators map by g; H-rep functionals map by g^{-T}.

    Raises:
        DimensionMismatch: if g and A live in different dimensions
        SingularMatrix: raised when g itself is built from a singular matrix
    """
    if g.n != A.n:
        raise DimensionMismatch(g.n, A.n, "group element and body")
    if A.rep == "V":
        return SymBody(A.n, "V", A.gens @ g.mat.T)
    return SymBody(A.n, "H", A.gens @ np.linalg.inv(g.mat))


def scale(A: SymBody, t: float) -> SymBody:
    """tA for t > 0."""
    return act(GroupElem(t * np.eye(A.n)), A)


# ============================================================================
# Hausdorff metric
# ============================================================================

def hausdorff(
    A: SymBody,
    B: SymBody,
    m: Optional[int] = None,
    refine: bool = True,
) -> float:
    """
    Hausdorff distance through d_H(A, B) = sup_u |h_A(u) - h_B(u)|.

    The sup is taken over m deterministic quasi-uniform directions, then
    refined by Nelder-Mead on the sphere around the best sample. The result
    is symmetric in A and B and zero for A == B.

    Raises:
        DimensionMismatch: if A and B have different dimensions
    """
    if A.n != B.n:
        raise DimensionMismatch(A.n, B.n)
    m = int(get_setting(SettingKey.SAMPLES)) if m is None else int(m)

    dirs = sphere_directions(A.n, m)
    gaps = np.abs(support_function(A, dirs) - support_function(B, dirs))
    best = int(np.argmax(gaps))
    value = float(gaps[best])

    if not refine or A.n == 1 or value == 0.0:
        return value

    def objective(x: np.ndarray) -> float:
        norm = np.linalg.norm(x)
        if norm == 0.0:
            return 0.0
        u = (x / norm)[None, :]
        return -abs(float(support_function(A, u)[0] - support_function(B, u)[0]))

    result = minimize(
        objective,
        dirs[best],
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 200 * A.n},
    )
    return max(value, float(-result.fun))
