"""
Direction grids, standard bodies and seeded random corpora.

Direction grids are deterministic and quasi-uniform on the unit sphere:
- n = 1: the two points +/-1
- n = 2: m equally spaced angles starting at angle 0
- n = 3: Fibonacci lattice
- n >= 4: unscrambled Halton points pushed through the Gaussian quantile
"""

from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.stats import norm, ortho_group, qmc

from models.errors import InvalidBodyError
from models.geometry_models import GroupElem, SymBody

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


# ============================================================================
# Direction grids
# ============================================================================

@lru_cache(maxsize=64)
def sphere_directions(n: int, m: int) -> np.ndarray:
    """m x n array of unit vectors (read-only, cached)."""
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")

    if n == 1:
        dirs = np.array([[1.0], [-1.0]])
    elif n == 2:
        theta = 2.0 * np.pi * np.arange(m) / m
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    elif n == 3:
        i = np.arange(m) + 0.5
        z = 1.0 - 2.0 * i / m
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        phi = GOLDEN_ANGLE * np.arange(m)
        dirs = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    else:
        halton = qmc.Halton(d=n, scramble=False).random(m + 1)[1:]
        gauss = norm.ppf(halton)
        dirs = gauss / np.linalg.norm(gauss, axis=1, keepdims=True)

    dirs.setflags(write=False)
    return dirs


def half_sphere_directions(n: int, m: int) -> np.ndarray:
    """One representative of each +/- pair from a grid of about 2m directions."""
    if n == 1:
        return np.array([[1.0]])
    if n == 2:
        theta = np.pi * np.arange(m) / m
        return np.column_stack([np.cos(theta), np.sin(theta)])
    dirs = sphere_directions(n, 2 * m)
    return np.array(dirs[dirs[:, -1] > 0.0])


# ============================================================================
# Standard bodies
# ============================================================================

def cube(n: int) -> SymBody:
    """[-1, 1]^n as an H-rep body."""
    return SymBody(n, "H", np.eye(n))


def cross_polytope(n: int) -> SymBody:
    """conv{+/-e_i} as a V-rep body."""
    return SymBody(n, "V", np.eye(n))


def ellipsoid_body(M: np.ndarray, m: int = 720) -> SymBody:
    """
    V-rep body sampling the boundary of {x : x^T M x <= 1}.

    The sampled polytope is inscribed in the ellipsoid; its John/Loewner
    ellipsoids converge to M as m grows.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    inv_sqrt = (V / np.sqrt(w)) @ V.T
    return SymBody(n, "V", half_sphere_directions(n, m) @ inv_sqrt.T)


def ball_body(n: int, m: int = 720, radius: float = 1.0) -> SymBody:
    """Fine V-rep approximation of radius * B^n."""
    return ellipsoid_body(np.eye(n) / radius ** 2, m)


def regular_polygon(k: int, radius: float = 1.0, phase: float = 0.0) -> SymBody:
    """Centrally symmetric 2k-gon with vertices on the circle of the given radius."""
    theta = phase + np.pi * np.arange(k) / k
    return SymBody(2, "V", radius * np.column_stack([np.cos(theta), np.sin(theta)]))


# ============================================================================
# Group elements
# ============================================================================

def rotation2(theta: float) -> GroupElem:
    c, s = np.cos(theta), np.sin(theta)
    return GroupElem(np.array([[c, -s], [s, c]]))


def reflection2(theta: float = 0.0) -> GroupElem:
    """Reflection across the line at angle theta."""
    c, s = np.cos(2.0 * theta), np.sin(2.0 * theta)
    return GroupElem(np.array([[c, s], [s, -c]]))


def random_orthogonal(n: int, rng: np.random.Generator) -> GroupElem:
    """Haar-random element of O(n) (reflections included)."""
    if n == 1:
        return GroupElem(np.array([[rng.choice([-1.0, 1.0])]]))
    return GroupElem(ortho_group.rvs(n, random_state=rng))


def random_group_element(
    n: int,
    rng: np.random.Generator,
    log_scale: float = 1.0,
) -> GroupElem:
    """U diag(exp(s)) V with U, V Haar-orthogonal and s uniform in [-log_scale, log_scale]."""
    s = rng.uniform(-log_scale, log_scale, size=n)
    U = random_orthogonal(n, rng).mat
    V = random_orthogonal(n, rng).mat
    return GroupElem(U @ np.diag(np.exp(s)) @ V)


# ============================================================================
# Random bodies
# ============================================================================

def random_symmetric_polytope(
    n: int,
    rng: np.random.Generator,
    k: Optional[int] = None,
    max_attempts: int = 100,
) -> SymBody:
    """
    V-rep body with k unit-normalized Gaussian generators.

    k defaults to a draw from [n + 1, 4n]; rank-deficient draws are rejected.
    """
    for _ in range(max_attempts):
        count = int(rng.integers(n + 1, 4 * n + 1)) if k is None else int(k)
        gens = rng.standard_normal((count, n))
        norms = np.linalg.norm(gens, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            continue
        gens = gens / norms
        try:
            return SymBody(n, "V", gens)
        except InvalidBodyError:
            continue
    raise InvalidBodyError(f"could not draw a full-dimensional body in {max_attempts} attempts")


def random_corpus(n: int, count: int, seed: int) -> list:
    """count seeded random bodies; equal (n, count, seed) gives equal corpora."""
    rng = np.random.default_rng(seed)
    return [random_symmetric_polytope(n, rng) for _ in range(count)]
