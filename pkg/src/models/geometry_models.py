"""
Data models for BodySlice geometry.

This module defines the immutable value types that flow through the library:
- SymBody: origin-symmetric convex polytope in V- or H-representation
- GroupElem: invertible matrix g in GL(n), with an orthogonality cache
- Direction: unit vector used for support-function sampling
- Ellipsoid: centred ellipsoid {x : x^T M x <= 1}
- MveeReport: diagnostics of the minimum-volume enclosing ellipsoid solver
- PosDef: symmetric positive-definite matrix, the coset model of GL(n)/O(n)

All arrays are copied on construction and marked read-only.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Tuple

import numpy as np

from .errors import InvalidBodyError, SingularMatrix


# ============================================================================
# Tolerances
# ============================================================================

SINGULAR_TOLERANCE = 1e-12
ORTHOGONAL_TOLERANCE = 1e-9
UNIT_TOLERANCE = 1e-12
SYMMETRY_TOLERANCE = 1e-10
EIGENVALUE_FLOOR = 1e-12

VALID_REPS = ("V", "H")


def _frozen_array(values: Any, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {array.shape}")
    array.setflags(write=False)
    return array


# ============================================================================
# Bodies
# ============================================================================

@dataclass(frozen=True, eq=False)
class SymBody:
    """
    Origin-symmetric convex body given by one representative per +/- pair.

    Fields:
    - n: ambient dimension (>= 1)
    - rep: "V" (body = conv{+/-gens_i}) or "H" (body = {x : |<gens_i, x>| <= 1})
    - gens: k x n array of generators, k >= n, spanning R^n, no zero rows

    Degenerate generator sets are rejected here, not at use sites.
    """

    n: int
    rep: Literal["V", "H"]
    gens: np.ndarray

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidBodyError(f"n must be a positive integer, got {self.n!r}")

        if self.rep not in VALID_REPS:
            raise InvalidBodyError(f"rep must be one of {VALID_REPS}, got {self.rep!r}")

        gens = np.array(self.gens, dtype=float)
        if gens.ndim == 1 and self.n == 1:
            gens = gens.reshape(-1, 1)
        if gens.ndim != 2 or gens.shape[1] != self.n:
            raise InvalidBodyError(
                f"gens must be a k x {self.n} array, got shape {gens.shape}"
            )
        if not np.all(np.isfinite(gens)):
            raise InvalidBodyError("gens contains non-finite values")
        if gens.shape[0] < self.n:
            raise InvalidBodyError(
                f"need at least n={self.n} generators, got {gens.shape[0]}"
            )

        zero_rows = np.flatnonzero(np.all(gens == 0.0, axis=1))
        if zero_rows.size:
            raise InvalidBodyError(f"generator {int(zero_rows[0])} is the zero vector")

        if np.linalg.matrix_rank(gens) < self.n:
            raise InvalidBodyError("generators do not span R^n (body is not full-dimensional)")

        gens.setflags(write=False)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "gens", gens)

    @property
    def k(self) -> int:
        """Number of stored generators (one per +/- pair)."""
        return int(self.gens.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "rep": self.rep, "gens": self.gens.tolist()}

    def __repr__(self) -> str:
        return f"SymBody(n={self.n}, rep={self.rep!r}, k={self.k})"


# ============================================================================
# Group elements
# ============================================================================

@dataclass(frozen=True, eq=False)
class GroupElem:
    """
    Invertible n x n matrix acting linearly on R^n.

    is_orthogonal is computed once on construction:
    ||mat^T mat - I||_inf <= 1e-9.
    """

    mat: np.ndarray
    is_orthogonal: bool = field(init=False)

    def __post_init__(self):
        mat = np.array(self.mat, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"group element must be a square matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("group element contains non-finite values")

        det = float(np.linalg.det(mat))
        if abs(det) <= SINGULAR_TOLERANCE:
            raise SingularMatrix(f"|det g| = {abs(det):.3e} is below {SINGULAR_TOLERANCE}")

        gram = mat.T @ mat - np.eye(mat.shape[0])
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(
            self, "is_orthogonal", bool(np.max(np.abs(gram)) <= ORTHOGONAL_TOLERANCE)
        )

    @property
    def n(self) -> int:
        return int(self.mat.shape[0])

    @classmethod
    def identity(cls, n: int) -> "GroupElem":
        return cls(np.eye(n))

    def inverse(self) -> "GroupElem":
        return GroupElem(np.linalg.inv(self.mat))

    def __matmul__(self, other: "GroupElem") -> "GroupElem":
        return GroupElem(self.mat @ other.mat)

    def to_dict(self) -> Dict[str, Any]:
        return {"mat": self.mat.tolist(), "is_orthogonal": self.is_orthogonal}


@dataclass(frozen=True, eq=False)
class Direction:
    """Unit vector of R^n."""

    u: np.ndarray

    def __post_init__(self):
        u = _frozen_array(self.u, 1)
        if abs(float(np.linalg.norm(u)) - 1.0) > UNIT_TOLERANCE:
            raise ValueError(f"direction must have unit norm, got {np.linalg.norm(u)!r}")
        object.__setattr__(self, "u", u)

    @classmethod
    def from_vector(cls, x: Any) -> "Direction":
        x = np.asarray(x, dtype=float)
        norm = float(np.linalg.norm(x))
        if norm == 0.0:
            raise ValueError("cannot build a direction from the zero vector")
        return cls(x / norm)


# ============================================================================
# Ellipsoids
# ============================================================================

def _symmetric_pd(matrix: Any, name: str) -> np.ndarray:
    M = np.array(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite values")
    if np.max(np.abs(M - M.T)) > SYMMETRY_TOLERANCE * max(1.0, float(np.max(np.abs(M)))):
        raise ValueError(f"{name} is not symmetric")
    M = 0.5 * (M + M.T)
    smallest = float(np.linalg.eigvalsh(M)[0])
    if smallest <= EIGENVALUE_FLOOR:
        raise ValueError(f"{name} is not positive definite (smallest eigenvalue {smallest:.3e})")
    M.setflags(write=False)
    return M


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """
    Centred ellipsoid E = {x : x^T M x <= 1}.

    M = I is the Euclidean unit ball. Polarity is M -> M^{-1}; the linear
    image gE has matrix g^{-T} M g^{-1}.
    """

    M: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "M", _symmetric_pd(self.M, "ellipsoid matrix"))

    @property
    def n(self) -> int:
        return int(self.M.shape[0])

    @classmethod
    def unit_ball(cls, n: int) -> "Ellipsoid":
        return cls(np.eye(n))

    def polar(self) -> "Ellipsoid":
        return Ellipsoid(np.linalg.inv(self.M))

    def transform(self, g: GroupElem) -> "Ellipsoid":
        g_inv = np.linalg.inv(g.mat)
        return Ellipsoid(g_inv.T @ self.M @ g_inv)

    def support(self, u: Any) -> float:
        """h_E(u) = sqrt(u^T M^{-1} u)."""
        u = np.asarray(u, dtype=float)
        return float(np.sqrt(u @ np.linalg.solve(self.M, u)))

    def log_volume(self) -> float:
        """log(vol E / vol B^n) = -1/2 log det M."""
        sign, logdet = np.linalg.slogdet(self.M)
        return float(-0.5 * logdet)

    def sqrt_factor(self) -> np.ndarray:
        """L = M^{-1/2}, so that E = L B^n."""
        w, V = np.linalg.eigh(self.M)
        return (V / np.sqrt(w)) @ V.T

    def to_dict(self) -> Dict[str, Any]:
        return {"M": self.M.tolist()}


@dataclass(frozen=True, eq=False)
class MveeReport:
    """
    Diagnostics of a centred minimum-volume enclosing ellipsoid solve.

    weights are nonnegative and sum to 1 over the input points; every point
    satisfies x^T M x <= 1 + epsilon (in fact <= 1 after the post-hoc rescale).
    """

    ellipsoid: Ellipsoid
    weights: np.ndarray
    epsilon: float
    iterations: int
    log_det_history: Tuple[float, ...] = ()

    def __post_init__(self):
        weights = _frozen_array(self.weights, 1)
        if np.any(weights < -1e-15):
            raise ValueError("weights must be nonnegative")
        if abs(float(weights.sum()) - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {weights.sum()!r}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "log_det_history", tuple(self.log_det_history))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ellipsoid": self.ellipsoid.to_dict(),
            "weights": self.weights.tolist(),
            "epsilon": self.epsilon,
            "iterations": self.iterations,
        }


# ============================================================================
# Coset model of GL(n)/O(n)
# ============================================================================

@dataclass(frozen=True, eq=False)
class PosDef:
    """
    Symmetric positive-definite matrix P, the canonical representative of the
    coset gO(n) through the polar decomposition g = P O.
    """

    P: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", _symmetric_pd(self.P, "PD matrix"))

    @property
    def n(self) -> int:
        return int(self.P.shape[0])

    def as_group_elem(self) -> GroupElem:
        return GroupElem(self.P)

    def inverse(self) -> GroupElem:
        return GroupElem(np.linalg.inv(self.P))

    def distance(self, other: "PosDef") -> float:
        """Frobenius distance between coset representatives."""
        return float(np.linalg.norm(self.P - other.P))

    def to_rows(self) -> List[List[float]]:
        return self.P.tolist()
