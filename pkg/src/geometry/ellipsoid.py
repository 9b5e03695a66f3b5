"""
Centred minimum-volume enclosing ellipsoids and the John/Loewner ellipsoids.

For a symmetric point set {+/-x_i} the minimum-volume enclosing ellipsoid is
centred, and its dual problem is

    maximize log det(sum_i p_i x_i x_i^T)  over the simplex.

mvee_centered solves the dual by Frank-Wolfe with exact line search
(Khachiyan's step toward the most violated point), with away steps that move
weight off the least useful support point so the iteration converges
linearly. Through polarity:

    l(A) = mvee(vertices of A)
    j(A) = mvee(facet functionals of A)^polar      (M -> M^{-1})
"""

from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from models.errors import NoConvergence, NotFullDimensional
from models.geometry_models import EIGENVALUE_FLOOR, Ellipsoid, MveeReport, SymBody
from models.report_models import ContainmentBounds, LownerBounds
from utils.solver_config import default_max_iterations, get_setting, SettingKey
from utils.tracing import set_trace_metadata, trace_operation
from .body import facets, vertices

MAX_EPS = 1e-2


# ============================================================================
# Symmetric matrix functions
# ============================================================================

def sym_power(M: np.ndarray, power: float) -> np.ndarray:
    """M^power for symmetric PD M via eigendecomposition with eigenvalue floor."""
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    w = np.maximum(w, EIGENVALUE_FLOOR)
    result = (V * w ** power) @ V.T
    return 0.5 * (result + result.T)


def sym_sqrt(M: np.ndarray) -> np.ndarray:
    return sym_power(M, 0.5)


def sym_inv_sqrt(M: np.ndarray) -> np.ndarray:
    return sym_power(M, -0.5)


# ============================================================================
# Solver
# ============================================================================

def _resolve_eps(eps: Optional[float]) -> float:
    eps = float(get_setting(SettingKey.EPS)) if eps is None else float(eps)
    if not 0.0 < eps <= MAX_EPS:
        raise ValueError(f"eps must lie in (0, {MAX_EPS}], got {eps}")
    return eps


@trace_operation("mvee")
def mvee_centered(
    points: np.ndarray,
    eps: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> MveeReport:
    """
    Minimum-volume centred ellipsoid containing {+/-points}.

    Iterates on the weights p with Lambda(p) = sum p_i x_i x_i^T and
    kappa_i = x_i^T Lambda^{-1} x_i. Stops when max kappa <= n(1+eps) and
    every support point has kappa >= n(1-eps). The returned M is
    Lambda^{-1} / max kappa, so every point satisfies x^T M x <= 1; the volume
    is within (1+eps)^{n/2} of optimal.

    Raises:
        NotFullDimensional: if the points do not span R^n
        NoConvergence: after max_iter iterations (default 10^5 * n)
    """
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    X = X[np.any(X != 0.0, axis=1)]
    k, n = X.shape

    if k < n or np.linalg.matrix_rank(X) < n:
        raise NotFullDimensional(f"{k} points do not span R^{n}")

    eps = _resolve_eps(eps)
    max_iter = default_max_iterations(n) if max_iter is None else int(max_iter)

    u = np.full(k, 1.0 / k)
    history = []
    iterations = 0

    while True:
        Lam = X.T @ (u[:, None] * X)
        factor = cho_factor(Lam)
        solved = cho_solve(factor, X.T).T
        kappa = np.einsum("ij,ij->i", X, solved)
        history.append(float(2.0 * np.sum(np.log(np.diag(factor[0])))))

        toward = int(np.argmax(kappa))
        k_max = float(kappa[toward])
        support_idx = np.flatnonzero(u > 0.0)
        away = int(support_idx[np.argmin(kappa[support_idx])])
        k_min = float(kappa[away])

        if k_max <= n * (1.0 + eps) and k_min >= n * (1.0 - eps):
            break

        if iterations >= max_iter:
            partial = _build_report(Lam, u, kappa, n, iterations, history)
            raise NoConvergence(
                f"MVEE did not reach eps={eps:g} in {max_iter} iterations "
                f"(achieved {partial.epsilon:.3e})",
                report=partial,
            )

        if k_max - n >= n - k_min or u[away] >= 1.0:
            beta = (k_max / n - 1.0) / (k_max - 1.0)
            u *= 1.0 - beta
            u[toward] += beta
        else:
            lower = -u[away] / (1.0 - u[away])
            beta = (k_min / n - 1.0) / (k_min - 1.0) if k_min > 1.0 else lower
            if beta <= lower:
                # drop step: the point leaves the support set
                u *= 1.0 - lower
                u[away] = 0.0
            else:
                u *= 1.0 - beta
                u[away] += beta

        u = np.maximum(u, 0.0)
        u /= u.sum()
        iterations += 1

    report = _build_report(Lam, u, kappa, n, iterations, history)
    set_trace_metadata("mvee_last_iterations", iterations)
    return report


def _build_report(Lam, u, kappa, n, iterations, history) -> MveeReport:
    k_max = float(np.max(kappa))
    M = np.linalg.inv(Lam) / k_max
    return MveeReport(
        ellipsoid=Ellipsoid(0.5 * (M + M.T)),
        weights=u / u.sum(),
        epsilon=max(0.0, k_max / n - 1.0),
        iterations=iterations,
        log_det_history=tuple(history),
    )


# ============================================================================
# John and Loewner ellipsoids
# ============================================================================

def lowner(A: SymBody, eps: Optional[float] = None) -> Ellipsoid:
    """
    Minimal-volume ellipsoid l(A) containing A.

    V-rep: the centred MVEE of the generators. H-rep: the MVEE of the
    vertices, which is the polarity identity l(A) = j(A°)°.
    """
    return mvee_centered(vertices(A), eps).ellipsoid


def john(A: SymBody, eps: Optional[float] = None) -> Ellipsoid:
    """
    Maximal-volume ellipsoid j(A) contained in A.

    With E_N the MVEE of the facet functionals of A (for H-rep these are the
    generators themselves), j(A) = E_N° has matrix N^{-1}.
    """
    return mvee_centered(facets(A), eps).ellipsoid.polar()


def containment_bounds(A: SymBody, eps: Optional[float] = None) -> ContainmentBounds:
    """
    j(A) and the smallest t with A contained in t * j(A).

    t is exact: the largest j(A)-norm of a vertex. For A in John position
    t <= sqrt(n)(1+eps).
    """
    inner = john(A, eps)
    V = vertices(A)
    t = float(np.sqrt(np.max(np.einsum("ij,jk,ik->i", V, inner.M, V))))
    return ContainmentBounds(inner=inner, outer_factor=t)


def lowner_bounds(A: SymBody, eps: Optional[float] = None) -> LownerBounds:
    """
    l(A) and the largest s with s * l(A) contained in A.

    s = 1 / max_f h_{l(A)}(f) over facet functionals f. For A in Loewner
    position s >= (1/sqrt(n))(1-eps).
    """
    outer = lowner(A, eps)
    F = facets(A)
    M_inv = np.linalg.inv(outer.M)
    h = np.sqrt(np.einsum("ij,jk,ik->i", F, M_inv, F))
    return LownerBounds(outer=outer, inner_factor=float(1.0 / np.max(h)))


def ellipsoid_distance(E1: Ellipsoid, E2: Ellipsoid) -> float:
    """Frobenius distance between the defining matrices."""
    return float(np.linalg.norm(E1.M - E2.M))
