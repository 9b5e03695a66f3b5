"""
Orbit space B(n)/GL(n), modelled on the slice J(n) modulo O(n).

Every orbit is carried by its John-position bodies, which form one O(n)-orbit,
so distances between GL(n)-orbits become minimizations over O(n):

- quotient_distance: min over o of d_H(A', o B') for John positions A', B'
- bm_distance: the multiplicative gauge ratio, minimized the same way
- gl_orbit_distance_oracle: a direct GL(2) search, independent of slices

The O(n) search works on support profiles over a direction grid. In n = 2
rotating by one grid step is a cyclic shift of the profile and the reflection
across the first axis reverses it, so every grid element of O(2) is scanned
exactly; the best one is refined by bounded scalar search. For n >= 3
Nelder-Mead descends on exp(skew) from the best alignments of the two
bodies' gauge frames and from seeded random restarts.
"""

import functools
import itertools
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize, minimize_scalar

from models.errors import DimensionMismatch
from models.geometry_models import GroupElem, SymBody
from models.report_models import NetReport, OrbitPoint
from utils.parallel import parallel_map
from utils.solver_config import get_setting, SettingKey
from utils.tracing import set_trace_metadata, trace_operation
from .body import act, hausdorff, support_function, vertices
from .sampling import random_orthogonal, rotation2, sphere_directions
from .slicing import john_residual, slicing_map_john, SLICE_TOLERANCE

DEFAULT_ANGLES = 4096
DEFAULT_RESTARTS = 64
ALIGNED_STARTS = 4
NET_ANGLES = 256
NET_RESTARTS = 8

GAUGE_TIE_TOLERANCE = 1e-6
GAUGE_KEY_TOLERANCE = 1e-6
GAUGE_AMBIGUITY_WINDOW = 1e-3
MAX_REPOSITION = 3

REFINE_SCALE = 0.1
RESTART_FACTORS = (0.05, 0.01, 0.002)
RESTART_CANDIDATES = 4

FLIP = np.diag([1.0, -1.0])


class _Criterion(NamedTuple):
    """Profile transform and the reduction compared across group elements."""
    transform: Callable[[np.ndarray], np.ndarray]
    reduce: Callable[[np.ndarray, np.ndarray], np.ndarray]


def _sup_gap(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.max(np.abs(a - b), axis=-1)


def _log_ratio_span(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.max(a - b, axis=-1) + np.max(b - a, axis=-1)


HAUSDORFF = _Criterion(lambda h: h, _sup_gap)
BANACH_MAZUR = _Criterion(np.log, _log_ratio_span)


# ============================================================================
# O(n) search
# ============================================================================

def _shift_scores(ta: np.ndarray, tb: np.ndarray, reduce, chunk: int = 256) -> np.ndarray:
    """reduce(ta, roll(tb, j)) for every cyclic shift j."""
    m = ta.size
    i = np.arange(m)
    scores = np.empty(m)
    for start in range(0, m, chunk):
        js = np.arange(start, min(m, start + chunk))
        idx = (i[None, :] - js[:, None]) % m
        scores[start:start + js.size] = reduce(ta[None, :], tb[idx])
    return scores


def _search_o2(ta: np.ndarray, B: SymBody, dirs: np.ndarray, criterion: _Criterion, refine: bool) -> float:
    m = len(dirs)
    step = 2.0 * np.pi / m
    pb = support_function(B, dirs)
    best = np.inf
    for base, profile in ((np.eye(2), pb), (FLIP, pb[(-np.arange(m)) % m])):
        scores = _shift_scores(ta, criterion.transform(profile), criterion.reduce)
        j = int(np.argmin(scores))
        best = min(best, float(scores[j]))
        if not refine or scores[j] == 0.0:
            continue

        def objective(phi: float, base=base) -> float:
            o = rotation2(phi).mat @ base
            return float(criterion.reduce(ta, criterion.transform(support_function(B, dirs @ o))))

        result = minimize_scalar(
            objective,
            bounds=(j * step - step, j * step + step),
            method="bounded",
            options={"xatol": 1e-10},
        )
        best = min(best, float(result.fun))
    return best


def _skew(w: np.ndarray, n: int) -> np.ndarray:
    K = np.zeros((n, n))
    K[np.triu_indices(n, 1)] = w
    return K - K.T


def _search_on(
    ta: np.ndarray,
    B: SymBody,
    dirs: np.ndarray,
    criterion: _Criterion,
    restarts: int,
    seed: int,
    workers: Optional[int],
    aligned: Sequence[np.ndarray] = (),
) -> float:
    n = B.n
    dim = n * (n - 1) // 2
    rng = np.random.default_rng(seed)
    starts = list(aligned) + [np.eye(n)]
    starts += [random_orthogonal(n, rng).mat for _ in range(max(0, restarts - 1))]
    simplex = np.vstack([np.zeros(dim), 0.2 * np.eye(dim)])

    def descend(o0: np.ndarray) -> float:
        def objective(w: np.ndarray) -> float:
            o = o0 @ expm(_skew(w, n))
            return float(criterion.reduce(ta, criterion.transform(support_function(B, dirs @ o))))

        start_value = objective(np.zeros(dim))
        if start_value == 0.0:
            return 0.0
        result = minimize(
            objective,
            np.zeros(dim),
            method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": 1e-9, "fatol": 1e-12, "maxiter": 200 * dim},
        )
        return min(start_value, float(result.fun))

    return min(parallel_map(descend, starts, workers))


def _orbit_search(
    JA: SymBody,
    JB: SymBody,
    criterion: _Criterion,
    n_angles: int,
    restarts: int,
    seed: Optional[int],
    workers: Optional[int],
    refine: bool = True,
) -> float:
    """min over o in O(n) of the criterion between profiles of JA and o JB."""
    if JA.n != JB.n:
        raise DimensionMismatch(JA.n, JB.n)
    n = JA.n
    dirs = sphere_directions(n, n_angles)
    ta = criterion.transform(support_function(JA, dirs))
    if n == 1:
        return float(criterion.reduce(ta, criterion.transform(support_function(JB, dirs))))
    if n == 2:
        return _search_o2(ta, JB, dirs, criterion, refine)
    seed = int(get_setting(SettingKey.SEED)) if seed is None else int(seed)
    aligned = _frame_alignments(ta, JA, JB, dirs, criterion)
    return _search_on(ta, JB, dirs, criterion, restarts, seed, workers, aligned)


def _frame_alignments(
    ta: np.ndarray,
    JA: SymBody,
    JB: SymBody,
    dirs: np.ndarray,
    criterion: _Criterion,
    keep: int = ALIGNED_STARTS,
) -> List[np.ndarray]:
    """
    Best o = F_A^T F_B over pairs of gauge frames, as descent starts.

    When JB = r JA for orthogonal r, the frames of JB are those of JA times
    r^T, so the matching pair gives o JB = JA exactly.
    """
    candidates = [fa.T @ fb for fa in _gauge_frames(JA) for fb in _gauge_frames(JB)]
    scores = [
        float(criterion.reduce(ta, criterion.transform(support_function(JB, dirs @ o))))
        for o in candidates
    ]
    order = np.argsort(scores, kind="stable")[:keep]
    return [candidates[i] for i in order]


def _john_positioned(A: SymBody, eps: Optional[float] = None) -> Tuple[SymBody, np.ndarray, float]:
    """
    John position J with A = lift J, re-positioning while the residual
    exceeds the slice tolerance.
    """
    lift = np.eye(A.n)
    J = A
    residual = np.inf
    for _ in range(MAX_REPOSITION):
        P = slicing_map_john(J, eps)
        J = act(P.inverse(), J)
        lift = lift @ P.P
        residual = john_residual(J, eps)
        if residual <= SLICE_TOLERANCE:
            break
    return J, lift, residual


# ============================================================================
# Distances between orbits
# ============================================================================

@trace_operation("quotient_distance")
def quotient_distance(
    A: SymBody,
    B: SymBody,
    n_angles: int = DEFAULT_ANGLES,
    restarts: int = DEFAULT_RESTARTS,
    eps: Optional[float] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> float:
    """
    Distance between [A] and [B] in J(n)/O(n).

    min over o in O(n) of d_H(john_position(A), o john_position(B)), with
    the Hausdorff distance sampled on the direction grid. Zero exactly when
    the orbits agree, up to solver and refinement tolerance.

    Both bodies enter through their canonical representatives, so replacing
    A by gA changes the inputs only by rounding.

    Raises:
        DimensionMismatch: if A and B live in different dimensions
    """
    if A.n != B.n:
        raise DimensionMismatch(A.n, B.n)
    JA = canonical_representative(A, eps)[0].rep
    JB = canonical_representative(B, eps)[0].rep
    return max(0.0, _orbit_search(JA, JB, HAUSDORFF, n_angles, restarts, seed, workers))


def bm_distance(
    A: SymBody,
    B: SymBody,
    n_angles: int = DEFAULT_ANGLES,
    restarts: int = DEFAULT_RESTARTS,
    eps: Optional[float] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> float:
    """
    Banach-Mazur style distance along John positions.

    min over o of t(A', o B') with t(P, Q) = max(h_P / h_Q) * max(h_Q / h_P)
    on the direction grid: the smallest t with Q inside s P inside t Q for
    some s > 0. Always >= 1; scale-invariant in either argument.

    Raises:
        DimensionMismatch: if A and B live in different dimensions
    """
    if A.n != B.n:
        raise DimensionMismatch(A.n, B.n)
    JA = canonical_representative(A, eps)[0].rep
    JB = canonical_representative(B, eps)[0].rep
    log_t = _orbit_search(JA, JB, BANACH_MAZUR, n_angles, restarts, seed, workers)
    return max(1.0, float(np.exp(log_t)))


def _svd_elements(params: np.ndarray) -> np.ndarray:
    """R(alpha) diag(e^s1, sign e^s2) R(beta) for rows (alpha, beta, s1, s2, sign)."""
    alpha, beta, s1, s2, sign = np.atleast_2d(params).T
    ca, sa, cb, sb = np.cos(alpha), np.sin(alpha), np.cos(beta), np.sin(beta)
    Ra = np.stack([np.stack([ca, -sa], -1), np.stack([sa, ca], -1)], -2)
    Rb = np.stack([np.stack([cb, -sb], -1), np.stack([sb, cb], -1)], -2)
    d = np.stack([np.exp(s1), sign * np.exp(s2)], -1)
    return (Ra * d[:, None, :]) @ Rb


def _svd_element(alpha: float, beta: float, s1: float, s2: float, sign: float) -> np.ndarray:
    return _svd_elements(np.array([alpha, beta, s1, s2, sign], dtype=float))[0]


def _grid_gaps(G: np.ndarray, V: np.ndarray, dirs: np.ndarray, hB: np.ndarray, budget: int = 4_000_000) -> np.ndarray:
    """max_u |h_{gA}(u) - h_B(u)| for every g in the stack G, with h_{gA}(u) = max_i |<u, g v_i>|."""
    chunk = max(1, budget // (len(dirs) * len(V)))
    out = np.empty(len(G))
    for start in range(0, len(G), chunk):
        W = G[start:start + chunk] @ V.T
        out[start:start + chunk] = np.max(np.abs(np.max(np.abs(dirs @ W), axis=-1) - hB), axis=-1)
    return out


def _nelder_mead_gl(gap: Callable[[np.ndarray], float], g0: np.ndarray, scale: float) -> Tuple[float, np.ndarray]:
    x0 = g0.ravel()
    simplex = np.vstack([x0, x0 + scale * np.eye(4)])
    result = minimize(
        gap,
        x0,
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
    )
    return float(result.fun), result.x.reshape(2, 2)


def gl_orbit_distance_oracle(
    A: SymBody,
    B: SymBody,
    angle_steps: int = 36,
    log_steps: int = 17,
    log_range: float = 2.0,
    top: int = 64,
    n_angles: int = 256,
    scan_angles: int = 64,
    workers: Optional[int] = None,
) -> float:
    """
    Upper bound on inf over g in GL(2) of d_H(gA, B).

    g = R(alpha) diag(e^s1, +/-e^s2) R(beta) is scanned on a grid (angles in
    [0, pi), log-singular values in [-log_range, log_range]) against a coarse
    direction grid. The best `top` grid points are refined by Nelder-Mead in
    the entries of g, the best refinements are restarted with shrinking
    simplices, and the winner is scored with the full Hausdorff distance.
    """
    if A.n != 2 or B.n != 2:
        raise ValueError(f"the GL orbit oracle works in dimension 2, got {A.n} and {B.n}")

    V = vertices(A)
    scan_dirs = sphere_directions(2, scan_angles)
    angles = np.pi * np.arange(angle_steps) / angle_steps
    logs = np.linspace(-log_range, log_range, log_steps)
    mesh = np.meshgrid(angles, angles, logs, logs, np.array([1.0, -1.0]), indexing="ij")
    G = _svd_elements(np.column_stack([axis.ravel() for axis in mesh]))
    scores = _grid_gaps(G, V, scan_dirs, support_function(B, scan_dirs))
    order = np.argsort(scores, kind="stable")[:top]

    dirs = sphere_directions(2, n_angles)
    hB = support_function(B, dirs)

    def gap(x: np.ndarray) -> float:
        W = x.reshape(2, 2) @ V.T
        return float(np.max(np.abs(np.max(np.abs(dirs @ W), axis=1) - hB)))

    refined = parallel_map(
        lambda i: _nelder_mead_gl(gap, G[i], REFINE_SCALE * np.linalg.norm(G[i], 2)),
        [int(i) for i in order],
        workers,
    )
    refined.sort(key=lambda item: item[0])

    def restart(item: Tuple[float, np.ndarray]) -> Tuple[float, np.ndarray]:
        best = item
        for factor in RESTART_FACTORS:
            if best[0] == 0.0:
                break
            candidate = _nelder_mead_gl(gap, best[1], factor * np.linalg.norm(best[1], 2))
            if candidate[0] < best[0]:
                best = candidate
        return best

    _, g = min(parallel_map(restart, refined[:RESTART_CANDIDATES], workers), key=lambda item: item[0])
    return hausdorff(act(GroupElem(g), A), B)


def pairwise_distances(
    bodies: Sequence[SymBody],
    metric: Callable[[SymBody, SymBody], float],
    workers: Optional[int] = None,
) -> np.ndarray:
    """Symmetric matrix of metric(bodies[i], bodies[j]) for i < j."""
    count = len(bodies)
    pairs = [(i, j) for i in range(count) for j in range(i + 1, count)]
    values = parallel_map(lambda ij: metric(bodies[ij[0]], bodies[ij[1]]), pairs, workers)
    D = np.zeros((count, count))
    for (i, j), value in zip(pairs, values):
        D[i, j] = D[j, i] = value
    return D


# ============================================================================
# Cross section
# ============================================================================

def _gauge_frames(J: SymBody) -> List[np.ndarray]:
    """
    Orthogonal o aligning J's farthest vertices with the coordinate axes.

    The first axis is a farthest vertex (every near-tie is a candidate); each
    next axis is the vertex with the largest component orthogonal to the
    axes so far. All sign patterns are candidates.
    """
    V = vertices(J)
    norms = np.linalg.norm(V, axis=1)
    top = np.flatnonzero(norms >= np.max(norms) * (1.0 - GAUGE_TIE_TOLERANCE))
    frames = []
    for i in top:
        axes = [V[i] / norms[i]]
        for _ in range(1, J.n):
            Q = np.array(axes)
            resid = V - (V @ Q.T) @ Q
            rn = np.linalg.norm(resid, axis=1)
            k = int(np.argmax(rn))
            axes.append(resid[k] / rn[k])
        base = np.array(axes)
        for signs in itertools.product((1.0, -1.0), repeat=J.n):
            frames.append(np.diag(signs) @ base)
    return frames


def _compare_keys(a: np.ndarray, b: np.ndarray) -> int:
    for x, y in zip(a, b):
        if abs(x - y) > GAUGE_KEY_TOLERANCE:
            return -1 if x < y else 1
    return 0


def canonical_representative(A: SymBody, eps: Optional[float] = None) -> Tuple[OrbitPoint, GroupElem]:
    """
    Canonical slice point of [A] and g with A = g rep.

    The John position is rotated by every candidate gauge frame; the
    candidate with the lexicographically smallest support profile (compared
    with a small tolerance) wins. Near-ties between different candidates set
    gauge_ambiguous.
    """
    J, lift, _ = _john_positioned(A, eps)
    key_dirs = sphere_directions(J.n, 64 if J.n <= 2 else 256)

    frames = _gauge_frames(J)
    keys = [support_function(J, key_dirs @ o) for o in frames]
    order = sorted(range(len(frames)), key=functools.cmp_to_key(lambda i, j: _compare_keys(keys[i], keys[j])))
    best = order[0]

    gaps = [float(np.max(np.abs(keys[i] - keys[best]))) for i in order[1:]]
    ambiguous = any(GAUGE_KEY_TOLERANCE < gap < GAUGE_AMBIGUITY_WINDOW for gap in gaps)

    o = frames[best]
    rep = act(GroupElem(o), J)
    point = OrbitPoint(rep=rep, john_residual=john_residual(rep, eps), gauge_ambiguous=ambiguous)
    return point, GroupElem(lift @ o.T)


def cross_section_from_slice(
    orbits: Sequence[SymBody],
    eps: Optional[float] = None,
    workers: Optional[int] = None,
) -> List[OrbitPoint]:
    """Canonical representative of every body; constant along GL(n)-orbits."""
    points = parallel_map(lambda A: canonical_representative(A, eps)[0], list(orbits), workers)
    set_trace_metadata("gauge_ambiguous", sum(p.gauge_ambiguous for p in points))
    return points


def extend_from_cross_section(
    f_on_C: Callable[[SymBody], np.ndarray],
    A: SymBody,
    action: Callable[[np.ndarray, np.ndarray], np.ndarray],
    eps: Optional[float] = None,
) -> np.ndarray:
    """F(A) = g . f_on_C(c) where c is the canonical representative and A = g c."""
    point, g = canonical_representative(A, eps)
    return action(g.mat, np.asarray(f_on_C(point.rep), dtype=float))


# ============================================================================
# Epsilon nets
# ============================================================================

def _grid_distance_factory(samples: Sequence[SymBody], n_angles: int, restarts: int, seed: int, workers):
    """Distance between John-positioned samples by index, without refinement."""
    n = samples[0].n
    if n != 2:
        return lambda i, j: _orbit_search(samples[i], samples[j], HAUSDORFF, n_angles, restarts, seed, 1)

    m = n_angles
    dirs = sphere_directions(2, m)
    profiles = [support_function(A, dirs) for A in samples]
    reversed_idx = (-np.arange(m)) % m

    def distance(i: int, j: int) -> float:
        pa, pb = profiles[i], profiles[j]
        direct = np.min(_shift_scores(pa, pb, _sup_gap))
        mirrored = np.min(_shift_scores(pa, pb[reversed_idx], _sup_gap))
        return float(min(direct, mirrored))

    return distance


def _greedy_centers(count: int, distance, eps: float, workers) -> Tuple[List[int], np.ndarray]:
    centers: List[int] = []
    nearest = np.zeros(count)
    for i in range(count):
        if not centers:
            centers.append(i)
            continue
        d = min(parallel_map(lambda c: distance(i, c), centers, workers))
        if d > eps:
            centers.append(i)
        else:
            nearest[i] = d
    return centers, nearest


@trace_operation("slice_net")
def slice_net(
    samples: Sequence[SymBody],
    eps: float,
    n_angles: int = NET_ANGLES,
    restarts: int = NET_RESTARTS,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> NetReport:
    """
    Greedy eps-net of John-positioned samples under the quotient distance.

    A sample becomes a center when it is farther than eps from every center
    so far, so centers are pairwise more than eps apart and every sample lies
    within eps of one. Distances use the direction grid without refinement.

    Raises:
        ValueError: if a center is not in John position
    """
    samples = list(samples)
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    if not samples:
        return NetReport(eps=eps, centers=[], coverage_fraction=1.0)

    seed = int(get_setting(SettingKey.SEED)) if seed is None else int(seed)
    distance = _grid_distance_factory(samples, n_angles, restarts, seed, workers)
    centers, nearest = _greedy_centers(len(samples), distance, eps, workers)

    points = [OrbitPoint(rep=samples[c], john_residual=john_residual(samples[c])) for c in centers]
    coverage = float(np.mean(nearest <= eps))
    set_trace_metadata("net_centers", len(centers))
    return NetReport(eps=eps, centers=points, coverage_fraction=coverage, center_indices=centers)


def net_profile(
    samples: Sequence[SymBody],
    eps_values: Sequence[float],
    n_angles: int = NET_ANGLES,
    restarts: int = NET_RESTARTS,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[Tuple[float, int]]:
    """Center counts of the greedy net for each eps, in the given order."""
    samples = list(samples)
    if not samples:
        return [(float(e), 0) for e in eps_values]
    seed = int(get_setting(SettingKey.SEED)) if seed is None else int(seed)
    distance = functools.lru_cache(maxsize=None)(
        _grid_distance_factory(samples, n_angles, restarts, seed, workers)
    )
    profile = []
    for e in eps_values:
        centers, _ = _greedy_centers(len(samples), distance, float(e), workers)
        profile.append((float(e), len(centers)))
    return profile
