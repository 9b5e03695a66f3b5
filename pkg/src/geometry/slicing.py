"""
Slicing maps of the global O(n)-slices J(n) and L(n) of B(n).

GL(n)/O(n) is modelled by positive-definite matrices through the polar
decomposition g = P O. A body A = g s with s in J(n) has john(A) = g B^n,
whose matrix is (g g^T)^{-1}; hence the slicing map is

    f_J(A) = M_{j(A)}^{-1/2} = (g g^T)^{1/2} = P.

The same construction with l(A) gives f_L and the Loewner position.
"""

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm, polar

from models.errors import DimensionMismatch, NotEquivariantOnSlice, SingularMatrix
from models.geometry_models import GroupElem, PosDef, SINGULAR_TOLERANCE, SymBody
from models.report_models import SliceAuditReport
from utils.parallel import parallel_map
from utils.tracing import trace_operation
from .body import act
from .ellipsoid import john, lowner, sym_inv_sqrt
from .sampling import random_orthogonal

SLICE_TOLERANCE = 1e-6
DISJOINTNESS_THRESHOLD = 1e-3
PERTURBATION_STEPS = (1e-2, 1e-3, 1e-4)

Membership = Callable[[SymBody], bool]
Action = Callable[[np.ndarray, np.ndarray], np.ndarray]


# ============================================================================
# Coset model
# ============================================================================

def polar_decompose(g: GroupElem) -> Tuple[PosDef, GroupElem]:
    """
    g = P O with P = (g g^T)^{1/2} positive definite and O orthogonal.

    P depends only on the coset g O(n).

    Raises:
        SingularMatrix: if g is numerically singular
    """
    if abs(np.linalg.det(g.mat)) <= SINGULAR_TOLERANCE:
        raise SingularMatrix("cannot decompose a singular matrix")
    orthogonal, positive = polar(g.mat, side="left")
    return PosDef(0.5 * (positive + positive.T)), GroupElem(orthogonal)


# ============================================================================
# Slicing maps and positions
# ============================================================================

def slicing_map_john(A: SymBody, eps: Optional[float] = None) -> PosDef:
    """f_J(A) = M^{-1/2} where j(A) = {x : x^T M x <= 1}."""
    return PosDef(sym_inv_sqrt(john(A, eps).M))


def slicing_map_lowner(A: SymBody, eps: Optional[float] = None) -> PosDef:
    """f_L(A) = M^{-1/2} where l(A) = {x : x^T M x <= 1}."""
    return PosDef(sym_inv_sqrt(lowner(A, eps).M))


def john_position(A: SymBody, eps: Optional[float] = None) -> SymBody:
    """f_J(A)^{-1} A: the representative of A's orbit whose John ellipsoid is B^n."""
    return act(slicing_map_john(A, eps).inverse(), A)


def lowner_position(A: SymBody, eps: Optional[float] = None) -> SymBody:
    """f_L(A)^{-1} A: the representative whose Loewner ellipsoid is B^n."""
    return act(slicing_map_lowner(A, eps).inverse(), A)


def john_residual(A: SymBody, eps: Optional[float] = None) -> float:
    """||M_{j(A)} - I||_F."""
    return float(np.linalg.norm(john(A, eps).M - np.eye(A.n)))


def lowner_residual(A: SymBody, eps: Optional[float] = None) -> float:
    """||M_{l(A)} - I||_F."""
    return float(np.linalg.norm(lowner(A, eps).M - np.eye(A.n)))


def in_john_slice(A: SymBody, eps: Optional[float] = None, tol: float = SLICE_TOLERANCE) -> bool:
    """Membership in J(n): ||M_{j(A)} - I||_F <= tol."""
    return john_residual(A, eps) <= tol


def in_lowner_slice(A: SymBody, eps: Optional[float] = None, tol: float = SLICE_TOLERANCE) -> bool:
    """Membership in L(n): ||M_{l(A)} - I||_F <= tol."""
    return lowner_residual(A, eps) <= tol


def slice_from_map(
    f: Callable[[SymBody], PosDef],
    tol: float = SLICE_TOLERANCE,
) -> Membership:
    """
    Membership predicate of S_f = f^{-1}(I) for an equivariant f: B(n) -> PD(n).

    slice_from_map(slicing_map_john) is the J(n) membership test.
    """
    def membership(A: SymBody) -> bool:
        return float(np.linalg.norm(f(A).P - np.eye(A.n))) <= tol
    return membership


# ============================================================================
# Slice axiom audit
# ============================================================================

def _perturbations(n: int, rng: np.random.Generator) -> List[GroupElem]:
    """Group elements converging to I: rotations exp(dK) and stretches I + dE."""
    skew = rng.standard_normal((n, n))
    skew = skew - skew.T
    sym = rng.standard_normal((n, n))
    sym = 0.5 * (sym + sym.T)
    steps = []
    for delta in PERTURBATION_STEPS:
        steps.append(GroupElem(expm(delta * skew)))
    for delta in PERTURBATION_STEPS:
        steps.append(GroupElem(np.eye(n) + delta * sym))
    return steps


@trace_operation("slice_audit")
def check_slice_axioms(
    membership: Membership,
    samples: Sequence[SymBody],
    group_samples: Sequence[GroupElem],
    normalizer: Optional[Callable[[SymBody], SymBody]] = john_position,
    disjointness_threshold: float = DISJOINTNESS_THRESHOLD,
    workers: Optional[int] = None,
    seed: int = 42,
) -> SliceAuditReport:
    """
    Audit a membership predicate against the four slice axioms on samples.

    (1) o s in S for every orthogonal o (given, or the orthogonal factor of
        a given g) and member s.
    (3) for g whose PD part P has ||P - I||_F > threshold, g s is not in S;
        each violation is recorded as (g, ||P - I||_F).
    (2) proxy: when the tail of a sampled sequence stays in S, its limit is
        in S. Sequences are rotations exp(dK) s converging to s and, with a
        normalizer, normalizer((I + dE) s) converging to normalizer(s).
    (4) proxy: the sample and its small perturbations are saturated, i.e.
        the normalizer maps them into S. Skipped when normalizer is None.
    """
    samples = list(samples)
    group_samples = list(group_samples)
    if not samples:
        return SliceAuditReport(h_invariant=True)

    n = samples[0].n
    for g in group_samples:
        if g.n != n:
            raise DimensionMismatch(g.n, n, "group samples and bodies")

    orthogonal: List[GroupElem] = []
    stretching: List[Tuple[GroupElem, float]] = []
    for g in group_samples:
        if g.is_orthogonal:
            orthogonal.append(g)
            continue
        P, O = polar_decompose(g)
        orthogonal.append(O)
        violation = float(np.linalg.norm(P.P - np.eye(n)))
        if violation > disjointness_threshold:
            stretching.append((g, violation))

    rng = np.random.default_rng(seed)
    perturbation_sets = [_perturbations(n, rng) for _ in samples]

    def audit_one(index: int):
        s = samples[index]
        member = membership(s)
        h_ok = True
        witnesses: List[Tuple[GroupElem, float]] = []
        if member:
            h_ok = all(membership(act(o, s)) for o in orthogonal)
            for g, violation in stretching:
                if membership(act(g, s)):
                    witnesses.append((g, violation))

        perturbed = perturbation_sets[index]
        half = len(PERTURBATION_STEPS)
        sequences = [(member, [act(g, s) for g in perturbed[:half]])]
        open_ok = True
        if normalizer is not None:
            anchor = normalizer(s)
            anchor_in = membership(anchor)
            normalized = [normalizer(act(g, s)) for g in perturbed[half:]]
            sequences.append((anchor_in, normalized))
            open_ok = anchor_in and membership(normalized[-1])

        closed_ok = True
        for limit_in, sequence in sequences:
            tail_in = all(membership(x) for x in sequence[-2:])
            if tail_in and not limit_in:
                closed_ok = False
        return member, h_ok, witnesses, closed_ok, open_ok

    results = parallel_map(audit_one, range(len(samples)), workers)

    report = SliceAuditReport(h_invariant=True)
    for member, h_ok, witnesses, closed_ok, open_ok in results:
        if member:
            report.members_checked += 1
            report.pairs_checked += len(orthogonal) + len(stretching)
        report.h_invariant = report.h_invariant and h_ok
        report.disjointness_witnesses.extend(witnesses)
        report.closedness_proxy = report.closedness_proxy and closed_ok
        report.saturation_open_proxy = report.saturation_open_proxy and open_ok
    return report


# ============================================================================
# Equivariant extension
# ============================================================================

def vector_action(g: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Defining action on R^n: y -> g y."""
    return np.asarray(g) @ np.asarray(y)


def quadratic_form_action(g: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Action on ellipsoid matrices: M -> g^{-T} M g^{-1} (shape preserved)."""
    g = np.asarray(g)
    y = np.asarray(y)
    n = g.shape[0]
    g_inv = np.linalg.inv(g)
    return (g_inv.T @ y.reshape(n, n) @ g_inv).reshape(y.shape)


def pd_action(g: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Congruence action on symmetric matrices: Q -> g Q g^T (shape preserved)."""
    g = np.asarray(g)
    y = np.asarray(y)
    n = g.shape[0]
    return (g @ y.reshape(n, n) @ g.T).reshape(y.shape)


def extend_equivariant(
    f_on_S: Callable[[SymBody], np.ndarray],
    A: SymBody,
    action: Action,
    eps: Optional[float] = None,
    spot_checks: int = 3,
    tol: float = 1e-5,
    seed: int = 0,
) -> np.ndarray:
    """
    Extend an O(n)-equivariant map on J(n) to all of B(n).

    F(A) = g . f_on_S(g^{-1} A) with g = f_J(A). Well-definedness is exactly
    O(n)-equivariance of f_on_S on J(n), which is spot-checked on the slice
    point g^{-1} A with seeded random orthogonal o (relative residual).

    Raises:
        NotEquivariantOnSlice: if f_on_S(o s) and o . f_on_S(s) differ beyond tol
    """
    P = slicing_map_john(A, eps)
    s = act(P.inverse(), A)
    value = np.asarray(f_on_S(s), dtype=float)

    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.linalg.norm(value)))
    for _ in range(spot_checks):
        o = random_orthogonal(A.n, rng)
        lhs = np.asarray(f_on_S(act(o, s)), dtype=float)
        rhs = action(o.mat, value)
        residual = float(np.linalg.norm(lhs - rhs)) / scale
        if residual > tol:
            raise NotEquivariantOnSlice(
                f"f_on_S is not O({A.n})-equivariant on the slice (residual {residual:.3e})",
                residual,
            )

    return action(P.P, value)
