"""
Unit tests for the centred MVEE solver and the John/Loewner ellipsoids.

Tests cover:
- mvee_centered on symmetric point sets, KKT residual and monotonicity
- Solver errors (rank deficiency, iteration cap, tolerance range)
- john / lowner on standard bodies and sampled ellipses
- Containment factors, duality, equivariance and the sandwich property
"""

import math
import pytest
import sys
from pathlib import Path

import numpy as np

# Add src to path so we can import
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from geometry.body import act, polar, support_function, to_h_rep
from geometry.ellipsoid import (
    containment_bounds,
    ellipsoid_distance,
    john,
    lowner,
    lowner_bounds,
    mvee_centered,
    sym_inv_sqrt,
    sym_sqrt,
)
from geometry.sampling import (
    ball_body,
    cross_polytope,
    cube,
    ellipsoid_body,
    random_group_element,
    random_symmetric_polytope,
    sphere_directions,
)
from geometry.slicing import john_position
from models import Ellipsoid
from models.errors import NoConvergence, NotFullDimensional


@pytest.fixture
def rng():
    return np.random.default_rng(11)


def relative_error(X, Y):
    return float(np.linalg.norm(X - Y) / np.linalg.norm(Y))


# ============================================================================
# Solver
# ============================================================================

class TestMveeCentered:
    """Test the centred minimum-volume enclosing ellipsoid solver"""

    def test_axis_points_give_unit_disk(self):
        """Test that {+/-e1, +/-e2} give M = I"""
        report = mvee_centered(np.eye(2))
        assert np.allclose(report.ellipsoid.M, np.eye(2), atol=1e-9)

    def test_square_corners_give_radius_sqrt2(self):
        """Test that {(+/-1, +/-1)} give M = I/2"""
        report = mvee_centered(np.array([[1.0, 1.0], [1.0, -1.0]]))
        assert np.allclose(report.ellipsoid.M, np.eye(2) / 2.0, atol=1e-9)

    def test_random_points_contained(self, rng):
        """Test that every point satisfies x^T M x <= 1"""
        X = rng.standard_normal((50, 3))
        report = mvee_centered(X, eps=1e-7)
        values = np.einsum("ij,jk,ik->i", X, report.ellipsoid.M, X)
        assert np.all(values <= 1.0 + 1e-12)
        assert report.epsilon <= 1e-7

    def test_kkt_condition(self, rng):
        """Test n * M * sum p_i x_i x_i^T = I on the optimal weights"""
        X = rng.standard_normal((50, 3))
        report = mvee_centered(X, eps=1e-7)
        Lam = X.T @ (report.weights[:, None] * X)
        assert np.allclose(3.0 * report.ellipsoid.M @ Lam, np.eye(3), atol=1e-5)

    def test_support_points_on_boundary(self, rng):
        """Test that weighted points lie on the ellipsoid boundary"""
        X = rng.standard_normal((30, 2))
        report = mvee_centered(X, eps=1e-7)
        values = np.einsum("ij,jk,ik->i", X, report.ellipsoid.M, X)
        support_points = report.weights > 1e-9
        assert np.all(values[support_points] >= 1.0 - 1e-6)

    def test_weights_are_a_distribution(self, rng):
        """Test that the weights are nonnegative and sum to 1"""
        report = mvee_centered(rng.standard_normal((20, 2)))
        assert np.all(report.weights >= 0.0)
        assert report.weights.sum() == pytest.approx(1.0)

    def test_objective_monotone(self, rng):
        """Test that log det Lambda never decreases"""
        report = mvee_centered(rng.standard_normal((40, 3)), eps=1e-7)
        history = np.array(report.log_det_history)
        assert len(history) == report.iterations + 1
        assert np.all(np.diff(history) >= -1e-10)

    def test_zero_rows_ignored(self):
        """Test that zero points do not affect the ellipsoid"""
        report = mvee_centered(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]]))
        assert np.allclose(report.ellipsoid.M, np.eye(2), atol=1e-9)

    def test_rank_deficient_fails(self):
        """Test that collinear points are rejected"""
        with pytest.raises(NotFullDimensional):
            mvee_centered(np.array([[1.0, 1.0], [2.0, 2.0], [-3.0, -3.0]]))

    def test_iteration_cap(self):
        """Test that the iteration cap raises with a partial report"""
        points = np.array([[1.0, 0.0], [0.0, 1.0], [0.1, 0.1]])
        with pytest.raises(NoConvergence) as excinfo:
            mvee_centered(points, eps=1e-7, max_iter=0)
        report = excinfo.value.report
        assert report is not None
        assert report.iterations == 0
        assert report.epsilon > 1e-7

    @pytest.mark.parametrize("eps", [0.0, 0.5, -1e-3])
    def test_eps_out_of_range(self, eps):
        """Test that eps must lie in (0, 1e-2]"""
        with pytest.raises(ValueError, match="eps"):
            mvee_centered(np.eye(2), eps=eps)


# ============================================================================
# John and Loewner ellipsoids
# ============================================================================

class TestJohnLowner:
    """Test the John and Loewner ellipsoids"""

    def test_square(self):
        """Test j(square) = B and l(square) = sqrt(2) B"""
        square = cube(2)
        assert np.allclose(john(square).M, np.eye(2), atol=1e-9)
        assert np.allclose(lowner(square).M, np.eye(2) / 2.0, atol=1e-9)

    def test_cross_polytope(self):
        """Test j(diamond) = B / sqrt(2) and l(diamond) = B"""
        diamond = cross_polytope(2)
        assert np.allclose(john(diamond).M, 2.0 * np.eye(2), atol=1e-9)
        assert np.allclose(lowner(diamond).M, np.eye(2), atol=1e-9)

    def test_sampled_ellipse(self):
        """Test that a finely sampled ellipse is its own John and Loewner ellipsoid"""
        M = np.array([[0.25, 0.1], [0.1, 1.0]])
        body = ellipsoid_body(M, m=360)
        assert np.allclose(john(body).M, M, atol=1e-3)
        assert np.allclose(lowner(body).M, M, atol=1e-3)

    def test_duality(self, rng):
        """Test john(polar(A)) = lowner(A)^polar"""
        body = random_symmetric_polytope(3, rng)
        left = john(polar(body)).M
        right = np.linalg.inv(lowner(body).M)
        assert relative_error(left, right) <= 1e-9

    def test_equivariance(self, rng):
        """Test john(gA) = g . john(A)"""
        for _ in range(5):
            body = random_symmetric_polytope(2, rng)
            g = random_group_element(2, rng)
            left = john(act(g, body)).M
            right = john(body).transform(g).M
            assert relative_error(left, right) <= 1e-5

    def test_sandwich(self, rng):
        """Test j(A) in A in l(A) on sampled directions"""
        body = random_symmetric_polytope(3, rng)
        dirs = sphere_directions(3, 400)
        hA = support_function(body, dirs)
        inner = john(body)
        outer = lowner(body)
        h_inner = np.array([inner.support(u) for u in dirs])
        h_outer = np.array([outer.support(u) for u in dirs])
        assert np.all(h_inner <= hA + 1e-8)
        assert np.all(hA <= h_outer + 1e-8)

    def test_h_rep_input(self, rng):
        """Test that H-rep and V-rep of one body give the same ellipsoids"""
        body = random_symmetric_polytope(2, rng)
        h_body = to_h_rep(body)
        assert relative_error(john(h_body).M, john(body).M) <= 1e-6
        assert relative_error(lowner(h_body).M, lowner(body).M) <= 1e-6

    def test_john_position_idempotent(self, rng):
        """Test that the John ellipsoid of a John-positioned body is B"""
        body = random_symmetric_polytope(3, rng)
        assert np.allclose(john(john_position(body)).M, np.eye(3), atol=1e-6)


# ============================================================================
# Containment factors
# ============================================================================

class TestContainmentBounds:
    """Test the sandwich factors"""

    def test_square_outer_factor(self):
        """Test that the square in John position has outer factor sqrt(2)"""
        bounds = containment_bounds(cube(2))
        assert bounds.outer_factor == pytest.approx(math.sqrt(2.0), abs=1e-9)
        assert np.allclose(bounds.inner.M, np.eye(2), atol=1e-9)

    def test_disk_outer_factor(self):
        """Test that a sampled disk has outer factor 1"""
        assert containment_bounds(ball_body(2, m=720)).outer_factor == pytest.approx(1.0, abs=1e-4)

    def test_john_bound_in_dimension_three(self, rng):
        """Test outer factor <= sqrt(3) for random bodies"""
        for _ in range(5):
            body = john_position(random_symmetric_polytope(3, rng))
            assert containment_bounds(body).outer_factor <= math.sqrt(3.0) + 1e-4

    def test_lowner_inner_factor(self):
        """Test that the square's Loewner inner factor is 1/sqrt(2)"""
        bounds = lowner_bounds(cube(2))
        assert bounds.inner_factor == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-9)

    def test_lowner_bound_random(self, rng):
        """Test inner factor >= 1/sqrt(n) for random bodies"""
        for n in (2, 3):
            body = random_symmetric_polytope(n, rng)
            assert lowner_bounds(body).inner_factor >= 1.0 / math.sqrt(n) - 1e-4


# ============================================================================
# Matrix helpers
# ============================================================================

class TestMatrixHelpers:
    """Test symmetric matrix functions"""

    def test_sqrt(self):
        """Test that sym_sqrt(M)^2 = M"""
        M = np.array([[2.0, 0.5], [0.5, 1.0]])
        R = sym_sqrt(M)
        assert np.allclose(R @ R, M, atol=1e-12)

    def test_inv_sqrt(self):
        """Test that sym_inv_sqrt(M) M sym_inv_sqrt(M) = I"""
        M = np.array([[2.0, 0.5], [0.5, 1.0]])
        R = sym_inv_sqrt(M)
        assert np.allclose(R @ M @ R, np.eye(2), atol=1e-12)

    def test_ellipsoid_distance(self):
        """Test the Frobenius distance between ellipsoids"""
        d = ellipsoid_distance(Ellipsoid.unit_ball(2), Ellipsoid(2.0 * np.eye(2)))
        assert d == pytest.approx(math.sqrt(2.0))
