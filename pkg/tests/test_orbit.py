"""
Unit tests for distances, cross sections and nets on the orbit space.

Tests cover:
- quotient_distance and bm_distance on known pairs and planted orbits
- The direct GL(2) oracle
- Canonical representatives and extension from the cross section
- Greedy epsilon-nets and their center counts
"""

import math
import pytest
import sys
from pathlib import Path

import numpy as np

# Add src to path so we can import
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from geometry.body import act, outer_radius, scale, support_function
from geometry.ellipsoid import lowner
from geometry.orbit import (
    _svd_element,
    bm_distance,
    canonical_representative,
    cross_section_from_slice,
    extend_from_cross_section,
    gl_orbit_distance_oracle,
    net_profile,
    pairwise_distances,
    quotient_distance,
    slice_net,
)
from geometry.sampling import (
    ball_body,
    cube,
    random_group_element,
    random_symmetric_polytope,
    regular_polygon,
    sphere_directions,
)
from geometry.slicing import john_position, quadratic_form_action
from models import GroupElem
from models.errors import DimensionMismatch


@pytest.fixture
def rng():
    return np.random.default_rng(5)


@pytest.fixture
def hexagon():
    return regular_polygon(3)


# ============================================================================
# Quotient distance
# ============================================================================

class TestQuotientDistance:
    """Test the distance on J(n)/O(n)"""

    def test_square_and_disk(self):
        """Test that the square is sqrt(2) - 1 away from the disk"""
        d = quotient_distance(cube(2), ball_body(2, m=720), workers=1)
        assert d == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-4)

    def test_same_orbit_is_zero(self, rng):
        """Test that gA and A have distance zero"""
        for _ in range(3):
            A = random_symmetric_polytope(2, rng)
            g = random_group_element(2, rng)
            assert quotient_distance(A, act(g, A), workers=1) <= 1e-6

    def test_identical_bodies_in_three_dimensions(self, rng):
        """Test d([A], [A]) = 0 for n = 3"""
        A = random_symmetric_polytope(3, rng)
        assert quotient_distance(A, A, n_angles=200, restarts=2, workers=1) == 0.0

    def test_planted_pairs_in_three_dimensions(self, rng):
        """Test that gA and A have distance zero for n = 3"""
        for _ in range(3):
            A = random_symmetric_polytope(3, rng)
            g = random_group_element(3, rng)
            assert quotient_distance(A, act(g, A), n_angles=500, restarts=4, seed=3, workers=1) <= 1e-4

    @pytest.mark.parametrize("n", [2, 3])
    def test_invariant_under_group_action(self, rng, n):
        """Test d([gA], [B]) = d([A], [B])"""
        A = random_symmetric_polytope(n, rng)
        B = random_symmetric_polytope(n, rng)
        g = random_group_element(n, rng)
        options = dict(n_angles=500, restarts=4, seed=3, workers=1)
        assert quotient_distance(act(g, A), B, **options) == pytest.approx(
            quotient_distance(A, B, **options), abs=1e-4
        )

    def test_square_and_hexagon_are_separated(self, hexagon):
        """Test that different orbits have a clear gap"""
        assert quotient_distance(cube(2), hexagon, workers=1) > 0.2

    def test_symmetry(self, rng):
        """Test d(A, B) = d(B, A) up to grid accuracy"""
        A = random_symmetric_polytope(2, rng)
        B = random_symmetric_polytope(2, rng)
        assert quotient_distance(A, B, workers=1) == pytest.approx(
            quotient_distance(B, A, workers=1), abs=5e-3
        )

    def test_deterministic_with_seed(self, rng):
        """Test that a fixed seed gives the same n = 3 value"""
        A = random_symmetric_polytope(3, rng)
        B = random_symmetric_polytope(3, rng)
        first = quotient_distance(A, B, n_angles=200, restarts=3, seed=9, workers=1)
        second = quotient_distance(A, B, n_angles=200, restarts=3, seed=9, workers=1)
        assert first == second

    def test_dimension_mismatch(self):
        """Test that bodies must share a dimension"""
        with pytest.raises(DimensionMismatch):
            quotient_distance(cube(2), cube(3))


class TestBanachMazur:
    """Test the multiplicative distance"""

    def test_square_and_disk(self):
        """Test that the square is sqrt(2) from the disk"""
        assert bm_distance(cube(2), ball_body(2, m=720), workers=1) == pytest.approx(
            math.sqrt(2.0), abs=1e-3
        )

    def test_same_orbit_is_one(self, rng):
        """Test that gA and A have distance 1"""
        A = random_symmetric_polytope(2, rng)
        assert bm_distance(A, act(random_group_element(2, rng), A), workers=1) <= 1.0 + 1e-6

    def test_square_and_hexagon(self, hexagon):
        assert bm_distance(cube(2), hexagon, workers=1) > 1.2

    def test_scale_invariant(self, hexagon):
        """Test d(A, tB) = d(A, B)"""
        assert bm_distance(cube(2), scale(hexagon, 3.0), workers=1) == pytest.approx(
            bm_distance(cube(2), hexagon, workers=1), abs=1e-6
        )


# ============================================================================
# GL(2) oracle
# ============================================================================

class TestGlOracle:
    """Test the direct GL(2) search"""

    def test_planted_group_element(self, rng):
        """Test that a grid element mapping A to B is found"""
        A = random_symmetric_polytope(2, rng)
        g0 = _svd_element(np.pi * 2 / 12, np.pi * 5 / 12, 0.5, -0.5, 1.0)
        B = act(GroupElem(g0), A)
        assert gl_orbit_distance_oracle(A, B, workers=1) <= 1e-6

    def test_planted_off_grid_elements(self, rng):
        """Test that random group elements between grid nodes are recovered"""
        for _ in range(3):
            A = random_symmetric_polytope(2, rng)
            g0 = random_group_element(2, rng, log_scale=1.0)
            assert gl_orbit_distance_oracle(A, act(g0, A), workers=1) <= 1e-3

    def test_square_and_disk(self):
        """Test that the oracle bound separates the square from the disk"""
        d = gl_orbit_distance_oracle(cube(2), ball_body(2, m=360), workers=1)
        assert 0.1 < d < 0.45

    def test_requires_dimension_two(self):
        """Test that other dimensions are rejected"""
        with pytest.raises(ValueError, match="dimension 2"):
            gl_orbit_distance_oracle(cube(3), cube(3))


class TestPairwiseDistances:
    """Test the distance matrix helper"""

    def test_matrix_shape_and_symmetry(self):
        bodies = [cube(2), scale(cube(2), 2.0), scale(cube(2), 4.0)]
        D = pairwise_distances(bodies, lambda A, B: abs(outer_radius(A) - outer_radius(B)), workers=1)
        assert D.shape == (3, 3)
        assert np.array_equal(D, D.T)
        assert np.all(np.diag(D) == 0.0)
        assert D[0, 2] == pytest.approx(3.0 * math.sqrt(2.0))


# ============================================================================
# Cross section
# ============================================================================

class TestCrossSection:
    """Test canonical representatives"""

    def test_representative_constant_on_orbit(self, rng):
        """Test that A and gA share a representative"""
        dirs = sphere_directions(2, 180)
        for _ in range(3):
            A = random_symmetric_polytope(2, rng)
            g = random_group_element(2, rng)
            rep_a, _ = canonical_representative(A)
            rep_b, _ = canonical_representative(act(g, A))
            assert np.allclose(
                support_function(rep_a.rep, dirs), support_function(rep_b.rep, dirs), atol=1e-6
            )

    def test_group_element_maps_representative_back(self, rng):
        """Test A = g rep"""
        dirs = sphere_directions(3, 200)
        A = random_symmetric_polytope(3, rng)
        point, g = canonical_representative(A)
        assert np.allclose(
            support_function(act(g, point.rep), dirs), support_function(A, dirs), atol=1e-6
        )

    def test_representative_in_john_position(self, rng):
        point, _ = canonical_representative(random_symmetric_polytope(2, rng))
        assert point.john_residual <= 1e-6

    def test_cross_section_list(self, rng):
        bodies = [random_symmetric_polytope(2, rng) for _ in range(3)]
        points = cross_section_from_slice(bodies, workers=1)
        assert len(points) == 3
        assert all(p.john_residual <= 1e-6 for p in points)

    def test_extend_from_cross_section(self, rng):
        """Test that extending c -> M_l(c) gives M_l(A)"""
        A = random_symmetric_polytope(2, rng)
        F = extend_from_cross_section(lambda c: lowner(c).M, A, quadratic_form_action)
        direct = lowner(A).M
        assert np.linalg.norm(F - direct) / np.linalg.norm(direct) <= 1e-5


# ============================================================================
# Epsilon nets
# ============================================================================

class TestSliceNet:
    """Test the greedy epsilon-net"""

    @pytest.fixture
    def positioned(self, rng):
        return [john_position(random_symmetric_polytope(2, rng)) for _ in range(10)]

    def test_large_eps_gives_one_center(self, positioned):
        """Test that John positions are all within sqrt(2) - 1 of each other"""
        report = slice_net(positioned, eps=math.sqrt(2.0), workers=1)
        assert len(report.centers) == 1
        assert report.center_indices == [0]
        assert report.coverage_fraction == 1.0

    def test_centers_cover_samples(self, positioned):
        report = slice_net(positioned, eps=0.1, workers=1)
        assert 1 <= len(report.centers) <= len(positioned)
        assert report.coverage_fraction == 1.0
        assert len(report.center_indices) == len(report.centers)

    def test_profile_non_increasing(self, positioned):
        """Test that center counts do not grow with eps"""
        profile = net_profile(positioned, [0.05, 0.11, 0.23, 0.47], workers=1)
        counts = [count for _, count in profile]
        assert counts == sorted(counts, reverse=True)
        assert counts[-1] == 1

    def test_empty_samples(self):
        report = slice_net([], eps=0.1)
        assert report.centers == []
        assert report.coverage_fraction == 1.0

    def test_eps_must_be_positive(self, positioned):
        with pytest.raises(ValueError, match="eps"):
            slice_net(positioned, eps=0.0)

    def test_center_must_be_in_john_position(self):
        """Test that a center off the slice is rejected"""
        with pytest.raises(ValueError, match="John position"):
            slice_net([scale(cube(2), 2.0)], eps=0.1, workers=1)

    def test_report_dict(self, positioned):
        data = slice_net(positioned, eps=1.0, workers=1).to_dict()
        assert data["center_indices"] == [0]
        assert len(data["centers"]) == 1
