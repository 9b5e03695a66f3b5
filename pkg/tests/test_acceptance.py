"""
Acceptance runs over seeded random corpora.

Tests cover:
- John and Loewner containment bounds
- MVEE optimality conditions on point sets
- GL-equivariance of the John ellipsoid
- The J(2) slice audit
- The R_+ demo: slicing-map values and continuity
- Orbit distances on planted and distinct pairs
- Equivariant extension and epsilon-net coverage

These are slower than the unit tests; deselect with -m "not slow".
"""

import math
import pytest
import sys
from pathlib import Path

import numpy as np

# Add src to path so we can import
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from geometry.body import act
from geometry.demo_action import demo_slicing_map
from geometry.ellipsoid import containment_bounds, john, lowner, lowner_bounds, mvee_centered
from geometry.orbit import (
    bm_distance,
    gl_orbit_distance_oracle,
    net_profile,
    pairwise_distances,
    quotient_distance,
    slice_net,
)
from geometry.sampling import (
    ball_body,
    cube,
    random_corpus,
    random_group_element,
    random_symmetric_polytope,
    regular_polygon,
)
from geometry.slicing import (
    check_slice_axioms,
    extend_equivariant,
    in_john_slice,
    john_position,
    lowner_position,
    quadratic_form_action,
)


pytestmark = pytest.mark.slow


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


# ============================================================================
# Ellipsoids
# ============================================================================

class TestContainmentBounds:
    """Test the sqrt(n) sandwich on random bodies"""

    @pytest.mark.parametrize("n", [2, 3])
    def test_john_bound(self, rng, n):
        for _ in range(200):
            body = random_symmetric_polytope(n, rng)
            bounds = containment_bounds(body)
            assert 1.0 - 1e-9 <= bounds.outer_factor <= math.sqrt(n) + 1e-4

    @pytest.mark.parametrize("n", [2, 3])
    def test_lowner_bound(self, rng, n):
        for _ in range(200):
            body = random_symmetric_polytope(n, rng)
            bounds = lowner_bounds(body)
            assert 1.0 / math.sqrt(n) - 1e-4 <= bounds.inner_factor <= 1.0 + 1e-9

    @pytest.mark.parametrize("n", [2, 3])
    def test_positions_hit_the_bounds_tightly(self, rng, n):
        """Test that both positions carry the unit ball as their ellipsoid"""
        body = random_symmetric_polytope(n, rng)
        assert np.allclose(john(john_position(body)).M, np.eye(n), atol=1e-5)
        assert np.allclose(lowner(lowner_position(body)).M, np.eye(n), atol=1e-5)


class TestMveeOptimality:
    """Test the optimality conditions of the MVEE solve"""

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_kkt_conditions(self, rng, n):
        for _ in range(5):
            points = rng.standard_normal((3 * n + 2, n))
            report = mvee_centered(points)
            M = report.ellipsoid.M
            values = np.einsum("ij,jk,ik->i", points, M, points)
            assert np.all(values <= 1.0 + 1e-9)
            support = report.weights > 0.0
            assert np.all(values[support] >= 1.0 - 1e-6)
            assert report.weights.sum() == pytest.approx(1.0)
            assert report.epsilon <= 1e-7 + 1e-12
            # sum p_i n M x_i x_i^T = I at the optimum
            Lam = points.T @ (report.weights[:, None] * points)
            assert np.linalg.norm(n * M @ Lam - np.eye(n)) <= 1e-5


class TestEquivariance:
    """Test j(gA) = g j(A)"""

    @pytest.mark.parametrize("n", [2, 3])
    def test_john_is_equivariant(self, rng, n):
        for _ in range(5):
            body = random_symmetric_polytope(n, rng)
            g = random_group_element(n, rng)
            left = john(act(g, body)).M
            g_inv = np.linalg.inv(g.mat)
            right = g_inv.T @ john(body).M @ g_inv
            assert np.linalg.norm(left - right) / np.linalg.norm(right) <= 1e-5


# ============================================================================
# Slices
# ============================================================================

class TestJohnSliceAudit:
    """Test the audit of J(2) on a larger corpus"""

    def test_no_witnesses(self, rng):
        raw = [random_symmetric_polytope(2, rng) for _ in range(12)]
        samples = raw + [john_position(A) for A in raw]
        group = [random_group_element(2, rng) for _ in range(20)]
        report = check_slice_axioms(in_john_slice, samples, group, workers=1)
        assert report.disjointness_witnesses == []
        assert report.passed

    def test_extension_matches_direct_computation(self, rng):
        for n in (2, 3):
            body = random_symmetric_polytope(n, rng)
            g = random_group_element(n, rng)
            f = lambda s: lowner(s).M
            left = extend_equivariant(f, act(g, body), quadratic_form_action)
            right = quadratic_form_action(g.mat, extend_equivariant(f, body, quadratic_form_action))
            assert np.linalg.norm(left - right) / np.linalg.norm(right) <= 1e-4


class TestDemoAcceptance:
    """Test the planar R_+ demo"""

    @pytest.mark.parametrize("k", [1.0, 4.0, 100.0, 1e4, 1e6])
    def test_hyperbola_values(self, k):
        assert demo_slicing_map("hyperbola", (1.0 / k, 1.0)) == pytest.approx(k ** -0.5, rel=1e-12)

    def test_hyperbola_map_jumps_at_the_axis(self):
        assert demo_slicing_map("hyperbola", (0.0, 1.0)) == 1.0
        assert demo_slicing_map("hyperbola", (1e-12, 1.0)) == pytest.approx(1e-6)

    def test_circle_map_is_lipschitz(self, rng):
        """Test |f(p) - f(q)| <= ||p - q|| on random pairs"""
        P = rng.uniform(-5.0, 5.0, size=(200, 2))
        Q = rng.uniform(-5.0, 5.0, size=(200, 2))
        for p, q in zip(P, Q):
            gap = abs(demo_slicing_map("circle", p) - demo_slicing_map("circle", q))
            assert gap <= float(np.linalg.norm(p - q)) + 1e-12


# ============================================================================
# Orbit space
# ============================================================================

class TestOrbitDistances:
    """Test distances on planted and distinct pairs"""

    @pytest.fixture
    def labelled_pairs(self, rng):
        """20 same-orbit pairs and 30 pairs from distinct orbits, all moved by GL(2)"""
        pairs = []
        for _ in range(20):
            body = random_symmetric_polytope(2, rng)
            pairs.append((body, act(random_group_element(2, rng), body), True))
        square, hexagon, octagon, disk = cube(2), regular_polygon(3), regular_polygon(4), ball_body(2, 180)
        shapes = [(square, hexagon), (square, octagon), (square, disk), (hexagon, disk), (octagon, disk)]
        for _ in range(6):
            for first, second in shapes:
                pairs.append((
                    act(random_group_element(2, rng, log_scale=0.5), first),
                    act(random_group_element(2, rng, log_scale=0.5), second),
                    False,
                ))
        return pairs

    def test_planted_and_distinct_pairs(self, labelled_pairs):
        for A, B, same in labelled_pairs:
            d = quotient_distance(A, B, seed=1, workers=1)
            if same:
                assert d <= 1e-4
            else:
                assert d > 5e-2

    def test_oracle_agrees_on_classification(self, labelled_pairs):
        """Test that the direct GL(2) search separates the same pairs"""
        for A, B, same in labelled_pairs:
            assert (gl_orbit_distance_oracle(A, B, workers=1) <= 1e-3) == same

    def test_distinct_pairs(self):
        square = cube(2)
        hexagon = regular_polygon(3)
        octagon = regular_polygon(4)
        assert quotient_distance(square, hexagon, workers=1) > 5e-2
        assert quotient_distance(hexagon, octagon, workers=1) > 1e-3

    def test_square_disk_distance(self):
        assert bm_distance(cube(2), ball_body(2, 720), workers=1) == pytest.approx(math.sqrt(2.0), abs=1e-3)

    def test_ball_within_john_bound(self, rng):
        disk = ball_body(2, 720)
        for _ in range(5):
            body = random_symmetric_polytope(2, rng)
            assert bm_distance(body, disk, workers=1) <= math.sqrt(2.0) + 1e-3

    def test_corpus_diameter(self):
        """Test bm(A, B) <= 2 through the disk on every corpus pair"""
        corpus = random_corpus(2, 12, seed=17)
        D = pairwise_distances(corpus, lambda A, B: bm_distance(A, B, workers=1), workers=1)
        assert np.max(D) <= 2.0 + 1e-2

    def test_invariance_in_three_dimensions(self, rng):
        """Test d([gA], [B]) = d([A], [B]) for n = 3"""
        for _ in range(3):
            A = random_symmetric_polytope(3, rng)
            B = random_symmetric_polytope(3, rng)
            g = random_group_element(3, rng)
            assert quotient_distance(act(g, A), B, seed=1, workers=1) == pytest.approx(
                quotient_distance(A, B, seed=1, workers=1), abs=1e-4
            )

    def test_triangle_inequality(self, rng):
        """Test d(A, C) <= d(A, B) + d(B, C) up to direction sampling"""
        for n, triples, tolerance in ((2, 10, 3e-3), (3, 2, 5e-2)):
            for _ in range(triples):
                A, B, C = (random_symmetric_polytope(n, rng) for _ in range(3))
                d = lambda P, Q: quotient_distance(P, Q, seed=1, workers=1)
                assert d(A, C) <= d(A, B) + d(B, C) + tolerance


class TestNetAcceptance:
    """Test nets on a John-positioned corpus"""

    @pytest.fixture(scope="class")
    def samples(self):
        return [john_position(A) for A in random_corpus(2, 500, seed=9)]

    def test_coverage_and_center_count(self, samples):
        report = slice_net(samples, 0.25, workers=1)
        assert report.coverage_fraction == 1.0
        assert 1 <= len(report.center_indices) <= 60

    def test_counts_non_increasing(self, samples):
        counts = [count for _, count in net_profile(samples, [0.2, 0.25, 0.3, 0.4], workers=1)]
        assert counts == sorted(counts, reverse=True)
