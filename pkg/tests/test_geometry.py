import numpy as np
import pytest

from numrange import (InputError, convex_hull, directed_hausdorff, hausdorff,
                      interval_polygon, polygon_from_supports)


class TestConvexHull:
    def test_unit_square(self):
        hull = convex_hull([0, 1, 1j, 1 + 1j])
        assert sorted((v.real, v.imag) for v in hull.vertices) == [
            (0, 0), (0, 1), (1, 0), (1, 1)]

    def test_collinear_segment(self):
        hull = convex_hull([0, 0.5, 1.0])
        np.testing.assert_allclose(hull.vertices, [0, 1])

    def test_single_point(self):
        hull = convex_hull([2 + 3j, 2 + 3j])
        np.testing.assert_allclose(hull.vertices, [2 + 3j])

    def test_random_points_inside_and_vertices_are_inputs(self):
        rng = np.random.default_rng(0)
        z = rng.normal(size=1000) + 1j * rng.normal(size=1000)
        z = z[np.abs(z) <= 1]
        hull = convex_hull(z)
        assert hull.vertices.size <= z.size
        inputs = {(round(p.real, 15), round(p.imag, 15)) for p in z}
        for v in hull.vertices:
            assert (round(v.real, 15), round(v.imag, 15)) in inputs
        for p in z:
            assert hull.distance_to_point(p) <= 1e-12

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            convex_hull([])


class TestHausdorff:
    def test_identity(self):
        z = np.array([0, 1, 1j])
        assert hausdorff(z, z) == 0.0

    def test_two_points(self):
        assert hausdorff(np.array([0j]), np.array([1 + 0j])) == 1.0

    def test_interval_vs_coarse_grid(self):
        d = hausdorff(interval_polygon(0, 1), np.array([0, 0.5, 1.0]), res_hd=1e-4)
        assert d == pytest.approx(0.25, abs=1e-3)

    def test_metric_axioms_on_clouds(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            A = rng.normal(size=8) + 1j * rng.normal(size=8)
            B = rng.normal(size=5) + 1j * rng.normal(size=5)
            C = rng.normal(size=6) + 1j * rng.normal(size=6)
            dAB, dBA = hausdorff(A, B), hausdorff(B, A)
            assert dAB == dBA  # symmetric by construction
            assert hausdorff(A, A) == 0.0
            assert hausdorff(A, C) <= dAB + hausdorff(B, C) + 1e-12

    def test_directed_is_one_sided(self):
        small = np.array([0.0 + 0j, 0.1])
        big = np.array([0.0 + 0j, 0.1, 5.0])
        assert directed_hausdorff(small, big) == 0.0
        assert directed_hausdorff(big, small) == pytest.approx(4.9)

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            hausdorff(np.array([]), np.array([1 + 0j]))


class TestSupportPolygons:
    def test_disk_supports(self):
        ang = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        disk = polygon_from_supports(ang, np.full(64, 0.5))
        assert disk.support(0.3) == pytest.approx(0.5, abs=1e-3)
        assert disk.distance_to_point(0j) == 0.0
        assert disk.distance_to_point(1.0 + 0j) == pytest.approx(0.5, abs=2e-3)

    def test_point_target_degenerates(self):
        ang = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        pt = polygon_from_supports(ang, np.cos(ang))  # supports of {1}
        assert pt.diameter <= 1e-6
        assert abs(pt.vertices.mean() - 1.0) <= 1e-6

    def test_polygon_support_matches_vertex_max(self):
        rng = np.random.default_rng(2)
        z = rng.normal(size=50) + 1j * rng.normal(size=50)
        hull = convex_hull(z)
        for theta in rng.uniform(0, 2 * np.pi, size=20):
            direct = max(np.real(np.exp(-1j * theta) * z))
            assert hull.support(theta) == pytest.approx(direct, abs=1e-12)

    def test_interval_polygon_orientation(self):
        iv = interval_polygon(-0.25, 0.75)
        assert iv.support(0.0) == pytest.approx(0.75)
        assert iv.support(np.pi) == pytest.approx(0.25)
        # collapsed interval clamps to its midpoint
        pt = interval_polygon(0.5, 0.4)
        np.testing.assert_allclose(pt.vertices, [0.45 + 0j])

    def test_convex_pair_support_identity(self):
        # Hausdorff between convex regions equals the sup of support gaps.
        sq = convex_hull([0, 1, 1j, 1 + 1j])
        big = convex_hull([-0.2 + 0j, 1.2, 1.2 + 1.2j, -0.2 + 1.2j, 0.5 + 0.5j])
        d = hausdorff(sq, big)
        assert d == pytest.approx(0.2 * np.sqrt(2), abs=1e-3)
