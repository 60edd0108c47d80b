import math

import numpy as np
import pytest

from numrange import (InputError, SpaceSpec, dual_exponent, dual_norm, duality_face,
                      near_norming, norm, norming_functional, pairing, pnorm,
                      sample_face, sphere_sample)


def l1_sphere_grid(n_angles=40001):
    """Dense grid of the real l1 unit sphere in 2d (brute-force oracle)."""
    t = np.linspace(0, 1, n_angles)
    quads = []
    for sx in (1, -1):
        for sy in (1, -1):
            quads.append(np.column_stack([sx * t, sy * (1 - t)]))
    return np.vstack(quads)


def linf_sphere_grid(n=40001):
    """Dense grid of the real linf unit sphere in 2d."""
    t = np.linspace(-1, 1, n)
    sides = [np.column_stack([np.ones(n), t]), np.column_stack([-np.ones(n), t]),
             np.column_stack([t, np.ones(n)]), np.column_stack([t, -np.ones(n)])]
    return np.vstack(sides)


class TestNorms:
    def test_euclidean(self):
        assert norm(SpaceSpec("real", 2, 2), [3, 4]) == 5.0

    def test_sup(self):
        assert norm(SpaceSpec("real", 2, math.inf), [1, -0.5]) == 1.0

    def test_l1(self):
        assert norm(SpaceSpec("real", 3, 1), [0.25, 0.25, 0.5]) == 1.0

    def test_homogeneous_and_triangle(self):
        rng = np.random.default_rng(0)
        for p in [1, 1.3, 2, 5, math.inf]:
            sp = SpaceSpec("complex", 3, p)
            for _ in range(50):
                u = rng.normal(size=3) + 1j * rng.normal(size=3)
                v = rng.normal(size=3) + 1j * rng.normal(size=3)
                c = complex(rng.normal(), rng.normal())
                assert norm(sp, c * u) == pytest.approx(abs(c) * norm(sp, u), rel=1e-12)
                assert norm(sp, u + v) <= norm(sp, u) + norm(sp, v) + 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            norm(SpaceSpec("real", 2, 2), [1, 2, 3])

    def test_bad_exponent(self):
        with pytest.raises(InputError):
            SpaceSpec("real", 2, 0.5)


class TestDualExponent:
    def test_involution_exact(self):
        for p in [1, 1.5, 2, 3, math.inf]:
            assert dual_exponent(dual_exponent(p)) == p

    def test_conjugacy(self):
        for p in [1.25, 1.5, 2, 4, 10]:
            q = dual_exponent(p)
            assert 1 / p + 1 / q == pytest.approx(1.0, abs=1e-15)


class TestPairing:
    def test_basis(self):
        assert pairing([1, 0], [1, 0]) == 1.0

    def test_orthogonal(self):
        assert pairing([1, 0], [0, 1]) == 0.0

    def test_norming_at_diagonal(self):
        s = 1 / math.sqrt(2)
        assert pairing([s, s], [s, s]) == pytest.approx(1.0, abs=1e-12)

    def test_bilinear_no_conjugation(self):
        assert pairing([1j, 0], [1j, 0]) == pytest.approx(-1.0)

    def test_mismatch(self):
        with pytest.raises(InputError):
            pairing([1, 0, 0], [1, 0])

    def test_hoelder_random(self):
        rng = np.random.default_rng(1)
        for p in [1, 1.5, 2, 4, math.inf]:
            sp = SpaceSpec("complex", 3, p)
            q = sp.q
            for _ in range(100):
                y = rng.normal(size=3) + 1j * rng.normal(size=3)
                x = rng.normal(size=3) + 1j * rng.normal(size=3)
                assert abs(pairing(y, x)) <= pnorm(y, q) * pnorm(x, p) + 1e-9


class TestDualityFace:
    def test_hilbert_self_duality(self):
        face = duality_face(SpaceSpec("real", 2, 2), [1.0, 0.0])
        assert face.kind == "singleton"
        np.testing.assert_allclose(face.point, [1.0, 0.0])

    def test_smooth_singleton_formula(self):
        # y_i = conj(sgn u_i) |u_i|^(p-1) normalizes and norms u
        rng = np.random.default_rng(2)
        for p in [1.5, 2, 3, 7]:
            sp = SpaceSpec("complex", 3, p)
            for _ in range(25):
                u = rng.normal(size=3) + 1j * rng.normal(size=3)
                u = u / pnorm(u, p)
                face = duality_face(sp, u)
                assert face.kind == "singleton"
                y = face.point
                assert abs(dual_norm(sp, y) - 1) <= 1e-9
                assert pairing(y, u) == pytest.approx(1.0, abs=1e-9)

    def test_linf_corner_face_against_grid_oracle(self):
        # Brute-force maximization of y(u) over the l1 sphere: every grid
        # maximizer must lie on conv{(1,0), (0,1)} and the face vertices
        # must reach the grid maximum.
        sp = SpaceSpec("real", 2, math.inf)
        u = np.array([1.0, 1.0])
        face = duality_face(sp, u)
        verts = face.vertices()
        assert sorted(map(tuple, np.real(verts).tolist())) == [(0.0, 1.0), (1.0, 0.0)]
        grid = l1_sphere_grid()
        vals = grid @ u
        top = vals.max()
        assert top <= 1.0 + 1e-12 and top == pytest.approx(1.0, abs=1e-4)
        winners = grid[vals >= top - 1e-9]
        # winners have both coordinates nonnegative summing to 1: on the face
        assert np.all(winners >= -1e-12)
        np.testing.assert_allclose(winners.sum(axis=1), 1.0, atol=1e-9)

    def test_l1_face_against_grid_oracle(self):
        sp = SpaceSpec("real", 2, 1)
        u = np.array([1.0, 0.0])
        face = duality_face(sp, u)
        assert face.structure == "disk-product"
        samples = sample_face(face, 32, seed=0)
        assert np.allclose(np.real(samples[:, 0]), 1.0)
        assert np.all(np.abs(samples[:, 1]) <= 1 + 1e-12)
        grid = linf_sphere_grid()
        vals = grid @ u
        winners = grid[vals >= vals.max() - 1e-9]
        # grid maximizers have first coordinate 1, second free in [-1, 1]
        np.testing.assert_allclose(winners[:, 0], 1.0, atol=1e-9)

    def test_rejects_non_unit(self):
        with pytest.raises(InputError):
            duality_face(SpaceSpec("real", 2, 2), [0.5, 0.0])

    def test_complex_linf_peak_phases(self):
        sp = SpaceSpec("complex", 2, math.inf)
        u = np.array([1j, -1.0])
        face = duality_face(sp, u)
        verts = face.vertices()
        for y in verts:
            assert abs(pairing(y, u) - 1) <= 1e-12


class TestSampleFace:
    def test_singleton_once(self):
        face = duality_face(SpaceSpec("real", 2, 2), [0.0, 1.0])
        out = sample_face(face, 5)
        assert out.shape == (1, 2)

    def test_linf_corner_budget_three(self):
        face = duality_face(SpaceSpec("real", 2, math.inf), [1.0, 1.0])
        out = np.real(sample_face(face, 3))
        np.testing.assert_allclose(out, [[1, 0], [0, 1], [0.5, 0.5]], atol=1e-12)

    def test_complex_l1_face_invariants(self):
        sp = SpaceSpec("complex", 3, 1)
        face = duality_face(sp, [1.0, 0.0, 0.0])
        out = sample_face(face, 8, seed=3)
        assert out.shape[0] == 8
        for y in out:
            assert y[0] == pytest.approx(1.0)
            assert abs(y[1]) <= 1 + 1e-12 and abs(y[2]) <= 1 + 1e-12
            assert abs(dual_norm(sp, y) - 1) <= 1e-9

    def test_every_sample_satisfies_face_invariants(self):
        rng = np.random.default_rng(5)
        for p in [1, 2, math.inf]:
            for field in ("real", "complex"):
                sp = SpaceSpec(field, 3, p)
                u = rng.normal(size=3) + (1j * rng.normal(size=3) if field == "complex" else 0)
                u = sp.as_vector(u / pnorm(u, p))
                face = duality_face(sp, u)
                for y in sample_face(face, 24, seed=1):
                    assert abs(dual_norm(sp, y) - 1) <= 1e-9
                    assert abs(pairing(y, u) - 1) <= 1e-8


class TestNearNorming:
    def test_cap_membership(self):
        sp = SpaceSpec("real", 2, 2)
        out = near_norming(sp, [1.0, 0.0], 0.5, 64, seed=0)
        assert out.shape[0] > 0
        assert np.all(np.real(out @ np.array([1.0, 0.0])) > 0.5)

    def test_empty_below_threshold(self):
        sp = SpaceSpec("real", 2, 2)
        out = near_norming(sp, [0.9, 0.0], 0.05, 64, seed=0)
        assert out.shape[0] == 0

    def test_soundness_is_strict_everywhere(self):
        rng = np.random.default_rng(7)
        for p in [1, 1.5, 2, math.inf]:
            sp = SpaceSpec("complex", 2, p)
            for trial in range(10):
                u = rng.normal(size=2) + 1j * rng.normal(size=2)
                u = u / pnorm(u, p) * rng.uniform(0.8, 1.0)
                eps = rng.uniform(0.01, 0.6)
                out = near_norming(sp, sp.as_vector(u), eps, 50, seed=trial)
                if out.shape[0]:
                    margins = np.real(out @ u)
                    assert np.all(margins > 1 - eps)
                    assert np.all(np.abs(pnorm(out, sp.q) - 1) <= 1e-9)

    def test_corner_includes_second_peak(self):
        # u = (1, 1 - 1/n): the functional (0, 1) is feasible once eps > 1/n
        sp = SpaceSpec("real", 2, math.inf)
        n = 10
        out = near_norming(sp, [1.0, 1.0 - 1.0 / n], 0.2, 128, seed=0)
        d = np.abs(out - np.array([0.0, 1.0])).sum(axis=1)
        assert d.min() <= 1e-6

    def test_rejects_nonpositive_eps(self):
        with pytest.raises(InputError):
            near_norming(SpaceSpec("real", 2, 2), [1.0, 0.0], 0.0, 8)


class TestSphereSample:
    def test_grid_contains_signed_basis(self):
        sp = SpaceSpec("real", 2, 2)
        out = sphere_sample(sp, "grid", 8, seed=1)
        for target in ([1, 0], [-1, 0], [0, 1], [0, -1]):
            assert np.abs(out - np.array(target, dtype=float)).sum(axis=1).min() <= 1e-12

    def test_norms_tight(self):
        for p in [1, 1.7, 2, math.inf]:
            for field in ("real", "complex"):
                sp = SpaceSpec(field, 3, p)
                out = sphere_sample(sp, "quasi-random", 200, seed=4)
                assert np.abs(pnorm(out, p) - 1).max() <= 1e-12

    def test_deterministic(self):
        sp = SpaceSpec("real", 3, 1)
        a = sphere_sample(sp, "quasi-random", 100, seed=11)
        b = sphere_sample(sp, "quasi-random", 100, seed=11)
        assert np.array_equal(a, b)


class TestNormingFunctional:
    def test_attains_norm(self):
        rng = np.random.default_rng(9)
        for p in [1, 1.5, 2, 4, math.inf]:
            sp = SpaceSpec("complex", 3, p)
            for _ in range(30):
                w = rng.normal(size=3) + 1j * rng.normal(size=3)
                y = norming_functional(sp, w)
                assert abs(dual_norm(sp, y) - 1) <= 1e-9
                assert pairing(y, w) == pytest.approx(pnorm(w, p), rel=1e-10)

    def test_zero_vector_rejected(self):
        with pytest.raises(InputError):
            norming_functional(SpaceSpec("real", 2, 2), [0.0, 0.0])
