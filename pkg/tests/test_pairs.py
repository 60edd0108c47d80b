import math

import numpy as np
import pytest

from numrange import (InputError, NormalizationError, OperatorSpec, SpaceSpec, evaluate,
                      from_operator, make_finite_pair, make_generated_pair, pnorm)


class TestFinitePairs:
    def test_single_label(self):
        sp = SpaceSpec("real", 2, 2)
        pair = make_finite_pair(sp, ["a"], [[1, 0]], [[0, 1]])
        assert pair.certificate.kind == "attained"
        assert pair.certificate.at_label == "a"
        g, f = evaluate(pair, "a")
        np.testing.assert_allclose(g, [1, 0])
        np.testing.assert_allclose(f, [0, 1])

    def test_subunit_g_rejected_with_measured_sup(self):
        sp = SpaceSpec("real", 2, 2)
        with pytest.raises(NormalizationError) as exc:
            make_finite_pair(sp, ["a", "b"], [[0.9, 0], [0, 0.8]], [[1, 0], [0, 1]])
        assert exc.value.measured_sup == pytest.approx(0.9)

    def test_mixed_norms_attained_at_argmax(self):
        sp = SpaceSpec("real", 2, 2)
        pair = make_finite_pair(sp, ["a", "b"], [[1, 0], [0, 0.5]], [[0, 1], [1, 0]])
        assert pair.certificate.at_label == "a"
        assert pair.attaining() == ["a"]

    def test_length_mismatch(self):
        sp = SpaceSpec("real", 2, 2)
        with pytest.raises(InputError):
            make_finite_pair(sp, ["a", "b"], [[1, 0]], [[0, 1], [1, 0]])

    def test_unknown_label(self):
        sp = SpaceSpec("real", 2, 2)
        pair = make_finite_pair(sp, ["a"], [[1, 0]], [[0, 1]])
        with pytest.raises(InputError):
            evaluate(pair, "zzz")

    def test_combo_norm_matches_direct_max(self):
        rng = np.random.default_rng(3)
        sp = SpaceSpec("complex", 3, 1.5)
        G = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        G = G / pnorm(G, 1.5)[:, None]
        F = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        pair = make_finite_pair(sp, list(range(5)), G, F)
        a, b = 0.7, 0.3 - 0.4j
        direct = max(pnorm(a * G[i] + b * F[i], 1.5) for i in range(5))
        assert pair.combo_norm(a, b) == pytest.approx(direct, rel=1e-14)


class TestGeneratedFamilies:
    def test_nonattained_never_attains(self):
        pair = make_generated_pair("nonattained", 100, v=(0.3, 0.4))
        gn = pair.g_norms
        assert np.all(gn < 1.0)
        np.testing.assert_allclose(gn, 1 - 1 / np.arange(1, 101))
        assert pair.certificate.kind == "asymptotic"
        assert pair.attaining() == []

    def test_nonattained_degenerate_n1(self):
        pair = make_generated_pair("nonattained", 1)
        g, f = evaluate(pair, 1)
        np.testing.assert_allclose(g, [0.0, 0.0])
        assert pair.combo_norm(1.0, 0.0) == 1.0  # analytic supremum over all m

    def test_nonsmooth_attains_everywhere(self):
        pair = make_generated_pair("nonsmooth-corner", 50)
        assert np.all(pair.g_norms == 1.0)
        assert pair.certificate.kind == "attained"
        assert pair.attaining() == list(range(1, 51))

    def test_evaluate_formulas(self):
        pa = make_generated_pair("nonattained", 10)
        g, _ = evaluate(pa, 2)
        np.testing.assert_allclose(g, [0.5, 0.0])
        pn = make_generated_pair("nonsmooth-corner", 10)
        g, f = evaluate(pn, 4)
        np.testing.assert_allclose(g, [1.0, 0.75])
        np.testing.assert_allclose(f, [0.0, 1.0])

    def test_unknown_family(self):
        with pytest.raises(InputError):
            make_generated_pair("mystery", 10)

    def test_evaluate_beyond_truncation_rejected(self):
        pair = make_generated_pair("nonattained", 10)
        with pytest.raises(InputError):
            evaluate(pair, 11)

    def test_combo_norm_endpoint_rule_against_enumeration(self):
        # The analytic endpoint formula must dominate a dense enumeration
        # and agree with its large-m limit.
        pair = make_generated_pair("nonattained", 100, v=(0.3, 0.4))
        for a, b in [(1.0, 0.02), (1.0, -0.3), (0.5, 0.5), (1.0, 0.0)]:
            analytic = pair.combo_norm(a, b)
            ms = np.arange(1, 200001)
            G = pair.g0[None, :] + pair.g1[None, :] / ms[:, None]
            F = pair.f0[None, :] + pair.f1[None, :] / ms[:, None]
            brute = pnorm(a * G + b * F, pair.space.p).max()
            assert brute <= analytic + 1e-12
            assert analytic == pytest.approx(brute, abs=1e-4)

    def test_slice_labels_reach_feasibility_window(self):
        pair = make_generated_pair("nonattained", 1000)
        eps = 2.0**-12
        labels = pair.slice_labels(eps)
        assert max(labels) >= 64 / eps / 2
        assert labels == sorted(set(labels))


class TestOperatorPairs:
    def test_identity_operator(self):
        sp = SpaceSpec("real", 2, 2)
        pair = from_operator(OperatorSpec(np.eye(2), 2), sp, scheme="grid", count=100, seed=0)
        np.testing.assert_allclose(pair.G, pair.F)
        assert np.all(np.abs(pair.g_norms - 1) <= 1e-9)

    def test_zero_operator(self):
        sp = SpaceSpec("real", 2, 2)
        pair = from_operator(OperatorSpec(np.zeros((2, 2)), 2), sp, count=16)
        assert pair.f_sup == 0.0

    def test_rank_one_domain_grid_contains_signs(self):
        sp = SpaceSpec("real", 2, 2)
        T = np.array([[2.0], [0.0]])
        pair = from_operator(OperatorSpec(T, 1), sp, scheme="grid", count=4, seed=0)
        rows = {tuple(np.round(r, 12)) for r in pair.G}
        assert (1.0, 0.0) in rows and (-1.0, 0.0) in rows

    def test_embedding_isometry_random(self):
        rng = np.random.default_rng(11)
        op = OperatorSpec(np.zeros((3, 2)), 2)
        for p in [1, 1.5, 2, math.inf]:
            for _ in range(250):
                x = rng.normal(size=2)
                assert pnorm(op.embed(x, 3), p) == pnorm(x, p)

    def test_sampling_count_precondition(self):
        sp = SpaceSpec("real", 3, 2)
        with pytest.raises(InputError):
            from_operator(OperatorSpec(np.eye(3), 3), sp, count=5)

    def test_domain_dimension_bound(self):
        with pytest.raises(InputError):
            OperatorSpec(np.zeros((2, 3)), 3)
