"""Executable verification suites for the range-coincidence statements.

Each suite measures set discrepancies on concrete instances and renders a
:class:`VerificationReport`.  Verdicts are purely threshold comparisons:
an instance passes iff every measured discrepancy is at most its threshold
(lower bounds are encoded as shortfalls with threshold zero).  Reports are
bit-reproducible from (suite, config, root seed): no wall-clock data is
stored, floats serialize through repr, and instances merge by index.

Suites honor the NUMRANGE_THREADS environment variable; instances are
independent and merge deterministically whatever the worker count.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .spaces import SpaceSpec, pnorm
from .pairs import make_finite_pair, make_generated_pair, from_operator, OperatorSpec, TOL_ATTAIN
from .ranges import (approx_spatial_range, dyadic_schedule, eps_slice, intrinsic_range,
                     spatial_range, suggested_depth)
from .geometry import convex_hull, directed_hausdorff, hausdorff, interval_polygon
from .fov import fov_support_polygon
from . import sampling

SCHEMA_VERSION = 1


def max_workers() -> int:
    raw = os.environ.get("NUMRANGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pmap(fn, items):
    if max_workers() == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        return list(pool.map(fn, items))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if x is None or isinstance(x, str):
        return x
    if x == math.inf:
        return "inf"
    return repr(x)


@dataclass
class VerificationReport:
    """Measured discrepancies, thresholds and verdicts for one suite run."""

    suite: str
    config: dict
    instances: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def add_instance(self, descriptor: dict, discrepancies: dict, thresholds: dict,
                     measurements: dict | None = None):
        verdict = all(
            float(discrepancies[k]) <= float(thresholds[k]) for k in discrepancies
        )
        self.instances.append({
            "descriptor": descriptor,
            "discrepancies": discrepancies,
            "thresholds": thresholds,
            "measurements": measurements or {},
            "verdict": bool(verdict),
        })

    @property
    def passed(self) -> bool:
        return all(inst["verdict"] for inst in self.instances) and bool(self.instances)

    def to_dict(self) -> dict:
        return _jsonable({
            "schema_version": self.schema_version,
            "suite": self.suite,
            "config": self.config,
            "instances": self.instances,
            "passed": self.passed,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# deterministic instance generators

SUITE_EXPONENTS = (1.0, 1.5, 2.0, 4.0, math.inf)


def _rng_for(seed: int, ordinal: int) -> np.random.Generator:
    return np.random.default_rng(sampling.child_seed(seed, sampling.TAG_SUITE, ordinal))


def _random_vectors(rng, field: str, count: int, dim: int) -> np.ndarray:
    v = rng.normal(size=(count, dim))
    if field == "complex":
        v = v + 1j * rng.normal(size=(count, dim))
    return v


def random_finite_pair(seed: int, ordinal: int, p: float, dim: int, field: str,
                       n_labels: int, unit_g: bool = False):
    """A deterministic random pair; g is scaled so its sup-norm is exactly 1.

    With ``unit_g`` every g(t) lies on the unit sphere (the compact/smooth
    suites); otherwise norms spread over [0.3, 1] with one attaining index.
    f has per-index norms in [0.2, 1].
    """
    rng = _rng_for(seed, ordinal)
    sp = SpaceSpec(field, dim, p)
    G = _random_vectors(rng, field, n_labels, dim)
    G = G / pnorm(G, p)[:, None]
    if not unit_g:
        scale = rng.uniform(0.3, 1.0, size=n_labels)
        scale[int(rng.integers(n_labels))] = 1.0
        G = G * scale[:, None]
        G = G / pnorm(G, p).max()
    F = _random_vectors(rng, field, n_labels, dim)
    F = F / np.maximum(pnorm(F, p), 1e-12)[:, None] * rng.uniform(0.2, 1.0, size=(n_labels, 1))
    return make_finite_pair(sp, list(range(n_labels)), G, F)


def _describe(pair, extra=None) -> dict:
    d = {
        "field": pair.space.field,
        "p": pair.space.p if pair.space.p != math.inf else "inf",
        "dim": pair.space.dim,
        "n_indices": pair.n_indices,
        "kind": pair.kind,
    }
    if extra:
        d.update(extra)
    return d


# ---------------------------------------------------------------------------
# main coincidence suite: intrinsic range vs hull of the approximated cloud


def verify_main(count: int = 50, seed: int = 0, budget: int = 10_000, tol: float = 5e-2,
                cross_tol: float = 2e-2, n_angles: int = 64, max_labels: int = 20,
                with_operator_checks: bool = True, fov_tol: float = 2e-2) -> VerificationReport:
    """Hull-of-approximated-cloud versus intrinsic polygon on random pairs.

    Every instance also cross-checks the two intrinsic-range methods; p = 2
    operator instances are additionally compared against the field-of-values
    oracle.  One-directional distances are reported so failures say which
    side fell short.
    """
    cfg = {"count": count, "seed": seed, "budget": budget, "tol": tol,
           "cross_tol": cross_tol, "n_angles": n_angles, "max_labels": max_labels,
           "with_operator_checks": with_operator_checks, "fov_tol": fov_tol}
    report = VerificationReport("main", cfg)

    def run_instance(i):
        p = SUITE_EXPONENTS[i % len(SUITE_EXPONENTS)]
        field_ = "complex" if i % 2 else "real"
        dim = 2 + (i // 2) % 2
        rng = _rng_for(seed, 10_000 + i)
        n_labels = int(rng.integers(1, max_labels + 1))
        pair = random_finite_pair(seed, i, p, dim, field_, n_labels)
        depth = suggested_depth(pair.space, tol / 5.0)
        cloud = approx_spatial_range(pair, schedule=dyadic_schedule(depth),
                                     budget=budget, seed=seed + i)
        hull = convex_hull(cloud.values)
        V = intrinsic_range(pair, n_angles=n_angles, method="both")
        d = hausdorff(hull, V.polygon)
        desc = _describe(pair, {"instance": i, "depth": depth})
        disc = {"hull_vs_intrinsic": d,
                "method_cross_gap": V.extras.get("cross_gap", 0.0)}
        thr = {"hull_vs_intrinsic": tol, "method_cross_gap": cross_tol}
        meas = {
            "hull_excess": directed_hausdorff(hull, V.polygon),
            "intrinsic_uncovered": directed_hausdorff(V.polygon, hull),
            "cloud_size": len(cloud),
            "cg_max_gap": V.extras.get("cg_max_gap"),
        }
        return desc, disc, thr, meas

    for desc, disc, thr, meas in _pmap(run_instance, list(range(count))):
        report.add_instance(desc, disc, thr, meas)

    if with_operator_checks:
        matrices = [
            ("nilpotent", np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)),
            ("diag01", np.diag([0.0, 1.0 + 0j])),
            ("rotated", np.array([[0.2 + 0.1j, 0.6], [-0.1, -0.3 + 0.2j]])),
        ]
        for j, (name, A) in enumerate(matrices):
            desc, disc, thr, meas = _operator_fov_instance(A, name, seed + j, budget, fov_tol)
            report.add_instance(desc, disc, thr, meas)
    return report


def _operator_fov_instance(A: np.ndarray, name: str, seed: int, budget: int, fov_tol: float):
    sp = SpaceSpec("complex", A.shape[0], 2.0)
    pair = from_operator(OperatorSpec(A, A.shape[0]), sp, scheme="quasi-random",
                         count=8192, seed=seed)
    depth = suggested_depth(sp, fov_tol / 3.0)
    cloud = approx_spatial_range(pair, schedule=dyadic_schedule(depth),
                                 budget=max(budget, 16_000), seed=seed)
    hull = convex_hull(cloud.values)
    V = intrinsic_range(pair, n_angles=64, method="norm-derivative")
    oracle = fov_support_polygon(A, 128)
    d_v = hausdorff(V.polygon, oracle.polygon)
    d_w = hausdorff(hull, oracle.polygon)
    desc = _describe(pair, {"operator": name})
    disc = {"intrinsic_vs_fov": d_v, "hull_vs_fov": d_w}
    thr = {"intrinsic_vs_fov": fov_tol, "hull_vs_fov": fov_tol}
    meas = {"depth": depth, "cloud_size": len(cloud)}
    return desc, disc, thr, meas


# ---------------------------------------------------------------------------
# compact / finite coincidence: spatial cloud equals approximated cloud


def verify_compact(pair, tol: float = 1e-3, budget: int = 10_000, seed: int = 0,
                   report: VerificationReport | None = None) -> VerificationReport:
    """Spatial vs approximated cloud for a pair with g(Gamma) on the sphere.

    Uses exact duality faces as the slice candidates, which is the honest
    finite-index limit: every face functional has margin zero, so it lies
    in every slice of the schedule.
    """
    gn = pair.g_norms
    if np.any(np.abs(gn - 1.0) > TOL_ATTAIN):
        raise InputError("verify_compact needs ||g(t)|| = 1 at every index")
    if report is None:
        report = VerificationReport("compact", {"tol": tol, "budget": budget, "seed": seed})
    W = spatial_range(pair, face_budget=max(budget // max(pair.n_indices, 1), 8), seed=seed)
    Wt = approx_spatial_range(pair, schedule=dyadic_schedule(), budget=budget,
                              seed=seed, candidates="faces")
    d = hausdorff(W.values, Wt.values)
    report.add_instance(_describe(pair), {"spatial_vs_approx": d},
                        {"spatial_vs_approx": tol},
                        {"spatial_size": len(W), "approx_size": len(Wt)})
    return report


def compact_suite(count: int = 20, seed: int = 0, tol: float = 1e-3,
                  budget: int = 10_000) -> VerificationReport:
    report = VerificationReport("compact", {"count": count, "seed": seed,
                                            "tol": tol, "budget": budget})
    for i in range(count):
        p = SUITE_EXPONENTS[i % len(SUITE_EXPONENTS)]
        field_ = "complex" if i % 2 else "real"
        dim = 2 + (i // 2) % 2
        rng = _rng_for(seed, 20_000 + i)
        n_labels = int(rng.integers(1, 11))
        pair = random_finite_pair(seed, 500 + i, p, dim, field_, n_labels, unit_g=True)
        verify_compact(pair, tol=tol, budget=budget, seed=seed + i, report=report)
    return report


# ---------------------------------------------------------------------------
# uniformly smooth exponents: closure of W equals the approximated range


SMOOTH_EXPONENTS = (1.5, 2.0, 4.0)


def verify_smooth(pair, tol: float = 5e-2, budget: int = 10_000, seed: int = 0,
                  report: VerificationReport | None = None) -> VerificationReport:
    """Spatial vs approximated cloud under a smooth exponent, full sampler.

    Valid for arbitrary bounded f; requires 1 < p < inf (for the endpoint
    exponents the coincidence genuinely fails, see demo_nonsmooth).
    """
    p = pair.space.p
    if p == 1 or p == math.inf:
        raise InputError(
            "p in {1, inf} is not uniformly smooth; see demo_nonsmooth for the counterexample"
        )
    gn = pair.g_norms
    if np.any(np.abs(gn - 1.0) > TOL_ATTAIN):
        raise InputError("verify_smooth expects g mapping into the unit sphere")
    if report is None:
        report = VerificationReport("smooth", {"tol": tol, "budget": budget, "seed": seed})
    depth = suggested_depth(pair.space, tol / 10.0)
    W = spatial_range(pair, face_budget=max(budget // max(pair.n_indices, 1), 8), seed=seed)
    Wt = approx_spatial_range(pair, schedule=dyadic_schedule(depth), budget=budget, seed=seed)
    d = hausdorff(W.values, Wt.values)
    report.add_instance(_describe(pair, {"depth": depth}), {"spatial_vs_approx": d},
                        {"spatial_vs_approx": tol},
                        {"spatial_size": len(W), "approx_size": len(Wt)})
    return report


def smooth_suite(count: int = 20, seed: int = 0, tol: float = 5e-2,
                 budget: int = 10_000) -> VerificationReport:
    """Random unit-g pairs with arbitrary bounded f, plus operator pairs
    whose f is decoupled from the sphere sampling (a discontinuous choice)."""
    report = VerificationReport("smooth", {"count": count, "seed": seed,
                                           "tol": tol, "budget": budget})
    for i in range(count):
        p = SMOOTH_EXPONENTS[i % len(SMOOTH_EXPONENTS)]
        field_ = "complex" if i % 2 else "real"
        dim = 2 + (i // 2) % 2
        rng = _rng_for(seed, 30_000 + i)
        if i % 4 == 3:
            # sphere-sampled Gamma with f drawn independently per index
            sp = SpaceSpec(field_, dim, p)
            from .spaces import sphere_sample

            X = sphere_sample(sp, "quasi-random", int(rng.integers(6, 16)), seed=seed + i)
            F = _random_vectors(rng, field_, X.shape[0], dim)
            F = F / np.maximum(pnorm(F, p), 1e-12)[:, None] * rng.uniform(0.2, 1.0, size=(X.shape[0], 1))
            pair = make_finite_pair(sp, list(range(X.shape[0])), X, F)
        else:
            n_labels = int(rng.integers(1, 13))
            pair = random_finite_pair(seed, 900 + i, p, dim, field_, n_labels, unit_g=True)
        verify_smooth(pair, tol=tol, budget=budget, seed=seed + i, report=report)
    return report


# ---------------------------------------------------------------------------
# demos: the two phenomena that separate the ranges


def demo_nonattained(N_schedule=(10, 100, 1000), tol: float = 2e-2, budget: int = 10_000,
                     seed: int = 0, v=(0.3, 0.4), depth: int = 12) -> VerificationReport:
    """Non-attainment: W stays empty while the approximated range and the
    intrinsic range both converge to the forced value v_1."""
    Ns = [int(n) for n in N_schedule]
    if not Ns or any(n < 1 for n in Ns) or sorted(Ns) != Ns:
        raise InputError("N schedule must be a nondecreasing sequence of positive integers")
    cfg = {"N_schedule": Ns, "tol": tol, "budget": budget, "seed": seed,
           "v": list(v), "depth": depth}
    report = VerificationReport("demo-nonattained", cfg)
    target = complex(v[0])
    sched = dyadic_schedule(depth)
    dists = []
    for N in Ns:
        pair = make_generated_pair("nonattained", N, v=v)
        W = spatial_range(pair, face_budget=8, seed=seed)
        cloud = approx_spatial_range(pair, schedule=sched, budget=budget, seed=seed)
        d_val = float(np.abs(cloud.values - target).max()) if len(cloud) else math.inf
        d_cov = float(np.abs(cloud.values - target).min()) if len(cloud) else math.inf
        d = max(d_val, d_cov)
        dists.append(d)
        V = intrinsic_range(pair)
        d_v = float(hausdorff(V.polygon, np.array([target])))
        # per-eps convergence at this N: slice distances decrease along the schedule
        slice_d = []
        for eps in sched[:: max(len(sched) // 4, 1)]:
            sl = eps_slice(pair, float(eps), budget=budget // 4, seed=seed)
            slice_d.append(float(np.abs(sl.values - target).max()) if len(sl) else math.inf)
        mono = max([slice_d[k + 1] - slice_d[k] for k in range(len(slice_d) - 1)], default=0.0)
        disc = {"spatial_size": float(len(W)),
                "approx_vs_limit": d,
                "intrinsic_vs_limit": d_v,
                "eps_monotonicity_violation": max(mono, 0.0)}
        thr = {"spatial_size": 0.0, "approx_vs_limit": tol,
               "intrinsic_vs_limit": tol, "eps_monotonicity_violation": tol / 5.0}
        report.add_instance(_describe(pair, {"N": N}), disc, thr,
                            {"slice_distances": slice_d, "approx_size": len(cloud)})
    # direction across N: distances must not degrade as N grows
    mono_n = max([dists[k + 1] - dists[k] for k in range(len(dists) - 1)], default=0.0)
    report.add_instance({"check": "N-direction"},
                        {"N_monotonicity_violation": max(mono_n, 0.0)},
                        {"N_monotonicity_violation": tol / 5.0},
                        {"distances": dists})
    return report


def demo_nonsmooth(N_schedule=(100, 1000), tol: float = 5e-2, budget: int = 10_000,
                   seed: int = 0, depth: int = 12, gap_floor: float = 0.95,
                   segment_tol: float = 1e-2, spatial_tol: float = 1e-6) -> VerificationReport:
    """Non-smooth corner: the spatial cloud collapses to {0} while the
    approximated range fills [0, 1], so the closure of W and the
    approximated range split while conv(approx) still matches the
    intrinsic interval."""
    Ns = [int(n) for n in N_schedule]
    if not Ns or any(n < 1 for n in Ns) or sorted(Ns) != Ns:
        raise InputError("N schedule must be a nondecreasing sequence of positive integers")
    cfg = {"N_schedule": Ns, "tol": tol, "budget": budget, "seed": seed,
           "depth": depth, "gap_floor": gap_floor, "segment_tol": segment_tol,
           "spatial_tol": spatial_tol}
    report = VerificationReport("demo-nonsmooth", cfg)
    segment = interval_polygon(0.0, 1.0)
    sched = dyadic_schedule(depth)
    coverages = []
    for N in Ns:
        pair = make_generated_pair("nonsmooth-corner", N)
        W = spatial_range(pair, face_budget=8, seed=seed)
        cloud = approx_spatial_range(pair, schedule=sched, budget=budget, seed=seed)
        spatial_max = float(np.abs(W.values).max()) if len(W) else math.inf
        coverage = directed_hausdorff(segment, cloud.values, res_hd=1e-3)
        coverages.append(coverage)
        gap = hausdorff(W.values, cloud.values)
        V = intrinsic_range(pair)
        d_interval = hausdorff(V.polygon, segment)
        hull = convex_hull(cloud.values)
        d_hull = hausdorff(hull, V.polygon)
        disc = {
            "spatial_max_abs": spatial_max,
            "coverage_of_unit_segment": coverage,
            "gap_shortfall": max(0.0, gap_floor - gap),
            "intrinsic_vs_unit_segment": d_interval,
            "hull_vs_intrinsic": d_hull,
        }
        thr = {
            "spatial_max_abs": spatial_tol,
            "coverage_of_unit_segment": tol,
            "gap_shortfall": 0.0,
            "intrinsic_vs_unit_segment": segment_tol,
            "hull_vs_intrinsic": 5e-2,
        }
        report.add_instance(_describe(pair, {"N": N}), disc, thr,
                            {"gap": gap, "approx_size": len(cloud),
                             "intrinsic_supports": [float(V.values[0]), float(V.values[1])]})
    mono_n = max([coverages[k + 1] - coverages[k] for k in range(len(coverages) - 1)],
                 default=0.0)
    report.add_instance({"check": "N-direction"},
                        {"N_monotonicity_violation": max(mono_n, 0.0)},
                        {"N_monotonicity_violation": tol / 5.0},
                        {"coverages": coverages})
    return report
