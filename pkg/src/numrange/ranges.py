"""Range computations over indexed pairs.

Three planar sets are computed for a pair (Gamma, g, f) with sup ||g|| = 1:

* the spatial cloud, values y(f(t)) over indices where ||g(t)|| = 1 and y
  exactly norms g(t);
* eps-slices, values over (t, y) with Re y(g(t)) > 1 - eps strictly;
* the approximated spatial cloud, the finest slice of a decreasing
  eps-schedule filtered by eta-stability across all coarser slices.

Slices share one candidate pool per index (derived from the root seed), so
the sampled slices are nested exactly as the underlying sets are, and every
point carries the margin 1 - Re y(g(t)) as its stability level: the point
belongs to precisely the slices whose eps exceeds that margin.

The intrinsic range (values Phi(f) over norm-one dual functionals with
Phi(g) = 1) is recovered through its support function.  The default route
evaluates the classical one-sided-derivative identity

    sup Re e^{-i phi} V = inf_{a > 0} (||g + a e^{-i phi} f|| - 1) / a

on a geometric grid in a; the difference quotient is nondecreasing in a by
convexity of the norm, which is verified on the fly.  A conditional-gradient
state solver provides the independent cross-check (see states.py).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import InputError, NumrangeError
from .spaces import SpaceSpec, pnorm, duality_face, sample_face, near_norming_pool
from .pairs import TOL_ATTAIN
from .geometry import SupportPolygon, interval_polygon, polygon_from_supports
from . import sampling

REAL_ANGLES = np.array([0.0, math.pi])
DEFAULT_ANGLES = 64
DEFAULT_DEPTH = 12
MAX_DEPTH = 34


def dyadic_schedule(depth: int = DEFAULT_DEPTH) -> np.ndarray:
    """The default eps-schedule 2^-1, 2^-2, ..., 2^-depth."""
    if depth < 1:
        raise InputError("schedule depth must be >= 1")
    return 2.0 ** -np.arange(1, depth + 1, dtype=float)


def suggested_depth(space: SpaceSpec, target: float = 1e-2) -> int:
    """Schedule depth that shrinks near-norming caps below ``target``.

    The cap {||y||_q = 1, Re y(u) > 1 - eps} around a norming point has
    diameter controlled by the modulus of convexity of the dual ball:
    about 2 (q eps / 2)^(1/q) for q >= 2 and 2 sqrt(eps / (q - 1)) for
    1 < q < 2.  Endpoint exponents have polyhedral faces whose slack is
    linear in eps and keep the default depth.
    """
    q = space.q
    if q == 1 or q == math.inf:
        return DEFAULT_DEPTH
    if q >= 2:
        eps_needed = (2.0 / q) * (target / 2.0) ** q
    else:
        eps_needed = (q - 1.0) * target**2 / 4.0
    depth = int(math.ceil(-math.log2(max(eps_needed, 2.0**-MAX_DEPTH))))
    return int(min(max(depth, DEFAULT_DEPTH), MAX_DEPTH))


@dataclass
class RangeCloud:
    """A finite planar point multiset with per-point provenance.

    ``stability`` holds the margin 1 - Re y(g(t)) of each point, clamped at
    zero: the smallest eps-slice the point still belongs to.
    """

    kind: str
    space: SpaceSpec
    values: np.ndarray
    labels: list
    functionals: np.ndarray
    stability: np.ndarray
    f_sup: float
    eps: float | None = None
    schedule: np.ndarray | None = None
    eta: float | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        self.stability = np.asarray(self.stability, dtype=float)
        self.check_invariants()

    def check_invariants(self):
        if self.values.size:
            if np.abs(self.values).max() > self.f_sup + 1e-9:
                raise NumrangeError("cloud value exceeds ||f||_inf + 1e-9")
        if self.kind == "eps-slice" and self.values.size:
            if not np.all(self.stability < self.eps):
                raise NumrangeError("eps-slice point violates the strict margin bound")

    @property
    def is_empty(self) -> bool:
        return self.values.size == 0

    def __len__(self):
        return int(self.values.size)

    def rotated(self, theta: complex) -> "RangeCloud":
        """The cloud of (g, theta f): same provenance, values scaled."""
        return RangeCloud(self.kind, self.space, theta * self.values, list(self.labels),
                         self.functionals.copy(), self.stability.copy(),
                         abs(theta) * self.f_sup, self.eps,
                         None if self.schedule is None else self.schedule.copy(), self.eta)


def _empty_cloud(kind, pair, **kw) -> RangeCloud:
    return RangeCloud(kind, pair.space, np.zeros(0, dtype=np.complex128), [],
                     np.zeros((0, pair.space.dim), dtype=pair.space.dtype),
                     np.zeros(0), pair.f_sup, **kw)


def spatial_range(pair, face_budget: int = 64, seed: int = 0) -> RangeCloud:
    """Values y(f(t)) over exactly norming pairs (t, y).

    Empty exactly when no index attains ||g(t)|| = 1 (within the attainment
    tolerance); faces at attaining indices are sampled exhaustively through
    their extreme points first.
    """
    space = pair.space
    labels, G, F = pair.enumerate_arrays()
    gn = pnorm(G, space.p)
    vals, labs, funcs, stabs = [], [], [], []
    for i, lab in enumerate(labels):
        if abs(gn[i] - 1.0) > TOL_ATTAIN:
            continue
        face = duality_face(space, G[i] / gn[i])
        Y = sample_face(face, face_budget, sampling.child_seed(seed, sampling.TAG_FACE, i))
        vals.append(Y @ F[i])
        funcs.append(Y)
        stabs.append(np.maximum(1.0 - np.real(Y @ G[i]), 0.0))
        labs.extend([lab] * Y.shape[0])
    if not vals:
        return _empty_cloud("spatial", pair)
    return RangeCloud("spatial", space, np.concatenate(vals), labs,
                     np.vstack(funcs), np.concatenate(stabs), pair.f_sup)


def _index_pools(pair, finest_eps: float, budget: int, seed: int, candidates: str):
    """Per-index candidate functionals with margins and values.

    candidates = "full" uses the near-norming pools; "faces" restricts to
    duality-face samples of the normalized g(t) (exact faces), which is the
    finite/compact verification mode.
    """
    space = pair.space
    labels = pair.slice_labels(finest_eps)
    G, F = pair.vectors_for(labels)
    per = max(budget // max(len(labels), 1), 8)
    pools = []
    for i, lab in enumerate(labels):
        child = sampling.child_seed(seed, sampling.TAG_SLICE, i)
        gi = G[i]
        if candidates == "full":
            Y = near_norming_pool(space, gi, per, child)
        elif candidates == "faces":
            gnorm = float(pnorm(gi, space.p))
            if gnorm == 0:
                continue
            Y = sample_face(duality_face(space, gi / gnorm), per, child)
        else:
            raise InputError(f"unknown candidate mode {candidates!r}")
        margins = 1.0 - np.real(Y @ gi)
        pools.append((lab, Y, margins, Y @ F[i]))
    return pools


def eps_slice(pair, eps: float, budget: int = 10_000, seed: int = 0,
              candidates: str = "full") -> RangeCloud:
    """Sampled slice {y(f(t)) : Re y(g(t)) > 1 - eps}, strict inequality."""
    if not eps > 0:
        raise InputError(f"eps must be positive, got {eps!r}")
    vals, labs, funcs, stabs = [], [], [], []
    for lab, Y, margins, values in _index_pools(pair, eps, budget, seed, candidates):
        keep = margins < eps
        if not np.any(keep):
            continue
        vals.append(values[keep])
        funcs.append(Y[keep])
        stabs.append(np.maximum(margins[keep], 0.0))
        labs.extend([lab] * int(keep.sum()))
    if not vals:
        return _empty_cloud("eps-slice", pair, eps=eps)
    return RangeCloud("eps-slice", pair.space, np.concatenate(vals), labs,
                     np.vstack(funcs), np.concatenate(stabs), pair.f_sup, eps=eps)


def _validate_schedule(schedule) -> np.ndarray:
    sched = np.asarray(schedule, dtype=float)
    if sched.ndim != 1 or sched.size < 1:
        raise InputError("eps schedule must be a nonempty 1-d sequence")
    if not np.all(sched > 0):
        raise InputError("eps schedule must be positive")
    if sched.size > 1 and not np.all(np.diff(sched) < 0):
        raise InputError("eps schedule must be strictly decreasing")
    return sched


def approx_spatial_range(pair, schedule=None, eta: float | None = None,
                         budget: int = 10_000, seed: int = 0,
                         candidates: str = "full") -> RangeCloud:
    """Finest-slice points that persist across the whole eps-schedule.

    Approximates the intersection over the schedule of the slice closures.
    A finest-slice point survives when every coarser slice holds a neighbor
    within eta; with the shared candidate pools the sampled slices are
    nested, so the filter only removes points when slices are sampled
    independently or pools are restricted.
    """
    sched = _validate_schedule(dyadic_schedule() if schedule is None else schedule)
    if eta is None:
        eta = 1e-3 * (pair.f_sup if pair.f_sup > 0 else 1.0)
    pools = _index_pools(pair, float(sched[-1]), budget, seed, candidates)

    slice_values = []
    for eps_k in sched:
        parts = [values[margins < eps_k] for _, _, margins, values in pools]
        slice_values.append(np.concatenate(parts) if parts else np.zeros(0, np.complex128))

    finest = slice_values[-1]
    if finest.size == 0:
        return _empty_cloud("approx-spatial", pair, schedule=sched, eta=eta)

    survivors = np.ones(finest.size, dtype=bool)
    pts = np.column_stack([finest.real, finest.imag])
    for cloud in slice_values[:-1]:
        if cloud.size == 0:
            survivors[:] = False
            break
        tree = cKDTree(np.column_stack([cloud.real, cloud.imag]))
        dist, _ = tree.query(pts, k=1)
        survivors &= dist <= eta

    vals, labs, funcs, stabs = [], [], [], []
    offset = 0
    eps_finest = float(sched[-1])
    for lab, Y, margins, values in pools:
        keep = margins < eps_finest
        m = int(keep.sum())
        if m == 0:
            continue
        sel = survivors[offset:offset + m]
        offset += m
        if not np.any(sel):
            continue
        vals.append(values[keep][sel])
        funcs.append(Y[keep][sel])
        stabs.append(np.maximum(margins[keep][sel], 0.0))
        labs.extend([lab] * int(sel.sum()))
    if not vals:
        return _empty_cloud("approx-spatial", pair, schedule=sched, eta=eta)
    return RangeCloud("approx-spatial", pair.space, np.concatenate(vals), labs,
                     np.vstack(funcs), np.concatenate(stabs), pair.f_sup,
                     schedule=sched, eta=eta)


def nested_sup_re(clouds, eta: float = 0.0):
    """Both sides of the nested-compacts identity on sampled clouds.

    For a decreasing family, returns (sup Re of the eta-stable intersection,
    inf over n of sup Re of cloud n).  On exactly nested inputs the two
    sides agree.
    """
    arrays = []
    for c in clouds:
        z = c.values if isinstance(c, RangeCloud) else np.asarray(c, dtype=np.complex128).ravel()
        if z.size == 0:
            raise InputError("nested clouds must be nonempty")
        arrays.append(z)
    if not arrays:
        raise InputError("need at least one cloud")
    rhs = min(float(z.real.max()) for z in arrays)
    last = arrays[-1]
    keep = np.ones(last.size, dtype=bool)
    pts = np.column_stack([last.real, last.imag])
    for z in arrays[:-1]:
        tree = cKDTree(np.column_stack([z.real, z.imag]))
        dist, _ = tree.query(pts, k=1)
        keep &= dist <= eta
    lhs = float(last.real[keep].max()) if np.any(keep) else -math.inf
    return lhs, rhs


DEFAULT_ALPHA_GRID = 2.0 ** -np.arange(1, 37, dtype=float)


def norm_derivative_support(pair, phi: float, alpha_grid=None,
                            extrapolate: bool = False) -> float:
    """sup Re e^{-i phi} of the intrinsic range via norm difference quotients.

    Evaluates (||g + a e^{-i phi} f|| - 1) / a on a geometric grid and takes
    the minimum; the quotient is nondecreasing in a, which is checked with a
    floating-point-aware slack.  g is renormalized by its measured supremum
    so the quotient stays meaningful at tiny a.
    """
    grid = np.asarray(DEFAULT_ALPHA_GRID if alpha_grid is None else alpha_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or not np.all(grid > 0):
        raise InputError("alpha grid must be positive")
    grid = np.sort(grid)[::-1]  # descending
    gsup = pair.combo_norm(1.0, 0.0)
    if gsup <= 0:
        raise InputError("pair has vanishing reference function")
    rot = np.exp(-1j * phi) if pair.space.is_complex else math.cos(phi)
    if not pair.space.is_complex and abs(math.sin(phi)) > 1e-12:
        raise InputError("real-scalar pairs only admit directions 0 and pi")
    quotients = np.array([
        (pair.combo_norm(1.0 / gsup, (a * rot) / gsup) - 1.0) / a for a in grid
    ])
    # Convexity: quotient nondecreasing in a.  Allow cancellation noise that
    # grows like eps / a at small a.
    for j in range(1, grid.size):
        slack = 1e-9 + 64.0 * np.finfo(float).eps / grid[j]
        if quotients[j] > quotients[j - 1] + slack:
            raise NumrangeError(
                "difference quotient failed its monotonicity check "
                f"(a={grid[j]!r}: {quotients[j]!r} > {quotients[j-1]!r})"
            )
    s = float(quotients.min())
    if extrapolate and grid.size >= 3:
        q2, q1, q0 = quotients[-3], quotients[-2], quotients[-1]
        d1, d0 = q2 - q1, q1 - q0
        if d0 > 0 and d1 > d0:
            limit = q0 - d0 * d0 / (d1 - d0)  # geometric-tail Aitken step
            if s - 1e-6 <= limit <= s:
                s = float(limit)
    return s


def _angle_grid(space: SpaceSpec, n_angles: int) -> np.ndarray:
    if not space.is_complex:
        return REAL_ANGLES.copy()
    if n_angles < 8:
        raise InputError("need at least 8 support angles for complex scalars")
    return np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)


def _interval_from_supports(s0: float, spi: float) -> "interval_polygon":
    return interval_polygon(-spi, s0)


def intrinsic_range(pair, n_angles: int = DEFAULT_ANGLES, method: str = "norm-derivative",
                    alpha_grid=None, cg_options: dict | None = None) -> SupportPolygon:
    """Support polygon of the intrinsic range.

    ``method`` selects the norm-derivative route, the conditional-gradient
    state solver (finite index sets only), or ``both``, in which case the
    polygon comes from the norm-derivative values and the maximal gap
    between the methods is reported in ``extras['cross_gap']``.
    """
    if method not in ("norm-derivative", "states", "both"):
        raise InputError(f"unknown intrinsic-range method {method!r}")
    space = pair.space
    angles = _angle_grid(space, n_angles)

    nd_values = None
    if method in ("norm-derivative", "both"):
        nd_values = np.array([norm_derivative_support(pair, phi, alpha_grid) for phi in angles])

    st_values = None
    st_extras = {}
    if method in ("states", "both"):
        from .states import states_support_values

        if pair.kind != "finite":
            if method == "states":
                raise InputError("the state solver requires a finite index set")
            st_extras["states_skipped"] = "generated index set: state solver needs finite Gamma"
        else:
            st_values, st_extras = states_support_values(pair, angles, cg_options)

    base = nd_values if nd_values is not None else st_values
    if space.is_complex:
        poly = polygon_from_supports(angles, base)
    else:
        poly = _interval_from_supports(base[0], base[1])
    extras = dict(st_extras)
    if nd_values is not None and st_values is not None:
        extras["cross_gap"] = float(np.abs(nd_values - st_values).max())
        extras["states_values"] = st_values
    sp = SupportPolygon(angles, np.asarray(base, dtype=float), poly,
                        method=method, extras=extras)
    return sp
