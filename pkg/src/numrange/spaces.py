"""Finite-dimensional lp geometry: norms, dual pairing, duality faces, sampling.

A space is R^n or C^n with an lp norm, p in [1, inf].  The dual pairing is
bilinear, y(x) = sum_i y_i x_i, also in the complex case; conjugation lives
inside the duality-map formulas instead.  With that convention the norming
functional of a unit vector u for 1 < p < inf is

    y_i = conj(sgn(u_i)) |u_i|**(p - 1),

which satisfies y(u) = 1 and has dual norm 1.  For p = 1 and p = inf the set
of norming functionals is a face of the dual ball rather than a point; see
:class:`DualityFace`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from . import sampling

# Peak (p = inf) and support (p = 1) detection threshold.  Face structure is
# discontinuous in the base point, so the cutoff is explicit and fixed.
TOL_PEAK = 1e-9
# Unit-norm membership tolerance for functionals and base points.
TOL_UNIT = 1e-9


def dual_exponent(p: float) -> float:
    """Exponent q with 1/p + 1/q = 1, under the convention 1 <-> inf."""
    if p == 1:
        return math.inf
    if p == math.inf:
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class SpaceSpec:
    """Scalar field, dimension and lp exponent of a primal space."""

    field: str
    dim: int
    p: float

    def __post_init__(self):
        if self.field not in ("real", "complex"):
            raise InputError(f"field must be 'real' or 'complex', got {self.field!r}")
        if not (isinstance(self.dim, (int, np.integer)) and self.dim >= 1):
            raise InputError(f"dim must be a positive integer, got {self.dim!r}")
        p = self.p
        if not (p == math.inf or (isinstance(p, (int, float)) and p >= 1)):
            raise InputError(f"p must be in [1, inf], got {p!r}")
        object.__setattr__(self, "p", float(p))

    @property
    def q(self) -> float:
        return dual_exponent(self.p)

    @property
    def dtype(self):
        return np.complex128 if self.field == "complex" else np.float64

    @property
    def is_complex(self) -> bool:
        return self.field == "complex"

    def as_vector(self, coords) -> np.ndarray:
        try:
            v = np.asarray(coords, dtype=self.dtype)
        except (TypeError, ValueError) as exc:
            raise InputError(f"cannot read coordinates as {self.field} scalars: {exc}") from None
        if v.shape != (self.dim,):
            raise InputError(f"expected a vector of length {self.dim}, got shape {v.shape}")
        return v


def pnorm(a: np.ndarray, p: float, axis: int = -1) -> np.ndarray:
    """lp norm along an axis, overflow-safe for large p."""
    mags = np.abs(np.asarray(a))
    if mags.shape[axis] == 0:
        kept = list(mags.shape)
        del kept[axis]
        return np.zeros(kept)
    if p == math.inf:
        return mags.max(axis=axis)
    if p == 1:
        return mags.sum(axis=axis)
    if p == 2:
        return np.sqrt((mags * mags).sum(axis=axis))
    scale = mags.max(axis=axis)
    safe = np.where(scale > 0, scale, 1.0)
    ratio = mags / np.expand_dims(safe, axis)
    out = safe * (ratio**p).sum(axis=axis) ** (1.0 / p)
    return np.where(scale > 0, out, 0.0)


def norm(space: SpaceSpec, v) -> float:
    """lp norm of a single vector in the space."""
    return float(pnorm(space.as_vector(v), space.p))


def dual_norm(space: SpaceSpec, y) -> float:
    """lq norm of a functional over the space."""
    return float(pnorm(space.as_vector(y), space.q))


def pairing(y, x) -> complex:
    """Bilinear pairing y(x) = sum_i y_i x_i (no conjugation)."""
    y = np.asarray(y)
    x = np.asarray(x)
    if y.shape != x.shape:
        raise InputError(f"dimension mismatch in pairing: {y.shape} vs {x.shape}")
    val = complex(np.sum(y * x))
    return val


def _sgn(z: np.ndarray) -> np.ndarray:
    """Phase of each entry, 0 for zero entries."""
    mags = np.abs(z)
    out = np.zeros_like(z)
    nz = mags > 0
    out[nz] = z[nz] / mags[nz]
    return out


def norming_functional(space: SpaceSpec, w) -> np.ndarray:
    """A unit functional y with y(w) = ||w||_p (a real number).

    For smooth p the functional is unique; for p = 1 and p = inf a
    deterministic representative is chosen (lowest peak index wins).
    """
    w = space.as_vector(w)
    mags = np.abs(w)
    total = pnorm(w, space.p)
    if total == 0:
        raise InputError("the zero vector has no norming functional")
    phases = np.conj(_sgn(w))
    p = space.p
    if p == math.inf:
        y = np.zeros_like(w)
        i = int(np.argmax(mags))
        y[i] = phases[i]
        return y
    if p == 1:
        return phases.astype(space.dtype)
    y = phases * (mags / total) ** (p - 1.0)
    return y


@dataclass(frozen=True)
class DualityFace:
    """The set of unit functionals attaining 1 at a unit vector.

    structure:
      ``point``        singleton (smooth p, or degenerate endpoint cases);
      ``simplex``      p = inf: convex combinations of phased basis vectors
                       over the peak coordinates;
      ``disk-product`` p = 1: phase-forced entries on the support, each
                       remaining entry free in the closed unit disk
                       (interval [-1, 1] for real scalars).
    """

    space: SpaceSpec
    base_point: np.ndarray
    structure: str
    support_indices: tuple
    support_values: np.ndarray
    free_indices: tuple = ()
    point: np.ndarray | None = None

    @property
    def kind(self) -> str:
        if self.structure == "point":
            return "singleton"
        if len(self.vertex_count_bound()) == 1:
            return "singleton"
        return "polytope-face"

    def vertex_count_bound(self):
        """Indices enumerating the face's extreme structure (for sizing)."""
        if self.structure == "point":
            return (0,)
        if self.structure == "simplex":
            return self.support_indices
        return tuple(range(max(1, 2 ** len(self.free_indices))))

    def vertices(self, phases: int = 16, cap: int = 4096) -> np.ndarray:
        """Extreme points of the face, phase-sampled where the extreme set
        is a torus (complex p = 1 faces)."""
        n = self.space.dim
        dt = self.space.dtype
        if self.structure == "point":
            return self.point.reshape(1, n).astype(dt)
        if self.structure == "simplex":
            out = np.zeros((len(self.support_indices), n), dtype=dt)
            for row, (i, ph) in enumerate(zip(self.support_indices, self.support_values)):
                out[row, i] = ph
            return out
        # disk-product: extreme points have every free entry of modulus one.
        base = np.zeros(n, dtype=dt)
        for i, ph in zip(self.support_indices, self.support_values):
            base[i] = ph
        nfree = len(self.free_indices)
        if nfree == 0:
            return base.reshape(1, n)
        if self.space.is_complex:
            ring = np.exp(2j * np.pi * np.arange(phases) / phases)
        else:
            ring = np.array([1.0, -1.0])
        grids = np.meshgrid(*([ring] * nfree), indexing="ij")
        combos = np.stack([g.ravel() for g in grids], axis=-1)
        if combos.shape[0] > cap:
            combos = combos[:cap]
        out = np.tile(base, (combos.shape[0], 1))
        for col, i in enumerate(self.free_indices):
            out[:, i] = combos[:, col]
        return out

    def sample(self, budget: int, seed=0, phases: int = 16) -> np.ndarray:
        """Extreme points first, then quasi-random interior samples."""
        return sample_face(self, budget, seed, phases=phases)

    def validate(self, y: np.ndarray, tol: float = 1e-8) -> bool:
        """Check the face invariants for a produced functional."""
        okn = abs(dual_norm(self.space, y) - 1.0) <= tol
        okp = abs(pairing(y, self.base_point) - 1.0) <= tol
        return bool(okn and okp)


def duality_face(space: SpaceSpec, u) -> DualityFace:
    """Exact description of the norming functionals at a unit vector u."""
    u = space.as_vector(u)
    nu = pnorm(u, space.p)
    if abs(nu - 1.0) > TOL_UNIT:
        raise InputError(f"base point must lie on the unit sphere, ||u||_p = {float(nu)!r}")
    p = space.p
    mags = np.abs(u)
    phases = np.conj(_sgn(u))
    if 1 < p < math.inf:
        y = norming_functional(space, u)
        return DualityFace(space, u, "point", (), np.zeros(0, space.dtype), (), y)
    if p == math.inf:
        peaks = tuple(int(i) for i in np.nonzero(mags >= 1.0 - TOL_PEAK)[0])
        vals = phases[list(peaks)]
        if len(peaks) == 1:
            y = np.zeros_like(u)
            y[peaks[0]] = vals[0]
            return DualityFace(space, u, "point", peaks, vals, (), y)
        return DualityFace(space, u, "simplex", peaks, vals)
    # p == 1
    supp = tuple(int(i) for i in np.nonzero(mags > TOL_PEAK)[0])
    free = tuple(int(i) for i in range(space.dim) if i not in supp)
    vals = phases[list(supp)]
    if not free:
        y = np.zeros_like(u)
        y[list(supp)] = vals
        return DualityFace(space, u, "point", supp, vals, (), y)
    return DualityFace(space, u, "disk-product", supp, vals, free)


def _simplex_weights(k: int, count: int, seed) -> np.ndarray:
    """Quasi-random points of the (k-1)-simplex via sorted-spacings."""
    if count <= 0:
        return np.zeros((0, k))
    if k == 1:
        return np.ones((count, 1))
    u = sampling.halton(k - 1, count, seed)
    u = np.sort(u, axis=1)
    padded = np.hstack([np.zeros((count, 1)), u, np.ones((count, 1))])
    return np.diff(padded, axis=1)


def sample_face(face: DualityFace, budget: int, seed=0, phases: int = 16) -> np.ndarray:
    """Deterministic finite sample of a duality face.

    All extreme points come first (the full list when finite, a phase grid
    for torus factors), then the centroid, then quasi-random interior
    points, truncated to ``budget`` rows.
    """
    if budget < 1:
        raise InputError("face sampling budget must be >= 1")
    space = face.space
    n = space.dim
    dt = space.dtype
    if face.structure == "point":
        return face.point.reshape(1, n).astype(dt)
    verts = face.vertices(phases=phases)
    blocks = [verts[:budget]]
    remaining = budget - blocks[0].shape[0]
    if remaining <= 0:
        return blocks[0]
    if face.structure == "simplex":
        k = len(face.support_indices)
        centroid = np.full((1, k), 1.0 / k)
        weights = np.vstack([centroid, _simplex_weights(k, remaining - 1, sampling.child_seed(0 if seed is None else seed, sampling.TAG_FACE, 0))])
        out = np.zeros((weights.shape[0], n), dtype=dt)
        for col, (i, ph) in enumerate(zip(face.support_indices, face.support_values)):
            out[:, i] = weights[:, col] * ph
        blocks.append(out)
    else:
        base = np.zeros(n, dtype=dt)
        for i, ph in zip(face.support_indices, face.support_values):
            base[i] = ph
        mid = base.reshape(1, n).copy()  # free entries at zero
        nfree = len(face.free_indices)
        count = remaining - 1
        if space.is_complex:
            uv = sampling.halton(2 * nfree, max(count, 0), sampling.child_seed(0 if seed is None else seed, sampling.TAG_FACE, 1))
            radii, angles = uv[:, :nfree], 2 * np.pi * uv[:, nfree:]
            fill = radii * np.exp(1j * angles)
        else:
            uv = sampling.halton(nfree, max(count, 0), sampling.child_seed(0 if seed is None else seed, sampling.TAG_FACE, 1))
            fill = 2.0 * uv - 1.0
        interior = np.tile(base, (max(count, 0), 1))
        for col, i in enumerate(face.free_indices):
            interior[:, i] = fill[:, col]
        blocks.append(np.vstack([mid, interior]) if count >= 0 else mid)
    out = np.vstack(blocks)
    return out[:budget]


def near_norming_pool(space: SpaceSpec, u, budget: int, seed=0, phases: int = 16) -> np.ndarray:
    """Unit-functional candidates concentrated around the norming set of u.

    The pool mixes (a) the norming functional and duality-face samples of
    u / ||u|| when u is nonzero, (b) signed (and, for complex scalars,
    phased) basis functionals, (c) multi-scale perturbations of the face
    samples renormalized to the dual sphere, and (d) global quasi-random
    dual-sphere proposals.  No feasibility filtering happens here; callers
    slice the pool by the margin 1 - Re y(u).
    """
    u = space.as_vector(u)
    n = space.dim
    dt = space.dtype
    q = space.q
    U = float(pnorm(u, space.p))

    blocks = []
    if U > 0:
        uhat = u / U
        try:
            facesamp = sample_face(duality_face(space, uhat), min(budget, max(8, 4 * n)), seed, phases=phases)
            blocks.append(facesamp)
        except InputError:
            blocks.append(norming_functional(space, u).reshape(1, n))
    basis = []
    for i in range(n):
        e = np.zeros(n, dtype=dt)
        e[i] = 1.0
        basis.append(e)
        basis.append(-e)
        if space.is_complex:
            basis.append(1j * e)
            basis.append(-1j * e)
    blocks.append(np.asarray(basis))

    used = sum(b.shape[0] for b in blocks)
    remaining = max(budget - used, 0)
    n_perturb = remaining // 2
    n_global = remaining - n_perturb

    if n_perturb > 0 and blocks[0].shape[0] > 0:
        anchors = blocks[0]
        scales = 2.0 ** -np.arange(0, 27, 2, dtype=float)  # 1 down to ~1.5e-8
        if space.is_complex:
            dirs = sampling.complex_directions(n, n_perturb, sampling.child_seed(seed, sampling.TAG_NEAR_NORMING, 0))
        else:
            dirs = sampling.gaussian_directions(n, n_perturb, sampling.child_seed(seed, sampling.TAG_NEAR_NORMING, 0)).astype(dt)
        anchor_idx = np.arange(n_perturb) % anchors.shape[0]
        scale_idx = (np.arange(n_perturb) // max(anchors.shape[0], 1)) % scales.size
        prop = anchors[anchor_idx] + scales[scale_idx, None] * dirs
        nrm = pnorm(prop, q)[:, None]
        good = nrm[:, 0] > 0
        blocks.append(prop[good] / nrm[good])

    if n_global > 0:
        if space.is_complex:
            dirs = sampling.complex_directions(n, n_global, sampling.child_seed(seed, sampling.TAG_NEAR_NORMING, 1))
        else:
            dirs = sampling.gaussian_directions(n, n_global, sampling.child_seed(seed, sampling.TAG_NEAR_NORMING, 1)).astype(dt)
        nrm = pnorm(dirs, q)[:, None]
        good = nrm[:, 0] > 0
        blocks.append(dirs[good] / nrm[good])

    pool = np.vstack([b for b in blocks if b.size]).astype(dt)
    return pool[: max(budget, used)]


def near_norming(space: SpaceSpec, u, eps: float, budget: int, seed=0) -> np.ndarray:
    """Unit functionals y with Re y(u) > 1 - eps, strictly.

    Empty exactly when no unit functional satisfies the bound, i.e. when
    ||u||_p <= 1 - eps.
    """
    if not eps > 0:
        raise InputError(f"eps must be positive, got {eps!r}")
    u = space.as_vector(u)
    pool = near_norming_pool(space, u, budget, seed)
    margins = 1.0 - np.real(pool @ u)
    keep = margins < eps  # strict: Re y(u) > 1 - eps
    return pool[keep][:budget]


def sphere_sample(space: SpaceSpec, scheme: str, count: int, seed=0) -> np.ndarray:
    """Unit-sphere samples; the grid scheme always contains every signed
    standard basis vector (and the phased ones for complex scalars)."""
    if count < 1:
        raise InputError("sphere sample count must be >= 1")
    if scheme not in ("grid", "quasi-random"):
        raise InputError(f"unknown sphere sampling scheme {scheme!r}")
    n = space.dim
    dt = space.dtype
    blocks = []
    if scheme == "grid":
        basis = []
        for i in range(n):
            e = np.zeros(n, dtype=dt)
            e[i] = 1.0
            basis.append(e)
            basis.append(-e)
            if space.is_complex:
                basis.append(1j * e)
                basis.append(-1j * e)
        blocks.append(np.asarray(basis))
        fill_seed = sampling.child_seed(0, sampling.TAG_SPHERE, 0)
    else:
        fill_seed = sampling.child_seed(seed, sampling.TAG_SPHERE, 1)
    used = sum(b.shape[0] for b in blocks)
    extra = count - used
    if extra > 0:
        if space.is_complex:
            dirs = sampling.complex_directions(n, extra, fill_seed)
        else:
            dirs = sampling.gaussian_directions(n, extra, fill_seed).astype(dt)
        nrm = pnorm(dirs, space.p)[:, None]
        good = nrm[:, 0] > 0
        blocks.append(dirs[good] / nrm[good])
    out = np.vstack(blocks)[:count]
    # Renormalize once more so membership holds to 1e-12 even after division.
    out = out / pnorm(out, space.p)[:, None]
    return out
