"""Planar geometry: convex hulls, support polygons, Hausdorff distances.

Planar points are complex numbers throughout.  Convex regions are stored as
:class:`Polygon` vertex lists (counterclockwise, possibly degenerate with one
or two vertices), always with solid-set semantics: a polygon stands for its
filled convex region, so distances and containment refer to the region, not
just the outline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InputError

DEFAULT_SUPPORT_GRID = 4096


def _as_points(values) -> np.ndarray:
    z = np.asarray(values, dtype=np.complex128).ravel()
    if z.size == 0:
        raise InputError("empty point set")
    return z


class Polygon:
    """A solid convex region given by its hull vertices (CCW, complex)."""

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=np.complex128).ravel()
        if v.size == 0:
            raise InputError("polygon needs at least one vertex")
        self.vertices = v

    def __repr__(self):
        return f"Polygon({self.vertices!r})"

    @property
    def diameter(self) -> float:
        v = self.vertices
        if v.size == 1:
            return 0.0
        return float(np.abs(v[:, None] - v[None, :]).max())

    def support(self, theta) -> np.ndarray:
        """s(theta) = max Re(e^{-i theta} z) over the region."""
        theta = np.asarray(theta, dtype=float)
        rot = np.exp(-1j * np.atleast_1d(theta))[:, None] * self.vertices[None, :]
        out = np.real(rot).max(axis=1)
        return out if theta.ndim else float(out[0])

    def contains(self, z: complex, tol: float = 1e-9) -> bool:
        return self.distance_to_point(z) <= tol

    def distance_to_point(self, z: complex) -> float:
        v = self.vertices
        if v.size == 1:
            return float(abs(z - v[0]))
        if v.size == 2:
            return _point_segment_distance(z, v[0], v[1])
        edges = np.stack([v, np.roll(v, -1)], axis=1)
        rel = z - edges[:, 0]
        dirs = edges[:, 1] - edges[:, 0]
        cross = np.imag(np.conj(dirs) * rel)
        if np.all(cross >= -1e-12 * max(self.diameter, 1.0)):
            return 0.0
        return float(min(_point_segment_distance(z, a, b) for a, b in edges))

    def distances_to_points(self, zs: np.ndarray) -> np.ndarray:
        return np.array([self.distance_to_point(z) for z in np.asarray(zs).ravel()])

    def boundary_points(self, res: float) -> np.ndarray:
        """Vertices plus edge resampling at spacing <= res."""
        v = self.vertices
        if v.size == 1:
            return v.copy()
        pts = []
        closed = v.size > 2
        pairs = list(zip(v, np.roll(v, -1))) if closed else [(v[0], v[1])]
        for a, b in pairs:
            steps = max(int(np.ceil(abs(b - a) / max(res, 1e-15))), 1)
            t = np.arange(steps) / steps
            pts.append(a + t * (b - a))
        pts.append(v[-1:])
        return np.concatenate(pts)

    def solid_points(self, res: float, cap: int = 20000) -> np.ndarray:
        """Boundary plus an interior lattice, for region-to-set distances."""
        bnd = self.boundary_points(res)
        v = self.vertices
        if v.size <= 2:
            return bnd
        lo_x, hi_x = v.real.min(), v.real.max()
        lo_y, hi_y = v.imag.min(), v.imag.max()
        span = max(hi_x - lo_x, hi_y - lo_y, 1e-15)
        step = max(res, span / int(np.sqrt(cap)))
        xs = np.arange(lo_x, hi_x + step, step)
        ys = np.arange(lo_y, hi_y + step, step)
        gx, gy = np.meshgrid(xs, ys)
        grid = (gx + 1j * gy).ravel()
        inside = np.array([self.distance_to_point(z) == 0.0 for z in grid])
        return np.concatenate([bnd, grid[inside]])

    def edge_normal_angles(self) -> np.ndarray:
        v = self.vertices
        if v.size < 2:
            return np.zeros(0)
        dirs = np.roll(v, -1) - v
        dirs = dirs[np.abs(dirs) > 0]
        ang = np.angle(dirs) - np.pi / 2.0
        if v.size == 2:
            ang = np.concatenate([ang, ang + np.pi])
        return ang


def _point_segment_distance(z: complex, a: complex, b: complex) -> float:
    d = b - a
    L2 = (d * np.conj(d)).real
    if L2 == 0:
        return float(abs(z - a))
    t = ((z - a) * np.conj(d)).real / L2
    t = min(max(t, 0.0), 1.0)
    return float(abs(z - (a + t * d)))


def convex_hull(values) -> Polygon:
    """Monotone-chain hull of a planar point set.

    Vertices are input points; collinear input degenerates to a segment and
    a single repeated point to that point.
    """
    z = _as_points(values)
    pts = sorted(set((float(p.real), float(p.imag)) for p in z))
    if len(pts) == 1:
        return Polygon([complex(*pts[0])])

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) > 1 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) > 1 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all points collinear: keep both extremes
        hull = [lower[0], lower[-1]]
    return Polygon([complex(*p) for p in hull])


def interval_polygon(lo: float, hi: float) -> Polygon:
    """Real interval [lo, hi] as a (possibly degenerate) region."""
    if hi < lo:
        mid = 0.5 * (lo + hi)
        lo = hi = mid
    if hi == lo:
        return Polygon([complex(lo, 0.0)])
    return Polygon([complex(lo, 0.0), complex(hi, 0.0)])


def polygon_from_supports(angles, values, pad: float = 1e-9) -> Polygon:
    """The intersection of half-planes Re(e^{-i phi} z) <= s(phi).

    Each support value is inflated by ``pad`` so that degenerate targets
    (points, segments) stay nonempty under floating-point clipping.
    """
    angles = np.asarray(angles, dtype=float)
    values = np.asarray(values, dtype=float)
    if angles.shape != values.shape or angles.size < 3:
        raise InputError("need matching angle/support arrays with at least 3 angles")
    scale = max(float(np.abs(values).max()), 1.0)
    R = 4.0 * scale
    poly = [complex(R, R), complex(-R, R), complex(-R, -R), complex(R, -R)]
    for phi, s in zip(angles, values):
        d = np.exp(1j * phi)  # outward normal direction
        bound = s + pad * scale
        kept = []
        m = len(poly)
        for i in range(m):
            a, b = poly[i], poly[(i + 1) % m]
            fa = (np.conj(d) * a).real - bound
            fb = (np.conj(d) * b).real - bound
            if fa <= 0:
                kept.append(a)
            if (fa < 0 < fb) or (fb < 0 < fa):
                t = fa / (fa - fb)
                kept.append(a + t * (b - a))
        poly = kept
        if not poly:
            break
    if not poly:
        # Inconsistent supports only happen within numerical noise of a
        # single point; fall back to the least-squares center.
        A = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        x, *_ = np.linalg.lstsq(A, values, rcond=None)
        return Polygon([complex(x[0], x[1])])
    return convex_hull(poly)


@dataclass
class SupportPolygon:
    """A convex region described by support samples s(phi_j).

    ``polygon`` is the intersection of the supporting half-planes; in the
    real-scalar case it degenerates to the interval [-s(pi), s(0)].
    """

    angles: np.ndarray
    values: np.ndarray
    polygon: Polygon
    method: str = "norm-derivative"
    extras: dict = field(default_factory=dict)

    def support(self, theta):
        return self.polygon.support(theta)

    @property
    def vertices(self) -> np.ndarray:
        return self.polygon.vertices


def _to_region(obj):
    if isinstance(obj, SupportPolygon):
        return obj.polygon
    if isinstance(obj, Polygon):
        return obj
    return None


def directed_hausdorff(A, B, res_hd: float | None = None) -> float:
    """sup over points of A of the distance to B (solid semantics)."""
    ra, rb = _to_region(A), _to_region(B)
    if ra is None and rb is None:
        a, b = _as_points(A), _as_points(B)
        D = cdist(np.column_stack([a.real, a.imag]), np.column_stack([b.real, b.imag]))
        return float(D.min(axis=1).max())
    if res_hd is None:
        diam = max((ra.diameter if ra is not None else 0.0),
                   (rb.diameter if rb is not None else 0.0), 1e-6)
        res_hd = diam / 1024.0
    a_pts = ra.solid_points(res_hd) if ra is not None else _as_points(A)
    if rb is not None:
        return float(rb.distances_to_points(a_pts).max())
    b = _as_points(B)
    D = cdist(np.column_stack([a_pts.real, a_pts.imag]), np.column_stack([b.real, b.imag]))
    return float(D.min(axis=1).max())


def hausdorff(A, B, res_hd: float | None = None) -> float:
    """Symmetric Hausdorff distance between clouds and/or convex regions.

    Convex-region pairs use the support-function identity on a dense angle
    grid joined with both regions' edge normals; mixed pairs resample the
    region at resolution ``res_hd``.
    """
    ra, rb = _to_region(A), _to_region(B)
    if ra is not None and rb is not None:
        grid = np.linspace(0.0, 2.0 * np.pi, DEFAULT_SUPPORT_GRID, endpoint=False)
        thetas = np.concatenate([grid, ra.edge_normal_angles(), rb.edge_normal_angles()])
        return float(np.abs(ra.support(thetas) - rb.support(thetas)).max())
    return max(directed_hausdorff(A, B, res_hd), directed_hausdorff(B, A, res_hd))
