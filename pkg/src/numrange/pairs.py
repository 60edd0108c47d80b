"""Indexed pairs (Gamma, g, f): the data every range computation consumes.

A pair couples an index set with two vector assignments into a common space,
normalized so that sup_t ||g(t)|| = 1.  Three constructions are provided:

* finite pairs from explicit label/vector lists,
* generated pairs, built-in one-parameter families over m = 1, 2, 3, ...
  whose supremum certificate is analytic (the index set is conceptually
  infinite; the truncation N only bounds enumeration),
* operator pairs, where Gamma samples the unit sphere of a coordinate
  subspace, g is the inclusion and f the operator action.

Generated families have g(m) = g0 + g1/m and f(m) = f0 + f1/m.  Since
s -> ||a g(s) + b f(s)|| is convex in s = 1/m, suprema over the whole family
are attained at the endpoints s -> 0 and s = 1, which is what
:meth:`GeneratedPair.combo_norm` evaluates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NormalizationError
from .spaces import SpaceSpec, pnorm

TOL_GNORM = 1e-9
TOL_ATTAIN = 1e-9

# Largest index a generated-family ladder will propose.
MAX_GENERATED_INDEX = 2**40


@dataclass(frozen=True)
class SupCertificate:
    """How sup_t ||g(t)|| = 1 is realized."""

    kind: str  # "attained" | "asymptotic"
    detail: str
    at_label: object | None = None


@dataclass(frozen=True)
class OperatorSpec:
    """A matrix from a k-dimensional coordinate subspace into the space."""

    matrix: np.ndarray  # shape (n, k)
    domain_dim: int

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2:
            raise InputError("operator matrix must be two-dimensional")
        if m.shape[1] != self.domain_dim:
            raise InputError(
                f"matrix has {m.shape[1]} columns, domain_dim is {self.domain_dim}"
            )
        if self.domain_dim < 1 or self.domain_dim > m.shape[0]:
            raise InputError("need 1 <= domain_dim <= codomain dimension")
        object.__setattr__(self, "matrix", m)

    def embed(self, x: np.ndarray, n: int) -> np.ndarray:
        """Coordinate inclusion of the first k coordinates, isometric in lp."""
        out = np.zeros(n, dtype=np.result_type(x, np.float64))
        out[: self.domain_dim] = x
        return out


class IndexedPair:
    """A finite indexed pair over explicit labels."""

    kind = "finite"

    def __init__(self, space: SpaceSpec, labels, G: np.ndarray, F: np.ndarray,
                 certificate: SupCertificate, meta: dict | None = None):
        self.space = space
        self.labels = list(labels)
        self.G = np.asarray(G, dtype=space.dtype)
        self.F = np.asarray(F, dtype=space.dtype)
        if self.G.shape != (len(self.labels), space.dim) or self.F.shape != self.G.shape:
            raise InputError("label list and vector arrays disagree in shape")
        self.certificate = certificate
        self.meta = dict(meta or {})
        self._by_label = {lab: i for i, lab in enumerate(self.labels)}
        self.g_norms = pnorm(self.G, space.p)
        self.f_sup = float(pnorm(self.F, space.p).max()) if len(self.labels) else 0.0

    # -- evaluation ---------------------------------------------------
    def evaluate(self, label):
        try:
            i = self._by_label[label]
        except KeyError:
            raise InputError(f"unknown index label {label!r}") from None
        return self.G[i].copy(), self.F[i].copy()

    def enumerate_arrays(self):
        """(labels, G, F) for the enumerable part of the index set."""
        return self.labels, self.G, self.F

    def attaining(self, tol: float = TOL_ATTAIN):
        """Labels where ||g(t)|| = 1 within tol."""
        return [lab for lab, gn in zip(self.labels, self.g_norms) if abs(gn - 1.0) <= tol]

    # -- norms over the index set --------------------------------------
    def combo_norm(self, a, b) -> float:
        """sup_t ||a g(t) + b f(t)||."""
        if not self.labels:
            return 0.0
        return float(pnorm(a * self.G + b * self.F, self.space.p).max())

    def slice_labels(self, eps: float):
        """Index labels worth probing for the eps-slice (all of them here)."""
        return self.labels

    def vectors_for(self, labels):
        idx = [self._by_label[lab] for lab in labels]
        return self.G[idx], self.F[idx]

    @property
    def n_indices(self) -> int:
        return len(self.labels)

    def check_invariants(self, tol: float = TOL_GNORM) -> None:
        sup = float(self.g_norms.max()) if len(self.labels) else 0.0
        if abs(sup - 1.0) > tol:
            raise NormalizationError(sup)


class GeneratedPair:
    """A built-in family over m = 1, 2, 3, ... with truncation N.

    The supremum certificate refers to the whole family; N only bounds
    enumeration (spatial clouds, reports).  Slice computations may probe
    indices beyond N, which the asymptotic certificate licenses.
    """

    kind = "generated"

    def __init__(self, family: str, space: SpaceSpec, g0, g1, f0, f1, N: int,
                 certificate: SupCertificate, params: dict):
        self.family = family
        self.space = space
        self.g0 = np.asarray(g0, dtype=space.dtype)
        self.g1 = np.asarray(g1, dtype=space.dtype)
        self.f0 = np.asarray(f0, dtype=space.dtype)
        self.f1 = np.asarray(f1, dtype=space.dtype)
        if N < 1:
            raise InputError("truncation N must be >= 1")
        self.N = int(N)
        self.certificate = certificate
        self.params = dict(params)
        self.meta = {}
        self.f_sup = self.combo_norm(0.0, 1.0)

    # -- evaluation ---------------------------------------------------
    def _eval_unchecked(self, m: int):
        s = 1.0 / m
        return self.g0 + s * self.g1, self.f0 + s * self.f1

    def evaluate(self, label):
        m = int(label)
        if not 1 <= m <= self.N:
            raise InputError(f"generated index must satisfy 1 <= m <= N={self.N}, got {label!r}")
        return self._eval_unchecked(m)

    @property
    def labels(self):
        return list(range(1, self.N + 1))

    @property
    def n_indices(self) -> int:
        return self.N

    def enumerate_arrays(self):
        ms = np.arange(1, self.N + 1, dtype=float)
        G = self.g0[None, :] + self.g1[None, :] / ms[:, None]
        F = self.f0[None, :] + self.f1[None, :] / ms[:, None]
        return list(range(1, self.N + 1)), G, F

    @property
    def g_norms(self):
        _, G, _ = self.enumerate_arrays()
        return pnorm(G, self.space.p)

    def attaining(self, tol: float = TOL_ATTAIN):
        labels, G, _ = self.enumerate_arrays()
        gn = pnorm(G, self.space.p)
        return [lab for lab, v in zip(labels, gn) if abs(v - 1.0) <= tol]

    # -- norms over the whole family ------------------------------------
    def combo_norm(self, a, b) -> float:
        """sup over all m >= 1 of ||a g(m) + b f(m)||, by the endpoint rule."""
        base = a * self.g0 + b * self.f0
        slope = a * self.g1 + b * self.f1
        at_limit = float(pnorm(base, self.space.p))
        at_one = float(pnorm(base + slope, self.space.p))
        return max(at_limit, at_one)

    def slice_labels(self, eps: float):
        """Deterministic index ladder for an eps-slice.

        Small indices, a dyadic ladder up to N, then a dyadic extension to
        roughly 64 / eps so that near-norming windows that only open for
        large m are represented.
        """
        if not eps > 0:
            raise InputError("eps must be positive")
        idx = set(range(1, min(self.N, 9)))
        m = 1
        while m <= self.N:
            idx.add(m)
            m *= 2
        idx.add(self.N)
        target = int(min(MAX_GENERATED_INDEX, max(self.N, math.ceil(64.0 / eps))))
        m = max(self.N, 1)
        while m < target:
            m *= 2
            idx.add(min(m, target))
        return sorted(idx)

    def vectors_for(self, labels):
        ms = np.asarray([float(m) for m in labels])
        G = self.g0[None, :] + self.g1[None, :] / ms[:, None]
        F = self.f0[None, :] + self.f1[None, :] / ms[:, None]
        return G, F

    def check_invariants(self, tol: float = TOL_GNORM) -> None:
        sup = self.combo_norm(1.0, 0.0)
        if abs(sup - 1.0) > tol:
            raise NormalizationError(sup)


def make_finite_pair(space: SpaceSpec, labels, g_vectors, f_vectors,
                     meta: dict | None = None) -> IndexedPair:
    """Build and validate a finite pair; g must have sup-norm exactly one."""
    labels = list(labels)
    if not labels:
        raise InputError("index set must be nonempty")
    if len(set(labels)) != len(labels):
        raise InputError("index labels must be distinct")
    if len(g_vectors) != len(labels) or len(f_vectors) != len(labels):
        raise InputError("labels, g-vectors and f-vectors must have equal lengths")
    G = np.asarray([space.as_vector(v) for v in g_vectors])
    F = np.asarray([space.as_vector(v) for v in f_vectors])
    gn = pnorm(G, space.p)
    sup = float(gn.max())
    if abs(sup - 1.0) > TOL_GNORM:
        raise NormalizationError(sup)
    at = labels[int(np.argmax(gn))]
    cert = SupCertificate("attained", f"max_t ||g(t)|| attained at label {at!r}", at)
    return IndexedPair(space, labels, G, F, cert, meta)


def make_generated_pair(family: str, N: int, v=None) -> GeneratedPair:
    """One of the built-in generated families.

    ``nonattained``      Y = real l2^2, g(m) = (1 - 1/m) e1, f(m) = v fixed.
                         sup ||g|| = 1 but no index attains it.
    ``nonsmooth-corner`` Y = real linf^2, g(m) = (1, 1 - 1/m), f(m) = (0, 1).
                         ||g(m)|| = 1 at every index; the norming set at
                         each g(m) is the lone functional (1, 0).
    """
    if family == "nonattained":
        space = SpaceSpec("real", 2, 2.0)
        v = np.asarray([0.3, 0.4] if v is None else v, dtype=float)
        if v.shape != (2,):
            raise InputError("parameter v must be a 2-vector")
        cert = SupCertificate(
            "asymptotic", "||g(m)|| = 1 - 1/m increases to 1, attained only in the limit"
        )
        return GeneratedPair(family, space, [1.0, 0.0], [-1.0, 0.0], v, [0.0, 0.0],
                             N, cert, {"v": v.tolist(), "N": int(N)})
    if family == "nonsmooth-corner":
        space = SpaceSpec("real", 2, math.inf)
        cert = SupCertificate("attained", "||g(m)||_inf = 1 at every index", 1)
        return GeneratedPair(family, space, [1.0, 1.0], [0.0, -1.0], [0.0, 1.0], [0.0, 0.0],
                             N, cert, {"N": int(N)})
    raise InputError(f"unknown generated family {family!r}")


def from_operator(op: OperatorSpec, space: SpaceSpec, scheme: str = "grid",
                  count: int = 64, seed: int = 0) -> IndexedPair:
    """Pair with Gamma sampling S_X, g the inclusion and f the operator.

    X is the lp space on the first k coordinates; the inclusion x -> (x, 0)
    is isometric for every p, so ||g|| = 1 is attained at every index.
    """
    from .spaces import sphere_sample

    n = space.dim
    k = op.domain_dim
    if k > n:
        raise InputError("operator domain dimension exceeds the space dimension")
    if op.matrix.shape[0] != n:
        raise InputError(f"operator maps into dimension {op.matrix.shape[0]}, space has dim {n}")
    if count < 2 * k:
        raise InputError(f"need at least {2 * k} sphere samples, got {count}")
    domain = SpaceSpec(space.field, k, space.p)
    X = sphere_sample(domain, scheme, count, seed)
    G = np.zeros((count, n), dtype=space.dtype)
    G[:, :k] = X
    F = X @ np.asarray(op.matrix, dtype=space.dtype).T
    cert = SupCertificate("attained", "inclusion of a sphere sample, attained at every index", 0)
    meta = {"operator_matrix": np.asarray(op.matrix), "domain_dim": k,
            "scheme": scheme, "count": count, "seed": seed}
    return IndexedPair(space, list(range(count)), G, F, cert, meta)


def evaluate(pair, label):
    """The stored or generated vectors (g(t), f(t)) at a label."""
    return pair.evaluate(label)
