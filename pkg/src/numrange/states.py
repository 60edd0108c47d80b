"""States of the bounded-function space and the conditional-gradient solver.

For a finite index set the dual of the bounded-function space is the
l1-sum of dual copies, so a functional Phi is a tuple of dual vectors and

    ||Phi|| = sum_t ||Phi_t||_q,      Phi(h) = sum_t Phi_t(h(t)).

A state (||Phi|| = Phi(g) = 1) is characterized inside the convex set
{||Phi|| <= 1, Re Phi(g) >= 1}: the two constraints force equality through
Re Phi(g) <= ||Phi|| ||g|| <= 1.  Support values of the intrinsic range are
computed by maximizing Re Phi(e^{-i phi} f) over that set with a
conditional-gradient scheme: the constraint enters through an exact penalty
rho * max(0, 1 - Re Phi(g)), iterates are convex combinations of atoms
y (x) delta_t obtained from the linear oracle (best index plus the norming
functional of the priced vector), and the restricted master over the
current atoms is solved exactly (its optimum sits on an atom or on a
two-atom edge crossing the constraint hyperplane).  The dual evaluation

    D(lam) = max_t ||e^{-i phi} f(t) + lam g(t)||_p - lam

certifies the optimality gap; atom ties always break toward the lowest
index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumrangeError
from .spaces import SpaceSpec, pnorm, norming_functional, dual_norm

DEFAULT_RHO = 1e6
DEFAULT_GAP_TOL = 1e-9
MAX_ITER = 80


@dataclass
class AtomicState:
    """A convex combination sum_k alpha_k y_k (x) delta_{t_k}."""

    alphas: np.ndarray
    functionals: np.ndarray  # shape (k, n), unit dual vectors
    labels: list

    def __post_init__(self):
        self.alphas = np.asarray(self.alphas, dtype=float)
        self.functionals = np.asarray(self.functionals)
        if self.alphas.ndim != 1 or self.functionals.shape[0] != self.alphas.size:
            raise InputError("alphas and functionals disagree in length")
        if len(self.labels) != self.alphas.size:
            raise InputError("labels and alphas disagree in length")

    def validate(self, space: SpaceSpec, tol_alpha: float = 1e-12, tol_norm: float = 1e-9):
        if abs(self.alphas.sum() - 1.0) > tol_alpha:
            raise InputError(f"atom weights sum to {self.alphas.sum()!r}, not 1")
        if np.any(self.alphas < -tol_alpha) or np.any(self.alphas > 1 + tol_alpha):
            raise InputError("atom weights must lie in [0, 1]")
        for y in self.functionals:
            if abs(dual_norm(space, y) - 1.0) > tol_norm:
                raise InputError("atom functional is not on the dual unit sphere")

    def pair_values(self, pair):
        """Per-atom pairings (Re y_k(g(t_k)), y_k(f(t_k)))."""
        G, F = pair.vectors_for(self.labels)
        bg = np.real(np.sum(self.functionals * G, axis=1))
        vf = np.sum(self.functionals * F, axis=1)
        return bg, vf

    def quality(self, pair) -> float:
        """delta = 1 - sum_k alpha_k Re y_k(g(t_k)), nonnegative up to noise."""
        bg, _ = self.pair_values(pair)
        delta = 1.0 - float(np.dot(self.alphas, bg))
        if delta < -1e-12:
            raise NumrangeError(f"state quality {delta!r} is negative beyond tolerance")
        return max(delta, 0.0)

    def apply_f(self, pair) -> complex:
        """Phi(f) = sum_k alpha_k y_k(f(t_k))."""
        _, vf = self.pair_values(pair)
        return complex(np.dot(self.alphas, vf))


def _solve_master(a: np.ndarray, b: np.ndarray, rho: float):
    """Exact maximum of sum(alpha a) - rho relu(1 - sum(alpha b)) over the simplex.

    The objective is piecewise linear and concave, so the optimum sits on a
    simplex vertex or on an edge crossing the hyperplane sum(alpha b) = 1.
    Returns (value, index weights, multiplier estimate or None).
    """
    singles = a - rho * np.maximum(0.0, 1.0 - b)
    best_val = float(singles.max())
    k = int(np.argmax(singles))
    best = ("single", k, None)

    hi = np.nonzero(b > 1.0)[0]
    lo = np.nonzero(b < 1.0)[0]
    if hi.size and lo.size:
        bk = b[hi][:, None]
        bl = b[lo][None, :]
        tau = (1.0 - bl) / (bk - bl)
        vals = tau * a[hi][:, None] + (1.0 - tau) * a[lo][None, :]
        i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
        if vals[i, j] > best_val + 0.0:
            best_val = float(vals[i, j])
            best = ("pair", int(hi[i]), int(lo[j]))

    weights = np.zeros(a.size)
    if best[0] == "single":
        k = best[1]
        weights[k] = 1.0
        if b[k] < 1.0 - 1e-14:
            lam = rho
        elif b[k] > 1.0 + 1e-14:
            lam = 0.0
        else:
            lam = None  # degenerate: exactly on the hyperplane
        return best_val, weights, lam
    k, l = best[1], best[2]
    tau = float((1.0 - b[l]) / (b[k] - b[l]))
    weights[k] = tau
    weights[l] = 1.0 - tau
    lam = (a[k] - a[l]) / (b[k] - b[l])
    return best_val, weights, float(min(max(lam, 0.0), rho))


def _dual_value(space, H, G, lam: float) -> float:
    return float(pnorm(H + lam * G, space.p).max()) - lam


def _price(space, H, G, lam: float):
    """Linear oracle over the dual ball at multiplier lam.

    Best index by the primal norm of h(t) + lam g(t) (lowest index on ties),
    paired with the norming functional of that vector.
    """
    norms = pnorm(H + lam * G, space.p)
    t = int(np.argmax(norms))
    w = H[t] + lam * G[t]
    if pnorm(w, space.p) == 0:
        return None
    y = norming_functional(space, w)
    a = float(np.real(np.sum(y * H[t])))
    b = float(np.real(np.sum(y * G[t])))
    return t, y, a, b


def conditional_gradient_support(space: SpaceSpec, H: np.ndarray, G: np.ndarray,
                                 rho: float = DEFAULT_RHO, gap_tol: float = DEFAULT_GAP_TOL,
                                 max_iter: int = MAX_ITER):
    """Penalized support value max Re Phi(h) over the relaxed state set.

    Returns (value, info) where info carries the recovered atomic state,
    the certified optimality gap, the constraint residual and an iteration
    count.  Non-convergence is flagged, never raised.
    """
    L = H.shape[0]
    if L == 0:
        raise InputError("empty index set")
    probes = [0.0] + [2.0**j for j in range(-4, int(math.log2(rho)) + 1)] + [rho]
    dual_best = math.inf
    atoms = []  # (t, y, a, b)
    seen = set()

    def add(atom):
        if atom is None:
            return False
        t, y, a, b = atom
        key = (t, round(a, 14), round(b, 14))
        if key in seen:
            return False
        seen.add(key)
        atoms.append(atom)
        return True

    for lam in (0.0, 1.0, rho):
        add(_price(space, H, G, lam))
    for lam in probes:
        dual_best = min(dual_best, _dual_value(space, H, G, lam))

    value = -math.inf
    weights = None
    iters = 0
    stall = 0
    for iters in range(1, max_iter + 1):
        a = np.array([at[2] for at in atoms])
        b = np.array([at[3] for at in atoms])
        value, weights, lam_hat = _solve_master(a, b, rho)
        if lam_hat is not None:
            dual_best = min(dual_best, _dual_value(space, H, G, lam_hat))
        gap = dual_best - value
        if gap <= gap_tol:
            break
        grew = add(_price(space, H, G, lam_hat)) if lam_hat is not None else False
        if not grew:
            stall += 1
            if stall >= 2:
                break
        else:
            stall = 0

    a = np.array([at[2] for at in atoms])
    b = np.array([at[3] for at in atoms])
    value, weights, _ = _solve_master(a, b, rho)
    support = np.nonzero(weights > 0)[0]
    state = AtomicState(weights[support],
                        np.array([atoms[i][1] for i in support]),
                        [int(atoms[i][0]) for i in support])
    residual_u = max(0.0, 1.0 - float(np.dot(weights, b)))
    gap = dual_best - value
    info = {
        "state": state,
        "gap": float(max(gap, 0.0)),
        "constraint_residual": residual_u,
        "iterations": iters,
        "converged": bool(gap <= max(gap_tol, 1e-7 * max(1.0, abs(value)))),
    }
    return float(value), info


def states_support_values(pair, angles, options: dict | None = None):
    """Support values of the intrinsic range by the state solver, per angle."""
    if pair.kind != "finite":
        raise InputError("the state solver requires a finite index set")
    opts = dict(options or {})
    rho = float(opts.get("rho", DEFAULT_RHO))
    gap_tol = float(opts.get("gap_tol", DEFAULT_GAP_TOL))
    max_iter = int(opts.get("max_iter", MAX_ITER))
    space = pair.space
    gmax = float(pnorm(pair.G, space.p).max())
    if gmax < 1.0 - 1e-9:
        raise InputError(f"state set is empty: max ||g(t)|| = {gmax!r} < 1")
    values = np.zeros(len(angles))
    gaps, residuals, states, bad = [], [], [], []
    for i, phi in enumerate(np.asarray(angles, dtype=float)):
        rot = np.exp(-1j * phi) if space.is_complex else math.cos(phi)
        H = rot * pair.F
        v, info = conditional_gradient_support(space, H, pair.G, rho, gap_tol, max_iter)
        values[i] = v
        gaps.append(info["gap"])
        residuals.append(info["constraint_residual"])
        states.append(info["state"])
        if not info["converged"]:
            bad.append((float(phi), info["gap"]))
    extras = {
        "cg_max_gap": float(max(gaps)),
        "cg_max_constraint_residual": float(max(residuals)),
        "cg_states": states,
        "cg_nonconverged": bad,
    }
    return values, extras


def intrinsic_range_states(pair, n_angles: int = 64, options: dict | None = None):
    """Intrinsic-range support polygon from the state solver alone."""
    from .ranges import _angle_grid, _interval_from_supports
    from .geometry import SupportPolygon, polygon_from_supports

    angles = _angle_grid(pair.space, n_angles)
    values, extras = states_support_values(pair, angles, options)
    if pair.space.is_complex:
        poly = polygon_from_supports(angles, values)
    else:
        poly = _interval_from_supports(values[0], values[1])
    return SupportPolygon(angles, values, poly, method="states", extras=extras)


def extract_atom(pair, state: AtomicState, eps: float):
    """Select an atom certifying the range value of an approximate state.

    Given a state of quality delta and a target eps, an auxiliary margin
    eps' < eps with 2 ||f|| eps' <= eps is chosen; the atoms are split into
    the well-norming set J = {k : Re y_k(g(t_k)) > 1 - eps'} and its
    complement K, whose total weight is provably below eps'.  The best J
    atom then satisfies both guarantees

        Re y(f(t)) > Re Phi(f) - eps     and     Re y(g(t)) > 1 - eps,

    which are evaluated and recorded in the certificate.
    """
    if not eps > 0:
        raise InputError("eps must be positive")
    state.validate(pair.space)
    F = max(pair.f_sup, 0.0)
    eps_prime = 0.99 * eps / (2.0 * (2.0 * F + eps))
    delta = state.quality(pair)
    if not delta < eps_prime**2:
        # smallest workable eps given this state quality
        r = math.sqrt(max(delta, 0.0))
        denom = 1.0 - 2.0 * r / 0.99
        eps_min = math.inf if denom <= 0 else (4.0 * F * r / 0.99 + 2.0 * r * 1.0) / denom
        raise InputError(
            f"state quality delta={delta!r} is too low for eps={eps!r}; "
            f"needs roughly eps > {eps_min!r}"
        )
    bg, vf = state.pair_values(pair)
    J = np.nonzero(bg > 1.0 - eps_prime)[0]
    K = np.nonzero(bg <= 1.0 - eps_prime)[0]
    mass_K = float(state.alphas[K].sum())
    if not mass_K < eps_prime:
        raise NumrangeError("filtered atom mass exceeds eps', state bookkeeping is wrong")
    if J.size == 0:
        raise NumrangeError("no admissible atom survived the filter")
    re_f = np.real(vf)
    k = int(J[np.argmax(re_f[J])])  # argmax keeps the lowest index on ties
    re_phi_f = float(np.dot(state.alphas, re_f))
    lhs_f, rhs_f = float(re_f[k]), re_phi_f - eps
    lhs_g, rhs_g = float(bg[k]), 1.0 - eps
    if not (lhs_f > rhs_f and lhs_g > rhs_g):
        raise NumrangeError("atom extraction postcondition failed")
    certificate = {
        "eps": float(eps),
        "eps_prime": float(eps_prime),
        "delta": float(delta),
        "J": [int(i) for i in J],
        "K": [int(i) for i in K],
        "mass_K": mass_K,
        "re_phi_f": re_phi_f,
        "value_inequality": (lhs_f, rhs_f),
        "norming_inequality": (lhs_g, rhs_g),
    }
    return state.labels[k], state.functionals[k].copy(), certificate
