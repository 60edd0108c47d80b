"""Field-of-values support oracle for the Hilbert case (p = 2).

The support function of {<Ax, x> : ||x||_2 = 1} in direction phi is the top
eigenvalue of the rotated Hermitian part (e^{-i phi} A + (e^{-i phi} A)^H)/2.
Eigenvalues come from a self-contained cyclic Jacobi sweep so the oracle has
no dependency on the rest of the package's range machinery.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError


def jacobi_eigvalsh(H: np.ndarray, tol: float = 1e-13, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Deterministic: pivots are visited in fixed row-major order each sweep.
    Returns the eigenvalues in ascending order.
    """
    A = np.array(H, dtype=np.complex128)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise InputError("matrix must be square")
    if np.abs(A - A.conj().T).max() > 1e-10 * max(1.0, np.abs(A).max()):
        raise InputError("matrix must be Hermitian")
    A = 0.5 * (A + A.conj().T)
    if n == 1:
        return np.array([A[0, 0].real])
    scale = max(np.abs(A).max(), 1.0)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= tol * scale:
                    continue
                off = max(off, abs(apq))
                app = A[p, p].real
                aqq = A[q, q].real
                # Unitary plane rotation V = I except [[c, s], [-conj(s), c]]
                # in the (p, q) plane; B = V^H A V zeroes the (p, q) entry
                # when s carries the phase of apq and t solves the classical
                # quadratic for the rotation tangent.
                phase = apq / abs(apq)
                tau = (aqq - app) / (2.0 * abs(apq))
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c * phase
                rows_p = A[p, :].copy()
                rows_q = A[q, :].copy()
                A[p, :] = c * rows_p - s * rows_q
                A[q, :] = np.conj(s) * rows_p + c * rows_q
                cols_p = A[:, p].copy()
                cols_q = A[:, q].copy()
                A[:, p] = c * cols_p - np.conj(s) * cols_q
                A[:, q] = s * cols_p + c * cols_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
        if off <= tol * scale:
            break
    return np.sort(np.real(np.diag(A)))


def fov_support(A: np.ndarray, phi: float) -> float:
    """Support of the field of values of A in direction phi."""
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("matrix must be square")
    B = np.exp(-1j * float(phi)) * A
    H = 0.5 * (B + B.conj().T)
    return float(jacobi_eigvalsh(H)[-1])


def fov_support_polygon(A: np.ndarray, n_angles: int = 128):
    """Support polygon traced by the field-of-values oracle."""
    from .geometry import SupportPolygon, polygon_from_supports

    angles = np.linspace(0.0, 2.0 * np.pi, n_angles, endpoint=False)
    values = np.array([fov_support(A, phi) for phi in angles])
    return SupportPolygon(angles, values, polygon_from_supports(angles, values),
                          method="fov-jacobi")
