"""Dense complex linear algebra for small matrices.

Two Jacobi kernels do all the work: the two-sided cyclic sweep for
Hermitian eigenproblems and its one-sided (Hestenes) form for singular
values, polar factors, pseudo-inverses and ranks. Matrices are plain
``complex128`` numpy arrays; real input is promoted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NoConvergence,
    NonFiniteEntries,
    NormExceedsOne,
    NotHermitian,
    NotPSD,
    NotSquare,
    Singular,
)

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-12
SINGULAR_RTOL = 1e-12
PINV_RCOND = 1e-12


def as_matrix(M) -> np.ndarray:
    """Promote ``M`` to a finite 2-D complex array (copy)."""
    A = np.array(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    elif A.ndim == 1:
        A = A.reshape(1, -1)
    elif A.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteEntries("matrix contains NaN or Inf")
    return A


def _require_square(A: np.ndarray) -> None:
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"matrix of shape {A.shape} is not square")


def _require_hermitian(A: np.ndarray) -> None:
    _require_square(A)
    scale = np.max(np.abs(A)) if A.size else 0.0
    if np.max(np.abs(A - A.conj().T), initial=0.0) > HERMITIAN_RTOL * max(scale, 1e-300):
        raise NotHermitian("matrix is not Hermitian within relative tolerance 1e-12")


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending; eigenvectors are the columns of ``vectors``."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def _jacobi_sweeps(A: np.ndarray, V: np.ndarray) -> None:
    n = A.shape[0]
    fro = np.linalg.norm(A)
    if n < 2 or fro == 0.0:
        return
    offmask = ~np.eye(n, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        if np.max(np.abs(A[offmask])) < JACOBI_TOL * fro:
            return
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p, q]
                r = abs(b)
                if r == 0.0:
                    continue
                # phase-align to a real symmetric 2x2 block, then rotate
                phase = b / r
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                G = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ G
    if np.max(np.abs(A[offmask])) >= JACOBI_TOL * fro:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")


def hermitian_eig(M) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues come back ascending; ties keep the column order the sweeps
    left them in, so the result is deterministic.

    Raises
    ------
    NotSquare, NotHermitian
    """
    A = as_matrix(M)
    _require_hermitian(A)
    A = 0.5 * (A + A.conj().T)
    V = np.eye(A.shape[0], dtype=complex)
    _jacobi_sweeps(A, V)
    lam = np.diag(A).real.copy()
    order = np.argsort(lam, kind="stable")
    return EigenDecomposition(lam[order], V[:, order])


def spectral_radius(eig: EigenDecomposition) -> float:
    return float(np.max(np.abs(eig.values), initial=0.0))


def sqrt_psd(M) -> np.ndarray:
    """Principal square root of a Hermitian positive-semidefinite matrix.

    Eigenvalues down to ``-1e-12`` times the spectral radius are treated as
    rounding noise and clamped to zero; anything lower raises ``NotPSD``.
    """
    eig = hermitian_eig(M)
    rho = spectral_radius(eig)
    if eig.values.size and eig.values[0] < -PSD_RTOL * rho:
        raise NotPSD(f"eigenvalue {eig.values[0]:.3e} below PSD threshold")
    root = np.sqrt(np.clip(eig.values, 0.0, None))
    R = (eig.vectors * root) @ eig.vectors.conj().T
    return 0.5 * (R + R.conj().T)


def _one_sided_jacobi(A: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD of a tall matrix by Hestenes column orthogonalisation.

    Returns ``(U, sigma, V)`` with ``A = U diag(sigma) V*``, sigma descending.
    Each pair rotation is the Jacobi rotation of the 2x2 block of ``A* A``,
    applied without forming the Gram matrix, so small singular values keep
    full relative accuracy.
    """
    m, n = A.shape
    A = A.copy()
    V = np.eye(n, dtype=complex)
    tol = 4.0 * max(m, 1) * np.finfo(float).eps
    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                ap, aq = A[:, p], A[:, q]
                alpha = np.vdot(ap, ap).real
                beta = np.vdot(aq, aq).real
                gamma = np.vdot(ap, aq)
                r = abs(gamma)
                if r == 0.0 or r <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                phase = gamma / r
                tau = (beta - alpha) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                G = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                V[:, idx] = V[:, idx] @ G
        if not rotated:
            break
    else:
        raise NoConvergence(f"one-sided Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    sigma = np.linalg.norm(A, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, A, V = sigma[order], A[:, order], V[:, order]
    U = np.zeros_like(A)
    nz = sigma > 0.0
    U[:, nz] = A[:, nz] / sigma[nz]
    return U, sigma, V


def thin_svd(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(U, sigma, V)`` with ``M = U diag(sigma) V*`` and ``len(sigma) = min(shape)``."""
    A = as_matrix(M)
    if A.size == 0:
        r, c = A.shape
        return np.zeros((r, 0), complex), np.zeros(0), np.zeros((c, 0), complex)
    if A.shape[0] >= A.shape[1]:
        return _one_sided_jacobi(A)
    U, s, V = _one_sided_jacobi(A.conj().T)
    return V, s, U


def singular_values(M) -> np.ndarray:
    """Singular values in descending order (length ``min(rows, cols)``)."""
    return thin_svd(M)[1]


def spectral_norm(M) -> float:
    s = singular_values(M)
    return float(s[0]) if s.size else 0.0


def polar_decompose(M) -> tuple[np.ndarray, np.ndarray]:
    """Right polar decomposition ``M = V @ P`` of an invertible square matrix.

    ``V`` is unitary and ``P = (M* M)^(1/2)`` is positive definite.
    """
    A = as_matrix(M)
    _require_square(A)
    U, sigma, Q = thin_svd(A)
    if sigma[0] == 0.0 or sigma[-1] <= SINGULAR_RTOL * sigma[0]:
        raise Singular("matrix is singular (smallest singular value below 1e-12 relative)")
    P = (Q * sigma) @ Q.conj().T
    return U @ Q.conj().T, 0.5 * (P + P.conj().T)


def unitary_from_contraction(P) -> np.ndarray:
    """Unitary ``W`` with ``(W + W*)/2 = P`` for a Hermitian contraction.

    ``W = P + i sqrt(I - P^2)``, evaluated in the eigenbasis of ``P`` so the
    two terms commute exactly.
    """
    eig = hermitian_eig(P)
    if spectral_radius(eig) > 1.0 + 1e-12:
        raise NormExceedsOne(f"spectral norm {spectral_radius(eig):.15g} exceeds 1")
    lam = np.clip(eig.values, -1.0, 1.0)
    w = lam + 1j * np.sqrt(np.clip(1.0 - lam * lam, 0.0, None))
    return (eig.vectors * w) @ eig.vectors.conj().T


def pseudo_inverse(M, rcond: float = PINV_RCOND) -> np.ndarray:
    """Moore-Penrose pseudo-inverse; singular values at or below ``rcond``
    times the largest are treated as zero."""
    A = as_matrix(M)
    U, sigma, V = thin_svd(A)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros((A.shape[1], A.shape[0]), dtype=complex)
    keep = sigma > rcond * sigma[0]
    return (V[:, keep] / sigma[keep]) @ U[:, keep].conj().T


def numerical_rank(M, tol: float = 1e-9) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = singular_values(M)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))
