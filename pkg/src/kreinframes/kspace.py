"""Finite-dimensional Krein spaces in canonical coordinates.

A space of signature ``(p, q)`` is C^(p+q) with the first ``p`` coordinates
positive and the last ``q`` negative, so the fundamental symmetry is
``diag(I_p, -I_q)`` and the J-norm is the Euclidean norm. Vectors are 1-D
complex numpy arrays.

Other presentations (coordinates with a mixed sign pattern, or a
non-canonical fundamental symmetry) are handled through an explicit
``signs`` vector describing the Gram diagonal of the presentation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidSymmetry, NonFiniteEntries
from .numeric_core import as_matrix, hermitian_eig

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class KreinSpace:
    p: int
    q: int

    def __post_init__(self):
        if int(self.p) != self.p or int(self.q) != self.q or self.p < 0 or self.q < 0:
            raise ValueError(f"signature must be non-negative integers, got ({self.p}, {self.q})")
        if self.p + self.q < 1:
            raise ValueError("a Krein space needs dimension at least 1")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def signs(self) -> np.ndarray:
        return np.concatenate([np.ones(self.p), -np.ones(self.q)])

    @property
    def J(self) -> np.ndarray:
        return np.diag(self.signs).astype(complex)

    def basis(self) -> np.ndarray:
        """Standard J-orthonormal basis, one vector per row."""
        return np.eye(self.n, dtype=complex)


def as_vector(space: KreinSpace, x) -> np.ndarray:
    v = np.array(x, dtype=complex).reshape(-1)
    if v.shape[0] != space.n:
        raise DimensionMismatch(f"vector has {v.shape[0]} coordinates, space has dimension {space.n}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteEntries("vector contains NaN or Inf")
    return v


def indefinite_inner(space: KreinSpace, x, y) -> complex:
    """``[x, y]``: linear in ``x``, conjugate-linear in ``y``."""
    x, y = as_vector(space, x), as_vector(space, y)
    return complex(np.sum(space.signs * x * np.conj(y)))


def j_norm_sq(space: KreinSpace, x) -> float:
    """``[Jx, x]``, which is the squared Euclidean norm of the coordinates."""
    x = as_vector(space, x)
    return float(np.vdot(x, x).real)


def project_plus(space: KreinSpace, x) -> np.ndarray:
    x = as_vector(space, x)
    out = np.zeros_like(x)
    out[: space.p] = x[: space.p]
    return out


def project_minus(space: KreinSpace, x) -> np.ndarray:
    x = as_vector(space, x)
    out = np.zeros_like(x)
    out[space.p :] = x[space.p :]
    return out


def gram(vectors, signs) -> np.ndarray:
    """Matrix of ``[b_i, b_j]`` for the rows ``b_i`` under the metric ``diag(signs)``."""
    B = as_matrix(vectors)
    return (B * np.asarray(signs)) @ B.conj().T


def _presentation_signs(space: KreinSpace, signs) -> np.ndarray:
    if signs is None:
        return space.signs
    s = np.asarray(signs, dtype=float).reshape(-1)
    if s.shape[0] != space.n or not np.all(np.abs(s) == 1.0):
        raise DimensionMismatch(f"signs must be {space.n} entries of +1/-1")
    if np.count_nonzero(s > 0) != space.p:
        raise DimensionMismatch(f"signs {s.tolist()} do not match signature ({space.p}, {space.q})")
    return s


def alternating_signs(N: int) -> np.ndarray:
    """Sign pattern ``(+, -, +, -, ...)`` of length ``2N`` (truncated l2 with alternating metric)."""
    return np.tile([1.0, -1.0], N)


def alternating_to_canonical(N: int) -> np.ndarray:
    """Permutation taking alternating coordinates to canonical ones.

    ``x_canonical = x_alternating[perm]``; odd-numbered (positive) coordinates
    first, then the even-numbered (negative) ones.
    """
    return np.concatenate([np.arange(0, 2 * N, 2), np.arange(1, 2 * N, 2)])


@dataclass(frozen=True)
class SymmetryReport:
    valid: bool
    involution_error: float
    selfadjoint_error: float
    min_positivity: float

    def __bool__(self) -> bool:
        return self.valid


def validate_symmetry(space: KreinSpace, Jmat, signs=None) -> SymmetryReport:
    """Check that ``Jmat`` is a fundamental symmetry of the space.

    Requires ``Jmat^2 = I``, self-adjointness for ``[.,.]`` (``G Jmat``
    Hermitian, with ``G`` the presentation metric) and positive definiteness
    of ``x -> [Jmat x, x]``.
    """
    A = as_matrix(Jmat)
    if A.shape != (space.n, space.n):
        raise DimensionMismatch(f"symmetry must be {space.n}x{space.n}, got {A.shape}")
    s = _presentation_signs(space, signs)
    scale = max(1.0, float(np.max(np.abs(A))) ** 2)
    inv_err = float(np.max(np.abs(A @ A - np.eye(space.n))))
    H = s[:, None] * A
    sa_err = float(np.max(np.abs(H - H.conj().T)))
    hs = 0.5 * (H + H.conj().T)
    min_pos = float(hermitian_eig(hs).values[0])
    valid = (
        inv_err <= SYMMETRY_TOL * scale
        and sa_err <= SYMMETRY_TOL * scale
        and min_pos > SYMMETRY_TOL * scale
    )
    return SymmetryReport(valid, inv_err, sa_err, min_pos)


def decomposition_from_symmetry(space: KreinSpace, Jmat, signs=None) -> tuple[np.ndarray, np.ndarray]:
    """J-orthonormal basis adapted to a fundamental symmetry.

    Returns ``(basis, basis_signs)`` with basis vectors as rows, positive
    vectors first. ``Jmat b_i = basis_signs[i] b_i`` and the Gram matrix of
    ``[.,.]`` on the basis is ``diag(basis_signs)``.

    Method: ``H = G Jmat`` is positive definite, ``Jmat b = s b`` is the
    definite pencil ``H b = s G b``, solved through the Hermitian matrix
    ``H^{-1/2} G H^{-1/2}`` whose eigenvalues are exactly the signs.
    """
    report = validate_symmetry(space, Jmat, signs)
    if not report.valid:
        raise InvalidSymmetry(f"not a fundamental symmetry: {report}")
    s = _presentation_signs(space, signs)
    A = as_matrix(Jmat)
    H = s[:, None] * A
    eh = hermitian_eig(0.5 * (H + H.conj().T))
    h_inv_half = (eh.vectors / np.sqrt(eh.values)) @ eh.vectors.conj().T
    M = h_inv_half @ np.diag(s) @ h_inv_half
    em = hermitian_eig(0.5 * (M + M.conj().T))
    basis = (h_inv_half @ em.vectors).T
    vals = em.values
    pos = np.flatnonzero(vals > 0)
    neg = np.flatnonzero(vals <= 0)
    if pos.size != space.p:
        raise InvalidSymmetry(f"symmetry has {pos.size} positive directions, signature needs {space.p}")
    order = np.concatenate([pos, neg])
    out_signs = np.concatenate([np.ones(pos.size), -np.ones(neg.size)])
    return basis[order], out_signs
