"""Frames on a Krein space.

A family frames K when its K+ components frame K+ and its K- components
frame the anti-space K- (made Hilbert by negating the inner product). In
canonical coordinates both component inner products are Euclidean, so
every operator here is an ordinary frame operator on one block of
coordinates.

Row ``i`` of ``Frame.vectors`` is the vector ``f_i``. The analysis
operator of a component is ``theta = conj(F_c)`` (``k x dim``), the frame
operator ``S = theta* theta`` and the Grammian ``G = theta theta*``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, NonFiniteEntries, NotAFrameError
from .kspace import KreinSpace, as_vector
from .numeric_core import hermitian_eig, numerical_rank

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Frame:
    space: KreinSpace
    vectors: np.ndarray

    def __post_init__(self):
        V = np.array(self.vectors, dtype=complex)
        if V.ndim == 1:
            V = V.reshape(1, -1)
        if V.ndim != 2 or V.shape[0] < 1:
            raise ValueError("a frame needs at least one vector")
        if V.shape[1] != self.space.n:
            raise DimensionMismatch(
                f"vectors have {V.shape[1]} coordinates, space has dimension {self.space.n}"
            )
        if not np.all(np.isfinite(V)):
            raise NonFiniteEntries("frame vectors contain NaN or Inf")
        V.setflags(write=False)
        object.__setattr__(self, "vectors", V)

    @property
    def k(self) -> int:
        return self.vectors.shape[0]

    @property
    def plus(self) -> np.ndarray:
        return self.vectors[:, : self.space.p]

    @property
    def minus(self) -> np.ndarray:
        return self.vectors[:, self.space.p :]

    def subfamily(self, idx) -> "Frame":
        return Frame(self.space, self.vectors[list(idx)])

    def without(self, i: int) -> np.ndarray:
        return np.delete(self.vectors, i, axis=0)


@dataclass(frozen=True)
class FrameBounds:
    """Optimal bounds ``B2 <= A2 < 0 < A1 <= B1``; ``None`` for an empty component."""

    A1: Optional[float]
    B1: Optional[float]
    A2: Optional[float]
    B2: Optional[float]

    def as_tuple(self):
        return (self.A1, self.B1, self.A2, self.B2)


@dataclass(frozen=True)
class NotAFrame:
    plus_spanned: bool
    minus_spanned: bool

    @property
    def reason(self) -> str:
        failed = [name for name, ok in (("K+", self.plus_spanned), ("K-", self.minus_spanned)) if not ok]
        return " and ".join(failed) + (" component not spanned" if len(failed) == 1 else " components not spanned")

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class ComponentOperators:
    S1: np.ndarray
    S2: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray


def split_components(F: Frame) -> tuple[np.ndarray, np.ndarray]:
    """``(plus, minus)`` component families: ``k x p`` and ``k x q`` arrays."""
    return F.plus.copy(), F.minus.copy()


def component_operators(F: Frame) -> ComponentOperators:
    theta1 = F.plus.conj()
    theta2 = F.minus.conj()
    return ComponentOperators(
        S1=theta1.conj().T @ theta1,
        S2=theta2.conj().T @ theta2,
        theta1=theta1,
        theta2=theta2,
    )


def grammian(F: Frame) -> tuple[np.ndarray, np.ndarray]:
    """``(G1, G2)`` with ``G = theta theta*``, i.e. ``G[i, j] = <f_j, f_i>`` per component."""
    ops = component_operators(F)
    return ops.theta1 @ ops.theta1.conj().T, ops.theta2 @ ops.theta2.conj().T


def component_spans(rows: np.ndarray, dim: int, tol: float = DEFAULT_TOL) -> bool:
    """True when the rows span C^dim (vacuously true for ``dim == 0``)."""
    if dim == 0:
        return True
    if rows.shape[0] == 0:
        return False
    return numerical_rank(rows, tol) == dim


def family_is_frame(space: KreinSpace, rows: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Frame test for a raw ``(k, n)`` array, ``k`` possibly zero."""
    rows = np.asarray(rows, dtype=complex).reshape(-1, space.n)
    return component_spans(rows[:, : space.p], space.p, tol) and component_spans(
        rows[:, space.p :], space.q, tol
    )


def optimal_bounds(F: Frame, tol: float = DEFAULT_TOL) -> Union[FrameBounds, NotAFrame]:
    """Optimal frame bounds from the extreme eigenvalues of ``S1`` and ``S2``.

    ``A1, B1`` are the smallest and largest eigenvalues of ``S1``. On the
    minus side the inner product ``[x-, x-]`` is negative, so the bounds are
    the negated eigenvalues of ``S2``: ``A2 = -min``, ``B2 = -max``.

    A component counts as framed when its analysis matrix has full numerical
    rank at relative tolerance ``tol``.
    """
    p, q = F.space.p, F.space.q
    plus_ok = component_spans(F.plus, p, tol)
    minus_ok = component_spans(F.minus, q, tol)
    if not (plus_ok and minus_ok):
        return NotAFrame(plus_ok, minus_ok)
    ops = component_operators(F)
    A1 = B1 = A2 = B2 = None
    if p:
        lam = hermitian_eig(ops.S1).values
        A1, B1 = float(lam[0]), float(lam[-1])
    if q:
        lam = hermitian_eig(ops.S2).values
        A2, B2 = -float(lam[0]), -float(lam[-1])
    return FrameBounds(A1, B1, A2, B2)


def is_frame(F: Frame, tol: float = DEFAULT_TOL) -> bool:
    return isinstance(optimal_bounds(F, tol), FrameBounds)


def _require_bounds(F: Frame, tol: float) -> FrameBounds:
    b = optimal_bounds(F, tol)
    if isinstance(b, NotAFrame):
        raise NotAFrameError(b.reason)
    return b


def tight_constant(bounds: FrameBounds, tol: float = DEFAULT_TOL) -> Optional[float]:
    """The common constant ``D`` if the bounds are tight, else ``None``.

    ``D`` is read off the plus side (or from ``-A2`` when ``p = 0``);
    every present bound must then sit within ``tol * D`` of ``+-D``.
    """
    D = bounds.A1 if bounds.A1 is not None else -bounds.A2
    ok = True
    if bounds.A1 is not None:
        ok &= abs(bounds.A1 - D) <= tol * D and abs(bounds.B1 - D) <= tol * D
    if bounds.A2 is not None:
        ok &= abs(bounds.A2 + D) <= tol * D and abs(bounds.B2 + D) <= tol * D
    return D if ok else None


def is_tight(F: Frame, tol: float = DEFAULT_TOL) -> bool:
    return tight_constant(_require_bounds(F, tol), tol) is not None


def is_parseval(F: Frame, tol: float = DEFAULT_TOL) -> bool:
    D = tight_constant(_require_bounds(F, tol), tol)
    return D is not None and abs(D - 1.0) <= tol


def is_spanning(F: Frame, tol: float = DEFAULT_TOL) -> bool:
    """Spanning in the associated Hilbert space: rank of the ``k x n`` coordinate matrix is ``n``."""
    return numerical_rank(F.vectors, tol) == F.space.n


def _inverse(S: np.ndarray) -> np.ndarray:
    e = hermitian_eig(S)
    return (e.vectors / e.values) @ e.vectors.conj().T


def coefficients(F: Frame, f, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Canonical dual-frame coefficients ``(c_plus, c_minus)`` of ``f``.

    ``c_plus[n] = <f+, S1^-1 f_n+>`` and ``c_minus[n] = [f-, S2^-1 f_n-]``,
    the latter taken in the Krein inner product (negative on K-), so that
    ``f = sum c_plus[n] f_n+ - sum c_minus[n] f_n-``.
    """
    _require_bounds(F, tol)
    x = as_vector(F.space, f)
    p = F.space.p
    ops = component_operators(F)
    c_plus = np.zeros(F.k, dtype=complex)
    c_minus = np.zeros(F.k, dtype=complex)
    if F.space.p:
        c_plus = ops.theta1 @ (_inverse(ops.S1) @ x[:p])
    if F.space.q:
        c_minus = -(ops.theta2 @ (_inverse(ops.S2) @ x[p:]))
    return c_plus, c_minus


def synthesize(F: Frame, c_plus, c_minus) -> np.ndarray:
    """``sum c_plus[n] f_n+ - sum c_minus[n] f_n-`` as a vector of K."""
    cp = np.asarray(c_plus, dtype=complex).reshape(-1)
    cm = np.asarray(c_minus, dtype=complex).reshape(-1)
    if cp.shape[0] != F.k or cm.shape[0] != F.k:
        raise LengthMismatch(f"need {F.k} coefficients per component, got {cp.shape[0]} and {cm.shape[0]}")
    return np.concatenate([F.plus.T @ cp, -(F.minus.T @ cm)])


def frame_inequalities_hold(
    F: Frame, bounds: FrameBounds, xs: np.ndarray, slack: float = DEFAULT_TOL
) -> bool:
    """Check both frame inequalities for each sample row of ``xs``.

    Plus side: ``A1 <x+,x+> <= sum |<x+, f_n+>|^2 <= B1 <x+,x+>``.
    Minus side: ``A2 [x-,x-] <= sum |[x-, f_n-]|^2 <= B2 [x-,x-]`` with
    ``[x-,x-] = -|x-|^2``. ``slack`` is relative to the upper side.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=complex))
    p = F.space.p
    for x in xs:
        xp, xm = x[:p], x[p:]
        if bounds.A1 is not None:
            nrm = np.vdot(xp, xp).real
            energy = np.sum(np.abs(F.plus.conj() @ xp) ** 2)
            eps = slack * bounds.B1 * nrm
            if not (bounds.A1 * nrm - eps <= energy <= bounds.B1 * nrm + eps):
                return False
        if bounds.A2 is not None:
            inner = -np.vdot(xm, xm).real
            energy = np.sum(np.abs(F.minus.conj() @ xm) ** 2)
            eps = slack * abs(bounds.B2 * inner)
            if not (bounds.A2 * inner - eps <= energy <= bounds.B2 * inner + eps):
                return False
    return True
