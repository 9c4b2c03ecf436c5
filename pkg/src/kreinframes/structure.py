"""Structural results for frames on a Krein space.

* three J-orthonormal bases whose scaled sum is the frame
* splitting along a projection that commutes with J, and merging back
* coefficient transfer between complementary subfamilies
* frame sequences, exactness and near-exactness
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    BadIndexCover,
    DoesNotCommuteWithJ,
    EpsilonOutOfRange,
    NotAFrameError,
    NotAProjection,
    NotSquareInvertible,
    OverlappingMasks,
    SearchLimitExceeded,
    SignatureMismatch,
    SubfamilyNotFrame,
)
from .frames import DEFAULT_TOL, Frame, NotAFrame, family_is_frame, optimal_bounds
from .kspace import KreinSpace
from .numeric_core import (
    as_matrix,
    hermitian_eig,
    numerical_rank,
    polar_decompose,
    pseudo_inverse,
    spectral_norm,
    unitary_from_contraction,
)

PROJECTION_TOL = 1e-10
TRANSFER_RTOL = 1e-9
NEAR_EXACT_MAX_K = 20


# -- three orthonormal bases ------------------------------------------------


@dataclass(frozen=True)
class ComponentFactors:
    """Per-component pieces: ``T = norm_T/(1-eps) (V W + V W* - I)``."""

    T: np.ndarray
    norm_T: float
    U: np.ndarray
    V: np.ndarray
    P: np.ndarray
    W: np.ndarray


@dataclass(frozen=True, eq=False)
class ThreeBasesDecomposition:
    space: KreinSpace
    epsilon: float
    scale_plus: float
    scale_minus: float
    bases: tuple  # three (n, n) arrays, basis vectors as rows, K+ block first
    plus: Optional[ComponentFactors]
    minus: Optional[ComponentFactors]

    def resynthesize(self) -> np.ndarray:
        """Rebuild the frame vectors (rows) from the three bases."""
        p, q = self.space.p, self.space.q
        total = sum(self.bases)
        k = p if p else q
        out = np.zeros((k, self.space.n), dtype=complex)
        if p:
            out += self.scale_plus * total[:p]
        if q:
            out += self.scale_minus * total[p:]
        return out


def _component_factors(T: np.ndarray, epsilon: float) -> ComponentFactors:
    d = T.shape[0]
    if numerical_rank(T) < d:
        raise NotSquareInvertible("component synthesis operator is singular")
    norm_T = spectral_norm(T)
    U = 0.5 * np.eye(d) + 0.5 * (1.0 - epsilon) * T / norm_T
    V, P = polar_decompose(U)
    W = unitary_from_contraction(P)
    return ComponentFactors(T, norm_T, U, V, P, W)


def decompose_three_bases(F: Frame, epsilon: float) -> ThreeBasesDecomposition:
    """Write the frame as a scaled sum of three J-orthonormal bases.

    Each non-empty component needs exactly as many frame vectors as its
    dimension, with an invertible synthesis operator ``T`` (column ``k`` is
    ``f_k`` restricted to the component). With
    ``U = I/2 + (1-eps)/2 T/|T|`` polar-factored as ``U = V P`` and
    ``W = P + i sqrt(I - P^2)``, the bases are the images of the standard
    basis under ``V W``, ``V W*`` and ``-I`` on each component.
    """
    if not 0.0 < epsilon < 1.0:
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1), got {epsilon}")
    p, q, n = F.space.p, F.space.q, F.space.n
    for name, d in (("K+", p), ("K-", q)):
        if d and F.k != d:
            raise NotSquareInvertible(f"{name} has dimension {d} but the frame has {F.k} vectors")
    plus = _component_factors(F.plus.T, epsilon) if p else None
    minus = _component_factors(F.minus.T, epsilon) if q else None

    bases = []
    for pick in (lambda c: c.V @ c.W, lambda c: c.V @ c.W.conj().T, lambda c: -np.eye(c.T.shape[0])):
        B = np.zeros((n, n), dtype=complex)
        if plus is not None:
            B[:p, :p] = pick(plus).T
        if minus is not None:
            B[p:, p:] = pick(minus).T
        bases.append(B)
    scale = lambda c: c.norm_T / (1.0 - epsilon) if c is not None else 0.0
    return ThreeBasesDecomposition(F.space, epsilon, scale(plus), scale(minus), tuple(bases), plus, minus)


# -- projections ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SplitResult:
    """Frames on ``PK`` and ``(I-P)K``; a side is ``None`` when its subspace is zero."""

    inside: Optional[Frame]
    outside: Optional[Frame]
    mask: np.ndarray
    parent: KreinSpace


def mask_projection(mask) -> np.ndarray:
    return np.diag(np.asarray(mask, dtype=float)).astype(complex)


def projection_mask(space: KreinSpace, P) -> np.ndarray:
    """Validate ``P`` and return the coordinate mask it selects.

    ``P`` must be idempotent, self-adjoint for ``[.,.]`` and commute with
    ``J``. Only coordinate projections (diagonal 0/1 in canonical
    coordinates) are supported.
    """
    P = as_matrix(P)
    n = space.n
    if P.shape != (n, n):
        raise NotAProjection(f"projection must be {n}x{n}, got {P.shape}")
    s = space.signs
    if np.max(np.abs(P @ P - P)) > PROJECTION_TOL:
        raise NotAProjection("P @ P != P")
    GP = s[:, None] * P
    if np.max(np.abs(GP - GP.conj().T)) > PROJECTION_TOL:
        raise NotAProjection("P is not self-adjoint for the indefinite inner product")
    if np.max(np.abs(P * s[None, :] - s[:, None] * P)) > PROJECTION_TOL:
        raise DoesNotCommuteWithJ("P J != J P")
    off = P - np.diag(np.diag(P))
    d = np.diag(P)
    if np.max(np.abs(off), initial=0.0) > PROJECTION_TOL or np.any(
        np.minimum(np.abs(d), np.abs(d - 1.0)) > PROJECTION_TOL
    ):
        raise NotAProjection("only coordinate-mask projections are supported; re-coordinatize first")
    return np.abs(d - 1.0) <= PROJECTION_TOL


def _restrict(F: Frame, mask: np.ndarray) -> Optional[Frame]:
    p = F.space.p
    pp, qq = int(mask[:p].sum()), int(mask[p:].sum())
    if pp + qq == 0:
        return None
    return Frame(KreinSpace(pp, qq), F.vectors[:, mask])


def split_by_projection(F: Frame, P) -> SplitResult:
    """``{P f_n}`` on ``PK`` and ``{(I-P) f_n}`` on ``(I-P)K``, in their own coordinates."""
    mask = projection_mask(F.space, P)
    return SplitResult(_restrict(F, mask), _restrict(F, ~mask), mask, F.space)


def _sig(F: Optional[Frame]) -> tuple[int, int]:
    return (F.space.p, F.space.q) if F is not None else (0, 0)


def merge_frames(
    FA: Optional[Frame],
    FB: Optional[Frame],
    mask_a=None,
    mask_b=None,
    parent: Optional[KreinSpace] = None,
) -> Frame:
    """Union of two frames living on complementary coordinate subspaces.

    Without masks the parent is the canonical direct sum: A's positive
    coordinates, B's positive coordinates, A's negative, B's negative.
    """
    (pa, qa), (pb, qb) = _sig(FA), _sig(FB)
    if parent is None:
        parent = KreinSpace(pa + pb, qa + qb)
    n, p = parent.n, parent.p
    if mask_a is None and mask_b is None:
        if (pa + pb, qa + qb) != (parent.p, parent.q):
            raise SignatureMismatch("parent signature is not the sum of the parts")
        mask_a = np.array([True] * pa + [False] * pb + [True] * qa + [False] * qb)
    mask_a = None if mask_a is None else np.asarray(mask_a, dtype=bool)
    mask_b = None if mask_b is None else np.asarray(mask_b, dtype=bool)
    if mask_a is None:
        mask_a = ~mask_b
    if mask_b is None:
        mask_b = ~mask_a
    if mask_a.shape != (n,) or mask_b.shape != (n,):
        raise SignatureMismatch(f"masks must have length {n}")
    if np.any(mask_a & mask_b):
        raise OverlappingMasks(f"masks overlap on coordinates {np.flatnonzero(mask_a & mask_b).tolist()}")
    if not np.all(mask_a | mask_b):
        raise SignatureMismatch("masks do not cover the parent space")
    for F, m, (pp, qq), name in ((FA, mask_a, (pa, qa), "A"), (FB, mask_b, (pb, qb), "B")):
        if (int(m[:p].sum()), int(m[p:].sum())) != (pp, qq):
            raise SignatureMismatch(f"mask for {name} does not match its signature ({pp}, {qq})")
    rows = []
    for F, m in ((FA, mask_a), (FB, mask_b)):
        if F is None:
            continue
        R = np.zeros((F.k, n), dtype=complex)
        R[:, m] = F.vectors
        rows.append(R)
    if not rows:
        raise SignatureMismatch("nothing to merge")
    return Frame(parent, np.vstack(rows))


# -- coefficient transfer ---------------------------------------------------


@dataclass(frozen=True)
class TransferOperators:
    S1: np.ndarray
    S2: np.ndarray
    residual_plus: float
    residual_minus: float


@dataclass(frozen=True)
class NotTransferable:
    residual_plus: float
    residual_minus: float

    def __bool__(self) -> bool:
        return False


def _check_cover(k: int, idx_n: Sequence[int], idx_m: Sequence[int]) -> None:
    if not idx_n or not idx_m:
        raise BadIndexCover("both index lists must be non-empty")
    all_idx = set(idx_n) | set(idx_m)
    if any(i < 0 or i >= k for i in all_idx):
        raise BadIndexCover(f"indices must lie in 0..{k - 1}")
    if all_idx != set(range(k)):
        raise BadIndexCover(f"indices {sorted(set(range(k)) - all_idx)} are not covered")


def coefficient_transfer(
    F: Frame, idx_n: Sequence[int], idx_m: Sequence[int], tol: float = DEFAULT_TOL
) -> Union[TransferOperators, NotTransferable]:
    """Operators mapping the analysis coefficients of one subfamily to another.

    Per component ``S = theta_m pinv(theta_n)``; the operators exist exactly
    when ``S theta_n = theta_m``, checked to relative residual 1e-9. When
    they exist the ``idx_n`` subfamily is itself a frame.
    Indices are 0-based.
    """
    idx_n, idx_m = list(idx_n), list(idx_m)
    _check_cover(F.k, idx_n, idx_m)
    if not family_is_frame(F.space, F.vectors[idx_m], tol):
        raise SubfamilyNotFrame("the idx_m subfamily is not a frame")
    ops, res = [], []
    for comp in (F.plus, F.minus):
        th_n = comp[idx_n].conj()
        th_m = comp[idx_m].conj()
        if comp.shape[1] == 0:
            ops.append(np.zeros((len(idx_m), len(idx_n)), dtype=complex))
            res.append(0.0)
            continue
        S = th_m @ pseudo_inverse(th_n)
        ops.append(S)
        res.append(float(np.linalg.norm(S @ th_n - th_m) / np.linalg.norm(th_m)))
    if max(res) <= TRANSFER_RTOL:
        return TransferOperators(ops[0], ops[1], res[0], res[1])
    return NotTransferable(res[0], res[1])


# -- frame sequences and exactness ------------------------------------------


@dataclass(frozen=True)
class FrameSequenceReport:
    """Bounds on the spans of the components; ``None`` for a zero span.

    ``minus_bounds`` follows the frame sign convention ``(A2, B2)`` with
    both entries negative.
    """

    is_frame_sequence: bool
    plus_rank: int
    minus_rank: int
    plus_bounds: Optional[tuple]
    minus_bounds: Optional[tuple]


def _span_bounds(rows: np.ndarray, tol: float) -> tuple[int, Optional[tuple]]:
    if rows.shape[1] == 0 or not np.any(rows):
        return 0, None
    r = numerical_rank(rows, tol)
    if r == 0:
        return 0, None
    S = rows.T @ rows.conj()
    lam = hermitian_eig(S).values[-r:]
    return r, (float(lam[0]), float(lam[-1]))


def is_frame_sequence(F: Frame, idx: Sequence[int], tol: float = DEFAULT_TOL) -> FrameSequenceReport:
    """Frame-sequence report for the subfamily at ``idx`` (0-based).

    In finite dimension any finite family frames the span of its
    components, so the verdict is always positive; the useful output is the
    pair of optimal bounds on the spans.
    """
    idx = list(idx)
    if not idx:
        raise ValueError("idx must be non-empty")
    sub = F.vectors[idx]
    rp, bp = _span_bounds(sub[:, : F.space.p], tol)
    rm, bm = _span_bounds(sub[:, F.space.p :], tol)
    if bm is not None:
        bm = (-bm[0], -bm[1])
    return FrameSequenceReport(True, rp, rm, bp, bm)


def _require_frame(F: Frame, tol: float) -> None:
    b = optimal_bounds(F, tol)
    if isinstance(b, NotAFrame):
        raise NotAFrameError(b.reason)


def _rows_exact(space: KreinSpace, rows: np.ndarray, tol: float) -> bool:
    return all(not family_is_frame(space, np.delete(rows, i, axis=0), tol) for i in range(rows.shape[0]))


def is_exact(F: Frame, tol: float = DEFAULT_TOL) -> bool:
    """True when removing any single vector destroys the frame property."""
    _require_frame(F, tol)
    return _rows_exact(F.space, F.vectors, tol)


@dataclass(frozen=True)
class NearExactReport:
    count: int
    removed: tuple
    proper: bool


def near_exact_excess(F: Frame, tol: float = DEFAULT_TOL) -> NearExactReport:
    """Smallest set of vectors whose removal leaves an exact frame.

    Exhaustive search by subset size, lexicographic within a size, so the
    answer is deterministic. A finite frame always admits such a set.
    """
    if F.k > NEAR_EXACT_MAX_K:
        raise SearchLimitExceeded(f"exhaustive search is capped at k <= {NEAR_EXACT_MAX_K}, got {F.k}")
    _require_frame(F, tol)
    for size in range(F.k):
        for removed in combinations(range(F.k), size):
            rest = np.delete(F.vectors, list(removed), axis=0)
            if family_is_frame(F.space, rest, tol) and _rows_exact(F.space, rest, tol):
                return NearExactReport(size, tuple(removed), size > 0)
    raise AssertionError("unreachable: some subfamily of a finite frame is exact")
