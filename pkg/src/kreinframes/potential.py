"""Frame potential, its k^2/n floor, a tight-frame optimizer, FF-critical families."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import KLessThanN, NotFFCritical, NotUnitNorm, VerificationFailed
from .frames import Frame, component_operators, grammian
from .kspace import KreinSpace
from .numeric_core import hermitian_eig, numerical_rank

UNIT_TOL = 1e-10
ZERO_TOL = 1e-12


def require_unit_norm(F: Frame, tol: float = UNIT_TOL) -> None:
    norms = np.sum(np.abs(F.vectors) ** 2, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol)
    if bad.size:
        raise NotUnitNorm(f"vectors {bad.tolist()} do not have unit J-norm")


def normalize_rows(X: np.ndarray) -> np.ndarray:
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def frame_potential(F: Frame) -> float:
    """Sum over all pairs of ``|<f_i+, f_j+>|^2 + |<f_i-, f_j->|^2``."""
    require_unit_norm(F)
    G1, G2 = grammian(F)
    return float(np.sum(np.abs(G1) ** 2) + np.sum(np.abs(G2) ** 2))


def minimum_potential(n: int, k: int) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    if k < n:
        raise KLessThanN(f"need k >= n, got k={k}, n={n}")
    return k * k / n


@dataclass
class OptimizerOptions:
    max_iters: int = 10000
    step0: float = 0.1
    grad_tol: float = 1e-10
    min_step: float = 1e-20


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    frame: Frame
    potential: float
    iterations: int
    converged: bool
    no_descent: bool
    history: list = field(repr=False)


def _frame_ops(X: np.ndarray, p: int):
    Xp, Xm = X[:, :p], X[:, p:]
    return Xp.T @ Xp.conj(), Xm.T @ Xm.conj()


def _excess(X: np.ndarray, p: int, c: float) -> float:
    # |S1 - cI|^2 + |S2 - cI|^2 equals P_F - k^2/n on the unit J-sphere;
    # comparing excesses resolves descent long after P_F itself rounds flat.
    S1, S2 = _frame_ops(X, p)
    return float(
        np.sum(np.abs(S1 - c * np.eye(S1.shape[0])) ** 2) + np.sum(np.abs(S2 - c * np.eye(S2.shape[0])) ** 2)
    )


def _projected_gradient(X: np.ndarray, p: int) -> np.ndarray:
    S1, S2 = _frame_ops(X, p)
    # row i holds 4 (S1 f_i+ (+) S2 f_i-)
    G = 4.0 * np.hstack([X[:, :p] @ S1.T, X[:, p:] @ S2.T])
    radial = np.sum(G * X.conj(), axis=1).real
    return G - radial[:, None] * X


def minimize_potential(
    space: KreinSpace,
    k: int,
    seed: int = 0,
    options: Optional[OptimizerOptions] = None,
    init=None,
) -> OptimizationResult:
    """Projected gradient descent of the frame potential over unit-J-norm families.

    Starts from seeded standard-normal coordinates (or ``init``), steps
    along the tangent part of ``4 (S1 f+ (+) S2 f-)``, halves the step from
    ``step0`` until the potential drops, and renormalizes every vector.
    Stops when the largest tangent gradient row is under ``grad_tol``, when
    no step length gives descent (``no_descent``), or at ``max_iters``.
    """
    opts = options or OptimizerOptions()
    minimum_potential(space.n, k)
    p = space.p
    c = k / space.n
    if init is None:
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((k, space.n)).astype(complex)
    else:
        X = np.array(init, dtype=complex).reshape(k, space.n)
    X = normalize_rows(X)

    E = _excess(X, p, c)
    history = [E + k * k / space.n]
    converged = no_descent = False
    it = 0
    while it < opts.max_iters:
        g = _projected_gradient(X, p)
        if np.max(np.linalg.norm(g, axis=1)) <= opts.grad_tol:
            converged = True
            break
        step = opts.step0
        while True:
            Y = normalize_rows(X - step * g)
            E_new = _excess(Y, p, c)
            if E_new < E:
                break
            step *= 0.5
            if step < opts.min_step:
                no_descent = True
                break
        if no_descent:
            break
        X, E = Y, E_new
        it += 1
        history.append(E + k * k / space.n)
    F = Frame(space, X)
    return OptimizationResult(F, frame_potential(F), it, converged, no_descent, history)


# -- FF-critical families ---------------------------------------------------


def _rayleigh(S: np.ndarray, rows: np.ndarray):
    """Per-row Rayleigh quotient, residual norm and vector norm."""
    Sf = rows @ S.T
    nrm2 = np.sum(np.abs(rows) ** 2, axis=1)
    safe = np.where(nrm2 > 0, nrm2, 1.0)
    lam = np.sum(Sf * rows.conj(), axis=1).real / safe
    res = np.linalg.norm(Sf - lam[:, None] * rows, axis=1)
    return lam, res, np.sqrt(nrm2)


def _component_critical(S: np.ndarray, rows: np.ndarray, tol: float) -> bool:
    if rows.shape[1] == 0:
        return True
    lam, res, nrm = _rayleigh(S, rows)
    live = nrm > ZERO_TOL
    return bool(np.all(res[live] <= tol * nrm[live]))


def is_ff_critical(F: Frame, tol: float = 1e-8) -> bool:
    """Every nonzero component vector is an eigenvector of its frame operator."""
    require_unit_norm(F)
    ops = component_operators(F)
    return _component_critical(ops.S1, F.plus, tol) and _component_critical(ops.S2, F.minus, tol)


@dataclass(frozen=True)
class FFPartition:
    """Eigenvalue classes per component as ``(lambda, indices)``, ascending in lambda."""

    plus_classes: list
    minus_classes: list
    excluded_plus: tuple
    excluded_minus: tuple


def _find(parent: list, i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def _classes(S: np.ndarray, rows: np.ndarray, tol: float):
    if rows.shape[1] == 0:
        return [], tuple(range(rows.shape[0]))
    lam, _, nrm = _rayleigh(S, rows)
    live = [i for i in range(rows.shape[0]) if nrm[i] > ZERO_TOL]
    excluded = tuple(i for i in range(rows.shape[0]) if nrm[i] <= ZERO_TOL)
    par = list(range(rows.shape[0]))
    for a in live:
        for b in live:
            if b <= a:
                continue
            if abs(lam[a] - lam[b]) <= tol * (1.0 + max(abs(lam[a]), abs(lam[b]))):
                ra, rb = _find(par, a), _find(par, b)
                if ra != rb:
                    par[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list] = {}
    for i in live:
        groups.setdefault(_find(par, i), []).append(i)
    classes = [(float(np.mean(lam[g])), tuple(g)) for g in groups.values()]
    classes.sort(key=lambda c: (c[0], c[1]))
    return classes, excluded


def _verify_classes(rows: np.ndarray, classes: list, tol: float, side: str) -> None:
    k = rows.shape[0]
    for lam, idx in classes:
        E = rows[list(idx)]
        r = numerical_rank(E)
        ev = hermitian_eig(E.T @ E.conj()).values[-r:]
        if np.max(np.abs(ev - lam)) > 10 * k * tol * (1.0 + abs(lam)):
            raise VerificationFailed(f"{side} class lambda={lam:.6g} is not tight for its span")
    for (la, ia), (lb, ib) in ((a, b) for i, a in enumerate(classes) for b in classes[i + 1 :]):
        A, B = rows[list(ia)], rows[list(ib)]
        cross = np.abs(A.conj() @ B.T)
        scale = np.outer(np.linalg.norm(A, axis=1), np.linalg.norm(B, axis=1))
        if np.max(cross - 10 * k * tol * scale) > 0:
            raise VerificationFailed(f"{side} classes lambda={la:.6g} and {lb:.6g} are not orthogonal")


def ff_partition(F: Frame, tol: float = 1e-8) -> FFPartition:
    """Split an FF-critical family into its eigenvalue classes.

    Component vectors are grouped by Rayleigh quotient (values within
    ``tol (1 + |lambda|)`` are merged transitively). Each class is checked to
    be tight for its span with constant ``lambda`` and orthogonal to the
    other classes; zero component vectors are reported as excluded.
    """
    if not is_ff_critical(F, tol):
        raise NotFFCritical("family is not FF-critical")
    ops = component_operators(F)
    plus, ex_p = _classes(ops.S1, F.plus, tol)
    minus, ex_m = _classes(ops.S2, F.minus, tol)
    _verify_classes(F.plus, plus, tol, "K+")
    _verify_classes(F.minus, minus, tol, "K-")
    return FFPartition(plus, minus, ex_p, ex_m)
