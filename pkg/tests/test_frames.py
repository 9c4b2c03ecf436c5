import numpy as np
import pytest
from hypothesis import given, strategies as st

from kreinframes.errors import DimensionMismatch, LengthMismatch, NonFiniteEntries, NotAFrameError
from kreinframes.frames import (
    Frame,
    FrameBounds,
    NotAFrame,
    coefficients,
    component_operators,
    frame_inequalities_hold,
    grammian,
    is_frame,
    is_parseval,
    is_spanning,
    is_tight,
    optimal_bounds,
    split_components,
    synthesize,
    tight_constant,
)
from kreinframes.kspace import KreinSpace

from conftest import SQ2, random_complex, random_frame, random_unitary

seeds = st.integers(0, 2**32 - 1)


def bounds_oracle(F):
    """Optimal bounds straight from numpy eigenvalues of the component frame operators."""
    P, M = F.plus, F.minus
    A1 = B1 = A2 = B2 = None
    if P.shape[1]:
        lam = np.linalg.eigvalsh(P.T @ P.conj())
        A1, B1 = lam[0], lam[-1]
    if M.shape[1]:
        lam = np.linalg.eigvalsh(M.T @ M.conj())
        A2, B2 = -lam[0], -lam[-1]
    return A1, B1, A2, B2


# -- construction ------------------------------------------------------------


def test_frame_validates_shape_and_values():
    K = KreinSpace(2, 1)
    with pytest.raises(DimensionMismatch):
        Frame(K, [[1, 0]])
    with pytest.raises(NonFiniteEntries):
        Frame(K, [[1, 0, np.nan]])
    with pytest.raises(ValueError):
        Frame(K, np.zeros((0, 3)))
    F = Frame(K, [1, 0, 0])
    assert F.k == 1
    with pytest.raises(ValueError):
        F.vectors[0, 0] = 2


def test_split_components(three_vec):
    plus, minus = split_components(three_vec)
    np.testing.assert_allclose(plus, [[1, 0], [0, 1], [0, 0]])
    np.testing.assert_allclose(minus, [[1 / SQ2], [1 / SQ2], [1]])


# -- golden cases ---------------------------------------------------------------


def test_three_vec_operators(three_vec):
    ops = component_operators(three_vec)
    np.testing.assert_allclose(ops.S1, np.eye(2), atol=1e-15)
    # 1/2 + 1/2 + 1
    np.testing.assert_allclose(ops.S2, [[2.0]], atol=1e-15)
    G1, G2 = grammian(three_vec)
    np.testing.assert_allclose(G1, np.diag([1, 1, 0]), atol=1e-15)
    np.testing.assert_allclose(G2, [[0.5, 0.5, 1 / SQ2], [0.5, 0.5, 1 / SQ2], [1 / SQ2, 1 / SQ2, 1]], atol=1e-15)


def test_three_vec_bounds(three_vec):
    b = optimal_bounds(three_vec)
    np.testing.assert_allclose(b.as_tuple(), (1, 1, -2, -2), atol=1e-10)
    assert is_frame(three_vec)
    assert not is_tight(three_vec)
    assert is_spanning(three_vec)


def test_neutral_single_neutral_vector(neutral):
    b = optimal_bounds(neutral)
    np.testing.assert_allclose(b.as_tuple(), (1, 1, -1, -1), atol=1e-12)
    assert is_frame(neutral) and is_tight(neutral) and is_parseval(neutral)
    assert not is_spanning(neutral)


def test_not_a_frame_reason():
    F = Frame(KreinSpace(2, 1), [[1, 0, 1], [2, 0, 1]])
    b = optimal_bounds(F)
    assert isinstance(b, NotAFrame) and not b
    assert b.reason == "K+ component not spanned"
    both = optimal_bounds(Frame(KreinSpace(2, 1), [[1, 0, 0]]))
    assert both.reason == "K+ and K- components not spanned"
    with pytest.raises(NotAFrameError):
        is_tight(F)


def test_degenerate_signatures():
    b = optimal_bounds(Frame(KreinSpace(2, 0), np.eye(2)))
    assert b.as_tuple() == (1.0, 1.0, None, None)
    b = optimal_bounds(Frame(KreinSpace(0, 2), 2 * np.eye(2)))
    np.testing.assert_allclose(b.as_tuple()[2:], (-4, -4))
    assert b.A1 is None
    assert tight_constant(b) == pytest.approx(4.0)


def test_tight_constant_rules():
    assert tight_constant(FrameBounds(2, 2, -2, -2)) == 2
    assert tight_constant(FrameBounds(2, 2, -1, -1)) is None
    assert tight_constant(FrameBounds(1, 1 + 1e-12, -1, -1)) == 1


def test_union_of_two_bases_is_tight_with_constant_two(rng):
    K = KreinSpace(2, 2)
    blocks = []
    for _ in range(2):
        U = np.zeros((4, 4), dtype=complex)
        U[:2, :2], U[2:, 2:] = random_unitary(rng, 2), random_unitary(rng, 2)
        blocks.append(U)
    F = Frame(K, np.vstack(blocks))
    assert is_tight(F) and not is_parseval(F)
    assert tight_constant(optimal_bounds(F)) == pytest.approx(2.0)


# -- properties --------------------------------------------------------------


@st.composite
def frames(draw, min_extra=0):
    seed = draw(seeds)
    p = draw(st.integers(0, 3))
    q = draw(st.integers(0 if p else 1, 3))
    k = p + q + draw(st.integers(min_extra, 3))
    return random_frame(np.random.default_rng(seed), p, q, k)


@given(F=frames())
def test_bounds_match_numpy_oracle(F):
    b = optimal_bounds(F)
    assert b
    got = [np.nan if v is None else v for v in b.as_tuple()]
    want = [np.nan if v is None else v for v in bounds_oracle(F)]
    np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-12)


@given(F=frames())
def test_frame_operator_and_grammian_share_spectrum(F):
    ops = component_operators(F)
    for S, G in zip((ops.S1, ops.S2), grammian(F)):
        np.testing.assert_allclose(S, S.conj().T, atol=1e-12)
        np.testing.assert_allclose(G, G.conj().T, atol=1e-12)
        ls = np.linalg.eigvalsh(S) if S.size else np.zeros(0)
        lg = np.sort(np.linalg.eigvalsh(G))[::-1][: S.shape[0]]
        np.testing.assert_allclose(np.sort(ls)[::-1], lg, atol=1e-10 * max(1, np.max(np.abs(lg), initial=0)))


@given(F=frames(), seed=seeds)
def test_frame_inequalities_at_optimal_bounds(F, seed):
    b = optimal_bounds(F)
    xs = random_complex(np.random.default_rng(seed), 20, F.space.n)
    assert frame_inequalities_hold(F, b, xs, slack=1e-9)


def test_frame_inequalities_detect_wrong_bounds(three_vec):
    xs = np.eye(3)
    assert not frame_inequalities_hold(three_vec, FrameBounds(1, 1, -1, -1), xs, slack=1e-9)
    assert not frame_inequalities_hold(three_vec, FrameBounds(1.5, 2, -2, -2), xs, slack=1e-9)


@given(F=frames(), seed=seeds)
def test_reconstruction_round_trip(F, seed):
    f = random_complex(np.random.default_rng(seed), F.space.n)
    cp, cm = coefficients(F, f)
    assert np.linalg.norm(synthesize(F, cp, cm) - f) <= 1e-9 * np.linalg.norm(f)


def test_three_vec_coefficients(three_vec):
    # f = e3 lies in K-: c+ vanishes and c- carries the Krein-product sign
    cp, cm = coefficients(three_vec, [0, 0, 1])
    np.testing.assert_allclose(cp, 0, atol=1e-15)
    np.testing.assert_allclose(cm, -np.array([1 / (2 * SQ2), 1 / (2 * SQ2), 0.5]), atol=1e-15)
    np.testing.assert_allclose(synthesize(three_vec, cp, cm), [0, 0, 1], atol=1e-15)
    cp, cm = coefficients(three_vec, [1, 2, 0])
    np.testing.assert_allclose(cp, [1, 2, 0], atol=1e-15)


def test_synthesize_length_check(three_vec):
    with pytest.raises(LengthMismatch):
        synthesize(three_vec, [1, 2], [1, 2, 3])


def test_coefficients_require_frame():
    with pytest.raises(NotAFrameError):
        coefficients(Frame(KreinSpace(2, 1), [[1, 0, 1]]), [1, 0, 0])


@given(F=frames())
def test_spanning_implies_frame(F):
    if is_spanning(F):
        assert is_frame(F)


def test_rank_tolerance_boundary():
    # plus component has singular values ~1 and 1e-12: numerically rank one
    F = Frame(KreinSpace(2, 1), [[1, 0, 1], [1, 1e-12, 1]])
    assert not is_frame(F)
    assert is_frame(F, tol=1e-13)
