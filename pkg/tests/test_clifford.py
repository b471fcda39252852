from itertools import combinations

import numpy as np
import pytest

from spinorbench.clifford import (CliffordError, FrameForm, build_rep, chirality_projectors,
                                  chirality_split, clifford_identity_residuals, cross_identity_residual,
                                  form_action, form_matrix, herm, real_inner, two_form_matrix,
                                  vector_action, volume_element)


@pytest.mark.parametrize("n", range(2, 10))
@pytest.mark.parametrize("chi", [1, -1])
def test_defining_relations(n, chi):
    rep = build_rep(n, chi)
    I = rep.identity
    assert rep.dim == 2 ** (n // 2)
    for i, j in combinations(range(n), 2):
        assert np.allclose(rep.gens[i] @ rep.gens[j] + rep.gens[j] @ rep.gens[i], 0, atol=1e-13)
    for g in rep.gens:
        assert np.allclose(g @ g, -I, atol=1e-13)
        assert np.allclose(g.conj().T, -g, atol=1e-13)


@pytest.mark.parametrize("n", range(2, 10))
def test_identity_residuals_tiny(n):
    res = clifford_identity_residuals(build_rep(n, -1), np.random.default_rng(n))
    assert max(res.values()) < 1e-12


def test_odd_chiralities_differ_by_volume_sign():
    for n in (3, 5, 7, 9):
        a, b = build_rep(n, 1), build_rep(n, -1)
        assert np.allclose(a.gens[-1], -b.gens[-1])
        assert np.allclose(volume_element(a), -volume_element(b))
        # odd volume elements are central scalars
        assert np.allclose(volume_element(a), volume_element(a)[0, 0] * a.identity)


def test_three_dim_orientation():
    plus, minus = build_rep(3, 1), build_rep(3, -1)
    assert np.allclose(plus.gens[0] @ plus.gens[1], -plus.gens[2])
    assert np.allclose(minus.gens[0] @ minus.gens[1], minus.gens[2])


@pytest.mark.parametrize("chi", [1, -1])
def test_cross_product_identity(chi, rng):
    rep = build_rep(3, chi)
    for _ in range(5):
        X, Y = rng.normal(size=(2, 3))
        p = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert cross_identity_residual(rep, X, Y, p) < 1e-12


def test_cross_product_wrong_orientation_fails():
    rep = build_rep(3, -1)
    X, Y = np.eye(3)[0], np.eye(3)[1]
    assert cross_identity_residual(rep, X, Y, np.array([1, 0j]), orientation=1) > 1


def test_form_transpose_sign(rng):
    rep = build_rep(5, 1)
    p1 = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
    p2 = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
    for k in range(1, 6):
        w = FrameForm(k, {idx: rng.normal() for idx in combinations(range(5), k)})
        W = form_matrix(rep, w)
        sign = (-1) ** (k * (k + 1) // 2)
        assert abs(herm(W @ p1, p2) - sign * herm(p1, W @ p2)) < 1e-12


def test_two_form_matrix_matches_frame_form(rng):
    rep = build_rep(4)
    A = rng.normal(size=(4, 4))
    A = A - A.T
    direct = sum(A[i, j] * rep.gens[i] @ rep.gens[j] for i in range(4) for j in range(i + 1, 4))
    assert np.allclose(two_form_matrix(rep, A), direct)
    psi = rng.normal(size=4) + 0j
    assert np.allclose(form_action(rep, FrameForm.from_antisymmetric(A), psi), direct @ psi)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_chirality_projectors(n, rng):
    rep = build_rep(n)
    Pp, Pm = chirality_projectors(rep)
    assert np.allclose(Pp @ Pp, Pp) and np.allclose(Pm @ Pm, Pm)
    assert np.allclose(Pp @ Pm, 0)
    assert np.allclose(Pp + Pm, rep.identity)
    assert np.trace(Pp).real == pytest.approx(rep.dim / 2)
    psi = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
    a, b = chirality_split(rep, psi)
    assert np.allclose(a + b, psi)
    # vectors swap the half-spinor spaces
    assert np.allclose(Pp @ rep.gens[0] @ Pp, 0)


def test_vectors_are_real_orthogonal(rng):
    rep = build_rep(7, 1)
    psi = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
    X = rng.normal(size=7)
    assert abs(real_inner(vector_action(rep, X, psi), psi)) < 1e-12
    assert real_inner(vector_action(rep, X, psi), vector_action(rep, X, psi)) == pytest.approx(
        X @ X * real_inner(psi, psi))


def test_errors():
    with pytest.raises(CliffordError):
        build_rep(1)
    with pytest.raises(CliffordError):
        build_rep(3, 0)
    rep = build_rep(3)
    with pytest.raises(CliffordError):
        vector_action(rep, np.ones(2), np.ones(2))
    with pytest.raises(CliffordError):
        vector_action(rep, np.ones(3), np.ones(4))
    with pytest.raises(CliffordError):
        FrameForm(2, {(1, 0): 1.0})
    with pytest.raises(CliffordError):
        form_matrix(rep, FrameForm(1, {(5,): 1.0}))
    with pytest.raises(CliffordError):
        chirality_projectors(rep)
