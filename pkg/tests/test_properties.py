"""Randomised invariants of the algebra, the curvature engine and the spinor checks."""
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinorbench import contact_sasakian as cs
from spinorbench import frame_geometry as fg
from spinorbench import integrability as ig
from spinorbench import products as pr
from spinorbench import spin_connection as scn
from spinorbench.clifford import FrameForm, build_rep, chirality_projectors, form_matrix, herm, volume_element

dims = st.integers(2, 9)
chis = st.sampled_from([1, -1])
seeds = st.integers(0, 2**32 - 1)
HOMOGENEOUS = ["round_s3", "nil", "sol", "sl2r", "e2_geometry"]


def cvec(rng, d):
    return rng.normal(size=d) + 1j * rng.normal(size=d)


@given(dims, chis, seeds)
def test_vectors_square_to_minus_norm(n, chi, seed):
    rng = np.random.default_rng(seed)
    rep = build_rep(n, chi)
    X, Y = rng.normal(size=(2, n))
    anti = rep.vec(X) @ rep.vec(Y) + rep.vec(Y) @ rep.vec(X)
    assert np.allclose(anti, -2 * (X @ Y) * rep.identity, atol=1e-12 * (1 + abs(X) @ abs(Y)))


@given(st.integers(2, 7), chis, seeds, st.data())
def test_form_transpose_sign(n, chi, seed, data):
    rng = np.random.default_rng(seed)
    rep = build_rep(n, chi)
    k = data.draw(st.integers(1, n))
    w = FrameForm(k, {idx: rng.normal() for idx in combinations(range(n), k)})
    W = form_matrix(rep, w)
    p, q = cvec(rng, rep.dim), cvec(rng, rep.dim)
    sign = (-1) ** (k * (k + 1) // 2)
    assert abs(herm(W @ p, q) - sign * herm(p, W @ q)) < 1e-10 * (1 + np.linalg.norm(W))


@given(st.sampled_from([2, 4, 6, 8]), seeds)
def test_projectors_commute_with_even_elements(n, seed):
    rng = np.random.default_rng(seed)
    rep = build_rep(n)
    Pp, Pm = chirality_projectors(rep)
    X, Y = rng.normal(size=(2, n))
    even = rep.vec(X) @ rep.vec(Y)
    assert np.allclose(Pp @ even, even @ Pp, atol=1e-12 * (1 + np.linalg.norm(even)))
    assert np.allclose(volume_element(rep) @ volume_element(rep), (-1) ** (n // 2) * rep.identity)


@given(st.sampled_from(HOMOGENEOUS), seeds)
def test_homogeneous_curvature_is_constant(name, seed):
    model = fg.catalog(name)
    x, y = model.sample(2, seed=seed % 2**31)
    a = fg.curvature(model, x, derivatives=False).R
    b = fg.curvature(model, y, derivatives=False).R
    assert np.max(np.abs(a - b)) < 1e-10


@settings(max_examples=60)
@given(st.sampled_from(fg.CATALOG_3D), seeds)
def test_curvature_symmetries(name, seed):
    model = fg.catalog(name)
    x = model.sample(1, seed=seed % 2**31)[0]
    c = fg.curvature(model, x, derivatives=False)
    scale = 1 + np.max(np.abs(c.R))
    assert max(c.symmetry_residuals().values()) < 1e-8 * scale


@settings(max_examples=15)
@given(st.sampled_from(fg.CATALOG_3D), seeds)
def test_closed_and_fd_curvature_agree(name, seed):
    model = fg.catalog(name)
    x = model.sample(1, seed=seed % 2**31, margin=0.15)[0]
    a = fg.curvature(model, x, "closed", derivatives=False)
    b = fg.curvature(model, x, "fd", derivatives=False)
    assert np.max(np.abs(a.Ric - b.Ric)) < 1e-6 * (1 + np.max(np.abs(a.Ric)))


@settings(max_examples=10)
@given(seeds)
def test_product_curvature_is_block_diagonal(seed):
    model = pr.product_catalog("s2xs3")
    x = model.sample(1, seed=seed % 2**31, margin=0.2)[0]
    R = fg.curvature(model, x, derivatives=False).R
    mixed = R[:2, 2:, :, :]
    assert np.max(np.abs(mixed)) < 1e-10


@given(st.sampled_from(fg.CATALOG_3D), chis, seeds)
def test_scalar_action_on_random_spinors(name, chi, seed):
    rng = np.random.default_rng(seed)
    model = fg.catalog(name)
    c = fg.curvature(model, model.sample(1, seed=seed % 2**31)[0], derivatives=False)
    assert scn.scalar_action_residual(build_rep(3, chi), c, cvec(rng, 2)) < 1e-8


@given(dims, chis, seeds)
def test_no_zero_divisors(n, chi, seed):
    rep = build_rep(n, chi)
    assert scn.zero_divisor_probe(rep, np.random.default_rng(seed), trials=5) < 1e-10


@given(st.integers(1, 4), seeds)
def test_phi_acts_by_its_eigenvalue(m, seed):
    rng = np.random.default_rng(seed)
    rep = cs.sasakian_rep(m)
    dec = cs.decompose(rep)
    for r in range(m + 1):
        v = dec.projector(r) @ cvec(rng, rep.dim)
        assert np.allclose(dec.Phi @ v, 1j * (2 * r - m) * v, atol=1e-10 * (1 + np.linalg.norm(v)))


@given(st.integers(2, 50))
def test_scalar_ratio_root(r):
    t = pr.scalar_ratio(r)
    assert t > 0
    assert abs(15 * r * t * t - (3 * r * r - 19 * r + 6) * t - 3 * r * (r - 1)) < 1e-9 * r**3


@settings(max_examples=10)
@given(st.integers(1, 3), st.integers(2, 4), seeds)
def test_product_algebra_random_spinors(p, r, seed):
    res = pr.algebra_identities(pr.ProductRep(build_rep(2 * p), build_rep(r)), seed=seed)
    assert max(res.values()) < 1e-12


POSITIVE = st.floats(0.2, 3.0)


@settings(max_examples=10)
@given(POSITIVE, POSITIVE)
def test_deformation_is_functorial(a, b):
    s = cs.AlmostContactStructure.from_model(fg.catalog("round_s3"))
    assert cs.deformation_functoriality(s, a, b) < 1e-10


@settings(max_examples=10)
@given(POSITIVE)
def test_deformed_sl2r_never_carries_wk(a):
    v = ig.obstruction_scan(fg.catalog("deformed_sasakian_sl2r", a=a), fg.catalog(
        "deformed_sasakian_sl2r", a=a).sample(2, seed=0))
    assert v.get("sasakian_scalar").status == "triggered"


GOLDEN_A = [np.sqrt((3 + np.sqrt(5)) / 8), np.sqrt((3 - np.sqrt(5)) / 8)]


@settings(max_examples=10)
@given(st.one_of(POSITIVE, st.sampled_from(GOLDEN_A)))
def test_deformed_sphere_scalar_criterion(a):
    model = fg.catalog("deformed_sasakian_s3", a=a)
    status = ig.obstruction_scan(model, model.sample(2, seed=0)).get("sasakian_scalar").status
    S = 8 * a * a - 2
    if abs(a - 1) < 1e-9 or abs(S) < 1e-8:
        assert status == "not-applicable"          # round sphere (Einstein) or S = 0 (no WK equation)
    elif min(abs(S - g) for g in ig.GOLDEN_S) < 1e-8:
        assert status == "clear"
    else:
        assert status == "triggered"


@pytest.mark.parametrize("a", GOLDEN_A)
def test_golden_deformations_are_clear(a):
    model = fg.catalog("deformed_sasakian_s3", a=a)
    assert ig.obstruction_scan(model).get("sasakian_scalar").status == "clear"
