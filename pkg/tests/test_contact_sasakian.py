from math import comb

import numpy as np
import pytest

from spinorbench import contact_sasakian as cs
from spinorbench import frame_geometry as fg
from spinorbench import spin_connection as scn
from spinorbench import spinor_catalog as cat
from spinorbench.clifford import build_rep

SQ5 = np.sqrt(5.0)
GOLDEN_A2 = [(3 + SQ5) / 8, (3 - SQ5) / 8]


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_phi_splitting(m):
    rep = cs.sasakian_rep(m)
    dec = cs.decompose(rep)
    assert dec.dims == [comb(m, r) for r in range(m + 1)]
    spectrum = np.sort(np.linalg.eigvals(dec.Phi).imag)
    expected = np.sort(np.concatenate([[2 * r - m] * comb(m, r) for r in range(m + 1)]))
    assert np.allclose(spectrum, expected, atol=1e-10)
    assert max(dec.residuals.values()) < 1e-10


def test_mirrored_representation_rejected():
    with pytest.raises(cs.ConventionError):
        cs.decompose(build_rep(3, -1))


@pytest.mark.parametrize("name,params", [("round_s3", {}), ("sl2r", {}), ("nil", {}),
                                         ("deformed_sasakian_s3", {"a": 0.7}),
                                         ("deformed_sasakian_sl2r", {"a": 1.6})])
def test_models_are_sasakian(name, params):
    st = cs.AlmostContactStructure.from_model(fg.catalog(name, **params))
    res = cs.verify_sasakian(st)
    assert res["passed"], res


def test_non_sasakian_model_rejected():
    with pytest.raises(ValueError):
        cs.AlmostContactStructure.from_model(fg.catalog("sol"))


def test_space_form_identities():
    for m in (1, 2, 3):
        curv = cs.curvature_from_tensor(cs.sasakian_space_form(m, 0.4))
        res = cs.check_sasakian_algebra(cs.sasakian_rep(m), cs.decompose(cs.sasakian_rep(m)), curv)
        assert max(res.values()) < 1e-12


def test_three_dim_branches_at_six():
    br = cs.three_dim_branches(6.0)
    assert br["first"] == (-0.5, 0.0)
    assert br["second_plus"] == pytest.approx((0.5, 0.0))
    assert br["second_minus"] == pytest.approx((-1.5, 2.0))
    assert set(cs.three_dim_branches(-3.0)) == {"first"}


def test_golden_branches_give_wk_numbers():
    lam_plus = cs.qk_dirac_eigenvalue(*cs.three_dim_branches(1 + SQ5)["second_minus"], 1)
    lam_minus = cs.qk_dirac_eigenvalue(*cs.three_dim_branches(1 - SQ5)["second_plus"], 1)
    assert lam_plus == pytest.approx((2 + SQ5) / 2)
    assert lam_minus == pytest.approx((2 - SQ5) / 2)
    assert cs.three_dim_branches(1 + SQ5)["second_minus"] == pytest.approx((-(3 + SQ5) / 4, (5 + SQ5) / 4))


@pytest.mark.parametrize("a2", GOLDEN_A2)
def test_deformed_sphere_spinors(a2):
    a = np.sqrt(a2)
    model = fg.catalog("deformed_sasakian_s3", a=a)
    rep = cs.sasakian_rep(1)
    pts = model.sample(4, seed=0)
    curv = fg.curvature(model, pts[0])
    S = curv.S
    assert S == pytest.approx(8 * a2 - 2)
    kt = cs.transferred_killing_type(1, a, -0.5)
    assert kt == pytest.approx(cs.three_dim_branches(S)["first"])
    moved = cat.constant_spinor(cat.unit_spinor(2, 0), 1)
    assert scn.residual(model, rep, moved, scn.EquationSpec.quasi_killing(*kt), pts).max < 1e-10
    lam = (2 + SQ5) / 2 if a2 > 0.5 else (2 - SQ5) / 2
    # the transferred spinor is first-branch and not WK; the second branch is
    assert scn.residual(model, rep, moved, scn.EquationSpec.wk(lam), pts).max > 1e-3
    branch = "second_minus" if a2 > 0.5 else "second_plus"
    psi = cat.quasi_killing_spinor(model, rep, *cs.three_dim_branches(S)[branch], cat.unit_spinor(2, 0))
    assert scn.residual(model, rep, psi, scn.EquationSpec.wk(lam), pts).max < 1e-8


def test_quasi_killing_consequences():
    a = 0.8
    model = fg.catalog("deformed_sasakian_s3", a=a)
    rep = cs.sasakian_rep(1)
    x = model.sample(1, seed=0)[0]
    kt = cs.transferred_killing_type(1, a, -0.5)
    psi = cat.constant_spinor(cat.unit_spinor(2, 2), 1)
    pre = scn.residual(model, rep, psi, scn.EquationSpec.quasi_killing(*kt), [x]).max
    res = cs.quasi_killing_consequences(*kt, 1, fg.curvature(model, x, derivatives=False), rep, psi(x), pre)
    assert res["branch"] == "first"
    for key in ("scalar", "ricci_norm", "ricci_action", "phi_relation", "ricci_form"):
        assert res[key] < 1e-10, key
    with pytest.raises(scn.SpinorError):
        cs.quasi_killing_consequences(*kt, 1, fg.curvature(model, x, derivatives=False), rep, psi(x), None)


def test_deformation_functoriality():
    st = cs.AlmostContactStructure.from_model(fg.catalog("round_s3"))
    assert cs.deformation_functoriality(st, 0.6, 1.7) < 1e-12
    with pytest.raises(ValueError):
        cs.deform(st, 0.0)


def test_transfer_formula():
    st = cs.AlmostContactStructure.from_model(fg.catalog("round_s3"))
    d = cs.deform(st, 0.7)
    psi = cat.constant_spinor(cat.unit_spinor(2, 1), 1)
    assert cs.transfer_residual(d, cs.sasakian_rep(1), psi, np.array([0.1, 0.2, -0.1])) < 1e-10


@pytest.mark.parametrize("m,b,lam,S", [(2, -1.0, -1.5, 4.0), (3, -1.625, -1.875, 3.0)])
def test_wk_criterion(m, b, lam, S):
    info = cs.wk_criterion(0.5, 0.0, m)
    assert info["required_b"] == pytest.approx(b)
    assert info["lam"] == pytest.approx(lam)
    assert info["S"] == pytest.approx(S)
    assert info["ricci_consistency"] < 1e-12
    assert cs.wk_criterion_spinor_check(0.5, m) < 1e-12
    with pytest.raises(ValueError):
        cs.wk_criterion(0.3, 0.0, m)


@pytest.mark.parametrize("m,S", [(1, 8.0), (2, 8.0), (3, 9.0)])
def test_circle_bundle_routes(m, S):
    cb = cs.circle_bundle_curvature(m, S)
    assert np.max(np.abs(cb.ricci - cb.ricci_formula)) < 1e-12
    assert np.max(np.abs(cb.curvature.Ric - cb.ricci_formula)) < 1e-12


@pytest.mark.parametrize("S", [6.0, 1 + SQ5, 1 - SQ5])
def test_flat_connection_branches(S):
    model = fg.catalog("deformed_sasakian_s3", a=np.sqrt((S + 2) / 8))
    curv = fg.curvature(model, np.zeros(3), derivatives=False)
    rep = cs.sasakian_rep(1)
    for a, b in cs.three_dim_branches(S).values():
        on = cs.flat_connection_check(a, b, curv, rep, model=model)
        assert on["formula"] < 1e-10 and on["structure"] < 1e-10
        off = cs.flat_connection_check(a, b + 0.01, curv, rep, model=model)
        assert off["formula"] > 1e-3 and off["structure"] > 1e-3
