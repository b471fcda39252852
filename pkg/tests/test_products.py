import numpy as np
import pytest

from spinorbench import frame_geometry as fg
from spinorbench import integrability as ig
from spinorbench import products as pr
from spinorbench import spinor_catalog as cat
from spinorbench.clifford import build_rep
from spinorbench.spin_connection import SpinGeometry, SpinorError


def s2xs3(sM=1, sN=1):
    A = fg.sphere_chart(2, 1.0, prefix="s")
    B = fg.sphere_chart(3, 1.0, prefix="t")
    rM, rN = build_rep(2), build_rep(3, 1)
    psiM = cat.sphere_killing_spinor(A, rM, sM, cat.unit_spinor(2, 0))
    psiN = cat.sphere_killing_spinor(B, rN, sN, cat.unit_spinor(2, 1))
    return SpinGeometry(A, rM), SpinGeometry(B, rN), psiM, psiN, -sM, -1.5 * sN


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("r", [2, 3, 4])
def test_algebra_identities(p, r):
    res = pr.algebra_identities(pr.ProductRep(build_rep(2 * p), build_rep(r)), seed=p + r)
    assert max(res.values()) < pr.ALGEBRA_TOL * 100


def test_product_rep_needs_even_first_factor():
    with pytest.raises(SpinorError):
        pr.ProductRep(build_rep(3), build_rep(2))
    with pytest.raises(ValueError):
        pr.product_action(pr.ProductRep(build_rep(2), build_rep(2)), "Q", 0, np.ones(2), np.ones(2))


@pytest.mark.parametrize("signs", [(1, 1), (1, -1)])
def test_dirac_splitting(signs):
    gM, gN, psiM, psiN, lamM, lamN = s2xs3(*signs)
    prep = pr.ProductRep(gM.rep, gN.rep)
    model = fg.product(gM.model, gN.model)
    x = model.sample(1, seed=0, margin=0.25)[0]
    assert max(pr.splitting_residuals(gM, gN, prep, psiM, psiN, x).values()) < 1e-5
    v = pr.product_spinor(model, prep, psiM, psiN)(x)
    d2 = pr.product_dirac_squared(gM, gN, prep, psiM, psiN, x)
    assert np.linalg.norm(d2 - (lamM**2 + lamN**2) * v) < 1e-5 * (1 + np.linalg.norm(v))


def test_killing_pair_spec():
    with pytest.raises(SpinorError):
        pr.KillingPairSpec(0.0, 1.0, 1)
    with pytest.raises(SpinorError):
        pr.KillingPairSpec(1.0, 1.0, 1, sign=0)
    spec = pr.KillingPairSpec(3.0, 4.0, 1, sign=-1)
    assert spec.lam == -5.0
    assert spec.plus_coefficient == -5.0 - 4.0


def test_pair_on_s2xs3_gates_hypothesis_identities():
    gM, gN, psiM, psiN, lamM, lamN = s2xs3()
    pts = fg.product(gM.model, gN.model).sample(3, seed=1, margin=0.25)
    res = pr.einstein_pair(pr.KillingPairSpec(lamM, lamN, 1, -1), gM, gN, psiM, psiN, pts)
    assert not res["hypotheses"]["holds"]
    v = res["verdicts"]
    assert {v[k] for k in ("norm", "mixed", "diagonal_N")} == {"not-applicable"}
    assert all(v[k] == "pass" for k in ("eigen", "symmetric_derivative", "diagonal_M",
                                        "norm_split", "diagonal_N_split"))
    with pytest.raises(SpinorError):
        pr.einstein_pair(pr.KillingPairSpec(lamM, lamN, 2, -1), gM, gN, psiM, psiN, pts)


@pytest.mark.parametrize("sign", [-1, 1])
def test_pair_on_s6xs3_satisfies_every_identity(sign):
    gM, gN, psiM, psiN, lamM, lamN = pr.six_sphere_pair(3, 6.0)
    pts = fg.product(gM.model, gN.model).sample(2, seed=0, margin=0.25)
    res = pr.einstein_pair(pr.KillingPairSpec(lamM, lamN, 3, sign), gM, gN, psiM, psiN, pts)
    assert res["hypotheses"]["holds"]
    assert all(v == "pass" for v in res["verdicts"].values()), res["residuals"]


def test_balanced_spinor():
    rep = build_rep(6)
    v = pr.balanced_spinor(rep, seed=3)
    Pp, Pm = pr.ProductRep(rep, build_rep(2)).half_spinors()
    a, b = Pp @ v, Pm @ v
    assert np.linalg.norm(a) == pytest.approx(np.linalg.norm(b))
    assert max(abs(np.vdot(b, g @ a)) for g in rep.gens) < 1e-12
    for n in (2, 4, 8):
        with pytest.raises(SpinorError):
            pr.balanced_spinor(build_rep(n))


def test_scalar_ratio():
    assert pr.scalar_ratio(6) == pytest.approx(1.0)
    for r in (2, 3, 7, 20):
        t = pr.scalar_ratio(r)
        assert t > 0
        assert 15 * r * t * t - (3 * r * r - 19 * r + 6) * t - 3 * r * (r - 1) == pytest.approx(0.0, abs=1e-9 * r**3)
    with pytest.raises(ValueError):
        pr.scalar_ratio(1)
    with pytest.raises(ValueError):
        pr.scalar_ratio(2.5)


@pytest.mark.parametrize("r", [2, 3, 5, 6, 8])
def test_einstein_algebra(r):
    SM = 10.0
    SN = SM * pr.scalar_ratio(r)
    lamM, lamN = np.sqrt(0.3 * SM), pr.killing_eigenvalues(SN, r)
    on = pr.product_einstein_algebra(SM, SN, r, lamM, lamN)
    assert on["consistency"] < 1e-12
    assert on["einstein"] == (r == 6)
    lamN_off = pr.killing_eigenvalues(1.01 * SN, r)
    assert pr.product_einstein_algebra(SM, 1.01 * SN, r, lamM, lamN_off)["consistency"] > 1e-4
    with pytest.raises(SpinorError):
        pr.product_einstein_algebra(SM, SN, r, lamM * 1.1, lamN)


def test_einstein_spinor_on_s6_times_sphere():
    on = pr.product_einstein_spinor(2, points=1)
    assert on["passed"] and on["hypotheses"]["holds"]
    assert max(on["dirac"], on["einstein"]) < 1e-6
    off = pr.product_einstein_spinor(2, 1.2 * on["S_N"], points=1)
    assert off["einstein"] > 1e-3


def test_product_catalog():
    a = pr.product_catalog("s2xs3")
    b = pr.product_catalog("product:s2xs3")
    assert a.name == b.name == "product:s2xs3"
    assert a.dim == 5
    with pytest.raises(fg.GeometryError):
        pr.product_catalog("s4xs4")


@pytest.mark.parametrize("key", sorted(pr.PRODUCT_CATALOG))
def test_product_obstructions(key):
    v = ig.obstruction_scan(pr.product_catalog(key))
    assert v.get("product_einstein_pairs").status == "triggered"
