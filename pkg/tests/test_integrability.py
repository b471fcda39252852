import numpy as np
import pytest

from spinorbench import contact_sasakian as cs
from spinorbench import frame_geometry as fg
from spinorbench import integrability as ig
from spinorbench import spinor_catalog as cat
from spinorbench.clifford import build_rep
from spinorbench.spin_connection import SpinGeometry, SpinorError
from spinorbench.workbench import NO_WK_ROWS

SQ5 = np.sqrt(5.0)
LAM_GOLDEN = (2 + SQ5) / 2


@pytest.fixture(scope="module")
def golden():
    model = fg.catalog("deformed_sasakian_s3", a=np.sqrt((3 + SQ5) / 8))
    rep = cs.sasakian_rep(1)
    curv = fg.curvature(model, np.zeros(3))
    psi = cat.quasi_killing_spinor(model, rep, *cs.three_dim_branches(curv.S)["second_minus"],
                                   cat.unit_spinor(2, 0))
    return model, rep, curv, psi


@pytest.mark.parametrize("name", NO_WK_ROWS)
def test_table_rows_excluded(name):
    verdict = ig.obstruction_scan(fg.catalog(name))
    assert verdict.excludes_wk, verdict.to_dict()


def test_space_forms_not_excluded():
    for name in ("round_s3",):
        assert not ig.obstruction_scan(fg.catalog(name)).triggered


def test_nil_obstructions():
    v = ig.obstruction_scan(fg.catalog("nil"))
    ids = {e.id for e in v.triggered}
    assert {"sasakian_scalar", "integrability_3d"} <= ids


@pytest.mark.parametrize("a", [0.3, 1.0, 2.0])
def test_deformed_sl2r_excluded(a):
    v = ig.obstruction_scan(fg.catalog("deformed_sasakian_sl2r", a=a))
    assert v.excludes_wk
    assert v.get("sasakian_scalar").status == "triggered"


def test_sol_has_no_wk_spinors():
    info = ig.sol_wk_nonexistence(lams=np.linspace(0.1, 3.0, 12), points=4)
    assert info["contradiction_pair"] == (2.0, -2.0)
    assert info["reduction_residual"] < 1e-8
    assert info["algebraic_min_singular"] > 0.1
    assert info["nonexistence"]


def test_golden_admissible_number(golden):
    _, rep, curv, _ = golden
    assert ig.admissible_wk_numbers(curv, rep) == pytest.approx([LAM_GOLDEN])
    assert ig.identity_route_wk_numbers(curv) == pytest.approx([LAM_GOLDEN])


def test_round_sphere_relations():
    curv = fg.curvature(fg.catalog("round_s3"), np.full(3, 0.1))
    # 8 lam^2 (S^2 - 2|Ric|^2) = S^3 with S = 6, |Ric|^2 = 12
    assert ig.three_dim_relation(curv, 1.5) == pytest.approx(0.0, abs=1e-9)
    assert ig.lambda_squared_from_scalar(curv) == pytest.approx(2.25)
    assert ig.admissible_wk_numbers(curv, build_rep(3, 1)) == pytest.approx([-1.5, 1.5])
    for lam in (1.5, -1.5):
        assert max(ig.cross_product_identities(curv, lam).values()) < 1e-12
    assert max(ig.cross_product_identities(curv, 1.0).values()) > 1e-3


def test_dirac_lower_bound():
    assert ig.dirac_lower_bound(3, 6.0) == pytest.approx(2.25)
    assert ig.dirac_lower_bound(4, 12.0) == pytest.approx(4.0)


def test_wk_identities_on_golden_sphere(golden):
    _, rep, curv, psi = golden
    res = ig.wk_integrability_check(curv, rep, psi(np.zeros(3)), LAM_GOLDEN)
    assert max(res.values()) < 1e-10
    bad = ig.wk_integrability_check(curv, rep, psi(np.zeros(3)), 1.0)
    assert bad["scalar"] > 1e-3


def test_wk_identities_conformal():
    model = fg.catalog("conformal_flat_r3", c=1.0)
    psi = cat.conformal_wk_spinor(model, 1)
    x = np.array([0.1, 0.2, 0.3])
    res = ig.wk_integrability_check(fg.curvature(model, x), build_rep(3, 1), psi(x), 1.0)
    assert max(res.values()) < 1e-3


def test_eigenvalue_bound_equality_for_wk():
    model = fg.catalog("conformal_flat_r3", c=1.0)
    geo = SpinGeometry(model, build_rep(3, 1))
    psi = cat.conformal_wk_spinor(model, 1)
    x = np.array([0.1, 0.2, 0.3])
    assert abs(ig.eigenvalue_bound(geo, psi, x, 1.0)["slack"]) < 1e-6
    assert abs(ig.einstein_spinor_bound(fg.curvature(model, x), 1.0)["slack"]) < 1e-6


def test_einstein_normalization():
    model = fg.catalog("conformal_flat_r3", c=1.0)
    geo = SpinGeometry(model, build_rep(3, 1))
    psi = cat.conformal_wk_spinor(model, 1)
    res = ig.einstein_normalization(geo, psi, 1.0, model.sample(3, seed=0))
    assert res["ratio_spread"] < 1e-10
    assert res["einstein_residual"] < 1e-8
    assert res["trace_residual"] < 1e-10


@pytest.mark.parametrize("chi,b", [(1, -0.5), (-1, 0.5)])
def test_killing_to_einstein(chi, b):
    from spinorbench.spin_connection import EquationSpec, residual
    model = fg.catalog("round_s3")
    psi, _ = cat.round_s3_constant(chi, cat.unit_spinor(2, 3))
    phi = ig.killing_to_einstein(psi, b, 3)
    assert phi.params["lam"] == pytest.approx(-3 * b)
    spec = EquationSpec.einstein_dirac(-3 * b, phi.params["eps"])
    assert residual(model, build_rep(3, chi), phi, spec, model.sample(3, seed=0)).max < 1e-8


def test_unit_vector_from_wk_spinor(golden):
    model, rep, _, psi = golden
    res = ig.wk_to_unit_vector(SpinGeometry(model, rep), psi, np.zeros(3), LAM_GOLDEN)
    assert res["norm"] == pytest.approx(1.0)
    assert res["eigen_residual"] < 1e-12
    assert res["derivative_residual"] < 1e-8
    assert res["coefficient"] == pytest.approx(2 * abs(LAM_GOLDEN))


def test_errors():
    flat = fg.curvature(fg.catalog("euclidean3"), np.zeros(3))
    with pytest.raises(SpinorError):
        ig.wk_integrability_check(flat, build_rep(3, 1), np.ones(2), 1.0)
    s4 = fg.curvature(fg.catalog("round_sphere_chart", k=4), np.full(4, 0.1), derivatives=False)
    with pytest.raises(SpinorError):
        ig.cross_product_identities(s4, 1.0)
    with pytest.raises(SpinorError):
        ig.unit_vector(build_rep(3, 1), np.zeros(2))
