import numpy as np
import pytest

from spinorbench import frame_geometry as fg
from spinorbench import products as pr

# oracle values: closed-form curvature of the left-invariant metrics and of
# g = exp(-2cz) |dx|^2, S = -2 c^2 exp(2cz)
SOL_RIC = np.diag([0.0, 0.0, -2.0])
SL2_RIC = np.diag([-6.0, -6.0, 2.0])
NIL_RIC = np.diag([-2.0, -2.0, 2.0])


def ricci(name, x=None, **params):
    model = fg.catalog(name, **params)
    x = model.sample(1, seed=3, margin=0.2)[0] if x is None else x
    return fg.curvature(model, x, derivatives=False)


def test_sol_and_sl2r_ricci():
    assert np.allclose(ricci("sol").Ric, SOL_RIC, atol=1e-8)
    assert np.allclose(ricci("sl2r").Ric, SL2_RIC, atol=1e-8)


def test_nil_oracle_ricci():
    c = ricci("nil")
    assert np.allclose(c.Ric, NIL_RIC, atol=1e-8)
    assert c.S == pytest.approx(-2.0)


def test_space_forms():
    assert np.allclose(ricci("round_s3").Ric, 2 * np.eye(3), atol=1e-10)
    assert np.allclose(ricci("h3").Ric, -2 * np.eye(3), atol=1e-10)
    assert np.allclose(ricci("euclidean3").R, 0)
    c = ricci("round_sphere_chart", k=4)
    assert c.S == pytest.approx(12.0)


@pytest.mark.parametrize("a", [0.3, 1.0, 2.0])
def test_deformed_scalars(a):
    assert ricci("deformed_sasakian_sl2r", a=a).S == pytest.approx(-8 * a * a - 2)
    assert ricci("deformed_sasakian_s3", a=a).S == pytest.approx(8 * a * a - 2)


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_conformal_scalar(c):
    x = np.array([0.1, -0.2, 0.3])
    assert ricci("conformal_flat_r3", x, c=c).S == pytest.approx(-2 * c * c * np.exp(2 * c * x[2]))


@pytest.mark.parametrize("name", fg.CATALOG_3D)
def test_closed_and_fd_agree(name):
    model = fg.catalog(name)
    for x in model.sample(2, seed=1, margin=0.15):
        a = fg.curvature(model, x, "closed", derivatives=False)
        b = fg.curvature(model, x, "fd", derivatives=False)
        assert np.max(np.abs(a.Gamma - b.Gamma)) < 1e-6
        assert np.max(np.abs(a.Ric - b.Ric)) < 1e-6 * (1 + np.max(np.abs(a.Ric)))


@pytest.mark.parametrize("name", fg.CATALOG_3D)
def test_connection_is_metric(name):
    model = fg.catalog(name)
    x = model.sample(1, seed=2, margin=0.2)[0]
    assert fg.christoffel(model, x).metric_compatibility() < 1e-12


@pytest.mark.parametrize("name", ["round_s3", "sl2r", "nil", "sol", "e2_geometry"])
def test_lie_models(name):
    model = fg.catalog(name)
    assert fg.jacobi_residual(model.structure_constants) < 1e-12
    pts = model.sample(4, seed=5)
    R0 = fg.curvature(model, pts[0], derivatives=False).R
    for x in pts[1:]:
        assert np.max(np.abs(fg.curvature(model, x, derivatives=False).R - R0)) < 1e-10


def test_product_is_block_diagonal():
    model = pr.product_catalog("s2xs3")
    x = model.sample(1, seed=0, margin=0.2)[0]
    c = fg.curvature(model, x, derivatives=False)
    assert np.allclose(c.Ric[:2, 2:], 0)
    assert np.allclose(c.Ric[:2, :2], np.eye(2))
    assert np.allclose(c.Ric[2:, 2:], 2 * np.eye(3))
    assert c.S == pytest.approx(2 + 6)


def test_second_derivatives_of_scalar():
    model = fg.catalog("conformal_flat_r3", c=1.0)
    x = np.array([0.0, 0.1, 0.2])
    c = fg.curvature(model, x)
    e = np.exp(2 * x[2])
    # S = -2 e^{2z}; E_3 = e^{z} d/dz, so E_3 S = -4 e^{3z}
    assert c.gradS[2] == pytest.approx(-4 * e * np.exp(x[2]), rel=1e-6)
    assert np.allclose(c.gradS[:2], 0, atol=1e-8)


def test_errors():
    with pytest.raises(fg.GeometryError):
        fg.catalog("klein_bottle")
    model = fg.catalog("sol")
    with pytest.raises(fg.GeometryError):
        fg.curvature(model, np.array([5.0, 0, 0]))
    with pytest.raises(fg.GeometryError):
        fg.curvature(model, np.zeros(2))
    with pytest.raises(fg.GeometryError):
        fg.product(fg.sphere_chart(2), fg.sphere_chart(2))
    with pytest.raises(fg.GeometryError):
        fg.catalog("deformed_sasakian_s3", a=-1.0)
    with pytest.raises(fg.GeometryError):
        fg.sphere_chart(1)
