"""Manifolds presented by orthonormal frames, and their curvature.

A model is a chart (sympy coordinates plus a coframe matrix ``Theta`` with
theta^u = Theta[u, a] dx^a) and optionally constant structure constants
``C[w, u, v]`` meaning [E_u, E_v] = sum_w C[w, u, v] E_w.  Frame vectors are
E_u = sum_a F[u, a] d/dx^a with F = inverse(Theta)^T.

Two independent paths produce the commutator coefficients:

* ``closed``: the constant structure constants when given, otherwise the
  Cartan structure equations applied to exact (symbolic) derivatives of the
  coframe;
* ``fd``: central finite differences of the numeric frame fields.

Curvature follows R(X,Y)Z = [nabla_X, nabla_Y]Z - nabla_[X,Y] Z with
R_ijkl = -g(R(E_i,E_j)E_k, E_l) and Ric_jl = sum_u R_ujul.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy as sp


class GeometryError(ValueError):
    pass


FD_STEP = 1e-5
FD_STEP_OUTER = 1e-4
# outer step for derivatives of finite-difference commutators (curvature fd path)
CURV_STEP = 1e-3


# ---------------------------------------------------------------- finite differences

def richardson_diff(f, x, v, h=FD_STEP):
    """d/dt f(x + t v) at t = 0, central differences with one Richardson pass."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)

    def central(s):
        return (np.asarray(f(x + s * v)) - np.asarray(f(x - s * v))) / (2 * s)

    return (4 * central(h / 2) - central(h)) / 3


def richardson_diff2(f, x, v, h=FD_STEP_OUTER):
    """d^2/dt^2 f(x + t v) at t = 0."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    f0 = np.asarray(f(x))

    def second(s):
        return (np.asarray(f(x + s * v)) - 2 * f0 + np.asarray(f(x - s * v))) / s**2

    return (4 * second(h / 2) - second(h)) / 3


# ---------------------------------------------------------------- data holders

@dataclass
class ConnectionData:
    point: np.ndarray
    C: np.ndarray          # C[w, u, v]
    Gamma: np.ndarray      # Gamma[i, k, j]: nabla_{E_k} E_j = sum_i Gamma[i, k, j] E_i

    def metric_compatibility(self) -> float:
        G = self.Gamma
        return float(np.max(np.abs(G + np.einsum("jki->ikj", G))))


@dataclass
class CurvatureData:
    point: np.ndarray
    R: np.ndarray          # R[i, j, k, l]
    Ric: np.ndarray
    S: float
    RicCov: np.ndarray | None = None   # RicCov[i, j, k] = R_{ij;k}
    gradS: np.ndarray | None = None
    lapS: float | None = None
    Gamma: np.ndarray | None = None
    hessS: np.ndarray | None = None    # hessS[a, b] = (nabla_{E_a} dS)(E_b)

    @property
    def n(self) -> int:
        return self.Ric.shape[0]

    @property
    def ric_norm_sq(self) -> float:
        return float(np.sum(self.Ric**2))

    def symmetry_residuals(self) -> dict:
        R = self.R
        first = R + np.einsum("iklj->ijkl", R) + np.einsum("iljk->ijkl", R)
        return {
            "antisym_12": float(np.max(np.abs(R + np.einsum("jikl->ijkl", R)))),
            "antisym_34": float(np.max(np.abs(R + np.einsum("ijlk->ijkl", R)))),
            "pair_sym": float(np.max(np.abs(R - np.einsum("klij->ijkl", R)))),
            "bianchi": float(np.max(np.abs(first))),
            "ricci_trace": float(np.max(np.abs(self.Ric - np.einsum("ujul->jl", R)))),
            "ricci_sym": float(np.max(np.abs(self.Ric - self.Ric.T))),
            "scalar_trace": float(abs(self.S - np.trace(self.Ric))),
        }


# ---------------------------------------------------------------- model

def _brackets(n: int, table: dict) -> np.ndarray:
    """Structure constants from {(u, v): [c_0, ..., c_{n-1}]} (0-based)."""
    C = np.zeros((n, n, n))
    for (u, v), vec in table.items():
        C[:, u, v] = vec
        C[:, v, u] = -np.asarray(vec, dtype=float)
    return C


def _sparse_lambdify(X, nested, shape):
    """Compile only the nonzero entries of a nested list of expressions."""
    flat = np.array(nested, dtype=object).reshape(-1)
    idx = [i for i, e in enumerate(flat) if e != 0]
    fn = sp.lambdify([X], [flat[i] for i in idx], "numpy") if idx else None

    def ev(x):
        out = np.zeros(flat.size)
        if fn is not None:
            out[idx] = fn(x)
        return out.reshape(shape)
    return ev


class FrameModel:
    def __init__(self, name, coords, coframe, params=None, structure_constants=None,
                 domain=None, flags=None, lie=None):
        self.name = name
        self.coords = tuple(coords)
        self.coframe = sp.Matrix(coframe)
        self.dim = len(self.coords)
        if self.coframe.shape != (self.dim, self.dim):
            raise GeometryError("coframe must be square in the chart dimension")
        self.params = dict(params or {})
        self.structure_constants = None if structure_constants is None else np.asarray(structure_constants, float)
        if domain is None:
            domain = (-np.ones(self.dim), np.ones(self.dim))
        self.domain = (np.asarray(domain[0], float), np.asarray(domain[1], float))
        self.flags = dict(flags or {})
        # (base structure constants, scale matrix) for left-invariant charts
        self.lie = lie

    def __repr__(self):
        return f"FrameModel({self.name!r}, dim={self.dim}, params={self.params})"

    # -- compiled chart data
    @cached_property
    def _theta(self):
        return sp.lambdify([self.coords], sp.Array(self.coframe.tolist()), "numpy")

    @cached_property
    def _dtheta(self):
        n, X = self.dim, self.coords
        d1 = [[[sp.diff(self.coframe[w, b], X[c]) for c in range(n)] for b in range(n)] for w in range(n)]
        d2 = [[[[sp.diff(d1[w][b][c], X[e]) for e in range(n)] for c in range(n)] for b in range(n)]
              for w in range(n)]
        return (_sparse_lambdify(X, d1, (n,) * 3), _sparse_lambdify(X, d2, (n,) * 4))

    def _arr(self, fn, x):
        return np.array(fn(np.asarray(x, float)), dtype=float)

    def theta(self, x) -> np.ndarray:
        return self._arr(self._theta, x)

    def frame(self, x) -> np.ndarray:
        th = self.theta(x)
        if abs(np.linalg.det(th)) < 1e-12:
            raise GeometryError(f"degenerate coframe at {x}")
        return np.linalg.inv(th).T

    def in_domain(self, x, margin=0.0) -> bool:
        lo, hi = self.domain
        return bool(np.all(x >= lo + margin) and np.all(x <= hi - margin))

    def sample(self, count: int, seed: int = 0, margin: float = 0.05) -> np.ndarray:
        rng = np.random.default_rng(seed)
        lo, hi = self.domain
        span = hi - lo
        return lo + margin * span + (1 - 2 * margin) * span * rng.random((count, self.dim))

    def direction(self, x, k) -> np.ndarray:
        """Coordinate components of E_k at x."""
        return self.frame(x)[k]

    def frame_derivative(self, f, x, k, h=FD_STEP):
        """E_k(f) at x by central differences along the coordinate vector of E_k."""
        return richardson_diff(f, x, self.direction(x, k), h)

    @property
    def homogeneous(self) -> bool:
        return self.structure_constants is not None


# ---------------------------------------------------------------- commutators

def _check_point(model: FrameModel, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,):
        raise GeometryError(f"point of dimension {model.dim} expected")
    if not model.in_domain(x):
        raise GeometryError(f"point {x} outside the chart domain of {model.name}")
    return x


def cartan_structure(model: FrameModel, x):
    """C and its coordinate derivatives dC[w,u,v,c] from exact coframe derivatives."""
    x = np.asarray(x, float)
    th = model.theta(x)
    F = np.linalg.inv(th).T
    d1f, d2f = model._dtheta
    d1 = np.array(d1f(x), dtype=float)            # d1[w,b,c] = d_c Theta[w,b]
    d2 = np.array(d2f(x), dtype=float)            # d2[w,b,c,e]
    dth = d1 - np.transpose(d1, (0, 2, 1))        # (d theta^w)[c, b] coefficient pattern
    # d theta^w = sum_{c,b} d_c Theta[w,b] dx^c ^ dx^b ;  C^w_uv = -d theta^w(E_u, E_v)
    C = -np.einsum("wbc,uc,vb->wuv", dth, F, F)
    # derivatives: d_e F = -F (d_e Theta)^T F
    dF = -np.einsum("ua,wae,wv->uve", F, d1, F)    # dF[u, v, e] = d_e F[u, v]
    ddth = d2 - np.transpose(d2, (0, 2, 1, 3))
    dC = -(np.einsum("wbce,uc,vb->wuve", ddth, F, F)
           + np.einsum("wbc,uce,vb->wuve", dth, dF, F)
           + np.einsum("wbc,uc,vbe->wuve", dth, F, dF))
    return C, dC, F


def commutators_fd(model: FrameModel, x, h=FD_STEP):
    x = np.asarray(x, float)
    F = model.frame(x)
    th = model.theta(x)
    n = model.dim
    dF = np.empty((n, n, n))                     # dF[u, a, b] = d_b F[u, a]
    for b in range(n):
        e = np.zeros(n)
        e[b] = 1.0
        dF[:, :, b] = richardson_diff(model.frame, x, e, h)
    br = np.einsum("ub,vab->uva", F, dF) - np.einsum("vb,uab->uva", F, dF)
    return np.einsum("wa,uva->wuv", th, br)


def levi_civita(C: np.ndarray) -> np.ndarray:
    """Koszul formula in an orthonormal frame: Gamma[i,k,j] = g(nabla_{E_k} E_j, E_i)."""
    return 0.5 * (C - np.einsum("kji->ikj", C) + np.einsum("jik->ikj", C))


def _frame_dC(model, x, Cfun, h):
    n = model.dim
    F = model.frame(x)
    return np.stack([richardson_diff(Cfun, x, F[k], h) for k in range(n)], axis=-1)


def structure_data(model: FrameModel, x, method="closed", h=FD_STEP, h_outer=CURV_STEP):
    """Return (C, EC) where EC[w,u,v,k] = E_k(C^w_uv)."""
    x = _check_point(model, x)
    n = model.dim
    if method == "closed":
        if model.structure_constants is not None:
            return model.structure_constants.copy(), np.zeros((n, n, n, n))
        C, dC, F = cartan_structure(model, x)
        return C, np.einsum("wuvc,kc->wuvk", dC, F)
    if method == "fd":
        C = commutators_fd(model, x, h)
        EC = _frame_dC(model, x, lambda y: commutators_fd(model, y, h), h_outer)
        return C, EC
    raise GeometryError(f"unknown method {method!r}")


def christoffel(model: FrameModel, x, method="closed", h=FD_STEP) -> ConnectionData:
    x = _check_point(model, x)
    if method == "closed":
        C = (model.structure_constants.copy() if model.structure_constants is not None
             else cartan_structure(model, x)[0])
    else:
        C = commutators_fd(model, x, h)
    return ConnectionData(x, C, levi_civita(C))


def riemann_from_structure(C: np.ndarray, EC: np.ndarray) -> np.ndarray:
    G = levi_civita(C)
    EG = 0.5 * (EC - np.einsum("kjia->ikja", EC) + np.einsum("jika->ikja", EC))
    # Rc[l, a, b, c]: E_l component of R(E_a, E_b) E_c
    Rc = (np.einsum("lbca->labc", EG) - np.einsum("lacb->labc", EG)
          + np.einsum("ibc,lai->labc", G, G) - np.einsum("iac,lbi->labc", G, G)
          - np.einsum("wab,lwc->labc", C, G))
    return -np.einsum("lijk->ijkl", Rc)


def _ricci_scalar(model, x, method, h, h_outer):
    C, EC = structure_data(model, x, method, h, h_outer)
    R = riemann_from_structure(C, EC)
    Ric = np.einsum("ujul->jl", R)
    return C, R, Ric


def curvature(model: FrameModel, x, method="closed", derivatives=True,
              h=FD_STEP, h_outer=CURV_STEP) -> CurvatureData:
    x = _check_point(model, x)
    C, R, Ric = _ricci_scalar(model, x, method, h, h_outer)
    G = levi_civita(C)
    data = CurvatureData(x, R, Ric, float(np.trace(Ric)), Gamma=G)
    if not derivatives:
        return data
    n = model.dim
    if model.homogeneous and method == "closed":
        ERic = np.zeros((n, n, n))
        gradS = np.zeros(n)
        lapS = 0.0
        hessS = np.zeros((n, n))
    else:
        # derivative tiers: Ric is exact in the closed path, so one FD level suffices
        step = h if method == "closed" else h_outer

        def ric_at(y):
            return _ricci_scalar(model, y, method, h, h_outer)[2]

        F = model.frame(x)
        ERic = np.stack([richardson_diff(ric_at, x, F[k], step) for k in range(n)], axis=-1)
        gradS = np.einsum("jjk->k", ERic)

        def grad_at(y):
            Fy = model.frame(y)
            return np.array([richardson_diff(lambda z: np.trace(ric_at(z)), y, Fy[k], 1e-3)
                             for k in range(n)])

        if method == "closed":
            # EES[a, b] = E_a(E_b S)
            EES = np.stack([richardson_diff(grad_at, x, F[a], 1e-3) for a in range(n)])
            hessS = EES - np.einsum("iab,i->ab", G, gradS)
            lapS = float(-np.trace(hessS))
        else:
            lapS = None
            hessS = None
    RicCov = (ERic - np.einsum("lki,lj->ijk", G, Ric) - np.einsum("lkj,il->ijk", G, Ric))
    data.RicCov = RicCov
    data.gradS = gradS
    data.lapS = lapS
    data.hessS = hessS
    return data


def jacobi_residual(C: np.ndarray) -> float:
    """Jacobi identity for constant structure constants."""
    # [[X_t, X_u], X_v] + cyclic
    J = (np.einsum("xtu,wxv->wtuv", C, C) + np.einsum("xuv,wxt->wtuv", C, C)
         + np.einsum("xvt,wxu->wtuv", C, C))
    return float(np.max(np.abs(J)))


def gram_residual(model: FrameModel, x) -> float:
    """Frame orthonormality against the metric g = Theta^T Theta."""
    th = model.theta(x)
    F = model.frame(x)
    g = th.T @ th
    return float(np.max(np.abs(F @ g @ F.T - np.eye(model.dim))))


# ---------------------------------------------------------------- constructions

def _symbols(prefix, n):
    return sp.symbols(f"{prefix}0:{n}", real=True)


def _rational(a: np.ndarray) -> np.ndarray:
    return np.vectorize(lambda v: sp.nsimplify(float(v), rational=True), otypes=[object])(a)


def lie_coframe(C: np.ndarray, coords, scale=None) -> sp.Matrix:
    """Left-invariant coframe in coordinates of the second kind.

    g = exp(x_1 X_1) ... exp(x_n X_n); column a of the coframe holds the
    coefficients of g^{-1} d_a g.  ``scale`` S gives frame E_u = sum_v S[u,v] X_v.
    """
    n = len(coords)
    Cs = sp.Array(_rational(np.asarray(C)).tolist())
    cols = []
    for a in range(n):
        vec = sp.zeros(n, 1)
        vec[a] = 1
        for b in range(a + 1, n):
            ad = sp.Matrix(n, n, lambda w, v: Cs[w, b, v])
            vec = sp.simplify((-coords[b] * ad).exp()) * vec
        cols.append(vec)
    theta_X = sp.Matrix.hstack(*cols)
    if scale is None:
        return theta_X
    S = sp.Matrix(_rational(np.asarray(scale)).tolist())
    return (S.T).inv() * theta_X


def scale_structure_constants(C: np.ndarray, s) -> np.ndarray:
    """Structure constants of the frame E'_u = s_u E_u."""
    s = np.asarray(s, float)
    return C * s[None, :, None] * s[None, None, :] / s[:, None, None]


def lie_model(name, C, params=None, flags=None, scale=None, box=0.6) -> FrameModel:
    C = np.asarray(C, float)
    n = C.shape[0]
    if jacobi_residual(C) > 1e-12:
        raise GeometryError(f"structure constants of {name} violate the Jacobi identity")
    X = _symbols("x", n)
    s = np.ones(n) if scale is None else np.asarray(scale, float)
    theta = lie_coframe(C, X, np.diag(s))
    Cf = scale_structure_constants(C, s)
    return FrameModel(name, X, theta, params=params, structure_constants=Cf,
                      domain=(-box * np.ones(n), box * np.ones(n)), flags=flags,
                      lie=(C, np.diag(s)))


SU2 = _brackets(3, {(0, 1): [0, 0, 2], (1, 2): [2, 0, 0], (2, 0): [0, 2, 0]})
SL2 = _brackets(3, {(0, 1): [0, 0, 2], (1, 2): [-2, 0, 0], (2, 0): [0, -2, 0]})
HEIS = _brackets(3, {(0, 1): [0, 0, 2]})
SOL = _brackets(3, {(2, 0): [-1, 0, 0], (2, 1): [0, 1, 0]})
HYP3 = _brackets(3, {(2, 0): [1, 0, 0], (2, 1): [0, 1, 0]})

SASAKI_PHI_3 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])  # phi(E1)=E2, phi(E2)=-E1


def _sasakian_flags(**extra):
    out = {"sasakian": {"xi": 2, "phi": SASAKI_PHI_3.tolist()}, "constant_S": True}
    out.update(extra)
    return out


def e2_constants(l1: float, l2: float) -> np.ndarray:
    """Unimodular E(2) algebra: [E2,E3] = l1 E1, [E3,E1] = l2 E2, [E1,E2] = 0."""
    return _brackets(3, {(1, 2): [l1, 0, 0], (2, 0): [0, l2, 0]})


def euclidean(n: int = 3, name="euclidean3") -> FrameModel:
    X = _symbols("x", n)
    return FrameModel(name, X, sp.eye(n), params={"n": n},
                      structure_constants=np.zeros((n, n, n)),
                      domain=(-np.ones(n), np.ones(n)),
                      flags={"constant_S": True, "flat": True, "conformally_flat": True,
                             "ricci_parallel": True, "einstein": True})


def sphere_chart(k: int, radius: float = 1.0, prefix="s") -> FrameModel:
    """Round k-sphere in stereographic coordinates, g = 4 radius^2 |dx|^2 / (1 + |x|^2)^2."""
    if k < 2 or radius <= 0:
        raise GeometryError("sphere chart needs k >= 2 and positive radius")
    X = _symbols(prefix, k)
    r2 = sum(c**2 for c in X)
    R = sp.nsimplify(radius)
    theta = sp.eye(k) * (2 * R / (1 + r2))
    S = k * (k - 1) / radius**2
    return FrameModel(f"round_sphere_chart({k},{radius:g})", X, theta,
                      params={"k": k, "radius": radius},
                      domain=(-0.9 * np.ones(k), 0.9 * np.ones(k)),
                      flags={"constant_S": True, "einstein": True, "conformally_flat": True,
                             "ricci_parallel": True, "compact": True, "S": S})


def hyperbolic_plane(prefix="h") -> FrameModel:
    x, y = sp.symbols(f"{prefix}0 {prefix}1", real=True)
    return FrameModel("h2", (x, y), sp.diag(1 / y, 1 / y), domain=([-1, 0.5], [1, 2]),
                      flags={"constant_S": True, "einstein": True})


def conformal_rescale(model: FrameModel, log_factor, name=None) -> FrameModel:
    """Metric exp(2 f) g for a sympy expression f in the model's coordinates.

    The new orthonormal frame is exp(-f) E_u, i.e. the coframe scales by exp(f).
    """
    f = sp.sympify(log_factor)
    if f == 0:
        return model
    theta = sp.exp(f) * model.coframe
    flags = {k: v for k, v in model.flags.items() if k in ("conformally_flat",)}
    return FrameModel(name or f"conformal({model.name})", model.coords, theta,
                      params=dict(model.params), domain=model.domain, flags=flags)


def product(A: FrameModel, B: FrameModel, name=None) -> FrameModel:
    coordsB = B.coords
    clash = set(A.coords) & set(coordsB)
    if clash:
        raise GeometryError(f"coordinate names clash: {clash}")
    theta = sp.diag(A.coframe, B.coframe)
    C = None
    if A.structure_constants is not None and B.structure_constants is not None:
        n = A.dim + B.dim
        C = np.zeros((n, n, n))
        C[:A.dim, :A.dim, :A.dim] = A.structure_constants
        C[A.dim:, A.dim:, A.dim:] = B.structure_constants
    dom = (np.concatenate([A.domain[0], B.domain[0]]), np.concatenate([A.domain[1], B.domain[1]]))
    flags = {"product": {"dims": [A.dim, B.dim], "factors": [A.name, B.name]}}
    return FrameModel(name or f"product({A.name},{B.name})", A.coords + coordsB, theta,
                      params={"A": A.name, "B": B.name}, structure_constants=C,
                      domain=dom, flags=flags)


def _base_sasakian(name):
    return {"deformed_sasakian_s3": SU2, "deformed_sasakian_sl2r": SL2}[name]


def catalog(name: str, **params) -> FrameModel:
    if name == "euclidean3":
        return euclidean(3)
    if name == "round_s3":
        return lie_model("round_s3", SU2, flags=_sasakian_flags(
            einstein=True, compact=True, conformally_flat=True, ricci_parallel=True))
    if name == "sl2r":
        return lie_model("sl2r", SL2, flags=_sasakian_flags(ricci_parallel=False))
    if name in ("deformed_sasakian_s3", "deformed_sasakian_sl2r"):
        a = float(params.get("a", 1.0))
        if not a > 0:
            raise GeometryError("deformation parameter a must be positive")
        return lie_model(name, _base_sasakian(name), params={"a": a},
                         scale=[a, a, a * a], flags=_sasakian_flags(
                             compact=name.endswith("s3")))
    if name == "nil":
        x, y, z = sp.symbols("x y z", real=True)
        theta = sp.Matrix([[1 / sp.sqrt(2), 0, 0], [0, 1 / sp.sqrt(2), 0], [0, -x, 1]])
        return FrameModel("nil", (x, y, z), theta, structure_constants=HEIS,
                          flags=_sasakian_flags(), domain=(-np.ones(3), np.ones(3)))
    if name == "sol":
        x, y, z = sp.symbols("x y z", real=True)
        theta = sp.diag(sp.exp(z), sp.exp(-z), 1)
        return FrameModel("sol", (x, y, z), theta, structure_constants=SOL,
                          flags={"constant_S": True}, domain=(-np.ones(3), np.ones(3)))
    if name == "h3":
        x, y, z = sp.symbols("x y z", real=True)
        return FrameModel("h3", (x, y, z), sp.eye(3) / z, structure_constants=HYP3,
                          domain=([-1, -1, 0.5], [1, 1, 2]),
                          flags={"constant_S": True, "einstein": True, "conformally_flat": True,
                                 "ricci_parallel": True})
    if name == "s2xr1":
        m = product(sphere_chart(2, 1.0), euclidean_line("z"), name="s2xr1")
        m.flags.update({"constant_S": True, "parallel_one_form": 2, "conformally_flat": True,
                        "ricci_parallel": True})
        return m
    if name == "h2xr1":
        m = product(hyperbolic_plane(), euclidean_line("z"), name="h2xr1")
        m.flags.update({"constant_S": True, "parallel_one_form": 2, "conformally_flat": True,
                        "ricci_parallel": True})
        return m
    if name == "e2_geometry":
        l1 = float(params.get("l1", 2.0))
        l2 = float(params.get("l2", 1.0))
        return lie_model("e2_geometry", e2_constants(l1, l2), params={"l1": l1, "l2": l2},
                         flags={"constant_S": True})
    if name == "conformal_flat_r3":
        c = float(params.get("c", 1.0))
        if c == 0:
            raise GeometryError("conformal parameter c must be nonzero")
        base = euclidean(3)
        m = conformal_rescale(base, -sp.nsimplify(c) * base.coords[2], name="conformal_flat_r3")
        m.params = {"c": c}
        m.flags = {"conformally_flat": True}
        return m
    if name == "flat_torus":
        q = int(params.get("q", 2))
        return euclidean(q, name=f"flat_torus({q})")
    if name == "round_sphere_chart":
        return sphere_chart(int(params.get("k", 2)), float(params.get("radius", 1.0)))
    if name == "product":
        A = params["A"]
        B = params["B"]
        return product(A, B)
    raise GeometryError(f"unknown catalog model {name!r}")


def euclidean_line(sym="z") -> FrameModel:
    z = sp.Symbol(sym, real=True)
    return FrameModel("line", (z,), sp.eye(1), structure_constants=np.zeros((1, 1, 1)),
                      domain=([-1.0], [1.0]), flags={"flat": True})


CATALOG_3D = ("euclidean3", "round_s3", "nil", "sol", "sl2r", "h3", "s2xr1", "h2xr1",
              "e2_geometry", "deformed_sasakian_s3", "deformed_sasakian_sl2r", "conformal_flat_r3")
