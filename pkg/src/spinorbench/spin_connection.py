"""Spinor fields, the spin connection, the Dirac operator and residual checks.

Spinor covariant derivatives use the local formula

    nabla_{E_k} psi = E_k(psi) - 1/2 sum_{i<j} Gamma[i,k,j] e_i e_j psi

with Gamma from :mod:`frame_geometry`.  Frame derivatives E_k(psi) come from
the field's closed form when available, else from central differences.
Second-order operators difference the first-order ones once more with the
larger step ``SECOND_STEP``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import frame_geometry as fg
from .clifford import CliffordRep, herm, real_inner

SECOND_STEP = 1e-4
LEVI_CIVITA_3 = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA_3[_i, _j, _k] = 1.0
    LEVI_CIVITA_3[_i, _k, _j] = -1.0
FIRST_TOL = 1e-6
SECOND_TOL = 1e-4


class SpinorError(ValueError):
    pass


# ---------------------------------------------------------------- data types

@dataclass
class SpinorField:
    """Closed-form spinor field on a chart.

    ``frame_derivs(x)`` optionally returns the array of E_k(psi), shape (n, dim).
    """

    name: str
    evaluate: Callable
    chirality: int
    kind: str = "generic"
    params: dict = field(default_factory=dict)
    frame_derivs: Callable | None = None
    nowhere_vanishing: bool = True

    def __call__(self, x):
        return np.asarray(self.evaluate(np.asarray(x, float)), dtype=complex)


EQUATION_KINDS = ("eigenspinor", "killing", "quasi_killing", "wk", "einstein_dirac")


@dataclass(frozen=True)
class EquationSpec:
    kind: str
    params: dict

    def __post_init__(self):
        if self.kind not in EQUATION_KINDS:
            raise SpinorError(f"unknown equation kind {self.kind!r}")
        need = {"eigenspinor": ("lam",), "killing": ("b",), "quasi_killing": ("a", "b"),
                "wk": ("lam",), "einstein_dirac": ("lam", "eps")}[self.kind]
        for key in need:
            if key not in self.params:
                raise SpinorError(f"{self.kind} needs parameter {key!r}")
        if self.kind == "einstein_dirac" and self.params["eps"] not in (1, -1):
            raise SpinorError("Einstein spinor sign must be +1 or -1")
        if self.kind == "wk" and self.params["lam"] == 0:
            raise SpinorError("WK-number must be real and nonzero")

    @classmethod
    def eigenspinor(cls, lam):
        return cls("eigenspinor", {"lam": float(lam)})

    @classmethod
    def killing(cls, b):
        return cls("killing", {"b": float(b)})

    @classmethod
    def quasi_killing(cls, a, b, xi=None):
        return cls("quasi_killing", {"a": float(a), "b": float(b), "xi": xi})

    @classmethod
    def wk(cls, lam):
        return cls("wk", {"lam": float(lam)})

    @classmethod
    def einstein_dirac(cls, lam, eps):
        return cls("einstein_dirac", {"lam": float(lam), "eps": int(eps)})


@dataclass
class ResidualReport:
    kind: str
    residuals: np.ndarray
    sample_id: str
    step: float
    tol: float
    extra: dict = field(default_factory=dict)

    @property
    def max(self) -> float:
        return float(np.max(self.residuals)) if len(self.residuals) else 0.0

    @property
    def passed(self) -> bool:
        return self.max < self.tol

    def to_dict(self) -> dict:
        return {"kind": self.kind, "max": self.max, "tol": self.tol, "step": self.step,
                "sample_id": self.sample_id, "points": int(len(self.residuals)),
                "passed": self.passed, **self.extra}


# ---------------------------------------------------------------- algebra helpers

def spin_matrices(rep: CliffordRep, Gamma: np.ndarray) -> np.ndarray:
    """A[k] with nabla_k psi = E_k(psi) + A[k] psi."""
    n = rep.n
    A = np.zeros((n, rep.dim, rep.dim), dtype=complex)
    for k in range(n):
        for i in range(n):
            for j in range(i + 1, n):
                if Gamma[i, k, j] != 0:
                    A[k] -= 0.5 * Gamma[i, k, j] * rep.gens[i] @ rep.gens[j]
    return A


def endo_matrix(rep: CliffordRep, B: np.ndarray, k: int) -> np.ndarray:
    """Clifford matrix of the vector B(E_k) = sum_j B[k, j] E_j."""
    return rep.vec(np.asarray(B)[k])


def two_form_action(rep: CliffordRep, F: np.ndarray) -> np.ndarray:
    """Matrix of sum_{i<j} F[i,j] e_i e_j."""
    n = rep.n
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            out += F[i, j] * rep.gens[i] @ rep.gens[j]
    return out


# ---------------------------------------------------------------- the operator context

class SpinGeometry:
    """Spin connection on a frame model with a fixed Clifford representation."""

    def __init__(self, model: fg.FrameModel, rep: CliffordRep, method: str = "closed",
                 h: float = fg.FD_STEP, h2: float = SECOND_STEP):
        if rep.n != model.dim:
            raise SpinorError(f"representation of dimension {rep.n} on a {model.dim}-manifold")
        self.model = model
        self.rep = rep
        self.method = method
        self.h = h
        self.h2 = h2
        self._gens = np.asarray(rep.gens)

    # -- connection
    def gamma(self, x) -> np.ndarray:
        return fg.christoffel(self.model, x, self.method, self.h).Gamma

    def spin_A(self, x) -> np.ndarray:
        return spin_matrices(self.rep, self.gamma(x))

    def check_margin(self, x, step):
        x = np.asarray(x, float)
        reach = 2.0 * step * np.max(np.abs(self.model.frame(x)))
        if not self.model.in_domain(x, margin=reach):
            raise SpinorError(f"difference step at {x} leaves the chart of {self.model.name}")

    # -- first order
    def frame_derivs(self, psi: SpinorField, x) -> np.ndarray:
        x = np.asarray(x, float)
        if psi.frame_derivs is not None:
            return np.asarray(psi.frame_derivs(x), dtype=complex)
        F = self.model.frame(x)
        return np.stack([fg.richardson_diff(psi, x, F[k], self.h) for k in range(self.model.dim)])

    def cov_all(self, psi: SpinorField, x) -> np.ndarray:
        """Rows nabla_{E_k} psi at x."""
        d = self.frame_derivs(psi, x)
        A = self.spin_A(x)
        return d + np.einsum("kab,b->ka", A, psi(x))

    def cov(self, psi, x, k):
        return self.cov_all(psi, x)[k]

    def dirac(self, psi, x) -> np.ndarray:
        return np.einsum("kab,kb->a", self._gens, self.cov_all(psi, x))

    # -- generic helpers on spinor-valued functions
    def _field_frame_diff(self, f, x):
        """E_k(f) for a spinor-valued function f, using the outer step."""
        x = np.asarray(x, float)
        self.check_margin(x, self.h2)
        F = self.model.frame(x)
        return np.stack([fg.richardson_diff(f, x, F[k], self.h2) for k in range(self.model.dim)])

    def cov_of(self, f, x) -> np.ndarray:
        """Covariant derivative rows of a spinor-valued function f."""
        return self._field_frame_diff(f, x) + np.einsum("kab,b->ka", self.spin_A(x), f(x))

    def dirac_of(self, f, x):
        return np.einsum("kab,kb->a", self._gens, self.cov_of(f, x))

    # -- second order
    def second_cov(self, psi, x) -> np.ndarray:
        """N[u, v] = nabla_{E_u}(nabla_{E_v} psi), the field nabla_{E_v} psi differentiated."""
        x = np.asarray(x, float)
        dcov = self._field_frame_diff(lambda y: self.cov_all(psi, y), x)   # dcov[u, v, :]
        A = self.spin_A(x)
        return dcov + np.einsum("uab,vb->uva", A, self.cov_all(psi, x))

    def dirac_squared(self, psi, x):
        return self.dirac_of(lambda y: self.dirac(psi, y), x)

    def laplacian(self, psi, x):
        """Delta psi = -sum nabla_u nabla_u psi + sum nabla_{nabla_u E_u} psi."""
        N = self.second_cov(psi, x)
        G = self.gamma(x)
        cov = self.cov_all(psi, x)
        return -np.einsum("uua->a", N) + np.einsum("iuu,ia->a", G, cov)

    def curvature_action(self, psi, x) -> np.ndarray:
        """K[u, v] = R(E_u, E_v) psi from second covariant derivatives."""
        N = self.second_cov(psi, x)
        C = fg.christoffel(self.model, x, self.method, self.h).C
        cov = self.cov_all(psi, x)
        return N - np.transpose(N, (1, 0, 2)) - np.einsum("wuv,wa->uva", C, cov)

    def half_ricci_terms(self, psi, x, k, curv: fg.CurvatureData | None = None):
        """(1/2 Ric(E_k) psi, D(nabla_k psi) - nabla_k(D psi) - sum_u E_u nabla_{nabla_u E_k} psi)."""
        x = np.asarray(x, float)
        curv = curv or fg.curvature(self.model, x, self.method, derivatives=False)
        G = self.gamma(x)
        lhs = 0.5 * self.rep.vec(curv.Ric[k]) @ psi(x)
        D_cov = self.dirac_of(lambda y: self.cov_all(psi, y)[k], x)
        cov_D = self.cov_of(lambda y: self.dirac(psi, y), x)[k]
        cov = self.cov_all(psi, x)
        corr = np.einsum("uab,iu,ib->a", self._gens, G[:, :, k], cov)
        return lhs, D_cov - cov_D - corr

    # -- energy-momentum
    def energy_momentum(self, psi, x) -> np.ndarray:
        """T(E_a, E_b) = (E_a . nabla_b psi + E_b . nabla_a psi, psi)."""
        p = psi(x)
        cov = self.cov_all(psi, x)
        M = np.einsum("aij,bj->abi", self._gens, cov)
        T = np.real(np.einsum("abi,i->ab", M, p.conj()))
        return T + T.T

    def divergence_direct(self, psi, x) -> np.ndarray:
        """(delta T)_j = sum_i T_{ij;i} from differentiated frame components."""
        x = np.asarray(x, float)
        self.check_margin(x, self.h2)
        F = self.model.frame(x)
        ET = np.stack([fg.richardson_diff(lambda y: self.energy_momentum(psi, y), x, F[k], self.h2)
                       for k in range(self.model.dim)], axis=-1)          # ET[i, j, k] = E_k T_ij
        T = self.energy_momentum(psi, x)
        G = self.gamma(x)
        cov = ET - np.einsum("lki,lj->ijk", G, T) - np.einsum("lkj,il->ijk", G, T)
        return np.einsum("iji->j", cov)

    def divergence_formula(self, psi, x) -> np.ndarray:
        """sum_j {(nabla_j D psi, psi) - (nabla_j psi, D psi) - (E_j D^2 psi, psi)} E^j."""
        p = psi(x)
        Dp = self.dirac(psi, x)
        cov_D = self.cov_of(lambda y: self.dirac(psi, y), x)
        D2 = self.dirac_squared(psi, x)
        cov = self.cov_all(psi, x)
        n = self.model.dim
        return np.array([real_inner(cov_D[j], p) - real_inner(cov[j], Dp)
                         - real_inner(self._gens[j] @ D2, p) for j in range(n)])

    # -- norms of |psi|^2
    def norm_sq_derivatives(self, psi, x):
        """(|psi|^2, d|psi|^2 frame components, positive Laplacian of |psi|^2)."""
        x = np.asarray(x, float)

        def f(y):
            return float(np.real(np.vdot(psi(y), psi(y))))

        def grad(y):
            Fy = self.model.frame(y)
            return np.array([fg.richardson_diff(f, y, Fy[k], self.h2) for k in range(self.model.dim)])

        self.check_margin(x, 2 * self.h2)
        F = self.model.frame(x)
        g = grad(x)
        EE = np.array([fg.richardson_diff(lambda y: grad(y)[k], x, F[k], self.h2)
                       for k in range(self.model.dim)])
        lap = float(-np.sum(EE) + np.einsum("iuu,i->", self.gamma(x), g))
        return f(x), g, lap


# ---------------------------------------------------------------- functional entry points

def spinor_cov_deriv(model, conn, rep, psi, x, k, method="closed"):
    geo = SpinGeometry(model, rep, method)
    if conn is None:
        return geo.cov(psi, x, k)
    d = geo.frame_derivs(psi, x)[k]
    return d + spin_matrices(rep, conn.Gamma)[k] @ psi(x)


def dirac(model, rep, psi, x, method="closed"):
    return SpinGeometry(model, rep, method).dirac(psi, x)


def dirac_squared(model, rep, psi, x, method="closed"):
    return SpinGeometry(model, rep, method).dirac_squared(psi, x)


def laplacian(model, rep, psi, x, method="closed"):
    return SpinGeometry(model, rep, method).laplacian(psi, x)


def lichnerowicz_residual(model, rep, psi, x, method="closed") -> float:
    """|4 D^2 psi - 4 Delta psi - S psi| relative to 1 + |D^2 psi| + |S psi|."""
    geo = SpinGeometry(model, rep, method)
    S = fg.curvature(model, x, method, derivatives=False).S
    D2 = geo.dirac_squared(psi, x)
    L = geo.laplacian(psi, x)
    p = psi(x)
    res = 4 * D2 - 4 * L - S * p
    return float(np.linalg.norm(res) / (1 + np.linalg.norm(4 * D2) + abs(S) * np.linalg.norm(p)))


def half_ricci_check(model, rep, psi, k, x, method="closed") -> np.ndarray:
    lhs, rhs = SpinGeometry(model, rep, method).half_ricci_terms(psi, x, k)
    return lhs - rhs


def energy_momentum(model, rep, psi, x, method="closed") -> np.ndarray:
    return SpinGeometry(model, rep, method).energy_momentum(psi, x)


def curvature_action_residual(model, rep, psi, x, method="closed") -> float:
    """Max |R(E_u,E_v) psi + 1/2 sum_{i<j} R_{ijuv} e_i e_j psi| over u < v."""
    geo = SpinGeometry(model, rep, method)
    K = geo.curvature_action(psi, x)
    R = fg.curvature(model, x, method, derivatives=False).R
    p = psi(x)
    n = model.dim
    worst = 0.0
    for u in range(n):
        for v in range(u + 1, n):
            expect = -0.5 * two_form_action(rep, R[:, :, u, v]) @ p
            worst = max(worst, float(np.linalg.norm(K[u, v] - expect)))
    return worst / (1 + float(np.linalg.norm(p)))


def scalar_action_residual(rep, curv: fg.CurvatureData, p) -> float:
    """|S psi + sum_u E_u Ric(E_u) psi|."""
    total = sum(rep.gens[u] @ rep.vec(curv.Ric[u]) for u in range(rep.n))
    return float(np.linalg.norm(curv.S * p + total @ p))


# ---------------------------------------------------------------- equations

def equation_rhs(spec: EquationSpec, rep: CliffordRep, curv: fg.CurvatureData, p) -> np.ndarray | None:
    """Rows of the prescribed nabla_{E_k} psi, or None for purely Dirac-type kinds."""
    n = rep.n
    g = np.asarray(rep.gens)
    if spec.kind == "killing":
        return spec.params["b"] * np.einsum("kab,b->ka", g, p)
    if spec.kind == "quasi_killing":
        a, b = spec.params["a"], spec.params["b"]
        xi = n - 1 if spec.params.get("xi") is None else spec.params["xi"]
        out = a * np.einsum("kab,b->ka", g, p)
        out[xi] += b * g[xi] @ p
        return out
    if spec.kind == "wk":
        lam, S = spec.params["lam"], curv.S
        if abs(S) < 1e-12:
            raise SpinorError("WK equation needs nonvanishing scalar curvature")
        dS = np.zeros(n) if curv.gradS is None else curv.gradS
        dS_psi = rep.vec(dS) @ p
        rows = []
        for k in range(n):
            row = (n * dS[k] / (2 * (n - 1) * S)) * p
            row = row + (2 * lam / ((n - 2) * S)) * rep.vec(curv.Ric[k]) @ p
            row = row - (lam / (n - 2)) * g[k] @ p
            row = row + g[k] @ dS_psi / (2 * (n - 1) * S)
            rows.append(row)
        return np.array(rows)
    return None


def _coef_scale(spec: EquationSpec, curv) -> float:
    P = spec.params
    if spec.kind == "killing":
        return abs(P["b"])
    if spec.kind == "quasi_killing":
        return abs(P["a"]) + abs(P["b"])
    if spec.kind == "wk":
        dS = 0.0 if curv.gradS is None else float(np.linalg.norm(curv.gradS))
        return abs(P["lam"]) * (1 + 2 * np.linalg.norm(curv.Ric) / abs(curv.S)) + dS / abs(curv.S)
    return abs(P["lam"])


def point_residual(geo: SpinGeometry, psi: SpinorField, spec: EquationSpec, x,
                   curv: fg.CurvatureData | None = None) -> dict:
    """Relative residuals of one equation at one point."""
    x = np.asarray(x, float)
    need_derivs = spec.kind == "wk"
    curv = curv or fg.curvature(geo.model, x, geo.method, derivatives=need_derivs)
    p = psi(x)
    norm_p = float(np.linalg.norm(p))
    if psi.nowhere_vanishing and norm_p < 1e-12:
        raise SpinorError(f"spinor vanishes at {x}")
    cov = geo.cov_all(psi, x)
    rhs = equation_rhs(spec, geo.rep, curv, p)
    scale = 1 + float(np.linalg.norm(cov)) + _coef_scale(spec, curv) * norm_p
    out = {}
    if rhs is not None:
        out["equation"] = float(np.linalg.norm(cov - rhs)) / scale
    if spec.kind in ("eigenspinor", "einstein_dirac"):
        Dp = np.einsum("kab,kb->a", np.asarray(geo.rep.gens), cov)
        out["dirac"] = float(np.linalg.norm(Dp - spec.params["lam"] * p)) / scale
    if spec.kind == "einstein_dirac":
        T = geo.energy_momentum(psi, x)
        E = curv.Ric - 0.5 * curv.S * np.eye(geo.model.dim) - spec.params["eps"] * 0.25 * T
        out["einstein"] = float(np.linalg.norm(E)) / (1 + np.linalg.norm(curv.Ric) + np.linalg.norm(T))
    return out


def residual(model, rep, psi: SpinorField, spec: EquationSpec, samples, method="closed",
             tol=FIRST_TOL, sample_id="") -> ResidualReport:
    geo = SpinGeometry(model, rep, method)
    per = []
    parts = {}
    for x in np.atleast_2d(samples):
        r = point_residual(geo, psi, spec, x)
        for key, val in r.items():
            parts[key] = max(parts.get(key, 0.0), val)
        per.append(max(r.values()))
    return ResidualReport(spec.kind, np.array(per), sample_id or f"{model.name}:{len(per)}",
                          geo.h, tol, extra={"components": parts, "params": dict(spec.params)})


# ---------------------------------------------------------------- pointwise decompositions

@dataclass
class Decomposition3D:
    omega: np.ndarray          # d|psi|^2 / (2 |psi|^2)
    gamma: np.ndarray          # gamma[k, u]: gamma(E_k) = sum_u gamma[k,u] E_u
    alpha: np.ndarray
    beta: np.ndarray
    tau: np.ndarray
    h: complex | None
    reconstruction: float
    star_relation: float


def decompose_3d(geo: SpinGeometry, psi: SpinorField, x, eigen_tol=1e-6) -> Decomposition3D:
    """Split nabla psi into omega(X) psi + gamma(X) psi, plus (alpha, beta, tau) for eigenspinors."""
    if geo.model.dim != 3:
        raise SpinorError("the pointwise decomposition is three-dimensional")
    x = np.asarray(x, float)
    p = psi(x)
    nsq = float(np.real(np.vdot(p, p)))
    if nsq < 1e-20:
        raise SpinorError(f"spinor vanishes at {x}")
    cov = geo.cov_all(psi, x)
    g = np.asarray(geo.rep.gens)
    omega = np.array([real_inner(cov[k], p) for k in range(3)]) / nsq
    gamma = np.array([[real_inner(cov[k], g[u] @ p) for u in range(3)] for k in range(3)]) / nsq
    rebuilt = omega[:, None] * p[None, :] + np.einsum("ku,uab,b->ka", gamma, g, p)
    recon = float(np.linalg.norm(rebuilt - cov) / (1 + np.linalg.norm(cov)))
    Dp = np.einsum("kab,kb->a", g, cov)
    h = herm(Dp, p) / nsq
    alpha = omega / 2
    beta = 0.5 * (gamma + gamma.T)
    tau = 0.5 * (gamma - gamma.T)
    # skew part is dual to alpha: tau[k,u] = chi * eps_{kuw} alpha_w, chi the representation sign
    star = np.einsum("kuw,w->ku", LEVI_CIVITA_3, alpha)
    star_res = float(np.max(np.abs(tau - geo.rep.chirality * star)))
    eig = float(np.linalg.norm(Dp - h * p)) < eigen_tol * (1 + np.linalg.norm(Dp))
    return Decomposition3D(omega, gamma, alpha, beta, tau, h if eig else None, recon, star_res)


def alpha_beta_decomposition(geo: SpinGeometry, psi: SpinorField, x):
    """alpha = d|psi|^2 / (2(n-1)|psi|^2), beta = -T / (2|psi|^2) and the ansatz residual.

    The residual is |nabla_X psi - n alpha(X) psi - beta(X) psi - X alpha psi| relative to |nabla psi|.
    """
    x = np.asarray(x, float)
    n = geo.model.dim
    p = psi(x)
    nsq = float(np.real(np.vdot(p, p)))
    cov = geo.cov_all(psi, x)
    g = np.asarray(geo.rep.gens)
    dn = np.array([2 * real_inner(cov[k], p) for k in range(n)])
    alpha = dn / (2 * (n - 1) * nsq)
    T = geo.energy_momentum(psi, x)
    beta = -T / (2 * nsq)
    a_psi = geo.rep.vec(alpha) @ p
    rebuilt = np.array([n * alpha[k] * p + geo.rep.vec(beta[k]) @ p + g[k] @ a_psi for k in range(n)])
    return alpha, beta, float(np.linalg.norm(rebuilt - cov) / (1 + np.linalg.norm(cov)))


def zero_divisor_probe(rep: CliffordRep, rng=None, trials=50) -> float:
    """Largest |f| + |X| among random (f, X) with f psi + X psi = 0 for some psi != 0.

    f + X acts invertibly unless f = X = 0, since (f + X)(f - X) = f^2 + |X|^2.
    Returns the max of (|f| + |X|) / sigma_min where sigma_min is the smallest singular
    value of f + X, which stays bounded exactly when no nonzero kernel exists.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for _ in range(trials):
        f = rng.normal()
        X = rng.normal(size=rep.n)
        M = f * rep.identity + rep.vec(X)
        smin = np.linalg.svd(M, compute_uv=False)[-1]
        expected = np.sqrt(f * f + X @ X)
        worst = max(worst, abs(smin - expected))
    return float(worst)
