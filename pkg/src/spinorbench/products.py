"""Spinors on products M^{2p} x N^r.

The spinor module of the product is the Kronecker product of the factor
modules.  Frame vectors of M act on the first slot; those of N act as
i^p mu_M (x) F, with mu_M the volume element of M.  Every identity is
checked against the direct computation on the product frame model, which
knows nothing about the tensor splitting.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import frame_geometry as fg
from . import spinor_catalog as cat
from .clifford import CliffordRep, build_rep, chirality_projectors, volume_element
from .spin_connection import EquationSpec, SpinGeometry, SpinorError, SpinorField, residual

ALGEBRA_TOL = 1e-13


@dataclass(frozen=True)
class ProductRep:
    M: CliffordRep
    N: CliffordRep

    def __post_init__(self):
        if self.M.n % 2:
            raise SpinorError("the first factor must be even-dimensional")

    @property
    def p(self) -> int:
        return self.M.n // 2

    @property
    def dim(self) -> int:
        return self.M.dim * self.N.dim

    @property
    def mu(self) -> np.ndarray:
        return volume_element(self.M)

    def e(self, j) -> np.ndarray:
        return np.kron(self.M.gens[j], self.N.identity)

    def f(self, l) -> np.ndarray:
        return (1j) ** self.p * np.kron(self.mu, self.N.gens[l])

    @property
    def rep(self) -> CliffordRep:
        gens = [self.e(j) for j in range(self.M.n)] + [self.f(l) for l in range(self.N.n)]
        gens = tuple(np.ascontiguousarray(g) for g in gens)
        return CliffordRep(self.M.n + self.N.n, self.N.chirality, gens)

    def half_spinors(self):
        """Projectors of the M-module onto mu_M = +i^p and mu_M = -i^p."""
        return chirality_projectors(self.M)


def product_action(prep: ProductRep, which: str, index: int, psi_M, psi_N) -> np.ndarray:
    """Clifford action of E_index (which='M') or F_index (which='N') on psi_M (x) psi_N."""
    psi_M = np.asarray(psi_M, complex)
    psi_N = np.asarray(psi_N, complex)
    if which == "M":
        return np.kron(prep.M.gens[index] @ psi_M, psi_N)
    if which == "N":
        return (1j) ** prep.p * np.kron(prep.mu @ psi_M, prep.N.gens[index] @ psi_N)
    raise ValueError("which must be 'M' or 'N'")


def algebra_identities(prep: ProductRep, seed=0) -> dict:
    """Residuals of the product Clifford identities on random factor spinors."""
    rng = np.random.default_rng(seed)

    def rand(d):
        return rng.normal(size=d) + 1j * rng.normal(size=d)

    pM, pN, qM, qN = rand(prep.M.dim), rand(prep.N.dim), rand(prep.M.dim), rand(prep.N.dim)
    x = np.kron(pM, pN)
    p = prep.p
    rep = prep.rep
    act, anti, ff, ef, sq = 0.0, 0.0, 0.0, 0.0, 0.0
    for j in range(prep.M.n):
        act = max(act, float(np.max(np.abs(rep.gens[j] @ x - product_action(prep, "M", j, pM, pN)))))
        for l in range(prep.N.n):
            E, F = prep.e(j), prep.f(l)
            anti = max(anti, float(np.max(np.abs(E @ F + F @ E))))
            rhs = (1j) ** p * np.kron(prep.M.gens[j] @ prep.mu @ pM, prep.N.gens[l] @ pN)
            ef = max(ef, float(np.max(np.abs(E @ F @ x - rhs))))
    for l in range(prep.N.n):
        act = max(act, float(np.max(np.abs(prep.f(l) @ x - product_action(prep, "N", l, pM, pN)))))
        for k in range(prep.N.n):
            lhs = prep.f(k) @ prep.f(l) @ x
            ff = max(ff, float(np.max(np.abs(lhs - np.kron(pM, prep.N.gens[k] @ prep.N.gens[l] @ pN)))))
    I = np.eye(prep.dim)
    for g in rep.gens:
        sq = max(sq, float(np.max(np.abs(g @ g + I))))
    cliff = 0.0
    for a in range(rep.n):
        for b in range(a + 1, rep.n):
            cliff = max(cliff, float(np.max(np.abs(rep.gens[a] @ rep.gens[b] + rep.gens[b] @ rep.gens[a]))))
    y = np.kron(qM, qN)
    herm = abs(np.vdot(x, y) - np.vdot(pM, qM) * np.vdot(pN, qN))
    hM, hN = np.vdot(qM, pM), np.vdot(qN, pN)          # <p, q> with the convention linear in p
    real = abs(np.real(np.vdot(y, x)) - (hM.real * hN.real - hM.imag * hN.imag))
    return {"action": act, "anticommute": anti, "ef_product": ef, "ff_product": ff,
            "squares": sq, "clifford": cliff, "hermitian_product": float(herm), "real_product": float(real)}


# ---------------------------------------------------------------- fields

def product_model(A: fg.FrameModel, B: fg.FrameModel, name=None) -> fg.FrameModel:
    return fg.product(A, B, name=name)


def product_spinor(model: fg.FrameModel, prep: ProductRep, psi_M: SpinorField, psi_N: SpinorField,
                   coef_plus=1.0, coef_minus=None, name=None) -> SpinorField:
    """c+ (psi_M^+ (x) psi_N) + c- (psi_M^- (x) psi_N); plain tensor product by default."""
    dM = prep.M.n
    Pp, Pm = prep.half_spinors()
    if coef_minus is None:
        L = np.eye(prep.M.dim)
        L = coef_plus * L
    else:
        L = coef_plus * Pp + coef_minus * Pm

    def ev(x):
        return np.kron(L @ psi_M(x[:dM]), psi_N(x[dM:]))

    derivs = None
    if psi_M.frame_derivs is not None and psi_N.frame_derivs is not None:
        def derivs(x):
            a, b = x[:dM], x[dM:]
            vM, vN = L @ psi_M(a), psi_N(b)
            dMv = psi_M.frame_derivs(a) @ L.T
            dNv = psi_N.frame_derivs(b)
            return np.concatenate([np.stack([np.kron(r, vN) for r in dMv]),
                                   np.stack([np.kron(vM, r) for r in dNv])])

    return SpinorField(name or f"{psi_M.name}(x){psi_N.name}", ev, prep.N.chirality, "generic", {}, derivs)


def product_dirac(geo_M: SpinGeometry, geo_N: SpinGeometry, prep: ProductRep,
                  psi_M: SpinorField, psi_N: SpinorField, x) -> np.ndarray:
    """D(psi_M (x) psi_N) = D_M psi_M (x) psi_N + i^p mu_M psi_M (x) D_N psi_N."""
    dM = prep.M.n
    a, b = np.asarray(x[:dM], float), np.asarray(x[dM:], float)
    return (np.kron(geo_M.dirac(psi_M, a), psi_N(b))
            + (1j) ** prep.p * np.kron(prep.mu @ psi_M(a), geo_N.dirac(psi_N, b)))


def product_dirac_squared(geo_M: SpinGeometry, geo_N: SpinGeometry, prep: ProductRep,
                          psi_M: SpinorField, psi_N: SpinorField, x) -> np.ndarray:
    dM = prep.M.n
    a, b = np.asarray(x[:dM], float), np.asarray(x[dM:], float)
    return (np.kron(geo_M.dirac_squared(psi_M, a), psi_N(b))
            + np.kron(psi_M(a), geo_N.dirac_squared(psi_N, b)))


def product_cov(geo_M: SpinGeometry, geo_N: SpinGeometry, prep: ProductRep,
                psi_M: SpinorField, psi_N: SpinorField, x) -> np.ndarray:
    dM = prep.M.n
    a, b = np.asarray(x[:dM], float), np.asarray(x[dM:], float)
    cM, cN = geo_M.cov_all(psi_M, a), geo_N.cov_all(psi_N, b)
    vM, vN = psi_M(a), psi_N(b)
    return np.concatenate([np.stack([np.kron(r, vN) for r in cM]), np.stack([np.kron(vM, r) for r in cN])])


def splitting_residuals(geo_M, geo_N, prep: ProductRep, psi_M, psi_N, x, second=True) -> dict:
    """Tensor-split formulas against the direct computation on the product model."""
    model = fg.product(geo_M.model, geo_N.model)
    geo = SpinGeometry(model, prep.rep, geo_M.method)
    field = product_spinor(model, prep, psi_M, psi_N)
    x = np.asarray(x, float)
    scale = 1 + float(np.linalg.norm(field(x)))
    out = {
        "covariant": float(np.max(np.abs(geo.cov_all(field, x) - product_cov(geo_M, geo_N, prep, psi_M, psi_N, x)))) / scale,
        "dirac": float(np.max(np.abs(geo.dirac(field, x) - product_dirac(geo_M, geo_N, prep, psi_M, psi_N, x)))) / scale,
    }
    if second:
        out["dirac_squared"] = float(np.max(np.abs(
            geo.dirac_squared(field, x) - product_dirac_squared(geo_M, geo_N, prep, psi_M, psi_N, x)))) / scale
    return out


# ---------------------------------------------------------------- Einstein spinors from Killing pairs

@dataclass
class KillingPairSpec:
    lam_M: float
    lam_N: float
    p: int
    sign: int = -1

    def __post_init__(self):
        if self.lam_M == 0 or self.lam_N == 0:
            raise SpinorError("Killing pair needs nonzero Dirac eigenvalues on both factors")
        if self.sign not in (1, -1):
            raise SpinorError("sign must be +1 or -1")

    @property
    def lam(self) -> float:
        return self.sign * float(np.hypot(self.lam_M, self.lam_N))

    @property
    def plus_coefficient(self) -> float:
        return self.lam + self.lam_N * (-1) ** self.p


def hypothesis_predicate(prep: ProductRep, psi_M: SpinorField, samples, tol=1e-9) -> dict:
    """|psi^+| = |psi^-| and <X psi^+, psi^-> = <X psi^-, psi^+> = 0 at every sample."""
    Pp, Pm = prep.half_spinors()
    norm_gap = cross = 0.0
    for a in np.atleast_2d(samples):
        v = psi_M(a)
        vp, vm = Pp @ v, Pm @ v
        norm_gap = max(norm_gap, abs(np.vdot(vp, vp) - np.vdot(vm, vm)) / np.vdot(v, v).real)
        for g in prep.M.gens:
            cross = max(cross, abs(np.vdot(vm, g @ vp)), abs(np.vdot(vp, g @ vm)))
    return {"norm_gap": float(norm_gap), "cross": float(cross), "holds": bool(norm_gap < tol and cross < tol)}


def einstein_pair(spec: KillingPairSpec, geo_M: SpinGeometry, geo_N: SpinGeometry,
                  psi_M: SpinorField, psi_N: SpinorField, samples, tol=1e-5) -> dict:
    """phi = (lam + lam_N (-1)^p) psi_M^+ (x) psi_N + lam_M psi_M^- (x) psi_N and its identities."""
    prep = ProductRep(geo_M.rep, geo_N.rep)
    if prep.p != spec.p:
        raise SpinorError("pair half-dimension does not match the first factor")
    model = fg.product(geo_M.model, geo_N.model)
    geo = SpinGeometry(model, prep.rep, geo_M.method)
    c = spec.plus_coefficient
    lam, lam_M, lam_N, p = spec.lam, spec.lam_M, spec.lam_N, spec.p
    r = geo_N.model.dim
    dM = 2 * p
    phi = product_spinor(model, prep, psi_M, psi_N, coef_plus=c, coef_minus=lam_M, name="killing_pair")
    hyp = hypothesis_predicate(prep, psi_M, np.atleast_2d(samples)[:, :dM])
    Pp, Pm = prep.half_spinors()
    s = (-1) ** p
    eig = norm = norm_split = sym = mixed = diag_M = diag_N = diag_N_split = 0.0
    for x in np.atleast_2d(samples):
        v = phi(x)
        vM, vN = psi_M(x[:dM]), psi_N(x[dM:])
        nN = float(np.vdot(vN, vN).real)
        nMN = float(np.vdot(vM, vM).real) * nN
        npl, nmi = float(np.linalg.norm(Pp @ vM) ** 2), float(np.linalg.norm(Pm @ vM) ** 2)
        # forms valid without the half-spinor balance
        split = (c * c * npl + lam_M**2 * nmi) * nN
        splitN = lam_N * s / r * (c * c * npl - lam_M**2 * nmi) * nN
        norm_split = max(norm_split, abs(np.vdot(v, v).real - split) / (1 + abs(split)))
        cov = geo.cov_all(phi, x)
        scale = 1 + np.linalg.norm(v) * abs(lam)
        eig = max(eig, float(np.linalg.norm(geo.dirac(phi, x) - lam * v)) / scale)
        norm = max(norm, abs(np.vdot(v, v).real - lam * c * nMN) / (1 + abs(lam * c * nMN)))
        g = prep.rep.gens
        for i in range(dM):
            for j in range(dM):
                if i != j:
                    sym = max(sym, float(np.linalg.norm(g[i] @ cov[j] + g[j] @ cov[i])) / scale)
        for k in range(dM, dM + r):
            for l in range(dM, dM + r):
                if k != l:
                    sym = max(sym, float(np.linalg.norm(g[k] @ cov[l] + g[l] @ cov[k])) / scale)
        for i in range(dM):
            for k in range(dM, dM + r):
                mixed = max(mixed, abs(np.vdot(v, g[i] @ cov[k] + g[k] @ cov[i])) / scale**2)
        tM = lam_M**2 / (2 * p) * c * nMN
        tN = lam_N**2 / r * c * nMN
        for i in range(dM):
            diag_M = max(diag_M, abs(np.vdot(v, g[i] @ cov[i]).real - tM) / (1 + abs(tM)))
        for k in range(dM, dM + r):
            val = np.vdot(v, g[k] @ cov[k]).real
            diag_N = max(diag_N, abs(val - tN) / (1 + abs(tN)))
            diag_N_split = max(diag_N_split, abs(val - splitN) / (1 + abs(splitN)))
    checks = {"eigen": eig, "symmetric_derivative": sym, "diagonal_M": diag_M,
              "norm_split": norm_split, "diagonal_N_split": diag_N_split}
    verdicts = {k: ("pass" if v < tol else "fail") for k, v in checks.items()}
    for key, val in (("norm", norm), ("mixed", mixed), ("diagonal_N", diag_N)):
        if hyp["holds"]:
            checks[key] = val
            verdicts[key] = "pass" if val < tol else "fail"
        else:
            verdicts[key] = "not-applicable"
    return {"lam": lam, "hypotheses": hyp, "residuals": checks, "verdicts": verdicts,
            "field": phi, "model": model, "geometry": geo}


# ---------------------------------------------------------------- scalar curvature ratio

def scalar_ratio(r: int) -> float:
    """S_N / S_M for which the six-dimensional Killing pair becomes an Einstein spinor."""
    if int(r) != r or r < 2:
        raise ValueError("r must be an integer >= 2")
    q = 3 * r * r - 19 * r + 6
    return (q + np.sqrt(q * q + 180 * r * r * (r - 1))) / (30 * r)


def product_einstein_algebra(S_M: float, S_N: float, r: int, lam_M: float, lam_N: float,
                             norms=None, sign=-1, tol=1e-9) -> dict:
    """Diagonal Einstein conditions for the Killing pair on M^6 x N^r.

    Both conditions fix the normalisation (psi_M, psi_M)(psi_N, psi_N); they
    agree exactly when S_N / S_M equals :func:`scalar_ratio`.
    """
    kill_M = abs(lam_M**2 - 0.3 * S_M)
    kill_N = abs(lam_N**2 - r * S_N / (4 * (r - 1)))
    if kill_M > tol * (1 + abs(S_M)) or kill_N > tol * (1 + abs(S_N)):
        raise SpinorError(f"Killing relations violated ({kill_M:.3e}, {kill_N:.3e})")
    lam = sign * float(np.hypot(lam_M, lam_N))
    c = lam - lam_N                          # lam + lam_N (-1)^p with p = 3
    S = S_M + S_N
    K1 = (S_M / 3 - S) * 6 / lam_M**2
    K2 = (2 * S_N / r - S) * r / lam_N**2
    out = {
        "lam": lam,
        "normalisation_M": K1 / c,
        "normalisation_N": K2 / c,
        "consistency": abs(K1 - K2) / (1 + abs(K1) + abs(K2)),
        "ratio_residual": abs(S_N / S_M - scalar_ratio(r)),
        "ricci_M": S_M / 6,
        "ricci_N": S_N / r,
        "einstein": bool(abs(S_M / 6 - S_N / r) < tol * (1 + abs(S_M))),
    }
    if norms is not None:
        nMN = float(norms[0] * norms[1])
        out["star_M"] = abs(2 * S_M / 6 - S - lam_M**2 / 6 * c * nMN)
        out["star_N"] = abs(2 * S_N / r - S - lam_N**2 / r * c * nMN)
    return out


def balanced_spinor(M: CliffordRep, seed: int = 0) -> np.ndarray:
    """psi0 = psi+ + psi- with |psi+| = |psi-| and <X psi+, psi-> = 0 for every X.

    In dimension six psi+ is pure, so the vectors X psi+ span a hyperplane of
    Sigma-; psi- is its unit normal rescaled to |psi+|.  For the first factor
    of dimension 2 no such spinor exists.
    """
    if M.n != 6:
        raise SpinorError("balanced half-spinors are built in dimension six")
    Pp, Pm = chirality_projectors(M)
    vp = Pp @ cat.unit_spinor(M.dim, seed)
    vp = vp / np.linalg.norm(vp)
    U, s, _ = np.linalg.svd(Pm)
    minus = U[:, s > 0.5]
    images = minus.conj().T @ np.array([g @ vp for g in M.gens]).T
    _, sv, vh = np.linalg.svd(images.conj().T)
    if sv[-1] > 1e-10:
        raise SpinorError("Clifford images of psi+ fill the negative half-spinors")
    vm = minus @ vh[-1].conj()
    return vp + vm / np.linalg.norm(vm)


def six_sphere_pair(r: int, S_N: float, signs=(1, 1), seed=0):
    """Killing spinors on S^6(1) and S^r with scalar curvature S_N, plus their geometries."""
    radius = float(np.sqrt(r * (r - 1) / S_N))
    A = fg.sphere_chart(6, 1.0, prefix="s")
    B = fg.sphere_chart(r, radius, prefix="t")
    rM, rN = build_rep(6), build_rep(r, 1)
    psi_M = cat.sphere_killing_spinor(A, rM, signs[0], balanced_spinor(rM, seed))
    psi_N = cat.sphere_killing_spinor(B, rN, signs[1], cat.unit_spinor(rN.dim, seed + 1))
    lam_M = -6 * signs[0] / 2
    lam_N = -r * signs[1] / (2 * radius)
    return SpinGeometry(A, rM), SpinGeometry(B, rN), psi_M, psi_N, lam_M, lam_N


def product_einstein_spinor(r: int, S_N: float | None = None, signs=(1, 1), sign=-1, points=3,
                            seed=0, tol=1e-6) -> dict:
    """Normalised Killing pair on S^6 x S^r checked against the Einstein-Dirac equation.

    S^6 with its round metric is nearly Kaehler.  The pair spinor is rescaled
    by the normalisation of :func:`product_einstein_algebra`; the Einstein sign
    is the sign of that normalisation.  Without ``S_N`` the scalar curvature
    of the second factor is 30 * scalar_ratio(r).
    """
    S_M = 30.0
    S_N = float(S_M * scalar_ratio(r) if S_N is None else S_N)
    gM, gN, psi_M, psi_N, lam_M, lam_N = six_sphere_pair(r, S_N, signs, seed)
    alg = product_einstein_algebra(S_M, S_N, r, lam_M, lam_N, sign=sign)
    spec = KillingPairSpec(lam_M, lam_N, 3, sign)
    prep = ProductRep(gM.rep, gN.rep)
    model = fg.product(gM.model, gN.model)
    phi = product_spinor(model, prep, psi_M, psi_N, coef_plus=spec.plus_coefficient, coef_minus=lam_M)
    pts = model.sample(points, seed=seed, margin=0.25)
    x = pts[0]
    nMN = float(np.vdot(psi_M(x[:6]), psi_M(x[:6])).real * np.vdot(psi_N(x[6:]), psi_N(x[6:])).real)
    K = alg["normalisation_M"]
    scale = float(np.sqrt(abs(K) / nMN))
    eps = 1 if K > 0 else -1

    def ev(y):
        return scale * phi(y)

    derivs = None if phi.frame_derivs is None else (lambda y: scale * phi.frame_derivs(y))
    field = SpinorField("einstein_pair", ev, phi.chirality, "einstein_dirac",
                        {"lam": spec.lam, "eps": eps}, derivs)
    res = residual(model, prep.rep, field, EquationSpec.einstein_dirac(spec.lam, eps), pts)
    comp = res.extra["components"]
    hyp = hypothesis_predicate(prep, psi_M, pts[:, :6])
    return {"S_M": S_M, "S_N": S_N, "lam": spec.lam, "eps": eps, "normalisation": float(K),
            "consistency": float(alg["consistency"]), "ratio_residual": float(alg["ratio_residual"]),
            "dirac": float(comp["dirac"]), "einstein": float(comp["einstein"]), "hypotheses": hyp,
            "passed": bool(comp["einstein"] < tol and comp["dirac"] < tol), "field": field, "model": model}


def killing_eigenvalues(S: float, n: int) -> float:
    """|Dirac eigenvalue| of a real Killing spinor on an Einstein n-manifold of scalar curvature S."""
    return float(np.sqrt(n * S / (4 * (n - 1))))


# ---------------------------------------------------------------- product catalog

def _s3(prefix):
    return fg.sphere_chart(3, 1.0, prefix=prefix)


PRODUCT_CATALOG = {
    "s2xs3": lambda: fg.product(fg.sphere_chart(2, 1.0, prefix="s"), _s3("t"), name="product:s2xs3"),
    "s2xs2": lambda: fg.product(fg.sphere_chart(2, 1.0, prefix="s"), fg.sphere_chart(2, 1.0, prefix="t"),
                                name="product:s2xs2"),
    "s3xt2": lambda: fg.product(_s3("s"), fg.euclidean(2, name="flat_torus(2)"), name="product:s3xt2"),
}


def product_catalog(name: str) -> fg.FrameModel:
    """Products of round spheres and flat tori; accepts 's2xs3' or 'product:s2xs3'."""
    key = name.split(":", 1)[1] if name.startswith("product:") else name
    if key not in PRODUCT_CATALOG:
        raise fg.GeometryError(f"unknown product model {name!r}")
    return PRODUCT_CATALOG[key]()
