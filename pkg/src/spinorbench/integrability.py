"""Integrability conditions and non-existence criteria for WK-spinors.

Everything here works from pointwise curvature data.  Two independent
routes decide which WK-numbers are admissible on a constant-S 3-manifold:

* the closed identities relating lambda to S, Ric and its derivatives
  (the scalar relation 8 lam^2 (S^2 - 2|Ric|^2) = S^3 plus the
  cross-product identities);
* the algebraic route: WK forces R(E_k,E_l) psi to equal a Clifford
  polynomial of degree two in lambda; in three dimensions that element is a
  real vector, so it must vanish (nonzero real vectors act invertibly).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import frame_geometry as fg
from .clifford import CliffordRep, build_rep, cross_3d, real_inner
from .spin_connection import SpinGeometry, SpinorError, SpinorField, two_form_action

GOLDEN_S = (1 + np.sqrt(5), 1 - np.sqrt(5))


def _rel(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.linalg.norm(a - b) / (1 + np.linalg.norm(a) + np.linalg.norm(b)))


def _grad(curv):
    return np.zeros(curv.n) if curv.gradS is None else np.asarray(curv.gradS)


def _ric_cov(curv):
    n = curv.n
    return np.zeros((n, n, n)) if curv.RicCov is None else curv.RicCov


# ---------------------------------------------------------------- the three WK identities

def wk_integrability_check(curv: fg.CurvatureData, rep: CliffordRep, p, lam: float) -> dict:
    """Relative residuals of the vector, scalar and contracted WK identities at one point."""
    n, S, Ric = curv.n, curv.S, curv.Ric
    if abs(S) < 1e-12:
        raise SpinorError("the WK identities need nonvanishing scalar curvature")
    if curv.lapS is None or curv.hessS is None:
        raise SpinorError("curvature data without second derivatives of S")
    dS, lapS, H = _grad(curv), curv.lapS, curv.hessS
    RC = _ric_cov(curv)
    g = np.asarray(rep.gens)
    V = rep.vec
    p = np.asarray(p, complex)
    Ric2 = Ric @ Ric
    dS_psi = V(dS) @ p

    def div_term(k):
        # sum_u E_u . (nabla_{E_u} Ric)(E_k) . psi
        return sum(g[u] @ V(RC[k, :, u]) @ p for u in range(n))

    worst = 0.0
    for k in range(n):
        ek = g[k] @ p
        lhs = 4 * (n - 1) ** 2 * lam**2 * ((n - 3) * S**2 * ek - 2 * (n - 4) * S * V(Ric[k]) @ p
                                          - 4 * V(Ric2[k]) @ p)
        lhs = lhs + 2 * (n - 1) * (n - 2) * lam * (
            (n - 2) * S * dS[k] * p - 2 * (n - 2) * (Ric[k] @ dS) * p - S * g[k] @ dS_psi
            + 2 * g[k] @ V(Ric @ dS) @ p - 2 * (n - 1) * V(dS) @ V(Ric[k]) @ p
            + 2 * (n - 1) * S * div_term(k))
        rhs = (n - 2) ** 2 * ((n - 1) ** 2 * S**2 * V(Ric[k]) @ p + (dS @ dS) * ek
                              + (n - 1) * S * lapS * ek + n * (n - 2) * dS[k] * dS_psi
                              - (n - 1) * (n - 2) * S * V(H[k]) @ p)
        worst = max(worst, _rel(lhs, rhs))

    nr = curv.ric_norm_sq
    lhs2 = 4 * (n - 1) * lam**2 * ((n * n - 5 * n + 8) * S**2 - 4 * nr)
    rhs2 = (n - 2) ** 2 * ((n - 1) * S**3 + n * (dS @ dS) + 2 * (n - 1) * S * lapS)

    pp = real_inner(p, p)
    mixed = sum(real_inner(g[u] @ V(RC[v, :, u]) @ p, V(Ric[v]) @ p) for u in range(n) for v in range(n))
    lhs3 = (4 * (n - 1) ** 2 * lam**2 * ((n - 3) * S**3 - 2 * (n - 4) * S * nr
                                          - 4 * np.trace(Ric2 @ Ric)) * pp
            + 4 * (n - 1) ** 2 * (n - 2) * lam * S * mixed)
    rhs3 = (n - 2) ** 2 * ((n - 1) ** 2 * S**2 * nr + S * (dS @ dS) + (n - 1) * S**2 * lapS
                           + n * (n - 2) * dS @ Ric @ dS
                           - (n - 1) * (n - 2) * S * np.sum(H * Ric)) * pp
    out = {"vector": worst, "scalar": _rel(lhs2, rhs2), "contracted": _rel(lhs3, rhs3)}
    if n == 3 and np.linalg.norm(dS) < 1e-9:
        out["three_dim"] = abs(three_dim_relation(curv, lam))
    return out


def three_dim_relation(curv: fg.CurvatureData, lam: float) -> float:
    """8 lam^2 (S^2 - 2|Ric|^2) - S^3."""
    S = curv.S
    return 8 * lam**2 * (S**2 - 2 * curv.ric_norm_sq) - S**3


def lambda_squared_from_scalar(curv: fg.CurvatureData) -> float | None:
    """lam^2 forced by the scalar identity, or None when its coefficient vanishes."""
    n, S = curv.n, curv.S
    dS = _grad(curv)
    coef = 4 * (n - 1) * ((n * n - 5 * n + 8) * S**2 - 4 * curv.ric_norm_sq)
    rhs = (n - 2) ** 2 * ((n - 1) * S**3 + n * (dS @ dS) + 2 * (n - 1) * S * (curv.lapS or 0.0))
    if abs(coef) < 1e-10 * (1 + abs(rhs)):
        return None
    return rhs / coef


def ricci_polynomial_residuals(curv: fg.CurvatureData) -> dict:
    """Residuals of the two polynomial Ricci identities forced on conformally flat or
    Ricci-parallel constant-S manifolds carrying a WK-spinor."""
    n, S, Ric = curv.n, curv.S, curv.Ric
    nr = curv.ric_norm_sq
    M = 4 * S * Ric @ Ric + (n * (n - 3) * S**2 - 4 * nr) * Ric - (n - 3) * S**3 * np.eye(n)
    scal = 4 * nr**2 - 4 * S * np.trace(Ric @ Ric @ Ric) - n * (n - 3) * S**2 * nr + (n - 3) * S**4
    scale = 1 + abs(S) ** 4 + nr**2
    return {"matrix": float(np.max(np.abs(M))) / scale, "scalar": abs(scal) / scale}


# ---------------------------------------------------------------- three-dimensional identities

def cross_product_identities(curv: fg.CurvatureData, lam: float) -> dict:
    """Residuals of the pairwise and contracted cross-product identities (3D, constant S).

    Cross products follow the orientation in which E1 E2 = -E3 acts on spinors.
    """
    if curv.n != 3:
        raise SpinorError("cross-product identities are three-dimensional")
    S, Ric = curv.S, curv.Ric
    RC = _ric_cov(curv)
    E = np.eye(3)
    pair = 0.0
    for k in range(3):
        for l in range(k + 1, 3):
            lhs = (8 * lam**2 * cross_3d(2 * Ric[k] - S * E[k], 2 * Ric[l] - S * E[l])
                   + 8 * lam * S * (RC[l, :, k] - RC[k, :, l]))
            rhs = -S**3 * cross_3d(E[k], E[l])
            for i in range(3):
                for j in range(i + 1, 3):
                    rhs = rhs + 2 * S**2 * (Ric[j, l] * (i == k) + Ric[i, k] * (j == l)) * cross_3d(E[i], E[j])
            pair = max(pair, _rel(lhs, rhs))
    contracted = 0.0
    R2 = Ric @ Ric
    for k in range(3):
        v = (8 * lam**2 * (S * Ric[k] - 2 * R2[k])
             - 4 * lam * S * sum(cross_3d(E[u], RC[k, :, u]) for u in range(3))
             - S**2 * Ric[k])
        contracted = max(contracted, float(np.linalg.norm(v)) / (1 + S**2 * np.linalg.norm(Ric)))
    return {"pairwise": pair, "contracted": contracted}


def integrability_coefficients(curv: fg.CurvatureData, rep: CliffordRep):
    """Matrices (M0, M1, M2)[k, l] with R(E_k,E_l) - [WK curvature terms] = M0 + lam M1 + lam^2 M2.

    Valid for constant S, where beta = lam B with B = (2/S) Ric - Id.
    """
    n, S = curv.n, curv.S
    if abs(S) < 1e-12:
        raise SpinorError("WK needs nonvanishing scalar curvature")
    RC = _ric_cov(curv)
    B = (2.0 / S) * curv.Ric - np.eye(n)
    V = rep.vec
    d = rep.dim
    M = np.zeros((3, n, n, d, d), dtype=complex)
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            M[0, k, l] = -0.5 * two_form_action(rep, curv.R[:, :, k, l])
            M[1, k, l] = -(2.0 / S) * (V(RC[l, :, k]) - V(RC[k, :, l]))
            M[2, k, l] = -(V(B[l]) @ V(B[k]) - V(B[k]) @ V(B[l]))
    return M


def admissible_wk_numbers(curv: fg.CurvatureData, rep: CliffordRep, tol=1e-8) -> list | str:
    """Real nonzero lam for which the algebraic integrability condition holds at this point.

    Returns the string "all" when every coefficient vanishes.
    """
    M = integrability_coefficients(curv, rep)
    rows = np.concatenate([np.stack([M[i].real.ravel(), M[i].imag.ravel()]).ravel()[:, None]
                           for i in range(3)], axis=1)           # rows: c0 + c1 lam + c2 lam^2
    scale = np.max(np.abs(rows)) if rows.size else 0.0
    if scale < tol:
        return "all"
    rows = rows / scale
    live = rows[np.max(np.abs(rows), axis=1) > tol]
    pivot = live[np.argmax(np.abs(live[:, 2]) + 1e-3 * np.abs(live[:, 1]))]
    c0, c1, c2 = pivot
    if abs(c2) > tol:
        cands = np.roots([c2, c1, c0])
    elif abs(c1) > tol:
        cands = np.array([-c0 / c1])
    else:
        return []
    out = []
    for lam in cands:
        if abs(lam.imag) > 1e-7 or abs(lam.real) < 1e-9:
            continue
        lr = lam.real
        res = np.max(np.abs(rows[:, 0] + lr * rows[:, 1] + lr * lr * rows[:, 2]))
        if res < 1e-7 * (1 + lr * lr):
            out.append(float(lr))
    return sorted(set(np.round(out, 12)))


def identity_route_wk_numbers(curv: fg.CurvatureData, tol=1e-8) -> list:
    """Candidates from the scalar relation, filtered by the cross-product identities."""
    lam2 = lambda_squared_from_scalar(curv)
    if lam2 is None or lam2 <= 0:
        return []
    out = []
    for lam in (np.sqrt(lam2), -np.sqrt(lam2)):
        r = cross_product_identities(curv, lam)
        if max(r.values()) < tol:
            out.append(float(lam))
    return sorted(out)


# ---------------------------------------------------------------- Sol

def sol_wk_nonexistence(lams=None, points=8, seed=0) -> dict:
    """The exp(lam z E3) psi0 reduction on Sol and a residual sweep over lam and psi0."""
    rep = build_rep(3, -1)
    e1, e2, e3 = rep.gens
    I = rep.identity
    model = fg.catalog("sol")
    geo = SpinGeometry(model, rep)
    # the E1 and E2 rows of the WK operator on the ansatz reduce to
    # -1/2 e1 (e3 - 2 lam) psi0 and 1/2 e2 (e3 + 2 lam) psi0, so E3 psi0 = +-2 lam psi0
    pair = (2.0, -2.0)
    reduction = 0.0
    for t in (0.3, 1.7):
        x0 = np.zeros(3)
        rows = _wk_rows(geo, t, x0, lambda psi0, l=t: _sol_field(l, psi0))
        pred = [-0.5 * e1 @ (e3 - 2 * t * I), 0.5 * e2 @ (e3 + 2 * t * I)]
        reduction = max(reduction, max(float(np.max(np.abs(rows[k] - pred[k]))) for k in range(2)))

    def stacked(lam):
        return np.vstack([e3 - 2 * lam * I, e3 + 2 * lam * I])

    pts = model.sample(points, seed=seed, margin=0.1)
    lams = np.linspace(0.05, 5.0, 100) if lams is None else np.asarray(lams)
    sweep = []
    for lam in lams:
        L = _linear_wk_operator(geo, lam, pts, lambda psi0, l=lam: _sol_field(l, psi0))
        sweep.append(float(np.linalg.svd(L, compute_uv=False)[-1]))
    return {
        "contradiction_pair": pair,
        "reduction_residual": reduction,
        "algebraic_min_singular": min(float(np.linalg.svd(stacked(l), compute_uv=False)[-1]) for l in lams),
        "sweep_lams": [float(l) for l in lams],
        "sweep_min_residual": min(sweep),
        "sweep": sweep,
        "nonexistence": bool(min(sweep) > 0.01),
    }


def _sol_field(lam, psi0):
    from .spinor_catalog import sol_ansatz
    return sol_ansatz(lam, psi0)


def _wk_rows(geo: SpinGeometry, lam, x, make_field):
    """Matrices W_k with (nabla_k psi - WK rhs)(x) = W_k psi0."""
    from .spin_connection import EquationSpec, equation_rhs
    spec = EquationSpec.wk(lam)
    curv = fg.curvature(geo.model, x, geo.method)
    d = geo.rep.dim
    W = np.zeros((geo.model.dim, d, d), complex)
    for j in range(d):
        psi0 = np.zeros(d, complex)
        psi0[j] = 1.0
        psi = make_field(psi0)
        W[:, :, j] = geo.cov_all(psi, x) - equation_rhs(spec, geo.rep, curv, psi(x))
    return W


def _linear_wk_operator(geo: SpinGeometry, lam, pts, make_field):
    """Stacked relative WK residual as a complex-linear map of psi0 (columns = basis images)."""
    from .spin_connection import EquationSpec, equation_rhs
    spec = EquationSpec.wk(lam)
    cols = []
    for j in range(geo.rep.dim):
        psi0 = np.zeros(geo.rep.dim, complex)
        psi0[j] = 1.0
        psi = make_field(psi0)
        blocks = []
        for x in pts:
            curv = fg.curvature(geo.model, x, geo.method)
            cov = geo.cov_all(psi, x)
            rhs = equation_rhs(spec, geo.rep, curv, psi(x))
            blocks.append(((cov - rhs) / (1 + abs(lam))).ravel())
        cols.append(np.concatenate(blocks))
    return np.stack(cols, axis=1) / np.sqrt(len(pts))


# ---------------------------------------------------------------- eigenvalue bounds

def eigenvalue_bound(geo: SpinGeometry, psi: SpinorField, x, lam: float) -> dict:
    """Pointwise bound for a nowhere-vanishing eigenspinor: lam^2 >= S/4 + |T|^2/(4|psi|^4) + ..."""
    x = np.asarray(x, float)
    n = geo.model.dim
    curv = fg.curvature(geo.model, x, geo.method, derivatives=False)
    nsq, dn, lap = geo.norm_sq_derivatives(psi, x)
    if nsq < 1e-20:
        raise SpinorError(f"spinor vanishes at {x}")
    T = geo.energy_momentum(psi, x)
    rhs = (curv.S / 4 + np.sum(T * T) / (4 * nsq**2) + lap / (2 * nsq)
           + n * (dn @ dn) / (4 * (n - 1) * nsq**2))
    return {"lhs": lam**2, "rhs": float(rhs), "slack": float(lam**2 - rhs)}


def einstein_spinor_bound(curv: fg.CurvatureData, lam: float) -> dict:
    """Curvature-only bound for Einstein spinors; equality for WK-spinors."""
    n, S = curv.n, curv.S
    dS = _grad(curv)
    lhs = lam**2 * ((n * n - 5 * n + 8) * S**2 - 4 * curv.ric_norm_sq)
    rhs = (n - 2) ** 2 / (4 * (n - 1)) * ((n - 1) * S**3 + n * (dS @ dS) + 2 * (n - 1) * S * (curv.lapS or 0.0))
    return {"lhs": float(lhs), "rhs": float(rhs), "slack": float(lhs - rhs)}


def dirac_lower_bound(n: int, S: float) -> float:
    return n * S / (4 * (n - 1))


# ---------------------------------------------------------------- unit vector field of a 3D spinor

def unit_vector(rep: CliffordRep, p) -> np.ndarray:
    """xi with xi . psi = i psi, from xi_j = Im<e_j psi, psi> / |psi|^2."""
    p = np.asarray(p, complex)
    nsq = float(np.real(np.vdot(p, p)))
    if nsq < 1e-20:
        raise SpinorError("degenerate spinor")
    return np.array([np.imag(np.vdot(p, g @ p)) for g in rep.gens]) / nsq


def wk_to_unit_vector(geo: SpinGeometry, psi: SpinorField, x, lam: float) -> dict:
    """xi . psi = i psi and nabla_X xi = 2 chi xi x A(X) with A(X) = lam ((2/S) Ric(X) - X).

    The derivative check needs constant S and is None otherwise.  The
    coefficient sqrt(S^3 / (2 (S^2 - 2|Ric|^2))) equals 2|lam|.

    chi is the representation sign: the cross product realizes Clifford products
    as X.Y = -g(X,Y) - chi (X x Y).
    """
    if geo.model.dim != 3:
        raise SpinorError("the unit-vector correspondence is three-dimensional")
    x = np.asarray(x, float)
    rep = geo.rep
    p = psi(x)
    xi = unit_vector(rep, p)
    eig = float(np.linalg.norm(rep.vec(xi) @ p - 1j * p) / np.linalg.norm(p))
    curv = fg.curvature(geo.model, x, geo.method)
    S = curv.S
    A = lam * ((2.0 / S) * curv.Ric - np.eye(3))
    F = geo.model.frame(x)
    dxi = np.stack([fg.richardson_diff(lambda y: unit_vector(rep, psi(y)), x, F[k], geo.h) for k in range(3)])
    cov_xi = dxi + np.einsum("ikj,j->ki", geo.gamma(x), xi)
    chi = rep.chirality
    pred = np.array([2 * chi * cross_3d(xi, A[k]) for k in range(3)])
    # the prediction uses the constant-S form of the equation; dS terms add a scalar part
    deriv = _rel(cov_xi, pred) if np.linalg.norm(_grad(curv)) < 1e-9 else None
    denom = 2 * (S**2 - 2 * curv.ric_norm_sq)
    coef = float(np.sqrt(S**3 / denom)) if denom != 0 and S**3 / denom > 0 else float("nan")
    return {"xi": xi, "norm": float(np.linalg.norm(xi)), "eigen_residual": eig,
            "derivative_residual": deriv, "coefficient": coef}


# ---------------------------------------------------------------- Einstein spinors from WK-spinors

def einstein_normalization(geo: SpinGeometry, psi: SpinorField, lam: float, samples) -> dict:
    """|psi|^2 / S constancy and the Einstein equations for the rescaled field."""
    from .spin_connection import EquationSpec, point_residual
    n = geo.model.dim
    ratios, ein, trace = [], 0.0, 0.0
    for x in np.atleast_2d(samples):
        curv = fg.curvature(geo.model, x, geo.method)
        p = psi(x)
        ratios.append(float(np.real(np.vdot(p, p))) / curv.S)
    ratios = np.array(ratios)
    const = float(np.ptp(ratios) / (1e-300 + np.max(np.abs(ratios))))
    eps = 1 if lam * np.sign(ratios[0]) < 0 else -1
    scale = np.sqrt((n - 2) / (abs(lam) * abs(ratios[0])))
    phi = SpinorField(psi.name + "_einstein", lambda y: scale * psi(y), psi.chirality, "einstein_dirac",
                      {"lam": lam, "eps": eps},
                      None if psi.frame_derivs is None else (lambda y: scale * psi.frame_derivs(y)))
    spec = EquationSpec.einstein_dirac(lam, eps)
    for x in np.atleast_2d(samples):
        r = point_residual(geo, phi, spec, x)
        ein = max(ein, max(r.values()))
        curv = fg.curvature(geo.model, x, geo.method, derivatives=False)
        p = phi(x)
        trace = max(trace, abs(curv.S + eps * lam / (n - 2) * float(np.real(np.vdot(p, p)))) / (1 + abs(curv.S)))
    return {"ratio_spread": const, "eps": eps, "einstein_residual": ein, "trace_residual": trace,
            "field": phi}


def killing_to_einstein(psi: SpinorField, b: float, n: int) -> SpinorField:
    """sqrt(4(n-1)(n-2)|b|) psi / |psi|; positive Einstein spinor for b > 0, eigenvalue -n b."""
    c = np.sqrt(4 * (n - 1) * (n - 2) * abs(b))

    def ev(y):
        p = psi(y)
        return c * p / np.linalg.norm(p)

    eps = 1 if b > 0 else -1
    return SpinorField(psi.name + "_einstein", ev, psi.chirality, "einstein_dirac",
                       {"lam": -n * b, "eps": eps})


# ---------------------------------------------------------------- obstruction scanner

@dataclass
class Obstruction:
    id: str
    description: str
    status: str                      # triggered | clear | not-applicable
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {"id": self.id, "description": self.description, "status": self.status,
                "evidence": _jsonable(self.evidence)}


@dataclass
class ObstructionVerdict:
    model: str
    entries: list

    @property
    def triggered(self) -> list:
        return [e for e in self.entries if e.status == "triggered"]

    @property
    def excludes_wk(self) -> bool:
        return bool(self.triggered)

    def get(self, oid) -> Obstruction:
        for e in self.entries:
            if e.id == oid:
                return e
        raise KeyError(oid)

    def to_dict(self):
        return {"model": self.model, "excludes_wk": self.excludes_wk,
                "entries": [e.to_dict() for e in self.entries]}


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


OBSTRUCTIONS = {
    "compact_ricci_bound": "compact, S > 0 and |Ric|^2 >= (n^2-5n+8) S^2 / 4 everywhere",
    "ricci_polynomial": "conformally flat or Ricci-parallel with constant S: polynomial Ricci identities",
    "ricci_norm_window": "constant S: |Ric|^2 must lie in the window allowed by the scalar identity",
    "conformally_flat_ricci_parallel": "conformally flat, Ricci-parallel, n >= 4",
    "parallel_one_form": "constant S != 0 with a parallel 1-form",
    "product_einstein_pairs": "products of Einstein factors / round 2-spheres / flat tori",
    "product_non_einstein": "product of two non-Einstein factors with constant S",
    "product_flat_factor": "product with a scalar-flat factor",
    "product_einstein_balance": "product of Einstein factors needs (p-2)S_M + p S_N = 0 or q S_M + (q-2) S_N = 0",
    "product_mixed_balance": "Einstein times non-Einstein product needs (p-2)S_M + p S_N = 0",
    "ricci_norm_constant": "constant S in dimension 3 forces |Ric|^2 constant",
    "conformally_flat_3d": "3D conformally flat with constant S: Einstein with S > 0",
    "sasakian_scalar": "3D non-Einstein Sasakian: S must equal 1 +- sqrt(5)",
    "scalar_relation_3d": "3D constant S: 8 lam^2 (S^2 - 2|Ric|^2) = S^3 needs a real nonzero lam",
    "integrability_3d": "3D constant S: a common real WK-number must solve the curvature conditions",
}


def _entry(oid, status, **ev):
    return Obstruction(oid, OBSTRUCTIONS[oid], status, ev)


def scan_profile(model: fg.FrameModel, samples, method="closed") -> list:
    return [fg.curvature(model, x, method) for x in np.atleast_2d(samples)]


def obstruction_scan(model: fg.FrameModel, samples=None, method="closed", tol=1e-8,
                     profile=None) -> ObstructionVerdict:
    """Evaluate every non-existence criterion whose hypotheses the metadata supports."""
    flags = model.flags
    samples = model.sample(6, seed=0) if samples is None else samples
    prof = profile or scan_profile(model, samples, method)
    n = model.dim
    Ss = np.array([c.S for c in prof])
    nrs = np.array([c.ric_norm_sq for c in prof])
    grads = np.array([np.linalg.norm(_grad(c)) for c in prof])
    const_S = bool(np.ptp(Ss) < tol * (1 + np.max(np.abs(Ss))) and np.max(grads) < 1e-6)
    S0 = float(Ss[0])
    nonzero = bool(np.min(np.abs(Ss)) > tol)
    einstein = all(np.max(np.abs(c.Ric - c.S / n * np.eye(n))) < 1e-8 for c in prof)
    cf = bool(flags.get("conformally_flat"))
    rp = bool(flags.get("ricci_parallel")) or all(np.max(np.abs(_ric_cov(c))) < 1e-8 for c in prof)
    out = []
    na = "not-applicable"

    # compact, positive S
    if flags.get("compact") and np.all(Ss > 0):
        bound = (n * n - 5 * n + 8) / 4 * Ss**2
        trig = bool(np.all(nrs >= bound - tol))
        out.append(_entry("compact_ricci_bound", "triggered" if trig else "clear",
                          ric_norm_sq=nrs.max(), bound=bound.min()))
    else:
        out.append(_entry("compact_ricci_bound", na, reason="needs compact model with S > 0"))

    if (cf or rp) and const_S and nonzero:
        res = [ricci_polynomial_residuals(c) for c in prof]
        worst = max(max(r.values()) for r in res)
        out.append(_entry("ricci_polynomial", "triggered" if worst > tol else "clear", residual=worst))
    else:
        out.append(_entry("ricci_polynomial", na, reason="needs conformal flatness or parallel Ricci and constant S != 0"))

    if const_S and nonzero:
        lo, hi = S0**2 / n, (n * n - 5 * n + 8) / 4 * S0**2
        ok = (lo - tol <= nrs.min() and nrs.max() < hi - tol) if S0 > 0 else bool(nrs.min() > hi + tol)
        out.append(_entry("ricci_norm_window", "clear" if ok else "triggered",
                          S=S0, ric_norm_sq=nrs.max(), window=(lo, hi) if S0 > 0 else (hi, None)))
    else:
        out.append(_entry("ricci_norm_window", na, reason="needs constant S != 0"))

    if n >= 4 and cf and rp and nonzero:
        if S0 > 0:
            trig = not einstein
        else:
            target = (n**3 - 4 * n**2 + 3 * n + 4) / (4 * (n - 1)) * S0**2
            trig = bool(abs(nrs.max() - target) > tol * (1 + target))
        out.append(_entry("conformally_flat_ricci_parallel", "triggered" if trig else "clear", S=S0, einstein=einstein))
    else:
        out.append(_entry("conformally_flat_ricci_parallel", na, reason="needs n >= 4, conformally flat, Ricci-parallel"))

    if "parallel_one_form" in flags and const_S and nonzero and n >= 3:
        idx = flags["parallel_one_form"]
        ric_xi = max(float(np.linalg.norm(c.Ric[idx])) for c in prof)
        cov = max(float(np.max(np.abs(c.Gamma[:, :, idx]))) for c in prof)
        out.append(_entry("parallel_one_form", "triggered", S=S0, ric_xi=ric_xi, nabla_xi=cov))
    else:
        out.append(_entry("parallel_one_form", na, reason="no parallel 1-form declared or S not constant nonzero"))

    out.extend(_product_entries(model, prof, tol))

    if n == 3 and const_S and nonzero:
        spread = float(np.ptp(nrs))
        out.append(_entry("ricci_norm_constant", "triggered" if spread > tol * (1 + nrs.max()) else "clear",
                          spread=spread))
        if cf:
            trig = not (einstein and S0 > 0)
            out.append(_entry("conformally_flat_3d", "triggered" if trig else "clear", S=S0, einstein=einstein))
        else:
            out.append(_entry("conformally_flat_3d", na, reason="not declared conformally flat"))
        if flags.get("sasakian") and not einstein:
            near = min(abs(S0 - s) for s in GOLDEN_S)
            out.append(_entry("sasakian_scalar", "triggered" if near > 1e-8 else "clear",
                              S=S0, allowed=list(GOLDEN_S), distance=near))
        else:
            out.append(_entry("sasakian_scalar", na, reason="needs a non-Einstein Sasakian structure"))
        lam2 = [lambda_squared_from_scalar(c) for c in prof]
        bad = any(l is None or l <= 0 for l in lam2)
        out.append(_entry("scalar_relation_3d", "triggered" if bad else "clear",
                          lam_squared=[None if l is None else float(l) for l in lam2],
                          S2_minus_2ric2=float(S0**2 - 2 * nrs[0])))
        rep = build_rep(3, 1)
        alg = [admissible_wk_numbers(c, rep) for c in prof]
        ident = [identity_route_wk_numbers(c) for c in prof]
        common_alg = _common(alg)
        common_ident = _common(ident)
        out.append(_entry("integrability_3d", "triggered" if not common_alg else "clear",
                          algebraic=common_alg, identities=common_ident,
                          routes_agree=_same(common_alg, common_ident)))
    else:
        for oid in ("ricci_norm_constant", "conformally_flat_3d", "sasakian_scalar",
                    "scalar_relation_3d", "integrability_3d"):
            out.append(_entry(oid, na, reason="needs dimension 3 and constant S != 0"))
    return ObstructionVerdict(model.name, out)


def _common(sets):
    cur = None
    for s in sets:
        if s == "all":
            continue
        s = set(np.round(s, 8))
        cur = s if cur is None else cur & s
    return "all" if cur is None else sorted(float(v) for v in cur)


def _same(a, b):
    if isinstance(a, str) or isinstance(b, str):
        return a == b
    return len(a) == len(b) and all(abs(x - y) < 1e-6 for x, y in zip(a, b))


def _product_entries(model, prof, tol):
    names = ("product_einstein_pairs", "product_non_einstein", "product_flat_factor",
             "product_einstein_balance", "product_mixed_balance")
    info = model.flags.get("product")
    if not info:
        return [_entry(k, "not-applicable", reason="not a product") for k in names]
    p, q = info["dims"]
    n = p + q
    c = prof[0]
    RM, RN = c.Ric[:p, :p], c.Ric[p:, p:]
    offd = float(np.max(np.abs(c.Ric[:p, p:])))
    SM, SN = float(np.trace(RM)), float(np.trace(RN))
    S = SM + SN
    eM = bool(np.max(np.abs(RM - SM / p * np.eye(p))) < 1e-8)
    eN = bool(np.max(np.abs(RN - SN / q * np.eye(q))) < 1e-8)
    flatN = bool(np.max(np.abs(c.R[p:, p:, p:, p:])) < 1e-10)
    flatM = bool(np.max(np.abs(c.R[:p, :p, :p, :p])) < 1e-10)
    ev = dict(p=p, q=q, S_M=SM, S_N=SN, einstein_M=eM, einstein_N=eN, off_diagonal=offd)
    out = []

    def st(cond_applicable, cond_trigger):
        if not cond_applicable:
            return "not-applicable"
        return "triggered" if cond_trigger else "clear"

    sphereN = q == 2 and eN and SN > 0
    sphereM = p == 2 and eM and SM > 0
    cases = {
        "both_einstein_positive": p >= 3 and q >= 3 and eM and eN and SM > 0 and SN > 0,
        "einstein_times_sphere": (p >= 3 and eM and SM > 0 and sphereN) or (q >= 3 and eN and SN > 0 and sphereM),
        "two_spheres": sphereM and sphereN,
        "einstein_times_torus": (p >= 3 and eM and flatN) or (q >= 3 and eN and flatM),
    }
    hit = [k for k, v in cases.items() if v]
    out.append(Obstruction(names[0], OBSTRUCTIONS[names[0]],
                           "triggered" if hit and abs(S) > tol else "clear", dict(ev, cases=hit)))
    out.append(Obstruction(names[1], OBSTRUCTIONS[names[1]],
                           st(p >= 3 and q >= 3 and abs(SM) > tol and abs(SN) > tol and abs(S) > tol,
                              not eM and not eN), ev))
    flat_case = (p >= 3 and abs(SM) > tol and abs(SN) < tol) or (q >= 3 and abs(SN) > tol and abs(SM) < tol)
    out.append(Obstruction(names[2], OBSTRUCTIONS[names[2]], st(flat_case, True), ev))
    bal = (p - 2) * SM + p * SN
    bal2 = q * SM + (q - 2) * SN
    out.append(Obstruction(names[3], OBSTRUCTIONS[names[3]],
                           st(p >= 3 and q >= 3 and eM and eN and abs(SM) > tol and abs(SN) > tol and abs(S) > tol,
                              abs(bal) > tol and abs(bal2) > tol), dict(ev, balance=(bal, bal2))))
    mixed = p >= 3 and q >= 3 and abs(SM) > tol and abs(SN) > tol and abs(S) > tol and (eM != eN)
    if mixed and eN:
        bal = (q - 2) * SN + q * SM
    out.append(Obstruction(names[4], OBSTRUCTIONS[names[4]], st(mixed, abs(bal) > tol), dict(ev, balance=bal)))
    del n
    return out
