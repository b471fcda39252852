"""Almost contact and Sasakian structures, the Phi-splitting of spinors,
quasi-Killing spinors, D-homothetic deformation and circle bundles.

Frames are adapted: 0-based indices 2i and 2i+1 hold E_i and phi(E_i), the
last index holds xi.  A (1,1)-tensor phi is stored as a matrix whose column
j holds the components of phi(E_j).  The fundamental form is
Phi(X, Y) = g(X, phi Y), so its components are phi[i, j].

The Clifford representation with chirality +1 is the one in which the
Phi-eigenspaces carry the xi-signs of the splitting; the mirrored
representation is rejected by :func:`decompose`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
import sympy as sp

from . import frame_geometry as fg
from .clifford import CliffordRep, build_rep, two_form_matrix
from .spin_connection import SpinorError, spin_matrices, two_form_action

SASAKIAN_TOL = 1e-10


class ConventionError(ValueError):
    """The Phi action does not split spinors with the expected signs."""


def standard_phi(m: int) -> np.ndarray:
    """phi(E_{2i}) = E_{2i+1}, phi(E_{2i+1}) = -E_{2i}, phi(xi) = 0."""
    n = 2 * m + 1
    phi = np.zeros((n, n))
    for i in range(m):
        phi[2 * i + 1, 2 * i] = 1.0
        phi[2 * i, 2 * i + 1] = -1.0
    return phi


def sasakian_rep(m: int) -> CliffordRep:
    return build_rep(2 * m + 1, 1)


@dataclass
class AlmostContactStructure:
    model: fg.FrameModel | None
    phi: np.ndarray
    xi: int
    m: int = field(init=False)

    def __post_init__(self):
        self.phi = np.asarray(self.phi, float)
        n = self.phi.shape[0]
        if n % 2 == 0:
            raise ValueError("almost contact structures live in odd dimension")
        self.m = n // 2

    @property
    def n(self) -> int:
        return 2 * self.m + 1

    @property
    def eta(self) -> np.ndarray:
        return np.eye(self.n)[self.xi]

    @property
    def adapted(self) -> bool:
        return self.xi == self.n - 1 and np.allclose(self.phi, standard_phi(self.m))

    @classmethod
    def from_model(cls, model: fg.FrameModel) -> "AlmostContactStructure":
        info = model.flags.get("sasakian")
        if not info:
            raise ValueError(f"{model.name} carries no contact structure")
        return cls(model, np.array(info["phi"], float), int(info["xi"]))

    @classmethod
    def standard(cls, m: int, model=None) -> "AlmostContactStructure":
        return cls(model, standard_phi(m), 2 * m)

    def algebraic_residuals(self) -> dict:
        n, phi, eta = self.n, self.phi, self.eta
        return {
            "eta_xi": abs(eta[self.xi] - 1.0),
            "phi_squared": float(np.max(np.abs(phi @ phi + np.eye(n) - np.outer(eta, eta)))),
            "compatible_metric": float(np.max(np.abs(phi.T @ phi - np.eye(n) + np.outer(eta, eta)))),
        }


# ---------------------------------------------------------------- Sasakian condition

def _bar(i):
    return 2 * i + 1


def christoffel_constraints(structure: AlmostContactStructure, G: np.ndarray) -> dict:
    """Adapted-frame Christoffel relations; G[w, u, v] = g(nabla_{E_u} E_v, E_w)."""
    if not structure.adapted:
        raise ValueError("Christoffel constraints need an adapted frame")
    m, n = structure.m, structure.n
    z = n - 1
    c1 = c2 = c3 = c4 = 0.0
    for i in range(m):
        I, Ib = 2 * i, _bar(i)
        for u in range(n):
            for j in range(m):
                J, Jb = 2 * j, _bar(j)
                c1 = max(c1, abs(G[Ib, u, Jb] - G[I, u, J]))
                c2 = max(c2, abs(G[I, u, Jb] + G[Ib, u, J]))
        for k in range(m):
            K, Kb = 2 * k, _bar(k)
            c3 = max(c3, abs(G[I, Kb, z] - (i == k)), abs(G[Ib, K, z] + (i == k)))
            c4 = max(c4, abs(G[I, K, z]), abs(G[Ib, Kb, z]))
        c4 = max(c4, abs(G[I, z, z]), abs(G[Ib, z, z]))
    return {"phi_bar_symmetric": c1, "phi_bar_skew": c2, "xi_rotation": c3, "xi_vanishing": c4}


def sasakian_defect(structure: AlmostContactStructure, G: np.ndarray) -> float:
    """max |(nabla_{E_k} phi)(E_j) - delta_kj xi + eta(E_j) E_k| for constant phi components."""
    phi, n, xi = structure.phi, structure.n, structure.xi
    worst = 0.0
    for k in range(n):
        Gk = G[:, k, :]
        cov = Gk @ phi - phi @ Gk
        target = np.zeros((n, n))
        target[xi, k] += 1.0
        target[k, xi] -= 1.0
        worst = max(worst, float(np.max(np.abs(cov - target))))
    return worst


def verify_sasakian(structure: AlmostContactStructure, samples=None, method="closed",
                    adapted_checks=True) -> dict:
    model = structure.model
    if model is None:
        raise ValueError("verify_sasakian needs a frame model")
    samples = model.sample(4, seed=0) if samples is None else np.atleast_2d(samples)
    out = dict(structure.algebraic_residuals())
    out["sasakian"] = 0.0
    if adapted_checks and not structure.adapted:
        raise ValueError("frame is not adapted to the contact structure")
    for x in samples:
        G = fg.christoffel(model, x, method).Gamma
        out["sasakian"] = max(out["sasakian"], sasakian_defect(structure, G))
        if adapted_checks:
            for k, v in christoffel_constraints(structure, G).items():
                out[k] = max(out.get(k, 0.0), v)
    out["max"] = max(out.values())
    out["passed"] = out["max"] < SASAKIAN_TOL
    return out


# ---------------------------------------------------------------- spinor splitting

@dataclass
class SasakianDecomposition:
    m: int
    Phi: np.ndarray
    projectors: list
    eigenvalues: list
    dims: list
    residuals: dict

    def projector(self, r) -> np.ndarray:
        return self.projectors[r]

    def basis(self, r) -> np.ndarray:
        w, V = np.linalg.eigh(self.projectors[r])
        return V[:, w > 0.5]


def phi_form_matrix(rep: CliffordRep, phi: np.ndarray) -> np.ndarray:
    """Clifford action of Phi = sum_{i<j} g(E_i, phi E_j) e_i e_j."""
    return two_form_matrix(rep, np.asarray(phi, float))


def decompose(rep: CliffordRep, phi: np.ndarray | None = None, xi: int | None = None) -> SasakianDecomposition:
    """Eigen-splitting of the Phi action: Phi = i (2r - m) on Sigma_r, dim Sigma_r = C(m, r)."""
    n = rep.n
    if n % 2 == 0:
        raise ValueError("the Phi splitting needs odd dimension")
    m = n // 2
    phi = standard_phi(m) if phi is None else np.asarray(phi, float)
    xi = n - 1 if xi is None else xi
    Phi = phi_form_matrix(rep, phi)
    w, V = np.linalg.eigh(-1j * Phi)
    labels = np.rint((w + m) / 2).astype(int)
    for val, r in zip(w, labels):
        if not (0 <= r <= m) or abs(val - (2 * r - m)) > 1e-10:
            raise ConventionError(f"Phi eigenvalue {val:+.6g}i is not of the form i(2r - m)")
    projectors, dims, eigs = [], [], []
    for r in range(m + 1):
        cols = V[:, labels == r]
        projectors.append(cols @ cols.conj().T)
        dims.append(cols.shape[1])
        eigs.append(complex(0, 2 * r - m))
        if cols.shape[1] != comb(m, r):
            raise ConventionError(f"eigenvalue {2 * r - m:+d}i has multiplicity {cols.shape[1]}, expected {comb(m, r)}")
    I = rep.identity
    total = sum(projectors)
    orth = max((float(np.max(np.abs(projectors[r] @ projectors[s])))
                for r in range(m + 1) for s in range(m + 1) if r != s), default=0.0)
    idem = max(float(np.max(np.abs(P @ P - P))) for P in projectors)
    Xi = rep.gens[xi]
    sign_even = (1j) ** (2 * m + 1)
    xi_res = 0.0
    for r, P in enumerate(projectors):
        want = sign_even if r % 2 == 0 else -sign_even
        xi_res = max(xi_res, float(np.max(np.abs(Xi @ P - want * P))))
    if xi_res > 1e-10:
        bad = complex(np.trace(projectors[0].conj().T @ Xi @ projectors[0]) / max(dims[0], 1))
        raise ConventionError(f"xi acts on Sigma_0 by {bad:.6g}, expected {sign_even:.6g} "
                              "(mirrored Clifford representation)")
    s0 = sm = 0.0
    for u in range(n):
        X = rep.gens[u]
        pX = rep.vec(phi[:, u])
        e = 1.0 if u == xi else 0.0
        s0 = max(s0, float(np.max(np.abs((pX + 1j * X + (-1) ** m * e * I) @ projectors[0]))))
        sm = max(sm, float(np.max(np.abs((pX - 1j * X - e * I) @ projectors[m]))))
    residuals = {
        "completeness": float(np.max(np.abs(total - I))),
        "orthogonality": orth,
        "idempotent": idem,
        "xi_action": xi_res,
        "sigma0_equations": s0,
        "sigmam_equations": sm,
    }
    return SasakianDecomposition(m, Phi, projectors, eigs, dims, residuals)


# ---------------------------------------------------------------- algebraic Sasakian identities

def sasakian_space_form(m: int, c: float, phi=None) -> np.ndarray:
    """Curvature R[i,j,k,l] = g(R(E_i,E_j)E_l, E_k) of the Sasakian space form with
    phi-sectional curvature c, in an adapted frame."""
    n = 2 * m + 1
    phi = standard_phi(m) if phi is None else np.asarray(phi, float)
    g = np.eye(n)
    eta = g[n - 1]
    F = phi                      # F[i, j] = g(E_i, phi E_j) = Phi(E_i, E_j)
    A = (c + 3) / 4
    B = (c - 1) / 4
    R = np.zeros((n, n, n, n))
    # R(X,Y)Z = A[g(Y,Z)X - g(X,Z)Y]
    #   + B[eta(X)eta(Z)Y - eta(Y)eta(Z)X + g(X,Z)eta(Y)xi - g(Y,Z)eta(X)xi
    #       + Phi(Z,Y)phiX - Phi(Z,X)phiY + 2Phi(X,Y)phiZ]
    for i in range(n):
        for j in range(n):
            for l in range(n):
                X, Y, Z = g[i], g[j], g[l]
                v = A * (Y @ Z * X - X @ Z * Y)
                v = v + B * (eta @ X * (eta @ Z) * Y - eta @ Y * (eta @ Z) * X
                             + X @ Z * (eta @ Y) * eta - Y @ Z * (eta @ X) * eta
                             + F[l, j] * phi @ X - F[l, i] * phi @ Y + 2 * F[i, j] * phi @ Z)
                R[i, j, :, l] = v
    return R


def curvature_from_tensor(R: np.ndarray, point=None) -> fg.CurvatureData:
    n = R.shape[0]
    Ric = np.einsum("ujul->jl", R)
    return fg.CurvatureData(np.zeros(n) if point is None else point, R, Ric, float(np.trace(Ric)),
                            RicCov=np.zeros((n, n, n)), gradS=np.zeros(n), lapS=0.0,
                            hessS=np.zeros((n, n)))


def sasakian_curvature_identities(curv: fg.CurvatureData, m: int) -> dict:
    """Component identities for the curvature of a Sasakian manifold in an adapted frame."""
    R, Ric = curv.R, curv.Ric
    n = 2 * m + 1
    z = n - 1
    h, hb = (lambda i: 2 * i), _bar
    ric = ricb = rzz = rz = 0.0
    for j in range(m):
        for l in range(m):
            s1 = sum(R[h(i), hb(i), h(j), hb(l)] for i in range(m)) + (2 * m - 1) * (j == l)
            s2 = -sum(R[h(i), hb(i), h(j), h(l)] for i in range(m))
            ric = max(ric, abs(Ric[h(j), h(l)] - s1), abs(Ric[hb(j), hb(l)] - s1))
            ricb = max(ricb, abs(Ric[h(j), hb(l)] - s2), abs(Ric[hb(j), h(l)] + s2))
        rz = max(rz, abs(Ric[h(j), z]), abs(Ric[hb(j), z]))
    rzz = abs(Ric[z, z] - 2 * m)
    sym = 0.0
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    I, J, K, L = h(i), h(j), h(k), h(l)
                    Ib, Jb, Kb, Lb = hb(i), hb(j), hb(k), hb(l)
                    sym = max(sym,
                              abs(R[Ib, Jb, Kb, Lb] - R[I, J, K, L]),
                              abs(R[I, J, Kb, Lb] - R[Ib, Jb, K, L]),
                              abs(R[I, Jb, K, Lb] - R[Ib, J, Kb, L]),
                              abs(R[I, Jb, Kb, Lb] + R[Ib, J, K, L]),
                              abs(R[Ib, Jb, K, Lb] + R[I, J, Kb, L]))
    # every component with a xi slot equals that of the unit sphere
    E = np.eye(n)
    unit = np.einsum("ik,jl->ijkl", E, E) - np.einsum("il,jk->ijkl", E, E)
    has_xi = np.zeros((n, n, n, n), bool)
    has_xi[z] = has_xi[:, z] = has_xi[:, :, z] = has_xi[:, :, :, z] = True
    xi_res = float(np.max(np.abs((R - unit)[has_xi])))
    return {"ricci_horizontal": ric, "ricci_mixed": ricb, "ricci_xi": rzz, "ricci_xi_horizontal": rz,
            "curvature_symmetries": sym, "xi_components": xi_res}


def check_sasakian_algebra(rep: CliffordRep, decomposition: SasakianDecomposition,
                           curv: fg.CurvatureData) -> dict:
    m = decomposition.m
    if rep.n != 2 * m + 1 or curv.n != rep.n:
        raise ValueError("dimension mismatch between representation, splitting and curvature")
    out = dict(sasakian_curvature_identities(curv, m))
    phi = standard_phi(m)
    Phi = decomposition.Phi
    comm = 0.0
    for u in range(rep.n):
        X = rep.gens[u]
        comm = max(comm, float(np.max(np.abs(X @ Phi - Phi @ X - 2 * rep.vec(phi[:, u])))))
    out["phi_commutator"] = comm
    if m >= 2:
        out["vanishing_pairings"] = vanishing_pairings(rep, decomposition)
    return out


def vanishing_pairings(rep: CliffordRep, dec: SasakianDecomposition) -> float:
    """<E_a E_b f, g> = 0 for the mixed frame pairs, f, g in Sigma_0 + Sigma_m.

    For m = 2 the pairing is only taken within Sigma_0 or within Sigma_2.
    """
    m = dec.m
    z = 2 * m
    if m == 2:
        blocks = [(dec.basis(0), dec.basis(0)), (dec.basis(2), dec.basis(2))]
    else:
        B = np.hstack([dec.basis(0), dec.basis(m)])
        blocks = [(B, B)]
    pairs = []
    for k in range(m):
        for l in range(k + 1, m):
            pairs += [(2 * k, 2 * l), (_bar(k), _bar(l))]
        for q in range(m):
            if q != k:
                pairs += [(2 * k, _bar(q)), (_bar(k), 2 * q)]
        pairs += [(2 * k, z), (_bar(k), z)]
    worst = 0.0
    for a, b in pairs:
        M = rep.gens[a] @ rep.gens[b]
        for F, G in blocks:
            worst = max(worst, float(np.max(np.abs(G.conj().T @ M @ F))))
    return worst


def phi_covariant_form(structure: AlmostContactStructure, G: np.ndarray, k: int) -> np.ndarray:
    """Components (nabla_{E_k} Phi)(E_i, E_j) for constant Phi components."""
    F = structure.phi
    Gk = G[:, k, :]
    return -(Gk.T @ F) - (F @ Gk)


def phi_derivative_residual(structure: AlmostContactStructure, rep: CliffordRep, x, method="closed") -> float:
    """(nabla_X Phi) . psi = -X . xi . psi - eta(X) psi as a matrix identity."""
    G = fg.christoffel(structure.model, x, method).Gamma
    xi = structure.xi
    worst = 0.0
    for k in range(structure.n):
        lhs = two_form_matrix(rep, phi_covariant_form(structure, G, k))
        rhs = -rep.gens[k] @ rep.gens[xi] - (k == xi) * rep.identity
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


# ---------------------------------------------------------------- quasi-Killing spinors

def qk_scalar(a, b, m) -> float:
    return 8 * m * (2 * m + 1) * a**2 + 16 * m * a * b


def qk_ricci_norm_sq(a, b, m) -> float:
    return ((8 * m * a**2 + 4 * a * b) * (16 * m**2 * a**2 + 16 * m * a**2 + 24 * m * a * b - 4 * m)
            + 8 * m * b**2 + 4 * m**2)


def qk_dirac_eigenvalue(a, b, m) -> float:
    return -(2 * m + 1) * a - b


def three_dim_branches(S: float) -> dict:
    """Admissible quasi-Killing types on a 3D Sasakian manifold of scalar curvature S."""
    out = {"first": (-0.5, 0.75 - S / 8)}
    if 4 + 2 * S >= 0:
        r = np.sqrt(4 + 2 * S)
        out["second_plus"] = ((-2 + r) / 4, (4 - r) / 4)
        out["second_minus"] = ((-2 - r) / 4, (4 + r) / 4)
    return out


def quasi_killing_consequences(a, b, m, curv: fg.CurvatureData, rep: CliffordRep, p,
                               precondition=None, tol=1e-6) -> dict:
    """Curvature consequences of a quasi-Killing spinor of type (a, b) with value p at a point.

    ``precondition`` is the quasi-Killing residual of the field; the check
    refuses to run when it is missing or above ``tol``.
    """
    if precondition is None or precondition > tol:
        raise SpinorError(f"quasi-Killing residual precondition fails ({precondition})")
    n = 2 * m + 1
    phi = standard_phi(m)
    xi = n - 1
    p = np.asarray(p, complex)
    Xi = rep.gens[xi]
    Ric = curv.Ric
    c0 = 8 * m * a**2 + 4 * a * b
    ric_id = 0.0
    for u in range(n):
        lhs = rep.vec(Ric[u]) @ p
        rhs = c0 * rep.gens[u] @ p + 2 * b * rep.vec(phi[:, u]) @ Xi @ p \
            + (2 * m - c0) * (u == xi) * Xi @ p
        ric_id = max(ric_id, float(np.linalg.norm(lhs - rhs)))
    Phi = phi_form_matrix(rep, phi)
    phi_rel = float(np.linalg.norm(2 * b * Phi @ p - m * (1 - 4 * a**2 - 4 * a * b) * Xi @ p))
    out = {
        "scalar": abs(curv.S - qk_scalar(a, b, m)),
        "ricci_norm": abs(curv.ric_norm_sq - qk_ricci_norm_sq(a, b, m)),
        "ricci_action": ric_id / np.linalg.norm(p),
        "phi_relation": phi_rel / np.linalg.norm(p),
    }
    if abs(abs(a) - 0.5) < 1e-12 and abs(b) > 1e-12:
        s = 1 if a > 0 else -1
        target = (2 * m + 4 * s * b) * np.eye(n)
        target[xi, xi] -= 4 * s * b
        out["ricci_form"] = float(np.max(np.abs(Ric - target)))
    if m == 1:
        S = curv.S
        br = three_dim_branches(S)
        dist = {k: abs(a - v[0]) + abs(b - v[1]) for k, v in br.items()}
        out["branch"] = min(dist, key=dist.get)
        out["branch_distance"] = dist[out["branch"]]
    return out


def wk_criterion(a, b, m) -> dict:
    """Which quasi-Killing types (+-1/2, b), m >= 2, are WK-spinors."""
    if abs(abs(a) - 0.5) > 1e-12:
        raise ValueError("the criterion covers a = +-1/2 only")
    if m < 2:
        raise ValueError("the criterion needs m >= 2")
    s = 1 if a > 0 else -1
    required = -s * (2 * m * m - m - 2) / (4 * (m - 1))
    lam = qk_dirac_eigenvalue(a, required, m)
    S = 2 * m / (m - 1)
    # the two coefficient conditions obtained by matching X.psi and eta(X) xi.psi
    ric_g = 2 * m + 4 * s * required
    cond = ((2 * m - 1) * S - 4 * s * lam * ric_g + 2 * s * lam * S,
            (2 * m - 1) * required * S + 8 * s * lam * required)
    return {
        "a": a, "b": b, "m": m,
        "required_b": required,
        "is_wk": abs(b - required) < 1e-12 and b != 0,
        "killing_case": b == 0,
        "lam": lam,
        "S": S,
        "ricci_g": (2 - m) / (m - 1),
        "ricci_eta": (2 * m * m - m - 2) / (m - 1),
        "coefficient_conditions": cond,
        "ricci_consistency": abs(ric_g - (2 - m) / (m - 1)) + abs(S - ((2 * m + 1) * ric_g - 4 * s * required)),
    }


def wk_criterion_spinor_check(a, m, rep: CliffordRep | None = None) -> float:
    """Clifford-level check of the criterion: on Sigma_0 (a = 1/2) or Sigma_m (a = -1/2),
    the WK right-hand side built from the induced Ricci form equals a X + b eta(X) xi."""
    rep = sasakian_rep(m) if rep is None else rep
    info = wk_criterion(a, 0.0, m)
    b = info["required_b"]
    n = 2 * m + 1
    s = 1 if a > 0 else -1
    Ric = (2 * m + 4 * s * b) * np.eye(n)
    Ric[n - 1, n - 1] -= 4 * s * b
    S = float(np.trace(Ric))
    lam = info["lam"]
    dec = decompose(rep)
    P = dec.basis(0 if a > 0 else m)
    worst = 0.0
    for u in range(n):
        wk = (2 * lam / ((n - 2) * S)) * rep.vec(Ric[u]) - (lam / (n - 2)) * rep.gens[u]
        qk = a * rep.gens[u] + b * (u == n - 1) * rep.gens[n - 1]
        worst = max(worst, float(np.max(np.abs((wk - qk) @ P))))
    return worst


# ---------------------------------------------------------------- D-homothetic deformation

@dataclass
class Deformation:
    base: AlmostContactStructure
    a: float
    structure: AlmostContactStructure
    scale: np.ndarray

    @property
    def model(self) -> fg.FrameModel:
        return self.structure.model

    def predicted_ricci(self, base_ric: np.ndarray) -> np.ndarray:
        """Ricci of the deformed metric in the deformed adapted frame."""
        a2 = self.a**2
        m = self.base.m
        n = 2 * m + 1
        out = a2 * base_ric.copy()
        out[: n - 1, : n - 1] += 2 * (a2 - 1) * np.eye(n - 1)
        out[n - 1, :] = 0.0
        out[:, n - 1] = 0.0
        out[n - 1, n - 1] = 2 * m
        return out

    def predicted_scalar(self, base_S: float) -> float:
        return self.a**2 * base_S + 2 * self.base.m * (self.a**2 - 1)

    def tensors(self) -> dict:
        """phi, xi, eta and g of the deformed structure in the base frame."""
        a2 = self.a**2
        n = self.base.n
        eta = self.base.eta
        g = np.eye(n) / a2 + (1 / a2**2 - 1 / a2) * np.outer(eta, eta)
        return {"phi": self.base.phi.copy(), "xi": a2 * eta, "eta": eta / a2, "g": g}


def deform(structure: AlmostContactStructure, a: float) -> Deformation:
    """D-homothetic deformation: adapted frame (a E_u, a^2 xi)."""
    if not a > 0:
        raise ValueError("deformation parameter must be positive")
    if not structure.adapted:
        raise ValueError("deformation is implemented in adapted frames")
    model = structure.model
    n = structure.n
    s = np.full(n, float(a))
    s[n - 1] = a * a
    C = None if model.structure_constants is None else fg.scale_structure_constants(model.structure_constants, s)
    theta = sp.diag(*[1 / sp.nsimplify(v) for v in s]) * model.coframe
    lie = None if model.lie is None else (model.lie[0], np.diag(s) @ np.asarray(model.lie[1], float))
    flags = {k: v for k, v in model.flags.items() if k == "sasakian"}
    params = dict(model.params)
    params["deformation"] = params.get("deformation", 1.0) * a
    new = fg.FrameModel(f"deformed({model.name},{a:g})", model.coords, theta, params=params,
                        structure_constants=C, domain=model.domain, flags=flags, lie=lie)
    return Deformation(structure, float(a), AlmostContactStructure(new, structure.phi, structure.xi), s)


def deformation_functoriality(structure: AlmostContactStructure, a: float, a2: float, samples=None) -> float:
    """deform(deform(s, a), a2) against deform(s, a a2): coframes and structure constants."""
    twice = deform(deform(structure, a).structure, a2)
    once = deform(structure, a * a2)
    samples = structure.model.sample(3, seed=1) if samples is None else samples
    worst = 0.0
    for x in np.atleast_2d(samples):
        worst = max(worst, float(np.max(np.abs(twice.model.theta(x) - once.model.theta(x)))))
    if once.model.structure_constants is not None:
        worst = max(worst, float(np.max(np.abs(twice.model.structure_constants - once.model.structure_constants))))
    t1 = _compose_tensors(structure, a, a2)
    t2 = once.tensors()
    for k in t2:
        worst = max(worst, float(np.max(np.abs(np.asarray(t1[k]) - np.asarray(t2[k])))))
    return worst


def _compose_tensors(structure, a, a2):
    """Apply the tensor rules twice, expressing everything in the original frame."""
    first = deform(structure, a).tensors()
    g1, eta1, xi1 = first["g"], first["eta"], first["xi"]
    b2 = a2**2
    return {"phi": first["phi"], "xi": b2 * xi1, "eta": eta1 / b2,
            "g": g1 / b2 + (1 / b2**2 - 1 / b2) * np.outer(eta1, eta1)}


def transfer_residual(deformation: Deformation, rep: CliffordRep, psi, x, method="closed") -> float:
    """Covariant derivative of a transferred spinor against the deformation formula.

    In deformed adapted frames: nabla~_k psi = s_k (nabla_k psi)
    - (a-1)/2 phi(E_k).xi.psi (horizontal k) and - (a^2-1)/2 Phi.psi (k = xi).
    """
    from .spin_connection import SpinGeometry
    base = SpinGeometry(deformation.base.model, rep, method)
    new = SpinGeometry(deformation.model, rep, method)
    a = deformation.a
    n = deformation.base.n
    phi = deformation.base.phi
    Phi = phi_form_matrix(rep, phi)
    p = psi(x)
    lhs = new.cov_all(psi, x)
    rhs = deformation.scale[:, None] * base.cov_all(psi, x)
    Xi = rep.gens[n - 1]
    for k in range(n - 1):
        rhs[k] -= 0.5 * (a - 1) * rep.vec(phi[:, k]) @ Xi @ p
    rhs[n - 1] -= 0.5 * (a * a - 1) * Phi @ p
    return float(np.max(np.abs(lhs - rhs)) / (1 + np.max(np.abs(rhs))))


def transferred_killing_type(m: int, a: float, killing: float) -> tuple:
    """Quasi-Killing type of a transferred Killing spinor with Killing number +-1/2."""
    s = 1 if killing > 0 else -1
    return (s * 0.5, s * (m + 1) * (a * a - 1) / 2)


def wk_deformation_threshold(m: int) -> list:
    """a^2 at which transferred Killing spinors become WK-spinors."""
    if m == 1:
        return [(3 + np.sqrt(5)) / 8, (3 - np.sqrt(5)) / 8]
    return [m / (2 * (m * m - 1))]


# ---------------------------------------------------------------- circle bundles

def kahler_form(m: int) -> np.ndarray:
    """Omega_uv = g(E_u, J E_v) for J(E_{2i}) = E_{2i+1}."""
    return standard_phi(m)[: 2 * m, : 2 * m]


def complex_space_form(m: int, c: float) -> np.ndarray:
    """Curvature of a Kaehler manifold of constant holomorphic sectional curvature c."""
    n = 2 * m
    J = kahler_form(m)
    g = np.eye(n)
    R = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for l in range(n):
                X, Y, Z = g[i], g[j], g[l]
                v = (c / 4) * (Y @ Z * X - X @ Z * Y + (J @ Y) @ Z * (J @ X) - (J @ X) @ Z * (J @ Y)
                               + 2 * (X @ (J @ Y)) * (J @ Z))
                R[i, j, :, l] = v
    return R


@dataclass
class CircleBundle:
    m: int
    base_S: float
    ricci: np.ndarray              # from the Christoffel relations over the base
    ricci_formula: np.ndarray      # closed form
    curvature: fg.CurvatureData    # full tensor of the total space
    christoffel: np.ndarray


def circle_bundle_curvature(m: int, S: float, omega: np.ndarray | None = None) -> CircleBundle:
    """Sasakian total space over a Kaehler-Einstein base with constant holomorphic curvature."""
    if S == 0:
        raise ValueError("the base needs nonzero scalar curvature")
    n = 2 * m + 1
    omega = kahler_form(m) if omega is None else np.asarray(omega, float)
    c = S / (m * (m + 1))
    RN = complex_space_form(m, c)
    RicN = np.einsum("ujul->jl", RN)
    ric = np.zeros((n, n))
    ric[: 2 * m, : 2 * m] = RicN - 2 * omega.T @ omega
    ric[n - 1, n - 1] = float(np.sum(omega * omega))
    formula = (S / (2 * m) - 2) * np.eye(n)
    formula[n - 1, n - 1] += 2 * m + 2 - S / (2 * m)
    # Christoffel symbols at a base point with normal frame: only the Omega terms survive
    G = np.zeros((n, n, n))
    z = n - 1
    for u in range(2 * m):
        for v in range(2 * m):
            G[u, z, v] = G[z, u, v] = G[u, v, z] = -omega[u, v]
    # the total space is a Sasakian space form with phi-sectional curvature c - 3
    R = sasakian_space_form(m, c - 3)
    return CircleBundle(m, S, ric, formula, curvature_from_tensor(R), G)


def circle_bundle_wk_scalar(m: int) -> float:
    return 2 * m * m / (m - 1)


# ---------------------------------------------------------------- flat connection

def flat_curvature_matrices(a, b, curv: fg.CurvatureData, rep: CliffordRep, phi=None) -> np.ndarray:
    """R-bar(E_u, E_v) for nabla-bar = nabla - a X - b eta(X) xi, from curvature data."""
    n = curv.n
    m = n // 2
    phi = standard_phi(m) if phi is None else np.asarray(phi, float)
    z = n - 1
    Xi = rep.gens[z]
    out = np.zeros((n, n, rep.dim, rep.dim), complex)
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            X, Y = rep.gens[u], rep.gens[v]
            M = -0.5 * two_form_action(rep, curv.R[:, :, u, v])
            M = M + a * a * (X @ Y - Y @ X) - 2 * b * phi[u, v] * Xi
            M = M - 2 * a * b * (u == z) * Y @ Xi + 2 * a * b * (v == z) * X @ Xi
            M = M + b * (v == z) * rep.vec(phi[:, u]) - b * (u == z) * rep.vec(phi[:, v])
            out[u, v] = M
    return out


def flat_curvature_from_structure(a, b, model: fg.FrameModel, rep: CliffordRep, xi=None) -> np.ndarray:
    """R-bar from [M_u, M_v] - C^w_uv M_w with M_u = A_u - a e_u - b eta_u e_xi (left-invariant frames)."""
    C = model.structure_constants
    if C is None:
        raise ValueError("structure route needs constant structure constants")
    n = model.dim
    xi = n - 1 if xi is None else xi
    A = spin_matrices(rep, fg.levi_civita(C))
    M = np.array([A[u] - a * rep.gens[u] for u in range(n)])
    M[xi] -= b * rep.gens[xi]
    out = np.zeros((n, n, rep.dim, rep.dim), complex)
    for u in range(n):
        for v in range(n):
            if u != v:
                out[u, v] = M[u] @ M[v] - M[v] @ M[u] - np.einsum("w,wab->ab", C[:, u, v], M)
    return out


def flat_connection_check(a, b, curv: fg.CurvatureData, rep: CliffordRep,
                          decomposition: SasakianDecomposition | None = None, model=None) -> dict:
    """Norms of R-bar: on all spinors for m = 1, projected to Sigma_0 for m >= 2."""
    Rb = flat_curvature_matrices(a, b, curv, rep)
    n = curv.n
    m = n // 2
    if m == 1 or decomposition is None:
        proj = Rb
    else:
        P = decomposition.projector(0)
        proj = np.einsum("ab,uvbc,cd->uvad", P, Rb, P)
    out = {"formula": float(np.max(np.abs(proj))), "matrices": Rb}
    if m == 1:
        S = curv.S
        out["coefficients"] = (S / 4 - 1 - 2 * a * a + 2 * b, -0.5 + 2 * a * a + 2 * a * b + b)
    if model is not None and model.structure_constants is not None:
        Rs = flat_curvature_from_structure(a, b, model, rep)
        out["structure"] = float(np.max(np.abs(Rs)))
        out["route_agreement"] = float(np.max(np.abs(Rs - Rb)))
    return out
