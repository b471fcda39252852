"""Explicit spinor fields on catalog models."""
from __future__ import annotations

import numpy as np
import sympy as sp
from scipy.linalg import expm

from . import frame_geometry as fg
from .clifford import CliffordRep, build_rep
from .spin_connection import SpinorError, SpinorField, spin_matrices


def unit_spinor(dim: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def constant_spinor(psi0, chirality: int, kind="generic", params=None, name="constant") -> SpinorField:
    psi0 = np.asarray(psi0, dtype=complex)

    def derivs(x):
        return np.zeros((len(x), len(psi0)), dtype=complex)

    return SpinorField(name, lambda x: psi0.copy(), chirality, kind, dict(params or {}), derivs)


def symbolic_spinor(model: fg.FrameModel, components, chirality: int, kind="generic",
                    params=None, name="symbolic") -> SpinorField:
    """Spinor field from sympy expressions in the model coordinates; derivatives are exact."""
    comps = [sp.sympify(c) for c in components]
    X = model.coords
    f = sp.lambdify([X], comps, "numpy")
    J = sp.lambdify([X], [[sp.diff(c, a) for a in X] for c in comps], "numpy")

    def evaluate(x):
        return np.array(f(x), dtype=complex)

    def derivs(x):
        jac = np.array(J(x), dtype=complex)          # jac[c, a] = d_a psi_c
        return model.frame(x) @ jac.T

    return SpinorField(name, evaluate, chirality, kind, dict(params or {}), derivs)


# ---------------------------------------------------------------- invariant fields on Lie groups

def lie_generators(model: fg.FrameModel, rep: CliffordRep, a: float, b: float, xi: int | None = None):
    """B_k = a e_k + b eta(E_k) e_xi - A_k, so that E_k psi = B_k psi solves the quasi-Killing equation."""
    if model.structure_constants is None:
        raise SpinorError(f"{model.name} has no constant structure constants")
    n = model.dim
    xi = n - 1 if xi is None else xi
    G = fg.levi_civita(model.structure_constants)
    A = spin_matrices(rep, G)
    B = np.array([a * rep.gens[k] - A[k] for k in range(n)])
    B[xi] += b * rep.gens[xi]
    return B


def integrability_defect(C: np.ndarray, B: np.ndarray) -> float:
    """max |[B_k, B_l] + sum_w C^w_kl B_w|; zero iff E_k psi = B_k psi is solvable."""
    n = B.shape[0]
    worst = 0.0
    for k in range(n):
        for l in range(k + 1, n):
            M = B[k] @ B[l] - B[l] @ B[k] + np.einsum("w,wab->ab", C[:, k, l], B)
            worst = max(worst, float(np.max(np.abs(M))))
    return worst


def invariant_spinor(model: fg.FrameModel, rep: CliffordRep, B: np.ndarray, psi0,
                     kind="generic", params=None, name="invariant", tol=1e-10) -> SpinorField:
    """psi(g) = pi(g^{-1}) psi0 for the representation with d pi(E_k) = -B_k.

    In coordinates of the second kind this is
    expm(x_n B^X_n) ... expm(x_1 B^X_1) psi0 with B^X_v = sum_u Sinv[v,u] B_u,
    and the frame derivatives are exactly E_k psi = B_k psi.
    """
    if model.lie is None:
        raise SpinorError(f"{model.name} is not presented in a Lie chart")
    defect = integrability_defect(model.structure_constants, B)
    if defect > tol:
        raise SpinorError(f"generators are not a representation (defect {defect:.3e})")
    Sinv = np.linalg.inv(np.asarray(model.lie[1], float))
    BX = np.einsum("vu,uab->vab", Sinv, B)
    psi0 = np.asarray(psi0, dtype=complex)

    def evaluate(x):
        out = psi0
        for v in range(model.dim):
            out = expm(x[v] * BX[v]) @ out
        return out

    def derivs(x):
        p = evaluate(x)
        return np.einsum("kab,b->ka", B, p)

    info = dict(params or {})
    info["integrability_defect"] = defect
    return SpinorField(name, evaluate, rep.chirality, kind, info, derivs)


def quasi_killing_spinor(model, rep, a, b, psi0=None, xi=None, name=None) -> SpinorField:
    B = lie_generators(model, rep, a, b, xi)
    psi0 = unit_spinor(rep.dim) if psi0 is None else psi0
    return invariant_spinor(model, rep, B, psi0, kind="quasi_killing", params={"a": a, "b": b},
                            name=name or f"quasi_killing({a:.6g},{b:.6g})")


# ---------------------------------------------------------------- specific catalog fields

def round_s3_constant(chirality: int, psi0=None) -> tuple[SpinorField, float]:
    """Constant spinor on round S^3; returns the field and its Killing number."""
    psi0 = unit_spinor(2) if psi0 is None else psi0
    b = -0.5 * chirality
    return (constant_spinor(psi0, chirality, kind="killing", params={"b": b}, name="s3_constant"), b)


def sol_ansatz(lam: float, psi0=None) -> SpinorField:
    """psi(z) = exp(lam z E_3) psi0 on Sol, in the representation with E_1 E_2 = E_3."""
    rep = build_rep(3, -1)
    e3 = rep.gens[2]
    psi0 = unit_spinor(2) if psi0 is None else np.asarray(psi0, complex)

    def evaluate(x):
        return expm(lam * x[2] * e3) @ psi0

    def derivs(x):
        p = evaluate(x)
        return np.array([np.zeros(2), np.zeros(2), lam * e3 @ p], dtype=complex)

    return SpinorField("sol_ansatz", evaluate, -1, "eigenspinor", {"lam": -lam}, derivs)


def conformal_wk_spinor(model: fg.FrameModel, sign: int = 1, rho: complex = 1.0) -> SpinorField:
    """The closed-form WK-spinor (u(z), v(z)) on R^3 with metric exp(-2cz) g."""
    c = sp.nsimplify(model.params["c"])
    z = model.coords[2]
    w = sp.exp(-c * z)
    r = sp.nsimplify(rho)
    u = r * sp.exp(c * z) * (sp.sin(w) + sp.I * sp.cos(w))
    v = sign * r * sp.exp(c * z) * (sp.cos(w) - sp.I * sp.sin(w))
    lam = sign * float(c)
    return symbolic_spinor(model, [u, v], 1, kind="wk", params={"lam": lam, "sign": sign},
                           name=f"conformal_wk({sign:+d})")


def sphere_killing_spinor(model: fg.FrameModel, rep: CliffordRep, sign: int = 1, psi0=None) -> SpinorField:
    """Killing spinor (1 + |x|^2)^(-1/2) (1 + sign x.e) psi0 in the stereographic chart.

    The Killing number is sign / (2 radius) in either chirality.
    """
    k = model.dim
    R = model.params.get("radius", 1.0)
    psi0 = unit_spinor(rep.dim) if psi0 is None else np.asarray(psi0, complex)
    X = model.coords
    r2 = sum(c**2 for c in X)
    M = sp.eye(rep.dim) + sign * sum((X[a] * sp.Matrix(rep.gens[a]) for a in range(k)), sp.zeros(rep.dim))
    vec = (M * sp.Matrix(psi0.tolist())) / sp.sqrt(1 + r2)
    return symbolic_spinor(model, list(vec), rep.chirality, kind="killing",
                           params={"b": sign / (2 * R)}, name=f"sphere_killing({sign:+d})")
