"""Matrix realization of the real Clifford algebras and Clifford multiplication.

Generators follow the Kronecker construction

    e_j = T x ... x T x g_{alpha(j)} x E x ... x E      (j = 1..2m)
    e_{2m+1} = chirality * i * T x ... x T               (odd n)

with g1 = diag(i, -i), g2 = offdiag(i, i), T = offdiag(-i, i), E = 1.
Indices are 0-based in code: ``rep.gens[0]`` is e_1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations

import numpy as np

G1 = np.array([[1j, 0], [0, -1j]])
G2 = np.array([[0, 1j], [1j, 0]])
T = np.array([[0, -1j], [1j, 0]])
E = np.eye(2, dtype=complex)

EXACT_TOL = 1e-12


class CliffordError(ValueError):
    pass


def _kron_all(factors):
    return reduce(np.kron, factors, np.ones((1, 1), dtype=complex))


@dataclass(frozen=True)
class CliffordRep:
    n: int
    chirality: int
    gens: tuple = field(repr=False)

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def dim(self) -> int:
        return 2 ** self.m

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def vec(self, X) -> np.ndarray:
        """Matrix of Clifford multiplication by the frame vector X."""
        X = np.asarray(X)
        if X.shape != (self.n,):
            raise CliffordError(f"vector of length {self.n} expected, got {X.shape}")
        return np.tensordot(X, np.asarray(self.gens), axes=1)

    def prod(self, *idx) -> np.ndarray:
        """Product e_{i1} ... e_{ik} of generators (0-based indices)."""
        out = self.identity
        for i in idx:
            out = out @ self.gens[i]
        return out


def build_rep(n: int, chirality: int = -1) -> CliffordRep:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise CliffordError(f"invalid dimension {n!r}; need n >= 2")
    if chirality not in (1, -1):
        raise CliffordError("chirality must be +1 or -1")
    m = n // 2
    gens = []
    for j in range(1, 2 * m + 1):
        t = (j - 1) // 2
        g = G1 if j % 2 == 1 else G2
        gens.append(_kron_all([T] * t + [g] + [E] * (m - t - 1)))
    if n % 2 == 1:
        gens.append(chirality * 1j * _kron_all([T] * m))
    gens = tuple(np.ascontiguousarray(g) for g in gens)
    for g in gens:
        g.setflags(write=False)
    return CliffordRep(int(n), int(chirality), gens)


@dataclass(frozen=True)
class FrameForm:
    """A k-form at a point, coefficients keyed by strictly increasing 0-based index tuples."""

    degree: int
    coeffs: dict

    def __post_init__(self):
        for idx in self.coeffs:
            if len(idx) != self.degree:
                raise CliffordError(f"index tuple {idx} does not have length {self.degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise CliffordError(f"index tuple {idx} is not strictly increasing")

    @classmethod
    def from_antisymmetric(cls, A: np.ndarray) -> "FrameForm":
        """2-form with coefficients A[i, j] for i < j."""
        n = A.shape[0]
        return cls(2, {(i, j): A[i, j] for i in range(n) for j in range(i + 1, n)})


def vector_action(rep: CliffordRep, X, psi) -> np.ndarray:
    psi = np.asarray(psi)
    if psi.shape[0] != rep.dim:
        raise CliffordError(f"spinor of dimension {rep.dim} expected, got {psi.shape[0]}")
    return rep.vec(X) @ psi


def form_matrix(rep: CliffordRep, omega: FrameForm) -> np.ndarray:
    if omega.degree > rep.n:
        raise CliffordError(f"degree {omega.degree} exceeds dimension {rep.n}")
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for idx, c in omega.coeffs.items():
        if idx and idx[-1] >= rep.n:
            raise CliffordError(f"index {idx[-1]} out of range for n={rep.n}")
        out = out + c * rep.prod(*idx)
    return out


def form_action(rep: CliffordRep, omega: FrameForm, psi) -> np.ndarray:
    psi = np.asarray(psi)
    if psi.shape[0] != rep.dim:
        raise CliffordError(f"spinor of dimension {rep.dim} expected, got {psi.shape[0]}")
    return form_matrix(rep, omega) @ psi


def two_form_matrix(rep: CliffordRep, A: np.ndarray) -> np.ndarray:
    """Clifford action of sum_{i<j} A[i,j] e_i e_j."""
    return form_matrix(rep, FrameForm.from_antisymmetric(np.asarray(A)))


def volume_element(rep: CliffordRep) -> np.ndarray:
    return rep.prod(*range(rep.n))


def chirality_projectors(rep: CliffordRep):
    if rep.n % 2:
        raise CliffordError("chirality split needs even dimension")
    p = rep.n // 2
    mu = volume_element(rep) / (1j ** p)
    return 0.5 * (rep.identity + mu), 0.5 * (rep.identity - mu)


def chirality_split(rep: CliffordRep, psi):
    Pp, Pm = chirality_projectors(rep)
    psi = np.asarray(psi)
    return Pp @ psi, Pm @ psi


def herm(a, b) -> complex:
    """Hermitian product <a, b>, linear in the first slot."""
    return complex(np.vdot(b, a))


def real_inner(a, b) -> float:
    return float(np.real(np.vdot(b, a)))


def cross_3d(X, Y) -> np.ndarray:
    X = np.asarray(X)
    Y = np.asarray(Y)
    return np.array([
        X[1] * Y[2] - X[2] * Y[1],
        X[2] * Y[0] - X[0] * Y[2],
        X[0] * Y[1] - X[1] * Y[0],
    ])


def cross_orientation(rep: CliffordRep) -> int:
    """Sign s with X.Y.psi = -g(X,Y) psi - s (X x Y).psi for this representation.

    The literal identity (s = +1) holds for the representation with
    e1 e2 = -e3, i.e. chirality +1.
    """
    if rep.n != 3:
        raise CliffordError("cross product identity is three-dimensional")
    return rep.chirality


def cross_identity_residual(rep: CliffordRep, X, Y, psi, orientation: int | None = None) -> float:
    s = cross_orientation(rep) if orientation is None else orientation
    lhs = rep.vec(X) @ rep.vec(Y) @ psi
    rhs = -np.dot(X, Y) * psi - s * (rep.vec(cross_3d(X, Y)) @ psi)
    return float(np.max(np.abs(lhs - rhs)))


def clifford_identity_residuals(rep: CliffordRep, rng=None, trials: int = 4) -> dict:
    """Residuals of the defining relations and inner-product identities."""
    rng = np.random.default_rng(0) if rng is None else rng
    n, I = rep.n, rep.identity
    anti = sq = skew = 0.0
    for i in range(n):
        gi = rep.gens[i]
        sq = max(sq, np.max(np.abs(gi @ gi + I)))
        skew = max(skew, np.max(np.abs(gi.conj().T + gi)))
        for j in range(i + 1, n):
            gj = rep.gens[j]
            anti = max(anti, np.max(np.abs(gi @ gj + gj @ gi)))
    form = norm_id = orth = 0.0
    for _ in range(trials):
        p1 = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
        p2 = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
        for k in range(1, n + 1):
            idx = list(combinations(range(n), k))
            pick = [idx[t] for t in rng.choice(len(idx), size=min(len(idx), 6), replace=False)]
            w = FrameForm(k, {t: rng.normal() for t in pick})
            W = form_matrix(rep, w)
            sign = (-1) ** (k * (k + 1) // 2)
            form = max(form, abs(herm(W @ p1, p2) - sign * herm(p1, W @ p2)))
        X, Y, Z = rng.normal(size=(3, n))
        norm_id = max(norm_id, abs(real_inner(rep.vec(X) @ p1, rep.vec(Y) @ p1)
                                   - np.dot(X, Y) * real_inner(p1, p1)))
        orth = max(orth, abs(real_inner(rep.vec(Z) @ p1, p1)))
    return {
        "anticommutation": float(anti),
        "square": float(sq),
        "skew_hermitian": float(skew),
        "form_transpose": float(form),
        "vector_norm": float(norm_id),
        "vector_orthogonal": float(orth),
    }
