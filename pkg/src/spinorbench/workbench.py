"""Verification suites and machine-readable reports.

A suite is a function from a :class:`SuiteConfig` to a list of
:class:`CheckRecord`.  Every record names the statement it checks in its
``anchor`` and carries one of four verdicts; only ``fail`` makes a run fail.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import __version__
from . import contact_sasakian as cs
from . import frame_geometry as fg
from . import integrability as ig
from . import products as pr
from . import spin_connection as scn
from . import spinor_catalog as cat
from .clifford import build_rep, clifford_identity_residuals, cross_identity_residual

VERDICTS = ("pass", "fail", "not-applicable", "paper-discrepancy")
SUITES = ("clifford", "curvature", "sasakian", "wk", "einstein-dirac", "products", "table-3d")
FORMATS = ("json", "text")

TOLERANCES = {
    "algebra": 1e-12,
    "decomposition": 1e-10,
    "printed_ricci": 1e-8,
    "fd_agreement": 1e-6,
    "symmetry": 1e-8,
    "sasakian": 1e-10,
    "first_order": 1e-8,
    "wk": 1e-6,
    "scalar": 1e-9,
    "bound": 1e-6,
    "second_order": 1e-4,
    "divergence": 1e-5,
    "einstein": 1e-6,
    "trace": 1e-8,
    "product_algebra": 1e-13,
    "product_dirac": 1e-5,
    "ratio": 1e-12,
    "consistency": 1e-10,
    "flat": 1e-10,
    "flat_perturbed": 1e-3,
    "bundle": 1e-12,
}

DEFAULT_PARAMS = {
    "c": [0.5, 1.0, 2.0],                     # conformal factor exp(-2cz) on R^3
    "a": [0.3, 1.0, 2.0],                     # deformations of SL(2,R)
    "a2": None,                               # squared deformation of S^3; None = both thresholds
    "b": 0.01,                                # perturbation of the flat-connection type
    "lam": 0.7,                               # exponent of the Sol ansatz used in the Dirac checks
    "r": [2, 3, 5, 6, 8],                     # fibre dimensions for the product algebra
}

PRINTED_RICCI = {
    "sol": [0.0, 0.0, -2.0],
    "sl2r": [-6.0, -6.0, 2.0],
    "nil": [-2.0, -2.0, 0.0],
}

CURVATURE_MODELS = (
    ("euclidean3", {}), ("round_s3", {}), ("sl2r", {}), ("nil", {}), ("sol", {}), ("h3", {}),
    ("s2xr1", {}), ("h2xr1", {}), ("e2_geometry", {}), ("conformal_flat_r3", {"c": 1.0}),
    ("deformed_sasakian_s3", {"a": 0.8}), ("deformed_sasakian_sl2r", {"a": 0.8}),
    ("flat_torus", {"q": 3}), ("round_sphere_chart", {"k": 3}), ("product:s2xs3", {}),
)

NO_WK_ROWS = ("s2xr1", "h2xr1", "sl2r", "nil", "sol", "e2_geometry")
TABLE_LABELS = {
    "euclidean3": "E^3", "h3": "H^3", "round_s3": "S^3", "s2xr1": "S^2 x R^1", "h2xr1": "H^2 x R^1",
    "sl2r": "SL(2,R)~", "nil": "Nil", "sol": "Sol", "e2_geometry": "E(2)",
}


class ConfigError(ValueError):
    """Invalid configuration; the command line maps it to exit code 2."""


# ---------------------------------------------------------------- configuration and records

@dataclass
class SuiteConfig:
    suite: str = "all"
    model: str | None = None
    tol: dict = field(default_factory=dict)
    fd_step: float = fg.FD_STEP
    samples: int = 100
    seed: int = 0
    out: str | None = None
    format: str = "json"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from all, {', '.join(SUITES)}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        for k, v in self.tol.items():
            if k not in TOLERANCES:
                raise ConfigError(f"unknown tolerance {k!r}")
            if not (isinstance(v, (int, float)) and v > 0):
                raise ConfigError(f"tolerance {k!r} must be positive")
        for key, kind in (("seed", int), ("samples", int), ("fd_step", (int, float))):
            val = getattr(self, key)
            if isinstance(val, bool) or not isinstance(val, kind):
                raise ConfigError(f"{key} must be a number, got {val!r}")
        if not self.fd_step > 0:
            raise ConfigError("fd_step must be positive")
        if int(self.samples) < 1:
            raise ConfigError("samples must be at least 1")
        unknown = set(self.params) - set(DEFAULT_PARAMS)
        if unknown:
            raise ConfigError(f"unknown parameters {sorted(unknown)}")

    @classmethod
    def from_mapping(cls, data: dict) -> "SuiteConfig":
        known = {"suite", "model", "tol", "fd_step", "samples", "seed", "out", "format", "params"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        try:
            return cls(**{k: v for k, v in data.items() if v is not None})
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def tolerance(self, key: str) -> float:
        return float(self.tol.get(key, TOLERANCES[key]))

    def param(self, key: str):
        return self.params.get(key, DEFAULT_PARAMS[key])

    @property
    def second_order_points(self) -> int:
        return max(1, math.ceil(int(self.samples) / 25))

    def wants(self, name: str) -> bool:
        return self.model is None or self.model == name

    def echo(self) -> dict:
        return {"suite": self.suite, "model": self.model,
                "tol": {k: self.tolerance(k) for k in TOLERANCES},
                "fd_step": self.fd_step, "samples": int(self.samples), "seed": int(self.seed),
                "format": self.format,
                "params": {k: self.param(k) for k in DEFAULT_PARAMS}}


@dataclass
class CheckRecord:
    id: str
    anchor: str
    inputs: dict
    values: dict
    verdict: str
    notes: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"invalid verdict {self.verdict!r}")
        if not self.anchor:
            raise ValueError("every check needs an anchor")

    def to_dict(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "inputs": _clean(self.inputs),
                "values": _clean(self.values), "verdict": self.verdict, "notes": self.notes}


@dataclass
class Report:
    version: str
    config: dict
    checks: list

    @property
    def summary(self) -> dict:
        counts = {v: 0 for v in VERDICTS}
        for c in self.checks:
            counts[c.verdict] += 1
        counts["total"] = len(self.checks)
        return counts

    @property
    def exit_code(self) -> int:
        return 1 if self.summary["fail"] else 0

    def to_dict(self) -> dict:
        return {"version": self.version, "config": _clean(self.config),
                "checks": [c.to_dict() for c in self.checks], "summary": self.summary}


def _clean(v):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return _clean(v.tolist())
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else str(f)
    if isinstance(v, complex):
        return [_clean(v.real), _clean(v.imag)]
    return v


def _below(value, tol) -> str:
    return "pass" if value is not None and value < tol else "fail"


def _rec(cid, anchor, inputs, values, verdict, notes=""):
    return CheckRecord(cid, anchor, inputs, values, verdict, notes)


def resolve_model(name: str, **params) -> fg.FrameModel:
    if name.startswith("product:"):
        return pr.product_catalog(name)
    return fg.catalog(name, **params)


def _points(model, cfg: SuiteConfig, count=None, margin=0.1):
    return model.sample(int(count or cfg.samples), seed=int(cfg.seed), margin=margin)


# ---------------------------------------------------------------- clifford

def suite_clifford(cfg: SuiteConfig) -> list:
    tol = cfg.tolerance("algebra")
    out = []
    for n in range(2, 10):
        for chi in (1, -1):
            if n % 2 == 0 and chi == 1:
                continue
            rep = build_rep(n, chi)
            res = clifford_identity_residuals(rep, np.random.default_rng(cfg.seed))
            out.append(_rec(f"clifford.relations.n{n}" + ("" if n % 2 == 0 else f".chi{chi:+d}"),
                            "Clifford relations, form transposition and spinor inner-product identities",
                            {"n": n, "chirality": chi}, res, _below(max(res.values()), tol)))
    rng = np.random.default_rng(cfg.seed)
    for chi in (1, -1):
        rep = build_rep(3, chi)
        worst = 0.0
        for _ in range(5):
            X, Y = rng.normal(size=(2, 3))
            p = rng.normal(size=2) + 1j * rng.normal(size=2)
            worst = max(worst, cross_identity_residual(rep, X, Y, p))
        out.append(_rec(f"clifford.cross_product.chi{chi:+d}",
                        "three-dimensional Clifford products through the cross product",
                        {"chirality": chi}, {"residual": worst}, _below(worst, tol),
                        "X.Y = -g(X,Y) - chi (X x Y); the sign follows the chirality"))
    return out


# ---------------------------------------------------------------- curvature

def _curvature_record(name, params, cfg):
    model = resolve_model(name, **params)
    pts = _points(model, cfg, 3, margin=0.15)
    agree = sym = 0.0
    for x in pts:
        a = fg.curvature(model, x, "closed", derivatives=False, h=cfg.fd_step)
        b = fg.curvature(model, x, "fd", derivatives=False, h=cfg.fd_step)
        agree = max(agree, float(np.max(np.abs(a.R - b.R))) / (1 + float(np.max(np.abs(a.R)))))
        sym = max(sym, max(a.symmetry_residuals().values()))
    tag = name + "".join(f".{k}{v:g}" for k, v in params.items())
    return [
        _rec(f"curvature.{tag}.closed_vs_fd", "curvature tensor from two independent commutator paths",
             {"model": name, **params, "points": len(pts)}, {"relative_difference": agree},
             _below(agree, cfg.tolerance("fd_agreement"))),
        _rec(f"curvature.{tag}.symmetries", "curvature symmetries, first Bianchi identity and Ricci traces",
             {"model": name, **params}, {"max_residual": sym}, _below(sym, cfg.tolerance("symmetry"))),
    ]


def _printed_ricci_record(name, cfg):
    model = fg.catalog(name)
    x = _points(model, cfg, 1, margin=0.2)[0]
    closed = fg.curvature(model, x, "closed", derivatives=False).Ric
    fd = fg.curvature(model, x, "fd", derivatives=False, h=cfg.fd_step).Ric
    printed = np.diag(PRINTED_RICCI[name])
    tol = cfg.tolerance("printed_ricci")
    routes = float(np.max(np.abs(closed - fd)))
    gap = float(np.max(np.abs(closed - printed)))
    values = {"oracle": np.diag(closed), "printed": PRINTED_RICCI[name], "difference": gap,
              "route_agreement": routes, "off_diagonal": float(np.max(np.abs(closed - np.diag(np.diag(closed)))))}
    if routes > cfg.tolerance("fd_agreement"):
        verdict, note = "fail", "closed and finite-difference Ricci disagree"
    elif gap < tol:
        verdict, note = "pass", ""
    else:
        verdict = "paper-discrepancy"
        note = (f"printed Ricci {PRINTED_RICCI[name]} vs oracle {np.round(np.diag(closed), 12).tolist()}; "
                "both curvature routes agree with the oracle")
    return _rec(f"curvature.{name}.printed_ricci", f"printed Ricci tensor of the {name} example",
                {"model": name, "point": x}, values, verdict, note)


def suite_curvature(cfg: SuiteConfig) -> list:
    out = []
    for name in PRINTED_RICCI:
        if cfg.wants(name):
            out.append(_printed_ricci_record(name, cfg))
    for name, params in CURVATURE_MODELS:
        if cfg.wants(name):
            out.extend(_curvature_record(name, params, cfg))
    return out


# ---------------------------------------------------------------- sasakian

def _golden_a2():
    return [(3 + np.sqrt(5)) / 8, (3 - np.sqrt(5)) / 8]


def suite_sasakian(cfg: SuiteConfig) -> list:
    out = []
    tol = cfg.tolerance("decomposition")
    for m in range(1, 5):
        rep = cs.sasakian_rep(m)
        dec = cs.decompose(rep)
        want_dims = [comb(m, r) for r in range(m + 1)]
        spec_gap = max(abs(complex(e) - complex(0, 2 * r - m)) for r, e in enumerate(dec.eigenvalues))
        ok = dec.dims == want_dims and spec_gap < tol and max(dec.residuals.values()) < tol
        out.append(_rec(f"sasakian.decomposition.m{m}", "eigen-splitting of the fundamental 2-form on spinors",
                        {"m": m}, {"dims": dec.dims, "expected_dims": want_dims,
                                   "eigenvalues_imag": [complex(e).imag for e in dec.eigenvalues],
                                   **dec.residuals}, "pass" if ok else "fail"))
        curv = cs.curvature_from_tensor(cs.sasakian_space_form(m, 1.5))
        alg = cs.check_sasakian_algebra(rep, dec, curv)
        out.append(_rec(f"sasakian.algebra.m{m}", "curvature and Clifford identities of Sasakian manifolds",
                        {"m": m, "phi_sectional": 1.5}, alg, _below(max(alg.values()), cfg.tolerance("algebra"))))
    models = [("round_s3", {}), ("sl2r", {}), ("nil", {}), ("deformed_sasakian_s3", {"a": 0.8}),
              ("deformed_sasakian_sl2r", {"a": 0.8})]
    for name, params in models:
        if not cfg.wants(name):
            continue
        model = fg.catalog(name, **params)
        res = cs.verify_sasakian(cs.AlmostContactStructure.from_model(model), _points(model, cfg, 3))
        vals = {k: v for k, v in res.items() if k != "passed"}
        out.append(_rec(f"sasakian.structure.{name}", "Sasakian condition on the covariant derivative of phi",
                        {"model": name, **params}, vals, _below(res["max"], cfg.tolerance("sasakian"))))
    if cfg.wants("round_s3"):
        st = cs.AlmostContactStructure.from_model(fg.catalog("round_s3"))
        f = cs.deformation_functoriality(st, 0.7, 1.3)
        out.append(_rec("sasakian.deformation.functoriality", "composition of D-homothetic deformations",
                        {"a": 0.7, "a2": 1.3}, {"residual": f}, _below(f, cfg.tolerance("algebra"))))
    if cfg.wants("deformed_sasakian_sl2r"):
        for a in cfg.param("a"):
            model = fg.catalog("deformed_sasakian_sl2r", a=a)
            S = fg.curvature(model, _points(model, cfg, 1)[0], derivatives=False).S
            gap = abs(S - (-8 * a * a - 2))
            out.append(_rec(f"sasakian.deformed_sl2r.scalar.a{a:g}", "scalar curvature of deformed SL(2,R)",
                            {"a": a}, {"S": S, "predicted": -8 * a * a - 2, "difference": gap},
                            _below(gap, cfg.tolerance("scalar"))))
    for m in (2, 3):
        info = cs.wk_criterion(0.5, 0.0, m)
        spin = cs.wk_criterion_spinor_check(0.5, m)
        out.append(_rec(f"sasakian.wk_criterion.m{m}", "quasi-Killing spinors of type (1/2, b) that are WK-spinors",
                        {"m": m}, {"required_b": info["required_b"], "lam": info["lam"], "S": info["S"],
                                   "ricci_consistency": info["ricci_consistency"], "spinor_residual": spin},
                        _below(max(info["ricci_consistency"], spin), cfg.tolerance("algebra"))))
    out.extend(_flat_connection_records(cfg))
    out.extend(_circle_bundle_records(cfg))
    return out


def _flat_connection_records(cfg):
    out = []
    rep = cs.sasakian_rep(1)
    db = float(cfg.param("b"))
    for S in (6.0, 1 + np.sqrt(5), 1 - np.sqrt(5)):
        a = np.sqrt((S + 2) / 8)
        model = fg.catalog("deformed_sasakian_s3", a=a)
        curv = fg.curvature(model, np.zeros(3), derivatives=False)
        for branch, (qa, qb) in cs.three_dim_branches(S).items():
            on = cs.flat_connection_check(qa, qb, curv, rep, model=model)
            off = cs.flat_connection_check(qa, qb + db, curv, rep, model=model)
            vals = {"a": qa, "b": qb, "formula": on["formula"], "structure": on["structure"],
                    "route_agreement": on["route_agreement"], "perturbed_formula": off["formula"],
                    "perturbed_structure": off["structure"]}
            ok = (max(on["formula"], on["structure"]) < cfg.tolerance("flat")
                  and min(off["formula"], off["structure"]) > cfg.tolerance("flat_perturbed"))
            out.append(_rec(f"sasakian.flat_connection.S{S:.6f}.{branch}",
                            "flatness of the quasi-Killing connection on 3D Sasakian manifolds",
                            {"S": S, "branch": branch, "perturbation": db}, vals, "pass" if ok else "fail"))
    return out


def _circle_bundle_records(cfg):
    out = []
    tol = cfg.tolerance("bundle")
    for m, S in ((1, 8.0), (2, 8.0), (3, 9.0)):
        cb = cs.circle_bundle_curvature(m, S)
        routes = [float(np.max(np.abs(cb.ricci - cb.ricci_formula))),
                  float(np.max(np.abs(cb.curvature.Ric - cb.ricci_formula)))]
        out.append(_rec(f"sasakian.circle_bundle.m{m}.S{S:g}", "Ricci tensor of the circle bundle over a Kaehler-Einstein base",
                        {"m": m, "S": S}, {"base_route": routes[0], "tensor_route": routes[1]},
                        _below(max(routes), tol)))
    for m in (2, 3):
        S = cs.circle_bundle_wk_scalar(m)
        cb = cs.circle_bundle_curvature(m, S)
        info = cs.wk_criterion(0.5, 0.0, m)
        n = 2 * m + 1
        target = info["ricci_g"] * np.eye(n)
        target[n - 1, n - 1] += info["ricci_eta"]
        gap = float(np.max(np.abs(cb.ricci_formula - target)))
        out.append(_rec(f"sasakian.circle_bundle.wk_form.m{m}", "circle bundle at the WK scalar curvature",
                        {"m": m, "S": S}, {"difference": gap}, _below(gap, tol)))
    return out


# ---------------------------------------------------------------- wk

def _deformed_s3_records(cfg):
    out = []
    rep = cs.sasakian_rep(1)
    a2s = _golden_a2() if cfg.param("a2") is None else [float(cfg.param("a2"))]
    for a2 in a2s:
        a = float(np.sqrt(a2))
        model = fg.catalog("deformed_sasakian_s3", a=a)
        pts = _points(model, cfg, min(int(cfg.samples), 10))
        curv = fg.curvature(model, pts[0])
        S = curv.S
        tag = f"a2_{a2:.6f}"
        near = min(abs(S - s) for s in ig.GOLDEN_S)
        threshold = min(abs(a2 - t) for t in _golden_a2()) < 1e-12
        out.append(_rec(f"wk.deformed_s3.{tag}.scalar", "scalar curvature of the deformed 3-sphere at the WK thresholds",
                        {"a2": a2}, {"S": S, "predicted": 8 * a2 - 2, "distance_to_golden": near},
                        _below(abs(S - (8 * a2 - 2)) + (near if threshold else 0.0), cfg.tolerance("scalar"))))
        kt = cs.transferred_killing_type(1, a, -0.5)
        psi_t = cat.constant_spinor(cat.unit_spinor(2, cfg.seed), 1, name="transferred")
        r = scn.residual(model, rep, psi_t, scn.EquationSpec.quasi_killing(*kt), pts).max
        out.append(_rec(f"wk.deformed_s3.{tag}.transferred_type",
                        "transferred Killing spinor on a deformed Sasakian manifold is quasi-Killing",
                        {"a2": a2, "type": kt}, {"residual": r}, _below(r, cfg.tolerance("wk"))))
        lams = ig.admissible_wk_numbers(curv, rep)
        if not lams or lams == "all":
            out.append(_rec(f"wk.deformed_s3.{tag}.wk_residual", "WK-spinors on deformed Sasakian 3-spheres",
                            {"a2": a2}, {"admissible": lams}, "not-applicable",
                            "no real WK-number is admissible at this deformation"))
            continue
        lam = float(lams[0])
        br = cs.three_dim_branches(S)
        key = min(br, key=lambda k: abs(cs.qk_dirac_eigenvalue(*br[k], 1) - lam))
        qa, qb = br[key]
        psi = cat.quasi_killing_spinor(model, rep, qa, qb, cat.unit_spinor(2, cfg.seed))
        wk = scn.residual(model, rep, psi, scn.EquationSpec.wk(lam), pts).max
        ident = abs(8 * lam**2 * (S**2 - 2 * curv.ric_norm_sq) - S**3)
        expected = [(2 + np.sqrt(5)) / 2, (2 - np.sqrt(5)) / 2]
        lam_gap = min(abs(lam - e) for e in expected)
        out.append(_rec(f"wk.deformed_s3.{tag}.wk_residual", "WK-spinors on deformed Sasakian 3-spheres",
                        {"a2": a2, "branch": key, "type": (qa, qb)},
                        {"lam": lam, "residual": wk, "lam_distance": lam_gap},
                        _below(max(wk, lam_gap if threshold else 0.0), cfg.tolerance("wk"))))
        out.append(_rec(f"wk.deformed_s3.{tag}.scalar_identity",
                        "3D identity 8 lam^2 (S^2 - 2|Ric|^2) = S^3 for WK-spinors",
                        {"a2": a2, "lam": lam}, {"residual": ident}, _below(ident, cfg.tolerance("scalar"))))
        cross = ig.cross_product_identities(curv, lam)
        out.append(_rec(f"wk.deformed_s3.{tag}.cross_identities",
                        "cross-product form of the 3D integrability conditions",
                        {"a2": a2, "lam": lam}, cross, _below(max(cross.values()), cfg.tolerance("scalar"))))
        uv = ig.wk_to_unit_vector(scn.SpinGeometry(model, rep, h=cfg.fd_step), psi, pts[0], lam)
        vals = {"eigen_residual": uv["eigen_residual"], "derivative_residual": uv["derivative_residual"],
                "coefficient": uv["coefficient"], "two_abs_lam": 2 * abs(lam)}
        worst = max(uv["eigen_residual"], uv["derivative_residual"] or 0.0, abs(uv["coefficient"] - 2 * abs(lam)))
        out.append(_rec(f"wk.deformed_s3.{tag}.unit_vector", "unit vector field of a 3D WK-spinor",
                        {"a2": a2, "lam": lam}, vals, _below(worst, cfg.tolerance("wk"))))
    return out


def suite_wk(cfg: SuiteConfig) -> list:
    out = []
    if cfg.wants("round_s3"):
        model = fg.catalog("round_s3")
        pts = _points(model, cfg, min(int(cfg.samples), 10))
        for chi in (1, -1):
            rep = build_rep(3, chi)
            psi, b = cat.round_s3_constant(chi, cat.unit_spinor(2, cfg.seed))
            for a in (-0.5, 0.5):
                r = scn.residual(model, rep, psi, scn.EquationSpec.quasi_killing(a, 0.0), pts).max
                verdict = _below(r, cfg.tolerance("first_order")) if a == b else "not-applicable"
                note = "" if a == b else f"constant spinors in chirality {chi:+d} have Killing number {b:+g}"
                out.append(_rec(f"wk.round_s3.chi{chi:+d}.quasi_killing_{a:+g}",
                                "constant spinors on the round 3-sphere are Killing spinors",
                                {"chirality": chi, "a": a, "b": 0.0}, {"residual": r}, verdict, note))
            geo = scn.SpinGeometry(model, rep, h=cfg.fd_step)
            lam = -3 * b
            d = scn.residual(model, rep, psi, scn.EquationSpec.eigenspinor(lam), pts).max
            bound = ig.eigenvalue_bound(geo, psi, pts[0], lam)
            low = ig.dirac_lower_bound(3, 6.0)
            vals = {"lam": lam, "dirac_residual": d, "slack": bound["slack"], "lower_bound": low,
                    "lower_bound_slack": lam**2 - low}
            ok = d < cfg.tolerance("first_order") and abs(bound["slack"]) < cfg.tolerance("bound") \
                and abs(lam**2 - low) < cfg.tolerance("bound")
            out.append(_rec(f"wk.round_s3.chi{chi:+d}.eigenvalue_bound",
                            "Dirac eigenvalue of Killing spinors attains the lower eigenvalue bound",
                            {"chirality": chi}, vals, "pass" if ok else "fail"))
    if cfg.wants("deformed_sasakian_s3"):
        out.extend(_deformed_s3_records(cfg))
    if cfg.wants("conformal_flat_r3"):
        rep = build_rep(3, 1)
        for c in cfg.param("c"):
            model = fg.catalog("conformal_flat_r3", c=c)
            pts = _points(model, cfg)
            for sign in (1, -1):
                psi = cat.conformal_wk_spinor(model, sign)
                r = scn.residual(model, rep, psi, scn.EquationSpec.wk(sign * c), pts).max
                out.append(_rec(f"wk.conformal_r3.c{c:g}.sign{sign:+d}",
                                "explicit WK-spinor on conformally flat R^3",
                                {"c": c, "lam": sign * c, "points": len(pts)}, {"residual": r},
                                _below(r, cfg.tolerance("wk"))))
            curv = fg.curvature(model, pts[0])
            ident = ig.wk_integrability_check(curv, rep, cat.conformal_wk_spinor(model, 1)(pts[0]), c)
            vals = {k: v for k, v in ident.items() if v is not None}
            out.append(_rec(f"wk.conformal_r3.c{c:g}.integrability",
                            "integrability identities of WK-spinors",
                            {"c": c}, vals, _below(max(vals.values()), 1e-3),
                            "the finite-difference Hessian of S limits the precision"))
    return out


# ---------------------------------------------------------------- einstein-dirac

def _catalog_spinors(cfg):
    yield "round_s3", fg.catalog("round_s3"), build_rep(3, 1), cat.round_s3_constant(1, cat.unit_spinor(2, cfg.seed))[0], 1.5
    lam = float(cfg.param("lam"))
    yield "sol", fg.catalog("sol"), build_rep(3, -1), cat.sol_ansatz(lam, cat.unit_spinor(2, cfg.seed)), None
    model = fg.catalog("conformal_flat_r3", c=1.0)
    yield "conformal_flat_r3", model, build_rep(3, 1), cat.conformal_wk_spinor(model, 1), 1.0


def suite_einstein_dirac(cfg: SuiteConfig) -> list:
    out = []
    tol2 = cfg.tolerance("second_order")
    for name, model, rep, psi, lam in _catalog_spinors(cfg):
        if not cfg.wants(name):
            continue
        geo = scn.SpinGeometry(model, rep, h=cfg.fd_step)
        pts = _points(model, cfg, cfg.second_order_points, margin=0.2)
        lich = half = act = div = 0.0
        for x in pts:
            lich = max(lich, scn.lichnerowicz_residual(model, rep, psi, x))
            scale = 1 + float(np.linalg.norm(psi(x)))
            half = max(half, max(float(np.linalg.norm(scn.half_ricci_check(model, rep, psi, k, x)))
                                 for k in range(model.dim)) / scale)
            act = max(act, scn.curvature_action_residual(model, rep, psi, x))
            div = max(div, float(np.max(np.abs(geo.divergence_direct(psi, x) - geo.divergence_formula(psi, x))))
                      / scale**2)
        out.append(_rec(f"einstein.{name}.lichnerowicz", "Schroedinger-Lichnerowicz formula",
                        {"model": name, "points": len(pts)}, {"residual": lich}, _below(lich, tol2)))
        out.append(_rec(f"einstein.{name}.half_ricci", "commutator of D and nabla gives half the Ricci action",
                        {"model": name, "points": len(pts)}, {"residual": half}, _below(half, tol2)))
        out.append(_rec(f"einstein.{name}.curvature_action", "spinorial curvature through the Riemann tensor",
                        {"model": name, "points": len(pts)}, {"residual": act}, _below(act, tol2)))
        out.append(_rec(f"einstein.{name}.divergence", "divergence of the energy-momentum tensor",
                        {"model": name, "points": len(pts)}, {"residual": div}, _below(div, cfg.tolerance("divergence"))))
        if lam is not None:
            dd = max(float(np.max(np.abs(geo.divergence_direct(psi, x)))) for x in pts)
            out.append(_rec(f"einstein.{name}.divergence_free", "eigenspinors have divergence-free energy-momentum",
                            {"model": name, "lam": lam}, {"divergence": dd}, _below(dd, cfg.tolerance("divergence"))))
    if cfg.wants("round_s3"):
        model = fg.catalog("round_s3")
        pts = _points(model, cfg, min(int(cfg.samples), 10))
        for chi in (1, -1):
            rep = build_rep(3, chi)
            psi, b = cat.round_s3_constant(chi, cat.unit_spinor(2, cfg.seed))
            phi = ig.killing_to_einstein(psi, b, 3)
            spec = scn.EquationSpec.einstein_dirac(phi.params["lam"], phi.params["eps"])
            r = scn.residual(model, rep, phi, spec, pts)
            trace = 0.0
            for x in pts:
                S = fg.curvature(model, x, derivatives=False).S
                p = phi(x)
                trace = max(trace, abs(S + spec.params["eps"] * spec.params["lam"] / (3 - 2)
                                       * float(np.vdot(p, p).real)) / (1 + abs(S)))
            comp = r.extra["components"]
            ok = comp["einstein"] < cfg.tolerance("einstein") and r.max < cfg.tolerance("einstein") \
                and trace < cfg.tolerance("trace")
            out.append(_rec(f"einstein.round_s3.chi{chi:+d}.killing_normalization",
                            "normalised Killing spinors are Einstein spinors",
                            {"chirality": chi, "b": b, "lam": spec.params["lam"], "eps": spec.params["eps"]},
                            {**comp, "trace": trace}, "pass" if ok else "fail"))
    if cfg.wants("conformal_flat_r3"):
        rep = build_rep(3, 1)
        for c in cfg.param("c"):
            model = fg.catalog("conformal_flat_r3", c=c)
            psi = cat.conformal_wk_spinor(model, 1)
            pts = _points(model, cfg, min(int(cfg.samples), 6), margin=0.2)
            info = ig.einstein_normalization(scn.SpinGeometry(model, rep, h=cfg.fd_step), psi, c, pts)
            vals = {k: info[k] for k in ("ratio_spread", "eps", "einstein_residual", "trace_residual")}
            ok = info["ratio_spread"] < cfg.tolerance("einstein") and info["einstein_residual"] < cfg.tolerance("einstein") \
                and info["trace_residual"] < cfg.tolerance("trace")
            out.append(_rec(f"einstein.conformal_r3.c{c:g}.wk_normalization",
                            "WK-spinors with |psi|^2 proportional to S are Einstein spinors",
                            {"c": c, "lam": c}, vals, "pass" if ok else "fail"))
    return out


# ---------------------------------------------------------------- products

def suite_products(cfg: SuiteConfig) -> list:
    out = []
    for p in (1, 2, 3):
        for r in (2, 3):
            prep = pr.ProductRep(build_rep(2 * p), build_rep(r))
            res = pr.algebra_identities(prep, seed=cfg.seed)
            out.append(_rec(f"products.algebra.p{p}.r{r}", "Clifford action on tensor products of spinors",
                            {"p": p, "r": r}, res, _below(max(res.values()), cfg.tolerance("product_algebra"))))
    if cfg.wants("product:s2xs3"):
        out.extend(_killing_pair_records(cfg))
    if cfg.wants("product:s6xs3"):
        out.extend(_balanced_pair_records(cfg))
    vals = {str(r): pr.scalar_ratio(r) for r in (2, 6)}
    gap = abs(pr.scalar_ratio(6) - 1.0)
    out.append(_rec("products.scalar_ratio.r6", "Einstein product of a Killing pair needs S_M = S_N when r = 6",
                    {"r": 6}, {"ratio": vals["6"], "difference": gap}, _below(gap, cfg.tolerance("ratio"))))
    positive = min(pr.scalar_ratio(r) for r in range(2, 51))
    out.append(_rec("products.scalar_ratio.positive", "scalar curvature ratio is positive",
                    {"r": [2, 50]}, {"minimum": positive}, "pass" if positive > 0 else "fail"))
    for r in cfg.param("r"):
        SM = 10.0
        SN = SM * pr.scalar_ratio(r)
        lamM = np.sqrt(0.3 * SM)

        def lam_n(s):
            return np.sqrt(r * s / (4 * (r - 1)))

        on = pr.product_einstein_algebra(SM, SN, r, lamM, lam_n(SN))
        off = pr.product_einstein_algebra(SM, 1.01 * SN, r, lamM, lam_n(1.01 * SN))
        ricci_ok = on["einstein"] == (r == 6)
        ok = on["consistency"] < cfg.tolerance("consistency") and off["consistency"] > 1e-4 and ricci_ok
        out.append(_rec(f"products.einstein_algebra.r{r}",
                        "diagonal Einstein conditions for a Killing pair on M^6 x N^r",
                        {"r": r, "S_M": SM, "S_N": SN},
                        {"consistency": on["consistency"], "mismatch_consistency": off["consistency"],
                         "normalisation": on["normalisation_M"], "ricci_M": on["ricci_M"],
                         "ricci_N": on["ricci_N"], "einstein": on["einstein"]},
                        "pass" if ok else "fail",
                        "conditional verification: the nearly Kaehler factor is represented by its Killing data"))
    if cfg.wants("product:s6xsr"):
        for r in cfg.param("r"):
            on = pr.product_einstein_spinor(r, points=2, seed=cfg.seed)
            off = pr.product_einstein_spinor(r, 1.2 * on["S_N"], points=1, seed=cfg.seed)
            tol = cfg.tolerance("einstein")
            ok = on["passed"] and max(on["dirac"], on["einstein"]) < tol and off["einstein"] > 1e-3
            keys = ("S_N", "lam", "eps", "normalisation", "dirac", "einstein")
            out.append(_rec(f"products.s6xs{r}.einstein_spinor",
                            "Killing pair on a nearly Kaehler 6-manifold times a sphere is an Einstein spinor",
                            {"r": r, "S_M": on["S_M"], "S_N": on["S_N"]},
                            {**{k: on[k] for k in keys}, "mismatch_einstein": off["einstein"],
                             "hypotheses": on["hypotheses"]},
                            "pass" if ok else "fail",
                            "round S^6 with S = 30; S_N = 30 scalar_ratio(r); mismatch uses 1.2 S_N"))
    for key in pr.PRODUCT_CATALOG:
        name = f"product:{key}"
        if not cfg.wants(name):
            continue
        v = ig.obstruction_scan(pr.product_catalog(name), seed_samples(pr.product_catalog(name), cfg))
        prod = [e.id for e in v.triggered if e.id.startswith("product_")]
        out.append(_rec(f"products.obstructions.{key}", "products of Einstein factors carry no WK-spinor",
                        {"model": name}, {"triggered": [e.id for e in v.triggered]},
                        "pass" if prod else "fail"))
    return out


def seed_samples(model, cfg, count=4):
    return model.sample(count, seed=int(cfg.seed), margin=0.1)


def _killing_pair_records(cfg):
    out = []
    A = fg.sphere_chart(2, 1.0, prefix="s")
    B = fg.sphere_chart(3, 1.0, prefix="t")
    rM, rN = build_rep(2), build_rep(3, 1)
    gM = scn.SpinGeometry(A, rM, h=cfg.fd_step)
    gN = scn.SpinGeometry(B, rN, h=cfg.fd_step)
    prep = pr.ProductRep(rM, rN)
    model = pr.product_catalog("s2xs3")
    pts = _points(model, cfg, min(int(cfg.samples), 20), margin=0.25)
    tol = cfg.tolerance("product_dirac")
    for sM, sN in ((1, 1), (1, -1)):
        psiM = sphere_spinor(A, rM, sM, cfg.seed)
        psiN = sphere_spinor(B, rN, sN, cfg.seed + 1)
        lamM, lamN = -2 * sM / 2, -3 * sN / 2
        tag = f"s{sM:+d}{sN:+d}"
        split = {}
        for x in pts[: cfg.second_order_points]:
            for k, v in pr.splitting_residuals(gM, gN, prep, psiM, psiN, x).items():
                split[k] = max(split.get(k, 0.0), v)
        for x in pts:
            for k, v in pr.splitting_residuals(gM, gN, prep, psiM, psiN, x, second=False).items():
                split[k] = max(split.get(k, 0.0), v)
        geo = scn.SpinGeometry(model, prep.rep, h=cfg.fd_step)
        field = pr.product_spinor(model, prep, psiM, psiN)
        d2 = 0.0
        for x in pts[: cfg.second_order_points]:
            v = field(x)
            d2 = max(d2, float(np.linalg.norm(pr.product_dirac_squared(gM, gN, prep, psiM, psiN, x)
                                              - (lamM**2 + lamN**2) * v)) / (1 + np.linalg.norm(v)))
        split["dirac_squared_eigen"] = d2
        out.append(_rec(f"products.s2xs3.{tag}.splitting", "Dirac operator on a Riemannian product",
                        {"lam_M": lamM, "lam_N": lamN, "points": len(pts)}, split,
                        _below(max(split.values()), tol)))
        for sign in (-1, 1):
            spec = pr.KillingPairSpec(lamM, lamN, 1, sign)
            rep_ = pr.einstein_pair(spec, gM, gN, psiM, psiN, pts, tol=tol)
            verdicts = rep_["verdicts"]
            bad = [k for k, v in verdicts.items() if v == "fail"]
            hyp = rep_["hypotheses"]
            note = ("hypotheses hold numerically" if hyp["holds"] else
                    "half-spinor hypotheses fail for these sphere spinors; the cross-term check is not applicable")
            out.append(_rec(f"products.s2xs3.{tag}.killing_pair.lam{sign:+d}",
                            "Einstein spinor built from a Killing pair on a product",
                            {"lam_M": lamM, "lam_N": lamN, "lam": spec.lam, "points": len(pts)},
                            {"residuals": rep_["residuals"], "verdicts": verdicts, "hypotheses": hyp},
                            "fail" if bad else "pass", note))
    return out


def _balanced_pair_records(cfg):
    """Killing pair on S^6 x S^3 whose first factor satisfies the half-spinor balance."""
    out = []
    gM, gN, psiM, psiN, lamM, lamN = pr.six_sphere_pair(3, 6.0, (1, 1), cfg.seed)
    model = fg.product(gM.model, gN.model)
    pts = _points(model, cfg, min(int(cfg.samples), 20), margin=0.25)
    tol = cfg.tolerance("product_dirac")
    for sign in (-1, 1):
        spec = pr.KillingPairSpec(lamM, lamN, 3, sign)
        res = pr.einstein_pair(spec, gM, gN, psiM, psiN, pts, tol=tol)
        verdicts = res["verdicts"]
        ok = all(v == "pass" for v in verdicts.values())
        out.append(_rec(f"products.s6xs3.killing_pair.lam{sign:+d}",
                        "Einstein spinor built from a Killing pair on a product",
                        {"lam_M": lamM, "lam_N": lamN, "lam": spec.lam, "points": len(pts)},
                        {"residuals": res["residuals"], "verdicts": verdicts, "hypotheses": res["hypotheses"]},
                        "pass" if ok else "fail",
                        "hypotheses hold numerically: balanced half-spinors on S^6, every identity applies"))
    return out


def sphere_spinor(model, rep, sign, seed):
    return cat.sphere_killing_spinor(model, rep, sign, cat.unit_spinor(rep.dim, seed))


# ---------------------------------------------------------------- table of 3D geometries

def table_rows(cfg: SuiteConfig) -> list:
    out = []
    if cfg.wants("euclidean3"):
        model = fg.catalog("euclidean3")
        psi = cat.constant_spinor(cat.unit_spinor(2, cfg.seed), 1)
        r = scn.residual(model, build_rep(3, 1), psi, scn.EquationSpec.killing(0.0), _points(model, cfg, 5)).max
        out.append(_rec("table3d.euclidean3", "parallel spinor", {"model": "euclidean3", "row": TABLE_LABELS["euclidean3"]},
                        {"parallel_residual": r}, _below(r, cfg.tolerance("first_order"))))
    if cfg.wants("h3"):
        out.append(_rec("table3d.h3", "imaginary Killing spinor", {"model": "h3", "row": TABLE_LABELS["h3"]},
                        {}, "not-applicable", "imaginary Killing spinors are outside the real equation set"))
    if cfg.wants("round_s3"):
        model = fg.catalog("round_s3")
        rep = build_rep(3, 1)
        psi, b = cat.round_s3_constant(1, cat.unit_spinor(2, cfg.seed))
        pts = _points(model, cfg, 5)
        kr = scn.residual(model, rep, psi, scn.EquationSpec.killing(b), pts).max
        wr = scn.residual(model, rep, psi, scn.EquationSpec.wk(-3 * b), pts).max
        out.append(_rec("table3d.round_s3", "real Killing spinor, WK-spinor",
                        {"model": "round_s3", "row": TABLE_LABELS["round_s3"], "b": b, "lam": -3 * b},
                        {"killing_residual": kr, "wk_residual": wr},
                        _below(max(kr, wr), cfg.tolerance("wk"))))
    sol_info = None
    for name in NO_WK_ROWS:
        if not cfg.wants(name):
            continue
        model = fg.catalog(name)
        v = ig.obstruction_scan(model, seed_samples(model, cfg))
        trig = [e.id for e in v.triggered]
        values = {"triggered": trig, "anchors": {e.id: e.description for e in v.triggered}}
        notes = ""
        if name == "sol":
            sol_info = sol_info or ig.sol_wk_nonexistence(seed=int(cfg.seed))
            values["sol_reduction"] = {k: sol_info[k] for k in ("contradiction_pair", "reduction_residual",
                                                               "algebraic_min_singular", "sweep_min_residual")}
            excluded = bool(trig) and sol_info["nonexistence"]
            notes = "the E_3 component of the ansatz must be both +2 lam and -2 lam"
        else:
            excluded = bool(trig)
        if name == "nil":
            notes = "excluded by the Sasakian scalar condition; the printed Ricci tensor differs from the oracle"
        out.append(_rec(f"table3d.{name}", "no WK-spinor", {"model": name, "row": TABLE_LABELS[name]},
                        values, "pass" if excluded else "fail", notes))
    if cfg.wants("deformed_sasakian_sl2r"):
        for a in cfg.param("a"):
            model = fg.catalog("deformed_sasakian_sl2r", a=a)
            v = ig.obstruction_scan(model, seed_samples(model, cfg))
            e = v.get("sasakian_scalar")
            out.append(_rec(f"table3d.deformed_sl2r.a{a:g}", "no WK-spinor on deformed SL(2,R)",
                            {"model": "deformed_sasakian_sl2r", "a": a},
                            {"S": e.evidence.get("S"), "predicted": -8 * a * a - 2, "status": e.status,
                             "triggered": [t.id for t in v.triggered]},
                            "pass" if e.status == "triggered" else "fail",
                            "S = -8a^2 - 2 never equals 1 +- sqrt 5"))
    return out


# ---------------------------------------------------------------- driver

SUITE_FUNCTIONS = {
    "clifford": suite_clifford,
    "curvature": suite_curvature,
    "sasakian": suite_sasakian,
    "wk": suite_wk,
    "einstein-dirac": suite_einstein_dirac,
    "products": suite_products,
    "table-3d": table_rows,
}


def run_suite(cfg: SuiteConfig) -> Report:
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    checks = []
    with np.errstate(all="ignore"):
        for name in names:
            checks.extend(SUITE_FUNCTIONS[name](cfg))
    ids = [c.id for c in checks]
    if len(set(ids)) != len(ids):
        raise RuntimeError("duplicate check ids")
    checks.sort(key=lambda c: c.id)
    return Report(__version__, cfg.echo(), checks)


def report_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, allow_nan=False) + "\n"


def report_text(report: Report) -> str:
    """Plain table: the 3D geometry rows first (Space | Spinor), then every check."""
    d = report.to_dict()
    lines = []
    order = list(TABLE_LABELS)
    rows = [c for c in d["checks"] if c["id"].startswith("table3d.") and "row" in c["inputs"]]
    rows.sort(key=lambda c: order.index(c["inputs"]["model"]))
    if rows:
        w = max(len(r["inputs"]["row"]) for r in rows)
        lines.append(f"{'Space':<{w}} | Spinor")
        lines.append("-" * (w + 1) + "+" + "-" * 40)
        for r in rows:
            lines.append(f"{r['inputs']['row']:<{w}} | {r['anchor']} [{r['verdict']}]")
        lines.append("")
    w = max([len(c["id"]) for c in d["checks"]] + [5])
    lines.append(f"{'check':<{w}}  {'verdict':<17}  anchor")
    for c in d["checks"]:
        mark = c["verdict"].upper() if c["verdict"] == "paper-discrepancy" else c["verdict"]
        lines.append(f"{c['id']:<{w}}  {mark:<17}  {c['anchor']}")
        if c["notes"]:
            lines.append(f"{'':<{w}}  {'':<17}  note: {c['notes']}")
    s = d["summary"]
    lines.append("")
    lines.append("summary: " + ", ".join(f"{k}={s[k]}" for k in (*VERDICTS, "total")))
    return "\n".join(lines) + "\n"


def parse_text_verdicts(text: str) -> dict:
    """Recover {check id: verdict} from :func:`report_text` output."""
    out = {}
    started = False
    for line in text.splitlines():
        if line.startswith("check ") and "verdict" in line:
            started = True
            continue
        if not started or not line.strip() or line.startswith("summary:") or line.startswith(" "):
            continue
        parts = line.split()
        if len(parts) >= 2:
            out[parts[0]] = parts[1].lower()
    return out


def emit_report(report: Report, fmt: str = "json", path: str | None = None) -> str:
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}")
    text = report_json(report) if fmt == "json" else report_text(report)
    if path:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {path}: {exc}") from exc
    return text

