"""Command-line driver.

Exit codes: 0 when every check passes or is not applicable, 1 on any failed
check, 2 on configuration errors.
"""
from __future__ import annotations

import json
import sys

import click
import yaml

from .workbench import (DEFAULT_PARAMS, SUITES, TOLERANCES, ConfigError, Report, CheckRecord,
                        SuiteConfig, emit_report, run_suite)


def _number_list(text: str):
    parts = [p for p in text.split(",") if p.strip()]
    vals = [float(p) for p in parts]
    return vals if len(vals) > 1 or text.strip().endswith(",") else vals[0]


def parse_tolerances(items) -> dict:
    out = {}
    for item in items:
        if "=" in item:
            key, val = item.split("=", 1)
            out[key.strip()] = float(val)
        else:
            v = float(item)
            out.update({k: v for k in TOLERANCES})
    return out


def parse_params(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"parameter {item!r} must look like key=value")
        key, val = item.split("=", 1)
        key = key.strip()
        v = _number_list(val)
        if isinstance(DEFAULT_PARAMS.get(key), list) and not isinstance(v, list):
            v = [v]
        if key == "r":
            v = [int(x) for x in v]
        out[key] = v
    return out


def load_config(path) -> dict:
    """YAML or JSON mapping with the SuiteConfig fields."""
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a mapping")
    return data


def build_config(config_path, suite, overrides: dict) -> SuiteConfig:
    data = load_config(config_path)
    if suite:
        data["suite"] = suite
    for key in ("model", "fd_step", "samples", "seed", "out", "format"):
        if overrides.get(key) is not None:
            data[key] = overrides[key]
    tol = dict(data.get("tol") or {})
    tol.update(overrides.get("tol") or {})
    data["tol"] = tol
    params = dict(data.get("params") or {})
    params.update(overrides.get("params") or {})
    data["params"] = params
    return SuiteConfig.from_mapping(data)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Verification suites for spinor field equations."""


@main.command("run")
@click.argument("suite_arg", required=False, metavar="[SUITE]")
@click.option("--suite", "suite_opt", help=f"one of all, {', '.join(SUITES)}")
@click.option("--model", help="restrict model-specific checks to one catalog model")
@click.option("--tol", multiple=True, help="KEY=VALUE tolerance override, or a bare number for all")
@click.option("--fd-step", type=float, help="finite-difference step")
@click.option("--samples", type=int, help="sample points per first-order check")
@click.option("--seed", type=int, help="seed for sample points and random spinors")
@click.option("--out", type=click.Path(dir_okay=False), help="write the report here")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), help="report format")
@click.option("--a2", type=float, help="squared deformation parameter of the 3-sphere")
@click.option("--param", multiple=True, help="KEY=VALUE[,VALUE] catalog parameter (a, a2, b, c, lam, r)")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="YAML or JSON config file")
def run_cmd(suite_arg, suite_opt, model, tol, fd_step, samples, seed, out, fmt, a2, param, config_path):
    """Run SUITE (default: all) and print or write the report."""
    if suite_arg and suite_opt and suite_arg != suite_opt:
        _die("conflicting suite names")
    try:
        params = parse_params(param)
        if a2 is not None:
            params["a2"] = a2
        cfg = build_config(config_path, suite_arg or suite_opt, {
            "model": model, "fd_step": fd_step, "samples": samples, "seed": seed, "out": out,
            "format": fmt, "tol": parse_tolerances(tol), "params": params})
        report = run_suite(cfg)
        text = emit_report(report, cfg.format, cfg.out)
    except (ConfigError, ValueError) as exc:
        _die(str(exc))
    if not cfg.out:
        click.echo(text, nl=False)
    else:
        s = report.summary
        click.echo(f"{cfg.out}: pass={s['pass']} fail={s['fail']} not-applicable={s['not-applicable']} "
                   f"paper-discrepancy={s['paper-discrepancy']}", err=True)
    sys.exit(report.exit_code)


@main.command("render")
@click.argument("report_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
def render_cmd(report_path, fmt):
    """Re-render a saved JSON report."""
    try:
        with open(report_path, encoding="utf-8") as fh:
            data = json.load(fh)
        report = Report(data["version"], data["config"],
                        [CheckRecord(c["id"], c["anchor"], c["inputs"], c["values"], c["verdict"], c["notes"])
                         for c in data["checks"]])
        click.echo(emit_report(report, fmt), nl=False)
    except (KeyError, ValueError, TypeError) as exc:
        _die(f"not a report: {exc}")
    sys.exit(report.exit_code)


def _die(msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(2)


if __name__ == "__main__":
    main()
