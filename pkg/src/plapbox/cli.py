"""Scenario runner: constants -> family analysis -> hypotheses -> solve -> pair.

Subcommands: constants, solve-radial, verify-hypotheses, lambda-star,
sub-super, sweep. Every JSON report embeds the fully resolved
configuration; repeated runs with the same config are bit-identical.

Exit codes: 0 all requested verifications passed, 1 a verification
failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, ScenarioConfig, build_config, load_config_file, _split_weight_spec
from .constants import (
    DomainSummary,
    InvalidWeightError,
    compute_constants,
    k1_ball_closed,
    select_rho,
)
from .grids import RadialGrid
from .hypotheses import analyze_lambda_family, check_H1, check_H2, check_H3, lambda_family
from .solver import BoxViolationError, build_envelopes, solve_fixed_point
from .subsuper import build_pair, verify_pair
from .weights import RadialWeight, load_weight_csv, named_weight

ENV_OUT_DIR = "PLAPBOX_OUT"


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: Path, payload: dict) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")


def write_csv(path: Path, header: str, columns) -> None:
    rows = np.column_stack(columns) + 0.0  # normalizes negative zeros
    lines = [header]
    lines.extend(",".join(f"{v:.17g}" for v in row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def resolve_weight(cfg: ScenarioConfig, grid: RadialGrid):
    """Build the radial weight for the scenario: (weight, omega_sup, is_constant)."""
    kind, arg = _split_weight_spec(cfg.weight)
    if kind == "constant":
        value = float(arg)
        if value <= 0:
            raise ConfigError("constant weight must be positive")
        return RadialWeight.from_constant(value, grid), value, True
    if kind == "named":
        try:
            w = named_weight(arg, grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return w, float(np.max(w.samples)), w.constant is not None
    try:
        raw = load_weight_csv(arg, grid_n=cfg.grid_n)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot load weight CSV {arg!r}: {exc}") from None
    if abs(raw.grid.rho - grid.rho) > 1e-9 * max(1.0, grid.rho):
        raise ConfigError(
            f"weight CSV covers [0, {raw.grid.rho}] but the scenario ball has radius {grid.rho}"
        )
    samples = np.interp(grid.nodes, raw.grid.nodes, raw.samples)
    w = RadialWeight(grid=grid, samples=samples)
    if np.any(w.samples < 0) or float(np.max(w.samples)) <= 0:
        raise ConfigError("weight CSV must be nonnegative with positive maximum")
    return w, float(np.max(w.samples)), False


class Setup:
    """Resolved scenario inputs shared by the pipeline stages."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        convex = cfg.strategy == "convex-domain"
        self.dom = None
        if cfg.r_star is not None:
            r_circ = cfg.R_circ if cfg.R_circ is not None else cfg.r_star
            self.dom = DomainSummary(cfg.r_star, r_circ, convex=convex, omega_sup=1.0)
        kind, _ = _split_weight_spec(cfg.weight)
        omega_constant = kind == "constant" or cfg.weight.strip() == "named:unit"
        if cfg.rho is not None:
            self.rho = cfg.rho
            self.case_tag = "explicit-rho"
        else:
            self.rho, self.case_tag = select_rho(
                self.dom, cfg.p, cfg.N, omega_constant, cfg.strategy
            )
        self.grid = RadialGrid(self.rho, cfg.grid_n)
        self.weight, self.omega_sup, self.is_constant = resolve_weight(cfg, self.grid)
        if self.dom is not None:
            self.dom = DomainSummary(
                self.dom.r_star, self.dom.R_circ, convex=convex, omega_sup=self.omega_sup
            )
        try:
            self.consts = compute_constants(self.weight, cfg.p, cfg.N)
        except InvalidWeightError as exc:
            raise ConfigError(f"weight is unusable: {exc}") from None

    @property
    def k1_for_family(self) -> float:
        """k1 of the outer ball when domain data exists, else of the inner ball."""
        if self.dom is not None:
            return k1_ball_closed(self.cfg.p, self.cfg.N, self.dom.R_circ, self.omega_sup)
        return self.consts.k1

    def constants_report(self) -> dict:
        rep = self.consts.to_dict()
        rep["case_tag"] = self.case_tag
        rep["omega_sup"] = self.omega_sup
        return rep


def stage_lambda(setup: Setup):
    cfg = setup.cfg
    if cfg.q_exp is None:
        raise ConfigError("this command needs q_exp (the family exponent)")
    try:
        return analyze_lambda_family(
            cfg.p,
            cfg.q_exp,
            mu=setup.consts.gamma_rho,
            k1=setup.k1_for_family,
            k2=setup.consts.k2,
            lam=cfg.lam,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def stage_hypotheses(setup: Setup, family_report):
    cfg = setup.cfg
    lam = family_report.lam
    f = lambda_family(lam, cfg.q_exp, cfg.p)
    m_big = cfg.big_m if cfg.big_m is not None else family_report.M_star
    delta = cfg.delta if cfg.delta is not None else family_report.delta_lambda
    gamma = setup.consts.gamma_rho
    h1 = check_H1(f, family_report.k1, m_big, gamma, cfg.p, cfg.samples_per_axis)
    h2 = check_H2(f, family_report.k2, delta, m_big, gamma, cfg.p, cfg.samples_per_axis)
    h3 = check_H3(
        f,
        lambda u: lam * np.asarray(u, dtype=np.float64) ** (cfg.q_exp - 1.0),
        cfg.p,
        m_big,
        gamma * m_big,
        cfg.samples_per_axis,
    )
    return f, delta, m_big, [h1, h2, h3]


def stage_solve(setup: Setup, f, delta: float, m_big: float):
    cfg = setup.cfg
    box = build_envelopes(setup.consts, setup.weight, delta, m_big)
    return (
        box,
        *solve_fixed_point(
            f,
            box,
            setup.weight,
            cfg.p,
            cfg.N,
            tol=cfg.tol,
            max_iter=cfg.max_iter,
            damping=cfg.damping,
        ),
    )


def _out_dir(cfg: ScenarioConfig, fallback_name: str = "") -> Path:
    base = cfg.out or os.environ.get(ENV_OUT_DIR) or "plapbox-out"
    path = Path(base)
    if fallback_name:
        path = path / fallback_name
    return path


def _report(command: str, cfg: ScenarioConfig, results: dict, passed: bool) -> dict:
    return {"command": command, "config": cfg.to_dict(), "results": results, "passed": passed}


def cmd_constants(cfg: ScenarioConfig) -> int:
    setup = Setup(cfg)
    out = _out_dir(cfg)
    write_json(out / "constants.json", _report("constants", cfg, setup.constants_report(), True))
    print(json.dumps(setup.constants_report(), indent=2, sort_keys=True))
    return 0


def cmd_lambda_star(cfg: ScenarioConfig) -> int:
    setup = Setup(cfg)
    fam = stage_lambda(setup)
    results = {"constants": setup.constants_report(), "family": fam.to_dict()}
    write_json(_out_dir(cfg) / "lambda_star.json", _report("lambda-star", cfg, results, True))
    print(json.dumps(fam.to_dict(), indent=2, sort_keys=True))
    return 0


def cmd_verify_hypotheses(cfg: ScenarioConfig) -> int:
    setup = Setup(cfg)
    fam = stage_lambda(setup)
    _, delta, m_big, checks = stage_hypotheses(setup, fam)
    ok = all(c.passed for c in checks)
    results = {
        "constants": setup.constants_report(),
        "family": fam.to_dict(),
        "delta": delta,
        "M": m_big,
        "checks": [c.to_dict() for c in checks],
    }
    write_json(_out_dir(cfg) / "hypotheses.json", _report("verify-hypotheses", cfg, results, ok))
    for check in checks:
        print(f"{check.name}: {'pass' if check.passed else 'FAIL'} (margin {check.margin:.6g})")
    return 0 if ok else 1


def cmd_solve_radial(cfg: ScenarioConfig) -> int:
    setup = Setup(cfg)
    fam = stage_lambda(setup)
    f, delta, m_big, checks = stage_hypotheses(setup, fam)
    out = _out_dir(cfg)
    results: dict = {
        "constants": setup.constants_report(),
        "family": fam.to_dict(),
        "delta": delta,
        "M": m_big,
        "checks": [c.to_dict() for c in checks],
    }
    if not all(c.passed for c in checks):
        results["error"] = "box hypotheses failed; not solving"
        write_json(out / "solve.json", _report("solve-radial", cfg, results, False))
        print("hypotheses FAILED; no solve attempted", file=sys.stderr)
        return 1
    try:
        box, profile, history = stage_solve(setup, f, delta, m_big)
    except BoxViolationError as exc:
        results["error"] = str(exc)
        write_json(out / "solve.json", _report("solve-radial", cfg, results, False))
        print(f"solve aborted: {exc}", file=sys.stderr)
        return 1
    results["solve"] = history.to_dict()
    ok = history.converged
    write_csv(out / "profile.csv", "r,u,du", (profile.grid.nodes, profile.u, profile.du))
    write_json(out / "solve.json", _report("solve-radial", cfg, results, ok))
    print(json.dumps(history.to_dict(), indent=2, sort_keys=True))
    return 0 if ok else 1


def cmd_sub_super(cfg: ScenarioConfig) -> int:
    setup = Setup(cfg)
    if setup.dom is None:
        raise ConfigError("sub-super needs r_star (and optionally R_circ)")
    fam = stage_lambda(setup)
    f, delta, m_big, checks = stage_hypotheses(setup, fam)
    out = _out_dir(cfg)
    results: dict = {
        "constants": setup.constants_report(),
        "family": fam.to_dict(),
        "delta": delta,
        "M": m_big,
        "checks": [c.to_dict() for c in checks],
    }
    if not all(c.passed for c in checks):
        results["error"] = "box hypotheses failed; no pair built"
        write_json(out / "pair.json", _report("sub-super", cfg, results, False))
        return 1
    try:
        box, profile, history = stage_solve(setup, f, delta, m_big)
    except BoxViolationError as exc:
        results["error"] = str(exc)
        write_json(out / "pair.json", _report("sub-super", cfg, results, False))
        return 1
    results["solve"] = history.to_dict()
    pair = build_pair(profile, setup.consts, m_big, setup.dom.R_circ, setup.omega_sup)
    report = verify_pair(pair, f, setup.weight)
    results["pair"] = report.to_dict()
    ok = history.converged and report.passed and report.ode_ok
    write_csv(
        out / "subsuper.csv", "r,sub,super", (pair.sub.grid.nodes, pair.sub.u, pair.super.u)
    )
    write_json(out / "pair.json", _report("sub-super", cfg, results, ok))
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0 if ok else 1


def run_scenario(cfg: ScenarioConfig, out_dir: Path) -> dict:
    """Full pipeline for one scenario config; returns the summary payload."""
    setup = Setup(cfg)
    summary: dict = {"constants": setup.constants_report()}
    passed = True
    if cfg.q_exp is not None:
        fam = stage_lambda(setup)
        f, delta, m_big, checks = stage_hypotheses(setup, fam)
        summary["family"] = fam.to_dict()
        summary["checks"] = [c.to_dict() for c in checks]
        passed = all(c.passed for c in checks)
        if passed:
            try:
                box, profile, history = stage_solve(setup, f, delta, m_big)
            except BoxViolationError as exc:
                summary["error"] = str(exc)
                passed = False
            else:
                summary["solve"] = history.to_dict()
                passed = history.converged
                write_csv(
                    out_dir / "profile.csv",
                    "r,u,du",
                    (profile.grid.nodes, profile.u, profile.du),
                )
                if setup.dom is not None:
                    pair = build_pair(
                        profile, setup.consts, m_big, setup.dom.R_circ, setup.omega_sup
                    )
                    report = verify_pair(pair, f, setup.weight)
                    summary["pair"] = report.to_dict()
                    passed = passed and report.passed and report.ode_ok
                    write_csv(
                        out_dir / "subsuper.csv",
                        "r,sub,super",
                        (pair.sub.grid.nodes, pair.sub.u, pair.super.u),
                    )
    write_json(out_dir / "summary.json", _report("sweep", cfg, summary, passed))
    return {"out": str(out_dir), "passed": passed}


def cmd_sweep(config_paths, overrides, jobs: int) -> int:
    if not config_paths:
        raise ConfigError("sweep needs at least one config file")
    scenarios = []
    for path in config_paths:
        cfg = build_config(load_config_file(path), overrides)
        scenarios.append((Path(path).stem, cfg))
    results = {}
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        futures = {
            name: pool.submit(run_scenario, cfg, _out_dir(cfg, name)) for name, cfg in scenarios
        }
        for name, fut in futures.items():
            results[name] = fut.result()
    for name, res in sorted(results.items()):
        print(f"{name}: {'pass' if res['passed'] else 'FAIL'} -> {res['out']}")
    return 0 if all(r["passed"] for r in results.values()) else 1


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None, help="flat key=value config file")
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--p", type=float, default=None, help="growth exponent p > 1")
    parser.add_argument("--N", type=int, default=None, help="space dimension N > 1")
    parser.add_argument("--q-exp", dest="q_exp", type=float, default=None,
                        help="family exponent q in (1, p)")
    parser.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="family parameter (default: lambda*)")
    parser.add_argument("--rho", type=float, default=None, help="inner ball radius")
    parser.add_argument("--r-star", dest="r_star", type=float, default=None,
                        help="inradius of the domain")
    parser.add_argument("--R-circ", dest="R_circ", type=float, default=None,
                        help="radius of the circumscribed ball")
    parser.add_argument("--weight", type=str, default=None,
                        help="constant:<v> | csv:<path> | named:<name> | <number>")
    parser.add_argument("--grid-n", dest="grid_n", type=int, default=None, help="grid node count")
    parser.add_argument("--tol", type=float, default=None, help="fixed-point tolerance")
    parser.add_argument("--damping", type=float, default=None, help="Picard damping in (0, 1]")
    parser.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    parser.add_argument("--delta", type=float, default=None, help="explicit floor height")
    parser.add_argument("--M", dest="big_m", type=float, default=None,
                        help="explicit ceiling height")
    parser.add_argument("--directions", type=int, default=None)
    parser.add_argument("--samples-per-axis", dest="samples_per_axis", type=int, default=None)
    parser.add_argument("--strategy", type=str, default=None,
                        choices=("circumscribed-ball", "convex-domain"))


_OVERRIDE_KEYS = {
    "p": "p", "N": "N", "q_exp": "q_exp", "lam": "lambda", "rho": "rho",
    "r_star": "r_star", "R_circ": "R_circ", "weight": "weight", "grid_n": "grid_n",
    "tol": "tol", "damping": "damping", "max_iter": "max_iter", "delta": "delta",
    "big_m": "M", "directions": "directions", "samples_per_axis": "samples_per_axis",
    "strategy": "strategy", "out": "out",
}


def _collect_overrides(args: argparse.Namespace) -> dict:
    return {
        key: getattr(args, attr)
        for attr, key in _OVERRIDE_KEYS.items()
        if getattr(args, attr, None) is not None
    }


def _scenario_config(args: argparse.Namespace) -> ScenarioConfig:
    file_values = load_config_file(args.config) if args.config else {}
    return build_config(file_values, _collect_overrides(args))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plapbox",
        description="box constants, radial solves, and sub/super-solution pairs "
        "for weighted p-Laplacian problems",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("constants", "compute (k1, k2, t, gamma) for a ball and weight"),
        ("lambda-star", "closed-form family analysis: M*, lambda*, delta_lambda"),
        ("verify-hypotheses", "sampled H1/H2/H3 verification for the power family"),
        ("solve-radial", "fixed-point solve of the radial problem"),
        ("sub-super", "assemble and verify the ordered pair"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        _add_scenario_flags(cmd)

    sweep = sub.add_parser("sweep", help="run full pipelines for several configs")
    sweep.add_argument("configs", nargs="+", help="scenario config files")
    sweep.add_argument("--jobs", type=int, default=4)
    _add_scenario_flags(sweep)

    args = parser.parse_args(argv)
    handlers = {
        "constants": cmd_constants,
        "lambda-star": cmd_lambda_star,
        "verify-hypotheses": cmd_verify_hypotheses,
        "solve-radial": cmd_solve_radial,
        "sub-super": cmd_sub_super,
    }
    try:
        if args.command == "sweep":
            return cmd_sweep(args.configs, _collect_overrides(args), args.jobs)
        return handlers[args.command](_scenario_config(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
