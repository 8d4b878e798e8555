"""Command-line front end: ``engel-normal validate|graph|analyze|filiform|demo``.

Configs are INI files.  ``[set]`` (plus ``[f]`` / ``[g]`` tables) describes
the calibrated set as in :mod:`engel_normal.calibrated.config`; an optional
``[run]`` section holds sampler and tolerance settings::

    [run]
    seed = 0
    grid = 21
    n_points = 10000
    directions = 1.0, 2.0
    region = -2, 2, 0.5, 4
    w = 0, 1, 0, 1
    tol_pdi = 1e-8
    tol_quad = 1e-6
    tol_bisect = 1e-10

Flags override the file.  Exit status: 0 all checks pass, 1 a check failed,
2 bad arguments or config.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .calibrated import (
    FGK,
    Cone,
    HalfSpace,
    MonotoneG,
    PiecewiseLinear,
    RegionContainsInfinite,
    RegionContainsJump,
    Sampler,
    TestFunctionFamily,
    boundary_points,
    check_jump_condition,
    check_level_set,
    check_partial_lipschitz,
    check_X2_monotone,
    check_zt_family,
    cone_inclusion,
    pdi_distributional,
    pdi_pointwise,
)
from .calibrated.config import ConfigError, dumps, spec_from_parser
from .filiform import FiliformAlgebra, filiform_adjoint, half_space_reduction_filiform, vandermonde_basis
from .intrinsic import (
    NonMonotoneMembership,
    demonstrate_discontinuity,
    holder_bound_check,
    holder_constant,
    intrinsic_cone_test,
    intrinsic_T_many,
    lipschitz_blowup_exponent,
    write_T_csv,
)
from .rectifiability import GraphingDirection, MonotoneFrame, euclidean_cone_of_lemma, extract_rotated_graph, group_cone_test
from .reports import ValidationReport, _plain
from .tolerances import DEFAULT

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    spec: object = None
    seed: int = 0
    grid: int = 21
    n_points: int = 10_000
    directions: tuple[float, ...] = (1.0,)
    region: tuple[float, float, float, float] = (-2.0, 2.0, 0.5, 4.0)
    w: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)
    tol_pdi: float = DEFAULT.pdi
    tol_quad: float = DEFAULT.quad
    tol_bisect: float = DEFAULT.bisect
    out: Path = field(default_factory=lambda: Path("."))

    def canonical(self) -> str:
        """Text that determines every output: spec plus run parameters."""
        d = asdict(self)
        d.pop("spec")
        d.pop("out")
        spec_text = dumps(self.spec) if self.spec is not None else ""
        return spec_text + json.dumps(_plain(d), sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


_RUN_KEYS = {
    "seed": int,
    "grid": int,
    "n_points": int,
    "tol_pdi": float,
    "tol_quad": float,
    "tol_bisect": float,
}


def _tuple(text: str, n: int | None, key: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: expected numbers, got {text!r}") from exc
    if n is not None and len(vals) != n:
        raise ConfigError(f"{key}: expected {n} numbers, got {len(vals)}")
    if not vals:
        raise ConfigError(f"{key}: empty list")
    return vals


def load_run_config(args: argparse.Namespace) -> RunConfig:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        if args.config:
            text = Path(args.config).read_text()
        elif args.inline:
            text = args.inline
        else:
            raise ConfigError("one of --config or --inline is required")
        cp.read_string(text)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.config}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    cfg = RunConfig(command=args.command, spec=spec_from_parser(cp))
    if cp.has_section("run"):
        run = cp["run"]
        for key in run:
            if key in _RUN_KEYS:
                try:
                    setattr(cfg, key, _RUN_KEYS[key](run[key]))
                except ValueError as exc:
                    raise ConfigError(f"run.{key}: {exc}") from exc
            elif key == "directions":
                cfg.directions = _tuple(run[key], None, "run.directions")
            elif key == "region":
                cfg.region = _tuple(run[key], 4, "run.region")
            elif key == "w":
                cfg.w = _tuple(run[key], 4, "run.w")
            else:
                raise ConfigError(f"unknown key run.{key}")
    for flag in ("seed", "grid", "tol_pdi", "tol_bisect"):
        val = getattr(args, flag, None)
        if val is not None:
            setattr(cfg, flag, val)
    cfg.out = Path(args.out)
    if cfg.grid < 2:
        raise ConfigError("grid must be at least 2")
    if cfg.n_points < 1:
        raise ConfigError("n_points must be positive")
    for name in ("tol_pdi", "tol_quad", "tol_bisect"):
        if not getattr(cfg, name) > 0:
            raise ConfigError(f"{name} must be positive")
    return cfg


def _envelope(cfg: RunConfig, results: dict, passed: bool) -> dict:
    return {
        "tool": "engel-normal",
        "version": __version__,
        "command": cfg.command,
        "config_hash": cfg.digest(),
        "seed": cfg.seed,
        "passed": passed,
        "results": results,
    }


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")


def _say(rep: ValidationReport) -> None:
    print(rep.summary())
    for v in rep.violations[:3]:
        print("    witness:", json.dumps(_plain(v), sort_keys=True))


# -- validate ---------------------------------------------------------------


def _pdi_reports(cfg: RunConfig) -> list[ValidationReport]:
    G = cfg.spec.graph
    out = []
    try:
        out.append(pdi_pointwise(G, cfg.region, tol=cfg.tol_pdi))
    except (RegionContainsJump, RegionContainsInfinite) as exc:
        rep = ValidationReport(name="pdi-pointwise", skipped=True)
        rep.notes.append(str(exc))
        out.append(rep)
    fam = TestFunctionFamily.random(cfg.region, 64, radius_range=(0.05, 0.5), seed=cfg.seed).admissible(G)
    if len(fam):
        out.append(pdi_distributional(G, fam, tol=cfg.tol_quad))
    else:
        rep = ValidationReport(name="pdi-distributional", skipped=True)
        rep.notes.append("no bump supported where G is finite")
        out.append(rep)
    return out


def _boundary_sample(cfg: RunConfig, n: int = 20) -> np.ndarray:
    rng = np.random.default_rng([cfg.seed, 99])
    base = rng.uniform(-2.0, 2.0, size=(n, 3))
    pts = boundary_points(cfg.spec, base, tol=cfg.tol_bisect)
    return pts[np.isfinite(pts[:, 1])]


def run_validate(cfg: RunConfig) -> tuple[dict, bool]:
    spec = cfg.spec
    sampler = Sampler(n_points=cfg.n_points, seed=cfg.seed)
    reports = [spec.check(), check_X2_monotone(spec, sampler), check_zt_family(spec, sampler)]
    reports += _pdi_reports(cfg)
    reports.append(check_jump_condition(spec.graph))
    bps = _boundary_sample(cfg)
    if bps.size:
        reports.append(cone_inclusion(spec, bps, seed=cfg.seed))
    reports += [check_partial_lipschitz(spec, sampler), check_level_set(spec, sampler)]
    for r in reports:
        _say(r)
    passed = all(r.passed for r in reports)
    return {r.name: r.to_dict() for r in reports}, passed


# -- graph ------------------------------------------------------------------


def run_graph(cfg: RunConfig) -> tuple[dict, bool]:
    spec = cfg.spec
    g = np.linspace(-1.0, 1.0, cfg.grid)
    P3, P4 = np.meshgrid(g, g, indexing="ij")
    base = np.zeros((P3.size, 4))
    base[:, 2], base[:, 3] = P3.ravel(), P4.ravel()
    cfg.out.mkdir(parents=True, exist_ok=True)
    summary = {"intrinsic": {}}
    rows = []
    for a in cfg.directions:
        T = intrinsic_T_many(spec, a, base, tol=cfg.tol_bisect)
        rows.append((P3.ravel(), P4.ravel(), T, a))
        entry = {"finite": int(np.isfinite(T).sum()), "max_T": float(np.max(T[np.isfinite(T)])) if np.isfinite(T).any() else None}
        if a != 0:
            try:
                fit = lipschitz_blowup_exponent(a, -np.logspace(-1, -6, 11), spec=spec, tol=cfg.tol_bisect)
                entry["exponent_fit"] = fit.to_dict()
            except ValueError as exc:
                entry["exponent_fit"] = {"skipped": str(exc)}
        summary["intrinsic"][repr(float(a))] = entry
    path = cfg.out / "intrinsic_T.csv"
    write_T_csv(path, *(np.concatenate([np.broadcast_to(r[k], r[0].shape) for r in rows]) for k in range(4)))
    print(f"wrote {path}")
    n_rot = min(cfg.grid, 40)
    try:
        samples = extract_rotated_graph(spec, GraphingDirection(cfg.w), n=n_rot, tol=cfg.tol_bisect, seed=cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rot = cfg.out / "rotated_graph.csv"
    samples.write_csv(rot)
    print(f"wrote {rot}")
    summary["rotated"] = samples.to_dict()
    print(f"rotated graph: L_hat = {samples.L_hat:.6g} (cone bound {samples.L_bound:.6g}), "
          f"{int((~samples.crossing).sum())} rays without crossing")
    passed = samples.cone_report.passed
    return summary, passed


# -- analyze ----------------------------------------------------------------


def run_analyze(cfg: RunConfig) -> tuple[dict, bool]:
    spec = cfg.spec
    results: dict = {}
    reports: list[ValidationReport] = []
    if isinstance(spec, MonotoneG):
        d = demonstrate_discontinuity(spec, n=max(cfg.grid, 101), tol=cfg.tol_bisect)
        results["discontinuity"] = d.to_dict()
        for j in d.jumps:
            print(f"jump of T at p4 = {j.location:.6g}: {j.left_limit:.6g} -> {j.right_limit:.6g} (size {j.size:.6g})")
        if not d.jumps:
            print("no jump of T found")
    bps = _boundary_sample(cfg, n=10)
    reports.append(group_cone_test(spec, MonotoneFrame(), bps, seed=cfg.seed))
    g = np.linspace(-1.0, 1.0, cfg.grid)
    P3, P4 = np.meshgrid(g, g, indexing="ij")
    sample = np.column_stack([P3.ravel(), P4.ravel()])
    for a in cfg.directions:
        if a == 0:
            continue
        K, arg = holder_constant(a)
        results[f"holder_constant[{a!r}]"] = {"K": K, "argmax": arg}
        print(f"a = {a:g}: cone Hoelder constant K* = {K:.10g} attained at (p3, p4) = {arg}")
        rep = intrinsic_cone_test(spec, a, bps, K=K, seed=cfg.seed)
        rep.name = f"intrinsic-cone[a={a:g}]"
        reports.append(rep)
        if isinstance(spec, Cone):
            rep = holder_bound_check(spec, a, K, sample, tol=cfg.tol_bisect)
            rep.name = f"holder-bound[a={a:g}]"
            reports.append(rep)
            fit = lipschitz_blowup_exponent(a, -np.logspace(-1, -6, 11), spec=spec, tol=cfg.tol_bisect)
            results[f"exponent_fit[{a!r}]"] = fit.to_dict()
            print(f"a = {a:g}: log T vs log|p4| slope {fit.slope:.6f}, prefactor {fit.prefactor:.6f}")
    ang = np.linspace(0.0, np.pi, 13)
    cone = euclidean_cone_of_lemma(np.column_stack([np.cos(ang), np.sin(ang)]))
    results["euclidean_cone"] = {"directions": cone.directions, "constants": cone.constants, "capped": cone.capped}
    for r in reports:
        _say(r)
    results.update({r.name: r.to_dict() for r in reports})
    return results, all(r.passed for r in reports)


# -- filiform ---------------------------------------------------------------


def _parse_ts(text: str) -> list:
    out = []
    for s in text.split(","):
        s = s.strip()
        if not s:
            continue
        try:
            out.append(Fraction(s))
        except ValueError as exc:
            raise UsageError(f"bad t value {s!r}") from exc
    return out


def run_filiform(step: int, ts_text: str | None) -> tuple[dict, bool]:
    if step < 2:
        raise UsageError("step must be at least 2")
    alg = FiliformAlgebra(step)
    ts = _parse_ts(ts_text) if ts_text else [Fraction(k) for k in range(step)]
    if len(ts) != step:
        raise UsageError(f"need {step} values of t, got {len(ts)}")
    print(f"filiform algebra of step {step}: basis {', '.join(alg.names)}")
    jac = alg.jacobi_violations()
    print(f"Jacobi identity: {'holds' if not jac else f'{len(jac)} failing triples'}; "
          f"lower central series dims {alg.lower_central_series_dims()}")
    print("Ad_{exp(t X0)} X1 coefficients over X1..X%d:" % step)
    table = []
    for t in ts:
        row = filiform_adjoint(alg, t)[1:]
        table.append([str(c) for c in row])
        print(f"  t = {t}: " + ", ".join(str(c) for c in row))
    rep = vandermonde_basis(alg, ts)
    print(f"determinant {rep.determinant} (formula {rep.formula}, Vandermonde product {rep.vandermonde_product})")
    print(f"rank {rep.rank} of {step}: {'full rank' if rep.full_rank else 'rank deficient'}")
    red = half_space_reduction_filiform(alg)
    print(red.summary())
    results = {
        "step": step,
        "ts": [str(t) for t in ts],
        "adjoint_table": table,
        "determinant": str(rep.determinant),
        "formula": str(rep.formula),
        "rank": rep.rank,
        "full_rank": rep.full_rank,
        "jacobi_failures": len(jac),
        "reduction": red.to_dict(),
    }
    return results, rep.full_rank and not jac


# -- demo -------------------------------------------------------------------


def run_demo(seed: int) -> tuple[dict, bool]:
    """Every worked example, end to end, one line each."""
    checks: list[tuple[str, bool, str]] = []

    def record(name, ok, detail=""):
        checks.append((name, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {name}{': ' + detail if detail else ''}")

    small = Sampler(n_points=2000, seed=seed)
    c = Cone()
    r = pdi_pointwise(c.graph, (-2, 2, 0.5, 4))
    record("cone PDI residual vanishes", r.metrics["max_abs_residual"] <= 1e-6, f"max |residual| {r.metrics['max_abs_residual']:.2e}")
    fgk = FGK(PiecewiseLinear.linear(1.0), PiecewiseLinear.constant(0.0), 1.0)
    r = pdi_pointwise(fgk.graph, (-1, 1, -1, 1))
    record("G = x3 - x4 has PDI value -1", abs(r.metrics["max_residual"] + 1) < 1e-6, f"{r.metrics['max_residual']:.9f}")
    ok = all(check_X2_monotone(s, small).passed for s in (c, fgk, HalfSpace(), MonotoneG(PiecewiseLinear.linear(-1.0))))
    record("valid specs are X2-monotone", ok)
    bad = MonotoneG(PiecewiseLinear.linear(1.0))
    record("increasing g is falsified", not check_X2_monotone(bad, small).passed)
    T = intrinsic_T_many(c, 1.0, [[0, 0, 0, -1 / 24]])[0]
    record("cone T(0,0,0,-1/24) = 1 for a = 1", abs(T - 1) < 1e-8, f"T = {T:.12f}")
    fit = lipschitz_blowup_exponent(1.0, -np.logspace(-1, -6, 11))
    record("T grows like |p4|^(1/3)", abs(fit.slope - 1 / 3) < 0.02, f"slope {fit.slope:.6f}")
    K, _ = holder_constant(1.0)
    g = np.linspace(-1, 1, 41)
    P3, P4 = np.meshgrid(g, g)
    rep = holder_bound_check(c, 1.0, K, np.column_stack([P3.ravel(), P4.ravel()]))
    record("Hoelder bound with K*(1)", rep.passed, f"K* = {K:.8f}")
    d = demonstrate_discontinuity(PiecewiseLinear.step([0.0], [0.0, -1.0]), n=401)
    record("step g gives a jump of T", len(d.jumps) == 1 and abs(d.jumps[0].size - 1) < 1e-6,
           f"{len(d.jumps)} jump(s), size {d.jumps[0].size:.6g}" if d.jumps else "none")
    gs = extract_rotated_graph(c, n=15, seed=seed)
    record("cone boundary is a Lipschitz graph along (0,1,0,1)", gs.crossing.all() and gs.L_hat <= 1.1 * gs.L_bound,
           f"L_hat {gs.L_hat:.6f}, bound {gs.L_bound:.6f}")
    rep = group_cone_test(c, MonotoneFrame(), [[0, 0, 0, 0]], seed=seed)
    record("group cone at the origin", rep.passed)
    red = vandermonde_basis(FiliformAlgebra(3), [0, 1, 2])
    record("filiform step 3 Vandermonde", red.full_rank and red.vandermonde_product == 2, f"det {red.determinant}")
    return {"checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in checks]}, all(ok for _, ok, _ in checks)


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="engel-normal", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("--config", metavar="PATH", help="INI file with [set] and optional [run] sections")
            p.add_argument("--inline", metavar="TEXT", help="config given inline instead of a file")
            p.add_argument("--grid", type=int, help="grid points per axis")
            p.add_argument("--tol-pdi", dest="tol_pdi", type=float)
            p.add_argument("--tol-bisect", dest="tol_bisect", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", metavar="DIR", default=".", help="output directory (default: current)")

    common(sub.add_parser("validate", help="run every calibration validator on a set"))
    common(sub.add_parser("graph", help="export intrinsic and rotated graph samples"))
    common(sub.add_parser("analyze", help="regularity analysis: jumps, growth, cone tests"))
    p = sub.add_parser("filiform", help="filiform algebra checks")
    p.add_argument("--step", type=int, required=True)
    p.add_argument("--ts", help="comma-separated t values (default 0,1,...,step-1)")
    common(p, spec=False)
    common(sub.add_parser("demo", help="reproduce the worked examples"), spec=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Path(args.out)
    try:
        if args.command == "filiform":
            results, passed = run_filiform(args.step, args.ts)
            payload = {"tool": "engel-normal", "version": __version__, "command": "filiform", "passed": passed,
                       "config_hash": hashlib.sha256(f"{args.step}|{args.ts}".encode()).hexdigest(),
                       "seed": args.seed or 0, "results": results}
            _write_json(out / "filiform_report.json", payload)
            return EXIT_OK if passed else EXIT_FAIL
        if args.command == "demo":
            seed = args.seed or 0
            results, passed = run_demo(seed)
            payload = {"tool": "engel-normal", "version": __version__, "command": "demo", "passed": passed,
                       "config_hash": hashlib.sha256(f"demo|{seed}".encode()).hexdigest(), "seed": seed, "results": results}
            _write_json(out / "demo_report.json", payload)
            return EXIT_OK if passed else EXIT_FAIL
        cfg = load_run_config(args)
        runner = {"validate": run_validate, "graph": run_graph, "analyze": run_analyze}[args.command]
        results, passed = runner(cfg)
        _write_json(cfg.out / f"{cfg.command}_report.json", _envelope(cfg, results, passed))
        print(f"{cfg.command}: {'PASS' if passed else 'FAIL'}")
        return EXIT_OK if passed else EXIT_FAIL
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonMonotoneMembership as exc:
        print(f"invalid set: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
