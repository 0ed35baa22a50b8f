"""Command-line front door.

Configuration is a flat ``key = value`` text file (``#`` comments), with
``--set key=value`` overrides taking precedence.  All numeric output is
serialized with 17 significant digits so that identical configurations
produce byte-identical files.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import core, dynamics, hyperbolic, predictions, sensitivity
from .core import DiscountSpec, EconomyParams
from .dynamics import CobbDouglas, DynamicsModel, IntegrationControls, Law

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

TRAJECTORY_COLUMNS = ("t", "K", "p", "R", "c", "M_r", "status")


class ConfigError(Exception):
    pass


class NumericalError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.17g}"


def parse_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        values[key] = value
    return values


def apply_overrides(values: dict[str, str], sets: list[str]) -> dict[str, str]:
    for item in sets:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        key, value = (part.strip() for part in item.split("=", 1))
        values[key] = value
    return values


class Config:
    """Typed access over the raw key/value map with field-naming errors."""

    def __init__(self, values: dict[str, str]):
        self.values = values

    def has(self, key: str) -> bool:
        return key in self.values

    def _raw(self, key: str) -> str:
        if key not in self.values:
            raise ConfigError(f"missing required key '{key}'")
        return self.values[key]

    def get_float(self, key: str, default: float | None = None) -> float:
        if key not in self.values:
            if default is not None:
                return default
            raise ConfigError(f"missing required key '{key}'")
        try:
            return float(self.values[key])
        except ValueError:
            raise ConfigError(f"key '{key}': not a number: {self.values[key]!r}")

    def get_int(self, key: str, default: int | None = None) -> int:
        if key not in self.values:
            if default is not None:
                return default
            raise ConfigError(f"missing required key '{key}'")
        try:
            return int(self.values[key])
        except ValueError:
            raise ConfigError(f"key '{key}': not an integer: {self.values[key]!r}")

    def get_str(self, key: str, default: str | None = None) -> str:
        if key not in self.values:
            if default is not None:
                return default
            raise ConfigError(f"missing required key '{key}'")
        return self.values[key]

    def economy(self) -> EconomyParams:
        try:
            return EconomyParams(
                c=self.get_float("c"),
                p=self.get_float("p"),
                n=self.get_float("n"),
                R=self.get_float("R"),
            )
        except ValueError as exc:
            raise ConfigError(str(exc))

    def discounting(self) -> DiscountSpec:
        kind = self.get_str("discounting", "exponential")
        if kind == "exponential":
            return DiscountSpec.exponential()
        if kind == "hyperbolic":
            if not self.has("k"):
                raise ConfigError(
                    "missing required key 'k' (needed when discounting = hyperbolic)"
                )
            try:
                return DiscountSpec.hyperbolic(self.get_float("k"))
            except ValueError as exc:
                raise ConfigError(str(exc))
        raise ConfigError(f"key 'discounting': must be exponential or hyperbolic, got {kind!r}")

    def cobb_douglas(self, required: bool = False) -> CobbDouglas | None:
        keys = ("A", "L", "alpha_L", "b")
        present = [k for k in keys if self.has(k)]
        if not present and not required:
            return None
        try:
            return CobbDouglas(
                A=self.get_float("A", 1.0),
                L=self.get_float("L", 1.0),
                alpha_L=self.get_float("alpha_L", 0.5),
                b=self.get_float("b", 0.5),
            )
        except ValueError as exc:
            raise ConfigError(str(exc))

    def model(self) -> DynamicsModel:
        name = self.get_str("model")
        try:
            law = Law(name)
        except ValueError:
            valid = ", ".join(l.value for l in Law)
            raise ConfigError(f"key 'model': unknown law {name!r} (expected one of: {valid})")
        rate_response = None
        if law is Law.SYSTEM38:
            if not (self.has("f0") and self.has("f1")):
                raise ConfigError("missing required keys 'f0'/'f1' (needed by model = system38)")
            rate_response = (self.get_float("f0"), self.get_float("f1"))
        try:
            return DynamicsModel(
                law=law,
                investment_gain=self.get_float("investment_gain", 1.0),
                rate_response=rate_response,
            )
        except ValueError as exc:
            raise ConfigError(str(exc))


def _write_lines(out_path: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_multiplier(cfg: Config, args) -> list[str]:
    params = cfg.economy()
    disc = cfg.discounting()
    lines = []
    m = core.future_multiplier(params)
    lines.append(f"M_status = {m.status.value}")
    lines.append(f"M_growth_ratio = {fmt(m.growth_ratio)}")
    if m.convergent:
        lines.append(f"M = {fmt(m.value)}")
    if disc.kind == "exponential":
        mr = core.present_multiplier(params)
    else:
        mr = hyperbolic.hyperbolic_multiplier(params, hyperbolic.HyperbolicSpec(disc.k))
    lines.append(f"M_r_status = {mr.status.value}")
    lines.append(f"M_r_growth_ratio = {fmt(mr.growth_ratio)}")
    if mr.convergent:
        lines.append(f"M_r = {fmt(mr.value)}")
    return lines


def cmd_optimum(cfg: Config, args) -> list[str]:
    params = cfg.economy()
    opt = core.optimal_share(params, tol=args.tolerance)
    lines = [
        f"regime = {opt.regime.value}",
        f"discriminant = {fmt(opt.discriminant)}",
        f"equilibrium_gap = {fmt(core.equilibrium_gap(params))}",
    ]
    if cfg.has("k"):
        spec = hyperbolic.HyperbolicSpec(cfg.get_float("k"))
        try:
            roots = hyperbolic.hyperbolic_share_optimum(params, spec)
        except core.DivergentRegionError as exc:
            raise NumericalError(str(exc))
        if roots:
            lines.append("hyperbolic_roots = " + ",".join(fmt(r) for r in roots))
        else:
            lines.append("hyperbolic_roots = none")
    return lines


def cmd_simulate(cfg: Config, args) -> list[str]:
    params = cfg.economy()
    model = cfg.model()
    cd = cfg.cobb_douglas(required=model.law.needs_cobb_douglas)
    K0 = cfg.get_float("K0")
    horizon = cfg.get_float("horizon")
    dt_out = cfg.get_float("dt_out") if cfg.has("dt_out") else None
    controls = IntegrationControls(dt_out=dt_out)
    try:
        traj = dynamics.simulate(model, cd, params, K0, horizon, controls)
    except ValueError as exc:
        raise ConfigError(str(exc))
    if traj.terminated is dynamics.Termination.STEP_FAILURE:
        raise NumericalError("integration failed: step controller below minimum step")
    lines = [",".join(TRAJECTORY_COLUMNS)]
    for s in traj.samples:
        status = "Convergent" if s.M_r is not None else "Divergent"
        mr = fmt(s.M_r) if s.M_r is not None else "nan"
        lines.append(",".join([fmt(s.t), fmt(s.K), fmt(s.p), fmt(s.R),
                               fmt(s.c), mr, status]))
    return lines


SWEEP_COLUMNS = (
    "index", "variable", "value", "M", "M_r", "status", "growth_ratio",
    "dMr_dp", "dMr_dR", "dMr_dc", "regime",
)


def _sweep_row(idx, variable, value, base, disc, tolerance):
    if variable == "k":
        params = base
        disc = DiscountSpec.hyperbolic(value)
    else:
        params = base.replace(**{variable: value})
    m = core.future_multiplier(params)
    if disc.kind == "exponential":
        mr = core.present_multiplier(params)
    else:
        mr = hyperbolic.hyperbolic_multiplier(params, hyperbolic.HyperbolicSpec(disc.k))
    regime = core.optimal_share(params, tol=tolerance).regime.value
    if mr.convergent and disc.kind == "exponential":
        rep = sensitivity.partials(params)
        grads = (rep.dMr_dp, rep.dMr_dR, rep.dMr_dc)
    else:
        grads = (float("nan"),) * 3
    return ",".join([
        str(idx), variable, fmt(value),
        fmt(m.value) if m.convergent else "nan",
        fmt(mr.value) if mr.convergent else "nan",
        mr.status.value, fmt(mr.growth_ratio),
        fmt(grads[0]), fmt(grads[1]), fmt(grads[2]), regime,
    ])


def cmd_sweep(cfg: Config, args) -> list[str]:
    base = cfg.economy()
    disc = cfg.discounting()
    variable = cfg.get_str("sweep.variable")
    if variable not in ("c", "p", "n", "R", "k"):
        raise ConfigError(f"key 'sweep.variable': must be one of c, p, n, R, k, got {variable!r}")
    lo = cfg.get_float("sweep.from")
    hi = cfg.get_float("sweep.to")
    steps = cfg.get_int("sweep.steps")
    if steps < 1:
        raise ConfigError("key 'sweep.steps': must be >= 1")
    if variable == "k" and disc.kind != "hyperbolic":
        raise ConfigError("sweeping k requires discounting = hyperbolic")
    grid = np.linspace(lo, hi, steps)

    def row(item):
        idx, value = item
        try:
            return _sweep_row(idx, variable, float(value), base, disc, args.tolerance)
        except ValueError as exc:
            raise ConfigError(f"sweep point {variable} = {value}: {exc}")

    items = list(enumerate(grid))
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(row, items))
    else:
        rows = [row(item) for item in items]
    return [",".join(SWEEP_COLUMNS)] + rows


def cmd_sensitivity(cfg: Config, args) -> list[str]:
    params = cfg.economy()
    try:
        rep = sensitivity.partials(params)
    except core.DivergentRegionError as exc:
        raise NumericalError(str(exc))

    def fd(attr: str, step: float = 1e-6) -> float:
        hi = core.present_multiplier(params.replace(**{attr: getattr(params, attr) + step}))
        lo = core.present_multiplier(params.replace(**{attr: getattr(params, attr) - step}))
        return (hi.value - lo.value) / (2.0 * step)

    lines = [
        f"dMr_dp = {fmt(rep.dMr_dp)}",
        f"dMr_dR = {fmt(rep.dMr_dR)}",
        f"dMr_dc = {fmt(rep.dMr_dc)}",
        f"fd_residual_p = {fmt(rep.dMr_dp - fd('p'))}",
        f"fd_residual_R = {fmt(rep.dMr_dR - fd('R'))}",
        f"fd_residual_c = {fmt(rep.dMr_dc - fd('c'))}",
    ]
    return lines


def cmd_predict(cfg: Config, args) -> list[str]:
    params = cfg.economy()
    cd = cfg.cobb_douglas(required=True)
    step = cfg.get_float("perturbation", 0.01)
    try:
        report = predictions.check_predictions(params, cd, step)
        falls = predictions.sign_table(predictions.Scenario.R_FALLS, params, cd, step)
        grows = predictions.sign_table(predictions.Scenario.R_GROWS, params, cd, step)
    except ValueError as exc:
        raise NumericalError(str(exc))
    lines = []
    for check in report.checks:
        verdict = "pass" if check.passed else "FAIL"
        lines.append(f"prediction {check.number:2d}: {verdict}  {check.statement} ({check.detail})")
    header = "scenario  " + "  ".join(f"{q:>14s}" for q in predictions.TABLE_QUANTITIES)
    lines.append(header)
    for table in (falls, grows):
        cells = "  ".join(f"{table.entries[q].value:>14s}" for q in predictions.TABLE_QUANTITIES)
        lines.append(f"{table.scenario.value:8s}  {cells}")
    return lines


def cmd_adjudicate(cfg: Config, args) -> list[str]:
    params = cfg.economy()
    if not cfg.has("k"):
        raise ConfigError("missing required key 'k' (hyperbolic coefficient)")
    spec = hyperbolic.HyperbolicSpec(cfg.get_float("k"))
    horizons_raw = cfg.get_str("horizons", "10,100,1000")
    try:
        horizons = [float(h) for h in horizons_raw.split(",") if h.strip()]
    except ValueError:
        raise ConfigError(f"key 'horizons': not a comma-separated number list: {horizons_raw!r}")
    try:
        report = hyperbolic.continuous_time_adjudicator(params, spec, horizons)
    except ValueError as exc:
        raise NumericalError(str(exc))
    lines = []
    for horizon, value in zip(report.horizons, report.partial_integrals):
        lines.append(f"partial_integral T={fmt(horizon)} = {fmt(value)}")
    lines.append(f"candidate_limit = {fmt(report.candidate_limit)}")
    return lines


COMMANDS = {
    "multiplier": cmd_multiplier,
    "optimum": cmd_optimum,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "sensitivity": cmd_sensitivity,
    "predict": cmd_predict,
    "adjudicate": cmd_adjudicate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capmult",
        description="Present-value multiplier of future consumer goods: "
        "closed forms, dynamics and prediction checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to a key = value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (repeatable; wins over the file)")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
        p.add_argument("--tolerance", type=float, default=core.DEFAULT_EQ_TOL,
                       help="absolute tolerance for equality-type classifications")
    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        values = parse_config_file(args.config) if args.config else {}
        values = apply_overrides(values, args.set)
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        lines = COMMANDS[args.command](Config(values), args)
        _write_lines(args.out, lines)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
