"""Command-line entry point: `bykov-lab <subcommand> [flags]`.

Model, integrator, Lyapunov and sweep options can come from a TOML file given with --config;
flags given on the command line override the file. Exit codes: 0 on success, 1 when a computation
or the validation suite fails, 2 on usage and configuration errors.
"""

import argparse
import logging
import math
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel
from tabulate import tabulate

from bykov_lab.caches.disk_cache import DiskCache, DiskCacheConfig
from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.configs.lyapunov import SpectrumSettings
from bykov_lab.configs.model import ORBIT_START, PLANAR_START, ModelParams
from bykov_lab.configs.run import RunConfig, SweepSettings
from bykov_lab.core.errors import BykovLabError, ConfigError, DomainError, QuotientInvalid, Unconverged, describe_error
from bykov_lab.core.state import State, parse_state
from bykov_lab.geometry.cycles import DEFAULT_CYCLE_TOL, DEFAULT_TRANSIENT, find_limit_cycle_2d
from bykov_lab.geometry.portrait import hausdorff_half_split, hits_to_frame, portrait_to_csv, section_hits
from bykov_lab.geometry.rotation import MIN_HITS, ReturnSeries, is_mode_locked, nearest_rational, rotation_number
from bykov_lab.integrate.sections import SectionSpec
from bykov_lab.integrate.trajectory import integrate
from bykov_lab.lyapunov.classify import AttractorClass, classify, count_nonnegative
from bykov_lab.lyapunov.spectrum import SpectrumResult, field_spectrum
from bykov_lab.model.constants import derived_constants, h1_curve, h2_curve
from bykov_lab.model.field import system_for
from bykov_lab.sweep.io import csv_to_grid, grid_to_csv
from bykov_lab.sweep.render import render_grid
from bykov_lab.sweep.runner import THREADS_ENV, default_workers, run_sweep
from bykov_lab.validation import all_passed, format_report, run_validation

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

Handler = Callable[[argparse.Namespace], int]

_ORBIT_TEXT = ",".join(str(v) for v in ORBIT_START)
_PLANAR_TEXT = ",".join(str(v) for v in PLANAR_START)


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    """Shows defaults, except for flags defaulting to None; config-backed flags name theirs in the help text."""

    def _get_help_string(self, action: argparse.Action) -> str:
        if action.default is None:
            return action.help or ""
        return super()._get_help_string(action) or ""


def _state_arg(dim: int | None = None) -> Callable[[str], State]:
    def parse(text: str) -> State:
        try:
            return parse_state(text, dim)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from e

    return parse


def _bounded(
    name: str, check: Callable[[float], bool], kind: Callable[[str], float] = float
) -> Callable[[str], float]:
    def parse(text: str) -> float:
        try:
            value = kind(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"{text!r} is not a number") from e
        if not (math.isfinite(value) and check(value)):
            raise argparse.ArgumentTypeError(f"must be {name}, got {text}")
        return value

    return parse


_positive = _bounded("positive", lambda v: v > 0)
_non_negative = _bounded("non-negative", lambda v: v >= 0)
_count = _bounded("a positive integer", lambda v: v >= 1, int)


def _show(value: Any) -> str:
    if isinstance(value, tuple):
        return ",".join(f"{v:g}" if isinstance(v, float) else str(v) for v in value)
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def _field_flag(
    group: argparse._ArgumentGroup,
    section: str,
    model: type[BaseModel],
    name: str,
    help: str,
    flag: str | None = None,
    **kwargs: Any,
) -> None:
    # Defaults stay None so only flags given on the command line override the config file.
    default = model.model_fields[name].default
    group.add_argument(
        flag or "--" + name.replace("_", "-"),
        dest=f"{section}.{name}",
        default=None,
        help=f"{help} (default: {_show(default)})",
        **kwargs,
    )


def _add_model_flags(parser: argparse.ArgumentParser, names: Sequence[str] | None = None) -> None:
    group = parser.add_argument_group("model parameters")
    helps = {
        "alpha": "rate of the quadratic terms, > 0",
        "beta": "rate of the cubic terms, < 0 with |beta| < alpha",
        "omega": "rotation speed in the (x1, x2) plane, > 0",
        "tau1": "gamma2-breaking amplitude in [0, 1]",
        "tau2": "SO(2)-breaking amplitude in [0, 1]",
        "kappa": "amplitude of the term breaking every symmetry and the sphere invariance",
    }
    for name in names or helps:
        _field_flag(group, "model", ModelParams, name, helps[name], type=float)


def _add_integrator_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("integrator")
    _field_flag(group, "integrator", IntegratorConfig, "rtol", "relative local error tolerance", type=float)
    _field_flag(group, "integrator", IntegratorConfig, "atol", "absolute local error tolerance", type=float)
    _field_flag(group, "integrator", IntegratorConfig, "max_step", "largest step size", type=float)
    _field_flag(
        group, "integrator", IntegratorConfig, "method", "Runge-Kutta pair", choices=["RK45", "DOP853"]
    )
    _field_flag(
        group,
        "integrator",
        IntegratorConfig,
        "project_to_sphere",
        "rescale every accepted 4D step to unit norm",
        flag="--project",
        action=argparse.BooleanOptionalAction,
    )
    _field_flag(group, "integrator", IntegratorConfig, "t_transient", "spectrum transient", type=float)
    _field_flag(group, "integrator", IntegratorConfig, "sample_dt", "spacing of stored trajectory samples", type=float)


def _add_lyapunov_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("lyapunov spectrum")
    _field_flag(group, "lyapunov", SpectrumSettings, "T", "total time with transient", flag="--t-total", type=float)
    _field_flag(group, "lyapunov", SpectrumSettings, "gs_interval", "time between reorthonormalizations", type=float)
    _field_flag(group, "lyapunov", SpectrumSettings, "zero_tol", "exponents within this of 0 count as zero", type=float)
    _field_flag(
        group,
        "lyapunov",
        SpectrumSettings,
        "convergence_tol",
        "largest allowed spread of the running estimates over the last 10%% of the run",
        type=float,
    )
    _field_flag(group, "lyapunov", SpectrumSettings, "n_vectors", "tangent vectors carried", type=int)


def _add_sweep_flags(parser: argparse.ArgumentParser, outputs: bool) -> None:
    group = parser.add_argument_group("sweep grid")
    for name in ("tau1_range", "tau2_range"):
        _field_flag(
            group, "sweep", SweepSettings, name, f"{name[:4]} interval", nargs=2, type=float, metavar=("LO", "HI")
        )
    _field_flag(group, "sweep", SweepSettings, "n1", "number of tau1 values (image width)", type=int)
    _field_flag(group, "sweep", SweepSettings, "n2", "number of tau2 values (image height)", type=int)
    _field_flag(group, "sweep", SweepSettings, "x0", "initial condition of every cell", type=_state_arg(4))
    if not outputs:
        return
    _field_flag(
        group, "sweep", SweepSettings, "workers", f"worker processes; None reads {THREADS_ENV}", type=int
    )
    _field_flag(group, "sweep", SweepSettings, "out", "cell CSV, also the checkpoint a rerun resumes", type=Path)
    _field_flag(group, "sweep", SweepSettings, "image", "PPM raster of the finished grid", type=Path)
    _field_flag(group, "sweep", SweepSettings, "cache_dir", "persistent spectrum cache directory", type=Path)


def _plain(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return tuple(value.tolist())
    if isinstance(value, list):
        return tuple(value)
    return value


def _run_config(args: argparse.Namespace) -> RunConfig:
    overrides: dict[str, dict[str, Any]] = {}
    for key, value in vars(args).items():
        if "." in key:
            section, name = key.split(".", 1)
            overrides.setdefault(section, {})[name] = _plain(value)
    return RunConfig.from_toml(getattr(args, "config", None), overrides)


def _table(rows: Sequence[Sequence[Any]], headers: Sequence[str]) -> str:
    return tabulate(rows, headers=list(headers), tablefmt="github", floatfmt=".6g")


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    traj = integrate(cfg.model, args.ic, args.t_end, cfg.integrator)
    traj.to_csv(args.out)
    drift = traj.max_norm_drift() if traj.dim == 4 else math.nan
    _logger.info("wrote %d samples to %s", len(traj), args.out)
    print(
        _table(
            [[traj.dim, len(traj), args.t_end, " ".join(f"{v:.9g}" for v in traj.final_state), drift]],
            ["dim", "samples", "t_end", "final state", "max |r²-1|"],
        )
    )
    return EXIT_OK


def _cmd_poincare(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    dim = len(args.ic)
    section = SectionSpec.default() if args.section == "x2" else SectionSpec.x3_rising(dim)
    if section.dim != dim:
        raise ConfigError(f"The {args.section} section needs a {section.dim}D initial condition, got {dim}D")
    hits = section_hits(cfg.model, args.ic, args.t_end, section, cfg.integrator)
    portrait_to_csv(hits_to_frame(hits, dim), args.out)
    _logger.info("wrote %d section hits to %s", len(hits), args.out)

    row: list[Any] = [len(hits)]
    if args.section == "x2" and len(hits) >= MIN_HITS:
        estimate, stderr = rotation_number(ReturnSeries.from_hits(hits))
        spread = hausdorff_half_split([[h.state[2], h.state[3]] for h in hits])
        row += [estimate, stderr, str(nearest_rational(estimate)), is_mode_locked(estimate, stderr), spread]
    else:
        row += [math.nan, math.nan, "", "", math.nan]
    print(_table([row], ["hits", "rotation", "stderr", "nearest p/q", "locked", "half-split Hausdorff"]))
    return EXIT_OK


def _class_of(s: SpectrumResult, zero_tol: float, allow_unconverged: bool) -> AttractorClass | None:
    try:
        return classify(s, zero_tol, allow_unconverged=allow_unconverged)
    except Unconverged as e:
        _logger.warning("%s", e)
        return None


def _cmd_lyapunov(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    vf = system_for(cfg.model, len(args.ic))
    s = field_spectrum(vf, args.ic, cfg.lyapunov)
    attractor = _class_of(s, cfg.lyapunov.zero_tol, args.allow_unconverged)
    rows = [
        ["exponents", " ".join(f"{v:.6g}" for v in s.exponents)],
        ["radial", f"{s.radial_exponent:.6g}"],
        ["non-negative", count_nonnegative(s.exponents, cfg.lyapunov.zero_tol)],
        ["class", f"{attractor.label} ({attractor.color})" if attractor else "gray (unconverged)"],
        ["converged", s.converged],
        ["tail variation", f"{s.tail_variation:.3g}"],
        ["sum vs mean tr J", f"{s.exponent_sum:.6g} / {s.mean_divergence:.6g}"],
        ["positive hint", s.positive_hint],
    ]
    print(tabulate(rows, tablefmt="github"))
    if args.out is not None:
        Path(args.out).write_text(s.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    spec = cfg.sweep_spec()
    out = cfg.sweep.out
    if out is None:
        raise ConfigError("sweep needs an output CSV: pass --out or set out under [sweep]")
    workers = cfg.sweep.workers or default_workers()
    cache = DiskCache(DiskCacheConfig(db_dir=cfg.sweep.cache_dir)) if cfg.sweep.cache_dir is not None else None
    _logger.info("sweeping %dx%d cells with %d worker(s)", spec.n1, spec.n2, workers)
    try:
        grid = run_sweep(spec, workers, resume_from=out, checkpoint=out, cache=cache)
    finally:
        if cache is not None:
            _logger.debug("cache: %d hits, %d misses", cache.stats.hits, cache.stats.misses)
            cache.close()
    # The checkpoint holds cells in completion order; rewrite it in (tau2, tau1) order.
    grid_to_csv(grid, out)
    if cfg.sweep.image is not None:
        render_grid(grid, cfg.sweep.image)
    print(_table(sorted(grid.color_counts().items()), ["class", "cells"]))
    return EXIT_OK


def _cmd_render(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    grid = csv_to_grid(args.csv, cfg.sweep_spec())
    if not grid.complete:
        missing = grid.spec.n_cells - grid.done_count
        _logger.warning("%d of %d cells missing; they are drawn black", missing, grid.spec.n_cells)
    render_grid(grid, args.out)
    _logger.info("wrote %s", args.out)
    return EXIT_OK


def _cmd_reduce2d(args: argparse.Namespace) -> int:
    if args.out is None and not args.find_cycle:
        raise ConfigError("reduce2d needs --out, --find-cycle or both")
    cfg = _run_config(args)
    if args.out is not None:
        integrate(cfg.model, args.z0, args.t_end, cfg.integrator).to_csv(args.out)
        _logger.info("wrote %s", args.out)
    if args.find_cycle:
        cycle = find_limit_cycle_2d(
            cfg.model,
            args.z0,
            args.t_search,
            transient=args.transient,
            tol=args.cycle_tol,
            cfg=cfg.integrator,
        )
        print(
            _table(
                [[cycle.period, float(cycle.section_point[1]), cycle.floquet_estimate, cycle.stable]],
                ["period", "x4 at x3 = 0", "floquet", "stable"],
            )
        )
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    checks = run_validation(args.seed, args.n_tangency)
    print(format_report(checks))
    return EXIT_OK if all_passed(checks) else EXIT_FAILURE


def _cmd_curves(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    if args.komega_range is None:
        c = derived_constants(cfg.model)
        rows = [[c.Komega, h1_curve(c.Komega), h2_curve(c.Komega), c.delta1, c.delta, c.K]]
        print(_table(rows, ["Komega", "h1", "h2", "delta1", "delta", "K"]))
        return EXIT_OK
    lo, hi = args.komega_range
    if not 0.0 < lo < hi:
        raise ConfigError(f"--komega-range needs 0 < LO < HI, got {lo:g} {hi:g}")
    ks = np.logspace(math.log10(lo), math.log10(hi), args.count)
    print(_table([[float(k), h1_curve(float(k)), h2_curve(float(k))] for k in ks], ["Komega", "h1", "h2"]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log debug records (step counts, cache hits)")
    configured = argparse.ArgumentParser(add_help=False, parents=[common])
    configured.add_argument("--config", type=Path, help="TOML file with [model] [integrator] [lyapunov] [sweep] tables")

    parser = argparse.ArgumentParser(
        prog="bykov-lab", description="Torus breakdown and Bykov attractors of an equivariant flow on the 3-sphere."
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, handler: Handler, help: str, parents: list[argparse.ArgumentParser]) -> argparse.ArgumentParser:
        sub = commands.add_parser(
            name,
            help=help,
            description=help,
            parents=parents,
            formatter_class=_HelpFormatter,
        )
        sub.set_defaults(handler=handler)
        return sub

    sub = add("simulate", _cmd_simulate, "integrate one orbit and write it as CSV", [configured])
    _add_model_flags(sub)
    _add_integrator_flags(sub)
    sub.add_argument(
        "--ic", type=_state_arg(), default=_ORBIT_TEXT, help="initial state; its length picks the 4D, 3D or 2D system"
    )
    sub.add_argument("--t-end", type=_positive, default=1000.0, help="final time")
    sub.add_argument("--out", type=Path, required=True, help="trajectory CSV")

    sub = add("poincare", _cmd_poincare, "write the section hits of one orbit as CSV", [configured])
    _add_model_flags(sub)
    _add_integrator_flags(sub)
    sub.add_argument("--ic", type=_state_arg(), default=_ORBIT_TEXT, help="initial state")
    sub.add_argument("--t-end", type=_positive, default=2000.0, help="final time")
    sub.add_argument(
        "--section",
        choices=["x2", "x3"],
        default="x2",
        help="x2: x2 = 0 with x1 > 0; x3: x3 = 0 crossed upwards",
    )
    sub.add_argument("--out", type=Path, required=True, help="portrait CSV with columns t, x3, x4")

    sub = add("lyapunov", _cmd_lyapunov, "Lyapunov spectrum and attractor class of one orbit", [configured])
    _add_model_flags(sub)
    _add_integrator_flags(sub)
    _add_lyapunov_flags(sub)
    sub.add_argument("--ic", type=_state_arg(), default=_ORBIT_TEXT, help="initial state")
    sub.add_argument("--allow-unconverged", action="store_true", help="classify even if the estimates did not settle")
    sub.add_argument("--out", type=Path, default=None, help="optional JSON dump of the full result")

    sub = add("sweep", _cmd_sweep, "classify every cell of a (tau1, tau2) grid", [configured])
    _add_model_flags(sub, ["alpha", "beta", "omega", "kappa"])
    _add_integrator_flags(sub)
    _add_lyapunov_flags(sub)
    _add_sweep_flags(sub, outputs=True)

    sub = add("render", _cmd_render, "draw a sweep CSV as a PPM raster", [configured])
    _add_model_flags(sub, ["alpha", "beta", "omega", "kappa"])
    _add_sweep_flags(sub, outputs=False)
    sub.add_argument("--csv", type=Path, required=True, help="cell CSV written by sweep")
    sub.add_argument("--out", type=Path, required=True, help="PPM file")

    sub = add("reduce2d", _cmd_reduce2d, "run the planar reduced system and find its limit cycle", [configured])
    _add_model_flags(sub, ["alpha", "beta", "tau1"])
    _add_integrator_flags(sub)
    sub.add_argument("--z0", type=_state_arg(2), default=_PLANAR_TEXT, help="initial (x3, x4)")
    sub.add_argument("--t-end", type=_positive, default=1000.0, help="final time of the --out trajectory")
    sub.add_argument("--out", type=Path, default=None, help="trajectory CSV")
    sub.add_argument("--find-cycle", action="store_true", help="locate the attracting periodic orbit")
    sub.add_argument("--t-search", type=_positive, default=2000.0, help="search time after the transient")
    sub.add_argument(
        "--transient", type=_non_negative, default=DEFAULT_TRANSIENT, help="time discarded before searching"
    )
    sub.add_argument(
        "--cycle-tol", type=_positive, default=DEFAULT_CYCLE_TOL, help="agreement of successive section points"
    )

    sub = add("validate", _cmd_validate, "check the machine-precision identities of the model", [common])
    sub.add_argument("--seed", type=int, default=7, help="seed of the random sample points")
    sub.add_argument("--n-tangency", type=_count, default=10_000, help="sphere points of the tangency check")

    sub = add("curves", _cmd_curves, "regime curves h1, h2 and the derived constants", [configured])
    _add_model_flags(sub, ["alpha", "beta", "omega"])
    sub.add_argument(
        "--komega-range", type=float, nargs=2, metavar=("LO", "HI"), default=None, help="tabulate h1, h2 over LO..HI"
    )
    sub.add_argument("--count", type=_count, default=13, help="log-spaced points of --komega-range")
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(stream=sys.stderr, format="%(message)s")
    logging.getLogger("bykov_lab").setLevel(logging.DEBUG if verbose else logging.INFO)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed usage or help.
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _configure_logging(args.verbose)
    try:
        code: int = args.handler(args)
    except (ConfigError, QuotientInvalid, DomainError) as e:
        print(f"bykov-lab {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BykovLabError as e:
        print(f"bykov-lab {args.command}: {describe_error(e)}", file=sys.stderr)
        return EXIT_FAILURE
    return code
