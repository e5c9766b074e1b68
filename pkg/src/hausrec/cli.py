"""Command-line front end.

Exit codes: 0 success, 1 internal error or failed cross-check, 2 usage or
parse error, 3 precision failure, 4 insufficient data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import secrets
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import __version__, kernels
from .bounds import (
    DEFAULT_CLASSIFY,
    bound_document,
    density_lower_bound,
    measure_lower_bound,
)
from .errors import HausrecError, InsufficientData, InvalidArgument, PrecisionFailure
from .induced import (
    ball_measure,
    ergodic_ratio_check,
    first_return_times,
    induced_record_transfer,
)
from .mixing import correlation_estimate, fit_decay
from .recurrence import (
    DEFAULT_TAIL_START,
    Alpha,
    dim_lower_bound,
    exponent_sequence,
    scan_records,
)
from .symbolic import SymbolCode, random_code
from .systems import (
    Arc,
    CantorOdometer,
    Cylinder,
    DoublingMap,
    RotationPoint,
    parse_point,
    parse_system,
    point_text,
    random_dyadic,
)
from .validation import cross_validate

log = logging.getLogger("hausrec")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_PRECISION, EXIT_INSUFFICIENT = 0, 1, 2, 3, 4

DEFAULT_HORIZON = 1 << 16
GUARD_DIGITS = 8


@dataclass
class RunConfig:
    command: str = ""
    system: str = "odometer"
    point: Optional[str] = None
    horizon: int = DEFAULT_HORIZON
    k0: int = DEFAULT_TAIL_START
    alpha: Optional[str] = None
    samples: int = 100
    seed: Optional[int] = None
    out: Optional[str] = None
    format: str = "csv"
    mode: str = "pairwise"
    depth: Optional[int] = None
    classify_run: int = DEFAULT_CLASSIFY["run"]
    classify_factor: float = DEFAULT_CLASSIFY["factor"]
    cylinder: Optional[str] = None
    arc: Optional[str] = None
    returns: int = 100
    transfer: bool = False
    f: str = "xc"
    g: str = "xc"
    lags: str = "1..10"
    window: Optional[str] = None
    workers: int = 1
    quick: bool = False
    backend: Optional[str] = None

    def as_dict(self) -> dict:
        d = asdict(self)
        d["backend"] = self.backend or kernels.BACKEND
        return d


# ---------------------------------------------------------------------------
# parsing helpers


def depth_rule(horizon: int) -> int:
    """Sampled digits for random adding-machine points: ``ceil(log2 N) + 8``."""
    return max(1, math.ceil(math.log2(horizon)) if horizon > 1 else 0) + GUARD_DIGITS


_RANDOM_RE = re.compile(r"^random(?::(.*))?$")


def resolve_point(system, text: Optional[str], cfg: RunConfig, index: int = 0):
    """Point from its text; ``random[:depth=D,seed=S]`` draws one."""
    if text is None:
        text = "random"
    m = _RANDOM_RE.match(text.strip())
    if not m:
        return parse_point(system, text)
    opts = {}
    for part in filter(None, (m.group(1) or "").split(",")):
        key, _, val = part.partition("=")
        if key not in ("depth", "seed") or not val.isdigit():
            raise InvalidArgument(f"bad random point option {part!r}")
        opts[key] = int(val)
    seed = opts.get("seed", sample_seed(cfg.seed, index))
    if isinstance(system, CantorOdometer):
        return random_code(opts.get("depth", cfg.depth or depth_rule(cfg.horizon)), seed)
    if isinstance(system, DoublingMap):
        return random_dyadic(opts.get("depth", cfg.depth or cfg.horizon + 64), seed)
    rng = np.random.Generator(np.random.PCG64(seed))
    return RotationPoint(Fraction(int(rng.integers(0, 1 << 32)), 1 << 32))


def sample_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


def parse_lags(text: str) -> List[int]:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if m:
        return list(range(int(m.group(1)), int(m.group(2)) + 1))
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InvalidArgument(f"bad lag list {text!r}") from exc


def parse_arc(text: str) -> Arc:
    try:
        a, b = (Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidArgument(f"bad arc {text!r}; use START,END") from exc
    return Arc(a, b)


# ---------------------------------------------------------------------------
# output


def _emit(text: str, cfg: RunConfig, meta: Optional[dict] = None):
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
        if meta is not None:
            with open(cfg.out + ".meta.json", "w") as fh:
                json.dump(meta, fh, indent=2, sort_keys=True)
                fh.write("\n")
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if records and all(r.exact for r in records):
        w.writerow(["n", "d_num", "d_den"])
        for r in records:
            w.writerow([r.n, r.d.numerator, r.d.denominator])
    else:
        w.writerow(["n", "d", "err"])
        for r in records:
            w.writerow([r.n, repr(float(r.d)), repr(r.err)])
    return buf.getvalue()


def _record_json(r) -> dict:
    if r.exact:
        return {"n": r.n, "d_num": r.d.numerator, "d_den": r.d.denominator}
    return {"n": r.n, "d": float(r.d), "err": r.err}


# ---------------------------------------------------------------------------
# commands


def cmd_scan(cfg: RunConfig) -> int:
    system = parse_system(cfg.system)
    point = resolve_point(system, cfg.point, cfg)
    profile = scan_records(system, point, cfg.horizon, backend=cfg.backend)
    meta = {"config": cfg.as_dict(), "point": point_text(point), "records": len(profile.records),
            "terminated": profile.terminated}
    if cfg.format == "json":
        meta["data"] = [_record_json(r) for r in profile.records]
        _emit(_json(meta), cfg)
    else:
        _emit(records_csv(profile.records), cfg, meta)
    return EXIT_OK


def cmd_dim(cfg: RunConfig) -> int:
    system = parse_system(cfg.system)
    point = resolve_point(system, cfg.point, cfg)
    profile = scan_records(system, point, cfg.horizon, backend=cfg.backend)
    value = dim_lower_bound(profile, cfg.k0, cfg.mode)
    doc = {
        "config": cfg.as_dict(),
        "point": point_text(point),
        "dim_lower_bound": value,
        "mode": cfg.mode,
        "tail_window": [cfg.k0, len(profile.records) - 1],
        "exponents": exponent_sequence(profile, cfg.mode),
        "records": len(profile.records),
    }
    _emit(_json(doc), cfg)
    return EXIT_OK


def _measure_one(args):
    cfg, index = args
    system = parse_system(cfg.system)
    point = resolve_point(system, cfg.point, cfg, index)
    profile = scan_records(system, point, cfg.horizon, backend=cfg.backend)
    return density_lower_bound(profile, Alpha.parse(cfg.alpha), cfg.k0)


def cmd_measure(cfg: RunConfig) -> int:
    if cfg.alpha is None:
        raise InvalidArgument("--alpha is required")
    Alpha.parse(cfg.alpha)
    if cfg.samples < 1:
        raise InvalidArgument("--samples must be >= 1")
    M = cfg.samples if cfg.point is None or cfg.point.startswith("random") else 1
    jobs = [(cfg, i) for i in range(M)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            bounds = list(pool.map(_measure_one, jobs))
    else:
        bounds = [_measure_one(j) for j in jobs]
    hb = measure_lower_bound(bounds, horizon=cfg.horizon, tail_start=cfg.k0, seed=cfg.seed)
    params = {"run": cfg.classify_run, "factor": cfg.classify_factor}
    doc = bound_document(hb, params, {"config": cfg.as_dict(), "min_g_lower": min(hb.g_lowers)})
    _emit(_json(doc), cfg)
    return EXIT_OK


def _ball(system, cfg: RunConfig):
    if isinstance(system, CantorOdometer):
        if cfg.cylinder is None:
            raise InvalidArgument("--cylinder is required for the odometer")
        return Cylinder.parse(cfg.cylinder)
    if cfg.arc is None:
        raise InvalidArgument("--arc START,END is required for circle maps")
    return parse_arc(cfg.arc)


def cmd_induced(cfg: RunConfig) -> int:
    system = parse_system(cfg.system)
    ball = _ball(system, cfg)
    if cfg.point is not None:
        y = resolve_point(system, cfg.point, cfg)
    elif isinstance(ball, Cylinder):
        y = SymbolCode.from_digits(ball.word)
    elif isinstance(system, DoublingMap):
        y = parse_point(system, str(ball.start % 1))
    else:
        y = RotationPoint(ball.start)
    if cfg.transfer:
        if cfg.alpha is None:
            raise InvalidArgument("--alpha is required with --transfer")
        rep = induced_record_transfer(system, ball, y, Alpha.parse(cfg.alpha), cfg.horizon,
                                      cfg.returns, cfg.k0)
        doc = rep.as_dict()
        doc["config"] = cfg.as_dict()
        _emit(_json(doc), cfg)
        return EXIT_OK
    prof = first_return_times(system, ball, y, cfg.returns)
    meta = {"config": cfg.as_dict(), "point": point_text(y), "mu_B": str(ball_measure(ball))}
    if len(prof.return_times) >= 10:
        rep = ergodic_ratio_check(prof, ball)
        meta["ergodic"] = {"ratio": str(rep.ratio), "measure": str(rep.measure), "gap": rep.gap,
                           "flagged": rep.flagged}
    if cfg.format == "json":
        meta["data"] = [{"k": k, "n_k": n, "ratio": str(r)}
                        for k, (n, r) in enumerate(zip(prof.return_times, prof.ratios), start=1)]
        _emit(_json(meta), cfg)
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "n_k", "ratio"])
    for k, (n, r) in enumerate(zip(prof.return_times, prof.ratios), start=1):
        w.writerow([k, n, str(r)])
    _emit(buf.getvalue(), cfg, meta)
    return EXIT_OK


def cmd_corr(cfg: RunConfig) -> int:
    system = parse_system(cfg.system)
    seed = cfg.seed
    series = correlation_estimate(system, cfg.f, cfg.g, parse_lags(cfg.lags), cfg.samples, seed)
    window = None
    if cfg.window:
        lo, hi = parse_lags(cfg.window)[0], parse_lags(cfg.window)[-1]
        window = (lo, hi)
    try:
        fit = fit_decay(series, window).as_dict()
    except InsufficientData as exc:
        fit = {"error": str(exc)}
    meta = {"config": cfg.as_dict(), "fit": fit, "M": series.M}
    if cfg.format == "json":
        meta["data"] = [{"lag": n, "value": v, "stderr": e}
                        for n, v, e in zip(series.lags, series.values, series.stderr)]
        _emit(_json(meta), cfg)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lag", "value", "stderr"])
        for n, v, e in zip(series.lags, series.values, series.stderr):
            w.writerow([n, repr(v), repr(e)])
        _emit(buf.getvalue(), cfg, meta)
    if "gamma" in fit:
        print(f"gamma={fit['gamma']:.6g} C={fit['C']:.6g} window={fit['window']}", file=sys.stderr)
    return EXIT_OK


def cmd_oracle_check(cfg: RunConfig) -> int:
    results = cross_validate(quick=cfg.quick, seed=cfg.seed)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_INTERNAL


COMMANDS = {
    "scan": cmd_scan,
    "dim": cmd_dim,
    "measure": cmd_measure,
    "induced": cmd_induced,
    "corr": cmd_corr,
    "oracle-check": cmd_oracle_check,
}


# ---------------------------------------------------------------------------
# argument handling


def _int_expr(text: str) -> int:
    """Integers, also as powers like ``2**20`` or ``2^20``."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:(?:\*\*|\^)\s*(\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    base = int(m.group(1))
    return base ** int(m.group(2)) if m.group(2) else base


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--system", help="odometer | doubling | rotation:frac=p/q | rotation:cf=[0;(1)]")
    common.add_argument("--point", help='code text "01(0)", circle coordinate, or random:depth=D,seed=S')
    common.add_argument("--horizon", type=_int_expr)
    common.add_argument("--k0", "--tail", dest="k0", type=int, help="records discarded before the tail")
    common.add_argument("--alpha", help="positive real or log3(2)")
    common.add_argument("--samples", "-M", dest="samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--depth", type=int, help="digits for random points (default: depth rule)")
    common.add_argument("--out", help="output path (sidecar PATH.meta.json for CSV)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--backend", choices=("cython", "python"))
    common.add_argument("--workers", type=int)

    parser = argparse.ArgumentParser(prog="hausrec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("scan", parents=[common], help="closest-return records")
    p = sub.add_parser("dim", parents=[common], help="dimension lower bound from record exponents")
    p.add_argument("--mode", choices=("pairwise", "pointwise"))
    p = sub.add_parser("measure", parents=[common], help="Hausdorff measure lower bound")
    p.add_argument("--classify-run", dest="classify_run", type=int)
    p.add_argument("--classify-factor", dest="classify_factor", type=float)
    p = sub.add_parser("induced", parents=[common], help="first returns to a cylinder or arc")
    p.add_argument("--cylinder")
    p.add_argument("--arc", help="START,END")
    p.add_argument("--returns", type=int)
    p.add_argument("--transfer", action="store_true", default=None)
    p = sub.add_parser("corr", parents=[common], help="correlation decay estimate and fit")
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--lags")
    p.add_argument("--window", help="fit window LO..HI (default: significant lags)")
    p = sub.add_parser("oracle-check", parents=[common], help="cross-validate against oracles")
    p.add_argument("--quick", action="store_true", default=None)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    base = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidArgument(f"cannot read config: {exc}") from exc
    names = {f.name for f in fields(RunConfig)}
    unknown = set(base) - names
    if unknown:
        raise InvalidArgument(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig(**base)
    for name in names:
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    cfg.command = args.command
    if cfg.seed is None:
        cfg.seed = secrets.randbits(63)
    if cfg.horizon < 1:
        raise InvalidArgument("--horizon must be >= 1")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except PrecisionFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except InsufficientData as exc:
        print(f"error: insufficient data: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except InvalidArgument as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HausrecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
