"""Batch driver: ``stripemin {sweep,point,exact,verify}``.

Configuration is an INI-style file (``--config``) with sections ``[kernel]``,
``[local_term]``, ``[run]`` and ``[solver]``; command-line flags override it.
Every command writes CSV (header row first, ``#`` footer lines last) to ``--out``
or standard output.

Exit codes: 0 success, 1 invariant failure or unclassified point, 2 config error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import exact_example as ex
from .energy import euler_lagrange_residual
from .kernel import MixtureKernel, power_law_approximation
from .local_term import LocalTerm
from .minimizer import SolverOptions, SweepError, grid_size, inner_minimize, outer_minimize, phase_sweep
from .reflection import chessboard_campaign, lemma1_campaign

log = logging.getLogger("stripemin")

MODES = {"sweep": "phase_sweep", "point": "single_point", "exact": "exact_example",
         "verify": "verify_rp"}
SWEEP_COLUMNS = ["lambda", "T_star", "e0", "e_const", "regime", "pg_norm", "iters"]
EXACT_COLUMNS = ["lambda", "phi0", "e_const", "mu1", "mu2", "theta", "delta_E"]
VERIFY_COLUMNS = ["seed", "case", "check", "blocks", "lhs", "rhs", "margin"]
DEFAULT_EXACT_LAMBDAS = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 5.0)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    mode: str
    strength: float = 1.0
    components: list = field(default_factory=lambda: [(1.0, 1.0)])
    power_law: Optional[tuple] = None          # (exponent, count, (lo, hi))
    variant: str = "vee"
    beta: Optional[float] = None
    lambdas: list = field(default_factory=list)
    t_min: float = 0.5
    t_max: float = 60.0
    h: float = 0.02
    period: Optional[float] = None
    cases: int = 100
    check: str = "all"
    rp_tol: float = 1e-8
    tol: float = 1e-8
    max_iter: int = 50_000
    margin: float = 1e-4
    scan_points: int = 24
    golden_tol: float = 1e-3
    seed: int = 0
    out: Optional[str] = None

    def kernel(self, strength: Optional[float] = None) -> MixtureKernel:
        s = self.strength if strength is None else strength
        if self.power_law is not None:
            exponent, count, rng = self.power_law
            return power_law_approximation(exponent, count, rng, strength=s)
        return MixtureKernel.from_components(s, self.components)

    def term(self) -> LocalTerm:
        return LocalTerm(self.variant, self.beta)

    def solver_options(self) -> SolverOptions:
        return SolverOptions(tol=self.tol, max_iter=self.max_iter, h_target=self.h,
                             t_range=(self.t_min, self.t_max), scan_points=self.scan_points,
                             golden_tol=self.golden_tol, margin=self.margin, seed=self.seed)

    def digest(self) -> str:
        # the output path does not influence results, so it stays out of the hash
        settings = {k: v for k, v in asdict(self).items() if k != "out"}
        payload = json.dumps(settings, sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def validate(self):
        for name in ("tol", "margin", "h", "rp_tol", "golden_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name}: must be positive")
        if not 0 < self.t_min < self.t_max:
            raise ConfigError(f"t_min/t_max: need 0 < t_min < t_max, got {self.t_min}, {self.t_max}")
        if self.h > self.t_min / 10:
            raise ConfigError(f"h: must be <= t_min/10 = {self.t_min / 10:g}, got {self.h:g}")
        if self.mode == "phase_sweep" and not self.lambdas:
            raise ConfigError("lambda: sweep needs a nonempty list")
        if any(c < 0 for c in self.lambdas):
            raise ConfigError("lambda: couplings must be >= 0")
        if self.check not in ("lemma1", "chessboard", "all"):
            raise ConfigError(f"check: unknown value {self.check!r}")
        if self.cases < 1:
            raise ConfigError("cases: must be >= 1")
        try:
            self.kernel()
        except ValueError as exc:
            raise ConfigError(f"kernel: {exc}") from None
        try:
            self.term()
        except ValueError as exc:
            raise ConfigError(f"local_term.variant/beta: {exc}") from None


def _floats(text: str) -> list[float]:
    return [float(t) for t in re.split(r"[,\s]+", text.strip()) if t]


def _line_of(text: str, key: str) -> Optional[int]:
    for i, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*{re.escape(key)}\s*[=:]", line):
            return i
    return None


def load_config(path: Optional[str], mode: str) -> RunConfig:
    cfg = RunConfig(mode=mode)
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=path)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    def setting(section, key, convert, attr=None):
        if not parser.has_option(section, key):
            return
        raw = parser.get(section, key)
        try:
            setattr(cfg, attr or key, convert(raw))
        except (ValueError, TypeError) as exc:
            line = _line_of(text, key)
            where = f"{path}:{line}" if line else path
            raise ConfigError(f"{where}: [{section}] {key} = {raw!r}: {exc}") from None

    def components(raw):
        pairs = []
        for item in re.split(r"[,;]", raw):
            if item.strip():
                w, a = item.split(":")
                pairs.append((float(w), float(a)))
        return pairs

    def power_law(raw):
        vals = _floats(raw)
        if len(vals) != 4:
            raise ValueError("expected: exponent, count, rate_min, rate_max")
        return (vals[0], int(vals[1]), (vals[2], vals[3]))

    setting("kernel", "strength", float)
    setting("kernel", "components", components)
    setting("kernel", "power_law", power_law)
    setting("local_term", "variant", str.strip)
    setting("local_term", "beta", float)
    setting("run", "lambda", _floats, "lambdas")
    for key, conv in (("t_min", float), ("t_max", float), ("h", float), ("period", float),
                      ("cases", int), ("check", str.strip), ("seed", int), ("out", str.strip),
                      ("rp_tol", float)):
        setting("run", key, conv)
    for key, conv in (("tol", float), ("max_iter", int), ("margin", float),
                      ("scan_points", int), ("golden_tol", float)):
        setting("solver", key, conv)
    return cfg


def _fmt(x) -> str:
    if x is None:
        return "inf"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".9g")
    return str(x)


def _write_csv(cfg: RunConfig, columns, rows, extra_lines=(), footer=()):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    for line in extra_lines:
        buf.write(line + "\n")
    buf.write(f"# config_sha256={cfg.digest()} mode={cfg.mode} tol={cfg.tol:g} "
              f"margin={cfg.margin:g} h={cfg.h:g} rp_tol={cfg.rp_tol:g}\n")
    for line in footer:
        buf.write(f"# {line}\n")
    text = buf.getvalue()
    if cfg.out and cfg.out != "-":
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _workers(tasks: int) -> int:
    cap = os.environ.get("STRIPEMIN_THREADS")
    limit = os.cpu_count() or 1
    if cap:
        try:
            limit = min(limit, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"STRIPEMIN_THREADS: not an integer: {cap!r}") from None
    return max(1, min(limit, tasks))


def run_sweep(cfg: RunConfig) -> int:
    kernel, term, opts = cfg.kernel(), cfg.term(), cfg.solver_options()
    workers = _workers(len(cfg.lambdas))
    status = 0
    try:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                points = phase_sweep(cfg.lambdas, kernel, term, opts, map_fn=pool.map)
        else:
            points = phase_sweep(cfg.lambdas, kernel, term, opts)
    except SweepError as exc:
        log.error("%s", exc)
        points, status = exc.points, 1
    rows = [dict(zip(SWEEP_COLUMNS, (p.coupling, p.optimal_half_period, p.minimum_energy,
                                     p.constant_energy, p.regime, p.pg_norm, p.iterations)))
            for p in points]
    flagged = [f"{p.coupling:g}" for p in points if p.flagged]
    footer = [f"flagged_near_threshold={','.join(flagged)}"] if flagged else []
    _write_csv(cfg, SWEEP_COLUMNS, rows, footer=footer)
    return status


def run_point(cfg: RunConfig) -> int:
    lam = cfg.lambdas[0] if cfg.lambdas else cfg.strength
    kernel, term, opts = cfg.kernel(lam), cfg.term(), cfg.solver_options()
    if cfg.period is not None:
        period = cfg.period
    else:
        point = outer_minimize(kernel, term, options=opts)
        period = point.optimal_half_period or cfg.t_max
    rep = inner_minimize(period, grid_size(period, cfg.h), kernel, term, opts)
    x, f = rep.profile.nodes()
    rows = [{"x": xi, "f": fi} for xi, fi in zip(x, f)]
    e = rep.energy
    footer = [
        f"lambda={lam:.9g} T={period:.9g} n={rep.profile.n}",
        f"kinetic={e.kinetic:.9g} local={e.local:.9g} interaction={e.interaction:.9g} "
        f"total={e.total:.9g}",
        f"el_residual={euler_lagrange_residual(rep.profile, kernel, term):.9g}",
        f"pg_norm={rep.projected_gradient_norm:.9g} iters={rep.iterations} "
        f"converged={rep.converged}",
    ]
    _write_csv(cfg, ["x", "f"], rows, footer=footer)
    return 0 if rep.converged else 1


def run_exact(cfg: RunConfig) -> int:
    rows = []
    for lam in (cfg.lambdas or DEFAULT_EXACT_LAMBDAS):
        phi0, e_const = ex.constant_solution(lam)
        if lam > 0:
            p = ex.kink_parameters(lam)
            mu1, mu2, theta, de = p.mu1, p.mu2, p.theta, ex.energy_difference(lam)
        else:
            mu1, mu2, theta, de = 1.0, 0.0, 0.0, float("nan")
        rows.append(dict(zip(EXACT_COLUMNS, (lam, phi0, e_const, mu1, mu2, theta, de))))
    lam_c = ex.critical_lambda()
    _write_csv(cfg, EXACT_COLUMNS, rows, extra_lines=[f"lambda_c,{lam_c:.9f}"])
    return 0


def run_verify(cfg: RunConfig) -> int:
    kernel, term = cfg.kernel(), cfg.term()
    if cfg.check == "lemma1":
        rows = lemma1_campaign(cfg.seed, cfg.cases, kernel, term, h=cfg.h)
    elif cfg.check == "chessboard":
        rows = chessboard_campaign(cfg.seed, cfg.cases, kernel, term, h=cfg.h)
    else:
        lem = lemma1_campaign(cfg.seed, (cfg.cases + 1) // 2, kernel, term, h=cfg.h)
        chess = chessboard_campaign(cfg.seed, cfg.cases // 2, kernel, term, h=cfg.h)
        rows = lem + chess
    failures = [r for r in rows if r["margin"] < -cfg.rp_tol * (1.0 + abs(r["lhs"]))]
    worst = min(r["margin"] / (1.0 + abs(r["lhs"])) for r in rows)
    footer = [f"cases={len(rows)} failures={len(failures)} worst_relative_margin={worst:.9g}"]
    _write_csv(cfg, VERIFY_COLUMNS, rows, footer=footer)
    return 1 if failures else 0


RUNNERS = {"phase_sweep": run_sweep, "single_point": run_point,
           "exact_example": run_exact, "verify_rp": run_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stripemin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("sweep", "classify the regime over a list of couplings"),
                            ("point", "minimizer profile at one coupling"),
                            ("exact", "closed-form table for the exponential/vee example"),
                            ("verify", "randomized reflection-positivity campaign")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH")
        p.add_argument("--lambda", dest="lambdas", metavar="LIST",
                       help="comma-separated couplings")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--seed", type=int)
        p.add_argument("--h", type=float)
        p.add_argument("--tmax", type=float)
        p.add_argument("--cases", type=int)
        p.add_argument("--check", choices=("lemma1", "chessboard", "all"))
        p.add_argument("--period", type=float)
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def resolve(args) -> RunConfig:
    cfg = load_config(args.config, MODES[args.command])
    if args.lambdas is not None:
        try:
            cfg.lambdas = _floats(args.lambdas)
        except ValueError:
            raise ConfigError(f"--lambda: cannot parse {args.lambdas!r}") from None
    for flag, attr in (("out", "out"), ("seed", "seed"), ("h", "h"), ("tmax", "t_max"),
                       ("cases", "cases"), ("check", "check"), ("period", "period")):
        value = getattr(args, flag)
        if value is not None:
            setattr(cfg, attr, value)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = resolve(args)
        return RUNNERS[cfg.mode](cfg)
    except ConfigError as exc:
        print(f"stripemin: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"stripemin: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
