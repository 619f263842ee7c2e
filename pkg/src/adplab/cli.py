"""Command-line front end.

    adplab certify     run one statement suite or all of them, emit a report
    adplab constants   solve for the two critical exponents
    adplab phi         evaluate phi (and its gradient) for given reduced data
    adplab rendezvous  average-distance intervals on random l_p sphere points
    adplab sweep       tabulate phi, g_min, f_sup or the gradient threshold over p

Exit codes: 0 success, 1 a suite failed (or a bracket was invalid),
2 invalid arguments or inputs.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _accel, certify, constants, phi_engine, rendezvous, report
from .lp_core import LpVector
from .reduction import ReducedConfig

SEED_ENV = "ADPLAB_SEED"
DEFAULT_P_LIST = (2.1, 2.5, 3.0, 5.0, 8.0)


class UsageError(Exception):
    pass


def fmt(x) -> str:
    return f"{float(x):.12g}"


def parse_floats(text: str):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def parse_ints(text: str):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


@dataclass
class RunConfig:
    p_list: list = field(default_factory=lambda: list(DEFAULT_P_LIST))
    grid: int = 10_000
    samples: int = 20_000
    seed: int = 0
    enum_cap: int = phi_engine.ENUM_CAP
    slack: float = certify.SLACK
    output_path: str | None = None
    format: str = "json"

    def validate(self):
        if self.grid < 2:
            raise UsageError("grid must be >= 2")
        if self.samples < 100:
            raise UsageError("samples must be >= 100")
        if not 1 <= self.enum_cap <= 30:
            raise UsageError("enum_cap must lie in [1, 30]")
        if not self.slack > 0.0:
            raise UsageError("slack must be > 0")
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        for p in self.p_list:
            if not np.isfinite(p) or p <= 2.0:
                raise UsageError(f"exponents must be finite and > 2, got {p}")
        return self


def build_run_config(args) -> RunConfig:
    """Defaults, then ADPLAB_SEED, then the config file, then flags."""
    cfg = asdict(RunConfig())
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        try:
            cfg["seed"] = int(env_seed)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV} must be an integer") from exc
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config file: {exc}") from exc
        unknown = set(doc) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(doc)
    flags = {"p_list": "p", "grid": "grid", "samples": "samples", "seed": "seed",
             "enum_cap": "enum_cap", "slack": "slack", "output_path": "output",
             "format": "format"}
    for key, attr in flags.items():
        val = getattr(args, attr, None)
        if val is not None:
            cfg[key] = val
    return RunConfig(**cfg).validate()


def _emit(reports, rc: RunConfig, timings: bool, out):
    text = (report.to_json if rc.format == "json" else report.to_csv)(reports, timings)
    if rc.output_path:
        with open(rc.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
        for r in reports:
            status = "PASS" if r.passed else ("XFAIL" if r.expected_fail else "FAIL")
            p = "-" if r.p is None else fmt(r.p)
            out.write(f"{status:5s} {r.statement_id:14s} p={p:6s} worst_margin={fmt(r.worst_margin)}\n")
    else:
        out.write(text)


# -- certify ----------------------------------------------------------------------

def _single_statement(args, rc: RunConfig):
    sid = args.statement
    if sid == "lemma3":
        n = args.n if args.n is not None else 10
        if not 1 <= n <= certify.LEMMA3_CAP:
            raise UsageError(f"lemma3 needs 1 <= n <= {certify.LEMMA3_CAP}, got {n}")
        x = certify.lemma3_vectors(n)[args.x_kind]
        return [certify.certify_lemma3(n, args.t or (0.5, 1.0, 2.0), x)]
    if sid == "intro_chain":
        return [certify.certify_intro_chain(args.p[0] if args.p else 2.05, args.n or 4)]
    reports = []
    for p in rc.p_list:
        if sid == "lemma5":
            reports.append(certify.certify_lemma5(p, rc.grid, rc.slack))
        elif sid in ("lemma2_v", "lemma2_w"):
            rv, rw = certify.certify_lemma2(p, rc.grid, rc.slack)
            reports.append(rv if sid == "lemma2_v" else rw)
        elif sid in ("prop4", "cor1"):
            fn = certify.certify_prop4 if sid == "prop4" else certify.certify_cor1
            reports.append(fn(p, args.n_values or (2, 4, 8, 16), args.d or (2, 8),
                              args.configs or 32, rc.seed))
        elif sid == "prop1_phi":
            n = args.n or 20
            if n < 4:
                raise UsageError("prop1_phi needs n >= 4")
            reports.append(certify.certify_prop1(p, n, args.configs or 20, rc.seed,
                                                 rc.samples, rc.enum_cap))
        elif sid == "lemma1_limits":
            reports.append(certify.certify_lemma1(p, max(rc.grid, 1000)))
        elif sid == "prop2_grad":
            n = args.n or 64
            if n < 4:
                raise UsageError("prop2_grad needs n >= 4")
            reports.append(certify.certify_prop2(p, n, args.configs or 100, rc.seed,
                                                 min(rc.samples, 256), min(rc.enum_cap, 16)))
    return reports


def cmd_certify(args, out=sys.stdout) -> int:
    rc = build_run_config(args)
    if not args.all and not args.statement:
        raise UsageError("give --statement ID or --all")
    if args.all:
        suite = certify.SuiteConfig(grid=rc.grid, seed=rc.seed, slack=rc.slack,
                                    enum_cap=rc.enum_cap, mc_samples=rc.samples)
        reports = certify.run_all(rc.p_list, suite)
    else:
        reports = _single_statement(args, rc)
    _emit(reports, rc, args.timings, out)
    return 0 if all(r.ok for r in reports) else 1


# -- constants --------------------------------------------------------------------

def cmd_constants(args, out=sys.stdout) -> int:
    rows = []
    try:
        if args.which in ("intro", "both"):
            rows.append(("intro", constants.threshold_intro(args.tol or 1e-8)))
        if args.which in ("p0", "both"):
            rows.append(("p0", constants.p_zero(args.tol or 1e-6, args.grid or 10_000)))
    except ValueError as exc:
        out.write(f"bracket error: {exc}\n")
        return 1
    for name, res in rows:
        lo, hi = res.bracket
        out.write(f"{name:5s} {fmt(res.value)}  bracket=[{fmt(lo)}, {fmt(hi)}]  "
                  f"tol={res.tolerance:g}  iterations={res.iterations}\n")
    return 0


# -- phi --------------------------------------------------------------------------

def _reduced_from_args(args) -> ReducedConfig:
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                doc = json.load(fh)
            alphas, us = doc["alphas"], doc["us"]
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read reduced data: {exc}") from exc
    elif args.n is not None:
        if not args.uniform_alphas or args.us_all is None:
            raise UsageError("--n needs --uniform-alphas and --us-all")
        alphas = np.full(args.n, 1.0 / args.n)
        us = np.full(args.n, args.us_all)
    else:
        if args.alphas is None or args.us is None:
            raise UsageError("give --alphas and --us, --n with --uniform-alphas, or --file")
        alphas, us = args.alphas, args.us
    try:
        return ReducedConfig(alphas, us)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_phi(args, out=sys.stdout) -> int:
    rc = _reduced_from_args(args)
    seed = args.seed if args.seed is not None else int(os.environ.get(SEED_ENV, 0))
    try:
        res = phi_engine.phi(rc, args.p, args.samples, seed, args.enum_cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out.write(f"phi={fmt(res.value)} method={res.method} samples={res.samples} "
              f"std_error={fmt(res.std_error)}\n")
    if args.grad:
        if np.any(rc.us < 0.0):
            raise UsageError("--grad needs all u_i in [0, 1]")
        if rc.n <= args.enum_cap:
            _, grad = phi_engine.phi_gradient(rc, args.p, args.enum_cap)
            errs = np.zeros_like(grad)
        else:
            est = phi_engine.phi_partial_mc(rc, args.p, min(args.samples, 4096), seed)
            grad, errs = est.estimate, est.std_error
        for j, (gj, ej) in enumerate(zip(grad, errs)):
            out.write(f"d_phi/d_u[{j}]={fmt(gj)} std_error={fmt(ej)}\n")
    return 0


# -- rendezvous ---------------------------------------------------------------------

def cmd_rendezvous(args, out=sys.stdout) -> int:
    if args.points:
        try:
            with open(args.points, encoding="utf-8") as fh:
                coords = json.load(fh)
            pts = [LpVector(c, args.p) for c in coords]
            iv = rendezvous.interval(pts, args.starts, args.seed)
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        rows = [{"d": pts[0].dim, "p": args.p, "n": len(pts), "lo": iv.lo, "hi": iv.hi,
                 "starts": iv.starts, "converged": iv.converged}]
    else:
        rows = rendezvous.dimension_sweep(args.n, args.d or [2, 4, 8], args.p,
                                          args.starts, args.seed)
    _write_rows(rows, args.format, out, note="exploratory: finite-dimensional intervals only")
    return 0


# -- sweep ------------------------------------------------------------------------

def cmd_sweep(args, out=sys.stdout) -> int:
    p_list = args.p or list(DEFAULT_P_LIST)
    rows = []
    for p in p_list:
        if args.kind == "phi":
            for n in args.n_values or [4, 8, 16]:
                rc = ReducedConfig(np.full(n, 1.0 / n), np.full(n, args.u))
                res = phi_engine.phi(rc, p, args.samples, args.seed, args.enum_cap)
                rows.append({"p": p, "n": n, "u": args.u, "phi": res.value,
                             "method": res.method, "std_error": res.std_error})
        elif args.kind == "gmin":
            u_star, val = constants.g_min(p, args.grid)
            rows.append({"p": p, "u_star": u_star, "g_minus_level": val})
        elif args.kind == "fsup":
            rows.append({"p": p, "f_sup": phi_engine.f_sup(p, args.grid),
                         "n2_sufficient": certify.n2_sufficient(p, args.grid)})
        elif args.kind == "prop2":
            n_values = args.n_values or [16, 64, 256]
            n_hat, reps = certify.prop2_threshold(p, n_values, args.configs, args.seed,
                                                  min(args.samples, 256))
            for n, r in zip(n_values, reps):
                rows.append({"p": p, "n": n, "min_partial": r.worst_margin,
                             "all_positive": r.passed, "n_hat": n_hat})
    _write_rows(rows, args.format, out)
    return 0


def _write_rows(rows, fmt_name, out, note=None):
    rows = report.round_sig(rows)
    if fmt_name == "csv":
        import csv
        if rows:
            writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    else:
        doc = {"rows": rows}
        if note:
            doc["note"] = note
        out.write(json.dumps(doc, indent=2) + "\n")


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adplab", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=None, help="cap kernel threads")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="run verification suites")
    sel = c.add_mutually_exclusive_group()
    sel.add_argument("--statement", choices=certify.STATEMENTS)
    sel.add_argument("--all", action="store_true")
    c.add_argument("--p", type=parse_floats)
    c.add_argument("--grid", type=int)
    c.add_argument("--samples", type=int, help="Monte Carlo samples")
    c.add_argument("--seed", type=int)
    c.add_argument("--enum-cap", type=int)
    c.add_argument("--slack", type=float)
    c.add_argument("--n", type=int, help="size for lemma3 / prop1_phi / prop2_grad / intro_chain")
    c.add_argument("--n-values", type=parse_ints, help="n values for prop4 / cor1")
    c.add_argument("--d", type=parse_ints, help="dimensions for prop4 / cor1")
    c.add_argument("--configs", type=int, help="sampled configurations per n")
    c.add_argument("--t", type=parse_floats, help="t values for lemma3")
    c.add_argument("--x-kind", choices=("equal", "geometric"), default="equal")
    c.add_argument("--config", help="flat JSON file mirroring the run config")
    c.add_argument("--output")
    c.add_argument("--format", choices=("json", "csv"))
    c.add_argument("--timings", action="store_true", help="include measured runtime_ms")
    c.set_defaults(func=cmd_certify)

    k = sub.add_parser("constants", help="critical exponents")
    k.add_argument("--which", choices=("intro", "p0", "both"), default="both")
    k.add_argument("--tol", type=float)
    k.add_argument("--grid", type=int)
    k.set_defaults(func=cmd_constants)

    f = sub.add_parser("phi", help="evaluate phi")
    f.add_argument("--alphas", type=parse_floats)
    f.add_argument("--us", type=parse_floats)
    f.add_argument("--n", type=int)
    f.add_argument("--uniform-alphas", action="store_true")
    f.add_argument("--us-all", type=float)
    f.add_argument("--file", help="JSON file with 'alphas' and 'us'")
    f.add_argument("--p", type=float, required=True)
    f.add_argument("--samples", type=int, default=100_000)
    f.add_argument("--seed", type=int)
    f.add_argument("--enum-cap", type=int, default=phi_engine.ENUM_CAP)
    f.add_argument("--grad", action="store_true")
    f.set_defaults(func=cmd_phi)

    r = sub.add_parser("rendezvous", help="average-distance intervals (exploratory)")
    r.add_argument("--n", type=int, default=3)
    r.add_argument("--d", type=parse_ints)
    r.add_argument("--p", type=float, default=3.0)
    r.add_argument("--points", help="JSON list of coordinate lists on the unit sphere")
    r.add_argument("--starts", type=int, default=8)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--format", choices=("json", "csv"), default="json")
    r.set_defaults(func=cmd_rendezvous)

    s = sub.add_parser("sweep", help="tabulate quantities over p")
    s.add_argument("--kind", choices=("phi", "gmin", "fsup", "prop2"), required=True)
    s.add_argument("--p", type=parse_floats)
    s.add_argument("--n-values", type=parse_ints)
    s.add_argument("--u", type=float, default=1.0)
    s.add_argument("--grid", type=int, default=10_000)
    s.add_argument("--samples", type=int, default=20_000)
    s.add_argument("--configs", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--enum-cap", type=int, default=phi_engine.ENUM_CAP)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        _accel.set_threads(args.threads)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"adplab {args.command}: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
