"""Command-line entry point.

Subcommands: verify, measure, corr-lattice, corr-limit, sample, bulk.
Parameters are exact strings ("1+1i", "7/2"). A JSON config file given by
--config may set any flag by its long name; flags on the command line win.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 nothing executable (capability errors only).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .errors import CapabilityError, DomainError, ZMeasureError
from .exact import format_exact, parse_exact
from .io import emit
from .jack import CACHE_ENV
from .policy import DEFAULT_POLICY, NumericPolicy

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3

POLICY_KEYS = ("tol", "start_degree", "max_degree", "quad_nodes", "max_quad_nodes", "quad_tol")

# built-in defaults, applied after the config file
DEFAULTS: Dict[str, object] = {
    "z": "1+1i", "zp": "1-1i", "theta": "1", "xi": None, "seed": 0, "format": "json", "cache_dir": None,
    "output": None,
    "suite": None, "quick": False,
    "n": None, "partition": None,
    "A": "0", "N": None,
    "k": 1, "x": None, "kind": "lifted",
    "samples": None, "emit": "summary", "box": None, "points": "lattice",
    "y": None, "mc": False, "window": "2,5", "audit": None,
    **{k: None for k in POLICY_KEYS},
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Resolved settings for one invocation."""

    command: str
    z: str
    zp: str
    theta: str
    xi: Optional[str] = None
    policy: NumericPolicy = DEFAULT_POLICY
    seed: int = 0
    format: str = "json"
    cache_dir: Optional[str] = None
    options: Dict[str, object] = field(default_factory=dict)

    def params(self):
        from .zmeasure import ZParams

        return ZParams(parse_exact(self.z), parse_exact(self.zp), parse_exact(self.theta))

    def xi_value(self):
        return None if self.xi is None else parse_exact(self.xi)

    def to_json(self) -> dict:
        return {"command": self.command, "z": self.z, "zp": self.zp, "theta": self.theta, "xi": self.xi,
                "policy": self.policy.to_json(), "seed": self.seed, "format": self.format}


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common")
    g.add_argument("--config", help="JSON file whose keys set any long flag")
    g.add_argument("--z", help="exact string, e.g. 1+1i")
    g.add_argument("--zp", help="z', exact string")
    g.add_argument("--theta", help="positive rational, e.g. 1/2")
    g.add_argument("--xi", help="mixing parameter in (0,1), exact string")
    g.add_argument("--seed", type=int)
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--cache-dir", dest="cache_dir", help=f"Jack expansion cache (default: ${CACHE_ENV})")
    g.add_argument("--output", help="write to this file instead of stdout")
    for key in POLICY_KEYS:
        typ = float if key in ("tol", "quad_tol") else int
        g.add_argument(f"--{key.replace('_', '-')}", dest=key, type=typ)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zmeasures", description="z-measures on partitions: exact and numerical checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run verification suites")
    _common(p)
    p.add_argument("--suite", action="append", help="suite name (repeatable or comma separated); default all")
    p.add_argument("--quick", action="store_const", const=True, help="skip the slowest cases")

    p = sub.add_parser("measure", help="exact measure table on partitions of n")
    _common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--partition", help="single partition, e.g. 3,1,1")

    p = sub.add_parser("corr-lattice", help="both sides of the lattice correlation identity")
    _common(p)
    p.add_argument("--A", help="comma separated nonnegative integers")
    p.add_argument("--N", type=int, help="cutoff (default adaptive)")

    p = sub.add_parser("corr-limit", help="limit correlation functions")
    _common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--x", action="append", help="point, comma separated k-tuple (repeatable)")
    p.add_argument("--kind", choices=("lifted", "boundary", "lifting-check"))

    p = sub.add_parser("sample", help="growth-chain samples")
    _common(p)
    p.add_argument("--n", type=int, help="fixed size (otherwise --xi)")
    p.add_argument("--samples", type=int)
    p.add_argument("--emit", choices=("records", "summary"))
    p.add_argument("--box", action="append", help="interval lo,hi for an empirical correlation (repeatable)")
    p.add_argument("--points", choices=("lattice", "frobenius"))

    p = sub.add_parser("bulk", help="scaling limit near the origin")
    _common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--y", action="append", help="point, comma separated k-tuple (repeatable)")
    p.add_argument("--mc", action="store_const", const=True, help="Monte Carlo density (k=1)")
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--window", help="lo,hi in y")
    p.add_argument("--audit", help="comma separated T values for a convergence audit")
    return parser


def _merge(args: argparse.Namespace) -> Dict[str, object]:
    values = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        for key, val in cfg.items():
            k = key.replace("-", "_")
            if k not in DEFAULTS:
                raise UsageError(f"unknown config key {key!r}")
            values[k] = val
    for key, val in vars(args).items():
        if key in ("command", "config"):
            continue
        if val is not None:
            values[key] = val
    return values


def resolve(args: argparse.Namespace) -> RunConfig:
    v = _merge(args)
    pol = {k: v[k] for k in POLICY_KEYS if v[k] is not None}
    try:
        policy = DEFAULT_POLICY.with_(**pol)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad policy: {exc}")
    for key in ("z", "zp", "theta") + (("xi",) if v["xi"] is not None else ()):
        try:
            parse_exact(str(v[key]))
        except (ValueError, ZMeasureError) as exc:
            raise UsageError(f"--{key}: {exc}")
        v[key] = str(v[key])
    if v["format"] not in ("json", "csv"):
        raise UsageError("format must be json or csv")
    opts = {k: val for k, val in v.items() if k not in ("z", "zp", "theta", "xi", "seed", "format", "cache_dir")
            and k not in POLICY_KEYS}
    return RunConfig(args.command, v["z"], v["zp"], v["theta"], v["xi"], policy, int(v["seed"]), v["format"],
                     v["cache_dir"], opts)


def _floats(text, name: str) -> List[float]:
    if isinstance(text, (list, tuple)):
        return [float(t) for t in text]
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--{name}: expected comma separated numbers, got {text!r}")


def _ints(text, name: str) -> List[int]:
    if isinstance(text, (list, tuple)):
        return [int(t) for t in text]
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--{name}: expected comma separated integers, got {text!r}")


def _point_list(values, name: str) -> List[List[float]]:
    if values is None:
        raise UsageError(f"--{name} is required")
    if isinstance(values, str):
        values = [values]
    return [_floats(v, name) for v in values]


# commands ---------------------------------------------------------------------

def cmd_verify(cfg: RunConfig):
    from .verify import CSV_COLUMNS, SUITES, run_verify

    names = None
    if cfg.options.get("suite"):
        raw = cfg.options["suite"]
        raw = [raw] if isinstance(raw, str) else raw
        names = [s.strip() for item in raw for s in item.split(",") if s.strip()]
        bad = [s for s in names if s not in SUITES]
        if bad:
            raise UsageError(f"unknown suite(s): {', '.join(bad)}; choose from {', '.join(SUITES)}")
    report = run_verify(names, cfg.policy, quick=bool(cfg.options.get("quick")))
    if cfg.format == "csv":
        return report.rows(), list(CSV_COLUMNS), report.exit_code
    return report, None, report.exit_code


def cmd_measure(cfg: RunConfig):
    from .partitions import Partition, enumerate_partitions
    from .exact import to_numeric
    from .zmeasure import measure

    p = cfg.params()
    if cfg.options.get("partition") is not None:
        lams = [Partition(_ints(cfg.options["partition"], "partition"))]
    elif cfg.options.get("n") is not None:
        lams = enumerate_partitions(int(cfg.options["n"]))
    else:
        raise UsageError("give --n or --partition")
    rows = []
    for lam in lams:
        m = measure(lam, p)
        num = to_numeric(m)
        row = {"partition": list(lam), "n": lam.n, "value": format_exact(m)}
        if isinstance(m, Fraction):
            row["value_num"], row["value_den"] = m.numerator, m.denominator
        row["value_float"] = num.real if isinstance(num, complex) and num.imag == 0 else num
        rows.append(row)
    if cfg.format == "csv":
        for r in rows:
            r["partition"] = ",".join(map(str, r["partition"]))
        return rows, ["partition", "n", "value", "value_num", "value_den", "value_float"], EXIT_OK
    n = lams[0].n if len({lam.n for lam in lams}) == 1 else None
    return {"n": n, "params": p.to_json(), "series": p.series.kind, "rows": rows}, None, EXIT_OK


def cmd_corr_lattice(cfg: RunConfig):
    from .lattice import theorem34_check
    from .zmeasure import MixedParams

    xi = cfg.xi_value()
    if xi is None:
        xi = parse_exact("1/2")
    mp = MixedParams(cfg.params(), xi)
    A = _ints(cfg.options["A"], "A")
    N = cfg.options.get("N")
    chk = theorem34_check(A, mp, None if N is None else int(N))
    out = chk.to_json()
    out["params"] = mp.to_json()
    if cfg.format == "csv":
        row = {k: v for k, v in out.items() if k not in ("tails", "params")}
        row["nb_tail"] = out["tails"]["nb_tail"]
        row["A"] = ",".join(map(str, out["A"]))
        return [row], list(row), EXIT_OK
    return out, None, EXIT_OK


def cmd_corr_limit(cfg: RunConfig):
    from .limit_corr import AtomicValue, LimitCorrParams, lifting_residual, rho, rho_tilde

    k = int(cfg.options["k"])
    lp = LimitCorrParams(cfg.params(), k)
    pts = _point_list(cfg.options.get("x"), "x")
    kind = cfg.options["kind"]
    rows = []
    for x in pts:
        if len(x) != k:
            raise UsageError(f"each --x needs {k} coordinates")
        row = {"x": ",".join(repr(v) for v in x)}
        if kind == "lifted":
            r = rho_tilde(x, lp, cfg.policy)
            row.update(value=r.scalar, tail_estimate=r.tail_estimate, path=r.path)
        elif kind == "boundary":
            v = rho(x, lp, cfg.policy)
            if isinstance(v, AtomicValue):
                row.update(value=v.density, surface=v.surface)
            else:
                row.update(value=v, surface=None)
        else:
            r = lifting_residual(lp, x, cfg.policy)
            row.update(lifted=float(r["lifted"]), value=r["direct"], residual=float(r["residual"]),
                       relative=float(r["relative"]))
        rows.append(row)
    if cfg.format == "csv":
        cols = list(dict.fromkeys(c for r in rows for c in r))
        return rows, cols, EXIT_OK
    return {"params": lp.to_json(), "kind": kind, "rows": rows}, None, EXIT_OK


def cmd_sample(cfg: RunConfig):
    from .boundary import CorrelationQuery
    from .sampler import empirical_corr, run_samples

    n = cfg.options.get("n")
    xi = cfg.xi_value()
    if (n is None) == (xi is None):
        raise UsageError("give exactly one of --n and --xi")
    samples = int(cfg.options.get("samples") or 1000)
    if samples < 1:
        raise UsageError("--samples must be positive")
    run = run_samples(cfg.params(), samples, cfg.seed, n=None if n is None else int(n), xi=xi)
    if cfg.options["emit"] == "records":
        if cfg.format == "csv":
            rows = [{"index": i, "n": lam.n, "partition": ",".join(map(str, lam))}
                    for i, lam in enumerate(run.records)]
            return rows, ["index", "n", "partition"], EXIT_OK
        return run, None, EXIT_OK
    sizes = [lam.n for lam in run.records]
    summary = {"params": run.params.to_json(), "mode": run.mode, "n": run.n_target,
               "xi": None if run.xi is None else format_exact(run.xi), "samples": samples, "seed": cfg.seed,
               "mean_size": sum(sizes) / samples,
               "mean_length": sum(len(lam) for lam in run.records) / samples,
               "mean_first_row": sum((lam[0] if lam else 0) for lam in run.records) / samples,
               "provenance": run.provenance}
    if cfg.options.get("box"):
        boxes = [tuple(_floats(b, "box")) for b in (cfg.options["box"] if not isinstance(cfg.options["box"], str)
                                                   else [cfg.options["box"]])]
        scaling = "by_n" if run.mode == "n" else "by_(1-xi)"
        summary["correlation"] = empirical_corr(run, CorrelationQuery(tuple(boxes)), scaling,
                                                cfg.options["points"]).to_json()
    if cfg.format == "csv":
        row = {k: v for k, v in summary.items() if k not in ("params", "provenance", "correlation")}
        if "correlation" in summary:
            row["estimate"] = summary["correlation"]["estimate"]
            row["stderr"] = summary["correlation"]["stderr"]
        return [row], list(row), EXIT_OK
    return summary, None, EXIT_OK


def cmd_bulk(cfg: RunConfig):
    from .limit_corr import BulkParams, bulk_constant, bulk_convergence_audit, bulk_limit_density, bulk_monte_carlo

    p = cfg.params()
    k = int(cfg.options["k"])
    bp = BulkParams(p, k)
    out = {"params": bp.to_json(), "s": [format_exact(v) for v in bp.s],
           "homogeneity_degree": format_exact(bp.homogeneity_degree), "constant": bulk_constant(bp)}
    rows = []
    ys = cfg.options.get("y")
    if cfg.options.get("audit"):
        Ts = _floats(cfg.options["audit"], "audit")
        rows = bulk_convergence_audit(bp, Ts, _point_list(ys, "y"), cfg.policy)
        out["audit"] = rows
    elif ys is not None:
        for y in _point_list(ys, "y"):
            rows.append({"y": ",".join(repr(v) for v in y), "density": bulk_limit_density(y, bp)})
        out["rows"] = rows
    if cfg.options.get("mc"):
        if k != 1:
            raise UsageError("--mc needs k = 1")
        lo, hi = _floats(cfg.options["window"], "window")
        n = cfg.options.get("n") or 10_000
        samples = int(cfg.options.get("samples") or 400)
        out["monte_carlo"] = bulk_monte_carlo(p, int(n), samples, cfg.seed, (lo, hi))
    if cfg.format == "csv":
        if not rows:
            rows = [{"constant": out["constant"], **({"mc_density": out["monte_carlo"]["density"],
                                                      "mc_stderr": out["monte_carlo"]["stderr"]}
                                                     if "monte_carlo" in out else {})}]
        cols = list(dict.fromkeys(c for r in rows for c in r))
        return rows, cols, EXIT_OK
    return out, None, EXIT_OK


COMMANDS = {
    "verify": cmd_verify, "measure": cmd_measure, "corr-lattice": cmd_corr_lattice,
    "corr-limit": cmd_corr_limit, "sample": cmd_sample, "bulk": cmd_bulk,
}


def _write(data: bytes, path: Optional[str]) -> None:
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = resolve(args)
        if cfg.cache_dir:
            os.environ[CACHE_ENV] = str(cfg.cache_dir)
        result, columns, code = COMMANDS[cfg.command](cfg)
        _write(emit(result, cfg.format, columns), cfg.options.get("output"))
        return code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapabilityError as exc:
        conds = list(getattr(exc, "conditions", ()) or ())
        print(f"capability: {exc}" + (f" (needs: {'; '.join(conds)})" if conds else ""), file=sys.stderr)
        return EXIT_CAPABILITY
    except (DomainError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
