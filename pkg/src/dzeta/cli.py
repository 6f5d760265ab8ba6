"""Command-line front end.

Subcommands:

* ``eval``    - point evaluation of the double zeta function;
* ``series``  - the three mean-value constants with tail bounds;
* ``verify``  - mean-square verification runs emitting CSV/JSON reports.

Exit codes: 0 success; 2 domain/precondition/accuracy violation (message
names the violated condition); 3 singular-set proximity; 4 a verification
proxy failed.

Flags may also come from a ``--config`` file of ``key=value`` lines
('#' starts a comment); explicit flags override the file.  Complex values
use the shell-safe syntax ``a+bi`` / ``a-bi`` with no spaces.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .core import (
    AccuracyError,
    DomainError,
    PreconditionError,
    QuadPolicy,
    SingularityError,
    TruncationPolicy,
)
from .double_zeta import SPLITS, evaluate
from .mean_square import TheoremCase, fit_and_verify
from .series import series_z21, series_z22, series_z2box

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_SINGULAR = 3
EXIT_PROXY = 4

_COMPLEX_RE = re.compile(
    r"^(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i$")


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' / 'a-bi' (no spaces); a bare real is accepted too."""
    text = text.strip()
    m = _COMPLEX_RE.match(text)
    if m:
        return complex(float(m.group("re")), float(m.group("im")))
    try:
        return complex(float(text), 0.0)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"cannot parse complex value {text!r}; use the form a+bi") from None


def format_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


_SPLIT_ALIASES = {
    "auto": "auto", "brute": "brute", "v": "v_split", "u": "u_split",
    "t1": "approx_t1", "t2": "approx_t2", "diag": "approx_diag",
}

VERIFY_CASES: dict[str, TheoremCase] = {
    "i1-convergent": TheoremCase("I1", 1.5, 2.0),
    "i1-subcritical": TheoremCase("I1", 0.9, 0.9),
    "i1-boundary": TheoremCase("I1", 1.0, 1.0, fixed_imag=2.0),
    "i1-critical": TheoremCase("I1", 1.0, 0.5, fixed_imag=3.0),
    "i2-convergent": TheoremCase("I2", 2.0, 2.0),
    "i2-subcritical": TheoremCase("I2", 0.8, 0.9),
    "i2-critical-line": TheoremCase("I2", 0.8, 0.7),
    "i2-zeta-line": TheoremCase("I2", 2.0, 0.5),
    "i2-joint-critical": TheoremCase("I2", 1.0, 0.5, fixed_imag=5.0),
    "i2-double-critical": TheoremCase("I2", 1.0, 0.5),
    "ibox-convergent": TheoremCase("Ibox", 2.0, 2.0),
    "ibox-asymp": TheoremCase("Ibox", 2.0, 0.5),
}

# the --case all matrix
ACCEPTANCE_CASES = ("i2-convergent", "i1-critical", "i2-double-critical",
                    "ibox-asymp")


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {raw!r} is not key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _add_shared(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--config", default=d(None),
                        help="key=value config file; flags override")
    parser.add_argument("--format", choices=("plain", "csv", "json"),
                        default=d("plain"))
    parser.add_argument("--seed", type=int, default=d(0),
                        help="recorded in reports; reserved for randomized runs")
    parser.add_argument("--threads", type=int, default=d(None),
                        help="worker threads for multi-case verify "
                             "(default: DZETA_THREADS or cpu count)")
    parser.add_argument("--C", type=float, default=d(2.0),
                        help="window constant C > 1")
    parser.add_argument("--N-min", dest="n_min", type=int, default=d(32))
    parser.add_argument("--M", type=int, default=d(9),
                        help="Euler-Maclaurin expansion order (odd)")
    parser.add_argument("--tol", type=float, default=d(1e-10),
                        help="error-bound target for evaluations")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dzeta",
        description="Euler double zeta evaluation and mean-square verification")
    _add_shared(parser, suppress=False)

    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate zeta2(s1, s2)")
    _add_shared(p_eval, suppress=True)
    p_eval.add_argument("--s1", type=parse_complex, required=True)
    p_eval.add_argument("--s2", type=parse_complex, required=True)
    p_eval.add_argument("--split", choices=sorted(_SPLIT_ALIASES), default="auto")
    p_eval.add_argument("--N", type=int, default=None,
                        help="truncation length for the t1/t2 approximations")

    p_series = sub.add_parser("series", help="mean-value constants")
    _add_shared(p_series, suppress=True)
    p_series.add_argument("--which", choices=("z21", "z22", "z2box"),
                          required=True)
    p_series.add_argument("--two-sigma1", dest="two_sigma1", type=float)
    p_series.add_argument("--s2", type=parse_complex)
    p_series.add_argument("--s1", type=parse_complex)
    p_series.add_argument("--two-sigma2", dest="two_sigma2", type=float)
    p_series.add_argument("--sigma1", type=float)
    p_series.add_argument("--sigma2", type=float)
    p_series.add_argument("--K", type=int, default=10 ** 6,
                          help="truncation for z2box")
    p_series.add_argument("--max-terms", dest="max_terms", type=int,
                          default=10 ** 5, help="term cap for z21/z22")

    p_verify = sub.add_parser("verify", help="mean-square verification runs")
    _add_shared(p_verify, suppress=True)
    p_verify.add_argument("--case", required=True,
                          help="named case or 'all'; names: "
                               + ", ".join(sorted(VERIFY_CASES)))
    p_verify.add_argument("--Tmax", dest="t_max", type=float, default=400.0)
    p_verify.add_argument("--Tgrid", dest="t_grid",
                          help="comma-separated grid overriding --Tmax")
    p_verify.add_argument("--out", default="reports", help="output directory")
    p_verify.add_argument("--quad-tol", dest="quad_tol", type=float,
                          default=1e-5)
    p_verify.add_argument("--h0", type=float, default=0.05)
    p_verify.add_argument("--series-tol", dest="series_tol", type=float,
                          default=1e-8)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    # first pass picks up --config; file values become defaults, flags override
    ns, _ = parser.parse_known_args(argv)
    if getattr(ns, "config", None):
        data = _read_config(ns.config)
        subparsers = parser._subparsers._group_actions[0].choices.values()  # type: ignore[union-attr]
        main_dests = {a.dest for a in parser._actions}
        known = {a.dest: a for a in parser._actions}
        for sp in subparsers:
            for a in sp._actions:
                known.setdefault(a.dest, a)
        mapped = {}
        for key, value in data.items():
            dest = key.replace("-", "_")
            if dest not in known:
                raise DomainError(f"unknown config key {key!r}")
            action = known[dest]
            mapped[dest] = action.type(value) if action.type else value
        # shared keys default on the main parser only: subparsers copy their
        # whole namespace back and would clobber explicit main-level flags
        parser.set_defaults(**{k: v for k, v in mapped.items()
                               if k in main_dests})
        for sp in subparsers:
            sub_only = {k: v for k, v in mapped.items()
                        if k not in main_dests
                        and any(a.dest == k for a in sp._actions)}
            sp.set_defaults(**sub_only)
    return parser.parse_args(argv)


def _policies(args) -> tuple[TruncationPolicy, QuadPolicy]:
    pol = TruncationPolicy(C=args.C, N_min=args.n_min, M=args.M, tol=args.tol)
    qp = QuadPolicy(h0=getattr(args, "h0", 0.05),
                    tol=getattr(args, "quad_tol", 1e-5))
    return pol, qp


def _print_record(args, record: dict) -> None:
    if args.format == "json":
        import json
        print(json.dumps(record))
    elif args.format == "csv":
        print(",".join(record))
        print(",".join(repr(v) if isinstance(v, float) else str(v)
                       for v in record.values()))
    else:
        for key, value in record.items():
            if isinstance(value, float):
                print(f"{key} = {value!r}")
            else:
                print(f"{key} = {value}")


def _cmd_eval(args) -> int:
    policy, _ = _policies(args)
    res = evaluate(args.s1, args.s2, _SPLIT_ALIASES[args.split], policy,
                   N=args.N)
    _print_record(args, {
        "value_re": res.value.real,
        "value_im": res.value.imag,
        "value": format_complex(res.value),
        "err": res.err,
        "split": res.split,
        "terms": res.terms,
    })
    return EXIT_OK


def _require(args, names: list[str], which: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise DomainError(
            f"series {which} requires --" + ", --".join(m.replace("_", "-")
                                                        for m in missing))


def _cmd_series(args) -> int:
    if args.which == "z21":
        _require(args, ["two_sigma1", "s2"], "z21")
        res = series_z21(args.two_sigma1, args.s2, tol=args.tol,
                         max_terms=args.max_terms)
    elif args.which == "z22":
        _require(args, ["s1", "two_sigma2"], "z22")
        res = series_z22(args.s1, args.two_sigma2, tol=args.tol,
                         max_terms=args.max_terms)
    else:
        _require(args, ["sigma1", "sigma2"], "z2box")
        res = series_z2box(args.sigma1, args.sigma2, k_max=args.K)
    _print_record(args, {
        "value": res.value,
        "tail_bound": res.tail_bound,
        "terms_used": res.terms_used,
    })
    return EXIT_OK


def _default_grid(t_max: float) -> list[float]:
    grid = []
    t = t_max
    while t >= 12.0 and len(grid) < 6:
        grid.append(round(t, 6))
        t /= 2.0
    if len(grid) < 3:
        raise DomainError(f"Tmax = {t_max} leaves fewer than 3 grid points")
    return sorted(grid)


def _cmd_verify(args) -> int:
    policy, quad = _policies(args)
    if args.case == "all":
        names = list(ACCEPTANCE_CASES)
    elif args.case in VERIFY_CASES:
        names = [args.case]
    else:
        raise DomainError(
            f"unknown case {args.case!r}; choose 'all' or one of: "
            + ", ".join(sorted(VERIFY_CASES)))
    if args.t_grid:
        grid = [float(x) for x in args.t_grid.split(",")]
    else:
        grid = _default_grid(args.t_max)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("DZETA_THREADS", "0")) or (os.cpu_count() or 1)
    threads = max(1, min(threads, len(names)))

    def run(name: str):
        case = VERIFY_CASES[name]
        return fit_and_verify(case, grid, quad=quad, policy=policy,
                              series_tol=args.series_tol)

    if threads == 1:
        reports = [run(n) for n in names]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(run, names))

    failed: list[str] = []
    for name, report in zip(names, reports):
        csv_path = outdir / f"report-{name}.csv"
        json_path = outdir / f"report-{name}.json"
        report.to_csv(csv_path)
        doc = report.to_json(json_path)
        doc["seed"] = args.seed
        status = "pass" if report.passed else "FAIL"
        print(f"{name}: {status}  [{report.resolved.label}]  -> {csv_path}")
        if not report.passed:
            failed.append(name)
            for row in report.rows:
                print(f"    T={row.T:g} integral={row.integral!r} "
                      f"main={row.main!r} scaled_residual={row.scaled_residual!r}")
    if failed:
        print(f"failed proxies: {', '.join(failed)}", file=sys.stderr)
        return EXIT_PROXY
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = _apply_config(parser, list(sys.argv[1:] if argv is None else argv))
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "series":
            return _cmd_series(args)
        return _cmd_verify(args)
    except SingularityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (DomainError, PreconditionError, AccuracyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
