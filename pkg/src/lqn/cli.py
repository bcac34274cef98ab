"""Command-line entry point.

Exit codes: 0 success, 1 bad input or unreadable file, 2 negative result
(search exhausted, violations found).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from . import bounds
from .gf import is_prime_power

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for negative results here.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    q: Optional[int] = None
    n: Optional[int] = None
    seed: int = 0
    max_rounds: Optional[int] = None
    trials: Optional[int] = None
    output: Optional[Path] = None
    format: str = "json"
    threads: int = 1

    def validate(self) -> None:
        if self.seed < 0:
            raise UsageError("--seed must be non-negative")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.subcommand in ("represent", "mc"):
            if self.q is None or not is_prime_power(self.q):
                raise UsageError(f"{self.q} is not a prime power")
            if self.n is None or self.n < 1:
                raise UsageError("--n must be at least 1")
        if self.subcommand == "represent" and self.max_rounds is not None and self.max_rounds < 0:
            raise UsageError("--max-rounds must be non-negative")
        if self.subcommand == "mc":
            if self.n < 2:
                raise UsageError("mc needs --n >= 2")
            if self.trials is None or self.trials < 1:
                raise UsageError("--trials must be at least 1")
        if self.subcommand == "bounds":
            if self.q is None or self.q < 2 or self.n is None or self.n < 1:
                raise UsageError("bounds needs --q >= 2 and --n >= 1")


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        subcommand=args.command,
        q=getattr(args, "q", None),
        n=getattr(args, "n", None),
        seed=getattr(args, "seed", 0),
        max_rounds=getattr(args, "max_rounds", None),
        trials=getattr(args, "trials", None),
        output=getattr(args, "out", None),
        format=getattr(args, "format", "json"),
        threads=1 if getattr(args, "threads", None) is None else args.threads,
    )
    cfg.validate()
    return cfg


def cmd_represent(args: argparse.Namespace) -> int:
    from .coloring import SUCCESS, InfeasibleWarning, represent
    from .geometry import write_representation

    cfg = _config(args)
    if 2 * cfg.n > cfg.q:
        print(f"warning: 2n > q ({2 * cfg.n} > {cfg.q}): L({cfg.q},{cfg.n}) is not representable; "
              "the search cannot succeed", file=sys.stderr)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InfeasibleWarning)
        m, run = represent(cfg.q, cfg.n, seed=cfg.seed, max_rounds=cfg.max_rounds,
                           incremental=args.incremental, verify=not args.no_verify)
    report = run.to_dict()
    out = cfg.output or Path(f"lqn_q{cfg.q}_n{cfg.n}_seed{cfg.seed}.txt")
    report_path = args.report or out.with_suffix(".json")
    if run.outcome == SUCCESS:
        with open(out, "w") as fh:
            write_representation(m, fh)
        report["file"] = str(out)
        report_path.write_text(_json(report))
    sys.stdout.write(_json(report))
    return EXIT_OK if run.outcome == SUCCESS else EXIT_NEGATIVE


def cmd_verify(args: argparse.Namespace) -> int:
    from .geometry import RepresentationFormatError, read_representation
    from .verify import verify_full

    if args.threads < 1:
        print("lqn verify: error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        with open(args.file) as fh:
            m = read_representation(fh)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RepresentationFormatError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    result = verify_full(m, m.structure(), exhaustive=args.all, threads=args.threads)
    report = {"q": m.q, "n": m.n, "V": m.V, **result.to_dict()}
    sys.stdout.write(_json(report))
    return EXIT_OK if result.valid else EXIT_NEGATIVE


def cmd_mc(args: argparse.Namespace) -> int:
    from .coloring import monte_carlo

    cfg = _config(args)
    res = monte_carlo(cfg.q, cfg.n, cfg.trials, seed=cfg.seed, threads=cfg.threads)
    if cfg.format == "csv":
        rows = ["quantity,count,frequency,analytic,sigma"]
        for key in ("att_fixed_edge", "tatta_fixed_edge"):
            r = res[key]
            rows.append(f"{key},{r['count']},{r['frequency']!r},{r['analytic']!r},{r['sigma']!r}")
        a = res["any_edge_fails"]
        rows.append(f"any_edge_fails,{a['count']},{a['frequency']!r},{a['union_bound']!r},{a['sigma']!r}")
        rows.append(f"att_pooled,,{res['att_pooled']!r},{res['att_fixed_edge']['analytic']!r},")
        rows.append(f"tatta_pooled,,{res['tatta_pooled']!r},{res['tatta_fixed_edge']['analytic']!r},")
        _emit("\n".join(rows) + "\n", cfg.output)
    else:
        _emit(_json(res), cfg.output)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    cfg = _config(args)
    _emit(_json(bounds.bounds_report(cfg.q, cfg.n).to_dict()), cfg.output)
    return EXIT_OK


def _range(args: argparse.Namespace, allow_empty: bool) -> None:
    if args.nmin < 2:
        raise UsageError("--nmin must be at least 2")
    if args.nmax < args.nmin and not allow_empty:
        raise UsageError("--nmax must be at least --nmin")


def cmd_table(args: argparse.Namespace) -> int:
    _range(args, allow_empty=False)
    rows = bounds.threshold_table(args.nmin, args.nmax)
    text = bounds.figure1_csv(args.nmin, args.nmax) if args.csv else bounds.format_table(rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_fig1(args: argparse.Namespace) -> int:
    _range(args, allow_empty=True)
    _emit(bounds.figure1_csv(args.nmin, args.nmax), args.out)
    return EXIT_OK


def _eps_list(text: str) -> List[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad epsilon list {text!r}") from None
    if not values or any(v <= 0 for v in values):
        raise UsageError("epsilon values must be positive")
    return values


def cmd_fig2(args: argparse.Namespace) -> int:
    grid = _eps_list(args.eps if args.eps is not None else args.eps_grid)
    text = bounds.figure2_csv(grid, persistence=args.persistence, cap=args.cap)
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lqn", description="Representations of L(q,n) and their probabilistic thresholds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    threads_default = os.cpu_count() or 1

    r = sub.add_parser("represent", help="search for a representation of L(q,n)")
    r.add_argument("--q", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-rounds", type=int, default=None, help="resample cap (default 1000*V)")
    r.add_argument("--out", type=Path, default=None, help="representation file to write on success")
    r.add_argument("--report", type=Path, default=None, help="JSON run report (default: OUT with .json)")
    r.add_argument("--incremental", action="store_true", help="track failures incrementally")
    r.add_argument("--no-verify", action="store_true", help="skip the full check of a success")
    r.set_defaults(func=cmd_represent)

    v = sub.add_parser("verify", help="check a representation file")
    v.add_argument("file", type=Path)
    v.add_argument("--all", action="store_true", help="report every violation")
    v.add_argument("--threads", type=int, default=threads_default)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("mc", help="Monte Carlo failure frequencies of random colorings")
    m.add_argument("--q", type=int, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--trials", type=int, default=10_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--format", choices=("json", "csv"), default="json")
    m.add_argument("--out", type=Path, default=None)
    m.add_argument("--threads", type=int, default=threads_default)
    m.set_defaults(func=cmd_mc)

    b = sub.add_parser("bounds", help="union bound and local lemma at one (q, n)")
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--out", type=Path, default=None)
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("table", help="smallest prime powers per n")
    t.add_argument("--nmin", type=int, default=2)
    t.add_argument("--nmax", type=int, default=20)
    t.add_argument("--csv", action="store_true")
    t.add_argument("--out", type=Path, default=None)
    t.set_defaults(func=cmd_table)

    f1 = sub.add_parser("fig1", help="CSV of smallest prime powers against n")
    f1.add_argument("--nmin", type=int, default=2)
    f1.add_argument("--nmax", type=int, default=20)
    f1.add_argument("--out", type=Path, default=None)
    f1.set_defaults(func=cmd_fig1)

    f2 = sub.add_parser("fig2", help="CSV of smallest n per epsilon")
    f2.add_argument("--eps-grid", default="0.5,1,1.5,2")
    f2.add_argument("--eps", default=None, help="single epsilon (overrides --eps-grid)")
    f2.add_argument("--persistence", type=int, default=100)
    f2.add_argument("--cap", type=int, default=10**15)
    f2.add_argument("--out", type=Path, default=None)
    f2.set_defaults(func=cmd_fig2)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lqn {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
