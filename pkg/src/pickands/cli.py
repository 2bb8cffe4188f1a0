"""Command-line entry point: ``pickands <study> [flags]``.

Exit status is 0 when every check of the study passes, 1 when any fails and
2 on a configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, EmbeddingNotPSD
from .montecarlo import default_threads
from .studies import STUDIES, StudyConfig, run_study

# Per-study parameters used when the corresponding flag is absent.
DEFAULTS: dict[str, dict] = {
    "closed-form": dict(alphas=(1.0, 2.0), deltas=(0.01, 0.1, 0.5, 1.0), Ts=(), reps=0),
    "estimate": dict(alphas=(1.0,), deltas=(0.5,), Ts=(6.0,), reps=10_000),
    "discretization": dict(alphas=(1.0,), deltas=(1e-2, 1e-3, 1e-4), Ts=(8.0,), reps=10_000),
    "truncation": dict(alphas=(1.5,), deltas=(0.25,), Ts=(2.0, 3.0, 4.0, 6.0), reps=10_000),
    "variance-blowup": dict(alphas=(0.5,), deltas=(0.5,), Ts=(8.0, 16.0, 32.0, 64.0), reps=10_000),
    "tail": dict(alphas=(0.5,), deltas=(0.1,), Ts=(10.0,), reps=10_000),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pickands", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="study", required=True)
    for name in STUDIES:
        p = sub.add_parser(name, help=STUDIES[name].__doc__.splitlines()[0])
        p.add_argument("--alpha", type=float, action="append", help="repeatable")
        p.add_argument("--delta", type=float, action="append", help="repeatable")
        p.add_argument("--T", type=float, action="append", dest="T", help="repeatable")
        p.add_argument("--x", type=float, action="append",
                       help="tail threshold, repeatable (tail study only)")
        p.add_argument("--reps", type=int)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: $PICKANDS_THREADS or 1)")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def config_from_args(args: argparse.Namespace) -> StudyConfig:
    d = DEFAULTS[args.study]
    kwargs = {}
    if args.x:
        kwargs["thresholds"] = tuple(args.x)
    return StudyConfig(
        study=args.study,
        alphas=tuple(args.alpha) if args.alpha else d["alphas"],
        deltas=tuple(args.delta) if args.delta else d["deltas"],
        Ts=tuple(args.T) if args.T else d["Ts"],
        reps=args.reps if args.reps is not None else d["reps"],
        seed=args.seed,
        out=args.out,
        fmt=args.format,
        parallelism=args.threads if args.threads is not None else default_threads(),
        **kwargs,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report = run_study(config)
    except (ConfigError, EmbeddingNotPSD, ValueError) as exc:
        print(f"pickands: {exc}", file=sys.stderr)
        return 2
    text = report.render(config.fmt)
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name} {c.detail}".rstrip(), file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
