"""Command-line front end.

Exit status: 0 when the command succeeds (and its report passes), 1 when a
report's verdict is fail, 2 on invalid arguments or I/O errors.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .harness import (
    COMPARISONS,
    bench,
    compare_laws,
    cycles_report,
    named_comparison,
    process_report,
    variance_scaling_report,
)
from .kernels import RngStream
from .products import sample_log_process
from .samplers import SAMPLERS, generate_batch

# per-command defaults, each chosen to finish in well under a minute on one core
DEFAULTS = {
    "sample": dict(n=8, count=10_000),
    "compare": dict(n=8, count=10_000),
    "cycles": dict(n=8, count=100_000),
    "clt": dict(n=1_000, count=10_000, n_small=10),
    "process": dict(n=1_000, count=100),
    "bench": dict(n=512, count=3),
}


@dataclass
class RunConfig:
    command: str
    n: int
    count: int
    seed: int = 0
    target: str = None
    n_small: int = None
    t_grid: list = field(default_factory=list)
    out: str = None
    format: str = "csv"
    level: float = 1e-3
    workers: int = 1

    def validate(self):
        if self.n < 1:
            raise ValueError("--n must be >= 1")
        if self.count < 1:
            raise ValueError("--count must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("--seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError("--workers must be >= 1")
        if self.format not in ("csv", "json"):
            raise ValueError("--format must be csv or json")
        if self.command == "sample" and self.target not in SAMPLERS:
            raise ValueError(f"unknown sampler {self.target!r}")
        if self.command == "compare" and self.target not in COMPARISONS:
            raise ValueError(f"unknown comparison {self.target!r}")
        if any(not 0 <= t < 1 for t in self.t_grid):
            raise ValueError("--tgrid values must lie in [0, 1)")
        if self.command == "clt" and self.n_small is not None and not 1 <= self.n_small <= self.n:
            raise ValueError("--n-small must lie in 1..n")


def _parse_grid(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad t-grid {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="haarlaw",
        description="Equalities in law for det(Id - G) under Haar measure: samplers and checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_format=True):
        p.add_argument("--n", type=int, default=None, help="matrix size (default per command)")
        p.add_argument("--count", type=int, default=None, help="samples or paths")
        p.add_argument("--seed", type=int, default=0, help="root seed (unsigned 64-bit)")
        p.add_argument("--workers", type=int, default=1,
                       help="worker processes; output does not depend on this")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        if with_format:
            p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--level", type=float, default=1e-3, help="KS significance level")

    samplers = "\n".join(f"  {k:24s} {s.description}" for k, s in SAMPLERS.items())
    p = sub.add_parser("sample", help="emit a batch of Z samples",
                       formatter_class=argparse.RawDescriptionHelpFormatter,
                       epilog=f"samplers:\n{samplers}")
    p.add_argument("sampler", choices=list(SAMPLERS), metavar="SAMPLER")
    common(p)

    comparisons = "\n".join(f"  {k:24s} {v[3]}" for k, v in COMPARISONS.items())
    p = sub.add_parser("compare", help="run an equality-in-law comparison",
                       formatter_class=argparse.RawDescriptionHelpFormatter,
                       epilog=f"comparisons:\n{comparisons}")
    p.add_argument("comparison", choices=list(COMPARISONS), metavar="COMPARISON")
    common(p, with_format=False)

    p = sub.add_parser("cycles", help="cycle-count law: empirical vs exact")
    common(p, with_format=False)

    p = sub.add_parser("clt", help="variance scaling and normality of log det(Id - G)")
    common(p, with_format=False)
    p.add_argument("--n-small", type=int, default=None, help="smaller size for the variance difference")

    p = sub.add_parser("process", help="sample paths of the log partial-product process")
    common(p)
    p.add_argument("--tgrid", type=_parse_grid, default=[0.0, 0.25, 0.5, 0.75],
                   help="comma-separated times in [0, 1)")

    p = sub.add_parser("bench", help="matrix path vs product path timings")
    common(p, with_format=False)
    return parser


def config_from_args(args):
    defaults = DEFAULTS[args.command]
    return RunConfig(
        command=args.command,
        n=args.n if args.n is not None else defaults["n"],
        count=args.count if args.count is not None else defaults["count"],
        seed=args.seed,
        target=getattr(args, "sampler", None) or getattr(args, "comparison", None),
        n_small=getattr(args, "n_small", None) or defaults.get("n_small"),
        t_grid=list(getattr(args, "tgrid", []) or []),
        out=args.out,
        format=(getattr(args, "format", None) or ("json" if args.command in ("compare", "cycles", "clt", "bench") else "csv")),
        level=args.level,
        workers=args.workers,
    )


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _report_text(report, config):
    data = report.to_dict()
    data["metadata"]["config"] = asdict(config)
    return json.dumps(data, indent=2, default=_jsonable) + "\n"


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(type(obj).__name__)


def _batch_text(batch, config):
    if config.format == "json":
        data = {
            "sampler_id": batch.sampler_id,
            "n": batch.n,
            "seed": batch.seed,
            "count": batch.count,
            "config": asdict(config),
            "values": [[float(z.real), float(z.imag)] for z in batch.values],
        }
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "re", "im"])
    for i, z in enumerate(batch.values):
        writer.writerow([i, repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def _process_text(path, config):
    values = np.atleast_2d(path.values)
    if config.format == "json":
        data = {
            "n": path.n,
            "t_grid": path.t_grid.tolist(),
            "config": asdict(config),
            "paths": [[[float(z.real), float(z.imag)] for z in row] for row in values],
        }
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["path", "t", "re", "im"])
    for p, row in enumerate(values):
        for t, z in zip(path.t_grid, row):
            writer.writerow([p, repr(float(t)), repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def run(config):
    """Execute one command; returns the process exit status."""
    config.validate()
    c = config
    if c.command == "sample":
        batch = generate_batch(c.target, c.n, c.count, c.seed, c.workers)
        _emit(_batch_text(batch, c), c.out)
        return 0
    if c.command == "process":
        path = sample_log_process(c.n, c.t_grid, RngStream(c.seed), c.count)
        _emit(_process_text(path, c), c.out)
        return 0
    if c.command == "bench":
        timings = bench(c.n, c.seed, matrix_reps=c.count)
        timings["config"] = asdict(c)
        _emit(json.dumps(timings, indent=2) + "\n", c.out)
        return 0
    if c.command == "compare":
        report = compare_laws(named_comparison(c.target, c.n, c.count, c.seed, c.level, c.workers))
    elif c.command == "cycles":
        report = cycles_report(c.n, c.count, c.seed)
    else:
        report = variance_scaling_report(c.n_small, c.n, c.count, RngStream(c.seed), level=c.level)
    _emit(_report_text(report, c), c.out)
    print(report.summary(), file=sys.stderr)
    return 0 if report.passed else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        return run(config)
    except (ValueError, OSError) as exc:
        print(f"haarlaw: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
