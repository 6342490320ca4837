"""``bisa-mech`` command line.

Exit codes: 0 success, 2 user or domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import jsonschema

from . import pipeline
from .config import RunConfig, parse_range
from .core import DomainError
from .synthetic import write_dataset

log = logging.getLogger("bisa_mech")

EXIT_USAGE = 2
EXIT_IO = 3


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_sweep(args, cfg: RunConfig) -> int:
    sweep = cfg["sweep"]
    alphas = parse_range(args.alpha_range or sweep["alpha_range_deg"])
    lambdas = args.lambda_list or sweep["lambdas"]
    nu = sweep["nu"] if args.nu is None else args.nu
    for path in pipeline.write_sweep(alphas, lambdas, nu, Path(args.out)):
        print(path)
    return 0


def cmd_stiffness(args, cfg: RunConfig) -> int:
    if args.mode == "lateral":
        doc = pipeline.stiffness_lateral(cfg, args.alpha)
    else:
        pressure = cfg["load"]["pressure_kPa"] if args.pressure is None else args.pressure
        doc = pipeline.stiffness_bending(cfg, pressure, args.external_moment)
    sys.stdout.write(pipeline.dumps(doc))
    return 0


def cmd_fit(args, cfg: RunConfig) -> int:
    doc, table = pipeline.fit_files(args.kind, [Path(f) for f in args.files], cfg, args.degree)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"fit_{args.kind}.json").write_text(pipeline.dumps(doc))
        (out / f"fit_{args.kind}.csv").write_text(table)
    sys.stdout.write(pipeline.dumps(doc))
    return 0


def cmd_report(args, cfg: RunConfig) -> int:
    text = pipeline.dumps(pipeline.build_report(cfg, Path(args.data_dir)))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_synth(args, cfg: RunConfig) -> int:
    for path in write_dataset(cfg, Path(args.out)):
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bisa-mech", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="JSON run configuration (overlays the shipped defaults)")
        p.set_defaults(func=func)
        return p

    p = add("sweep", cmd_sweep, "write influence.csv and evaluation.csv")
    p.add_argument("--lambda-list", type=_floats, help="aspect ratios, e.g. 0.25,0.5,1,2")
    p.add_argument("--alpha-range", help="start:stop:step in degrees, stop inclusive")
    p.add_argument("--nu", type=float)
    p.add_argument("--out", required=True, help="output directory")

    p = add("stiffness", cmd_stiffness, "evaluate lateral or bending stiffness")
    p.add_argument("--mode", choices=("lateral", "bending"), default="lateral")
    p.add_argument("--alpha", type=float, default=90.0, help="bending angle in degrees (lateral mode)")
    p.add_argument("--pressure", type=float, help="chamber pressure in kPa (bending mode)")
    p.add_argument("--external-moment", type=float, help="external moment in N*m, classifies the regime")

    p = add("fit", cmd_fit, "reduce measurement CSVs")
    p.add_argument("files", nargs="+")
    p.add_argument("--kind", choices=pipeline.FIT_KINDS, required=True)
    p.add_argument("--degree", type=int, default=2, help="polynomial degree for angle-pressure")
    p.add_argument("--out", help="directory for fit_<kind>.json and fit_<kind>.csv")

    p = add("report", cmd_report, "combine fit outputs into one JSON report")
    p.add_argument("data_dir")
    p.add_argument("--out", help="write the report here instead of stdout")

    p = add("synth", cmd_synth, "generate a synthetic dataset from the configured models")
    p.add_argument("--out", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.load(args.config)
        return args.func(args, cfg)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        print(f"bisa-mech: invalid configuration at {path}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, json.JSONDecodeError) as exc:
        print(f"bisa-mech: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"bisa-mech: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
