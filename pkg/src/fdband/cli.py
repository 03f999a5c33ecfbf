"""``fdband`` command line.

Exit codes: 0 success, 2 configuration error, 3 input/parse error,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .ingest import IngestError, REGIONS, convert_nsidc, sea_ice_like_config, synthesize_ensemble, write_canonical_csv
from .ingest import ConfigError as SynthConfigError
from .pipeline import FAMILIES, ConfigError, RunConfig, StageError, run_pipeline
from .smoother import FitError

EXIT_CONFIG, EXIT_INPUT, EXIT_NUMERIC = 2, 3, 4

# subcommand -> figure families it emits
SUBCOMMAND_EMIT = {
    "smooth": ["smooth"],
    "select-basis": ["mse_profile"],
    "stats": ["means", "mean_diff", "variance", "summary"],
    "bands": ["bands"],
    "phase": ["phase"],
    "change": ["change"],
    "report": list(FAMILIES),
}


def _odd_list(text: str) -> list[int]:
    if ":" in text:
        lo, hi = (int(v) for v in text.split(":"))
        return list(range(lo, hi + 1, 2))
    return [int(v) for v in text.split(",")]


def _partition(text: str):
    # preset name, or explicit blocks like 1979-1996,1997-2015
    if "-" in text and text[0].isdigit():
        return [[int(a) for a in b.split("-")] for b in text.split(",")]
    return text


def _add_run_args(p: argparse.ArgumentParser, multi_partition: bool):
    p.add_argument("--config", help="JSON run configuration; flags override its values")
    p.add_argument("--arctic", help="canonical CSV for the Arctic")
    p.add_argument("--antarctic", help="canonical CSV for the Antarctic")
    p.add_argument("-p", "--basis-count", help="odd number of basis functions, or 'auto'")
    p.add_argument("--p-values", type=_odd_list, help="candidate counts, e.g. 1:51 or 5,7,9")
    p.add_argument("--flatness-tol", type=float)
    p.add_argument("--period", type=float, help="basis period in days")
    p.add_argument("--decades", type=_partition, dest="decade_partition",
                   help="partition for means/variance/phase/change (preset or explicit)")
    if multi_partition:
        p.add_argument("--partitions", type=_partition, nargs="+", dest="band_partitions",
                       help="partitions for bootstrap bands (presets t2 t3-bands t4 t5 ...)")
    p.add_argument("-B", "--b-samples", type=int)
    p.add_argument("--level", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--percent", action="store_true", default=None, help="report change in percent")
    p.add_argument("--no-svg", action="store_false", dest="svg", default=None)
    p.add_argument("-o", "--out-dir", dest="output_dir")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdband", description="Fourier smoothing, bootstrap bands and phase planes for yearly sea-ice curves.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    conv = sub.add_parser("convert-nsidc", help="convert an NSIDC daily export to canonical CSV")
    conv.add_argument("input")
    conv.add_argument("output")
    conv.add_argument("--column", help="value column (default Area, else Extent)")

    syn = sub.add_parser("synth", help="write a synthetic sea-ice-like canonical CSV")
    syn.add_argument("output")
    syn.add_argument("--region", choices=REGIONS, default="Arctic")
    syn.add_argument("--years", type=int, default=37)
    syn.add_argument("--first-year", type=int, default=1979)
    syn.add_argument("--noise", type=float, default=0.08)
    syn.add_argument("--seed", type=int, default=0)

    for name in SUBCOMMAND_EMIT:
        p = sub.add_parser(name, help=f"emit {', '.join(SUBCOMMAND_EMIT[name])}")
        _add_run_args(p, multi_partition=name in ("bands", "report"))
        if name == "report":
            p.add_argument("--emit", nargs="+", choices=FAMILIES)
            p.add_argument("--dump-config", action="store_true",
                           help="print the resolved configuration and exit")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config = RunConfig.from_json(fh.read())
    else:
        config = RunConfig()
    inputs = dict(config.inputs)
    if args.arctic:
        inputs["Arctic"] = args.arctic
    if args.antarctic:
        inputs["Antarctic"] = args.antarctic
    config.inputs = inputs
    if args.basis_count is not None:
        try:
            config.basis_count = "auto" if args.basis_count == "auto" else int(args.basis_count)
        except ValueError:
            raise ConfigError(f"invalid basis count {args.basis_count!r}") from None
    for key in ("p_values", "flatness_tol", "period", "decade_partition", "band_partitions",
                "b_samples", "level", "seed", "workers", "epsilon", "percent", "svg", "output_dir"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    emit = getattr(args, "emit", None)
    if emit:
        config.emit = list(emit)
    elif args.command != "report":
        config.emit = SUBCOMMAND_EMIT[args.command]
    return config.validate()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "convert-nsidc":
            with open(args.input, newline="", encoding="utf-8") as fh:
                text = convert_nsidc(fh, args.column)
            with open(args.output, "w", newline="", encoding="utf-8") as fh:
                fh.write(text)
            return 0
        if args.command == "synth":
            cfg = sea_ice_like_config(args.region, args.years, args.seed, args.noise, args.first_year)
            write_canonical_csv(synthesize_ensemble(cfg), args.output)
            return 0
        config = resolve_config(args)
        if getattr(args, "dump_config", False):
            sys.stdout.write(config.to_json())
            return 0
        manifest = run_pipeline(config)
        print(f"wrote {len(manifest['files'])} files to {config.output_dir}")
        return 0
    except (ConfigError, SynthConfigError) as exc:
        print(f"fdband: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as exc:
        cause = exc.cause
        print(f"fdband: {exc}", file=sys.stderr)
        if isinstance(cause, (IngestError, OSError, UnicodeDecodeError)):
            return EXIT_INPUT
        if isinstance(cause, ConfigError):
            return EXIT_CONFIG
        return EXIT_NUMERIC
    except (IngestError, OSError) as exc:
        print(f"fdband: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (FitError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"fdband: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
