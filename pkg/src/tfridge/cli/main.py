"""Command-line front end.

Subcommands::

    tfridge synth      --preset paper-A --out runs/a
    tfridge sim-dimer  --preset fig3-left --out runs/left
    tfridge analyze    --preset fig6 --fit --out runs/fig6

Exit codes: 0 success, 2 configuration / input / IO error, 3 oscillator
truncation not converged, 4 other numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .. import __version__
from ..exceptions import NumericalError, TFRidgeError, TruncationNotConverged, ValidationError
from . import formats
from .config import (
    RunConfig,
    load_config_file,
    parse_config,
    preset_config,
    preset_names,
)
from .pipeline import acquire_signal, analyze, simulate

logger = logging.getLogger("tfridge")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TRUNCATION = 3
EXIT_NUMERICAL = 4


class UsageError(Exception):
    pass


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfridge",
        description="Wavelet scalograms, ridge extraction and the signals they were built for.",
    )
    parser.add_argument("--version", action="version", version=f"tfridge {__version__}")
    parser.add_argument("--list-presets", action="store_true", help="print preset names and exit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--preset", help="named experiment from the preset registry")
        src.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", help="existing output directory (overrides config)")

    p = sub.add_parser("synth", help="write signal.csv for a toy or lineshape source")
    common(p)
    p = sub.add_parser("sim-dimer", help="simulate the dimer and write coherence.csv")
    common(p)
    p = sub.add_parser("analyze", help="write spectrum, scalogram and ridge CSVs")
    common(p)
    p.add_argument("--fit", action="store_true", help="fit the peak track, write fit.json")
    p.add_argument("--threshold", type=float, help="dominance threshold (default 0.2)")
    p.add_argument("--fmin", type=float)
    p.add_argument("--fmax", type=float)
    p.add_argument("--voices", type=int)
    p.add_argument("--omega0", type=float)
    p.add_argument("--no-coi", action="store_true", help="report ridges outside the cone of influence")
    return parser


def resolve_config(args) -> RunConfig:
    if args.preset:
        raw = preset_config(args.preset)
    elif args.config:
        raw = load_config_file(args.config)
    else:
        raise UsageError("one of --preset or --config is required")
    if args.out is not None:
        raw["out"] = args.out
    overrides = {"f_min": getattr(args, "fmin", None), "f_max": getattr(args, "fmax", None),
                 "voices": getattr(args, "voices", None), "omega0": getattr(args, "omega0", None)}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if overrides:
        raw.setdefault("cwt", {}).update(overrides)
    if getattr(args, "threshold", None) is not None:
        raw.setdefault("ridge", {})["threshold"] = args.threshold
    if getattr(args, "no_coi", False):
        raw.setdefault("ridge", {})["respect_coi"] = False
    return parse_config(raw)


def _out_dir(config: RunConfig) -> Path:
    out = config.out
    if not out.is_dir():
        raise UsageError(f"output directory does not exist: {out}")
    return out


def _provenance(command: str, config: RunConfig, outputs: list[str], extra: dict | None = None):
    doc = {"tool": "tfridge", "version": __version__, "command": command,
           "config": config.to_dict(), "outputs": outputs}
    if extra:
        doc.update(extra)
    return doc


def cmd_synth(config: RunConfig) -> list[Path]:
    if config.source not in ("toy", "lineshape"):
        raise UsageError("synth needs a toy or lineshape source")
    out = _out_dir(config)
    signal, _ = acquire_signal(config)
    formats.write_time_series(out / "signal.csv", signal)
    formats.write_json(out / "run.json", _provenance("synth", config, ["signal.csv"]))
    return [out / "signal.csv", out / "run.json"]


def cmd_sim_dimer(config: RunConfig) -> list[Path]:
    out = _out_dir(config)
    trace = simulate(config)
    from ..core import TimeSeries

    formats.write_time_series(out / "coherence.csv", TimeSeries(trace.grid, trace.values))
    formats.write_json(out / "run.json", _provenance(
        "sim-dimer", config, ["coherence.csv"], {"diagnostics": trace.diagnostics}))
    return [out / "coherence.csv", out / "run.json"]


def cmd_analyze(config: RunConfig, do_fit: bool = False) -> list[Path]:
    out = _out_dir(config)
    signal, diag = acquire_signal(config)
    res = analyze(signal, config, do_fit)
    formats.write_spectrum(out / "spectrum.csv", res.spectrum)
    formats.write_scalogram(out / "scalogram.csv", res.scalogram)
    formats.write_ridge(out / "ridge.csv", res.ridge)
    names = ["spectrum.csv", "scalogram.csv", "ridge.csv"]
    extra = {"diagnostics": diag} if diag else {}
    if res.fit is not None:
        formats.write_json(out / "fit.json", formats.fit_to_dict(res.fit))
        names.append("fit.json")
        extra["fit_window"] = list(res.fit_window)
    formats.write_json(out / "run.json", _provenance("analyze", config, names, extra))
    return [out / n for n in names] + [out / "run.json"]


def main(argv: list[str] | None = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if args.list_presets:
        print("\n".join(preset_names()))
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    try:
        config = resolve_config(args)
        if args.command == "synth":
            written = cmd_synth(config)
        elif args.command == "sim-dimer":
            written = cmd_sim_dimer(config)
        else:
            written = cmd_analyze(config, args.fit)
    except TruncationNotConverged as exc:
        print(f"tfridge: TruncationNotConverged: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except NumericalError as exc:
        print(f"tfridge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, ValidationError, OSError) as exc:
        print(f"tfridge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TFRidgeError as exc:
        print(f"tfridge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in written:
        logger.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
