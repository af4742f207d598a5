"""``hire`` command line: ``run`` an experiment from a JSON config, or ``gen-instance``.

Exit codes: 0 success, 1 invalid configuration or input, 2 I/O or format failure,
3 numeric or runtime failure (non-convergence, bench integrity).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, TextIO

import numpy as np
from pydantic import ValidationError

import hire
from hire.cli.config import ExperimentConfig, Mode
from hire.cli.instances import Spectrum, gen_instance
from hire.cli.modes import Table, run_mode
from hire.common.errors import AllocationError, ConfigError, ConvergenceError, HireError
from hire.common.logging import bind_run, get_logger, setup_logging
from hire.common.settings import get_settings
from hire.io.binary import write_matrix, write_vector

log = get_logger(__name__)

EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_RUNTIME = 3


def _kprime_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hire", description="High-recall approximate top-k experiments."
    )
    parser.add_argument("--version", action="version", version=f"hire {hire.__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment mode")
    run.add_argument("--config", type=Path, help="JSON experiment config")
    run.add_argument("--mode", choices=[m.value for m in Mode])
    run.add_argument("--seed", type=int)
    run.add_argument("--k", type=int)
    run.add_argument("--kprime", type=_kprime_list, dest="k_prime")
    run.add_argument("--rank", type=int, dest="r")
    run.add_argument("--shards", type=int)
    run.add_argument("--group-size", type=int, dest="g")
    run.add_argument("--out", type=Path)

    gen = sub.add_parser("gen-instance", help="write a random score matrix and query vector")
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--l", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--spectrum", choices=[s.value for s in Spectrum], default="flat")
    gen.add_argument("--out-dir", type=Path, required=True)
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """JSON file fields first, then any flag given on the command line."""
    data: dict[str, Any] = {}
    if args.config is not None:
        data = json.loads(Path(args.config).read_text())
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a JSON object")
    for name in ("mode", "seed", "k", "k_prime", "r", "shards", "g", "out"):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    if "mode" not in data:
        raise ConfigError("mode", "required (in the config file or via --mode)")
    return ExperimentConfig.model_validate(data)


def manifest(cfg: ExperimentConfig) -> str:
    return (
        f"# mode={cfg.mode.value} seed={cfg.seed} dims={cfg.dims()} "
        f"versions=hire-{hire.__version__},numpy-{np.__version__}"
    )


def render(table: Table, header_lines: Sequence[str]) -> str:
    buf = io.StringIO()
    for line in header_lines:
        buf.write(line + "\n")
    for note in table.notes:
        buf.write(f"# {note}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    writer.writerows(table.rows)
    return buf.getvalue()


def write_outputs(cfg: ExperimentConfig, table: Table, stdout: TextIO) -> None:
    head = manifest(cfg)
    if cfg.out is None:
        stdout.write(render(table, [head]))
        if table.sidecar is not None:
            stdout.write("\n" + render(table.sidecar, ["# sidecar=histogram"]))
        return
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(render(table, [head]))
    if table.sidecar is not None:
        side = cfg.out.with_name(f"{cfg.out.stem}.hist.csv")
        side.write_text(render(table.sidecar, [head]))
        log.info("sidecar_written", path=str(side))
    log.info("results_written", path=str(cfg.out), rows=len(table.rows))


def _run(args: argparse.Namespace, stdout: TextIO) -> None:
    cfg = load_config(args)
    bind_run(mode=str(cfg.mode), seed=cfg.seed)
    write_outputs(cfg, run_mode(cfg), stdout)


def _gen_instance(args: argparse.Namespace) -> None:
    z, x = gen_instance(args.d, args.l, args.seed, Spectrum(args.spectrum))
    out_dir: Path = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    write_matrix(out_dir / "matrix.bin", z)
    write_vector(out_dir / "vector.bin", x)
    log.info("instance_written", out_dir=str(out_dir), d=z.d, l=z.l, spectrum=args.spectrum)


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    settings = get_settings()
    setup_logging(settings.log_level, settings.log_format)
    args = build_parser().parse_args(argv)
    out = stdout if stdout is not None else sys.stdout
    try:
        if args.command == "run":
            _run(args, out)
        else:
            _gen_instance(args)
    except ConvergenceError as exc:
        log.error("numeric_failure", error=str(exc), iterations=exc.iterations)
        return EXIT_RUNTIME
    except (OSError, AllocationError) as exc:
        log.error("io_failure", error=str(exc))
        return EXIT_IO
    except ValidationError as exc:
        fields = [".".join(str(p) for p in err["loc"]) or "config" for err in exc.errors()]
        log.error("invalid_config", fields=fields, error=str(exc))
        return EXIT_CONFIG
    except ValueError as exc:
        log.error("invalid_input", error=str(exc))
        return EXIT_CONFIG
    except HireError as exc:
        log.error("run_failed", error=str(exc))
        return EXIT_RUNTIME
    return 0


if __name__ == "__main__":
    sys.exit(main())
