"""
SeqDiff command-line interface
Train, generate, evaluate and analyze diffusion sequence-to-sequence models.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

import torch

from seqdiff.core.errors import ConfigurationError, SeqDiffError
from seqdiff.core.sampling import SC_MODES
from seqdiff.core.schedules import SCHEDULE_KINDS

from .commands import (
    UsageError,
    cmd_analyze,
    cmd_dump_schedule,
    cmd_eval,
    cmd_generate,
    cmd_train,
)

THREADS_ENV = "SEQDIFF_NUM_THREADS"

DETAILED_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
TERSE_FORMAT = "%(levelname)s: %(message)s"

EPILOG = """
Examples:
  # Train the copy-task quickstart model
  seqdiff train configs/copy_quickstart.json

  # Decode lines from a file with 3 x 2 MBR candidates
  seqdiff generate runs/copy/checkpoint.bin input.txt --length-beam 3 --noise-beam 2

  # NFE sweep on the test split
  seqdiff eval runs/copy/checkpoint.bin --nfe 1 2 5 20

  # Estimation gap report
  seqdiff analyze gap runs/reverse/checkpoint.bin --nfe 5 20 -o gap.csv

Exit Codes:
  0 - Success
  1 - Runtime failure (divergence, I/O, corrupt checkpoint)
  2 - Command-line or configuration error
"""


def setup_logging(verbose: bool = False, detailed: bool = False) -> None:
    """Configure root logging; train logs progress, other commands only warnings"""
    if verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO if detailed else logging.WARNING
    logging.basicConfig(
        level=level,
        format=DETAILED_FORMAT if detailed else TERSE_FORMAT,
        force=True,
    )


def configure_threads(threads: Optional[int]) -> None:
    """Apply --threads, falling back to SEQDIFF_NUM_THREADS"""
    if threads is None:
        raw = os.environ.get(THREADS_ENV)
        if not raw:
            return
        try:
            threads = int(raw)
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got '{raw}'")
    if threads < 1:
        raise UsageError(f"thread count must be >= 1, got {threads}")
    torch.set_num_threads(threads)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Override every random seed")
    common.add_argument(
        "-v", "--verbose", action="store_true", help="Enable debug logging"
    )
    common.add_argument(
        "--threads",
        type=int,
        help=f"Torch thread count (default: ${THREADS_ENV} or torch's choice)",
    )
    return common


def _add_generation_flags(parser: argparse.ArgumentParser, sweep: bool) -> None:
    if sweep:
        parser.add_argument(
            "--nfe", type=int, nargs="+", help="Denoising step count(s) to run"
        )
    else:
        parser.add_argument("--nfe", type=int, help="Number of denoising steps")
    parser.add_argument("--sc-mode", choices=SC_MODES, help="Self-conditioning mode")
    parser.add_argument("--length-beam", type=int, help="Top-k predicted lengths")
    parser.add_argument("--noise-beam", type=int, help="Noise seeds per length")


def _add_dataset_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--data", help="'source<TAB>target' file (default: the checkpoint's task)"
    )
    parser.add_argument(
        "--split",
        choices=("train", "valid", "test"),
        default="test",
        help="Split of the checkpoint's task when --data is absent (default: test)",
    )
    parser.add_argument("--limit", type=int, help="Use only the first N examples")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="seqdiff",
        description="Few-step diffusion sequence-to-sequence toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    parser.add_argument("--version", action="version", version="seqdiff 1.0.0")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", parents=[common], help="Train a model")
    train.add_argument("config", help="JSON run configuration")
    train.add_argument("--iterations", type=int, help="Override training.iterations")
    train.add_argument("--run-dir", help="Override paths.run_dir")
    train.add_argument(
        "--resume",
        action="store_true",
        help="Continue from the run directory's checkpoint if present",
    )
    train.set_defaults(handler=cmd_train, detailed=True)

    generate = sub.add_parser("generate", parents=[common], help="Decode sources")
    generate.add_argument("checkpoint", help="Trained checkpoint")
    generate.add_argument(
        "input", nargs="?", default="-", help="Source lines (default: stdin)"
    )
    generate.add_argument("-o", "--output", help="Output file (default: stdout)")
    _add_generation_flags(generate, sweep=False)
    generate.add_argument(
        "--dump-trajectory", metavar="PATH", help="Write per-step JSONL trajectories"
    )
    generate.add_argument(
        "--dump-candidates", metavar="PATH", help="Write all MBR candidates as JSONL"
    )
    generate.set_defaults(handler=cmd_generate, detailed=False)

    evaluate = sub.add_parser("eval", parents=[common], help="Score a model")
    evaluate.add_argument("checkpoint", help="Trained checkpoint")
    _add_dataset_flags(evaluate)
    _add_generation_flags(evaluate, sweep=True)
    evaluate.add_argument("-o", "--output", help="JSONL output (default: stdout)")
    evaluate.set_defaults(handler=cmd_eval, detailed=False)

    analyze = sub.add_parser(
        "analyze", parents=[common], help="Self-conditioning diagnostics"
    )
    analyze.add_argument("action", choices=("gap", "residuals", "sc-compare"))
    analyze.add_argument("checkpoint", help="Trained checkpoint")
    _add_dataset_flags(analyze)
    _add_generation_flags(analyze, sweep=True)
    analyze.add_argument(
        "--steps", type=int, nargs="+", help="Sampling steps to fit (residuals only)"
    )
    analyze.add_argument("-o", "--output", required=True, help="CSV report path")
    analyze.set_defaults(handler=cmd_analyze, detailed=False)

    dump = sub.add_parser(
        "dump-schedule", parents=[common], help="Tabulate the schedules as CSV"
    )
    dump.add_argument("--config", help="Run configuration (default: built-in)")
    dump.add_argument("--kind", choices=SCHEDULE_KINDS, help="Override noise kind")
    dump.add_argument("--points", type=int, default=101, help="Grid size")
    dump.add_argument("-o", "--output", help="CSV output (default: stdout)")
    dump.set_defaults(handler=cmd_dump_schedule, detailed=False)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command and map failures to exit statuses"""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.detailed)
    logger = logging.getLogger(__name__)
    try:
        configure_threads(args.threads)
        return args.handler(args)
    except (UsageError, ConfigurationError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except (SeqDiffError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return 1


def main():
    """Main CLI entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
