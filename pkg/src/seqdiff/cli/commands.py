"""
Command implementations for the seqdiff CLI
Each command takes the parsed arguments and returns an exit status
"""

import argparse
import csv
import json
import logging
import sys
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Optional, Sequence, TextIO

from seqdiff.core.analysis import (
    MIN_GAP_NFE,
    collect_residual_pairs,
    empirical_lambda_gamma,
    estimation_gap,
    fit_residual_stats,
    fit_scp_anchors,
    sc_bleu_compare,
    standardized_residual_normality,
)
from seqdiff.core.config import RunConfig, load_run_config
from seqdiff.core.errors import SeqDiffError
from seqdiff.core.metrics import corpus_bleu, mean_sentence_bleu
from seqdiff.core.pipeline import TrainedModel, TrainingSession, load_trained
from seqdiff.core.sampling import (
    DenoiserCallCounter,
    GenerationConfig,
    generate_candidates,
    mbr_decode,
    mbr_utilities,
    select_mbr,
)
from seqdiff.core.schedules import NoiseSchedule, schedule_table

logger = logging.getLogger(__name__)


class UsageError(SeqDiffError):
    """Command-line arguments that cannot be acted on"""


@contextmanager
def _open_output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def _read_lines(path: str) -> List[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read().splitlines()


def write_rows(path: Optional[str], fieldnames: Sequence[str], rows) -> None:
    with _open_output(path) as handle:
        writer = csv.DictWriter(handle, fieldnames=list(fieldnames))
        writer.writeheader()
        writer.writerows(rows)


def _generation_config(args: argparse.Namespace, base: GenerationConfig):
    changes: Dict[str, Any] = {}
    for name in ("sc_mode", "length_beam", "noise_beam", "seed"):
        value = getattr(args, name, None)
        if value is not None:
            changes[name] = value
    nfe = getattr(args, "nfe", None)
    if isinstance(nfe, int):
        changes["nfe"] = nfe
    return base.replace(**changes)


def _eval_data(trained: TrainedModel, args: argparse.Namespace):
    dataset = trained.eval_dataset(split=args.split, tsv_path=args.data)
    if args.limit is not None:
        dataset = dataset.subset(args.limit)
    if not len(dataset):
        raise UsageError("the evaluation dataset is empty")
    return dataset


def cmd_train(args: argparse.Namespace) -> int:
    """Train from a configuration file; prints the final validation summary"""
    config = load_run_config(args.config).with_overrides(
        iterations=args.iterations, seed=args.seed, run_dir=args.run_dir
    )
    session = TrainingSession(config, resume=args.resume)
    result = session.run()
    if not result.history:
        print(
            f"Nothing to do: {session.trainer.iteration} of "
            f"{config.training.iterations} iterations already completed"
        )
        return 0
    summary = result.final_validation
    final = result.history[-1]
    report = {
        "iteration": final.iteration,
        "l_total": final.l_total,
        "validation_loss": summary.loss if summary else None,
        "validation_accuracy": summary.accuracy if summary else None,
        "run_dir": config.paths.run_dir,
    }
    print(json.dumps(report))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    """Decode every input line; one output line per input line"""
    trained = load_trained(args.checkpoint)
    gcfg = _generation_config(args, trained.config.generation)
    sched = trained.config.schedules.noise
    lines = _read_lines(args.input)
    codebook = trained.model.codebook

    trajectories: List[Dict[str, Any]] = []
    candidate_records: List[Dict[str, Any]] = []
    outputs: List[str] = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            outputs.append("")
            continue
        src = trained.encode_source(line)
        candidates, trajectory = generate_candidates(trained.model, src, gcfg, sched)
        chosen = select_mbr(candidates.sequences)
        outputs.append(trained.decode_target(candidates.candidates[chosen].tokens))
        if args.dump_candidates:
            utilities = mbr_utilities(candidates.sequences)
            candidate_records.append(
                {
                    "line": number,
                    "chosen": chosen,
                    "candidates": [
                        {
                            "text": trained.decode_target(c.tokens),
                            "tokens": list(c.tokens),
                            "length": c.length,
                            "beam": c.beam,
                            "seed": c.seed,
                            "utility": utilities[i],
                        }
                        for i, c in enumerate(candidates.candidates)
                    ],
                }
            )
        if args.dump_trajectory:
            trajectories.append(
                {"line": number, "steps": trajectory.records(codebook, row=chosen)}
            )

    with _open_output(args.output) as handle:
        for text in outputs:
            handle.write(text + "\n")
    if args.dump_candidates:
        _write_jsonl(args.dump_candidates, candidate_records)
    if args.dump_trajectory:
        _write_jsonl(args.dump_trajectory, trajectories)
    logger.info(f"Generated {len(outputs)} line(s) at nfe={gcfg.nfe}")
    return 0


def _write_jsonl(path: str, records: List[Dict[str, Any]]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")


def evaluate_nfe(
    trained: TrainedModel, dataset, gcfg: GenerationConfig
) -> Dict[str, Any]:
    """BLEU, accuracy, denoiser calls per candidate and wall time at one setting"""
    counter = DenoiserCallCounter(trained.model)
    sched = trained.config.schedules.noise
    refs = [list(ex.target) for ex in dataset]
    start = time.perf_counter()
    hyps = [mbr_decode(counter, ex.source, gcfg, sched) for ex in dataset]
    wall = time.perf_counter() - start
    candidates = len(dataset) * gcfg.length_beam * gcfg.noise_beam
    return {
        "nfe": gcfg.nfe,
        "sc_mode": gcfg.sc_mode,
        "length_beam": gcfg.length_beam,
        "noise_beam": gcfg.noise_beam,
        "examples": len(dataset),
        "bleu": mean_sentence_bleu(hyps, refs),
        "corpus_bleu": corpus_bleu(hyps, refs),
        "accuracy": sum(h == r for h, r in zip(hyps, refs)) / len(refs),
        "mean_denoiser_calls": counter.rows / candidates,
        "wall_time_s": wall,
    }


def cmd_eval(args: argparse.Namespace) -> int:
    """One JSON record per NFE of the sweep on stdout"""
    trained = load_trained(args.checkpoint)
    dataset = _eval_data(trained, args)
    base = _generation_config(args, trained.config.generation)
    sweep = args.nfe or [base.nfe]
    with _open_output(args.output) as handle:
        for nfe in sweep:
            record = evaluate_nfe(trained, dataset, base.replace(nfe=nfe))
            logger.info(
                f"nfe={nfe}: bleu={record['bleu']:.4f} "
                f"accuracy={record['accuracy']:.4f}"
            )
            handle.write(json.dumps(record) + "\n")
    return 0


GAP_FIELDS = ("nfe", "step", "t", "gap", "sup", "sup_se")
RESIDUAL_FIELDS = ("step", "t", "dim", "mu", "sigma", "lambda", "gamma", "w", "p")
SC_COMPARE_FIELDS = ("nfe", "bleu_original", "bleu_correct")


def analyze_gap(trained: TrainedModel, dataset, args) -> None:
    sweep = args.nfe or [5, 20]
    gcfg = _generation_config(args, trained.config.generation)
    rows = []
    for nfe in sweep:
        report = estimation_gap(
            trained.model, dataset, nfe, trained.config.schedules.noise, gcfg
        )
        se = report.bootstrap_se(seed=gcfg.seed)
        for step, t, gap in zip(report.steps, report.times, report.per_step):
            rows.append(
                {
                    "nfe": nfe,
                    "step": step,
                    "t": t,
                    "gap": float(gap),
                    "sup": report.sup,
                    "sup_se": se,
                }
            )
    write_rows(args.output, GAP_FIELDS, rows)


def analyze_residuals(trained: TrainedModel, dataset, args) -> None:
    nfe = args.nfe[0] if args.nfe else 20
    gcfg = _generation_config(args, trained.config.generation).replace(nfe=nfe)
    sched = trained.config.schedules.noise
    pairs = collect_residual_pairs(trained.model, dataset, gcfg, sched)
    if args.steps:
        wanted = set(args.steps)
        pairs = [p for p in pairs if p.step in wanted]
        if not pairs:
            raise UsageError(
                f"--steps {sorted(wanted)} selects no step of 1..{nfe - 1}"
            )
    rows = []
    times, mean_lambdas, mean_gammas = [], [], []
    for step_pairs in pairs:
        stats = fit_residual_stats([(step_pairs.reused, step_pairs.matched)])
        lam, gam = empirical_lambda_gamma(stats, step_pairs.t, sched)
        normality = standardized_residual_normality(stats, seed=gcfg.seed)
        for dim in range(stats.mu.shape[0]):
            rows.append(
                {
                    "step": step_pairs.step,
                    "t": step_pairs.t,
                    "dim": dim,
                    "mu": float(stats.mu[dim]),
                    "sigma": float(stats.sigma[dim]),
                    "lambda": float(lam[dim]),
                    "gamma": float(gam[dim]),
                    "w": float(normality.statistics[dim]),
                    "p": float(normality.pvalues[dim]),
                }
            )
        times.append(step_pairs.t)
        mean_lambdas.append(float(lam.mean()))
        mean_gammas.append(float(gam.mean()))
        logger.info(
            f"step {step_pairs.step} (t={step_pairs.t:.4f}): normality rejected in "
            f"{normality.rejection_rate:.1%} of dimensions"
        )
    write_rows(args.output, RESIDUAL_FIELDS, rows)
    if len(times) >= 2:
        anchors = fit_scp_anchors(times, mean_lambdas, mean_gammas)
        print(json.dumps(anchors.to_dict()))


def analyze_sc_compare(trained: TrainedModel, dataset, args) -> None:
    sweep = args.nfe or [5, 10, 20, 50]
    gcfg = _generation_config(args, trained.config.generation)
    rows = []
    for nfe in sweep:
        comparison = sc_bleu_compare(
            trained.model, dataset, nfe, trained.config.schedules.noise, gcfg
        )
        rows.append(
            {
                "nfe": nfe,
                "bleu_original": comparison.bleu_original,
                "bleu_correct": comparison.bleu_correct,
            }
        )
    write_rows(args.output, SC_COMPARE_FIELDS, rows)


ANALYSES = {
    "gap": analyze_gap,
    "residuals": analyze_residuals,
    "sc-compare": analyze_sc_compare,
}


def cmd_analyze(args: argparse.Namespace) -> int:
    """Run one analysis and write its CSV report"""
    if args.action == "gap" and args.nfe:
        too_small = [n for n in args.nfe if n < MIN_GAP_NFE]
        if too_small:
            raise UsageError(
                f"gap needs --nfe >= {MIN_GAP_NFE}, got {too_small}: only interior "
                f"steps 1..nfe-2 have both a reused and a step-matched estimate"
            )
    trained = load_trained(args.checkpoint)
    dataset = _eval_data(trained, args)
    ANALYSES[args.action](trained, dataset, args)
    return 0


def cmd_dump_schedule(args: argparse.Namespace) -> int:
    """Tabulate (t, alpha, sigma, lambda, gamma) as CSV"""
    config = load_run_config(args.config) if args.config else RunConfig()
    noise = config.schedules.noise
    if args.kind is not None:
        noise = NoiseSchedule(kind=args.kind, t_floor=noise.t_floor)
    rows = schedule_table(noise, config.schedules.scp, points=args.points)
    write_rows(args.output, ("t", "alpha", "sigma", "lambda", "gamma"), rows)
    return 0
