"""Multi-seed benchmark orchestration, weighted accuracy, ROC/AUC, persistence.

A benchmark maps a method over (pair, round) tasks with independent RNG
streams derived from (base seed, pair id, round index), so aggregation is
order-independent and a run is reproducible bit for bit.  Per-task failures
are recorded as abstentions and never abort the run.
"""

from __future__ import annotations

import json
import logging
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .criterion import gamma
from .data import CauseEffectPair, zscore
from .direction import Direction
from .igci import igci_entropy, igci_slope
from .trainer import TrainConfig, train

logger = logging.getLogger(__name__)

METHODS = ("crbm", "igci1", "igci2")
DETERMINISTIC_METHODS = ("igci1", "igci2")


@dataclass(frozen=True)
class PairResult:
    """Outcome of one method on one pair in one round.

    ``gamma`` holds the method's signed statistic (mode non-uniformity gap
    for crbm, directed score for the baselines); more negative means stronger
    evidence for x -> y.
    """

    pair_id: str
    round_index: int
    gamma: float
    decision: Direction
    truth: Direction
    weight: float
    correct: float
    method: str

    def __post_init__(self):
        expected = 1.0 if self.decision == self.truth else (0.5 if self.decision == Direction.UNDECIDED else 0.0)
        if self.correct != expected:
            raise ValueError(f"correct={self.correct} inconsistent with decision/truth")


@dataclass(frozen=True)
class BenchSummary:
    """Aggregate accuracy and AUC over rounds, plus the per-pair table."""

    method: str
    dataset: str
    accuracy_mean: float
    accuracy_std: float
    auc_mean: float | None
    auc_std: float | None
    n_rounds: int
    results: tuple[PairResult, ...]


def _score_correct(decision: Direction, truth: Direction) -> float:
    if decision == truth:
        return 1.0
    if decision == Direction.UNDECIDED:
        return 0.5
    return 0.0


def _seed_material(pair_id: str) -> int:
    return int(pair_id) if pair_id.isdigit() else zlib.crc32(pair_id.encode())


def evaluate_pair(
    pair: CauseEffectPair,
    method: str,
    config: TrainConfig,
    round_index: int,
) -> PairResult:
    """Run one method on one pair; failures degrade to an abstention."""
    try:
        if method == "crbm":
            seq = np.random.SeedSequence([config.seed, _seed_material(pair.id), round_index])
            rng = np.random.default_rng(seq)
            xy = np.column_stack([zscore(pair.x), zscore(pair.y)])
            fit = train(xy, config, rng)
            decision = gamma(fit.params, fit.ranges)
            stat, direction = decision.gamma, decision.direction
        elif method == "igci1":
            score = igci_slope(pair.x, pair.y)
            stat, direction = score.score, score.direction
        elif method == "igci2":
            score = igci_entropy(pair.x, pair.y)
            stat, direction = score.score, score.direction
        else:
            raise ValueError(f"unknown method: {method}")
    except ValueError as err:
        logger.warning("pair %s round %d (%s) failed: %s", pair.id, round_index, method, err)
        stat, direction = 0.0, Direction.UNDECIDED
    return PairResult(
        pair_id=pair.id,
        round_index=round_index,
        gamma=float(stat),
        decision=direction,
        truth=pair.truth,
        weight=pair.weight,
        correct=_score_correct(direction, pair.truth),
        method=method,
    )


def weighted_accuracy(results: list[PairResult]) -> float:
    """Weight-normalized share of correct decisions (abstentions count half)."""
    if not results:
        raise ValueError("no results to score")
    weights = np.array([r.weight for r in results])
    correct = np.array([r.correct for r in results])
    return float(np.sum(weights * correct) / np.sum(weights))


def roc_auc(results: list[PairResult]) -> tuple[list[tuple[float, float]], float]:
    """Weighted ROC for the task "truth is x -> y" scored by -gamma.

    Thresholds sweep the distinct scores in descending order with ties
    grouped; the returned AUC is the trapezoidal area, which equals the
    weighted rank statistic with half-credit for score ties.
    """
    truths = np.array([r.truth == Direction.X_TO_Y for r in results])
    if truths.all() or not truths.any():
        raise ValueError("ROC needs both truth classes")
    scores = np.array([-r.gamma for r in results])
    weights = np.array([r.weight for r in results])
    w_pos = np.sum(weights[truths])
    w_neg = np.sum(weights[~truths])

    points = [(0.0, 0.0)]
    tp = fp = 0.0
    for s in sorted(set(scores.tolist()), reverse=True):
        group = scores == s
        tp += np.sum(weights[group & truths])
        fp += np.sum(weights[group & ~truths])
        points.append((float(fp / w_neg), float(tp / w_pos)))
    points.append((1.0, 1.0))

    fpr = np.array([p[0] for p in points])
    tpr = np.array([p[1] for p in points])
    auc = float(np.trapezoid(tpr, fpr))
    return points, auc


def _round_metrics(results: list[PairResult]) -> tuple[float, float | None]:
    acc = weighted_accuracy(results)
    try:
        _, auc = roc_auc(results)
    except ValueError:
        auc = None
    return acc, auc


def run_benchmark(
    pairs: list[CauseEffectPair],
    method: str,
    config: TrainConfig,
    n_rounds: int = 10,
    dataset: str | None = None,
    jobs: int = 1,
) -> BenchSummary:
    """Evaluate a method over all pairs for ``n_rounds`` independent rounds.

    Deterministic methods collapse to a single round.  ``jobs`` > 1 spreads
    the (pair, round) tasks over worker processes; results are aggregated in
    task order regardless of completion order.
    """
    if not pairs:
        raise ValueError("no pairs to benchmark")
    if method not in METHODS:
        raise ValueError(f"unknown method: {method} (expected one of {METHODS})")
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    if method in DETERMINISTIC_METHODS:
        n_rounds = 1
    if dataset is None:
        dataset = pairs[0].source or "unknown"

    tasks = [(pair, method, config, r) for r in range(n_rounds) for pair in pairs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_task, tasks, chunksize=4))
    else:
        results = [evaluate_pair(*task) for task in tasks]

    accs, aucs = [], []
    for r in range(n_rounds):
        round_results = [res for res in results if res.round_index == r]
        acc, auc = _round_metrics(round_results)
        accs.append(acc)
        aucs.append(auc)

    have_auc = all(a is not None for a in aucs)
    return BenchSummary(
        method=method,
        dataset=dataset,
        accuracy_mean=float(np.mean(accs)),
        accuracy_std=float(np.std(accs)),
        auc_mean=float(np.mean(aucs)) if have_auc else None,
        auc_std=float(np.std(aucs)) if have_auc else None,
        n_rounds=n_rounds,
        results=tuple(results),
    )


def _evaluate_task(task) -> PairResult:
    pair, method, config, round_index = task
    return evaluate_pair(pair, method, config, round_index)


def format_summary(summary: BenchSummary) -> str:
    auc = f"{summary.auc_mean:.4f}" if summary.auc_mean is not None else "n/a"
    return (
        f"{summary.dataset} {summary.method} "
        f"acc={summary.accuracy_mean:.4f}±{summary.accuracy_std:.4f} auc={auc}"
    )


def persist_results(summary: BenchSummary, out_dir, partial: bool = False) -> tuple[Path, Path]:
    """Write results.json (summary plus per-pair records) and roc.csv.

    The ROC file pools all rounds; when the data contains a single truth
    class the curve is undefined and only the header row is written.  Output
    bytes are deterministic for identical inputs.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "method": summary.method,
            "dataset": summary.dataset,
            "accuracy_mean": summary.accuracy_mean,
            "accuracy_std": summary.accuracy_std,
            "auc_mean": summary.auc_mean,
            "auc_std": summary.auc_std,
            "n_rounds": summary.n_rounds,
            "partial": partial,
            "per_pair": [
                {
                    "pair": r.pair_id,
                    "round": r.round_index,
                    "gamma": r.gamma,
                    "decision": r.decision.value,
                    "truth": r.truth.value,
                    "weight": r.weight,
                    "correct": r.correct,
                    "method": r.method,
                }
                for r in summary.results
            ],
        }
        results_path = out_dir / "results.json"
        results_path.write_text(json.dumps(payload, indent=2) + "\n")

        roc_path = out_dir / "roc.csv"
        lines = ["fpr,tpr"]
        try:
            points, _ = roc_auc(list(summary.results))
            lines += [f"{fpr!r},{tpr!r}" for fpr, tpr in points]
        except ValueError:
            pass
        roc_path.write_text("\n".join(lines) + "\n")
    except OSError as err:
        raise OSError(f"failed to persist results under {out_dir}: {err}") from err
    return results_path, roc_path


def load_results(path) -> dict:
    """Round-trip reader for results.json."""
    return json.loads(Path(path).read_text())
