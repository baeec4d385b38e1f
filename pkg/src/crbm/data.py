"""Dataset generation, ingestion, and preprocessing for cause-effect pairs.

On disk a dataset is a directory of plain-text pair files (one observation
per row, whitespace-separated) plus a ``pairmeta.txt`` index with one row per
pair: ``<id> <cause_first> <cause_last> <effect_first> <effect_last>
<weight>`` using 1-based column indices.  Generated datasets are written in
exactly this format so generated and downloaded data flow through one loader.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .direction import Direction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CauseEffectPair:
    """One bivariate sample with ground-truth direction and benchmark weight."""

    id: str
    x: np.ndarray
    y: np.ndarray
    truth: Direction
    weight: float = 1.0
    source: str = ""

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
            raise ValueError(f"pair {self.id}: x and y must be equal-length vectors")
        if x.shape[0] < 2:
            raise ValueError(f"pair {self.id}: need at least 2 observations")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValueError(f"pair {self.id}: non-finite values")
        if self.truth not in (Direction.X_TO_Y, Direction.Y_TO_X):
            raise ValueError(f"pair {self.id}: truth must be XtoY or YtoX")
        if not self.weight > 0:
            raise ValueError(f"pair {self.id}: weight must be positive")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def swapped(self) -> "CauseEffectPair":
        """Same sample with the variable roles exchanged."""
        return CauseEffectPair(self.id, self.y, self.x, self.truth.flipped(), self.weight, self.source)


@dataclass(frozen=True)
class SimLinSpec:
    """Size and seed of a generated linear-mechanism dataset."""

    n_pairs: int = 100
    n_obs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n_pairs < 1 or self.n_obs < 2:
            raise ValueError("n_pairs must be >= 1 and n_obs >= 2")


def zscore(series) -> np.ndarray:
    """Standardize to mean 0 and variance 1 (population divisor)."""
    s = np.asarray(series, dtype=float)
    if s.size == 0 or np.ptp(s) == 0:
        raise ValueError("zscore undefined for a zero-variance series")
    sd = s.std()
    if sd == 0:
        raise ValueError("zscore undefined for a zero-variance series")
    return (s - s.mean()) / sd


def first_pc(matrix) -> np.ndarray:
    """Projection of the rows onto the leading principal axis.

    Columns are centered first; the axis sign is fixed so that its
    largest-magnitude loading is positive.  A single column comes back
    centered but otherwise untouched.
    """
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[1] < 1:
        raise ValueError(f"need a T x D matrix with D >= 1, got shape {mat.shape}")
    t, d = mat.shape
    if t <= d:
        raise ValueError(f"need more rows than columns, got {t} x {d}")
    centered = mat - mat.mean(axis=0)
    if d == 1:
        return centered[:, 0]
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    if svals[0] == 0:
        raise ValueError("rank-0 matrix has no principal axis")
    axis = vt[0]
    if axis[np.argmax(np.abs(axis))] < 0:
        axis = -axis
    return centered @ axis


def sample_random_distribution(rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n points from a randomly configured Gaussian mixture, standardized.

    The mixture has K ~ U{3..8} well-separated components (means on [-2, 2],
    standard deviations on [0.05, 0.3]) with flat-Dirichlet weights; the
    sample is shifted and scaled to exact zero mean and unit variance
    afterwards.  Sharp multi-modal shapes are the point: a cause drawn here
    carries visible structure that a linear mechanism then smooths away.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    k = int(rng.integers(3, 9))
    means = rng.uniform(-2.0, 2.0, size=k)
    sds = rng.uniform(0.05, 0.3, size=k)
    weights = rng.dirichlet(np.ones(k))
    comp = rng.choice(k, size=n, p=weights)
    draws = means[comp] + sds[comp] * rng.standard_normal(n)
    sd = draws.std()
    if sd == 0:
        return np.zeros(n)
    return (draws - draws.mean()) / sd


def matched_variance_response(x: np.ndarray, noise: np.ndarray, slope: float) -> np.ndarray:
    """y = slope * x + c * noise with c chosen so that var(y) = var(x).

    At slope 0 the response is pure rescaled noise; at slope +-1 it is exactly
    +-x.  Assumes x and noise are uncorrelated (they are independent draws in
    the generator).
    """
    scale = np.sqrt(max(0.0, 1.0 - slope**2) * x.var() / noise.var())
    return slope * x + scale * noise


def gen_simlin(spec: SimLinSpec) -> list[CauseEffectPair]:
    """Generate cause-effect pairs with a linear mechanism y = b x + c n.

    The slope b is uniform on [-1, 1] and the noise scale c is chosen so the
    population variances of cause and effect match, leaving the slope intact
    under later normalization.  The cause is always the first variable.
    """
    rng = np.random.default_rng(spec.seed)
    pairs = []
    for k in range(spec.n_pairs):
        x = sample_random_distribution(rng, spec.n_obs)
        noise = sample_random_distribution(rng, spec.n_obs)
        slope = float(rng.uniform(-1.0, 1.0))
        y = matched_variance_response(x, noise, slope)
        pairs.append(
            CauseEffectPair(f"{k + 1:04d}", x, y, Direction.X_TO_Y, weight=1.0, source="simlin")
        )
    return pairs


def _load_pair_table(path: Path) -> np.ndarray:
    table = np.loadtxt(path, ndmin=2)
    if not np.isfinite(table).all():
        raise ValueError("non-finite values in pair file")
    return table


def _reduce_side(table: np.ndarray, first: int, last: int) -> np.ndarray:
    d = table.shape[1]
    if not 1 <= first <= last <= d:
        raise ValueError(f"column range {first}..{last} outside table with {d} columns")
    side = table[:, first - 1:last]
    return side[:, 0] if side.shape[1] == 1 else first_pc(side)


def load_pairs(directory, source: str) -> list[CauseEffectPair]:
    """Load every pair listed in ``pairmeta.txt`` under ``directory``.

    Malformed pairs are skipped with a logged diagnostic; a missing meta file
    is an error since nothing can be loaded without it.
    """
    directory = Path(directory)
    meta_path = directory / "pairmeta.txt"
    if not meta_path.is_file():
        raise FileNotFoundError(f"no pairmeta.txt in {directory}")
    pairs = []
    for line in meta_path.read_text().splitlines():
        tokens = line.split()
        if not tokens:
            continue
        pair_id = tokens[0].removeprefix("pair")
        try:
            if len(tokens) < 5:
                raise ValueError(f"meta row has {len(tokens)} fields, expected at least 5")
            cause_first, cause_last, effect_first, effect_last = map(int, tokens[1:5])
            weight = float(tokens[5]) if len(tokens) > 5 else 1.0
            table = _load_pair_table(directory / f"pair{pair_id}.txt")
            cause = _reduce_side(table, cause_first, cause_last)
            effect = _reduce_side(table, effect_first, effect_last)
            if cause_first <= effect_first:
                x, y, truth = cause, effect, Direction.X_TO_Y
            else:
                x, y, truth = effect, cause, Direction.Y_TO_X
            pairs.append(CauseEffectPair(pair_id, x, y, truth, weight, source))
        except (OSError, ValueError) as err:
            logger.warning("skipping pair %s from %s: %s", pair_id, directory, err)
    return pairs


def load_tuebingen(directory) -> list[CauseEffectPair]:
    """Load a real-world cause-effect-pair collection (pair files + pairmeta)."""
    return load_pairs(directory, source="cep")


def load_simulated(directory, tag: str) -> list[CauseEffectPair]:
    """Load a simulated benchmark collection, attaching its dataset tag."""
    if tag not in ("SIM", "SIM-C"):
        raise ValueError(f"unknown simulated dataset tag: {tag}")
    return load_pairs(directory, source=tag)


def write_pairs(pairs: list[CauseEffectPair], directory) -> Path:
    """Write pairs and their pairmeta.txt in the on-disk dataset format."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    meta_lines = []
    for pair in pairs:
        rows = np.column_stack([pair.x, pair.y])
        lines = [f"{row[0]:.12g} {row[1]:.12g}" for row in rows]
        (directory / f"pair{pair.id}.txt").write_text("\n".join(lines) + "\n")
        cols = "1 1 2 2" if pair.truth == Direction.X_TO_Y else "2 2 1 1"
        meta_lines.append(f"{pair.id} {cols} {pair.weight:.12g}")
    (directory / "pairmeta.txt").write_text("\n".join(meta_lines) + "\n")
    return directory
