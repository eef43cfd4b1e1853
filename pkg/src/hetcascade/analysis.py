"""Association between score vectors: Pearson, Spearman, Kendall tau-b, top-fraction precision."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats


class UndefinedCorrelationError(ValueError):
    """A correlation was requested for a constant vector or fewer than three pairs."""


@dataclass(frozen=True)
class AssociationReport:
    pearson: float
    spearman: float
    kendall: float
    top_precision: float
    n_pairs: int


def _pair(x, y, min_len=3):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("score vectors must be one-dimensional and of equal length")
    if len(x) < min_len:
        raise UndefinedCorrelationError(f"correlation undefined for {len(x)} pairs (need {min_len})")
    for v in (x, y):
        if np.all(v == v[0]):
            raise UndefinedCorrelationError("correlation undefined for a constant vector")
    return x, y


def pearson(x, y) -> float:
    x, y = _pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    r = float(np.dot(dx, dy) / math.sqrt(np.dot(dx, dx) * np.dot(dy, dy)))
    return max(-1.0, min(1.0, r))


def spearman(x, y) -> float:
    """Pearson correlation of mid-ranks."""
    x, y = _pair(x, y)
    return pearson(stats.rankdata(x), stats.rankdata(y))


def kendall(x, y) -> float:
    """Kendall tau-b."""
    x, y = _pair(x, y)
    return float(stats.kendalltau(x, y, variant="b").statistic)


def top_set(scores, m: int) -> np.ndarray:
    """Indices of the ``m`` largest scores; ties at the boundary go to lower indices."""
    s = np.asarray(scores, dtype=float)
    order = np.lexsort((np.arange(len(s)), -s))
    return order[:m]


def top_fraction_precision(score_a, score_b, fraction: float = 0.1) -> float:
    """Overlap of the top floor(fraction * n) (at least 1) nodes under both scores, over that size."""
    a = np.asarray(score_a, dtype=float)
    b = np.asarray(score_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("score vectors differ in length")
    if len(a) == 0:
        raise ValueError("empty score vectors")
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must lie in (0, 1], got {fraction}")
    m = max(1, int(math.floor(fraction * len(a))))
    return len(np.intersect1d(top_set(a, m), top_set(b, m))) / m


def associate(capacity, scores, fraction: float = 0.1) -> AssociationReport:
    """All four measures, dropping pairs where either value is NaN (absent)."""
    c = np.asarray(capacity, dtype=float)
    s = np.asarray(scores, dtype=float)
    keep = ~(np.isnan(c) | np.isnan(s))
    c, s = c[keep], s[keep]
    return AssociationReport(
        pearson=pearson(c, s),
        spearman=spearman(c, s),
        kendall=kendall(c, s),
        top_precision=top_fraction_precision(s, c, fraction),
        n_pairs=int(keep.sum()),
    )


def iqr(values) -> float:
    q75, q25 = np.percentile(np.asarray(values, dtype=float), [75, 25])
    return float(q75 - q25)
