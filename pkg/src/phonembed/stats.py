"""Correlation statistics."""

from __future__ import annotations

import numpy as np

from .errors import DegenerateSeries


def _as_pair(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("series must be 1-d and of equal length")
    if len(x) < 2:
        raise DegenerateSeries("need at least two observations")
    return x, y


def pearson(xs, ys) -> float:
    x, y = _as_pair(xs, ys)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise DegenerateSeries("zero variance series")
    r = float(dx @ dy) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def rankdata(values) -> np.ndarray:
    """1-based ranks, ties get the average of the ranks they span."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    sorted_v = v[order]
    ranks = np.empty(len(v))
    start = 0
    while start < len(v):
        stop = start + 1
        while stop < len(v) and sorted_v[stop] == sorted_v[start]:
            stop += 1
        ranks[order[start:stop]] = (start + stop + 1) / 2.0
        start = stop
    return ranks


def spearman(xs, ys) -> float:
    x, y = _as_pair(xs, ys)
    return pearson(rankdata(x), rankdata(y))
