"""Articulatory distance lookups with an optional persistent cache."""

from __future__ import annotations

import logging
import threading
from pathlib import Path
from typing import Sequence

import numpy as np

from .phonology import DEFAULT_COSTS, EditCosts, FeatureTable, PhoneticWord, distances_to_many, feature_edit_distance

log = logging.getLogger(__name__)


class ArticulatoryDistance:
    """Feature edit distance over words segmented with ``table``."""

    def __init__(self, table: FeatureTable, costs: EditCosts = DEFAULT_COSTS):
        self.table = table
        self.costs = costs

    def __call__(self, a: PhoneticWord, b: PhoneticWord) -> float:
        return self.distance(a, b)

    def distance(self, a: PhoneticWord, b: PhoneticWord) -> float:
        return feature_edit_distance(a, b, self.costs)

    def distances(self, a: PhoneticWord, bs: Sequence[PhoneticWord]) -> np.ndarray:
        return distances_to_many(a, bs, self.table, self.costs)


class DistanceCache(ArticulatoryDistance):
    """Memoising distance provider backed by an append-only log.

    Each log line is ``table-digest, word A, word B, value`` with words as
    space-joined segments and the value as a hex float, so reloads are
    bit-exact. Lines written under a different feature table are ignored.
    Reads are lock-free; writes are serialised.
    """

    def __init__(self, table: FeatureTable, path: str | Path | None = None, costs: EditCosts = DEFAULT_COSTS):
        super().__init__(table, costs)
        self.path = Path(path) if path is not None else None
        self.digest = f"{table.digest()}:{costs.insertion!r}:{costs.deletion!r}"
        self._store: dict[tuple[tuple[str, ...], tuple[str, ...]], float] = {}
        self._pending: list[str] = []
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self) -> None:
        stale = 0
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 4:
                    continue
                if parts[0] != self.digest:
                    stale += 1
                    continue
                key = (tuple(parts[1].split(" ")) if parts[1] else (), tuple(parts[2].split(" ")) if parts[2] else ())
                self._store[key] = float.fromhex(parts[3])
        if stale:
            log.info("ignored %d cache lines from another feature table", stale)

    def __len__(self) -> int:
        return len(self._store)

    def _put(self, key, value: float) -> None:
        with self._lock:
            if key in self._store:
                return
            self._store[key] = value
            if self.path is not None:
                self._pending.append(f"{self.digest}\t{' '.join(key[0])}\t{' '.join(key[1])}\t{value.hex()}\n")

    def distance(self, a: PhoneticWord, b: PhoneticWord) -> float:
        key = (a.segments, b.segments)
        value = self._store.get(key)
        if value is not None:
            self.hits += 1
            return value
        self.misses += 1
        value = feature_edit_distance(a, b, self.costs)
        self._put(key, value)
        return value

    def distances(self, a: PhoneticWord, bs: Sequence[PhoneticWord]) -> np.ndarray:
        out = np.empty(len(bs))
        missing = []
        for k, b in enumerate(bs):
            value = self._store.get((a.segments, b.segments))
            if value is None:
                missing.append(k)
            else:
                out[k] = value
        self.hits += len(bs) - len(missing)
        self.misses += len(missing)
        if missing:
            fresh = distances_to_many(a, [bs[k] for k in missing], self.table, self.costs)
            for k, value in zip(missing, fresh):
                out[k] = value
                self._put((a.segments, bs[k].segments), float(value))
        return out

    def flush(self) -> None:
        if self.path is None:
            return
        with self._lock:
            if not self._pending:
                return
            with self.path.open("a", encoding="utf-8") as fh:
                fh.writelines(self._pending)
            self._pending.clear()
