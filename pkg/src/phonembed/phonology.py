"""IPA segmentation, articulatory feature lookup and feature edit distance."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import BadFeatureValue, DuplicateSegment, MalformedRow, UnknownSegment

N_FEATURES = 24

# marks written before a syllable/segment vs. after it
PREFIX_MARKS = "ˈˌ."
SUFFIX_MARKS = "ːˑ"
PRIMARY_STRESS = "ˈ"

_VALUE_TOKENS = {"-": -1, "-1": -1, "0": 0, "+": 1, "1": 1, "+1": 1}


@dataclass(frozen=True)
class FeatureTable:
    """Mapping from IPA segment strings to ternary articulatory feature vectors."""

    feature_names: tuple[str, ...]
    segments: tuple[str, ...]
    matrix: np.ndarray  # (n_segments, 24) int8
    index: Mapping[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if len(self.feature_names) != N_FEATURES:
            raise MalformedRow(f"expected {N_FEATURES} feature names, got {len(self.feature_names)}")
        matrix = np.asarray(self.matrix, dtype=np.int8)
        if matrix.shape != (len(self.segments), N_FEATURES):
            raise MalformedRow(f"feature matrix has shape {matrix.shape}")
        if not np.isin(matrix, (-1, 0, 1)).all():
            raise BadFeatureValue("feature values must be -1, 0 or +1")
        index = {}
        for i, seg in enumerate(self.segments):
            if not seg:
                raise MalformedRow("empty segment string")
            if seg in index:
                raise DuplicateSegment(seg)
            index[seg] = i
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "_max_len", max((len(s) for s in self.segments), default=0))
        # pairwise Hamming-style sums in units of 1/24; exact integers
        diff = np.abs(matrix[:, None, :].astype(np.int16) - matrix[None, :, :]).sum(axis=-1)
        diff.setflags(write=False)
        object.__setattr__(self, "sub_units", diff)

    def __len__(self) -> int:
        return len(self.segments)

    def __contains__(self, segment: str) -> bool:
        return segment in self.index

    def vector(self, segment: str) -> np.ndarray:
        try:
            return self.matrix[self.index[segment]]
        except KeyError:
            raise UnknownSegment(segment, 0) from None

    def digest(self) -> str:
        """Content hash; used to key distance caches."""
        h = hashlib.sha256()
        h.update("\t".join(self.feature_names).encode())
        for seg, row in zip(self.segments, self.matrix):
            h.update(seg.encode())
            h.update(row.tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class PhoneticWord:
    """A segmented pronunciation.

    ``prefixes``/``suffixes`` hold the stripped stress, boundary and length
    marks attached to each segment so the original string can be rebuilt.
    """

    segments: tuple[str, ...]
    ids: tuple[int, ...]
    features: np.ndarray  # (len, 24) int8
    prefixes: tuple[str, ...] = ()
    suffixes: tuple[str, ...] = ()
    trailing: str = ""

    def __len__(self) -> int:
        return len(self.segments)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhoneticWord):
            return NotImplemented
        return self.segments == other.segments

    def __hash__(self) -> int:
        return hash(self.segments)

    @property
    def ipa(self) -> str:
        """Segments joined without any marks."""
        return "".join(self.segments)

    def to_string(self) -> str:
        parts = []
        for i, seg in enumerate(self.segments):
            pre = self.prefixes[i] if self.prefixes else ""
            suf = self.suffixes[i] if self.suffixes else ""
            parts.append(pre + seg + suf)
        return "".join(parts) + self.trailing

    def stressed(self) -> tuple[bool, ...]:
        """Per segment: whether a primary stress mark directly precedes it."""
        if not self.prefixes:
            return (False,) * len(self.segments)
        return tuple(PRIMARY_STRESS in p for p in self.prefixes)


@dataclass(frozen=True)
class EditCosts:
    insertion: float = 1.0
    deletion: float = 1.0

    def __post_init__(self):
        if self.insertion < 0 or self.deletion < 0:
            raise ValueError("edit costs must be non-negative")


DEFAULT_COSTS = EditCosts()


def _parse_value(token: str, path, lineno: int) -> int:
    try:
        return _VALUE_TOKENS[token.strip()]
    except KeyError:
        raise BadFeatureValue(f"{path}:{lineno}: bad feature value {token!r}") from None


def load_feature_table(path: str | Path) -> FeatureTable:
    """Read a TSV feature table.

    The header row carries the 24 feature names, optionally preceded by a
    label for the segment column. Values may be written as ``-/0/+`` or
    ``-1/0/1``.
    """
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        lines = [line.rstrip("\n").rstrip("\r") for line in fh]
    lines = [(i + 1, line) for i, line in enumerate(lines) if line.strip()]
    if not lines:
        raise MalformedRow(f"{path}: empty feature table")
    header = lines[0][1].split("\t")
    if len(header) == N_FEATURES + 1:
        header = header[1:]
    if len(header) != N_FEATURES:
        raise MalformedRow(f"{path}: header has {len(header)} feature names, expected {N_FEATURES}")
    segments, rows, seen = [], [], set()
    for lineno, line in lines[1:]:
        cells = line.split("\t")
        seg, values = cells[0], cells[1:]
        if len(values) != N_FEATURES:
            raise MalformedRow(f"{path}:{lineno}: {len(values)} values for {seg!r}, expected {N_FEATURES}")
        if not seg:
            raise MalformedRow(f"{path}:{lineno}: empty segment")
        if seg in seen:
            raise DuplicateSegment(f"{path}:{lineno}: {seg!r}")
        seen.add(seg)
        segments.append(seg)
        rows.append([_parse_value(v, path, lineno) for v in values])
    matrix = np.array(rows, dtype=np.int8).reshape(len(rows), N_FEATURES)
    return FeatureTable(tuple(h.strip() for h in header), tuple(segments), matrix)


def bundled_table_path() -> Path:
    return Path(str(resources.files("phonembed") / "data" / "features.tsv"))


_BUNDLED: FeatureTable | None = None


def bundled_table() -> FeatureTable:
    """The small articulatory table shipped with the package."""
    global _BUNDLED
    if _BUNDLED is None:
        _BUNDLED = load_feature_table(bundled_table_path())
    return _BUNDLED


def segment_ipa(ipa: str, table: FeatureTable) -> PhoneticWord:
    """Greedy longest-match segmentation, left to right.

    Stress, syllable-boundary and length marks are stripped and kept as
    per-segment annotations.
    """
    segments: list[str] = []
    prefixes: list[str] = []
    suffixes: list[str] = []
    pending = ""
    pos, n = 0, len(ipa)
    max_len = table._max_len
    while pos < n:
        ch = ipa[pos]
        if ch in PREFIX_MARKS:
            pending += ch
            pos += 1
            continue
        if ch in SUFFIX_MARKS:
            if segments and not pending:
                suffixes[-1] += ch
            else:
                pending += ch
            pos += 1
            continue
        for width in range(min(max_len, n - pos), 0, -1):
            cand = ipa[pos:pos + width]
            if cand in table.index:
                break
        else:
            raise UnknownSegment(ipa, pos)
        segments.append(cand)
        prefixes.append(pending)
        suffixes.append("")
        pending = ""
        pos += width
    ids = tuple(table.index[s] for s in segments)
    features = table.matrix[list(ids)] if ids else np.zeros((0, N_FEATURES), dtype=np.int8)
    return PhoneticWord(tuple(segments), ids, features, tuple(prefixes), tuple(suffixes), pending)


def substitution_cost(u: np.ndarray, v: np.ndarray) -> float:
    """Normalised count of differing feature values, in [0, 2]."""
    return int(np.abs(np.asarray(u, dtype=np.int16) - np.asarray(v, dtype=np.int16)).sum()) / N_FEATURES


def _sub_units(x: PhoneticWord, y: PhoneticWord) -> np.ndarray:
    fx = x.features.astype(np.int16)
    fy = y.features.astype(np.int16)
    return np.abs(fx[:, None, :] - fy[None, :, :]).sum(axis=-1)


def feature_edit_distance(x: PhoneticWord, y: PhoneticWord, costs: EditCosts = DEFAULT_COSTS) -> float:
    """Levenshtein distance with articulatory substitution costs.

    Accumulates in units of 1/24 so that with integer-valued insertion and
    deletion costs every partial sum is an exact float.
    """
    ins = costs.insertion * N_FEATURES
    dele = costs.deletion * N_FEATURES
    m = len(y)
    if len(x) == 0:
        return m * ins / N_FEATURES
    if m == 0:
        return len(x) * dele / N_FEATURES
    sub = _sub_units(x, y).tolist()
    prev = [j * ins for j in range(m + 1)]
    for i, row in enumerate(sub, start=1):
        cur = [i * dele] + [0.0] * m
        for j in range(1, m + 1):
            best = prev[j] + dele
            cand = cur[j - 1] + ins
            if cand < best:
                best = cand
            cand = prev[j - 1] + row[j - 1]
            if cand < best:
                best = cand
            cur[j] = best
        prev = cur
    return prev[m] / N_FEATURES


def pack_words(words: Sequence[PhoneticWord], table: FeatureTable) -> tuple[np.ndarray, np.ndarray]:
    """Pad segment ids into a matrix (padding id -1) plus a length vector."""
    lengths = np.array([len(w) for w in words], dtype=np.int64)
    width = int(lengths.max()) if len(words) else 0
    ids = np.full((len(words), width), -1, dtype=np.int64)
    for k, w in enumerate(words):
        ids[k, : len(w)] = w.ids
    return ids, lengths


def distances_to_many(
    x: PhoneticWord,
    ys: Sequence[PhoneticWord],
    table: FeatureTable,
    costs: EditCosts = DEFAULT_COSTS,
    packed: tuple[np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """Feature edit distance from ``x`` to each of ``ys``, vectorised over ``ys``.

    Same recurrence and accumulation order as :func:`feature_edit_distance`,
    so results are identical. Words must carry ids from ``table``.
    """
    ins = costs.insertion * N_FEATURES
    dele = costs.deletion * N_FEATURES
    ids, lengths = packed if packed is not None else pack_words(ys, table)
    k, width = ids.shape
    if k == 0:
        return np.zeros(0)
    safe = np.where(ids < 0, 0, ids)
    prev = np.tile(np.arange(width + 1, dtype=np.float64) * ins, (k, 1))
    sub_units = table.sub_units
    for i, xid in enumerate(x.ids, start=1):
        sub_row = sub_units[xid][safe].astype(np.float64)
        cur = np.empty_like(prev)
        cur[:, 0] = i * dele
        for j in range(1, width + 1):
            best = prev[:, j] + dele
            np.minimum(best, cur[:, j - 1] + ins, out=best)
            np.minimum(best, prev[:, j - 1] + sub_row[:, j - 1], out=best)
            cur[:, j] = best
        prev = cur
    return prev[np.arange(k), lengths] / N_FEATURES
