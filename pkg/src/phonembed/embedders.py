"""Word to vector maps: TF-IDF n-gram counts, feature-bigram PCA, and a
pooled-feature encoder trained by :mod:`phonembed.learning`."""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ClosedEmbedder, ConfigError, EmptyLexicon, EmptyWord, InsufficientData, ShapeError
from .lexicon import Entry
from .phonology import N_FEATURES, FeatureTable, PhoneticWord

INPUT_KINDS = ("characters", "ipa", "articulatory")
MAX_COUNT_FEATURES = 300

EDGE_SEGMENTS = 4
HASH_BUCKETS = 512
HASH_KEY = b"phonembed-v1"


@dataclass(frozen=True)
class EmbeddingConfig:
    dimension: int = 300
    input_kind: str = "articulatory"

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigError("dimension must be >= 1")
        if self.input_kind not in INPUT_KINDS:
            raise ConfigError(f"input_kind must be one of {INPUT_KINDS}, got {self.input_kind!r}")


def symbols(entry: Entry, kind: str) -> tuple[str, ...]:
    """The symbol sequence an embedder reads for ``entry``."""
    if kind == "characters":
        return tuple(entry.orthography)
    if entry.phon is None:
        raise EmptyWord(f"{entry.orthography!r} has no segmented pronunciation")
    return entry.phon.segments


def ngrams(seq: Sequence[str], orders=(1, 2, 3)) -> Iterable[tuple[str, ...]]:
    for n in orders:
        for i in range(len(seq) - n + 1):
            yield tuple(seq[i:i + n])


class Embedder:
    """Common surface: ``dimension``, ``open`` and ``embed``/``embed_many``."""

    dimension: int
    open: bool = True

    def embed(self, entry: Entry) -> np.ndarray:
        raise NotImplementedError

    def embed_many(self, entries: Sequence[Entry]) -> np.ndarray:
        if not entries:
            return np.zeros((0, self.dimension))
        return np.vstack([self.embed(e) for e in entries])


# -- count based ---------------------------------------------------------


@dataclass(frozen=True)
class CountEmbedder(Embedder):
    features: tuple[tuple[str, ...], ...]
    idf: np.ndarray
    dimension: int
    input_kind: str
    index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if len(self.features) > MAX_COUNT_FEATURES or len(self.features) > self.dimension:
            raise ConfigError("too many count features for the dimension")
        object.__setattr__(self, "index", {g: i for i, g in enumerate(self.features)})

    def embed(self, entry: Entry) -> np.ndarray:
        return embed_count(self, entry)


def fit_count_embedder(entries: Sequence[Entry], cfg: EmbeddingConfig) -> CountEmbedder:
    """Select the most frequent 1-3-grams (by document frequency) and their idf.

    Ties are broken lexicographically; idf is ``ln((1+N)/(1+df)) + 1``.
    """
    if cfg.input_kind == "articulatory":
        raise ConfigError("count embedder reads characters or ipa symbols, not feature vectors")
    entries = list(entries)
    if not entries:
        raise EmptyLexicon("cannot fit a count embedder on an empty lexicon")
    df: Counter = Counter()
    for e in entries:
        df.update(set(ngrams(symbols(e, cfg.input_kind))))
    cap = min(MAX_COUNT_FEATURES, cfg.dimension)
    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))[:cap]
    n = len(entries)
    feats = tuple(g for g, _ in ranked)
    idf = np.array([math.log((1 + n) / (1 + c)) + 1.0 for _, c in ranked])
    return CountEmbedder(feats, idf, cfg.dimension, cfg.input_kind)


def embed_count(e: CountEmbedder, entry: Entry) -> np.ndarray:
    vec = np.zeros(e.dimension)
    for g, c in Counter(ngrams(symbols(entry, e.input_kind))).items():
        i = e.index.get(g)
        if i is not None:
            vec[i] = c * e.idf[i]
    return vec


# -- feature-bigram PCA ----------------------------------------------------


def feature_sets(word: PhoneticWord) -> list[tuple[int, ...]]:
    """Indices of the features with value +1, per segment."""
    return [tuple(np.flatnonzero(row == 1)) for row in word.features]


def bigram_counts(word: PhoneticWord) -> np.ndarray:
    """Counts of feature pairs across adjacent segments (Cartesian products)."""
    counts = np.zeros(N_FEATURES * N_FEATURES)
    sets = feature_sets(word)
    for left, right in zip(sets, sets[1:]):
        for a in left:
            for b in right:
                counts[a * N_FEATURES + b] += 1
    return counts


@dataclass(frozen=True)
class ParrishEmbedder(Embedder):
    mean: np.ndarray
    components: np.ndarray  # (d, 576), orthonormal rows
    explained: np.ndarray

    @property
    def dimension(self) -> int:
        return self.components.shape[0]

    def embed(self, entry: Entry) -> np.ndarray:
        if entry.phon is None:
            raise EmptyWord(f"{entry.orthography!r} has no segmented pronunciation")
        return self.components @ (bigram_counts(entry.phon) - self.mean)

    def embed_many(self, entries: Sequence[Entry]) -> np.ndarray:
        counts = np.vstack([bigram_counts(e.phon) for e in entries])
        return (counts - self.mean) @ self.components.T


def bigram_index(table: FeatureTable) -> dict[tuple[str, str], int]:
    names = table.feature_names
    return {(a, b): i * N_FEATURES + j for i, a in enumerate(names) for j, b in enumerate(names)}


def pca(matrix: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top-``d`` principal axes of the rows of ``matrix``.

    Returns (mean, components, explained variance). Signs are fixed so the
    largest-magnitude coordinate of each component is positive.
    """
    mean = matrix.mean(axis=0)
    centered = matrix - mean
    cov = centered.T @ centered / max(len(matrix) - 1, 1)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(-vals, kind="stable")[:d]
    comps = vecs[:, order].T.copy()
    pivots = np.abs(comps).argmax(axis=1)
    signs = np.sign(comps[np.arange(len(comps)), pivots])
    signs[signs == 0] = 1
    comps *= signs[:, None]
    return mean, comps, np.clip(vals[order], 0, None)


def fit_parrish(entries: Sequence[Entry], table: FeatureTable, d: int) -> ParrishEmbedder:
    entries = [e for e in entries if e.phon is not None]
    if len(entries) < d:
        raise InsufficientData(f"need at least {d} words for a {d}-dimensional PCA, got {len(entries)}")
    if d > N_FEATURES * N_FEATURES:
        raise ConfigError(f"dimension {d} exceeds the {N_FEATURES * N_FEATURES} bigram features")
    counts = np.vstack([bigram_counts(e.phon) for e in entries])
    mean, comps, explained = pca(counts, d)
    return ParrishEmbedder(mean, comps, explained)


# -- pooled-feature encoder -----------------------------------------------


def _hash_bytes(text: str, size: int) -> bytes:
    return hashlib.blake2b(text.encode("utf-8"), digest_size=size, key=HASH_KEY).digest()


def symbol_code(symbol: str) -> np.ndarray:
    """A fixed pseudo-random +-1 code standing in for feature vectors of
    symbols that carry no articulatory information."""
    bits = np.unpackbits(np.frombuffer(_hash_bytes("sym\x1f" + symbol, 3), dtype=np.uint8))
    return bits[:N_FEATURES].astype(np.float64) * 2 - 1


def ngram_bucket(gram: tuple[str, ...]) -> int:
    return int.from_bytes(_hash_bytes("\x1f".join(gram), 8), "little") % HASH_BUCKETS


def base_dimension() -> int:
    return N_FEATURES * (2 + 2 * EDGE_SEGMENTS) + HASH_BUCKETS


def featurize_base(entry: Entry, cfg: EmbeddingConfig, table: FeatureTable | None = None) -> np.ndarray:
    """Fixed featurisation feeding :class:`PooledEncoder`.

    Blocks: sum-pooled symbol vectors, mean-pooled symbol vectors, the first
    and the last ``EDGE_SEGMENTS`` symbol vectors (last block runs backwards
    from the final symbol, zero padded), hashed 1-3-gram counts. Symbol
    vectors are articulatory features for ``articulatory`` input and hashed
    identity codes otherwise.
    """
    seq = symbols(entry, cfg.input_kind)
    if not seq:
        raise EmptyWord(f"{entry.orthography!r} is empty")
    if cfg.input_kind == "articulatory":
        vecs = entry.phon.features.astype(np.float64)
    else:
        vecs = np.vstack([symbol_code(s) for s in seq])
    k = EDGE_SEGMENTS
    first = np.zeros((k, N_FEATURES))
    last = np.zeros((k, N_FEATURES))
    first[: min(k, len(vecs))] = vecs[:k]
    tail = vecs[::-1][:k]
    last[: len(tail)] = tail
    hashed = np.zeros(HASH_BUCKETS)
    for g in ngrams(seq):
        hashed[ngram_bucket(g)] += 1
    return np.concatenate([vecs.sum(axis=0), vecs.mean(axis=0), first.ravel(), last.ravel(), hashed])


@dataclass
class PooledEncoder(Embedder):
    """One-hidden-layer tanh network over :func:`featurize_base` vectors."""

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    config: EmbeddingConfig
    table: FeatureTable | None = field(default=None, repr=False)

    PARAMS = ("W1", "b1", "W2", "b2")

    @property
    def dimension(self) -> int:
        return self.W2.shape[0]

    @property
    def base_dimension(self) -> int:
        return self.W1.shape[1]

    def params(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in self.PARAMS}

    def with_params(self, params: dict[str, np.ndarray]) -> "PooledEncoder":
        return PooledEncoder(params["W1"], params["b1"], params["W2"], params["b2"], self.config, self.table)

    def base(self, entry: Entry) -> np.ndarray:
        return featurize_base(entry, self.config, self.table)

    def forward(self, base: np.ndarray) -> np.ndarray:
        """Rows of ``base`` (or a single vector) to embeddings."""
        base = np.asarray(base, dtype=np.float64)
        if base.shape[-1] != self.base_dimension:
            raise ShapeError(f"base vector has {base.shape[-1]} values, encoder expects {self.base_dimension}")
        return np.tanh(base @ self.W1.T + self.b1) @ self.W2.T + self.b2

    def embed(self, entry: Entry) -> np.ndarray:
        return self.forward(self.base(entry))

    def embed_many(self, entries: Sequence[Entry]) -> np.ndarray:
        if not entries:
            return np.zeros((0, self.dimension))
        return self.forward(np.vstack([self.base(e) for e in entries]))


def encoder_forward(enc: PooledEncoder, base: np.ndarray) -> np.ndarray:
    return enc.forward(base)


def init_encoder(
    cfg: EmbeddingConfig,
    hidden: int,
    rng: np.random.Generator,
    table: FeatureTable | None = None,
    scale: float = 0.05,
) -> PooledEncoder:
    n_in = base_dimension()
    W1 = rng.uniform(-scale, scale, size=(hidden, n_in))
    b1 = rng.uniform(-scale, scale, size=hidden)
    W2 = rng.uniform(-scale, scale, size=(cfg.dimension, hidden))
    b2 = rng.uniform(-scale, scale, size=cfg.dimension)
    return PooledEncoder(W1, b1, W2, b2, cfg, table)


# -- simple reference embedders ------------------------------------------


@dataclass(frozen=True)
class SumPooledEmbedder(Embedder):
    """Raw sum of articulatory feature vectors; additive by construction."""

    dimension: int = N_FEATURES

    def embed(self, entry: Entry) -> np.ndarray:
        if entry.phon is None:
            raise EmptyWord(f"{entry.orthography!r} has no segmented pronunciation")
        return entry.phon.features.astype(np.float64).sum(axis=0)


@dataclass(frozen=True)
class RandomEmbedder(Embedder):
    """Deterministic random vectors keyed by the pronunciation (or spelling)."""

    dimension: int = 300
    seed: int = 0

    def embed(self, entry: Entry) -> np.ndarray:
        key = entry.phon.ipa if entry.phon is not None else entry.orthography
        digest = int.from_bytes(_hash_bytes(f"{self.seed}\x1f{key}", 8), "little")
        return np.random.default_rng([self.seed, digest]).standard_normal(self.dimension)


@dataclass
class ImportedEmbedder(Embedder):
    """Fixed word to vector table read from an embedding file (closed)."""

    table: dict[str, np.ndarray]
    open: bool = False

    def __post_init__(self):
        dims = {len(v) for v in self.table.values()}
        if len(dims) > 1:
            raise ShapeError(f"imported vectors have mixed dimensions {sorted(dims)}")
        self._dim = dims.pop() if dims else 0

    @property
    def dimension(self) -> int:
        return self._dim

    def __contains__(self, entry: Entry) -> bool:
        return entry.orthography in self.table or entry.ipa in self.table

    def embed(self, entry: Entry) -> np.ndarray:
        vec = self.table.get(entry.orthography)
        if vec is None:
            vec = self.table.get(entry.ipa)
        if vec is None:
            raise ClosedEmbedder(f"no vector for {entry.orthography!r}")
        return vec
