"""Losses, gradients and training loops.

Gradients are derived by hand; ``tests/test_learning.py`` checks them
against central finite differences.
"""

from __future__ import annotations

import logging
import zlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .embedders import EmbeddingConfig, PooledEncoder, featurize_base, init_encoder
from .errors import DegenerateLabels, EmptyBatch, InsufficientData
from .lexicon import Entry

log = logging.getLogger(__name__)

Params = dict[str, np.ndarray]
DistanceFn = Callable[[Entry, Entry], float]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    epochs: int = 10
    batch_size: int = 64
    margin: float = 0.2
    seed: int = 0
    pairs_per_epoch: int = 2000
    triplets_per_epoch: int = 2000
    hidden: int = 256
    init_scale: float = 0.05
    clip_norm: float | None = 10.0  # global gradient-norm cap; None disables

    def __post_init__(self):
        for name in ("epochs", "batch_size", "pairs_per_epoch", "triplets_per_epoch", "hidden"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.learning_rate < 0 or self.margin <= 0:
            raise ValueError("learning_rate must be >= 0 and margin > 0")
        if self.clip_norm is not None and self.clip_norm <= 0:
            raise ValueError("clip_norm must be positive or None")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Triplet:
    anchor: Entry
    positive: Entry
    negative: Entry
    d_ap: float
    d_an: float


# -- encoder forward/backward -------------------------------------------


def _forward(params: Params, X: np.ndarray):
    H = np.tanh(X @ params["W1"].T + params["b1"])
    return H, H @ params["W2"].T + params["b2"]


def _backward(params: Params, X: np.ndarray, H: np.ndarray, dOut: np.ndarray) -> Params:
    dH = dOut @ params["W2"]
    dZ = dH * (1.0 - H * H)
    return {
        "W1": dZ.T @ X,
        "b1": dZ.sum(axis=0),
        "W2": dOut.T @ H,
        "b2": dOut.sum(axis=0),
    }


def metric_loss_grad_base(params: Params, Xa: np.ndarray, Xb: np.ndarray, targets: np.ndarray):
    """Mean of (||f(a) - f(b)||^2 - A)^2 over rows, with gradients."""
    n = len(targets)
    if n == 0:
        raise EmptyBatch("metric loss needs at least one pair")
    X = np.vstack([Xa, Xb])
    H, E = _forward(params, X)
    diff = E[:n] - E[n:]
    resid = (diff * diff).sum(axis=1) - targets
    loss = float(np.mean(resid * resid))
    g = (4.0 / n) * resid[:, None] * diff
    return loss, _backward(params, X, H, np.vstack([g, -g]))


def triplet_loss_grad_base(params: Params, Xa: np.ndarray, Xp: np.ndarray, Xn: np.ndarray, margin: float):
    """Mean hinge max(0, margin + |f(a)-f(p)| - |f(a)-f(n)|) over rows."""
    n = len(Xa)
    if n == 0:
        raise EmptyBatch("triplet loss needs at least one triplet")
    X = np.vstack([Xa, Xp, Xn])
    H, E = _forward(params, X)
    ea, ep, en = E[:n], E[n:2 * n], E[2 * n:]
    dp_vec, dn_vec = ea - ep, ea - en
    dp = np.sqrt((dp_vec * dp_vec).sum(axis=1))
    dn = np.sqrt((dn_vec * dn_vec).sum(axis=1))
    hinge = margin + dp - dn
    active = hinge > 0
    loss = float(np.mean(np.where(active, hinge, 0.0)))
    w = active / n
    # zero-length differences contribute a zero subgradient
    up = np.divide(dp_vec, dp[:, None], out=np.zeros_like(dp_vec), where=dp[:, None] > 0) * w[:, None]
    un = np.divide(dn_vec, dn[:, None], out=np.zeros_like(dn_vec), where=dn[:, None] > 0) * w[:, None]
    dOut = np.vstack([up - un, -up, un])
    return loss, _backward(params, X, H, dOut)


def _bases(enc: PooledEncoder, entries: Sequence[Entry]) -> np.ndarray:
    return np.vstack([enc.base(e) for e in entries])


def metric_loss_and_grad(enc: PooledEncoder, pairs: Sequence[tuple[Entry, Entry, float]]):
    if not pairs:
        raise EmptyBatch("metric loss needs at least one pair")
    Xa = _bases(enc, [p[0] for p in pairs])
    Xb = _bases(enc, [p[1] for p in pairs])
    targets = np.array([p[2] for p in pairs], dtype=np.float64)
    return metric_loss_grad_base(enc.params(), Xa, Xb, targets)


def triplet_loss_and_grad(enc: PooledEncoder, t: Triplet, margin: float):
    Xa, Xp, Xn = (enc.base(e)[None, :] for e in (t.anchor, t.positive, t.negative))
    return triplet_loss_grad_base(enc.params(), Xa, Xp, Xn, margin)


# -- sampling --------------------------------------------------------------


def sample_pairs(n_words: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` index pairs (i, j) with i != j, drawn uniformly."""
    i = rng.integers(0, n_words, size=count)
    j = rng.integers(0, n_words - 1, size=count)
    j = j + (j >= i)
    return np.stack([i, j], axis=1)


def _sample_triplet_indices(n_words: int, dist: Callable[[int, int], float], count: int,
                            rng: np.random.Generator, max_attempts: int | None = None):
    if n_words < 3:
        raise InsufficientData(f"need at least 3 words to sample triplets, got {n_words}")
    max_attempts = max_attempts or 1000 * count + 1000
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > max_attempts:
            raise InsufficientData("could not find enough triplets with distinct distances")
        a, x, y = rng.choice(n_words, size=3, replace=False)
        dx, dy = dist(a, x), dist(a, y)
        if dx == dy:
            continue
        if dx < dy:
            out.append((a, x, y, dx, dy))
        else:
            out.append((a, y, x, dy, dx))
    return out


def sample_triplets(entries: Sequence[Entry], dist: DistanceFn, count: int, seed: int) -> list[Triplet]:
    """Uniformly sampled (anchor, positive, negative) with d(a,p) < d(a,n)."""
    entries = list(entries)
    rng = np.random.default_rng(seed)
    idx = _sample_triplet_indices(len(entries), lambda i, j: dist(entries[i], entries[j]), count, rng)
    return [Triplet(entries[a], entries[p], entries[n], dap, dan) for a, p, n, dap, dan in idx]


# -- training loop -----------------------------------------------------------


@dataclass
class TrainResult:
    encoder: PooledEncoder
    losses: list[float] = field(default_factory=list)


def train_encoder(
    entries: Sequence[Entry],
    cfg: TrainConfig,
    objective: str,
    embed_cfg: EmbeddingConfig,
    dist: DistanceFn,
    table=None,
) -> TrainResult:
    """Fit a :class:`PooledEncoder` with plain mini-batch gradient descent.

    ``objective`` is ``"metric"`` (match squared embedding distance to the
    articulatory distance) or ``"triplet"`` (margin ranking).
    """
    if objective not in ("metric", "triplet"):
        raise ValueError(f"unknown objective {objective!r}")
    entries = list(entries)
    if len(entries) < (3 if objective == "triplet" else 2):
        raise InsufficientData(f"{len(entries)} words is too few to train")
    rng = np.random.default_rng(cfg.seed)
    enc = init_encoder(embed_cfg, cfg.hidden, rng, table, cfg.init_scale)
    params = {k: v.copy() for k, v in enc.params().items()}
    X = np.vstack([featurize_base(e, embed_cfg, table) for e in entries])
    memo: dict[tuple[int, int], float] = {}

    def d(i: int, j: int) -> float:
        key = (i, j)
        if key not in memo:
            memo[key] = dist(entries[i], entries[j])
        return memo[key]

    losses = []
    for epoch in range(cfg.epochs):
        if objective == "metric":
            idx = sample_pairs(len(entries), cfg.pairs_per_epoch, rng)
            targets = np.array([d(int(i), int(j)) for i, j in idx])
        else:
            trip = _sample_triplet_indices(len(entries), d, cfg.triplets_per_epoch, rng)
            idx = np.array([t[:3] for t in trip], dtype=np.int64)
        batch_losses = []
        for start in range(0, len(idx), cfg.batch_size):
            sl = slice(start, start + cfg.batch_size)
            if objective == "metric":
                loss, grads = metric_loss_grad_base(params, X[idx[sl, 0]], X[idx[sl, 1]], targets[sl])
            else:
                loss, grads = triplet_loss_grad_base(params, X[idx[sl, 0]], X[idx[sl, 1]], X[idx[sl, 2]],
                                                     cfg.margin)
            batch_losses.append(loss)
            if cfg.learning_rate:
                step = cfg.learning_rate
                if cfg.clip_norm is not None:
                    norm = float(np.sqrt(sum(float((g * g).sum()) for g in grads.values())))
                    if norm > cfg.clip_norm:
                        step *= cfg.clip_norm / norm
                for k in params:
                    params[k] -= step * grads[k]
        losses.append(float(np.mean(batch_losses)))
        log.debug("epoch %d %s loss %.5f", epoch, objective, losses[-1])
    return TrainResult(enc.with_params(params), losses)


# -- pair classifier --------------------------------------------------------


def pair_features(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    return np.hstack([a, b, np.abs(a - b), a * b])


@dataclass(frozen=True)
class ClassifierConfig:
    hidden: int = 64
    epochs: int = 60
    batch_size: int = 32
    learning_rate: float = 0.05
    l2: float = 1e-4
    test_fraction: float = 0.2


@dataclass
class MLPClassifier:
    """Standardised inputs, one tanh hidden layer, logistic output."""

    mean: np.ndarray
    scale: np.ndarray
    W1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float

    def params(self) -> Params:
        return {"W1": self.W1, "b1": self.b1, "w2": self.w2, "b2": np.array([self.b2])}

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        Z = (np.atleast_2d(features) - self.mean) / self.scale
        return _mlp_forward(self.params(), Z)[1]

    def predict(self, features: np.ndarray) -> np.ndarray:
        return (self.predict_proba(features) >= 0.5).astype(np.int64)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _mlp_forward(params: Params, Z: np.ndarray):
    H = np.tanh(Z @ params["W1"].T + params["b1"])
    return H, _sigmoid(H @ params["w2"] + params["b2"][0])


def mlp_loss_and_grad(params: Params, Z: np.ndarray, y: np.ndarray, l2: float = 0.0):
    """Mean logistic loss (+ ``l2``/2 * ||W||^2) and its gradients."""
    H, p = _mlp_forward(params, Z)
    logits = H @ params["w2"] + params["b2"][0]
    # log(1 + e^z) - y z, computed stably
    loss = float(np.mean(np.logaddexp(0.0, logits) - y * logits))
    loss += 0.5 * l2 * float((params["W1"] ** 2).sum() + (params["w2"] ** 2).sum())
    n = len(y)
    dlogit = (p - y) / n
    dH = np.outer(dlogit, params["w2"]) * (1.0 - H * H)
    grads = {
        "W1": dH.T @ Z + l2 * params["W1"],
        "b1": dH.sum(axis=0),
        "w2": H.T @ dlogit + l2 * params["w2"],
        "b2": np.array([dlogit.sum()]),
    }
    return loss, grads


def stratified_split(y: np.ndarray, test_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    train, test = [], []
    for label in np.unique(y):
        idx = np.flatnonzero(y == label)
        idx = idx[rng.permutation(len(idx))]
        k = max(1, int(round(test_fraction * len(idx))))
        test.append(idx[:k])
        train.append(idx[k:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def _column_init(col: np.ndarray, hidden: int, seed: int, bound: float) -> np.ndarray:
    # seeded from the column's own values: permuting columns permutes the init
    key = zlib.crc32(np.ascontiguousarray(col).tobytes())
    return np.random.default_rng([seed, key]).uniform(-bound, bound, size=hidden)


def train_pair_classifier(
    examples: Sequence[tuple[np.ndarray, np.ndarray, int]],
    split_seed: int,
    cfg: ClassifierConfig = ClassifierConfig(),
) -> tuple[MLPClassifier, float]:
    """Train on an 80/20 stratified split; return the model and held-out accuracy."""
    if len(examples) < 20:
        raise InsufficientData(f"need at least 20 labelled pairs, got {len(examples)}")
    y = np.array([int(ex[2]) for ex in examples], dtype=np.int64)
    if len(np.unique(y)) < 2:
        raise DegenerateLabels("pair classifier needs both labels")
    F = pair_features(np.vstack([ex[0] for ex in examples]), np.vstack([ex[1] for ex in examples]))
    train, test = stratified_split(y, cfg.test_fraction, split_seed)
    mean = F[train].mean(axis=0)
    scale = F[train].std(axis=0)
    scale[scale < 1e-12] = 1.0
    Z = (F - mean) / scale
    n_in = F.shape[1]
    bound = 1.0 / np.sqrt(n_in)
    W1 = np.stack([_column_init(F[train, c], cfg.hidden, split_seed, bound) for c in range(n_in)], axis=1)
    rng = np.random.default_rng(split_seed)
    params = {
        "W1": W1,
        "b1": np.zeros(cfg.hidden),
        "w2": rng.uniform(-1.0 / np.sqrt(cfg.hidden), 1.0 / np.sqrt(cfg.hidden), size=cfg.hidden),
        "b2": np.zeros(1),
    }
    Ztr, ytr = Z[train], y[train].astype(np.float64)
    for _ in range(cfg.epochs):
        order = rng.permutation(len(train))
        for start in range(0, len(order), cfg.batch_size):
            b = order[start:start + cfg.batch_size]
            _, grads = mlp_loss_and_grad(params, Ztr[b], ytr[b], cfg.l2)
            for k in params:
                params[k] -= cfg.learning_rate * grads[k]
    clf = MLPClassifier(mean, scale, params["W1"], params["b1"], params["w2"], float(params["b2"][0]))
    acc = float(np.mean(clf.predict(F[test]) == y[test]))
    return clf, acc
