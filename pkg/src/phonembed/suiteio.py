"""Embedding text files, encoder serialisation and canonical report JSON."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .embedders import (
    EDGE_SEGMENTS,
    HASH_BUCKETS,
    HASH_KEY,
    Embedder,
    EmbeddingConfig,
    ImportedEmbedder,
    PooledEncoder,
    base_dimension,
)
from .errors import EmptyEmbedding, FormatError
from .lexicon import Entry
from .phonology import FeatureTable

ENCODER_FORMAT = "phonembed-encoder"
ENCODER_VERSION = 1


# -- embedding text format ---------------------------------------------------


def write_embeddings(embedder: Embedder, entries: Sequence[Entry], path: str | Path) -> int:
    """Write ``N d`` then one ``word v1 ... vd`` line per distinct spelling.

    Floats are written with ``repr`` so they read back exactly.
    """
    seen = set()
    rows = []
    for e in entries:
        if e.orthography in seen:
            continue
        if not e.orthography or any(ch.isspace() for ch in e.orthography):
            raise FormatError(f"word token {e.orthography!r} is empty or contains whitespace")
        seen.add(e.orthography)
        rows.append((e.orthography, embedder.embed(e)))
    dim = embedder.dimension
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"{len(rows)} {dim}\n")
        for word, vec in rows:
            fh.write(word + " " + " ".join(repr(float(v)) for v in vec) + "\n")
    return len(rows)


def read_embeddings(path: str | Path) -> ImportedEmbedder:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise FormatError(f"{path}: empty file")
    header = lines[0].split()
    try:
        n, d = int(header[0]), int(header[1])
        if len(header) != 2 or n < 0 or d < 1:
            raise ValueError
    except (ValueError, IndexError):
        raise FormatError(f"{path}: malformed header {lines[0]!r}") from None
    if n == 0:
        raise EmptyEmbedding(f"{path}: contains no vectors")
    body = [line for line in lines[1:] if line.strip()]
    if len(body) != n:
        raise FormatError(f"{path}: header announces {n} vectors, found {len(body)}")
    table = {}
    for lineno, line in enumerate(body, start=2):
        parts = line.rstrip().split(" ")
        if len(parts) != d + 1:
            raise FormatError(f"{path}:{lineno}: expected {d} values, got {len(parts) - 1}")
        try:
            table[parts[0]] = np.array([float(v) for v in parts[1:]])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: non-numeric value") from None
    return ImportedEmbedder(table)


# -- encoder blobs ---------------------------------------------------------------


def _base_spec() -> dict:
    return {
        "edge_segments": EDGE_SEGMENTS,
        "hash_buckets": HASH_BUCKETS,
        "hash_key": HASH_KEY.decode(),
        "base_dimension": base_dimension(),
    }


def save_encoder(enc: PooledEncoder, path: str | Path) -> None:
    meta = {
        "format": ENCODER_FORMAT,
        "version": ENCODER_VERSION,
        "embedding": {"dimension": enc.config.dimension, "input_kind": enc.config.input_kind},
        "base": _base_spec(),
        "table_digest": enc.table.digest() if enc.table is not None else None,
    }
    with Path(path).open("wb") as fh:
        np.savez(fh, meta=np.array(json.dumps(meta, sort_keys=True)), **enc.params())


def load_encoder(path: str | Path, table: FeatureTable | None = None) -> PooledEncoder:
    try:
        with np.load(path, allow_pickle=False) as blob:
            meta = json.loads(str(blob["meta"]))
            params = {k: blob[k].copy() for k in PooledEncoder.PARAMS}
    except (OSError, KeyError, ValueError) as exc:
        raise FormatError(f"{path}: not an encoder file ({exc})") from exc
    if meta.get("format") != ENCODER_FORMAT or meta.get("version") != ENCODER_VERSION:
        raise FormatError(f"{path}: unsupported encoder format {meta.get('format')!r} v{meta.get('version')}")
    if meta["base"] != _base_spec():
        raise FormatError(f"{path}: encoder was built for a different base featurisation")
    cfg = EmbeddingConfig(**meta["embedding"])
    if cfg.input_kind == "articulatory":
        if table is None:
            raise FormatError("an articulatory encoder needs its feature table")
        if meta["table_digest"] not in (None, table.digest()):
            raise FormatError(f"{path}: encoder was trained with another feature table")
    return PooledEncoder(params["W1"], params["b1"], params["W2"], params["b2"], cfg, table)


# -- canonical JSON -----------------------------------------------------------------


def _render(obj: Any, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return "null"
        text = f"{float(obj):.6f}"
        return "0.000000" if text == "-0.000000" else text
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_render(obj[k], indent + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(inner + _render(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot render {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    """Sorted keys, two-space indent, floats fixed at six decimals."""
    return _render(obj, 0) + "\n"
