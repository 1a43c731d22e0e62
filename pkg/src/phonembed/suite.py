"""Suite configuration, end-to-end runs and parameter sweeps."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import SUITE_VERSION
from .cache import ArticulatoryDistance, DistanceCache
from .embedders import (
    EmbeddingConfig,
    RandomEmbedder,
    SumPooledEmbedder,
    fit_count_embedder,
    fit_parrish,
)
from .errors import ConfigError, PhonembedError
from .evalsuite import (
    PRIMARY_METRIC,
    TASKS,
    ArticulatoryOracle,
    TaskScore,
    build_cognate_dataset,
    build_rhyme_dataset,
    eval_analogies,
    eval_articulatory_distance,
    eval_cognate,
    eval_human_similarity,
    eval_retrieval,
    eval_rhyme,
    generate_analogies,
    has_stress,
    partial_overall,
    read_cognates,
    read_judgements,
)
from .learning import ClassifierConfig, TrainConfig, train_encoder
from .lexicon import Lexicon, load_lexicon
from .phonology import FeatureTable, bundled_table, load_feature_table
from .suiteio import canonical_json, load_encoder, read_embeddings

log = logging.getLogger(__name__)

FEATURE_TABLE_ENV = "PHONEMBED_FEATURE_TABLE"
EMBEDDER_KINDS = ("count", "parrish", "metric", "triplet", "encoder", "imported", "random", "sumpool", "oracle")
SWEEP_AXES = ("dimension", "train_size")


@dataclass
class EmbedderSpec:
    kind: str = "metric"
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    path: str | None = None

    def __post_init__(self):
        if self.kind not in EMBEDDER_KINDS:
            raise ConfigError(f"unknown embedder kind {self.kind!r}; expected one of {EMBEDDER_KINDS}")
        if self.kind in ("imported", "encoder") and not self.path:
            raise ConfigError(f"embedder kind {self.kind!r} needs a path")


@dataclass
class SuiteConfig:
    lexicons: dict[str, str]
    embedder: EmbedderSpec = field(default_factory=EmbedderSpec)
    tasks: tuple[str, ...] = TASKS
    train_language: str | None = None
    eval_languages: tuple[str, ...] = ()
    feature_table: str | None = None
    human_judgements: dict[str, str] = field(default_factory=dict)
    cognates: str | None = None
    seed: int = 0
    train_size: int | None = None
    cache: str | None = None
    similarity: str = "l2"
    n_pairs: int = 1000
    retrieval_neighborhood: int = 1000
    retrieval_queries: int = 1000
    analogy_count: int = 200
    exclude_analogy_inputs: bool = False
    rhyme_size: int = 2000
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    output: str | None = None

    def __post_init__(self):
        if not self.lexicons:
            raise ConfigError("no lexicons configured")
        if not self.tasks:
            raise ConfigError("task list is empty")
        bad = [t for t in self.tasks if t not in TASKS]
        if bad:
            raise ConfigError(f"unknown tasks {bad}; expected a subset of {TASKS}")
        self.tasks = tuple(self.tasks)
        if self.train_language is None:
            self.train_language = sorted(self.lexicons)[0]
        if not self.eval_languages:
            self.eval_languages = (self.train_language,)
        self.eval_languages = tuple(self.eval_languages)
        for lang in (self.train_language, *self.eval_languages):
            if lang not in self.lexicons:
                raise ConfigError(f"no lexicon for language {lang!r}")
        if self.similarity not in ("l2", "cosine"):
            raise ConfigError("similarity must be 'l2' or 'cosine'")

    def echo(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | Path | None = None) -> "SuiteConfig":
        data = dict(data)
        base = Path(base_dir) if base_dir is not None else None

        def resolve(p):
            if p is None or base is None or Path(p).is_absolute():
                return p
            return str(base / p)

        spec = dict(data.pop("embedder", {}))
        emb = EmbeddingConfig(**spec.pop("embedding", {}))
        train = TrainConfig(**spec.pop("train", {}))
        if "path" in spec:
            spec["path"] = resolve(spec["path"])
        data["embedder"] = EmbedderSpec(embedding=emb, train=train, **spec)
        data["lexicons"] = {k: resolve(v) for k, v in data.get("lexicons", {}).items()}
        data["human_judgements"] = {k: resolve(v) for k, v in data.get("human_judgements", {}).items()}
        for key in ("cognates", "cache", "feature_table", "output"):
            if key in data:
                data[key] = resolve(data[key])
        if "classifier" in data:
            data["classifier"] = ClassifierConfig(**data["classifier"])
        for key in ("tasks", "eval_languages"):
            if key in data:
                data[key] = tuple(data[key])
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys {unknown}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path: str | Path) -> "SuiteConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data, path.parent)


def resolve_feature_table(path: str | None = None) -> FeatureTable:
    """Explicit path, then the environment override, then the bundled table."""
    path = path or os.environ.get(FEATURE_TABLE_ENV)
    if path:
        try:
            return load_feature_table(path)
        except OSError as exc:
            raise ConfigError(f"cannot read feature table {path}: {exc}") from exc
    return bundled_table()


@dataclass
class SuiteReport:
    languages: dict[str, dict]
    overall: float | None
    config: dict
    seed: int
    train_language: str
    version: str = SUITE_VERSION

    @property
    def failed(self) -> bool:
        return any(lang["failed"] for lang in self.languages.values())

    def scores(self, language: str) -> list[TaskScore]:
        return [TaskScore(**s) for s in self.languages[language]["scores"]]

    def value(self, language: str, task: str, metric: str | None = None) -> float | None:
        metric = metric or PRIMARY_METRIC[task]
        for s in self.languages[language]["scores"]:
            if s["task"] == task and s["metric"] == metric:
                return s["value"]
        return None

    def to_dict(self) -> dict:
        return {
            "suite_version": self.version,
            "seed": self.seed,
            "train_language": self.train_language,
            "eval_languages": sorted(self.languages),
            "languages": self.languages,
            "overall": self.overall,
            "config": self.config,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteReport":
        return cls(data["languages"], data["overall"], data["config"], data["seed"], data["train_language"],
                   data["suite_version"])


REPORT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["suite_version", "seed", "train_language", "eval_languages", "languages", "overall", "config"],
    "properties": {
        "suite_version": {"type": "string", "pattern": r"^v\d+\.\d+$"},
        "seed": {"type": "integer", "minimum": 0},
        "train_language": {"type": "string"},
        "eval_languages": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "overall": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
        "config": {"type": "object"},
        "languages": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["scores", "overall", "tasks_in_overall", "skipped", "failed"],
                "properties": {
                    "scores": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["task", "metric", "value", "language", "n"],
                            "properties": {
                                "task": {"enum": list(TASKS)},
                                "metric": {"enum": ["pearson", "spearman", "percentile_rank", "acc_at_1", "accuracy"]},
                                "value": {"type": "number", "minimum": -1, "maximum": 1},
                                "language": {"type": "string"},
                                "n": {"type": "integer", "minimum": 1},
                            },
                        },
                    },
                    "overall": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                    "tasks_in_overall": {"type": "array", "items": {"enum": list(TASKS)}},
                    "skipped": {"type": "object", "additionalProperties": {"type": "string"}},
                    "failed": {"type": "object", "additionalProperties": {"type": "string"}},
                },
            },
        },
    },
}


# -- running ---------------------------------------------------------------------


def _load_lexicons(cfg: SuiteConfig, table: FeatureTable) -> dict[str, Lexicon]:
    out: dict[str, Lexicon] = {}
    for lang, path in sorted(cfg.lexicons.items()):
        lex = load_lexicon(path, table)
        out[lang] = lex.for_language(lang) if lang in lex.languages() else lex
    return out


def build_embedder(spec: EmbedderSpec, train_entries, table: FeatureTable, dist: ArticulatoryDistance, seed: int):
    kind = spec.kind
    if kind == "count":
        return fit_count_embedder(train_entries, spec.embedding)
    if kind == "parrish":
        return fit_parrish(train_entries, table, spec.embedding.dimension)
    if kind in ("metric", "triplet"):
        train_cfg = dataclasses.replace(spec.train, seed=seed)
        result = train_encoder(train_entries, train_cfg, kind, spec.embedding,
                               lambda a, b: dist.distance(a.phon, b.phon), table)
        return result.encoder
    if kind == "encoder":
        return load_encoder(spec.path, table)
    if kind == "imported":
        return read_embeddings(spec.path)
    if kind == "random":
        return RandomEmbedder(spec.embedding.dimension, seed)
    if kind == "sumpool":
        return SumPooledEmbedder()
    if kind == "oracle":
        return ArticulatoryOracle(dist)
    raise ConfigError(f"unknown embedder kind {kind!r}")


def _evaluate_language(cfg, lang, embedder, lexicons, table, dist, judgements, cognates) -> dict:
    lex = lexicons[lang]
    entries = lex.segmented()
    seed = cfg.seed
    scores: list[TaskScore] = []
    skipped: dict[str, str] = {}
    failed: dict[str, str] = {}
    for task in cfg.tasks:
        try:
            if task == "human_similarity":
                if lang not in judgements:
                    skipped[task] = "no human judgement file for this language"
                    continue
                scores.extend(eval_human_similarity(embedder, judgements[lang], lex, cfg.similarity, lang))
            elif task == "articulatory_distance":
                scores.extend(eval_articulatory_distance(embedder, entries, dist, cfg.n_pairs, seed,
                                                         cfg.similarity, lang))
            elif task == "retrieval":
                scores.append(eval_retrieval(embedder, entries, dist, cfg.retrieval_neighborhood, seed,
                                             cfg.retrieval_queries, cfg.similarity, lang))
            elif task == "analogy":
                quads = generate_analogies(entries, table, cfg.analogy_count, seed)
                scores.append(eval_analogies(embedder, quads, entries, cfg.exclude_analogy_inputs,
                                             cfg.similarity, lang))
            elif task == "rhyme":
                if not has_stress(entries):
                    skipped[task] = "lexicon carries no stress annotation"
                    continue
                syl = table.feature_names.index("syl") if "syl" in table.feature_names else 0
                data = build_rhyme_dataset(entries, cfg.rhyme_size, seed, syl)
                scores.append(eval_rhyme(embedder, data, seed, cfg.classifier, lang))
            elif task == "cognate":
                pairs = [c for c in cognates if c[1] == lang]
                if not pairs:
                    skipped[task] = "no cognate pairs for this language"
                    continue
                data = build_cognate_dataset(pairs, lexicons)
                scores.append(eval_cognate(embedder, data, seed, cfg.classifier, lang))
        except PhonembedError as exc:
            log.warning("%s/%s failed: %s", lang, task, exc)
            failed[task] = f"{type(exc).__name__}: {exc}"
    primary = {(s.task, s.metric): s.value for s in scores}
    used = [t for t in TASKS if (t, PRIMARY_METRIC[t]) in primary]
    values = [round(primary[(t, PRIMARY_METRIC[t])], 6) for t in used]
    return {
        "scores": [dataclasses.asdict(s) for s in scores],
        "overall": partial_overall(values) if values else None,
        "tasks_in_overall": used,
        "skipped": skipped,
        "failed": failed,
    }


def run_suite(cfg: SuiteConfig, embedder=None) -> SuiteReport:
    """Build (or take) an embedder, then score every configured task on every
    evaluation language. Task failures are recorded, not raised."""
    table = resolve_feature_table(cfg.feature_table)
    lexicons = _load_lexicons(cfg, table)
    dist = DistanceCache(table, cfg.cache) if cfg.cache else ArticulatoryDistance(table)
    if embedder is None:
        train_entries = lexicons[cfg.train_language].segmented()
        if cfg.train_size is not None:
            if cfg.train_size > len(train_entries):
                log.warning("train_size %d exceeds the %d available words; using all", cfg.train_size,
                            len(train_entries))
            train_entries = train_entries[: cfg.train_size]
        embedder = build_embedder(cfg.embedder, train_entries, table, dist, cfg.seed)
    judgements = {lang: read_judgements(p) for lang, p in cfg.human_judgements.items()}
    cognates = read_cognates(cfg.cognates) if cfg.cognates else []
    languages = {
        lang: _evaluate_language(cfg, lang, embedder, lexicons, table, dist, judgements, cognates)
        for lang in cfg.eval_languages
    }
    if isinstance(dist, DistanceCache):
        dist.flush()
    overalls = [round(v["overall"], 6) for v in languages.values() if v["overall"] is not None]
    overall = sum(overalls) / len(overalls) if overalls else None
    return SuiteReport(languages, overall, cfg.echo(), cfg.seed, cfg.train_language)


# -- sweeps ------------------------------------------------------------------------


SWEEP_HEADER = ("axis", "value", "language", "task", "metric", "score")


def run_sweep(cfg: SuiteConfig, axis: str, values: Sequence[int]) -> list[dict]:
    """One suite run per axis value, everything else fixed. Returns long-form rows."""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"axis must be one of {SWEEP_AXES}")
    values = [int(v) for v in values]
    if not values or any(v <= 0 for v in values):
        raise ConfigError("sweep values must be positive")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError("sweep values must be strictly ascending without duplicates")
    rows = []
    for v in values:
        if axis == "dimension":
            emb = dataclasses.replace(cfg.embedder.embedding, dimension=v)
            run_cfg = dataclasses.replace(cfg, embedder=dataclasses.replace(cfg.embedder, embedding=emb))
        else:
            run_cfg = dataclasses.replace(cfg, train_size=v)
        report = run_suite(run_cfg)
        for lang in run_cfg.eval_languages:
            for task in run_cfg.tasks:
                rows.append({
                    "axis": axis, "value": v, "language": lang, "task": task,
                    "metric": PRIMARY_METRIC[task], "score": report.value(lang, task),
                    "failed": task in report.languages[lang]["failed"],
                })
    return rows


def sweep_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in rows:
        score = "" if r["score"] is None else f"{r['score']:.6f}"
        writer.writerow([r["axis"], r["value"], r["language"], r["task"], r["metric"], score])
    return buf.getvalue()
