"""The six evaluation tasks, their dataset builders and the overall score."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .cache import ArticulatoryDistance
from .errors import (
    ArityError,
    ClosedEmbedder,
    EmptyDataset,
    FormatError,
    InsufficientData,
    MissingWord,
    NoPerturbations,
    NoStressInfo,
)
from .learning import ClassifierConfig, train_pair_classifier
from .lexicon import Entry, Lexicon
from .phonology import N_FEATURES, FeatureTable, PhoneticWord
from .stats import pearson, spearman

log = logging.getLogger(__name__)

TASKS = ("human_similarity", "articulatory_distance", "retrieval", "analogy", "rhyme", "cognate")
PRIMARY_METRIC = {
    "human_similarity": "pearson",
    "articulatory_distance": "pearson",
    "retrieval": "percentile_rank",
    "analogy": "acc_at_1",
    "rhyme": "accuracy",
    "cognate": "accuracy",
}
METRIC_RANGE = {
    "pearson": (-1.0, 1.0),
    "spearman": (-1.0, 1.0),
    "percentile_rank": (0.0, 1.0),
    "acc_at_1": (0.0, 1.0),
    "accuracy": (0.0, 1.0),
}


@dataclass(frozen=True)
class TaskScore:
    task: str
    metric: str
    value: float
    language: str
    n: int

    def __post_init__(self):
        lo, hi = METRIC_RANGE[self.metric]
        if not lo - 1e-12 <= self.value <= hi + 1e-12:
            raise ValueError(f"{self.metric} value {self.value} outside [{lo}, {hi}]")
        if self.n < 1:
            raise ValueError("sample count must be positive")


# -- distances in embedding space ------------------------------------------


class ArticulatoryOracle:
    """Reference "embedder" whose pairwise distances are exactly the
    articulatory distance. It has no vectors, so only the distance-based
    tasks accept it."""

    open = True

    def __init__(self, dist: ArticulatoryDistance):
        self.dist = dist

    def distances(self, query: Entry, candidates: Sequence[Entry]) -> np.ndarray:
        return self.dist.distances(query.phon, [c.phon for c in candidates])

    def embed(self, entry: Entry) -> np.ndarray:
        raise ClosedEmbedder("the articulatory oracle provides distances, not vectors")

    def embed_many(self, entries):
        raise ClosedEmbedder("the articulatory oracle provides distances, not vectors")


def vector_distances(query: np.ndarray, rows: np.ndarray, similarity: str = "l2") -> np.ndarray:
    """Distances from ``query`` to each row; ``cosine`` gives 1 - cos."""
    if similarity == "l2":
        diff = rows - query
        return np.sqrt((diff * diff).sum(axis=1))
    if similarity == "cosine":
        qn = np.linalg.norm(query)
        rn = np.linalg.norm(rows, axis=1)
        denom = np.where(qn * rn > 0, qn * rn, 1.0)
        return 1.0 - (rows @ query) / denom
    raise ValueError(f"unknown similarity {similarity!r}")


def _word_entry(word: PhoneticWord, language: str) -> Entry:
    # synthetic words have no spelling; their IPA stands in for it
    return Entry(word.ipa, language, word.ipa, phon=word)


# -- intrinsic: articulatory distance -------------------------------------------


def sample_unordered_pairs(n: int, count: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    total = n * (n - 1) // 2
    if total <= count:
        return list(combinations(range(n), 2))
    seen: set[tuple[int, int]] = set()
    out = []
    while len(out) < count:
        i, j = (int(v) for v in rng.integers(0, n, size=2))
        if i == j:
            continue
        key = (i, j) if i < j else (j, i)
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def eval_articulatory_distance(
    embedder,
    entries: Sequence[Entry],
    dist: ArticulatoryDistance,
    n_pairs: int = 1000,
    seed: int = 0,
    similarity: str = "l2",
    language: str = "",
) -> tuple[TaskScore, TaskScore]:
    """Correlate embedding distance with articulatory distance on sampled pairs."""
    entries = [e for e in entries if e.phon is not None]
    if len(entries) < 2:
        raise InsufficientData("need at least two words")
    rng = np.random.default_rng(seed)
    pairs = sample_unordered_pairs(len(entries), n_pairs, rng)
    target = np.array([dist.distance(entries[i].phon, entries[j].phon) for i, j in pairs])
    if hasattr(embedder, "distances"):
        emb = np.array([embedder.distances(entries[i], [entries[j]])[0] for i, j in pairs])
    else:
        used = sorted({k for p in pairs for k in p})
        pos = {k: r for r, k in enumerate(used)}
        E = embedder.embed_many([entries[k] for k in used])
        emb = np.array([vector_distances(E[pos[i]], E[pos[j]][None, :], similarity)[0] for i, j in pairs])
    n = len(pairs)
    return (
        TaskScore("articulatory_distance", "pearson", pearson(emb, target), language, n),
        TaskScore("articulatory_distance", "spearman", spearman(emb, target), language, n),
    )


# -- intrinsic: human judgements ------------------------------------------------


@dataclass(frozen=True)
class HumanJudgementSet:
    pairs: tuple[tuple[str, str, float], ...]

    def __post_init__(self):
        for a, b, s in self.pairs:
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"similarity for {a}/{b} is {s}, expected [0, 1]")

    def __len__(self) -> int:
        return len(self.pairs)

    def get(self, a: str, b: str) -> float | None:
        for x, y, s in self.pairs:
            if {x, y} == {a, b}:
                return s
        return None


def read_judgements(path: str | Path) -> HumanJudgementSet:
    """TSV ``wordA wordB similarity``; a non-numeric first row is a header."""
    pairs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != 3:
            raise FormatError(f"{path}:{lineno}: expected 3 columns")
        try:
            sim = float(cells[2])
        except ValueError:
            if lineno == 1:
                continue
            raise FormatError(f"{path}:{lineno}: bad similarity {cells[2]!r}") from None
        pairs.append((cells[0], cells[1], sim))
    return HumanJudgementSet(tuple(pairs))


def eval_human_similarity(
    embedder,
    judgements: HumanJudgementSet,
    lexicon: Lexicon,
    similarity: str = "l2",
    language: str = "",
) -> tuple[TaskScore, TaskScore]:
    """Correlate embedding similarity (negative distance) with judged similarity."""
    by_orth = {}
    for e in lexicon:
        by_orth.setdefault(e.orthography, e)
    missing = sorted({w for a, b, _ in judgements.pairs for w in (a, b) if w not in by_orth})
    if missing:
        raise MissingWord(missing)
    if len(judgements) < 2:
        raise InsufficientData("need at least two judged pairs")
    sims = []
    for a, b, _ in judgements.pairs:
        ea, eb = by_orth[a], by_orth[b]
        if hasattr(embedder, "distances"):
            d = float(embedder.distances(ea, [eb])[0])
        else:
            va, vb = embedder.embed(ea), embedder.embed(eb)
            d = float(vector_distances(va, vb[None, :], similarity)[0])
        sims.append(-d)
    human = [s for _, _, s in judgements.pairs]
    n = len(human)
    return (
        TaskScore("human_similarity", "pearson", pearson(sims, human), language, n),
        TaskScore("human_similarity", "spearman", spearman(sims, human), language, n),
    )


# -- intrinsic: retrieval --------------------------------------------------------


def eval_retrieval(
    embedder,
    entries: Sequence[Entry],
    dist: ArticulatoryDistance,
    n: int = 1000,
    seed: int = 0,
    n_queries: int = 1000,
    similarity: str = "l2",
    language: str = "",
) -> TaskScore:
    """Mean percentile rank (n - r) / n of each query's articulatory nearest
    neighbour in the embedding-induced ordering of its candidate set."""
    entries = [e for e in entries if e.phon is not None]
    N = len(entries)
    if N < 3:
        raise InsufficientData("retrieval needs at least three words")
    rng = np.random.default_rng(seed)
    queries = rng.choice(N, size=min(N, n_queries), replace=False)
    vectors = None if hasattr(embedder, "distances") else embedder.embed_many(entries)
    scores = []
    for q in queries:
        q = int(q)
        others = np.delete(np.arange(N), q)
        cand = np.sort(rng.choice(others, size=n, replace=False)) if len(others) > n else others
        cand_entries = [entries[c] for c in cand]
        art = dist.distances(entries[q].phon, [e.phon for e in cand_entries])
        target = int(np.argmin(art))  # first minimum: lexicon order
        if vectors is None:
            emb = np.asarray(embedder.distances(entries[q], cand_entries), dtype=np.float64)
        else:
            emb = vector_distances(vectors[q], vectors[cand], similarity)
        r = int(np.sum(emb < emb[target]) + np.sum(emb[:target] == emb[target]))
        size = len(cand)
        scores.append((size - r) / size)
    return TaskScore("retrieval", "percentile_rank", float(np.mean(scores)), language, len(scores))


# -- extrinsic: sound analogies ---------------------------------------------------


@dataclass(frozen=True)
class Perturbation:
    """At ``position``: w1 has p1, w2 has p2, w3 has p3, w4 has p4.

    p1->p2 and p3->p4 change the same feature between the same values.
    """

    position: int
    p1: str
    p2: str
    p3: str
    p4: str
    feature: int


@dataclass(frozen=True)
class AnalogyQuadruplet:
    w1: PhoneticWord
    w2: PhoneticWord
    w3: PhoneticWord
    w4: PhoneticWord
    perturbations: tuple[Perturbation, ...]

    @property
    def perturbation_count(self) -> int:
        return len(self.perturbations)


def perturbation_pairs(table: FeatureTable) -> dict[tuple[int, int, int], list[tuple[str, str]]]:
    """Segment pairs differing in exactly one feature, grouped by
    (feature, from value, to value). Segments duplicating an earlier row's
    vector are skipped."""
    uniq: list[str] = []
    seen = set()
    for seg in table.segments:
        key = table.vector(seg).tobytes()
        if key not in seen:
            seen.add(key)
            uniq.append(seg)
    groups: dict[tuple[int, int, int], list[tuple[str, str]]] = {}
    for p in uniq:
        vp = table.vector(p)
        for q in uniq:
            if p == q:
                continue
            diff = np.flatnonzero(vp != table.vector(q))
            if len(diff) == 1:
                f = int(diff[0])
                groups.setdefault((f, int(vp[f]), int(table.vector(q)[f])), []).append((p, q))
    return groups


def word_from_segments(segments: Sequence[str], table: FeatureTable) -> PhoneticWord:
    ids = tuple(table.index[s] for s in segments)
    feats = table.matrix[list(ids)] if ids else np.zeros((0, N_FEATURES), dtype=np.int8)
    return PhoneticWord(tuple(segments), ids, feats)


def build_quadruplet(w1: PhoneticWord, perturbations: Sequence[Perturbation], table: FeatureTable) -> AnalogyQuadruplet:
    words = [list(w1.segments) for _ in range(3)]
    for p in perturbations:
        if w1.segments[p.position] != p.p1:
            raise ValueError(f"segment at {p.position} is {w1.segments[p.position]!r}, not {p.p1!r}")
        words[0][p.position] = p.p2
        words[1][p.position] = p.p3
        words[2][p.position] = p.p4
    w2, w3, w4 = (word_from_segments(w, table) for w in words)
    return AnalogyQuadruplet(word_from_segments(w1.segments, table), w2, w3, w4, tuple(perturbations))


def generate_analogies(
    entries: Sequence[Entry],
    table: FeatureTable,
    count: int = 200,
    seed: int = 0,
    max_retries: int = 1000,
) -> list[AnalogyQuadruplet]:
    """Sound-analogy corpus: the first half with one perturbation, the rest with two.

    For each quadruplet: pick a word and position(s), pick a feature change
    p1->p2 available at every chosen position, and a second pair p3->p4
    making the same change; substitute into copies of the word.
    """
    groups = perturbation_pairs(table)
    if not groups:
        raise NoPerturbations("no segment pairs differ in exactly one feature")
    by_source: dict[str, dict[int, list[tuple[str, str]]]] = {}
    for (f, _, _), members in groups.items():
        for p, q in members:
            by_source.setdefault(p, {}).setdefault(f, []).append((p, q))
    words = [e.phon for e in entries if e.phon is not None and len(e.phon)]
    if not words:
        raise InsufficientData("no segmented words")
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n_pert = 1 if k < count // 2 else 2
        for _ in range(max_retries):
            quad = _try_quadruplet(words[int(rng.integers(len(words)))], n_pert, by_source, groups, table, rng)
            if quad is not None:
                out.append(quad)
                break
        else:
            raise NoPerturbations(f"no perturbable word found after {max_retries} draws")
    return out


def _try_quadruplet(w1, n_pert, by_source, groups, table, rng) -> AnalogyQuadruplet | None:
    if len(w1) < n_pert:
        return None
    positions = sorted(int(p) for p in rng.choice(len(w1), size=n_pert, replace=False))
    feats = None
    for pos in positions:
        avail = set(by_source.get(w1.segments[pos], {}))
        feats = avail if feats is None else feats & avail
    if not feats:
        return None
    f = sorted(feats)[int(rng.integers(len(feats)))]
    perts = []
    for pos in positions:
        p1 = w1.segments[pos]
        options = by_source[p1][f]
        _, p2 = options[int(rng.integers(len(options)))]
        key = (f, int(table.vector(p1)[f]), int(table.vector(p2)[f]))
        partners = [(a, b) for a, b in groups[key] if a not in (p1, p2)]
        if not partners:
            return None
        p3, p4 = partners[int(rng.integers(len(partners)))]
        perts.append(Perturbation(pos, p1, p2, p3, p4, f))
    return build_quadruplet(w1, perts, table)


def eval_analogies(
    embedder,
    quadruplets: Sequence[AnalogyQuadruplet],
    entries: Sequence[Entry],
    exclude_inputs: bool = False,
    similarity: str = "l2",
    language: str = "",
) -> TaskScore:
    """Acc@1 of retrieving w4 from the lexicon plus w4 by f(w2) - f(w1) + f(w3).

    Ties go to the earlier candidate; w4 is appended after the lexicon.
    """
    if not quadruplets:
        raise EmptyDataset("no analogy quadruplets")
    lex = [e for e in entries if e.phon is not None]
    E = embedder.embed_many(lex)
    lex_segs = [e.phon.segments for e in lex]
    hits = 0
    for quad in quadruplets:
        v1, v2, v3, v4 = (embedder.embed(_word_entry(w, language)) for w in (quad.w1, quad.w2, quad.w3, quad.w4))
        rows = np.vstack([E, v4[None, :]]) if len(E) else v4[None, :]
        segs = lex_segs + [quad.w4.segments]
        if exclude_inputs:
            banned = {quad.w1.segments, quad.w2.segments, quad.w3.segments}
            keep = [i for i, s in enumerate(segs) if s not in banned]
            rows, segs = rows[keep], [segs[i] for i in keep]
        d = vector_distances(v2 - v1 + v3, rows, similarity)
        if segs[int(np.argmin(d))] == quad.w4.segments:
            hits += 1
    return TaskScore("analogy", "acc_at_1", hits / len(quadruplets), language, len(quadruplets))


def write_analogies(quadruplets: Sequence[AnalogyQuadruplet], path: str | Path) -> None:
    """TSV: four space-separated segment strings and JSON perturbation metadata."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("w1\tw2\tw3\tw4\tperturbations\n")
        for q in quadruplets:
            meta = json.dumps([[p.position, p.p1, p.p2, p.p3, p.p4, p.feature] for p in q.perturbations],
                              ensure_ascii=False, separators=(",", ":"))
            words = [" ".join(w.segments) for w in (q.w1, q.w2, q.w3, q.w4)]
            fh.write("\t".join(words + [meta]) + "\n")


def read_analogies(path: str | Path, table: FeatureTable) -> list[AnalogyQuadruplet]:
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if lineno == 1 and line.startswith("w1\t"):
            continue
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != 5:
            raise FormatError(f"{path}:{lineno}: expected 5 columns")
        try:
            w1 = word_from_segments(cells[0].split(" ") if cells[0] else [], table)
            perts = [Perturbation(int(a), b, c, d, e, int(f)) for a, b, c, d, e, f in json.loads(cells[4])]
        except (KeyError, ValueError) as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from exc
        quad = build_quadruplet(w1, perts, table)
        if [" ".join(w.segments) for w in (quad.w2, quad.w3, quad.w4)] != cells[1:4]:
            raise FormatError(f"{path}:{lineno}: words disagree with perturbation metadata")
        out.append(quad)
    return out


# -- extrinsic: rhyme -----------------------------------------------------------------


def rhyme_tail(word: PhoneticWord, syllabic_index: int = 0) -> tuple[str, ...]:
    """Segments from the first vowel after the last primary stress mark."""
    stressed = word.stressed()
    marks = [i for i, s in enumerate(stressed) if s]
    if not marks:
        raise NoStressInfo(f"/{word.ipa}/ carries no primary stress mark")
    for i in range(marks[-1], len(word)):
        if word.features[i, syllabic_index] == 1:
            return word.segments[i:]
    raise NoStressInfo(f"/{word.ipa}/ has no vowel after its last stress mark")


def rhyme_gold(a: PhoneticWord, b: PhoneticWord, syllabic_index: int = 0) -> bool:
    return rhyme_tail(a, syllabic_index) == rhyme_tail(b, syllabic_index)


@dataclass(frozen=True)
class LabeledPair:
    a: Entry
    b: Entry
    label: int


def _stress_word(e: Entry) -> PhoneticWord | None:
    word = e.stress_phon if e.stress_phon is not None else e.phon
    if word is None or not any(word.stressed()):
        return None
    return word


def has_stress(entries: Sequence[Entry]) -> bool:
    return any(_stress_word(e) is not None for e in entries)


def build_rhyme_dataset(entries: Sequence[Entry], size: int, seed: int = 0, syllabic_index: int = 0) -> list[LabeledPair]:
    """``size`` pairs, half perfect rhymes and half not; identical
    pronunciations never pair up."""
    if size < 2 or size % 2:
        raise ValueError("size must be a positive even number")
    half = size // 2
    keyed = []
    for e in entries:
        w = _stress_word(e)
        if w is None or e.phon is None:
            continue
        try:
            keyed.append((e, rhyme_tail(w, syllabic_index)))
        except NoStressInfo:
            continue
    groups: dict[tuple[str, ...], list[int]] = {}
    for i, (_, key) in enumerate(keyed):
        groups.setdefault(key, []).append(i)
    positives = [
        (i, j)
        for key in sorted(groups)
        for i, j in combinations(groups[key], 2)
        if keyed[i][0].phon.segments != keyed[j][0].phon.segments
    ]
    if len(positives) < half:
        raise InsufficientData(f"only {len(positives)} rhyming pairs, need {half}")
    rng = np.random.default_rng(seed)
    chosen = [positives[k] for k in rng.choice(len(positives), size=half, replace=False)]
    if len(groups) < 2:
        raise InsufficientData("every word rhymes with every other; no negatives")
    negatives: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    attempts = 0
    while len(negatives) < half:
        attempts += 1
        if attempts > 1000 * size:
            raise InsufficientData("could not sample enough non-rhyming pairs")
        i, j = (int(v) for v in rng.integers(0, len(keyed), size=2))
        key = (min(i, j), max(i, j))
        if i == j or key in seen or keyed[i][1] == keyed[j][1]:
            continue
        seen.add(key)
        negatives.append(key)
    pairs = [LabeledPair(keyed[i][0], keyed[j][0], 1) for i, j in chosen]
    pairs += [LabeledPair(keyed[i][0], keyed[j][0], 0) for i, j in negatives]
    return [pairs[k] for k in rng.permutation(len(pairs))]


def _pair_task(task: str, embedder, dataset: Sequence[LabeledPair], seed: int, cfg: ClassifierConfig, language: str) -> TaskScore:
    entries = [p.a for p in dataset] + [p.b for p in dataset]
    E = embedder.embed_many(entries)
    n = len(dataset)
    examples = [(E[k], E[n + k], p.label) for k, p in enumerate(dataset)]
    _, acc = train_pair_classifier(examples, seed, cfg)
    return TaskScore(task, "accuracy", acc, language, n)


def eval_rhyme(embedder, dataset: Sequence[LabeledPair], seed: int = 0, cfg: ClassifierConfig = ClassifierConfig(),
               language: str = "") -> TaskScore:
    return _pair_task("rhyme", embedder, dataset, seed, cfg, language)


# -- extrinsic: cognates -------------------------------------------------------------


def read_cognates(path: str | Path) -> list[tuple[str, str, str, str]]:
    """TSV ``wordA langA wordB langB``."""
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != 4:
            raise FormatError(f"{path}:{lineno}: expected 4 columns")
        if lineno == 1 and cells == ["wordA", "langA", "wordB", "langB"]:
            continue
        out.append(tuple(cells))
    return out


def levenshtein(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb))
        prev = cur
    return prev[-1]


def levenshtein_to_many(a: str, candidates: Sequence[str]) -> np.ndarray:
    """Character Levenshtein distance from ``a`` to every candidate."""
    k = len(candidates)
    lengths = np.array([len(c) for c in candidates], dtype=np.int64)
    width = int(lengths.max()) if k else 0
    codes = np.full((k, width), -1, dtype=np.int64)
    for r, c in enumerate(candidates):
        codes[r, : len(c)] = [ord(ch) for ch in c]
    prev = np.tile(np.arange(width + 1, dtype=np.int64), (k, 1))
    for i, ch in enumerate(a, start=1):
        sub = (codes != ord(ch)).astype(np.int64)
        cur = np.empty_like(prev)
        cur[:, 0] = i
        for j in range(1, width + 1):
            cur[:, j] = np.minimum(np.minimum(prev[:, j] + 1, cur[:, j - 1] + 1), prev[:, j - 1] + sub[:, j - 1])
        prev = cur
    return prev[np.arange(k), lengths]


def build_cognate_dataset(
    cognates: Sequence[tuple[str, str, str, str]],
    lexicons: Mapping[str, Lexicon],
) -> list[LabeledPair]:
    """Each known cognate pair plus a distractor pair.

    The distractor keeps word A and replaces word B with the spelling-closest
    word (character Levenshtein to word A) from the lexicons of A's and B's
    languages that appears in no known cognate pair. Pairs without an
    eligible distractor are dropped along with their positive.
    """
    if not cognates:
        raise EmptyDataset("empty cognate list")
    known = {(a, la) for a, la, _, _ in cognates} | {(b, lb) for _, _, b, lb in cognates}
    pools: dict[tuple[str, str], tuple[list[Entry], list[str]]] = {}
    out: list[LabeledPair] = []
    skipped = 0
    for a, la, b, lb in cognates:
        if la not in lexicons or lb not in lexicons:
            skipped += 1
            continue
        ea, eb = lexicons[la].lookup(a, la), lexicons[lb].lookup(b, lb)
        if ea is None or eb is None or ea.phon is None or eb.phon is None:
            skipped += 1
            continue
        if (la, lb) not in pools:
            langs = [la] if la == lb else [la, lb]
            cands = [e for lang in langs for e in lexicons[lang]
                     if e.phon is not None and (e.orthography, e.language) not in known]
            pools[(la, lb)] = (cands, [e.orthography for e in cands])
        cands, spellings = pools[(la, lb)]
        if not cands:
            skipped += 1
            continue
        distractor = cands[int(np.argmin(levenshtein_to_many(a, spellings)))]
        out.append(LabeledPair(ea, eb, 1))
        out.append(LabeledPair(ea, distractor, 0))
    if skipped:
        log.warning("skipped %d cognate pairs without lexicon entries or distractors", skipped)
    if not out:
        raise EmptyDataset("no usable cognate pairs")
    return out


def eval_cognate(embedder, dataset: Sequence[LabeledPair], seed: int = 0, cfg: ClassifierConfig = ClassifierConfig(),
                 language: str = "") -> TaskScore:
    return _pair_task("cognate", embedder, dataset, seed, cfg, language)


# -- overall ---------------------------------------------------------------------------


def overall_score(values: Sequence[float]) -> float:
    """Mean of the six task values (human sim, art. dist, retrieval,
    analogies, rhyme, cognate), each clamped to [0, 1]."""
    values = list(values)
    if len(values) != len(TASKS):
        raise ArityError(f"expected {len(TASKS)} task values, got {len(values)}")
    return partial_overall(values)


def partial_overall(values: Sequence[float]) -> float:
    """Clamped mean over however many task values are available."""
    if not values:
        raise ArityError("no task values")
    return float(np.mean(np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)))
