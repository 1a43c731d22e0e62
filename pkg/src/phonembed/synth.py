"""Seeded pseudo-word corpora over the bundled feature table.

Real lexicons are not redistributed; these corpora make desk-scale runs and
tests hermetic. Words are built from CV(C) syllables with one primary
stress, spelled through a lossy many-to-one orthography.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lexicon import Entry, Lexicon, make_entry
from .phonology import FeatureTable, bundled_table

ONSETS = ["p", "b", "t", "d", "k", "ɡ", "f", "v", "θ", "s", "z", "ʃ", "tʃ", "dʒ", "h", "m", "n", "l", "ɹ", "w", "j"]
CODAS = ["", "", "", "t", "d", "k", "s", "z", "m", "n", "ŋ", "l", "ɹ", "p", "ʃ"]
VOWELS = ["i", "ɪ", "e", "ɛ", "æ", "ɑ", "ʌ", "ə", "u", "ʊ", "o", "ɔ"]

SPELLING = {
    "p": "p", "b": "b", "t": "t", "d": "d", "k": "c", "ɡ": "g", "f": "f", "v": "v",
    "θ": "th", "ð": "th", "s": "s", "z": "s", "ʃ": "sh", "ʒ": "s", "tʃ": "ch", "dʒ": "j",
    "h": "h", "m": "m", "n": "n", "ŋ": "ng", "l": "l", "ɹ": "r", "w": "w", "j": "y",
    "i": "ee", "ɪ": "i", "e": "ay", "ɛ": "e", "æ": "a", "ɑ": "o", "ʌ": "u", "ə": "a",
    "u": "oo", "ʊ": "u", "o": "o", "ɔ": "aw",
}

# regular correspondences used to derive a sister language
SOUND_CHANGES = {"p": "f", "t": "d", "k": "x", "θ": "t", "ʃ": "s", "w": "v", "æ": "a", "ɪ": "i", "ʊ": "u", "ʌ": "o"}


def spell(segments) -> str:
    return "".join(SPELLING.get(s, s) for s in segments)


def _word(rng: np.random.Generator) -> tuple[list[list[str]], int]:
    n_syl = int(rng.choice([1, 2, 2, 3]))
    sylls = []
    for _ in range(n_syl):
        onset = [] if rng.random() < 0.15 else [ONSETS[rng.integers(len(ONSETS))]]
        coda = CODAS[rng.integers(len(CODAS))]
        sylls.append(onset + [VOWELS[rng.integers(len(VOWELS))]] + ([coda] if coda else []))
    stress = int(rng.integers(n_syl)) if rng.random() < 0.5 else n_syl - 1
    return sylls, stress


def _render(sylls, stress) -> tuple[str, str]:
    plain = "".join("".join(s) for s in sylls)
    marked = "".join(("ˈ" if i == stress else "") + "".join(s) for i, s in enumerate(sylls))
    return plain, marked


def pseudo_lexicon(size: int, seed: int = 0, language: str = "en", table: FeatureTable | None = None) -> Lexicon:
    """``size`` distinct pseudo-words (distinct spelling and pronunciation)."""
    table = table or bundled_table()
    rng = np.random.default_rng(seed)
    entries: list[Entry] = []
    seen_orth, seen_ipa = set(), set()
    while len(entries) < size:
        sylls, stress = _word(rng)
        plain, marked = _render(sylls, stress)
        orth = spell([seg for s in sylls for seg in s])
        if orth in seen_orth or plain in seen_ipa:
            continue
        seen_orth.add(orth)
        seen_ipa.add(plain)
        entries.append(make_entry(orth, plain, table, language, stress_ipa=marked))
    return Lexicon(entries, language)


@dataclass(frozen=True)
class CognateCorpus:
    source: Lexicon
    target: Lexicon
    pairs: list[tuple[str, str, str, str]]  # wordA, langA, wordB, langB


def cognate_corpus(size: int, n_cognates: int, seed: int = 0, table: FeatureTable | None = None,
                   source_lang: str = "en", target_lang: str = "xx") -> CognateCorpus:
    """A source pseudo-lexicon plus a sister language derived by sound change.

    The first ``n_cognates`` source words get regular cognates; the rest of
    the sister lexicon is fresh pseudo-words.
    """
    table = table or bundled_table()
    source = pseudo_lexicon(size, seed, source_lang, table)
    fresh = pseudo_lexicon(size, seed + 7919, target_lang, table)
    rng = np.random.default_rng(seed + 1)
    target: list[Entry] = []
    pairs = []
    seen = set()
    for e in source.entries[:n_cognates]:
        segs = [SOUND_CHANGES.get(s, s) if rng.random() < 0.8 else s for s in e.phon.segments]
        if rng.random() < 0.3:
            segs.append("ə")
        orth = spell(segs)
        if orth in seen:
            continue
        seen.add(orth)
        target.append(make_entry(orth, "".join(segs), table, target_lang))
        pairs.append((e.orthography, source_lang, orth, target_lang))
    for e in fresh.entries:
        if len(target) >= size:
            break
        if e.orthography not in seen:
            seen.add(e.orthography)
            target.append(e)
    return CognateCorpus(source, Lexicon(target, target_lang), pairs)
