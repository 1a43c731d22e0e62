"""Word entries and TSV lexicon files."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import EmptyLexicon, PhonembedError, UnknownSegment
from .phonology import FeatureTable, PhoneticWord, segment_ipa

log = logging.getLogger(__name__)

HEADER = ("orthography", "language", "ipa", "stress_ipa", "romanized")


@dataclass(frozen=True)
class Entry:
    orthography: str
    language: str
    ipa: str
    stress_ipa: str | None = None
    romanized: str | None = None
    phon: PhoneticWord | None = field(default=None, compare=False, repr=False)
    stress_phon: PhoneticWord | None = field(default=None, compare=False, repr=False)

    @property
    def key(self) -> tuple[str, str]:
        return (self.orthography, self.language)


def make_entry(
    orthography: str,
    ipa: str,
    table: FeatureTable,
    language: str = "und",
    stress_ipa: str | None = None,
    romanized: str | None = None,
) -> Entry:
    """Build an entry, segmenting its pronunciation(s). Raises UnknownSegment."""
    phon = segment_ipa(ipa, table)
    stress_phon = segment_ipa(stress_ipa, table) if stress_ipa else None
    return Entry(orthography, language, ipa, stress_ipa, romanized, phon, stress_phon)


@dataclass(frozen=True)
class SegmentationFailure:
    line: int
    orthography: str
    ipa: str
    offset: int


@dataclass
class Lexicon:
    entries: list[Entry]
    language: str
    failures: list[SegmentationFailure] = field(default_factory=list)

    def __post_init__(self):
        if not self.entries:
            raise EmptyLexicon(f"no entries for language {self.language!r}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def segmented(self) -> list[Entry]:
        """Entries whose pronunciation segmented under the feature table."""
        return [e for e in self.entries if e.phon is not None]

    def languages(self) -> list[str]:
        return sorted({e.language for e in self.entries})

    def for_language(self, language: str) -> "Lexicon":
        return Lexicon([e for e in self.entries if e.language == language], language,
                       [f for f in self.failures])

    def lookup(self, orthography: str, language: str | None = None) -> Entry | None:
        for e in self.entries:
            if e.orthography == orthography and (language is None or e.language == language):
                return e
        return None

    def head(self, n: int) -> "Lexicon":
        return Lexicon(self.entries[:n], self.language, list(self.failures))

    @classmethod
    def from_entries(cls, entries: Iterable[Entry], language: str | None = None) -> "Lexicon":
        entries = list(entries)
        if language is None:
            langs = {e.language for e in entries}
            language = langs.pop() if len(langs) == 1 else "mul"
        return cls(entries, language)


def load_lexicon(path: str | Path, table: FeatureTable) -> Lexicon:
    """Load a TSV lexicon: orthography, language, ipa, [stress_ipa], [romanized].

    Duplicate (orthography, language) rows keep the first occurrence. Rows
    whose IPA does not segment are kept with ``phon=None`` and listed in
    ``Lexicon.failures``.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise PhonembedError(f"cannot read lexicon {path}: {exc}") from exc
    entries: list[Entry] = []
    failures: list[SegmentationFailure] = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        cells = line.split("\t")
        if lineno == 1 and cells[0] == HEADER[0]:
            continue
        if len(cells) < 3:
            log.warning("%s:%d: fewer than 3 columns, skipped", path, lineno)
            continue
        orth, lang, ipa = cells[0], cells[1], cells[2]
        stress_ipa = cells[3] if len(cells) > 3 and cells[3] else None
        romanized = cells[4] if len(cells) > 4 and cells[4] else None
        if (orth, lang) in seen:
            continue
        seen.add((orth, lang))
        try:
            entries.append(make_entry(orth, ipa, table, lang, stress_ipa, romanized))
        except UnknownSegment as exc:
            failures.append(SegmentationFailure(lineno, orth, exc.text, exc.offset))
            entries.append(Entry(orth, lang, ipa, stress_ipa, romanized))
    if not entries:
        raise EmptyLexicon(f"{path}: no valid rows")
    if failures:
        log.warning("%s: %d of %d rows failed to segment", path, len(failures), len(entries))
    lex = Lexicon.from_entries(entries)
    lex.failures = failures
    return lex


def write_lexicon(entries: Sequence[Entry], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("\t".join(HEADER) + "\n")
        for e in entries:
            fh.write("\t".join([e.orthography, e.language, e.ipa, e.stress_ipa or "", e.romanized or ""]) + "\n")
