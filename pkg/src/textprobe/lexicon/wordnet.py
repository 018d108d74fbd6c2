"""Parser for Princeton WordNet 3.x database files and a POS rule tagger.

Only the fields needed for synonym lookup are consumed: the index files
map each lemma to its synset offsets, and the data files map an offset to
the lemma group of one synset. Header lines (which begin with whitespace)
are skipped. Multi-word lemmas keep their underscores.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Mapping, Sequence

from textprobe.errors import LexiconParseError

# File suffix and synset-type letters per part of speech.
WORDNET_POS = {"noun": "n", "verb": "v", "adj": "a", "adv": "r"}
_SS_TYPE_TO_POS = {"n": "noun", "v": "verb", "a": "adj", "s": "adj", "r": "adv"}

_OFFSET_RE = re.compile(r"^\d{8}$")

# Deterministic fallback rules for words absent from the lexicon. Order
# matters; the first matching suffix wins and stems shorter than three
# characters never match.
_SUFFIX_RULES = (
    ("ly", "adv"),
    ("ous", "adj"),
    ("ful", "adj"),
    ("able", "adj"),
    ("ible", "adj"),
    ("ive", "adj"),
    ("less", "adj"),
    ("ish", "adj"),
    ("ize", "verb"),
    ("ise", "verb"),
    ("ify", "verb"),
    ("tion", "noun"),
    ("sion", "noun"),
    ("ness", "noun"),
    ("ment", "noun"),
    ("ity", "noun"),
    ("ism", "noun"),
)

# Lexicon membership is checked in this order; the first hit wins.
_POS_PRIORITY = ("noun", "verb", "adj", "adv")


class SynsetLexicon:
    """Synonym lookup over lemma groups ("synsets") keyed by part of speech.

    All lemmas are lowercase-normalized. A lemma is never reported as its
    own synonym.
    """

    def __init__(
        self,
        synsets: Mapping[tuple[str, str], tuple[str, ...]],
        index: Mapping[tuple[str, str], tuple[str, ...]],
    ):
        # synsets: (pos, synset_key) -> lemma group, in file order
        # index:   (lemma, pos) -> synset keys, in file order
        self._synsets = dict(synsets)
        self._index = dict(index)

    @classmethod
    def from_synsets(
        cls, groups: Mapping[str, Sequence[Sequence[str]]]
    ) -> "SynsetLexicon":
        """Build a lexicon from in-memory lemma groups, one list per POS."""
        synsets: dict[tuple[str, str], tuple[str, ...]] = {}
        index: dict[tuple[str, str], list[str]] = {}
        for pos, groups_for_pos in groups.items():
            if pos not in WORDNET_POS:
                raise ValueError(f"unknown pos {pos!r}")
            for i, group in enumerate(groups_for_pos):
                key = f"{i:08d}"
                lemmas = tuple(w.lower() for w in group)
                synsets[(pos, key)] = lemmas
                for lemma in lemmas:
                    index.setdefault((lemma, pos), [])
                    if key not in index[(lemma, pos)]:
                        index[(lemma, pos)].append(key)
        return cls(synsets, {k: tuple(v) for k, v in index.items()})

    @property
    def synset_count(self) -> int:
        return len(self._synsets)

    def has_lemma(self, lemma: str, pos: str) -> bool:
        return (lemma.lower(), pos) in self._index

    def lemmas(self, pos: str | None = None) -> list[str]:
        """All indexed lemmas, sorted; optionally restricted to one POS."""
        found = {
            lemma
            for (lemma, p) in self._index
            if pos is None or p == pos
        }
        return sorted(found)

    def synonyms(self, lemma: str, pos: str) -> list[str]:
        """Union of the lemma's synset groups, self excluded, file order kept."""
        lemma = lemma.lower()
        keys = self._index.get((lemma, pos), ())
        seen: dict[str, None] = {}
        for key in keys:
            for word in self._synsets.get((pos, key), ()):
                if word != lemma:
                    seen.setdefault(word)
        return list(seen)


def _data_lines(path: Path):
    if not path.is_file():
        raise LexiconParseError(f"{path}: file not found")
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip() or line.startswith(" "):
                continue  # license header or blank
            yield lineno, line.rstrip("\n")


def _parse_data_file(path: Path, pos: str) -> dict[tuple[str, str], tuple[str, ...]]:
    synsets: dict[tuple[str, str], tuple[str, ...]] = {}
    for lineno, line in _data_lines(path):
        fields = line.split(" ")
        try:
            offset = fields[0]
            if not _OFFSET_RE.match(offset):
                raise ValueError(f"bad synset offset {offset!r}")
            ss_type = fields[2]
            if _SS_TYPE_TO_POS.get(ss_type) != pos:
                raise ValueError(f"synset type {ss_type!r} in {pos} file")
            w_cnt = int(fields[3], 16)
            if w_cnt < 1:
                raise ValueError("synset with no words")
            words = tuple(
                fields[4 + 2 * i].lower() for i in range(w_cnt)
            )
        except (ValueError, IndexError) as exc:
            raise LexiconParseError(f"{path}:{lineno}: {exc}") from exc
        synsets[(pos, offset)] = words
    return synsets


def _parse_index_file(path: Path, pos: str) -> dict[tuple[str, str], tuple[str, ...]]:
    index: dict[tuple[str, str], tuple[str, ...]] = {}
    for lineno, line in _data_lines(path):
        fields = line.split(" ")
        try:
            lemma = fields[0].lower()
            synset_cnt = int(fields[2])
            if synset_cnt < 1:
                raise ValueError("lemma with no synsets")
            offsets = fields[-synset_cnt:]
            for off in offsets:
                if not _OFFSET_RE.match(off):
                    raise ValueError(f"bad synset offset {off!r}")
        except (ValueError, IndexError) as exc:
            raise LexiconParseError(f"{path}:{lineno}: {exc}") from exc
        index[(lemma, pos)] = tuple(offsets)
    return index


def load_wordnet(directory: str | Path) -> SynsetLexicon:
    """Load ``index.*`` and ``data.*`` files for all four parts of speech."""
    directory = Path(directory)
    synsets: dict[tuple[str, str], tuple[str, ...]] = {}
    index: dict[tuple[str, str], tuple[str, ...]] = {}
    for pos, suffix in WORDNET_POS.items():
        name = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}[suffix]
        synsets.update(_parse_data_file(directory / f"data.{name}", pos))
        index.update(_parse_index_file(directory / f"index.{name}", pos))
    # Index entries must resolve against parsed synsets.
    for (lemma, pos), offsets in index.items():
        for off in offsets:
            if (pos, off) not in synsets:
                raise LexiconParseError(
                    f"index.{pos}: lemma {lemma!r} points at missing synset {off}"
                )
    return SynsetLexicon(synsets, index)


def pos_tag(
    surfaces: Sequence[str], lexicon: SynsetLexicon | None = None
) -> list[str]:
    """Tag each surface with one of noun/verb/adj/adv/other.

    Lexicon membership decides first (ties broken noun > verb > adj > adv),
    then the suffix rules; anything else, including punctuation and
    numbers, is tagged "other". Deterministic for a fixed input.
    """
    tags = []
    for surface in surfaces:
        if not re.search(r"\w", surface, re.UNICODE):
            tags.append("other")
            continue
        word = surface.lower()
        tag = None
        if lexicon is not None:
            for pos in _POS_PRIORITY:
                if lexicon.has_lemma(word, pos):
                    tag = pos
                    break
        if tag is None:
            for suffix, pos in _SUFFIX_RULES:
                if word.endswith(suffix) and len(word) >= len(suffix) + 3:
                    tag = pos
                    break
        tags.append(tag or "other")
    return tags
