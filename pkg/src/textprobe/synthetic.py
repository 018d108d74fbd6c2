"""Seeded synthetic benchmark for exercising the search strategies.

Every generated example is a bag of instance-unique pseudo-words scored
by a linear surrogate. Three "signal" words carry the ground-truth label;
their synonyms only weaken them. Depending on the instance class, a flip
is reachable through the top-ranked signal (any strategy finds it), a
lower-ranked signal (greedy pays an extra edit), a zero-weight carrier
word that deletion probes cannot see (greedy commits its edit budget
elsewhere and stalls), a pair of such carriers (needs the queue to chain
two edits), or not at all. The class mix therefore separates the
strategies in the same direction a real campaign does while staying fully
deterministic and cheap.

Word lists are also exportable in the lexical database file format so the
whole pipeline, file parsing included, can run against the benchmark.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from textprobe.harness.dataset import DatasetRecord
from textprobe.lexicon.wordnet import WORDNET_POS, SynsetLexicon
from textprobe.threat.surrogate import SurrogateSpec

LABELS = ("neg", "pos")

_CLASS_MIX = (
    ("open", 0.40),     # flip at the top-ranked signal
    ("detour", 0.30),   # flip at the second signal
    ("carrier", 0.10),  # flip hidden at a zero-weight word
    ("pair", 0.10),     # flip needs two hidden words
    ("stuck", 0.10),    # no flip within the edit budget
)

_STOPWORD_FILL = ("the", "of", "is")


@dataclass
class SyntheticBenchmark:
    records: list[DatasetRecord]
    surrogate: SurrogateSpec
    synonym_groups: list[list[str]]

    @property
    def lexicon(self) -> SynsetLexicon:
        return SynsetLexicon.from_synsets({"noun": self.synonym_groups})


def _pick_class(rng: random.Random) -> str:
    roll = rng.random()
    acc = 0.0
    for name, share in _CLASS_MIX:
        acc += share
        if roll < acc:
            return name
    return _CLASS_MIX[-1][0]


def _build_instance(idx: int, rng: random.Random):
    prefix = f"x{idx:04d}"
    klass = _pick_class(rng)
    y = LABELS[rng.randrange(2)]
    other = LABELS[1 - LABELS.index(y)]
    weights: dict[tuple[str, str], float] = {}
    groups: list[list[str]] = []
    words: list[str] = []

    signal_weights = [
        1.3 + rng.uniform(-0.05, 0.05),
        1.2 + rng.uniform(-0.04, 0.04),
        1.1 + rng.uniform(-0.04, 0.04),
    ]
    margin = sum(signal_weights)
    for j, w in enumerate(signal_weights):
        word = f"{prefix}sig{j}"
        weak = f"{prefix}sig{j}w"
        neutral = f"{prefix}sig{j}n"
        weights[(word, y)] = w
        weights[(weak, y)] = 0.2 * w
        weights[(neutral, y)] = rng.uniform(0.0, 0.03)
        group = [word, weak, neutral]
        if (klass == "open" and j == 0) or (klass == "detour" and j == 1):
            flip = f"{prefix}flip"
            weights[(flip, other)] = (margin - w) + rng.uniform(0.4, 0.9)
            group.append(flip)
        groups.append(group)
        words.append(word)

    n_carriers = 2 if klass == "pair" else 1
    for j in range(n_carriers):
        carrier = f"{prefix}car{j}"
        opposite = f"{prefix}opp{j}"
        decoy = f"{prefix}dec{j}"
        if klass == "carrier":
            strength = margin + rng.uniform(0.4, 1.0)
        elif klass == "pair":
            strength = margin * rng.uniform(0.56, 0.70)
        else:
            strength = margin * rng.uniform(0.25, 0.35)
        weights[(opposite, other)] = strength
        weights[(decoy, y)] = rng.uniform(0.0, 0.02)
        groups.append([carrier, opposite, decoy])
        words.append(carrier)

    perturbable = rng.randint(12, 16)
    n_fillers = perturbable - 3 - n_carriers
    for j in range(n_fillers):
        filler = f"{prefix}fil{j}"
        drift = f"{prefix}fil{j}a"
        calm = f"{prefix}fil{j}b"
        weights[(drift, other)] = rng.uniform(0.0, 0.02)
        weights[(calm, y)] = rng.uniform(0.0, 0.02)
        groups.append([filler, drift, calm])
        words.append(filler)

    words.extend(_STOPWORD_FILL)
    rng.shuffle(words)
    return " ".join(words), y, weights, groups


def synthetic_benchmark(n_examples: int = 200, seed: int = 7) -> SyntheticBenchmark:
    """Generate a deterministic benchmark of ``n_examples`` labeled texts."""
    records = []
    weights: dict[tuple[str, str], float] = {}
    groups: list[list[str]] = []
    for idx in range(n_examples):
        rng = random.Random(f"{seed}:{idx}")
        text, y, instance_weights, instance_groups = _build_instance(idx, rng)
        weights.update(instance_weights)
        groups.extend(instance_groups)
        records.append(DatasetRecord(id=f"{idx:04d}", text=text, label=y))
    surrogate = SurrogateSpec(label_set=LABELS, weights=weights)
    return SyntheticBenchmark(records, surrogate, groups)


def write_wordnet_files(
    groups: Mapping[str, Sequence[Sequence[str]]], directory: str | Path
) -> Path:
    """Materialize synonym groups as lexical database index/data files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    header = (
        "  1 This file is generated for testing purposes.\n"
        "  2 Lines starting with whitespace are license headers.\n"
    )
    for pos, suffix in WORDNET_POS.items():
        data_lines = []
        index: dict[str, list[str]] = {}
        for i, group in enumerate(groups.get(pos, [])):
            offset = f"{i + 1:08d}"
            lemmas = [w.lower() for w in group]
            body = " ".join(f"{w} 0" for w in lemmas)
            data_lines.append(
                f"{offset} 00 {suffix} {len(lemmas):02x} {body} 000 | synthetic gloss"
            )
            for lemma in lemmas:
                index.setdefault(lemma, []).append(offset)
        with open(directory / f"data.{pos}", "w", encoding="utf-8") as handle:
            handle.write(header)
            handle.write("\n".join(data_lines) + ("\n" if data_lines else ""))
        with open(directory / f"index.{pos}", "w", encoding="utf-8") as handle:
            handle.write(header)
            for lemma in sorted(index):
                offsets = index[lemma]
                handle.write(
                    f"{lemma} {suffix} {len(offsets)} 0 {len(offsets)} 0 "
                    + " ".join(offsets)
                    + "\n"
                )
    return directory


def write_benchmark(bench: SyntheticBenchmark, directory: str | Path) -> dict:
    """Write dataset, surrogate spec, and lexicon files; return their paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    dataset_path = directory / "dataset.jsonl"
    with open(dataset_path, "w", encoding="utf-8") as handle:
        for record in bench.records:
            handle.write(
                json.dumps(
                    {"id": record.id, "text": record.text, "label": record.label},
                    sort_keys=True,
                )
                + "\n"
            )
    surrogate_path = directory / "surrogate.json"
    with open(surrogate_path, "w", encoding="utf-8") as handle:
        json.dump(bench.surrogate.to_dict(), handle, sort_keys=True, indent=2)
        handle.write("\n")
    wordnet_dir = write_wordnet_files({"noun": bench.synonym_groups}, directory / "wordnet")
    return {
        "dataset": str(dataset_path),
        "surrogate": str(surrogate_path),
        "wordnet": str(wordnet_dir),
    }
