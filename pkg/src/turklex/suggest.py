"""Form-similarity baseline for cognate grouping.

Surface forms are folded to a plain lowercase alphabet, scored with a
normalized string metric, and linked into blocks wherever the score
clears a threshold. Proposals only pre-fill an annotator's session;
nothing here commits an annotation.

The folding is orthographic only. Regular sound correspondences (say,
word-initial f ~ p in 'fayda'/'payda') are deliberately not modeled, so
forms differing by such correspondences may score below threshold; gold
fixtures keep that limitation visible.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .agreement import (
    PairConfusion,
    PartitionAgreement,
    aggregate_partition_agreement,
    pair_confusion,
    partition_agreement,
)
from .model import CognatePartition, DictionaryEntry, Lexeme, Slot, slot_sort_key

#: Diacritic and special-letter folding, applied after lowercasing.
#: Maps every non-ASCII letter of the eight Latin orthographies and the
#: dictionary's transliteration alphabet onto plain a-z.
FOLD_TABLE: Mapping[str, str] = {
    "ı": "i",   # dotless i (Azerbaijani, Turkish, and transliterations)
    "ş": "s",
    "ç": "c",
    "ö": "o",
    "ü": "u",
    "ğ": "g",
    "ə": "e",   # Azerbaijani schwa
    "ý": "y",   # Turkmen
    "ž": "z",   # Turkmen
    "ň": "n",   # Turkmen
    "ä": "a",   # Turkmen and transliterations
    "ñ": "n",   # transliterations
    "š": "s",
    "č": "c",
    "é": "e",
    "â": "a",
    "î": "i",
    "û": "u",
    "ô": "o",
    "ā": "a",
    "ē": "e",
    "ī": "i",
    "ō": "o",
    "ū": "u",
    "ʻ": "",    # Uzbek turned comma (oʻ, gʻ)
    "ʼ": "",
    "’": "",
    "‘": "",
    "'": "",
}

#: Characters a folded form may contain.
OUTPUT_ALPHABET = frozenset("abcdefghijklmnopqrstuvwxyz0123456789 -")


@dataclass(frozen=True)
class NormalizedForm:
    """A lexeme folded for comparison, tagged with the slot it came from."""

    text: str
    source: Slot


def fold_text(text: str) -> str:
    """Lowercase, strip parentheses, apply the folding table, and drop
    any leftover combining marks. Idempotent."""
    out = []
    lowered = text.replace("(", "").replace(")", "").lower()
    for ch in lowered:
        if ch in FOLD_TABLE:
            out.append(FOLD_TABLE[ch])
            continue
        if ch in OUTPUT_ALPHABET:
            out.append(ch)
            continue
        # Last resort: peel combining marks (e.g. a macron the table
        # does not list), keep the base letter if it is plain.
        for piece in unicodedata.normalize("NFD", ch):
            if unicodedata.combining(piece):
                continue
            piece = FOLD_TABLE.get(piece, piece)
            if piece in OUTPUT_ALPHABET:
                out.append(piece)
    return "".join(out).strip()


def normalize_form(lexeme: Lexeme, source: Slot) -> NormalizedForm:
    return NormalizedForm(fold_text(lexeme.form), source)


def levenshtein(a: str, b: str) -> int:
    """Edit distance with unit insert/delete/substitute costs."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[-1]


def lcs_length(a: str, b: str) -> int:
    """Length of the longest common subsequence."""
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for ca in a:
        current = [0]
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


METRICS = ("normalized-levenshtein", "lcsr")


def similarity(
    a: "NormalizedForm | str",
    b: "NormalizedForm | str",
    metric: str = "normalized-levenshtein",
) -> float:
    """Score in [0, 1]; symmetric; 1 on identical strings (two empty
    strings count as identical). Accepts folded strings or
    NormalizedForm values."""
    a = a.text if isinstance(a, NormalizedForm) else a
    b = b.text if isinstance(b, NormalizedForm) else b
    if not a and not b:
        return 1.0
    longest = max(len(a), len(b))
    if metric == "normalized-levenshtein":
        return 1.0 - levenshtein(a, b) / longest
    if metric == "lcsr":
        return lcs_length(a, b) / longest
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


@dataclass(frozen=True)
class SimilarityConfig:
    """Threshold tau and metric for linking forms into blocks."""

    tau: float = 0.6
    metric: str = "normalized-levenshtein"

    def __post_init__(self) -> None:
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be within [0, 1]: {self.tau}")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; expected one of {METRICS}")


class _UnionFind:
    def __init__(self, items: Sequence):
        self.parent = {item: item for item in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        self.parent[self.find(x)] = self.find(y)


def propose_partition(
    entry: DictionaryEntry, config: SimilarityConfig = SimilarityConfig()
) -> CognatePartition:
    """Connected components of the graph joining slots whose folded
    forms score >= tau. Deterministic, and independent of lexeme input
    order (components do not depend on edge order). At tau = 1.0 the
    blocks are exactly the groups of identical folded forms."""
    slots = entry.slots()
    if not slots:
        raise ValueError(f"entry {entry.entry_id!r} has no lexemes")
    forms = {slot: fold_text(entry.lexeme_at(slot).form) for slot in slots}
    uf = _UnionFind(slots)
    for i, s in enumerate(slots):
        for t in slots[i + 1 :]:
            if similarity(forms[s], forms[t], config.metric) >= config.tau:
                uf.union(s, t)
    blocks: dict[Slot, set[Slot]] = {}
    for slot in slots:
        blocks.setdefault(uf.find(slot), set()).add(slot)
    return CognatePartition.from_blocks(blocks.values())


def proposal_classes(partition: CognatePartition) -> dict[Slot, int]:
    """Canonical class numbers for a proposed partition: blocks numbered
    1..k by their first slot in canonical order."""
    classes: dict[Slot, int] = {}
    for number, block in enumerate(partition.sorted_blocks(), start=1):
        for slot in block:
            classes[slot] = number
    return classes


class MissingGold(KeyError):
    """No gold partition for an entry under evaluation."""


@dataclass(frozen=True)
class EntryEvaluation:
    entry_id: str
    proposal: CognatePartition
    agreement: PartitionAgreement


@dataclass(frozen=True)
class EvaluationReport:
    """Proposal quality against gold partitions at one configuration.
    The aggregate pools slot pairs across entries (micro-average)."""

    tau: float
    metric: str
    per_entry: tuple[EntryEvaluation, ...]
    aggregate: PartitionAgreement


def evaluate_suggestions(
    entries: Iterable[DictionaryEntry],
    gold: Mapping[str, CognatePartition],
    config: SimilarityConfig = SimilarityConfig(),
) -> EvaluationReport:
    """Propose a partition per entry and score each against gold.

    Scoring is over the gold slots: a proposal is restricted to the
    slots gold covers before comparison, so partially annotated gold
    still evaluates cleanly.
    """
    per_entry: list[EntryEvaluation] = []
    confusions: list[PairConfusion] = []
    for entry in entries:
        if entry.entry_id not in gold:
            raise MissingGold(entry.entry_id)
        gold_partition = gold[entry.entry_id]
        proposal = propose_partition(entry, config)
        restricted = restrict_partition(proposal, gold_partition.slots())
        confusion = pair_confusion(gold_partition, restricted)
        confusions.append(confusion)
        per_entry.append(
            EntryEvaluation(
                entry.entry_id,
                proposal,
                partition_agreement(gold_partition, restricted),
            )
        )
    aggregate = aggregate_partition_agreement(confusions)
    return EvaluationReport(config.tau, config.metric, tuple(per_entry), aggregate)


def sweep(
    entries: Sequence[DictionaryEntry],
    gold: Mapping[str, CognatePartition],
    taus: Sequence[float],
    metric: str = "normalized-levenshtein",
) -> list[EvaluationReport]:
    """Evaluate a list of thresholds with one call per tau."""
    return [
        evaluate_suggestions(entries, gold, SimilarityConfig(tau, metric))
        for tau in taus
    ]


def restrict_partition(
    partition: CognatePartition, slots: Iterable[Slot]
) -> CognatePartition:
    """Intersect every block with the given slot set, dropping emptied
    blocks."""
    wanted = set(slots)
    blocks = [block & wanted for block in partition.blocks]
    return CognatePartition.from_blocks(b for b in blocks if b)
