"""Inter-annotator agreement: paired-label contingency counts, Cohen's
kappa with a large-sample 95% CI, the restricted variant that drops
inconclusive/exception codes, and pair-counting metrics for comparing
cognate partitions.

Counts and agreement fractions are kept as exact integer ratios; floats
appear only in the final statistics, so results are identical across
platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .codec import AnnotationRecord, resolve_newest, to_entry_annotation
from .model import (
    CognatePartition,
    EntryAnnotation,
    EtymologyCode,
    RESTRICTED_EXCLUDED_CODES,
    Slot,
)

#: Default category order: every etymology letter, in code-alphabet order.
ALL_CATEGORIES: tuple[EtymologyCode, ...] = tuple(EtymologyCode)


class EmptyIntersection(ValueError):
    """The two annotators share no labeled slots, so no statistic exists."""


class DegenerateChance(ValueError):
    """Chance agreement is 1 (single used category), so kappa is undefined."""


class SlotSetMismatch(ValueError):
    """Two partitions do not cover the same slots."""


@dataclass(frozen=True)
class ContingencyMatrix:
    """Square table of paired labels. Orientation is fixed: annotator 1
    runs along the horizontal axis (columns), annotator 2 along the
    vertical (rows), so counts[i][j] is the number of slots annotator 2
    labeled categories[i] while annotator 1 labeled categories[j].

    only_a / only_b count slots labeled by just one of the two
    annotators; those never enter the counts.
    """

    categories: tuple[EtymologyCode, ...]
    counts: tuple[tuple[int, ...], ...]
    n: int
    only_a: int = 0
    only_b: int = 0

    def __post_init__(self) -> None:
        k = len(self.categories)
        if len(set(self.categories)) != k:
            raise ValueError("duplicate categories")
        if len(self.counts) != k or any(len(row) != k for row in self.counts):
            raise ValueError(f"counts must be {k}x{k}")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("negative cell count")
        total = sum(sum(row) for row in self.counts)
        if total != self.n:
            raise ValueError(f"n={self.n} but cells sum to {total}")

    @classmethod
    def from_counts(
        cls,
        categories: Sequence[EtymologyCode],
        counts: Sequence[Sequence[int]],
        only_a: int = 0,
        only_b: int = 0,
    ) -> "ContingencyMatrix":
        rows = tuple(tuple(int(c) for c in row) for row in counts)
        n = sum(sum(row) for row in rows)
        return cls(tuple(categories), rows, n, only_a, only_b)

    @property
    def empty(self) -> bool:
        return self.n == 0

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(len(self.categories)))

    def row_totals(self) -> tuple[int, ...]:
        """Marginals of annotator 2 (one per row)."""
        return tuple(sum(row) for row in self.counts)

    def col_totals(self) -> tuple[int, ...]:
        """Marginals of annotator 1 (one per column)."""
        k = len(self.categories)
        return tuple(sum(self.counts[i][j] for i in range(k)) for j in range(k))

    def cell(self, row: EtymologyCode, col: EtymologyCode) -> int:
        i = self.categories.index(row)
        j = self.categories.index(col)
        return self.counts[i][j]

    def transpose(self) -> "ContingencyMatrix":
        k = len(self.categories)
        rows = tuple(tuple(self.counts[j][i] for j in range(k)) for i in range(k))
        return ContingencyMatrix(self.categories, rows, self.n, self.only_b, self.only_a)

    def restrict(self, excluded: Iterable[EtymologyCode]) -> "ContingencyMatrix":
        """Drop every slot where either annotator used an excluded code:
        exactly the submatrix over the remaining categories."""
        dropped = set(excluded)
        keep = [i for i, c in enumerate(self.categories) if c not in dropped]
        cats = tuple(self.categories[i] for i in keep)
        rows = tuple(tuple(self.counts[i][j] for j in keep) for i in keep)
        n = sum(sum(row) for row in rows)
        return ContingencyMatrix(cats, rows, n, self.only_a, self.only_b)

    def without_unused(self) -> "ContingencyMatrix":
        """Drop categories neither annotator used (all-zero row and
        column); kappa is invariant under this, and reports follow the
        published-table convention of omitting such columns."""
        if self.empty:
            return self
        rows_t, cols_t = self.row_totals(), self.col_totals()
        keep = [
            i
            for i in range(len(self.categories))
            if rows_t[i] > 0 or cols_t[i] > 0
        ]
        cats = tuple(self.categories[i] for i in keep)
        rows = tuple(tuple(self.counts[i][j] for j in keep) for i in keep)
        return ContingencyMatrix(cats, rows, self.n, self.only_a, self.only_b)


@dataclass(frozen=True)
class KappaResult:
    """Cohen's kappa and its ingredients. p_o and p_e are exact
    fractions; kappa/se/ci95 are None when chance agreement is 1
    (degenerate: every slot in a single agreed category)."""

    n: int
    p_o: Fraction
    p_e: Fraction
    kappa: float | None
    se: float | None
    ci95: tuple[float, float] | None
    degenerate: bool = False

    @property
    def kappa_exact(self) -> Fraction | None:
        if self.degenerate:
            return None
        return (self.p_o - self.p_e) / (1 - self.p_e)


def _se_large_sample(p_o: Fraction, p_e: Fraction, n: int) -> float:
    return math.sqrt(float(p_o) * (1 - float(p_o)) / (n * (1 - float(p_e)) ** 2))


#: Standard-error formulas for the CI, keyed by name, so an alternative
#: construction can be swapped in and compared.
SE_METHODS: Mapping[str, Callable[[Fraction, Fraction, int], float]] = {
    "large_sample": _se_large_sample,
}


def build_contingency(
    a: Iterable[AnnotationRecord],
    b: Iterable[AnnotationRecord],
    categories: Sequence[EtymologyCode] = ALL_CATEGORIES,
) -> ContingencyMatrix:
    """Cross-tabulate the etymology letters of two annotators' records.

    Each side is resolved newest-wins per slot first. Only slots both
    annotators labeled are counted; slots labeled by one side are
    tallied into only_a / only_b. A zero-overlap result is returned
    flagged (n == 0), not raised.
    """
    cats = tuple(categories)
    index = {c: i for i, c in enumerate(cats)}

    def effective(records: Iterable[AnnotationRecord]) -> dict[tuple, EtymologyCode]:
        out = {}
        for key, record in resolve_newest(records).items():
            _, entry_id, language, lexeme_index = key
            out[(entry_id, language, lexeme_index)] = record.parsed_code().etymology
        return out

    labels_a = effective(a)
    labels_b = effective(b)
    shared = labels_a.keys() & labels_b.keys()
    k = len(cats)
    cells = [[0] * k for _ in range(k)]
    for slot in shared:
        ca, cb = labels_a[slot], labels_b[slot]
        if ca not in index or cb not in index:
            missing = ca if ca not in index else cb
            raise ValueError(f"label {missing.value!r} not in the given categories")
        cells[index[cb]][index[ca]] += 1  # row = annotator 2, column = annotator 1
    return ContingencyMatrix(
        cats,
        tuple(tuple(row) for row in cells),
        len(shared),
        only_a=len(labels_a.keys() - shared),
        only_b=len(labels_b.keys() - shared),
    )


def cohen_kappa(m: ContingencyMatrix, se_method: str = "large_sample") -> KappaResult:
    """kappa = (p_o - p_e) / (1 - p_e) with p_o = trace/n and
    p_e = sum_i row_i * col_i / n^2; the 95% CI is kappa +/- 1.96 * se,
    clamped to [-1, 1]."""
    if m.empty:
        raise EmptyIntersection("no shared slots: contingency matrix is empty")
    n = m.n
    p_o = Fraction(m.trace, n)
    p_e = Fraction(
        sum(r * c for r, c in zip(m.row_totals(), m.col_totals())), n * n
    )
    if p_e == 1:
        return KappaResult(n, p_o, p_e, None, None, None, degenerate=True)
    kappa = (p_o - p_e) / (1 - p_e)
    se = SE_METHODS[se_method](p_o, p_e, n)
    kappa_f = float(kappa)
    lo = max(-1.0, kappa_f - 1.96 * se)
    hi = min(1.0, kappa_f + 1.96 * se)
    return KappaResult(n, p_o, p_e, kappa_f, se, (lo, hi))


def restricted_kappa(
    a: Iterable[AnnotationRecord],
    b: Iterable[AnnotationRecord],
    excluded: Iterable[EtymologyCode] = RESTRICTED_EXCLUDED_CODES,
    categories: Sequence[EtymologyCode] = ALL_CATEGORIES,
    se_method: str = "large_sample",
) -> KappaResult:
    """Kappa over only the slots where neither annotator used an
    excluded code (by default Q and the multi-language exceptions)."""
    matrix = build_contingency(a, b, categories).restrict(excluded)
    if matrix.empty:
        raise EmptyIntersection("every shared slot used an excluded code")
    return cohen_kappa(matrix, se_method)


# --- partition comparison -------------------------------------------------


@dataclass(frozen=True)
class PairConfusion:
    """Unordered slot pairs classified by co-block status in a reference
    partition p and a candidate partition q."""

    together_both: int   # co-blocked in p and in q
    only_p: int          # co-blocked in p, split in q
    only_q: int          # split in p, co-blocked in q
    apart_both: int      # split in both
    n_slots: int

    @property
    def total_pairs(self) -> int:
        return self.together_both + self.only_p + self.only_q + self.apart_both


@dataclass(frozen=True)
class PartitionAgreement:
    pair_precision: float
    pair_recall: float
    pair_f1: float
    rand_index: float
    adjusted_rand: float
    n_slots: int
    n_pairs: int


def _comb2(x: int) -> int:
    return x * (x - 1) // 2


def pair_confusion(p: CognatePartition, q: CognatePartition) -> PairConfusion:
    """Count pair fates from block-intersection sizes (not by
    enumerating pairs, so it stays fast on large entries)."""
    slots_p, slots_q = p.slots(), q.slots()
    if slots_p != slots_q:
        raise SlotSetMismatch(
            f"partitions cover different slots ({len(slots_p)} vs {len(slots_q)})"
        )
    n = len(slots_p)
    together_p = sum(_comb2(len(b)) for b in p.blocks)
    together_q = sum(_comb2(len(b)) for b in q.blocks)
    together_both = 0
    for bp in p.blocks:
        for bq in q.blocks:
            together_both += _comb2(len(bp & bq))
    total = _comb2(n)
    only_p = together_p - together_both
    only_q = together_q - together_both
    apart_both = total - together_both - only_p - only_q
    return PairConfusion(together_both, only_p, only_q, apart_both, n)


def _metrics_from_confusion(c: PairConfusion) -> PartitionAgreement:
    a, b, cq, d = c.together_both, c.only_p, c.only_q, c.apart_both
    equal = b == 0 and cq == 0
    # Degenerate denominators (no co-blocked pairs on one side, or no
    # pairs at all) resolve by equality: 1 when the partitions agree
    # exactly, else 0.
    precision = a / (a + cq) if a + cq else (1.0 if equal else 0.0)
    recall = a / (a + b) if a + b else (1.0 if equal else 0.0)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    total = c.total_pairs
    rand = (a + d) / total if total else 1.0
    if equal:
        ari = 1.0
    else:
        ari = 2 * (a * d - b * cq) / ((a + b) * (b + d) + (a + cq) * (cq + d))
    return PartitionAgreement(
        pair_precision=precision,
        pair_recall=recall,
        pair_f1=f1,
        rand_index=rand,
        adjusted_rand=ari,
        n_slots=c.n_slots,
        n_pairs=total,
    )


def partition_agreement(p: CognatePartition, q: CognatePartition) -> PartitionAgreement:
    """Pair-counting agreement between a reference partition p and a
    candidate q, over all unordered slot pairs. Precision is relative to
    q's co-blocked pairs, recall to p's."""
    return _metrics_from_confusion(pair_confusion(p, q))


def aggregate_partition_agreement(
    confusions: Iterable[PairConfusion],
) -> PartitionAgreement:
    """Micro-average: pool the pair counts of many entries, then compute
    the metrics once from the pooled counts."""
    a = b = c = d = n = 0
    for conf in confusions:
        a += conf.together_both
        b += conf.only_p
        c += conf.only_q
        d += conf.apart_both
        n += conf.n_slots
    tot = PairConfusion(a, b, c, d, n)
    return _metrics_from_confusion(tot)


def partition_on_slots(annotation: EntryAnnotation, slots: Iterable[Slot]) -> CognatePartition:
    """The cognate partition an annotation induces on a subset of its slots."""
    groups: dict[int, set[Slot]] = {}
    for slot in slots:
        groups.setdefault(annotation.codes[slot].cognate_class, set()).add(slot)
    return CognatePartition.from_blocks(groups.values())


def cognate_agreement_from_records(
    records_a: Sequence[AnnotationRecord],
    records_b: Sequence[AnnotationRecord],
    known_entry_ids: Iterable[str] | None = None,
) -> PartitionAgreement | None:
    """Micro-averaged cognate-class agreement between two annotators'
    record sets, over entries where they share at least two slots.
    Returns None when no entry is comparable."""
    if not records_a or not records_b:
        return None
    name_a = records_a[0].annotator_id
    name_b = records_b[0].annotator_id
    known = set(known_entry_ids) if known_entry_ids is not None else None
    shared_entries = sorted(
        {r.entry_id for r in records_a} & {r.entry_id for r in records_b}
    )
    confusions = []
    for entry_id in shared_entries:
        if known is not None and entry_id not in known:
            continue
        ann_a = to_entry_annotation(records_a, entry_id, name_a)
        ann_b = to_entry_annotation(records_b, entry_id, name_b)
        shared = set(ann_a.codes) & set(ann_b.codes)
        if len(shared) < 2:
            continue
        confusions.append(
            pair_confusion(
                partition_on_slots(ann_a, shared), partition_on_slots(ann_b, shared)
            )
        )
    if not confusions:
        return None
    return aggregate_partition_agreement(confusions)
