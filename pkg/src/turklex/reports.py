"""Report rendering shared by the CLI and the service.

Every report exists in two forms: a plain-text table laid out like the
published tables (annotator 1 horizontal, annotator 2 vertical) for
desk-checking, and a flat record with the same key names as the result
fields for machine consumption.
"""

from __future__ import annotations

from fractions import Fraction

from . import fixtures
from .agreement import ContingencyMatrix, KappaResult, PartitionAgreement


def _fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def pilot_notes(matrix: ContingencyMatrix, kappa: KappaResult | None) -> list[str]:
    """Discrepancy note attached whenever the counts are exactly the
    bundled pilot table (full or restricted): the pilot reported kappa
    figures that do not follow from its own counts."""
    if not fixtures.matches_pilot_counts(matrix):
        return []
    restricted = len(matrix.categories) != len(fixtures.PILOT_CATEGORIES)
    reported = (
        fixtures.REPORTED_PILOT_RESTRICTED_KAPPA
        if restricted
        else fixtures.REPORTED_PILOT_KAPPA
    )
    computed = "undefined" if kappa is None or kappa.kappa is None else f"{kappa.kappa:.4f}"
    note = (
        f"these counts are the bundled two-annotator pilot table"
        f"{' (restricted)' if restricted else ''}: the pilot reported "
        f"kappa = {reported:.4f}"
    )
    if not restricted:
        lo, hi = fixtures.REPORTED_PILOT_KAPPA_CI
        note += f" (95% CI {lo:.4f} to {hi:.4f})"
    note += (
        f", which is not reproducible from the counts under the standard "
        f"estimator (computed kappa = {computed})"
    )
    return [note]


def matrix_record(matrix: ContingencyMatrix) -> dict:
    return {
        "categories": [c.value for c in matrix.categories],
        "counts": [list(row) for row in matrix.counts],
        "n": matrix.n,
        "only_a": matrix.only_a,
        "only_b": matrix.only_b,
    }


def kappa_record(result: KappaResult) -> dict:
    return {
        "n": result.n,
        "p_o": float(result.p_o),
        "p_o_exact": _fraction_str(result.p_o),
        "p_e": float(result.p_e),
        "p_e_exact": _fraction_str(result.p_e),
        "kappa": result.kappa,
        "se": result.se,
        "ci95": list(result.ci95) if result.ci95 else None,
        "degenerate": result.degenerate,
    }


def partition_agreement_record(agreement: PartitionAgreement) -> dict:
    return {
        "pair_precision": agreement.pair_precision,
        "pair_recall": agreement.pair_recall,
        "pair_f1": agreement.pair_f1,
        "rand_index": agreement.rand_index,
        "adjusted_rand": agreement.adjusted_rand,
        "n_slots": agreement.n_slots,
        "n_pairs": agreement.n_pairs,
    }


def render_matrix(matrix: ContingencyMatrix) -> str:
    """Counts table, annotator 1 across, annotator 2 down."""
    labels = [c.value for c in matrix.categories]
    width = max([3] + [len(str(c)) for row in matrix.counts for c in row]) + 1
    lines = ["ann2\\ann1" + "".join(f"{l:>{width}}" for l in labels)]
    for label, row in zip(labels, matrix.counts):
        lines.append(f"{label:>9}" + "".join(f"{c:>{width}}" for c in row))
    lines.append(f"n = {matrix.n} shared slots")
    lines.append(
        f"unmatched: {matrix.only_a} slot(s) by annotator 1 only, "
        f"{matrix.only_b} by annotator 2 only"
    )
    return "\n".join(lines)


def render_kappa(result: KappaResult) -> str:
    lines = [
        f"observed agreement p_o = {_fraction_str(result.p_o)} = {float(result.p_o):.4f}",
        f"chance agreement  p_e = {_fraction_str(result.p_e)} = {float(result.p_e):.4f}",
    ]
    if result.degenerate:
        lines.append("kappa undefined: chance agreement is 1 (single used category)")
    else:
        assert result.kappa is not None and result.se is not None and result.ci95
        lo, hi = result.ci95
        lines.append(
            f"kappa = {result.kappa:.4f} (se {result.se:.4f}, "
            f"95% CI {lo:.4f} to {hi:.4f}, n = {result.n})"
        )
    return "\n".join(lines)


def render_partition_agreement(agreement: PartitionAgreement) -> str:
    return (
        f"cognate-class pairs: precision {agreement.pair_precision:.4f}, "
        f"recall {agreement.pair_recall:.4f}, f1 {agreement.pair_f1:.4f}, "
        f"rand {agreement.rand_index:.4f}, adjusted rand "
        f"{agreement.adjusted_rand:.4f} ({agreement.n_slots} slots, "
        f"{agreement.n_pairs} pairs)"
    )


def agreement_report_record(
    matrix: ContingencyMatrix,
    kappa: KappaResult | None,
    partition: PartitionAgreement | None,
    restricted: bool,
) -> dict:
    record = {
        "restricted": restricted,
        "matrix": matrix_record(matrix),
        "kappa": kappa_record(kappa) if kappa else None,
        "partition_agreement": (
            partition_agreement_record(partition) if partition else None
        ),
        "empty_intersection": matrix.empty,
        "notes": pilot_notes(matrix, kappa),
    }
    return record


def render_agreement_report(
    matrix: ContingencyMatrix,
    kappa: KappaResult | None,
    partition: PartitionAgreement | None,
    restricted: bool,
) -> str:
    sections = []
    title = "agreement report (restricted)" if restricted else "agreement report"
    sections.append(title)
    sections.append(render_matrix(matrix))
    if matrix.empty:
        sections.append("no shared slots: statistics unavailable")
    if kappa is not None:
        sections.append(render_kappa(kappa))
    if partition is not None:
        sections.append(render_partition_agreement(partition))
    for note in pilot_notes(matrix, kappa):
        sections.append(f"note: {note}")
    return "\n".join(sections) + "\n"
