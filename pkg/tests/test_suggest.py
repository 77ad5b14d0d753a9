import random
from functools import lru_cache
from itertools import combinations

import pytest

from turklex import fixtures
from turklex.model import CognatePartition, Language, Lexeme
from turklex.suggest import (
    MissingGold,
    SimilarityConfig,
    evaluate_suggestions,
    fold_text,
    lcs_length,
    levenshtein,
    normalize_form,
    propose_partition,
    proposal_classes,
    restrict_partition,
    similarity,
    sweep,
)


def brute_levenshtein(a, b):
    """Plain recursive definition with memoization; the independent oracle."""

    @lru_cache(maxsize=None)
    def dist(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        cost = 0 if a[i - 1] == b[j - 1] else 1
        return min(dist(i - 1, j) + 1, dist(i, j - 1) + 1, dist(i - 1, j - 1) + cost)

    return dist(len(a), len(b))


def brute_lcs(a, b):
    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == 0 or j == 0:
            return 0
        if a[i - 1] == b[j - 1]:
            return rec(i - 1, j - 1) + 1
        return max(rec(i - 1, j), rec(i, j - 1))

    return rec(len(a), len(b))


# --- folding -----------------------------------------------------------------


def test_fold_documented_examples():
    assert fold_text("(tiri)") == "tiri"
    assert fold_text("canlı") == "canli"
    assert fold_text("peýda") == "peyda"
    assert fold_text("türüü") == "turuu"
    assert fold_text("çörekçi") == "corekci"
    assert fold_text("yök mashinası") == "yok mashinasi"
    assert fold_text("oʻzbek") == "ozbek"


def test_fold_idempotent():
    samples = [
        "canlı", "tiri", "türüü", "janlı", "diri", "tirik",
        "stul", "orındıq", "sandalye", "ýolbaşçy", "gök gürlemesi",
        "nawbayshı", "peýda", "ə", "æon", "škola",
    ]
    for text in samples:
        once = fold_text(text)
        assert fold_text(once) == once
        assert all(ch in "abcdefghijklmnopqrstuvwxyz0123456789 -" for ch in once)


def test_normalize_form_tags_source():
    slot = (Language.KAZAKH, 0)
    normalized = normalize_form(Lexeme("tiri"), slot)
    assert normalized.text == "tiri" and normalized.source == slot


def test_similarity_accepts_normalized_forms():
    a = normalize_form(Lexeme("bir"), (Language.TURKISH, 0))
    b = normalize_form(Lexeme("ber"), (Language.TATAR, 0))
    assert similarity(a, b) == similarity("bir", "ber")


# --- string metrics ------------------------------------------------------------


def test_similarity_documented_values():
    assert similarity("bir", "bir") == 1.0
    assert similarity("bir", "ber") == pytest.approx(1 - 1 / 3)
    assert similarity("kitap", "kitob") == pytest.approx(0.6)
    assert similarity("", "") == 1.0
    assert similarity("", "abc") == 0.0


def test_similarity_symmetric_and_reflexive_randomized():
    rng = random.Random(23)
    alphabet = "abcdr"
    for _ in range(500):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 6)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 6)))
        for metric in ("normalized-levenshtein", "lcsr"):
            assert similarity(a, b, metric) == similarity(b, a, metric)
            assert similarity(a, a, metric) == 1.0
            assert 0.0 <= similarity(a, b, metric) <= 1.0


def test_lcsr_values():
    assert similarity("balet", "bale", "lcsr") == pytest.approx(4 / 5)
    assert lcs_length("kitap", "kitob") == 3  # k i t


def test_levenshtein_matches_brute_force_randomized():
    rng = random.Random(29)
    alphabet = "abkpz"
    for _ in range(1000):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 7)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 7)))
        assert levenshtein(a, b) == brute_levenshtein(a, b)
        assert lcs_length(a, b) == brute_lcs(a, b)


def test_levenshtein_triangle_inequality_randomized():
    rng = random.Random(31)
    alphabet = "abk"
    for _ in range(1000):
        strings = [
            "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 5)))
            for _ in range(3)
        ]
        a, b, c = strings
        assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


def test_unknown_metric_rejected():
    with pytest.raises(ValueError):
        similarity("a", "b", "soundex")
    with pytest.raises(ValueError):
        SimilarityConfig(0.6, "soundex")
    with pytest.raises(ValueError):
        SimilarityConfig(1.5)


# --- proposals -----------------------------------------------------------------


def entry_by_id(entry_id):
    return {e.entry_id: e for e in fixtures.example_entries()}[entry_id]


def blocks_as_codes(partition):
    return sorted(
        sorted(f"{lang.code}:{i}" for lang, i in block) for block in partition.blocks
    )


def test_one_entry_clusters_into_single_block():
    partition = propose_partition(entry_by_id("one"), SimilarityConfig(0.6))
    assert len(partition) == 1


def test_ballet_entry_clusters_into_single_block():
    partition = propose_partition(entry_by_id("ballet"), SimilarityConfig(0.6))
    assert len(partition) == 1


def test_alive_proposal_frozen_regression():
    # At tau=0.6 the Kyrgyz form ends up alone: 'turuu' is too far from
    # 'tiri'/'tirik' by raw edit distance. Computed once with the
    # brute-force oracle and frozen.
    partition = propose_partition(entry_by_id("alive"), SimilarityConfig(0.6))
    assert blocks_as_codes(partition) == [
        ["az:0", "tr:0", "tt:0"],
        ["kk:0", "tk:0", "ug:0", "uz:0"],
        ["ky:0"],
    ]
    gold = fixtures.ALIVE_PARTITION
    from turklex.agreement import partition_agreement

    result = partition_agreement(gold, partition)
    assert result.pair_precision == 1.0
    assert result.pair_recall == pytest.approx(9 / 13)
    assert result.pair_f1 == pytest.approx(9 / 11)
    assert result.rand_index == pytest.approx(6 / 7)
    assert result.adjusted_rand == pytest.approx(135 / 191)


def test_chair_proposal_matches_gold_partition():
    partition = propose_partition(entry_by_id("chair"), SimilarityConfig(0.6))
    assert partition == fixtures.gold_partitions()["chair"]


def test_tau_one_groups_identical_forms_only():
    partition = propose_partition(entry_by_id("one"), SimilarityConfig(1.0))
    # bir x7 fold to the same string; ber stays alone
    assert blocks_as_codes(partition) == [
        ["az:0", "kk:0", "ky:0", "tk:0", "tr:0", "ug:0", "uz:0"],
        ["tt:0"],
    ]


def test_proposal_classes_are_canonical():
    partition = propose_partition(entry_by_id("chair"), SimilarityConfig(0.6))
    classes = proposal_classes(partition)
    assert classes[(Language.AZERBAIJANI, 0)] == 1
    assert classes[(Language.KAZAKH, 0)] == 2
    assert classes[(Language.TURKISH, 0)] == 3
    assert classes[(Language.UZBEK, 0)] == 4
    assert sorted(set(classes.values())) == [1, 2, 3, 4]


def test_proposal_matches_transitive_closure_oracle_randomized():
    # Independent route: boolean similarity matrix + repeated closure.
    rng = random.Random(37)
    alphabet = "abkz"
    from turklex.model import DictionaryEntry

    for _ in range(200):
        langs = list(Language)[: rng.randint(2, 8)]
        translations = {
            lang: (Lexeme("".join(rng.choice(alphabet) for _ in range(rng.randint(1, 4)))),)
            for lang in langs
        }
        entry = DictionaryEntry("r", "r", translations)
        tau = rng.choice([0.3, 0.5, 0.6, 0.8, 1.0])
        partition = propose_partition(entry, SimilarityConfig(tau))

        slots = entry.slots()
        reach = {
            s: {
                t
                for t in slots
                if similarity(
                    fold_text(entry.lexeme_at(s).form), fold_text(entry.lexeme_at(t).form)
                )
                >= tau
            }
            for s in slots
        }
        changed = True
        while changed:
            changed = False
            for s in slots:
                extra = set()
                for t in reach[s]:
                    extra |= reach[t]
                if not extra <= reach[s]:
                    reach[s] |= extra
                    changed = True
        oracle = CognatePartition.from_blocks({frozenset(v) for v in reach.values()})
        assert partition == oracle


def test_tau_sweep_is_monotonically_refining():
    taus = [i / 20 for i in range(21)]
    for entry in fixtures.example_entries() + fixtures.etymology_case_entries():
        previous = None
        for tau in taus:
            current = propose_partition(entry, SimilarityConfig(tau))
            if previous is not None:
                for block in current.blocks:
                    assert any(block <= coarse for coarse in previous.blocks)
            previous = current


# --- evaluation ------------------------------------------------------------------


def test_self_evaluation_is_perfect():
    entries = fixtures.example_entries()
    config = SimilarityConfig(0.6)
    gold = {e.entry_id: propose_partition(e, config) for e in entries}
    report = evaluate_suggestions(entries, gold, config)
    assert report.aggregate.pair_f1 == 1.0
    assert all(ev.agreement.adjusted_rand == 1.0 for ev in report.per_entry)


def test_empty_entry_set_evaluates_without_division():
    report = evaluate_suggestions([], {}, SimilarityConfig(0.6))
    assert report.per_entry == ()
    assert report.aggregate.n_pairs == 0
    assert report.aggregate.pair_f1 == 1.0  # vacuously equal


def test_missing_gold_raises():
    with pytest.raises(MissingGold):
        evaluate_suggestions(fixtures.example_entries(), {}, SimilarityConfig(0.6))


def test_fixture_evaluation_frozen_aggregate():
    # alive + one + book + ballet + benefit at tau=0.6: pooled pair
    # counts computed once against the enumeration oracle and frozen.
    entries = [e for e in fixtures.example_entries() if e.entry_id != "chair"]
    gold = {k: v for k, v in fixtures.gold_partitions().items() if k != "chair"}
    report = evaluate_suggestions(entries, gold, SimilarityConfig(0.6))
    agg = report.aggregate
    assert agg.pair_precision == 1.0
    assert agg.pair_recall == pytest.approx(121 / 125)
    assert agg.pair_f1 == pytest.approx(121 / 123)
    assert agg.rand_index == pytest.approx(34 / 35)
    assert agg.adjusted_rand == pytest.approx(363 / 419)
    assert agg.n_pairs == 140
    per = {ev.entry_id: ev.agreement for ev in report.per_entry}
    assert per["one"].pair_f1 == 1.0
    assert per["alive"].pair_recall == pytest.approx(9 / 13)


def test_sweep_runs_each_tau():
    entries = [e for e in fixtures.example_entries() if e.entry_id == "one"]
    gold = {"one": fixtures.gold_partitions()["one"]}
    reports = sweep(entries, gold, [0.4, 0.6, 0.9])
    assert [r.tau for r in reports] == [0.4, 0.6, 0.9]
    assert reports[0].aggregate.pair_recall >= reports[2].aggregate.pair_recall


def test_restrict_partition_drops_foreign_slots():
    partition = fixtures.gold_partitions()["chair"]
    keep = {(Language.AZERBAIJANI, 0), (Language.TURKMEN, 0), (Language.TURKISH, 0)}
    restricted = restrict_partition(partition, keep)
    assert restricted.slots() == frozenset(keep)
    assert len(restricted) == 2
