# How a full annotation row turns into a cognate partition, why class
# numbering is canonicalized, and what the validator accepts vs. flags.

from turklex import Language, canonicalize, partition_of, validate_entry_annotation
from turklex.codec import to_entry_annotation
from turklex.fixtures import example_entries, examples_gold_records

entries = {e.entry_id: e for e in example_entries()}
gold = examples_gold_records()

# The chair entry carries the full documented annotation row.
chair = entries["chair"]
annotation = to_entry_annotation(gold, "chair", "gold")
row = " ".join(annotation.codes[(lang, 0)].text for lang in Language)
print("chair codes:", row)

# Equal digits mean "cognate with each other"; the partition forgets labels.
partition = partition_of(annotation)
for block in partition.sorted_blocks():
    members = [f"{chair.lexeme_at(slot).form} ({slot[0].code})" for slot in block]
    print("  block:", ", ".join(members))

# A relabeled annotation (same grouping, different digits) canonicalizes
# back to the documented numbering, so comparisons never depend on label
# choice.
from turklex import EntryAnnotation, parse_code

relabeled = EntryAnnotation(
    "chair",
    "someone",
    {
        slot: parse_code(f"{5 - code.cognate_class}{code.etymology.value}")
        for slot, code in annotation.codes.items()
    },
)
print("relabeled == documented after canonicalize:",
      canonicalize(relabeled).codes == annotation.codes)
print("partitions equal:", partition_of(relabeled) == partition)

# The validator: errors reject, warnings inform. A block mixing etymology
# letters (ballet: Russian everywhere, French in Turkish) is legitimate
# and stays a warning.
ballet = entries["ballet"]
ballet_annotation = to_entry_annotation(gold, "ballet", "gold")
for diagnostic in validate_entry_annotation(ballet, ballet_annotation):
    print("ballet:", diagnostic.render())
