# Walk through the data model: eight-way dictionary entries, the
# transliteration convention, and the two-character annotation codes.

from turklex import Language, Script, parse_code
from turklex.fixtures import example_entries

entries = {e.entry_id: e for e in example_entries()}

# One entry = one English gloss + translations in all eight languages.
alive = entries["alive"]
print(f"gloss: {alive.gloss!r}")
for lang in Language:
    for lexeme in alive.translations[lang]:
        marker = " (dictionary transliteration)" if lexeme.script is Script.TRANSLITERATION else ""
        print(f"  {lang.display_name:<12} {lexeme.form}{marker}")

# Codes are one cognate-class digit plus one etymology letter.
for text in ["1R", "2T", "3A", "4A"]:
    code = parse_code(text)
    print(f"{text} -> class {code.cognate_class}, origin {code.etymology.name}")

# Anything else is rejected with a specific reason.
for bad in ["0T", "9T", "1Z", "1r", "12T"]:
    try:
        parse_code(bad)
    except Exception as exc:
        print(f"{bad!r:6} rejected: {type(exc).__name__}: {exc}")
