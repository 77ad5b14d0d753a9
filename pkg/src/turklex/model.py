"""Core domain types for eight-way Turkic dictionary annotation.

An annotation is a two-character code per word: a cognate-class digit
(1-8, equal digits within an entry mean "these words are cognate") and
an etymology letter. All values here are immutable after construction
and all operations are pure functions.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping


class Language(enum.Enum):
    """The eight languages, in the dictionary's fixed column order."""

    AZERBAIJANI = "az"
    KAZAKH = "kk"
    KYRGYZ = "ky"
    TATAR = "tt"
    TURKISH = "tr"
    TURKMEN = "tk"
    UYGHUR = "ug"
    UZBEK = "uz"

    @property
    def code(self) -> str:
        return self.value

    @property
    def display_name(self) -> str:
        return self.name.capitalize()

    @property
    def order(self) -> int:
        """Position in the canonical column order (0-based)."""
        return _LANGUAGE_ORDER[self]

    @classmethod
    def canonical(cls) -> tuple["Language", ...]:
        return tuple(cls)

    @classmethod
    def parse(cls, text: str) -> "Language":
        """Accept either the short code ("az") or the English name ("Azerbaijani")."""
        lang = _LANGUAGE_LOOKUP.get(text)
        if lang is None:
            raise UnknownLanguage(f"unknown language {text!r}")
        return lang


_LANGUAGE_ORDER = {lang: i for i, lang in enumerate(Language)}
_LANGUAGE_LOOKUP = {lang.value: lang for lang in Language}
_LANGUAGE_LOOKUP.update({lang.display_name: lang for lang in Language})


class UnknownLanguage(ValueError):
    """Language name or code not among the eight."""


class Script(enum.Enum):
    """Provenance of a surface form in the source dictionary.

    Languages with an official Latin script appear as-is; the others
    appear in the dictionary's own romanization, which the source marks
    with parentheses.
    """

    OFFICIAL_LATIN = "official-latin"
    TRANSLITERATION = "transliteration"


def _nfc(text: str) -> str:
    # One canonical composition form at ingestion so equal-looking
    # strings compare equal.
    return unicodedata.normalize("NFC", text)


def wholly_parenthesized(text: str) -> bool:
    """True iff the text is one balanced group: "(...)" with the outer
    parentheses matching each other."""
    if len(text) < 2 or text[0] != "(" or text[-1] != ")":
        return False
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return i == len(text) - 1
    return False


def _parens_balanced(text: str) -> bool:
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


@dataclass(frozen=True)
class Lexeme:
    """One surface form of a translation."""

    form: str
    script: Script = Script.OFFICIAL_LATIN

    def __post_init__(self) -> None:
        form = _nfc(self.form)
        if not form:
            raise ValueError("lexeme form must be non-empty")
        if form != form.strip():
            raise ValueError(f"lexeme form has surrounding whitespace: {form!r}")
        for ch in ";\t\n\r":
            if ch in form:
                raise ValueError(f"lexeme form may not contain {ch!r}: {form!r}")
        if not _parens_balanced(form):
            raise ValueError(f"unbalanced parentheses in form: {form!r}")
        if wholly_parenthesized(form):
            # Parentheses around a whole form belong to the file format
            # (transliteration marker), never to the form itself.
            raise ValueError(f"form is wholly parenthesized: {form!r}")
        object.__setattr__(self, "form", form)


Slot = tuple[Language, int]
"""A lexeme position inside an entry: (language, 0-based index)."""


def slot_sort_key(slot: Slot) -> tuple[int, int]:
    lang, index = slot
    return (lang.order, index)


@dataclass(frozen=True)
class DictionaryEntry:
    """One English gloss and its translations in the eight languages.

    Every language is present in ``translations``; a language with no
    listed translation maps to an empty tuple. Lexeme order inside a
    language preserves the source (entries may carry several
    translations for the same gloss).
    """

    entry_id: str
    gloss: str
    translations: Mapping[Language, tuple[Lexeme, ...]]

    def __post_init__(self) -> None:
        if not self.entry_id or self.entry_id != self.entry_id.strip():
            raise ValueError(f"bad entry_id: {self.entry_id!r}")
        if any(ch in self.entry_id for ch in "\t\n\r"):
            raise ValueError(f"bad entry_id: {self.entry_id!r}")
        gloss = _nfc(self.gloss)
        if "\t" in gloss or "\n" in gloss:
            raise ValueError(f"gloss may not contain tabs/newlines: {gloss!r}")
        filled = {lang: tuple(self.translations.get(lang, ())) for lang in Language}
        extra = set(self.translations) - set(Language)
        if extra:
            raise ValueError(f"unknown translation keys: {extra!r}")
        if not any(filled.values()):
            raise ValueError(f"entry {self.entry_id!r} has no lexemes at all")
        object.__setattr__(self, "gloss", gloss)
        object.__setattr__(self, "translations", MappingProxyType(filled))

    def lexemes(self, language: Language) -> tuple[Lexeme, ...]:
        return self.translations[language]

    def slots(self) -> tuple[Slot, ...]:
        """All lexeme slots in canonical order (language, then index)."""
        out: list[Slot] = []
        for lang in Language:
            out.extend((lang, i) for i in range(len(self.translations[lang])))
        return tuple(out)

    def has_slot(self, slot: Slot) -> bool:
        lang, index = slot
        return 0 <= index < len(self.translations[lang])

    def lexeme_at(self, slot: Slot) -> Lexeme:
        lang, index = slot
        return self.translations[lang][index]

    @property
    def slot_count(self) -> int:
        return sum(len(v) for v in self.translations.values())


class EtymologyCode(enum.Enum):
    """Etymology letter: conjectured origin of a word.

    T/A/P/R/F/E/I/G/C name a single origin, Q marks an unknown or
    inconclusive origin, and X/V/N are the multi-language exceptions for
    words built from material of more than one origin.
    """

    TURKIC = "T"
    ARABIC = "A"
    PERSIAN = "P"
    RUSSIAN = "R"
    FRENCH = "F"
    ENGLISH = "E"
    ITALIAN = "I"
    GREEK = "G"
    CHINESE = "C"
    INCONCLUSIVE = "Q"
    MIXED_COMPOUND = "X"          # compound whose constituents differ in origin
    BORROWED_BASE_VERB = "V"      # non-Turkic base + Turkic auxiliary verb
    BORROWED_BASE_NOMINAL = "N"   # non-Turkic base + Turkic affixes

    @property
    def letter(self) -> str:
        return self.value


SINGLE_ORIGIN_CODES = frozenset(
    {
        EtymologyCode.TURKIC,
        EtymologyCode.ARABIC,
        EtymologyCode.PERSIAN,
        EtymologyCode.RUSSIAN,
        EtymologyCode.FRENCH,
        EtymologyCode.ENGLISH,
        EtymologyCode.ITALIAN,
        EtymologyCode.GREEK,
        EtymologyCode.CHINESE,
    }
)
EXCEPTION_CODES = frozenset(
    {
        EtymologyCode.MIXED_COMPOUND,
        EtymologyCode.BORROWED_BASE_VERB,
        EtymologyCode.BORROWED_BASE_NOMINAL,
    }
)
# Codes dropped from the "restricted" agreement statistic: inconclusive
# origin plus the multi-language exceptions.
RESTRICTED_EXCLUDED_CODES = frozenset({EtymologyCode.INCONCLUSIVE}) | EXCEPTION_CODES

MIN_COGNATE_CLASS = 1
MAX_COGNATE_CLASS = 8

_CLASS_DIGITS = frozenset("12345678")
_ETYMOLOGY_LETTERS = {c.value: c for c in EtymologyCode}


class CodeError(ValueError):
    """A two-character annotation code failed to parse."""

    reason = "BadCode"


class BadLength(CodeError):
    reason = "BadLength"


class ClassOutOfRange(CodeError):
    reason = "ClassOutOfRange"


class UnknownEtymologyLetter(CodeError):
    reason = "UnknownEtymologyLetter"


@dataclass(frozen=True, order=True)
class AnnotationCode:
    """A parsed two-character code, e.g. "1R" = cognate class 1, Russian."""

    cognate_class: int
    etymology: EtymologyCode = field(compare=False)

    def __post_init__(self) -> None:
        if not (MIN_COGNATE_CLASS <= self.cognate_class <= MAX_COGNATE_CLASS):
            raise ClassOutOfRange(f"cognate class out of range: {self.cognate_class}")

    @property
    def text(self) -> str:
        return f"{self.cognate_class}{self.etymology.value}"

    def __str__(self) -> str:
        return self.text


def parse_code(text: str) -> AnnotationCode:
    """Parse a two-character annotation code.

    Exactly one digit 1-8 followed by one uppercase etymology letter;
    anything else is an error. Lowercase letters are rejected rather
    than folded, so files stay diff-stable.
    """
    if len(text) != 2:
        raise BadLength(f"annotation code must be exactly 2 characters: {text!r}")
    digit, letter = text[0], text[1]
    if digit not in _CLASS_DIGITS:
        raise ClassOutOfRange(
            f"first character must be a class digit 1-{MAX_COGNATE_CLASS}: {text!r}"
        )
    etym = _ETYMOLOGY_LETTERS.get(letter)
    if etym is None:
        raise UnknownEtymologyLetter(f"unknown etymology letter {letter!r} in {text!r}")
    return AnnotationCode(int(digit), etym)


class DanglingSlot(ValueError):
    """An annotation references a lexeme slot the entry does not have."""

    def __init__(self, entry_id: str, slot: Slot):
        lang, index = slot
        super().__init__(f"entry {entry_id!r} has no slot {lang.code}:{index}")
        self.entry_id = entry_id
        self.slot = slot


@dataclass(frozen=True)
class EntryAnnotation:
    """One annotator's codes for (some or all) slots of one entry."""

    entry_id: str
    annotator_id: str
    codes: Mapping[Slot, AnnotationCode]

    def __post_init__(self) -> None:
        ordered = dict(sorted(self.codes.items(), key=lambda kv: slot_sort_key(kv[0])))
        for (lang, index) in ordered:
            if not isinstance(lang, Language) or index < 0:
                raise ValueError(f"bad slot key: {(lang, index)!r}")
        object.__setattr__(self, "codes", MappingProxyType(ordered))

    def slots(self) -> tuple[Slot, ...]:
        return tuple(self.codes)

    def classes_used(self) -> tuple[int, ...]:
        return tuple(sorted({c.cognate_class for c in self.codes.values()}))


@dataclass(frozen=True)
class CognatePartition:
    """The cognate grouping an annotation induces: disjoint blocks of
    slots, labels forgotten. Singleton blocks are legal."""

    blocks: frozenset[frozenset[Slot]]

    def __post_init__(self) -> None:
        seen: set[Slot] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("empty block in partition")
            if seen & block:
                raise ValueError("partition blocks overlap")
            seen |= block
        object.__setattr__(self, "blocks", frozenset(frozenset(b) for b in self.blocks))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[Slot]]) -> "CognatePartition":
        return cls(frozenset(frozenset(b) for b in blocks))

    def slots(self) -> frozenset[Slot]:
        out: set[Slot] = set()
        for block in self.blocks:
            out |= block
        return frozenset(out)

    def sorted_blocks(self) -> list[list[Slot]]:
        """Blocks ordered by their first slot, slots in canonical order."""
        blocks = [sorted(b, key=slot_sort_key) for b in self.blocks]
        blocks.sort(key=lambda b: slot_sort_key(b[0]))
        return blocks

    def block_of(self, slot: Slot) -> frozenset[Slot]:
        for block in self.blocks:
            if slot in block:
                return block
        raise KeyError(slot)

    def __len__(self) -> int:
        return len(self.blocks)


def canonicalize(
    ann: EntryAnnotation, entry: DictionaryEntry | None = None
) -> EntryAnnotation:
    """Renumber cognate classes 1..k by first occurrence, scanning slots
    in canonical order. Etymology letters and the annotated slot set are
    untouched; the result is a fixed point of this function.

    With ``entry`` given, slots missing from the entry raise DanglingSlot.
    """
    if entry is not None:
        for slot in ann.codes:
            if not entry.has_slot(slot):
                raise DanglingSlot(ann.entry_id, slot)
    relabel: dict[int, int] = {}
    new_codes: dict[Slot, AnnotationCode] = {}
    for slot in sorted(ann.codes, key=slot_sort_key):
        code = ann.codes[slot]
        if code.cognate_class not in relabel:
            relabel[code.cognate_class] = len(relabel) + 1
        new_codes[slot] = AnnotationCode(relabel[code.cognate_class], code.etymology)
    return EntryAnnotation(ann.entry_id, ann.annotator_id, new_codes)


def partition_of(ann: EntryAnnotation) -> CognatePartition:
    """Equivalence classes of equal cognate digits. Relabelings of the
    same grouping map to the same partition."""
    groups: dict[int, set[Slot]] = {}
    for slot, code in ann.codes.items():
        groups.setdefault(code.cognate_class, set()).add(slot)
    return CognatePartition.from_blocks(groups.values())


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding. Errors reject; warnings inform."""

    severity: str  # "error" | "warning"
    code: str
    message: str
    entry_id: str | None = None
    language: Language | None = None
    lexeme_index: int | None = None
    line: int | None = None

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def render(self) -> str:
        where = []
        if self.entry_id:
            where.append(self.entry_id)
        if self.language is not None:
            slot = self.language.code
            if self.lexeme_index is not None:
                slot += f":{self.lexeme_index}"
            where.append(slot)
        loc = f" [{' '.join(where)}]" if where else ""
        return f"{self.severity}: {self.code}: {self.message}{loc}"


def validate_entry(entry: DictionaryEntry) -> list[Diagnostic]:
    """Entry-level checks independent of any annotation."""
    diags: list[Diagnostic] = []
    if entry.slot_count > MAX_COGNATE_CLASS:
        # Class digits stop at 8, so an entry with more lexeme slots than
        # that could need classes the code space cannot express.
        diags.append(
            Diagnostic(
                "error",
                "ClassSpaceExceeded",
                f"entry has {entry.slot_count} lexeme slots but cognate classes "
                f"stop at {MAX_COGNATE_CLASS}",
                entry_id=entry.entry_id,
            )
        )
    return diags


def validate_entry_annotation(
    entry: DictionaryEntry, ann: EntryAnnotation
) -> list[Diagnostic]:
    """All diagnostics for an annotation against its entry.

    Errors: wrong entry, dangling slots, class digits no entry of this
    size could need. Warnings: non-canonical class numbering, and a
    cognate block mixing etymology letters. The mixed-letter case is
    legitimate (the same word borrowed from different sources in
    different languages), so it is advisory only and never an error.
    """
    diags: list[Diagnostic] = []
    if ann.entry_id != entry.entry_id:
        diags.append(
            Diagnostic(
                "error",
                "EntryMismatch",
                f"annotation is for {ann.entry_id!r}, entry is {entry.entry_id!r}",
                entry_id=entry.entry_id,
            )
        )
        return diags

    diags.extend(validate_entry(entry))

    dangling = False
    for (lang, index), code in ann.codes.items():
        if not entry.has_slot((lang, index)):
            dangling = True
            diags.append(
                Diagnostic(
                    "error",
                    "DanglingSlot",
                    f"no lexeme at {lang.code}:{index}",
                    entry_id=entry.entry_id,
                    language=lang,
                    lexeme_index=index,
                )
            )
        if code.cognate_class > entry.slot_count:
            diags.append(
                Diagnostic(
                    "error",
                    "ClassExceedsSlots",
                    f"class {code.cognate_class} impossible: entry has only "
                    f"{entry.slot_count} lexeme slots",
                    entry_id=entry.entry_id,
                    language=lang,
                    lexeme_index=index,
                )
            )
    if dangling:
        return diags

    canonical = canonicalize(ann)
    if any(
        ann.codes[s].cognate_class != canonical.codes[s].cognate_class
        for s in ann.codes
    ):
        diags.append(
            Diagnostic(
                "warning",
                "NonCanonicalNumbering",
                "cognate classes are not numbered 1..k by first occurrence",
                entry_id=entry.entry_id,
            )
        )

    for block in partition_of(ann).sorted_blocks():
        letters = {ann.codes[slot].etymology for slot in block}
        if len(letters) > 1:
            lang, index = block[0]
            names = "/".join(sorted(l.value for l in letters))
            diags.append(
                Diagnostic(
                    "warning",
                    "MixedEtymologyBlock",
                    f"cognate block mixes etymology letters {names}",
                    entry_id=entry.entry_id,
                    language=lang,
                    lexeme_index=index,
                )
            )
    return diags
