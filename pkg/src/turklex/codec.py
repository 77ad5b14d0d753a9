"""File formats: the tab-separated dictionary and line-oriented annotation logs.

Both formats round-trip: parse(serialize(values)) == values, and
serialize(parse(text)) == text for files already in canonical form.
Every malformed input maps to an error or diagnostic carrying its line
number; parsing never crashes without one.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Mapping, Sequence

from .model import (
    AnnotationCode,
    CodeError,
    Diagnostic,
    DictionaryEntry,
    EntryAnnotation,
    Language,
    Lexeme,
    Script,
    Slot,
    UnknownLanguage,
    parse_code,
    wholly_parenthesized,
)

DATASET_COLUMNS = ("entry_id", "gloss") + tuple(l.code for l in Language)
DATASET_HEADER = "\t".join(DATASET_COLUMNS)
MULTI_SEPARATOR = "; "  # between several translations in one cell

LOG_KEYS = ("annotator_id", "entry_id", "language", "lexeme_index", "code", "timestamp")


class DatasetError(ValueError):
    """Dictionary file failed to parse; carries the 1-based line number."""

    code = "DatasetError"

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class BadHeader(DatasetError):
    code = "BadHeader"


class BadColumnCount(DatasetError):
    code = "BadColumnCount"


class UnbalancedParentheses(DatasetError):
    code = "UnbalancedParentheses"


class DuplicateEntryId(DatasetError):
    code = "DuplicateEntryId"


class BadCell(DatasetError):
    code = "BadCell"


def _parse_cell(cell: str, line: int) -> tuple[Lexeme, ...]:
    cell = cell.strip()
    if not cell:
        return ()
    lexemes = []
    for piece in cell.split(";"):
        piece = piece.strip()
        if not piece:
            raise BadCell("empty translation between separators", line)
        depth = 0
        for ch in piece:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth < 0:
                    raise UnbalancedParentheses(f"in {piece!r}", line)
        if depth != 0:
            raise UnbalancedParentheses(f"in {piece!r}", line)
        if wholly_parenthesized(piece):
            form, script = piece[1:-1].strip(), Script.TRANSLITERATION
        else:
            form, script = piece, Script.OFFICIAL_LATIN
        try:
            lexemes.append(Lexeme(form, script))
        except ValueError as exc:
            raise BadCell(str(exc), line) from exc
    return tuple(lexemes)


def _serialize_cell(lexemes: Sequence[Lexeme]) -> str:
    pieces = []
    for lex in lexemes:
        if lex.script is Script.TRANSLITERATION:
            pieces.append(f"({lex.form})")
        else:
            pieces.append(lex.form)
    return MULTI_SEPARATOR.join(pieces)


def scan_dataset(text: str) -> tuple[list[DictionaryEntry], list[Diagnostic]]:
    """Lenient parse: keep good rows, report bad ones with line numbers."""
    entries: list[DictionaryEntry] = []
    diags: list[Diagnostic] = []
    seen_ids: dict[str, int] = {}
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        diags.append(Diagnostic("error", "BadHeader", "empty file", line=1))
        return entries, diags
    if lines[0] != DATASET_HEADER:
        diags.append(
            Diagnostic(
                "error",
                "BadHeader",
                f"expected header {DATASET_HEADER!r}, got {lines[0]!r}",
                line=1,
            )
        )
        return entries, diags
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != len(DATASET_COLUMNS):
            diags.append(
                Diagnostic(
                    "error",
                    "BadColumnCount",
                    f"expected {len(DATASET_COLUMNS)} columns, got {len(cols)}",
                    line=lineno,
                )
            )
            continue
        entry_id, gloss = cols[0].strip(), cols[1]
        if entry_id in seen_ids:
            diags.append(
                Diagnostic(
                    "error",
                    "DuplicateEntryId",
                    f"entry_id {entry_id!r} already used on line {seen_ids[entry_id]}",
                    entry_id=entry_id,
                    line=lineno,
                )
            )
            continue
        try:
            translations = {
                lang: _parse_cell(cols[2 + i], lineno)
                for i, lang in enumerate(Language)
            }
            entry = DictionaryEntry(entry_id, gloss, translations)
        except DatasetError as exc:
            diags.append(
                Diagnostic("error", exc.code, exc.reason, entry_id=entry_id, line=lineno)
            )
            continue
        except ValueError as exc:
            diags.append(
                Diagnostic("error", "BadRow", str(exc), entry_id=entry_id, line=lineno)
            )
            continue
        seen_ids[entry_id] = lineno
        entries.append(entry)
    return entries, diags


def parse_dataset(text: str) -> list[DictionaryEntry]:
    """Strict parse: raise on the first malformed row."""
    entries, diags = scan_dataset(text)
    for diag in diags:
        line = diag.line or 0
        exc_type = {
            "BadHeader": BadHeader,
            "BadColumnCount": BadColumnCount,
            "UnbalancedParentheses": UnbalancedParentheses,
            "DuplicateEntryId": DuplicateEntryId,
        }.get(diag.code, BadCell)
        raise exc_type(diag.message, line)
    return entries


def serialize_dataset(entries: Iterable[DictionaryEntry]) -> str:
    lines = [DATASET_HEADER]
    for entry in entries:
        cells = [entry.entry_id, entry.gloss]
        cells.extend(_serialize_cell(entry.translations[lang]) for lang in Language)
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


_SLUG_RE = re.compile(r"[^a-z0-9]+")


def slugify(gloss: str) -> str:
    decomposed = unicodedata.normalize("NFKD", gloss.lower())
    ascii_only = decomposed.encode("ascii", "ignore").decode("ascii")
    slug = _SLUG_RE.sub("-", ascii_only).strip("-")
    return slug or "entry"


def assign_entry_ids(glosses: Sequence[str]) -> list[str]:
    """Stable ids: the slugified gloss, with -2, -3, ... appended to
    later duplicates. Re-importing an identical file yields identical ids."""
    counts: dict[str, int] = {}
    ids = []
    for gloss in glosses:
        slug = slugify(gloss)
        counts[slug] = counts.get(slug, 0) + 1
        ids.append(slug if counts[slug] == 1 else f"{slug}-{counts[slug]}")
    return ids


def import_table(text: str) -> list[DictionaryEntry]:
    """Build entries from a bare 9-column table (gloss + the eight
    language columns, same cell syntax, no ids), assigning slug ids."""
    lines = [l for l in text.split("\n") if l.strip()]
    expected = "\t".join(("gloss",) + tuple(l.code for l in Language))
    if not lines or lines[0] != expected:
        raise BadHeader(f"expected header {expected!r}", 1)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        cols = line.split("\t")
        if len(cols) != 9:
            raise BadColumnCount(f"expected 9 columns, got {len(cols)}", lineno)
        rows.append((lineno, cols[0], cols[1:]))
    ids = assign_entry_ids([gloss for _, gloss, _ in rows])
    entries = []
    for entry_id, (lineno, gloss, cells) in zip(ids, rows):
        translations = {
            lang: _parse_cell(cells[i], lineno) for i, lang in enumerate(Language)
        }
        entries.append(DictionaryEntry(entry_id, gloss, translations))
    return entries


class LogError(ValueError):
    """Annotation log line failed to parse; carries the 1-based line number."""

    code = "LogError"

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class MalformedLine(LogError):
    code = "MalformedLine"


class UnknownLogLanguage(LogError):
    code = "UnknownLanguage"


class BadCode(LogError):
    code = "BadCode"


def parse_timestamp(text: str) -> datetime:
    """RFC-3339 instant; 'Z' and numeric offsets both accepted, value
    normalized to UTC."""
    if not isinstance(text, str):
        raise ValueError(f"timestamp must be a string, got {text!r}")
    candidate = text.replace("Z", "+00:00") if text.endswith("Z") else text
    try:
        parsed = datetime.fromisoformat(candidate)
    except ValueError as exc:
        raise ValueError(f"bad timestamp {text!r}") from exc
    if parsed.tzinfo is None:
        raise ValueError(f"timestamp must carry a UTC offset: {text!r}")
    return parsed.astimezone(timezone.utc)


def format_timestamp(value: datetime) -> str:
    if value.tzinfo is None:
        raise ValueError("timestamp must be timezone-aware")
    return value.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


@dataclass(frozen=True)
class AnnotationRecord:
    """The persistence atom: one code for one slot by one annotator.

    (annotator_id, entry_id, language, lexeme_index) identifies a slot;
    within a log, a later record for the same slot supersedes earlier
    ones.
    """

    annotator_id: str
    entry_id: str
    language: Language
    lexeme_index: int
    code: str
    timestamp: datetime

    def __post_init__(self) -> None:
        if not self.annotator_id or not self.entry_id:
            raise ValueError("annotator_id and entry_id must be non-empty")
        if self.lexeme_index < 0:
            raise ValueError(f"lexeme_index must be >= 0: {self.lexeme_index}")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")

    @property
    def slot(self) -> Slot:
        return (self.language, self.lexeme_index)

    @property
    def slot_key(self) -> tuple[str, str, Language, int]:
        return (self.annotator_id, self.entry_id, self.language, self.lexeme_index)

    def parsed_code(self) -> AnnotationCode:
        return parse_code(self.code)


def record_to_line(record: AnnotationRecord) -> str:
    payload = {
        "annotator_id": record.annotator_id,
        "entry_id": record.entry_id,
        "language": record.language.code,
        "lexeme_index": record.lexeme_index,
        "code": record.code,
        "timestamp": format_timestamp(record.timestamp),
    }
    return json.dumps(payload, ensure_ascii=False)


def _record_from_obj(obj: object, lineno: int) -> AnnotationRecord:
    if not isinstance(obj, dict):
        raise MalformedLine("record must be a JSON object", lineno)
    unknown = set(obj) - set(LOG_KEYS)
    if unknown:
        raise MalformedLine(f"unknown keys {sorted(unknown)!r}", lineno)
    missing = set(LOG_KEYS) - set(obj)
    if missing:
        raise MalformedLine(f"missing keys {sorted(missing)!r}", lineno)
    try:
        language = Language.parse(obj["language"])
    except UnknownLanguage as exc:
        raise UnknownLogLanguage(str(exc), lineno) from exc
    code_text = obj["code"]
    if not isinstance(code_text, str):
        raise MalformedLine(f"code must be a string, got {code_text!r}", lineno)
    try:
        parse_code(code_text)
    except CodeError as exc:
        raise BadCode(str(exc), lineno) from exc
    if not isinstance(obj["lexeme_index"], int) or isinstance(obj["lexeme_index"], bool):
        raise MalformedLine("lexeme_index must be an integer", lineno)
    try:
        timestamp = parse_timestamp(obj["timestamp"])
        return AnnotationRecord(
            annotator_id=obj["annotator_id"],
            entry_id=obj["entry_id"],
            language=language,
            lexeme_index=obj["lexeme_index"],
            code=code_text,
            timestamp=timestamp,
        )
    except LogError:
        raise
    except (ValueError, TypeError) as exc:
        raise MalformedLine(str(exc), lineno) from exc


def scan_annotations(text: str) -> tuple[list[AnnotationRecord], list[Diagnostic]]:
    """Lenient parse of a log: records in file order plus diagnostics."""
    records: list[AnnotationRecord] = []
    diags: list[Diagnostic] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            diags.append(
                Diagnostic("error", "MalformedLine", f"bad JSON: {exc.msg}", line=lineno)
            )
            continue
        try:
            records.append(_record_from_obj(obj, lineno))
        except LogError as exc:
            diags.append(Diagnostic("error", exc.code, exc.reason, line=lineno))
    return records, diags


def parse_annotations(text: str) -> list[AnnotationRecord]:
    """Strict parse: raise on the first malformed line."""
    records: list[AnnotationRecord] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(f"bad JSON: {exc.msg}", lineno) from exc
        records.append(_record_from_obj(obj, lineno))
    return records


def serialize_annotations(records: Iterable[AnnotationRecord]) -> str:
    lines = [record_to_line(r) for r in records]
    return "\n".join(lines) + "\n" if lines else ""


def resolve_newest(
    records: Iterable[AnnotationRecord],
) -> dict[tuple[str, str, Language, int], AnnotationRecord]:
    """Effective state of a log: for each slot key, the last record wins
    (log order, which is append order)."""
    effective: dict[tuple[str, str, Language, int], AnnotationRecord] = {}
    for record in records:
        effective[record.slot_key] = record
    return effective


def to_entry_annotation(
    records: Iterable[AnnotationRecord],
    entry_id: str,
    annotator_id: str,
) -> EntryAnnotation:
    """Assemble one annotator's effective codes for one entry."""
    codes: dict[Slot, AnnotationCode] = {}
    for record in resolve_newest(records).values():
        if record.entry_id == entry_id and record.annotator_id == annotator_id:
            codes[record.slot] = record.parsed_code()
    return EntryAnnotation(entry_id, annotator_id, codes)


def annotators_in(records: Iterable[AnnotationRecord]) -> list[str]:
    seen: dict[str, None] = {}
    for record in records:
        seen.setdefault(record.annotator_id, None)
    return list(seen)
