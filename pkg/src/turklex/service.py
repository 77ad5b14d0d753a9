"""Annotation service: datasets, submissions, progress, suggestions, and
agreement reports over HTTP, backed by append-only per-annotator logs.

Persistence model: one log file per (dataset, annotator), JSON-lines in
the codec's record format, append-only with newest-wins resolution.
Every accepted record is flushed and fsynced before the call returns, so
an acknowledged submission survives a crash; replaying a log from empty
reconstructs the identical effective state.
"""

from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .agreement import (
    build_contingency,
    cognate_agreement_from_records,
    cohen_kappa,
)
from .codec import (
    AnnotationRecord,
    parse_annotations,
    parse_dataset,
    record_to_line,
    resolve_newest,
    to_entry_annotation,
)
from .model import (
    CodeError,
    Diagnostic,
    DictionaryEntry,
    EntryAnnotation,
    Language,
    RESTRICTED_EXCLUDED_CODES,
    validate_entry_annotation,
)
from .suggest import SimilarityConfig, propose_partition, proposal_classes


class UnknownDataset(KeyError):
    pass


class UnknownEntry(KeyError):
    pass


_ID_RE = re.compile(r"[A-Za-z0-9._-]+")


def _safe_id(value: str, what: str) -> str:
    if not _ID_RE.fullmatch(value):
        raise ValueError(f"{what} may only contain [A-Za-z0-9._-]: {value!r}")
    return value


class AnnotationLogStore:
    """Owns the log files under root/logs/<dataset>/<annotator>.jsonl.

    Appends are serialized per log by a lock and fsynced before they are
    acknowledged; reads replay the file through the codec.
    """

    def __init__(self, root: Path):
        self.root = Path(root)
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _path(self, dataset_id: str, annotator_id: str) -> Path:
        return self.root / "logs" / dataset_id / f"{annotator_id}.jsonl"

    def _lock(self, dataset_id: str, annotator_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault((dataset_id, annotator_id), threading.Lock())

    def append(self, dataset_id: str, record: AnnotationRecord) -> None:
        _safe_id(dataset_id, "dataset_id")
        _safe_id(record.annotator_id, "annotator_id")
        path = self._path(dataset_id, record.annotator_id)
        with self._lock(dataset_id, record.annotator_id):
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "a", encoding="utf-8") as handle:
                handle.write(record_to_line(record) + "\n")
                handle.flush()
                os.fsync(handle.fileno())

    def records(self, dataset_id: str, annotator_id: str) -> list[AnnotationRecord]:
        path = self._path(dataset_id, annotator_id)
        if not path.exists():
            return []
        return parse_annotations(path.read_text(encoding="utf-8"))

    def annotators(self, dataset_id: str) -> list[str]:
        directory = self.root / "logs" / dataset_id
        if not directory.is_dir():
            return []
        return sorted(p.stem for p in directory.glob("*.jsonl"))


@dataclass(frozen=True)
class SessionState:
    """Where an annotator stands in a dataset: cursor is the index of
    the first incomplete entry (== dataset size when done)."""

    dataset_id: str
    annotator_id: str
    cursor: int
    completed: int


class SubmissionRejected(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.render() for d in diagnostics))
        self.diagnostics = diagnostics


class AnnotationService:
    """Application core behind the HTTP surface. Loads every *.tsv in
    data_dir as a dataset (dataset_id = file stem)."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.store = AnnotationLogStore(self.data_dir)
        self.datasets: dict[str, list[DictionaryEntry]] = {}
        self._by_id: dict[str, dict[str, DictionaryEntry]] = {}
        for path in sorted(self.data_dir.glob("*.tsv")):
            entries = parse_dataset(path.read_text(encoding="utf-8"))
            self.datasets[path.stem] = entries
            self._by_id[path.stem] = {e.entry_id: e for e in entries}

    # -- lookups ------------------------------------------------------------

    def dataset(self, dataset_id: str) -> list[DictionaryEntry]:
        try:
            return self.datasets[dataset_id]
        except KeyError:
            raise UnknownDataset(dataset_id) from None

    def entry(self, dataset_id: str, entry_id: str) -> DictionaryEntry:
        table = self._by_id.get(dataset_id)
        if table is None:
            raise UnknownDataset(dataset_id)
        try:
            return table[entry_id]
        except KeyError:
            raise UnknownEntry(entry_id) from None

    def _effective(
        self, dataset_id: str, annotator_id: str
    ) -> dict[tuple, AnnotationRecord]:
        return resolve_newest(self.store.records(dataset_id, annotator_id))

    def _completion(self, entry: DictionaryEntry, effective: dict) -> bool:
        return all(
            any(
                key[1] == entry.entry_id and key[2] == lang and key[3] == index
                for key in effective
            )
            for lang, index in entry.slots()
        )

    # -- operations ---------------------------------------------------------

    def list_datasets(self) -> list[dict]:
        return [
            {
                "dataset_id": dataset_id,
                "entries": len(entries),
                "annotators": self.store.annotators(dataset_id),
            }
            for dataset_id, entries in self.datasets.items()
        ]

    def list_entries(
        self,
        dataset_id: str,
        page: int = 0,
        page_size: int = 50,
        completion_filter: str | None = None,
        annotator_id: str | None = None,
    ) -> dict:
        """Page of entries in file order, each with per-annotator
        completion flags. completion_filter 'annotated'/'unannotated'
        keeps only entries the given annotator has finished / not
        finished."""
        entries = self.dataset(dataset_id)
        if page < 0 or page_size < 1:
            raise ValueError("page must be >= 0 and page_size >= 1")
        annotators = self.store.annotators(dataset_id)
        effective = {a: self._effective(dataset_id, a) for a in annotators}
        flagged = [
            (e, {a: self._completion(e, effective[a]) for a in annotators})
            for e in entries
        ]
        if completion_filter:
            if completion_filter not in ("annotated", "unannotated"):
                raise ValueError(f"bad filter {completion_filter!r}")
            if not annotator_id:
                raise ValueError("filter requires an annotator")
            want_done = completion_filter == "annotated"
            flagged = [
                (e, flags)
                for e, flags in flagged
                if flags.get(annotator_id, False) == want_done
            ]
        start = page * page_size
        window = flagged[start : start + page_size]

        def codes_of(entry: DictionaryEntry) -> dict[str, str]:
            # the requesting annotator's effective codes, so a reloaded
            # session can restore exactly what the server holds
            own = effective.get(annotator_id, {})
            out = {}
            for key, record in own.items():
                if key[1] == entry.entry_id:
                    out[f"{key[2].code}:{key[3]}"] = record.code
            return out

        payloads = []
        for entry, flags in window:
            payload = {**entry_payload(entry), "completed_by": flags}
            if annotator_id:
                payload["codes"] = codes_of(entry)
            payloads.append(payload)
        return {
            "dataset_id": dataset_id,
            "page": page,
            "page_size": page_size,
            "total": len(flagged),
            "entries": payloads,
        }

    def submit(self, dataset_id: str, record: AnnotationRecord) -> list[Diagnostic]:
        """Validate, persist, and return the diagnostics (warnings only:
        code-level errors raise SubmissionRejected and persist nothing)."""
        entry = self.entry(dataset_id, record.entry_id)
        try:
            record.parsed_code()
        except CodeError as exc:
            raise SubmissionRejected(
                [
                    Diagnostic(
                        "error", exc.reason, str(exc), entry_id=record.entry_id,
                        language=record.language, lexeme_index=record.lexeme_index,
                    )
                ]
            ) from exc

        merged = dict(
            to_entry_annotation(
                self.store.records(dataset_id, record.annotator_id),
                record.entry_id,
                record.annotator_id,
            ).codes
        )
        merged[record.slot] = record.parsed_code()
        annotation = EntryAnnotation(record.entry_id, record.annotator_id, merged)
        diagnostics = validate_entry_annotation(entry, annotation)
        record_errors = [
            d
            for d in diagnostics
            if d.is_error
            and (d.language is None or (d.language, d.lexeme_index) == record.slot)
        ]
        if record_errors:
            raise SubmissionRejected(record_errors)
        self.store.append(dataset_id, record)
        return diagnostics

    def progress(self, dataset_id: str, annotator_id: str) -> SessionState:
        entries = self.dataset(dataset_id)
        effective = self._effective(dataset_id, annotator_id)
        done = [self._completion(e, effective) for e in entries]
        cursor = next((i for i, d in enumerate(done) if not d), len(entries))
        return SessionState(dataset_id, annotator_id, cursor, sum(done))

    def suggest(
        self, dataset_id: str, entry_id: str, config: SimilarityConfig
    ) -> dict:
        """Similarity-based cognate proposal; never persisted."""
        entry = self.entry(dataset_id, entry_id)
        partition = propose_partition(entry, config)
        classes = proposal_classes(partition)
        return {
            "dataset_id": dataset_id,
            "entry_id": entry_id,
            "tau": config.tau,
            "metric": config.metric,
            "blocks": [
                [{"language": lang.code, "lexeme_index": index} for lang, index in block]
                for block in partition.sorted_blocks()
            ],
            "classes": {
                f"{lang.code}:{index}": number
                for (lang, index), number in sorted(
                    classes.items(), key=lambda kv: (kv[0][0].order, kv[0][1])
                )
            },
        }

    def agreement(
        self,
        dataset_id: str,
        annotator_a: str,
        annotator_b: str,
        restricted: bool = False,
    ) -> dict:
        """Contingency matrix, kappa, and cognate-partition agreement
        between two annotators of a dataset (machine-readable record).

        An empty intersection is flagged in the payload, not raised.
        """
        from . import reports

        self.dataset(dataset_id)
        records_a = self.store.records(dataset_id, annotator_a)
        records_b = self.store.records(dataset_id, annotator_b)
        matrix = build_contingency(records_a, records_b)
        if restricted:
            matrix = matrix.restrict(RESTRICTED_EXCLUDED_CODES)
        matrix = matrix.without_unused()
        kappa = None
        if not matrix.empty:
            kappa = cohen_kappa(matrix)
        partition = cognate_agreement_from_records(
            records_a, records_b, self._by_id.get(dataset_id, {})
        )
        payload = reports.agreement_report_record(matrix, kappa, partition, restricted)
        payload["dataset_id"] = dataset_id
        payload["annotator_a"] = annotator_a
        payload["annotator_b"] = annotator_b
        return payload


def entry_payload(entry: DictionaryEntry) -> dict:
    return {
        "entry_id": entry.entry_id,
        "gloss": entry.gloss,
        "translations": {
            lang.code: [
                {"form": lex.form, "script": lex.script.value}
                for lex in entry.translations[lang]
            ]
            for lang in Language
        },
    }


def now_utc() -> datetime:
    return datetime.now(timezone.utc)


def create_app(service: AnnotationService):
    """FastAPI wrapper around the service core. Payload shapes are
    documented in docs/api.md and pinned by the contract tests."""
    from fastapi import FastAPI, HTTPException, Query, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse

    app = FastAPI(title="turklex annotation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _diag(d: Diagnostic) -> dict:
        return {
            "severity": d.severity,
            "code": d.code,
            "message": d.message,
            "entry_id": d.entry_id,
            "language": d.language.code if d.language else None,
            "lexeme_index": d.lexeme_index,
        }

    @app.exception_handler(UnknownDataset)
    async def _unknown_dataset(_request: Request, exc: UnknownDataset):
        return JSONResponse(status_code=404, content={"error": f"unknown dataset {exc.args[0]!r}"})

    @app.exception_handler(UnknownEntry)
    async def _unknown_entry(_request: Request, exc: UnknownEntry):
        return JSONResponse(status_code=404, content={"error": f"unknown entry {exc.args[0]!r}"})

    @app.get("/datasets")
    def get_datasets():
        return {"datasets": service.list_datasets()}

    @app.get("/datasets/{dataset_id}/entries")
    def get_entries(
        dataset_id: str,
        page: int = 0,
        page_size: int = Query(default=50, ge=1, le=500),
        filter: str | None = None,
        annotator: str | None = None,
    ):
        try:
            return service.list_entries(dataset_id, page, page_size, filter, annotator)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.put("/annotations")
    def put_annotation(body: dict):
        from .codec import parse_timestamp

        required = {"dataset_id", "annotator_id", "entry_id", "language", "lexeme_index", "code"}
        missing = required - set(body)
        if missing:
            raise HTTPException(422, detail=f"missing keys {sorted(missing)}")
        unknown = set(body) - required - {"timestamp"}
        if unknown:
            raise HTTPException(422, detail=f"unknown keys {sorted(unknown)}")
        try:
            language = Language.parse(body["language"])
            timestamp = (
                parse_timestamp(body["timestamp"])
                if "timestamp" in body and body["timestamp"] is not None
                else now_utc()
            )
            record = AnnotationRecord(
                annotator_id=body["annotator_id"],
                entry_id=body["entry_id"],
                language=language,
                lexeme_index=body["lexeme_index"],
                code=body["code"],
                timestamp=timestamp,
            )
        except (ValueError, TypeError) as exc:
            raise HTTPException(422, detail=str(exc))
        try:
            diagnostics = service.submit(body["dataset_id"], record)
        except SubmissionRejected as exc:
            return JSONResponse(
                status_code=422,
                content={
                    "accepted": False,
                    "diagnostics": [_diag(d) for d in exc.diagnostics],
                },
            )
        return {
            "accepted": True,
            "record": {
                "annotator_id": record.annotator_id,
                "entry_id": record.entry_id,
                "language": record.language.code,
                "lexeme_index": record.lexeme_index,
                "code": record.code,
                "timestamp": record.timestamp.astimezone(timezone.utc)
                .isoformat()
                .replace("+00:00", "Z"),
            },
            "diagnostics": [_diag(d) for d in diagnostics],
        }

    @app.get("/agreement")
    def get_agreement(
        dataset: str,
        a: str,
        b: str,
        restricted: bool = False,
    ):
        return service.agreement(dataset, a, b, restricted)

    @app.get("/suggest")
    def get_suggest(
        dataset: str,
        entry_id: str,
        tau: float = 0.6,
        metric: str = "normalized-levenshtein",
    ):
        try:
            config = SimilarityConfig(tau, metric)
        except ValueError as exc:
            raise HTTPException(422, detail=str(exc))
        return service.suggest(dataset, entry_id, config)

    @app.get("/progress/{annotator_id}")
    def get_progress(annotator_id: str, dataset: str):
        state = service.progress(dataset, annotator_id)
        entries = service.dataset(dataset)
        return {
            "dataset_id": state.dataset_id,
            "annotator_id": state.annotator_id,
            "cursor": state.cursor,
            "completed": state.completed,
            "total": len(entries),
        }

    return app


def load_app(data_dir: str | Path):
    """Convenience for `uvicorn turklex.service:...` style startup."""
    return create_app(AnnotationService(Path(data_dir)))
