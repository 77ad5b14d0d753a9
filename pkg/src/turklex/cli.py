"""Command-line entry points: validate files, compute agreement, run
suggestion sweeps, and launch the annotation service.

Exit status is deterministic: 0 on success, 1 when validation errors (or
an empty annotator intersection) are present, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import reports
from .agreement import build_contingency, cognate_agreement_from_records, cohen_kappa
from .codec import scan_annotations, scan_dataset, to_entry_annotation
from .model import (
    Diagnostic,
    EntryAnnotation,
    RESTRICTED_EXCLUDED_CODES,
    partition_of,
    validate_entry,
    validate_entry_annotation,
)
from .suggest import (
    METRICS,
    SimilarityConfig,
    evaluate_suggestions,
    propose_partition,
    proposal_classes,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

DATA_DIR_ENV = "TURKLEX_DATA_DIR"


class UsageError(Exception):
    """Usage or I/O failure mapped to exit status 2."""


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}")


def _print_diagnostics(path: str, diags: list[Diagnostic]) -> None:
    for diag in diags:
        prefix = f"{path}:{diag.line}: " if diag.line else f"{path}: "
        print(prefix + diag.render())


def cmd_validate(args: argparse.Namespace) -> int:
    dataset_text = _read_file(args.dataset)
    entries, dataset_diags = scan_dataset(dataset_text)
    _print_diagnostics(args.dataset, dataset_diags)
    any_error = any(d.is_error for d in dataset_diags)

    by_id = {e.entry_id: e for e in entries}
    for entry in entries:
        diags = validate_entry(entry)
        _print_diagnostics(args.dataset, diags)
        any_error = any_error or any(d.is_error for d in diags)

    for log_path in args.annotations:
        records, log_diags = scan_annotations(_read_file(log_path))
        _print_diagnostics(log_path, log_diags)
        any_error = any_error or any(d.is_error for d in log_diags)
        pairs = sorted({(r.entry_id, r.annotator_id) for r in records})
        for entry_id, annotator_id in pairs:
            entry = by_id.get(entry_id)
            if entry is None:
                diag = Diagnostic(
                    "error", "UnknownEntry",
                    f"annotation references unknown entry {entry_id!r}",
                    entry_id=entry_id,
                )
                _print_diagnostics(log_path, [diag])
                any_error = True
                continue
            annotation = to_entry_annotation(records, entry_id, annotator_id)
            diags = validate_entry_annotation(entry, annotation)
            _print_diagnostics(log_path, diags)
            any_error = any_error or any(d.is_error for d in diags)

    if any_error:
        return EXIT_VALIDATION
    print(f"ok: {len(entries)} entries, {len(args.annotations)} log file(s)")
    return EXIT_OK


def cmd_agree(args: argparse.Namespace) -> int:
    entries, dataset_diags = scan_dataset(_read_file(args.dataset))
    errors = [d for d in dataset_diags if d.is_error]
    if errors:
        _print_diagnostics(args.dataset, errors)
        return EXIT_VALIDATION
    records_a, diags_a = scan_annotations(_read_file(args.log_a))
    records_b, diags_b = scan_annotations(_read_file(args.log_b))
    for path, diags in ((args.log_a, diags_a), (args.log_b, diags_b)):
        bad = [d for d in diags if d.is_error]
        if bad:
            _print_diagnostics(path, bad)
            return EXIT_VALIDATION

    matrix = build_contingency(records_a, records_b)
    if args.restricted:
        matrix = matrix.restrict(RESTRICTED_EXCLUDED_CODES)
    matrix = matrix.without_unused()
    kappa = cohen_kappa(matrix) if not matrix.empty else None
    partition = cognate_agreement_from_records(
        records_a, records_b, {e.entry_id for e in entries}
    )

    if args.format == "json":
        payload = reports.agreement_report_record(matrix, kappa, partition, args.restricted)
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(reports.render_agreement_report(matrix, kappa, partition, args.restricted), end="")

    return EXIT_VALIDATION if matrix.empty else EXIT_OK


def cmd_suggest(args: argparse.Namespace) -> int:
    entries, dataset_diags = scan_dataset(_read_file(args.dataset))
    errors = [d for d in dataset_diags if d.is_error]
    if errors:
        _print_diagnostics(args.dataset, errors)
        return EXIT_VALIDATION
    taus = args.tau or [0.6]
    try:
        configs = [SimilarityConfig(tau, args.metric) for tau in taus]
    except ValueError as exc:
        raise UsageError(str(exc))

    if args.gold:
        gold_records, gold_diags = scan_annotations(_read_file(args.gold))
        bad = [d for d in gold_diags if d.is_error]
        if bad:
            _print_diagnostics(args.gold, bad)
            return EXIT_VALIDATION
        gold = {}
        annotators = {r.annotator_id for r in gold_records}
        for entry in entries:
            codes = {}
            for annotator_id in sorted(annotators):
                ann = to_entry_annotation(gold_records, entry.entry_id, annotator_id)
                codes.update(ann.codes)
            if codes:
                gold[entry.entry_id] = partition_of(
                    EntryAnnotation(entry.entry_id, "gold", codes)
                )
        scoreable = [e for e in entries if e.entry_id in gold]
        results = []
        for config in configs:
            report = evaluate_suggestions(scoreable, gold, config)
            results.append(report)
        if args.format == "json":
            payload = [
                {
                    "tau": r.tau,
                    "metric": r.metric,
                    "aggregate": reports.partition_agreement_record(r.aggregate),
                    "entries": {
                        ev.entry_id: reports.partition_agreement_record(ev.agreement)
                        for ev in r.per_entry
                    },
                }
                for r in results
            ]
            print(json.dumps(payload, ensure_ascii=False, indent=2))
        else:
            for r in results:
                print(f"tau={r.tau} metric={r.metric} ({len(r.per_entry)} entries)")
                for ev in r.per_entry:
                    print(f"  {ev.entry_id}: {reports.render_partition_agreement(ev.agreement)}")
                print(f"  aggregate: {reports.render_partition_agreement(r.aggregate)}")
        return EXIT_OK

    for config in configs:
        for entry in entries:
            partition = propose_partition(entry, config)
            classes = proposal_classes(partition)
            if args.format == "json":
                payload = {
                    "entry_id": entry.entry_id,
                    "tau": config.tau,
                    "metric": config.metric,
                    "classes": {
                        f"{lang.code}:{index}": number
                        for (lang, index), number in sorted(
                            classes.items(), key=lambda kv: (kv[0][0].order, kv[0][1])
                        )
                    },
                }
                print(json.dumps(payload, ensure_ascii=False))
            else:
                rendered = " ".join(
                    f"{lang.code}:{index}={number}"
                    for (lang, index), number in sorted(
                        classes.items(), key=lambda kv: (kv[0][0].order, kv[0][1])
                    )
                )
                print(f"{entry.entry_id} (tau={config.tau}): {rendered}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import AnnotationService, create_app

    data_dir = args.data_dir or os.environ.get(DATA_DIR_ENV)
    if not data_dir:
        raise UsageError(
            f"no data directory: pass one or set {DATA_DIR_ENV}"
        )
    if not Path(data_dir).is_dir():
        raise UsageError(f"not a directory: {data_dir}")
    if not 0 < args.port < 65536:
        raise UsageError(f"port out of range: {args.port}")
    app = create_app(AnnotationService(Path(data_dir)))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="turklex",
        description="Cognate/etymology annotation toolkit for the eight-way Turkic dictionary",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate a dataset and annotation logs")
    p_validate.add_argument("dataset")
    p_validate.add_argument("annotations", nargs="*")
    p_validate.set_defaults(func=cmd_validate)

    p_agree = sub.add_parser("agree", help="agreement statistics for two annotation logs")
    p_agree.add_argument("dataset")
    p_agree.add_argument("log_a")
    p_agree.add_argument("log_b")
    p_agree.add_argument("--restricted", action="store_true",
                         help="drop slots where either annotator used Q/X/V/N")
    p_agree.add_argument("--format", choices=("human", "json"), default="human")
    p_agree.set_defaults(func=cmd_agree)

    p_suggest = sub.add_parser("suggest", help="propose cognate partitions, optionally scored against gold")
    p_suggest.add_argument("dataset")
    p_suggest.add_argument("--tau", type=float, action="append",
                           help="similarity threshold; repeat for a sweep (default 0.6)")
    p_suggest.add_argument("--metric", choices=METRICS, default="normalized-levenshtein")
    p_suggest.add_argument("--gold", help="annotation log with gold codes to score against")
    p_suggest.add_argument("--format", choices=("human", "json"), default="human")
    p_suggest.set_defaults(func=cmd_suggest)

    p_serve = sub.add_parser("serve", help="run the annotation service")
    p_serve.add_argument("data_dir", nargs="?",
                         help=f"directory of *.tsv datasets (default ${DATA_DIR_ENV})")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8057)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize the code
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
