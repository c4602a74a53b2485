"""Command-line interface.

Exit codes: 0 success, 1 validation/data failures, 2 usage errors,
3 I/O errors. All output is deterministic for identical inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis, baseline, corpus, evaluation, nq_import, rater
from .errors import CorpusEncodingError, CorpusIOError, QedError
from .model import ExplanationLabel, validate_example
from .pattern import extract_pattern


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qedkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a corpus; violations go to stderr")
    p.add_argument("corpus")

    p = sub.add_parser("eval", help="score predictions against a gold corpus")
    p.add_argument("--task", type=int, choices=(1, 2), required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--macro", action="store_true", help="macro-average instead of pooling counts")
    p.add_argument("--no-title-equiv", action="store_true", help="require exact mention variants (no implicit/title equivalence)")
    p.add_argument("--name", default="predictions", help="system name for the table row")
    p.add_argument("--json", action="store_true", help="emit the structured report instead of a table")

    p = sub.add_parser("stats", help="corpus statistics and expression-type crosstab")
    p.add_argument("corpus")
    p.add_argument("--sample", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("pattern", help="print entailment patterns")
    p.add_argument("corpus")
    p.add_argument("--id", dest="example_id", default=None)

    p = sub.add_parser("baseline", help="run the lexical baseline over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-len", type=int, default=4)

    p = sub.add_parser("rater-report", help="aggregate a judgment log")
    p.add_argument("--log", required=True)
    p.add_argument("--rater-weighted", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("import-nq", help="convert a released-format file to the canonical schema")
    p.add_argument("file")
    p.add_argument("--out", default=None)

    p = sub.add_parser("serve", help="run the annotation/judging HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--corpus", required=True)
    p.add_argument(
        "--state",
        default=os.environ.get("QEDKIT_STATE"),
        help="state directory (default: $QEDKIT_STATE)",
    )
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", default=None, help="directory with the built browser UI, mounted at /ui")

    return parser


def _cmd_validate(args) -> int:
    doc = corpus.parse_corpus(args.corpus)
    failed = False
    for err in doc.parse_errors:
        print(f"line {err.line}: PARSE_ERROR: {err.message}", file=sys.stderr)
        failed = True
    for v in corpus.corpus_violations(doc):
        print(f"-\t{v.code}\t{v.field}\t{v.message}", file=sys.stderr)
        failed = True
    for ex in doc.examples:
        for v in validate_example(ex):
            print(f"{ex.id}\t{v.code}\t{v.field}@{v.offset}\t{v.message}", file=sys.stderr)
            if v.severity == "error":
                failed = True
    return 1 if failed else 0


def _load_predictions(path: str) -> corpus.PredictionDocument:
    preds = corpus.parse_predictions(path)
    for err in preds.parse_errors:
        print(f"{preds.provenance}: line {err.line}: {err.message}", file=sys.stderr)
    if preds.parse_errors:
        raise QedError(f"{len(preds.parse_errors)} malformed prediction lines")
    return preds


def _cmd_eval(args) -> int:
    gold = corpus.parse_corpus(args.gold)
    if gold.parse_errors:
        for err in gold.parse_errors:
            print(f"{gold.provenance}: line {err.line}: {err.message}", file=sys.stderr)
        return 1
    preds = _load_predictions(args.pred)
    policy = evaluation.EvalPolicy(
        title_equivalence=not args.no_title_equiv,
        averaging="macro" if args.macro else "micro",
    )
    evaluate = evaluation.evaluate_task1 if args.task == 1 else evaluation.evaluate_task2
    report = evaluate(gold, preds, policy)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        sys.stdout.write(evaluation.format_report_table(report, args.name))
    return 0


def _cmd_stats(args) -> int:
    doc = corpus.parse_corpus(args.corpus)
    for err in doc.parse_errors:
        print(f"line {err.line}: {err.message}", file=sys.stderr)
    report = analysis.build_stats(doc, sample_size=args.sample, seed=args.seed)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        sys.stdout.write(analysis.format_stats_tables(report))
    return 0


def _cmd_pattern(args) -> int:
    doc = corpus.parse_corpus(args.corpus)
    failed = False
    if args.example_id is not None and not any(ex.id == args.example_id for ex in doc.examples):
        print(f"{args.example_id}: no such example", file=sys.stderr)
        return 1
    for ex in doc.examples:
        if args.example_id is not None and ex.id != args.example_id:
            continue
        if ex.label is not ExplanationLabel.VALID_EXPLANATION:
            if args.example_id is not None:
                print(f"{ex.id}: no explanation (label {ex.label.value})", file=sys.stderr)
                failed = True
            continue
        try:
            pattern = extract_pattern(ex)
        except QedError as e:
            print(f"{ex.id}: {e.code}: {e}", file=sys.stderr)
            failed = True
            continue
        print(ex.id)
        print(f"  Q: {pattern.question_template}")
        print(f"  S: {pattern.sentence_template}")
    return 1 if failed else 0


def _cmd_baseline(args) -> int:
    doc = corpus.parse_corpus(args.corpus)
    config = baseline.BaselineConfig(max_len=args.max_len)
    records = baseline.predict_corpus(doc.examples, config)
    Path(args.out).write_bytes(corpus.serialize_predictions(records))
    print(f"wrote {len(records)} predictions to {args.out}")
    return 0


def _cmd_rater_report(args) -> int:
    log = rater.parse_judgments(args.log)
    for err in log.parse_errors:
        print(f"line {err.line}: {err.message}", file=sys.stderr)
    if log.parse_errors:
        return 1
    weighting = "rater" if args.rater_weighted else "judgment"
    report = rater.aggregate_judgments(log, weighting=weighting)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        sys.stdout.write(rater.format_rater_table(report))
    return 0


def _cmd_import_nq(args) -> int:
    doc = nq_import.import_released(args.file)
    for err in doc.parse_errors:
        print(f"line {err.line}: {err.message}", file=sys.stderr)
    data = corpus.serialize_corpus(doc, validate=False)
    if args.out:
        Path(args.out).write_bytes(data)
        print(f"imported {len(doc.examples)} examples to {args.out}", file=sys.stderr)
    else:
        sys.stdout.buffer.write(data)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    if not args.state:
        print("error: --state or $QEDKIT_STATE is required", file=sys.stderr)
        return 2
    app = create_app(args.corpus, args.state, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "eval": _cmd_eval,
    "stats": _cmd_stats,
    "pattern": _cmd_pattern,
    "baseline": _cmd_baseline,
    "rater-report": _cmd_rater_report,
    "import-nq": _cmd_import_nq,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CorpusIOError, CorpusEncodingError) as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except QedError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
