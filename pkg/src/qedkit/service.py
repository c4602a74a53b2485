"""HTTP service for corpus browsing, annotation, and judging sessions.

State lives in a writable directory as append-only JSONL logs (one per
resource kind) that are replayed on startup; a 200 response means the
write is durable. Annotation writes use optimistic versioning (409 on a
stale version). Judging sessions are sticky: a session is bound to the
condition of its first request and never receives highlight fields beyond
that condition's entitlement (none: answer spans; sentence: plus the
sentence span; qed: plus the equalities).

Judging instances come from an optional ``judging.jsonl`` manifest in the
state directory, one object per line::

    {"instance_id": <example id>, "correct": bool,
     "error_type": "pred"|"ref"?, "answer": [[s, e], ...]?,
     "sentence": [s, e]?, "equalities": [...]?}

Fields left out fall back to the example's gold explanation. Without a
manifest every valid_explanation example is served as a correct instance.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.responses import JSONResponse

from . import analysis
from .corpus import (
    CorpusDocument,
    example_to_record,
    parse_corpus,
    record_to_example,
)
from .errors import QedError
from .model import ExplanationLabel, QedExample, validate_example
from .pattern import extract_pattern
from .rater import (
    Condition,
    JudgedErrorType,
    JudgmentRecord,
    aggregate_judgments,
    judgment_to_record,
    record_to_judgment,
)


@dataclass(frozen=True)
class JudgingInstance:
    example_id: str
    correct: bool
    error_type: JudgedErrorType | None
    answer: tuple[tuple[int, int], ...]
    sentence: tuple[int, int] | None
    equalities: tuple[dict, ...]


class _Store:
    """Append-only JSONL persistence with replay."""

    def __init__(self, path: Path):
        self.path = path

    def replay(self) -> list[dict]:
        if not self.path.exists():
            return []
        out = []
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                out.append(json.loads(line))
        return out

    def append(self, obj: dict) -> None:
        line = json.dumps(obj, ensure_ascii=False, separators=(",", ":"))
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def compact(self, objects: list[dict]) -> None:
        """Atomically replace the log with the given snapshot."""
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for obj in objects:
                fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.path)


class ServiceState:
    def __init__(self, corpus: CorpusDocument, state_dir: Path):
        state_dir.mkdir(parents=True, exist_ok=True)
        self.corpus = corpus
        self.order = [ex.id for ex in corpus.examples]
        self.examples = {ex.id: ex for ex in corpus.examples}
        self.lock = threading.Lock()

        self.annotation_store = _Store(state_dir / "annotations.log")
        self.session_store = _Store(state_dir / "sessions.log")
        self.verdict_store = _Store(state_dir / "verdicts.log")

        # id -> (version, stored annotation fields)
        self.annotations: dict[str, tuple[int, dict]] = {}
        for obj in self.annotation_store.replay():
            current = self.annotations.get(obj["id"], (0, {}))[0]
            self.annotations[obj["id"]] = (max(current, int(obj["version"])), obj)

        self.sessions: dict[str, Condition] = {}
        for obj in self.session_store.replay():
            self.sessions[obj["session"]] = Condition(obj["condition"])

        self.verdicts: dict[tuple[str, str], JudgmentRecord] = {}
        self.verdict_order: list[JudgmentRecord] = []
        for obj in self.verdict_store.replay():
            record = record_to_judgment(obj)
            self.verdicts[(record.rater_id, record.instance_id)] = record
            self.verdict_order.append(record)

        self.instances = self._load_instances(state_dir / "judging.jsonl")

    def _load_instances(self, manifest: Path) -> list[JudgingInstance]:
        instances: list[JudgingInstance] = []
        if manifest.exists():
            for line in manifest.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                obj = json.loads(line)
                ex = self.examples.get(obj["instance_id"])
                if ex is None:
                    continue
                instances.append(self._instance_from(ex, obj))
        else:
            for ex in self.corpus.examples:
                if ex.label is ExplanationLabel.VALID_EXPLANATION and ex.explanation is not None:
                    instances.append(self._instance_from(ex, {"instance_id": ex.id, "correct": True}))
        return instances

    def _instance_from(self, ex: QedExample, obj: dict) -> JudgingInstance:
        record = example_to_record(ex)
        expl = record.get("explanation") or {}
        answer = obj.get("answer")
        if answer is None:
            answer = [a["span"] for a in expl.get("answers", [])]
        sentence = obj.get("sentence", expl.get("sentence"))
        equalities = obj.get("equalities", expl.get("equalities", []))
        error_type = obj.get("error_type")
        return JudgingInstance(
            example_id=ex.id,
            correct=bool(obj.get("correct", True)),
            error_type=JudgedErrorType(error_type) if error_type else None,
            answer=tuple((int(s), int(e)) for s, e in answer),
            sentence=tuple(sentence) if sentence else None,
            equalities=tuple(equalities),
        )

    # ---- views ------------------------------------------------------

    def merged_example(self, ex_id: str) -> tuple[QedExample, int]:
        base = self.examples[ex_id]
        stored = self.annotations.get(ex_id)
        if stored is None:
            return base, 0
        version, fields = stored
        record = example_to_record(base)
        record["label"] = fields["label"]
        record.pop("explanation", None)
        record.pop("answers", None)
        if fields.get("explanation") is not None:
            record["explanation"] = fields["explanation"]
        if fields.get("answers") is not None:
            record["answers"] = fields["answers"]
        return record_to_example(record), version

    def current_examples(self) -> list[QedExample]:
        return [self.merged_example(ex_id)[0] for ex_id in self.order]


def _error(status: int, payload: dict) -> JSONResponse:
    return JSONResponse(status_code=status, content=payload)


def create_app(corpus_source, state_dir, ui_dir=None) -> FastAPI:
    """Build the service around a corpus (path or CorpusDocument).

    ``ui_dir`` mounts a static browser UI at /ui.
    """
    if isinstance(corpus_source, CorpusDocument):
        doc = corpus_source
    else:
        doc = parse_corpus(corpus_source)
        if doc.parse_errors:
            lines = ", ".join(str(e.line) for e in doc.parse_errors[:5])
            raise QedError(f"corpus {doc.provenance} has malformed lines ({lines})")
    state = ServiceState(doc, Path(state_dir))
    app = FastAPI(title="qedkit annotation service")
    app.state.qed = state
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    @app.get("/examples")
    def list_examples(page: int = 1, page_size: int = 50):
        page = max(1, page)
        page_size = max(1, min(page_size, 500))
        start = (page - 1) * page_size
        items = []
        for ex_id in state.order[start : start + page_size]:
            ex = state.examples[ex_id]
            stored = state.annotations.get(ex_id)
            items.append(
                {
                    "id": ex_id,
                    "label": (stored[1]["label"] if stored else ex.label.value),
                    "annotated": stored is not None,
                }
            )
        return {"items": items, "page": page, "page_size": page_size, "total": len(state.order)}

    @app.get("/examples/{example_id}")
    def get_example(example_id: str):
        if example_id not in state.examples:
            return _error(404, {"error": "unknown id"})
        merged, version = state.merged_example(example_id)
        return {"example": example_to_record(merged), "version": version}

    @app.post("/examples/{example_id}/annotation")
    def post_annotation(example_id: str, payload: dict = Body(...)):
        if example_id not in state.examples:
            return _error(404, {"error": "unknown id"})
        base = state.examples[example_id]
        record = example_to_record(base)
        record.pop("explanation", None)
        record.pop("answers", None)
        record["label"] = payload.get("label")
        if payload.get("explanation") is not None:
            record["explanation"] = payload["explanation"]
        if payload.get("answers") is not None:
            record["answers"] = payload["answers"]
        try:
            candidate = record_to_example(record)
        except (ValueError, TypeError) as e:
            return _error(422, {"violations": [{"code": "MALFORMED", "field": "", "offset": 0, "message": str(e), "severity": "error"}], "warnings": []})
        report = validate_example(candidate)
        errors = [v.to_dict() for v in report.errors]
        warnings = [v.to_dict() for v in report.warnings]
        if errors:
            return _error(422, {"violations": errors, "warnings": warnings})
        with state.lock:
            current = state.annotations.get(example_id, (0, {}))[0]
            expected = payload.get("version", current)
            if expected != current:
                return _error(409, {"error": "version_conflict", "current_version": current})
            stored = {
                "id": example_id,
                "version": current + 1,
                "label": payload.get("label"),
                "explanation": payload.get("explanation"),
                "answers": payload.get("answers"),
            }
            state.annotation_store.append(stored)
            state.annotations[example_id] = (current + 1, stored)
        return {"version": current + 1, "violations": [], "warnings": warnings}

    @app.post("/examples/{example_id}/pattern-preview")
    def pattern_preview(example_id: str, payload: dict = Body(...)):
        if example_id not in state.examples:
            return _error(404, {"error": "unknown id"})
        base = state.examples[example_id]
        record = example_to_record(base)
        record["label"] = ExplanationLabel.VALID_EXPLANATION.value
        record.pop("answers", None)
        record["explanation"] = payload.get("explanation")
        try:
            candidate = record_to_example(record)
        except (ValueError, TypeError) as e:
            return _error(422, {"error": {"code": "MALFORMED", "message": str(e)}})
        report = validate_example(candidate)
        if not report.is_valid:
            return _error(422, {"violations": [v.to_dict() for v in report.errors], "warnings": [v.to_dict() for v in report.warnings]})
        try:
            pattern = extract_pattern(candidate)
        except QedError as e:
            return _error(422, {"error": {"code": e.code, "message": str(e)}})
        return {
            "question_template": pattern.question_template,
            "sentence_template": pattern.sentence_template,
            "possessive_normalized": pattern.possessive_normalized,
            "has_implicit": pattern.has_implicit,
            "slots": [
                {
                    "placeholder": s.placeholder,
                    "kind": s.kind,
                    "question_text": s.question_text,
                    "sentence_text": s.sentence_text,
                    "preposition": s.preposition,
                }
                for s in pattern.slots
            ],
        }

    @app.get("/judge/next")
    def judge_next(condition: str, session: str):
        try:
            wanted = Condition(condition)
        except ValueError:
            return _error(422, {"error": f"unknown condition {condition!r}"})
        with state.lock:
            bound = state.sessions.get(session)
            if bound is None:
                state.session_store.append({"session": session, "condition": wanted.value})
                state.sessions[session] = wanted
                bound = wanted
        if bound is not wanted:
            return _error(409, {"error": "session_condition_conflict", "condition": bound.value})
        for inst in state.instances:
            if (session, inst.example_id) in state.verdicts:
                continue
            ex = state.examples[inst.example_id]
            payload = {
                "instance_id": inst.example_id,
                "session": session,
                "condition": bound.value,
                "question": ex.question,
                "passage": ex.passage,
                "title": ex.title,
                "answer": [list(span) for span in inst.answer],
            }
            if bound in (Condition.SENTENCE, Condition.QED) and inst.sentence is not None:
                payload["sentence"] = list(inst.sentence)
            if bound is Condition.QED:
                payload["equalities"] = list(inst.equalities)
            return payload
        return {"done": True, "session": session, "condition": bound.value}

    @app.post("/judge/verdict")
    def post_verdict(payload: dict = Body(...)):
        session = payload.get("session")
        instance_id = payload.get("instance_id")
        verdict = payload.get("verdict")
        confidence = payload.get("confidence")
        if not isinstance(session, str) or not isinstance(instance_id, str) or not isinstance(verdict, bool):
            return _error(422, {"error": "verdict payload requires session, instance_id, verdict"})
        if confidence is not None and (isinstance(confidence, bool) or not isinstance(confidence, int)):
            return _error(422, {"error": "confidence must be an integer"})
        instance = next((i for i in state.instances if i.example_id == instance_id), None)
        if instance is None:
            return _error(404, {"error": "unknown instance"})
        condition = state.sessions.get(session)
        if condition is None:
            return _error(422, {"error": "session has no bound condition; call /judge/next first"})
        record = JudgmentRecord(
            rater_id=session,
            instance_id=instance_id,
            condition=condition,
            instance_correct=instance.correct,
            verdict=verdict,
            error_type=instance.error_type,
            confidence=confidence,
        )
        with state.lock:
            if (session, instance_id) in state.verdicts:
                return _error(409, {"error": "duplicate_judgment"})
            state.verdict_store.append(judgment_to_record(record))
            state.verdicts[(session, instance_id)] = record
            state.verdict_order.append(record)
        return {"recorded": judgment_to_record(record)}

    @app.get("/reports/rater")
    def rater_report():
        if not state.verdict_order:
            return {"conditions": {}, "per_question": {}}
        return aggregate_judgments(list(state.verdict_order)).to_dict()

    @app.get("/reports/stats")
    def stats_report(sample: int = 100, seed: int = 0):
        live = CorpusDocument(state.current_examples(), doc.provenance, [])
        return analysis.build_stats(live, sample_size=sample, seed=seed).to_dict()

    return app
