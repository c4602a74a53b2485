/**
 * Annotation flow controller, one instance per example.
 *
 * Follows the four-step procedure: pick the sentence entailing the answer,
 * mark the answer span(s) with optional coreference resolution, link
 * referentially equal phrases (explicit, implicit with a preposition, or
 * sentence-level implicit), and preview the extracted pattern. The
 * controller owns draft state and payload construction; rendering and
 * selection mapping live elsewhere. Offsets are code points throughout,
 * and the server-side validator remains the authority: submit surfaces
 * its violations verbatim.
 */

import type { AnnotationResult, ApiClient, PreviewResult } from "./api.js";
import type {
  AnswerWire,
  EqualityWire,
  ExampleWire,
  ExplanationWire,
  Label,
  MentionWire,
  Span,
  ViolationWire,
} from "./schema.js";
import { sliceByCodePoints } from "./offsets.js";

export interface SentenceView {
  index: number;
  span: Span;
  text: string;
}

export class AnnotateController {
  example: ExampleWire | null = null;
  version = 0;
  sentenceIndex: number | null = null;
  answers: AnswerWire[] = [];
  equalities: EqualityWire[] = [];
  label: Label = "valid_explanation";
  pendingQuestionSpan: Span | null = null;
  violations: ViolationWire[] = [];
  warnings: ViolationWire[] = [];

  constructor(
    private api: ApiClient,
    private exampleId: string,
  ) {}

  async load(): Promise<ExampleWire> {
    const { example, version } = await this.api.getExample(this.exampleId);
    this.example = example;
    this.version = version;
    return example;
  }

  private require(): ExampleWire {
    if (!this.example) throw new Error("example not loaded");
    return this.example;
  }

  get sentences(): SentenceView[] {
    const ex = this.require();
    return ex.sentence_boundaries.map((span, index) => ({
      index,
      span,
      text: sliceByCodePoints(ex.passage, span[0], span[1]),
    }));
  }

  get sentenceSpan(): Span | null {
    if (this.sentenceIndex === null) return null;
    return this.require().sentence_boundaries[this.sentenceIndex] ?? null;
  }

  /** Step 1. Changing the sentence drops in-sentence selections. */
  selectSentence(index: number): void {
    const ex = this.require();
    if (index < 0 || index >= ex.sentence_boundaries.length) {
      throw new Error(`no sentence ${index}`);
    }
    if (this.sentenceIndex !== index) {
      this.answers = [];
      this.equalities = [];
      this.pendingQuestionSpan = null;
    }
    this.sentenceIndex = index;
  }

  /** Step 2. `resolved` defaults to the span itself (no coreference). */
  addAnswer(span: Span, resolved?: Span): void {
    this.answers.push({ span, resolved: resolved ?? span });
  }

  removeAnswer(index: number): void {
    this.answers.splice(index, 1);
  }

  /** Step 3, first half: a question phrase awaiting its passage partner. */
  selectQuestionSpan(span: Span): void {
    this.pendingQuestionSpan = span;
  }

  private completeEquality(mention: MentionWire): void {
    if (!this.pendingQuestionSpan) throw new Error("select a question span first");
    this.equalities.push({ question: this.pendingQuestionSpan, mention });
    this.pendingQuestionSpan = null;
  }

  completeWithSentenceSpan(span: Span): void {
    this.completeEquality({ kind: "explicit", span });
  }

  completeWithImplicitPhrase(anchor: Span, prep: string): void {
    this.completeEquality({ kind: "implicit_phrase", anchor, prep });
  }

  completeWithImplicitSentence(prep: string): void {
    this.completeEquality({ kind: "implicit_sentence", prep });
  }

  removeEquality(index: number): void {
    this.equalities.splice(index, 1);
  }

  /** Category-2/3 escape hatches. */
  setLabel(label: Label): void {
    this.label = label;
  }

  buildExplanation(): ExplanationWire | null {
    const sentence = this.sentenceSpan;
    if (this.label !== "valid_explanation" || sentence === null) return null;
    return { sentence, equalities: this.equalities, answers: this.answers };
  }

  buildAnnotation(): { version: number; label: Label; explanation: ExplanationWire | null; answers: Span[] | null } {
    return {
      version: this.version,
      label: this.label,
      explanation: this.buildExplanation(),
      answers: this.label === "answer_only" && this.answers.length
        ? this.answers.map((a) => a.span)
        : null,
    };
  }

  /** Local gate: structurally incomplete drafts never reach the network. */
  localViolations(): ViolationWire[] {
    if (this.label !== "valid_explanation") return [];
    const out: ViolationWire[] = [];
    if (this.sentenceIndex === null) {
      out.push({
        code: "MISSING_SENTENCE",
        field: "explanation.sentence",
        offset: 0,
        message: "select the sentence that entails the answer",
        severity: "error",
      });
    }
    if (this.answers.length === 0) {
      out.push({
        code: "NO_ANSWERS",
        field: "explanation.answers",
        offset: 0,
        message: "mark at least one answer span",
        severity: "error",
      });
    }
    return out;
  }

  async preview(): Promise<PreviewResult> {
    const explanation = this.buildExplanation();
    if (!explanation) return { ok: false, violations: this.localViolations() };
    return this.api.patternPreview(this.exampleId, explanation);
  }

  async submit(): Promise<AnnotationResult> {
    const local = this.localViolations();
    if (local.length > 0) {
      this.violations = local;
      return { ok: false, status: 422, violations: local, warnings: [] };
    }
    const result = await this.api.postAnnotation(this.exampleId, this.buildAnnotation());
    if (result.ok) {
      this.version = result.version;
      this.violations = [];
      this.warnings = result.warnings;
    } else if (result.status === 422) {
      this.violations = result.violations;
      this.warnings = result.warnings;
    }
    return result;
  }
}
