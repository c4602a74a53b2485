/** Wire types for the annotation service. All offsets are code-point indices. */

export type Span = [number, number];

export type Label = "valid_explanation" | "answer_only" | "no_answer";

export type MentionWire =
  | { kind: "explicit"; span: Span }
  | { kind: "implicit_phrase"; anchor: Span; prep: string }
  | { kind: "implicit_sentence"; prep: string }
  | { kind: "title"; span: Span };

export interface EqualityWire {
  question: Span;
  mention: MentionWire;
}

export interface AnswerWire {
  span: Span;
  resolved: Span;
}

export interface ExplanationWire {
  sentence: Span;
  equalities: EqualityWire[];
  answers: AnswerWire[];
}

export interface ExampleWire {
  id: string;
  title: string;
  url?: string;
  question: string;
  passage: string;
  sentence_boundaries: Span[];
  label: Label;
  explanation?: ExplanationWire;
  answers?: Span[];
}

export interface ViolationWire {
  code: string;
  field: string;
  offset: number;
  message: string;
  severity: "error" | "warning";
}

export interface PatternSlotWire {
  placeholder: string;
  kind: string;
  question_text: string;
  sentence_text: string | null;
  preposition: string | null;
}

export interface PatternWire {
  question_template: string;
  sentence_template: string;
  possessive_normalized: boolean;
  has_implicit: boolean;
  slots: PatternSlotWire[];
}

export type ConditionName = "none" | "sentence" | "qed";

export interface JudgePayload {
  instance_id: string;
  session: string;
  condition: ConditionName;
  question: string;
  passage: string;
  title: string;
  answer: Span[];
  sentence?: Span;
  equalities?: EqualityWire[];
}

export interface JudgeDone {
  done: true;
  session: string;
  condition: ConditionName;
}

export interface JudgmentWire {
  rater_id: string;
  instance_id: string;
  condition: ConditionName;
  instance_correct: boolean;
  error_type?: "pred" | "ref";
  verdict: boolean;
  confidence?: number;
}

/** The closed preposition vocabulary for implicit mentions. */
export const PREPOSITIONS = [
  "of", "in", "at", "on", "by", "for", "from", "to", "with", "during",
] as const;
