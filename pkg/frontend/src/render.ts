/**
 * Pure HTML-string renderers. Highlights may nest (an answer span inside
 * the sentence highlight), so text is cut at every span edge and each
 * segment carries the classes of all highlights covering it. Offsets are
 * code points.
 */

import { codePointToUtf16 } from "./offsets.js";
import type { EqualityWire, JudgePayload, Span } from "./schema.js";

export interface Highlight {
  start: number;
  end: number;
  cls: string;
}

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderHighlighted(text: string, highlights: Highlight[]): string {
  const total = [...text].length;
  const edges = new Set<number>([0, total]);
  for (const h of highlights) {
    edges.add(Math.max(0, Math.min(h.start, total)));
    edges.add(Math.max(0, Math.min(h.end, total)));
  }
  const cuts = [...edges].sort((x, y) => x - y);
  const parts: string[] = [];
  for (let i = 0; i + 1 < cuts.length; i += 1) {
    const a = cuts[i]!;
    const b = cuts[i + 1]!;
    const piece = text.slice(codePointToUtf16(text, a), codePointToUtf16(text, b));
    const classes = highlights.filter((h) => h.start <= a && b <= h.end).map((h) => h.cls);
    if (classes.length === 0) {
      parts.push(escapeHtml(piece));
    } else {
      parts.push(
        `<span class="${[...new Set(classes)].join(" ")}" data-start="${a}" data-end="${b}">` +
          `${escapeHtml(piece)}</span>`,
      );
    }
  }
  return parts.join("");
}

const EQ_PALETTE_SIZE = 6;

export function equalityClass(index: number): string {
  return `hl-eq hl-eq-${index % EQ_PALETTE_SIZE}`;
}

export interface JudgeHighlights {
  question: Highlight[];
  passage: Highlight[];
  implicit: { index: number; prep: string; anchor?: Span }[];
}

/** Highlight sets a judging payload entitles; never invents fields. */
export function highlightsForJudgePayload(payload: JudgePayload): JudgeHighlights {
  const question: Highlight[] = [];
  const passage: Highlight[] = payload.answer.map(([start, end]) => ({
    start,
    end,
    cls: "hl-answer",
  }));
  if (payload.sentence) {
    passage.push({ start: payload.sentence[0], end: payload.sentence[1], cls: "hl-sentence" });
  }
  const implicit: JudgeHighlights["implicit"] = [];
  (payload.equalities ?? []).forEach((eq: EqualityWire, index: number) => {
    question.push({ start: eq.question[0], end: eq.question[1], cls: equalityClass(index) });
    const m = eq.mention;
    if (m.kind === "explicit") {
      passage.push({ start: m.span[0], end: m.span[1], cls: equalityClass(index) });
    } else if (m.kind === "implicit_phrase") {
      passage.push({ start: m.anchor[0], end: m.anchor[1], cls: equalityClass(index) });
      implicit.push({ index, prep: m.prep, anchor: m.anchor });
    } else if (m.kind === "implicit_sentence") {
      implicit.push({ index, prep: m.prep });
    }
    // title mentions have no passage-side span to paint
  });
  return { question, passage, implicit };
}

export function renderJudgeView(payload: JudgePayload): string {
  const { question, passage, implicit } = highlightsForJudgePayload(payload);
  const noteItems = implicit
    .map(
      (m) =>
        `<li class="${equalityClass(m.index)}">implicit "${escapeHtml(m.prep)}" argument` +
        `${m.anchor ? " on the underlined phrase" : " on the whole sentence"}</li>`,
    )
    .join("");
  return [
    `<h2 class="judge-title">${escapeHtml(payload.title)}</h2>`,
    `<p class="judge-question">${renderHighlighted(payload.question, question)}</p>`,
    `<p class="judge-passage">${renderHighlighted(payload.passage, passage)}</p>`,
    noteItems ? `<ul class="judge-implicit">${noteItems}</ul>` : "",
  ].join("\n");
}
