/**
 * Browser glue: selection capture, rendering into the page, event wiring.
 * All annotation logic lives in the controllers; this layer only maps DOM
 * selections to code-point offsets and repaints.
 */

import { AnnotateController } from "./annotate.js";
import type { ApiClient } from "./api.js";
import { JudgeController } from "./judge.js";
import { snapToWordBoundaries, utf16ToCodePoint } from "./offsets.js";
import { equalityClass, escapeHtml, renderHighlighted, renderJudgeView, type Highlight } from "./render.js";
import { PREPOSITIONS, type ConditionName, type Span } from "./schema.js";

/** Code-point span of the current selection inside `container`, whose
 * rendered text is exactly `text`. Null when the selection is empty or
 * falls outside the container. */
export function selectionSpan(container: HTMLElement, text: string, snap = true): Span | null {
  const selection = window.getSelection();
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) return null;
  const range = selection.getRangeAt(0);
  if (!container.contains(range.startContainer) || !container.contains(range.endContainer)) {
    return null;
  }
  const offsetOf = (node: Node, offset: number): number => {
    const probe = document.createRange();
    probe.selectNodeContents(container);
    probe.setEnd(node, offset);
    return probe.toString().length; // UTF-16 units of preceding text
  };
  let a = offsetOf(range.startContainer, range.startOffset);
  let b = offsetOf(range.endContainer, range.endOffset);
  if (a > b) [a, b] = [b, a];
  let start = utf16ToCodePoint(text, a);
  let end = utf16ToCodePoint(text, b);
  if (snap) [start, end] = snapToWordBoundaries(text, start, end);
  return start < end ? [start, end] : null;
}

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function prepOptions(): string {
  return PREPOSITIONS.map((p) => `<option value="${p}">${p}</option>`).join("");
}

export async function mountAnnotate(api: ApiClient, exampleId: string): Promise<void> {
  const controller = new AnnotateController(api, exampleId);
  const example = await controller.load();
  const root = el("app");
  root.innerHTML = `
    <h1>Annotate: ${escapeHtml(example.id)}</h1>
    <p class="hint">1. click a sentence &middot; 2. select the answer in it (alt-select a
    resolution elsewhere in the passage first if the answer is a pronoun) &middot;
    3. select a question phrase, then its passage phrase or an implicit option &middot;
    4. check the preview and submit</p>
    <h2>${escapeHtml(example.title)}</h2>
    <p id="question" class="selectable"></p>
    <div id="passage" class="selectable"></div>
    <div class="controls">
      <button id="mark-answer">mark answer from selection</button>
      <button id="mark-question">question phrase from selection</button>
      <button id="mark-passage">passage phrase from selection</button>
      <select id="prep">${prepOptions()}</select>
      <button id="mark-implicit-phrase">implicit on selected phrase</button>
      <button id="mark-implicit-sentence">sentence-level implicit</button>
    </div>
    <div class="controls">
      <label><input type="checkbox" id="snap" checked> snap to words</label>
      <button id="label-answer-only">no single-sentence explanation</button>
      <button id="label-no-answer">no valid answer</button>
      <button id="submit">submit</button>
    </div>
    <pre id="preview"></pre>
    <ul id="messages"></ul>`;

  const passageEl = el("passage");
  const questionEl = el("question");
  const snapBox = el("snap") as HTMLInputElement;
  let resolvedCandidate: Span | null = null;

  const paint = async () => {
    const qHighlights: Highlight[] = controller.equalities.map((eq, i) => ({
      start: eq.question[0],
      end: eq.question[1],
      cls: equalityClass(i),
    }));
    if (controller.pendingQuestionSpan) {
      const [s, e] = controller.pendingQuestionSpan;
      qHighlights.push({ start: s, end: e, cls: "hl-pending" });
    }
    questionEl.innerHTML = renderHighlighted(example.question, qHighlights);

    const pHighlights: Highlight[] = [];
    const sentence = controller.sentenceSpan;
    if (sentence) pHighlights.push({ start: sentence[0], end: sentence[1], cls: "hl-sentence" });
    controller.answers.forEach((a) => {
      pHighlights.push({ start: a.span[0], end: a.span[1], cls: "hl-answer" });
      if (a.resolved[0] !== a.span[0] || a.resolved[1] !== a.span[1]) {
        pHighlights.push({ start: a.resolved[0], end: a.resolved[1], cls: "hl-resolved" });
      }
    });
    controller.equalities.forEach((eq, i) => {
      const m = eq.mention;
      if (m.kind === "explicit") {
        pHighlights.push({ start: m.span[0], end: m.span[1], cls: equalityClass(i) });
      } else if (m.kind === "implicit_phrase") {
        pHighlights.push({ start: m.anchor[0], end: m.anchor[1], cls: equalityClass(i) });
      }
    });
    passageEl.innerHTML = renderHighlighted(example.passage, pHighlights);

    const preview = await controller.preview();
    el("preview").textContent = preview.ok
      ? `Q: ${preview.pattern.question_template}\nS: ${preview.pattern.sentence_template}`
      : preview.violations.map((v) => `${v.code}: ${v.message}`).join("\n") || preview.error?.message || "";
  };

  passageEl.addEventListener("dblclick", () => {
    const span = selectionSpan(passageEl, example.passage, false);
    if (!span) return;
    const index = example.sentence_boundaries.findIndex(
      ([s, e]) => s <= span[0] && span[1] <= e,
    );
    if (index >= 0) {
      controller.selectSentence(index);
      void paint();
    }
  });

  el("mark-answer").addEventListener("click", () => {
    const span = selectionSpan(passageEl, example.passage, snapBox.checked);
    if (!span) return;
    const sentence = controller.sentenceSpan;
    if (sentence && (span[0] < sentence[0] || span[1] > sentence[1])) {
      // outside the sentence: remember as the resolution of the next answer
      resolvedCandidate = span;
    } else {
      controller.addAnswer(span, resolvedCandidate ?? undefined);
      resolvedCandidate = null;
    }
    void paint();
  });

  el("mark-question").addEventListener("click", () => {
    const span = selectionSpan(questionEl, example.question, snapBox.checked);
    if (!span) return;
    controller.selectQuestionSpan(span);
    void paint();
  });

  el("mark-passage").addEventListener("click", () => {
    const span = selectionSpan(passageEl, example.passage, snapBox.checked);
    if (!span) return;
    controller.completeWithSentenceSpan(span);
    void paint();
  });

  el("mark-implicit-phrase").addEventListener("click", () => {
    const span = selectionSpan(passageEl, example.passage, snapBox.checked);
    if (!span) return;
    controller.completeWithImplicitPhrase(span, (el("prep") as HTMLSelectElement).value);
    void paint();
  });

  el("mark-implicit-sentence").addEventListener("click", () => {
    controller.completeWithImplicitSentence((el("prep") as HTMLSelectElement).value);
    void paint();
  });

  el("label-answer-only").addEventListener("click", () => {
    controller.setLabel("answer_only");
    void paint();
  });
  el("label-no-answer").addEventListener("click", () => {
    controller.setLabel("no_answer");
    void paint();
  });

  el("submit").addEventListener("click", async () => {
    const result = await controller.submit();
    const messages = el("messages");
    if (result.ok) {
      messages.innerHTML = `<li class="ok">saved (version ${result.version})</li>`;
    } else if (result.status === 409) {
      messages.innerHTML = `<li class="error">someone else saved first; reload (server version ${result.currentVersion})</li>`;
    } else {
      messages.innerHTML = result.violations
        .map((v) => `<li class="error">${escapeHtml(v.code)} at ${escapeHtml(v.field)}: ${escapeHtml(v.message)}</li>`)
        .join("");
    }
  });

  await paint();
}

export async function mountJudge(
  api: ApiClient,
  session: string,
  condition: ConditionName,
): Promise<void> {
  const controller = new JudgeController(api, session, condition);
  const root = el("app");
  root.innerHTML = `
    <h1>Judging (${escapeHtml(condition)})</h1>
    <p class="hint">The highlighting is the output of an automated question
    answering system; it is incorrect about half of the time. Decide whether
    the highlighted answer is correct.</p>
    <div id="instance"></div>
    <div class="controls">
      <label>confidence <select id="confidence">
        <option value="">-</option>
        ${[1, 2, 3, 4, 5].map((v) => `<option value="${v}">${v}</option>`).join("")}
      </select></label>
      <button id="correct">correct</button>
      <button id="incorrect">incorrect</button>
    </div>
    <div id="status"></div>`;

  const render = () => {
    const instance = el("instance");
    if (controller.finished || !controller.current) {
      instance.innerHTML = "<p>No instances left for this session. Thank you.</p>";
      return;
    }
    instance.innerHTML = renderJudgeView(controller.current);
  };

  const vote = async (verdict: boolean) => {
    const confidenceRaw = (el("confidence") as HTMLSelectElement).value;
    const confidence = confidenceRaw ? Number(confidenceRaw) : undefined;
    const result = await controller.submit(verdict, confidence);
    el("status").textContent = result.ok ? "" : `note: ${result.error}`;
    render();
  };

  el("correct").addEventListener("click", () => void vote(true));
  el("incorrect").addEventListener("click", () => void vote(false));

  await controller.next();
  render();
}
