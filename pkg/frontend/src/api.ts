/** Typed client for the annotation service. All state lives on the server. */

import type {
  ConditionName,
  ExampleWire,
  ExplanationWire,
  JudgeDone,
  JudgePayload,
  JudgmentWire,
  Label,
  PatternWire,
  Span,
  ViolationWire,
} from "./schema.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
    message?: string,
  ) {
    super(message ?? `request failed with status ${status}`);
  }
}

export interface ExampleListing {
  items: { id: string; label: Label; annotated: boolean }[];
  page: number;
  page_size: number;
  total: number;
}

export interface AnnotationBody {
  version?: number;
  label: Label;
  explanation?: ExplanationWire | null;
  answers?: Span[] | null;
}

export type AnnotationResult =
  | { ok: true; version: number; warnings: ViolationWire[] }
  | { ok: false; status: 422; violations: ViolationWire[]; warnings: ViolationWire[] }
  | { ok: false; status: 409; currentVersion: number };

export type PreviewResult =
  | { ok: true; pattern: PatternWire }
  | { ok: false; violations: ViolationWire[]; error?: { code: string; message: string } };

export type VerdictResult =
  | { ok: true; recorded: JudgmentWire }
  | { ok: false; status: number; error: string };

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<{ status: number; body: any }> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    return { status: response.status, body };
  }

  private async json(path: string, init?: RequestInit): Promise<any> {
    const { status, body } = await this.request(path, init);
    if (status < 200 || status >= 300) throw new ApiError(status, body);
    return body;
  }

  private post(path: string, payload: unknown): Promise<{ status: number; body: any }> {
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  listExamples(page = 1, pageSize = 50): Promise<ExampleListing> {
    return this.json(`/examples?page=${page}&page_size=${pageSize}`);
  }

  async getExample(id: string): Promise<{ example: ExampleWire; version: number }> {
    return this.json(`/examples/${encodeURIComponent(id)}`);
  }

  async postAnnotation(id: string, annotation: AnnotationBody): Promise<AnnotationResult> {
    const { status, body } = await this.post(`/examples/${encodeURIComponent(id)}/annotation`, annotation);
    if (status === 200) return { ok: true, version: body.version, warnings: body.warnings ?? [] };
    if (status === 422)
      return { ok: false, status, violations: body?.violations ?? [], warnings: body?.warnings ?? [] };
    if (status === 409) return { ok: false, status, currentVersion: body?.current_version ?? 0 };
    throw new ApiError(status, body);
  }

  async patternPreview(id: string, explanation: ExplanationWire): Promise<PreviewResult> {
    const { status, body } = await this.post(`/examples/${encodeURIComponent(id)}/pattern-preview`, {
      explanation,
    });
    if (status === 200) return { ok: true, pattern: body };
    if (status === 422)
      return { ok: false, violations: body?.violations ?? [], error: body?.error };
    throw new ApiError(status, body);
  }

  judgeNext(condition: ConditionName, session: string): Promise<JudgePayload | JudgeDone> {
    return this.json(
      `/judge/next?condition=${encodeURIComponent(condition)}&session=${encodeURIComponent(session)}`,
    );
  }

  async postVerdict(body: {
    session: string;
    instance_id: string;
    verdict: boolean;
    confidence?: number;
  }): Promise<VerdictResult> {
    const { status, body: payload } = await this.post("/judge/verdict", body);
    if (status === 200) return { ok: true, recorded: payload.recorded };
    return { ok: false, status, error: payload?.error ?? "request failed" };
  }

  raterReport(): Promise<any> {
    return this.json("/reports/rater");
  }

  statsReport(): Promise<any> {
    return this.json("/reports/stats");
  }
}
