/**
 * Judging flow controller: one session, one condition, a stream of
 * instances. Every payload is entitlement-checked before rendering so a
 * service regression cannot leak extra highlights into a lower condition.
 * Conflict responses (duplicate verdicts after a reload) are resolved by
 * advancing with fresh state.
 */

import type { ApiClient, VerdictResult } from "./api.js";
import { checkJudgePayload } from "./entitlement.js";
import type { ConditionName, JudgeDone, JudgePayload } from "./schema.js";

export class JudgeController {
  current: JudgePayload | null = null;
  finished = false;

  constructor(
    private api: ApiClient,
    readonly session: string,
    readonly condition: ConditionName,
  ) {}

  async next(): Promise<JudgePayload | null> {
    const payload = await this.api.judgeNext(this.condition, this.session);
    if ("done" in payload && (payload as JudgeDone).done) {
      this.current = null;
      this.finished = true;
      return null;
    }
    this.current = checkJudgePayload(this.condition, payload as JudgePayload);
    return this.current;
  }

  async submit(verdict: boolean, confidence?: number): Promise<VerdictResult> {
    if (!this.current) throw new Error("no instance loaded");
    const body: { session: string; instance_id: string; verdict: boolean; confidence?: number } = {
      session: this.session,
      instance_id: this.current.instance_id,
      verdict,
    };
    if (confidence !== undefined) body.confidence = confidence;
    const result = await this.api.postVerdict(body);
    if (result.ok || result.status === 409) {
      // 409 means this instance was already judged (stale tab); either way
      // the verdict is durable server-side, so advance.
      await this.next();
    }
    return result;
  }
}
