/**
 * Judging-condition entitlements, mirrored from the service contract:
 * a session sees the answer highlight always, the sentence highlight from
 * the "sentence" condition up, and equality highlights only under "qed".
 */

import type { ConditionName } from "./schema.js";

const BASE = ["instance_id", "session", "condition", "question", "passage", "title", "answer"];

export const ENTITLED_FIELDS: Record<ConditionName, ReadonlySet<string>> = {
  none: new Set(BASE),
  sentence: new Set([...BASE, "sentence"]),
  qed: new Set([...BASE, "sentence", "equalities"]),
};

export class EntitlementError extends Error {
  constructor(
    public condition: ConditionName,
    public excess: string[],
  ) {
    super(`payload for condition "${condition}" carries unentitled fields: ${excess.join(", ")}`);
  }
}

/** Fields present in the payload that the condition does not entitle. */
export function excessFields(condition: ConditionName, payload: object): string[] {
  const allowed = ENTITLED_FIELDS[condition];
  return Object.keys(payload).filter((k) => !allowed.has(k));
}

/** Throws EntitlementError if the payload exceeds the condition's entitlement. */
export function checkJudgePayload<T extends object>(condition: ConditionName, payload: T): T {
  const excess = excessFields(condition, payload);
  if (excess.length > 0) throw new EntitlementError(condition, excess);
  return payload;
}
