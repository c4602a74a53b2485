import { describe, expect, it } from "vitest";

import { EntitlementError, checkJudgePayload, excessFields } from "../src/entitlement.js";
import type { ConditionName, JudgePayload } from "../src/schema.js";

function base(condition: ConditionName): JudgePayload {
  return {
    instance_id: "x",
    session: "s",
    condition,
    question: "q",
    passage: "p",
    title: "t",
    answer: [[0, 1]],
  };
}

describe("condition entitlements (exhaustive)", () => {
  it("none: answer only", () => {
    expect(excessFields("none", base("none"))).toEqual([]);
    expect(() =>
      checkJudgePayload("none", { ...base("none"), sentence: [0, 1] } as object),
    ).toThrow(EntitlementError);
    expect(() =>
      checkJudgePayload("none", { ...base("none"), equalities: [] } as object),
    ).toThrow(EntitlementError);
  });

  it("sentence: adds the sentence span, not equalities", () => {
    const payload = { ...base("sentence"), sentence: [0, 1] as [number, number] };
    expect(excessFields("sentence", payload)).toEqual([]);
    expect(() =>
      checkJudgePayload("sentence", { ...payload, equalities: [] } as object),
    ).toThrow(EntitlementError);
  });

  it("qed: adds equalities", () => {
    const payload = {
      ...base("qed"),
      sentence: [0, 1] as [number, number],
      equalities: [],
    };
    expect(excessFields("qed", payload)).toEqual([]);
    expect(checkJudgePayload("qed", payload)).toBe(payload);
  });

  it("reports every unentitled field", () => {
    const leaky = { ...base("none"), sentence: [0, 1], equalities: [], extra: 1 };
    expect(excessFields("none", leaky as object)).toEqual(["sentence", "equalities", "extra"]);
  });
});
