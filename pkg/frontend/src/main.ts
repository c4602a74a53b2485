import { ApiClient } from "./api.js";
import { mountAnnotate, mountJudge } from "./dom.js";
import type { ConditionName } from "./schema.js";

async function pickExample(api: ApiClient): Promise<string> {
  const listing = await api.listExamples(1, 100);
  const pending = listing.items.find((item) => !item.annotated) ?? listing.items[0];
  if (!pending) throw new Error("corpus is empty");
  return pending.id;
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get("api") ?? "");
  const mode = params.get("mode") ?? "annotate";
  if (mode === "judge") {
    const condition = (params.get("condition") ?? "none") as ConditionName;
    const session = params.get("session") ?? `anon-${Math.random().toString(36).slice(2, 8)}`;
    await mountJudge(api, session, condition);
  } else {
    const id = params.get("id") ?? (await pickExample(api));
    await mountAnnotate(api, id);
  }
}

boot().catch((error) => {
  const root = document.getElementById("app");
  if (root) root.textContent = `failed to start: ${error}`;
  console.error(error);
});
