import { describe, expect, it } from "vitest";

import {
  apiBaseUrl,
  loadConsoleConfig,
  saveConsoleConfig,
} from "../src/config.js";

function memoryStorage() {
  const map = new Map<string, string>();
  return {
    getItem: (key: string) => map.get(key) ?? null,
    setItem: (key: string, value: string) => void map.set(key, value),
  };
}

describe("console config", () => {
  it("defaults to all actions visible", () => {
    const config = loadConsoleConfig(memoryStorage());
    expect(config.hiddenActions.size).toBe(0);
    expect(config.moderator).toBe("mod");
  });

  it("round-trips hidden actions through storage", () => {
    const storage = memoryStorage();
    const config = loadConsoleConfig(storage);
    config.hiddenActions.add("curate");
    config.moderator = "alice";
    saveConsoleConfig(storage, config);
    const reloaded = loadConsoleConfig(storage);
    expect([...reloaded.hiddenActions]).toEqual(["curate"]);
    expect(reloaded.moderator).toBe("alice");
  });

  it("ignores unknown verbs and corrupt payloads", () => {
    const storage = memoryStorage();
    storage.setItem(
      "posiqueue-console-config",
      JSON.stringify({ hiddenActions: ["demote", "award"] }),
    );
    expect([...loadConsoleConfig(storage).hiddenActions]).toEqual(["award"]);
    storage.setItem("posiqueue-console-config", "{not json");
    expect(loadConsoleConfig(storage).hiddenActions.size).toBe(0);
  });

  it("reads the API base from the page's runtime config", () => {
    expect(apiBaseUrl({} as Window)).toBe("");
    expect(
      apiBaseUrl({ POSIQUEUE_API_BASE: "http://127.0.0.1:9000" } as unknown as Window),
    ).toBe("http://127.0.0.1:9000");
  });
});
