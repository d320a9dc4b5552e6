import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { openExplainModal } from "../src/explain_modal.js";
import type { Reason } from "../src/types.js";
import { makeFetchStub, type FetchStub } from "./helpers.js";

const tick = () => new Promise((resolve) => setTimeout(resolve, 0));

const DEFAULT_REASONS: Reason[] = [
  { id: "creative", label: "Creative", origin: "default" },
  { id: "helpful", label: "Helpful", origin: "default" },
  { id: "supportive", label: "Supportive", origin: "default" },
];

// A sentence no client-side template would produce: if it shows up in the
// preview, the text provably came from the stubbed endpoint.
const CANARY = "CANARY-7319: assembled server-side only";

function previewStub(): FetchStub {
  return makeFetchStub([
    {
      match: /\/api\/explain\/preview/,
      reply: () => ({ kind: "post", text: CANARY }),
    },
    {
      match: /\/api\/actions\/explain/,
      method: "POST",
      reply: (_url, body) => ({
        action: "explain",
        target_id: (body as { target_id: string }).target_id,
        text: CANARY,
      }),
    },
    {
      match: /\/api\/config\/reasons/,
      method: "PUT",
      reply: (_url, body) => {
        const label = (body as { label: string }).label;
        const added = { id: label.toLowerCase(), label, origin: "custom" };
        return { added, reasons: [...DEFAULT_REASONS, added] };
      },
    },
  ]);
}

function host(): HTMLElement {
  document.body.innerHTML = "";
  return document.body;
}

describe("openExplainModal", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("disables submit with no reasons selected", () => {
    const stub = previewStub();
    openExplainModal(
      document,
      host(),
      new ApiClient("", stub.fetch),
      { id: "t3_x", kind: "post" },
      DEFAULT_REASONS,
    );
    const submit = document.querySelector(".modal-submit") as HTMLButtonElement;
    expect(submit.disabled).toBe(true);
    expect(document.querySelector(".explain-preview")!.textContent).toBe("");
    expect(stub.calls).toHaveLength(0);
  });

  it("renders one chip per known reason", () => {
    const stub = previewStub();
    openExplainModal(
      document,
      host(),
      new ApiClient("", stub.fetch),
      { id: "t3_x", kind: "post" },
      DEFAULT_REASONS,
    );
    const chips = [...document.querySelectorAll(".reason-chip")].map(
      (chip) => (chip as HTMLElement).dataset.reasonId,
    );
    expect(chips).toEqual(["creative", "helpful", "supportive"]);
  });

  it("fetches the preview from the engine on every chip toggle", async () => {
    const stub = previewStub();
    openExplainModal(
      document,
      host(),
      new ApiClient("", stub.fetch),
      { id: "t3_x", kind: "post" },
      DEFAULT_REASONS,
    );
    (document.querySelector('[data-reason-id="creative"]') as HTMLElement).click();
    await tick();
    expect(document.querySelector(".explain-preview")!.textContent).toBe(CANARY);
    expect(stub.calls).toHaveLength(1);
    expect(stub.calls[0].url).toBe("/api/explain/preview?kind=post&reason=creative");

    (document.querySelector('[data-reason-id="helpful"]') as HTMLElement).click();
    await tick();
    expect(stub.calls[1].url).toBe(
      "/api/explain/preview?kind=post&reason=creative&reason=helpful",
    );
  });

  it("includes typed custom text in the live preview request", async () => {
    const stub = previewStub();
    openExplainModal(
      document,
      host(),
      new ApiClient("", stub.fetch),
      { id: "t3_x", kind: "post" },
      DEFAULT_REASONS,
    );
    const input = document.querySelector(".custom-reason-input") as HTMLInputElement;
    input.value = "one of a kind";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    await tick();
    expect(stub.calls[0].url).toBe(
      "/api/explain/preview?kind=post&custom=one+of+a+kind",
    );
    const submit = document.querySelector(".modal-submit") as HTMLButtonElement;
    expect(submit.disabled).toBe(false);
  });

  it("persists custom reasons through PUT and selects the new chip", async () => {
    const stub = previewStub();
    openExplainModal(
      document,
      host(),
      new ApiClient("", stub.fetch),
      { id: "t3_x", kind: "post" },
      DEFAULT_REASONS,
    );
    const input = document.querySelector(".custom-reason-input") as HTMLInputElement;
    input.value = "Wholesome";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    await tick();
    (document.querySelector(".add-reason") as HTMLButtonElement).click();
    await tick();

    const put = stub.calls.find((call) => call.method === "PUT");
    expect(put).toBeDefined();
    expect(put!.body).toEqual({ label: "Wholesome" });
    const chip = document.querySelector('[data-reason-id="wholesome"]') as HTMLElement;
    expect(chip).not.toBeNull();
    expect(chip.classList.contains("selected")).toBe(true);
    expect(input.value).toBe("");
  });

  it("submits selected ids plus custom text and closes on 2xx", async () => {
    const stub = previewStub();
    const modal = openExplainModal(
      document,
      host(),
      new ApiClient("", stub.fetch),
      { id: "t3_x", kind: "post" },
      DEFAULT_REASONS,
    );
    (document.querySelector('[data-reason-id="creative"]') as HTMLElement).click();
    (document.querySelector('[data-reason-id="helpful"]') as HTMLElement).click();
    const input = document.querySelector(".custom-reason-input") as HTMLInputElement;
    input.value = "one of a kind";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    await tick();

    (document.querySelector(".modal-submit") as HTMLButtonElement).click();
    const posted = await modal.done;
    expect(posted).toBe(true);
    const post = stub.calls.find((call) => call.method === "POST");
    expect(post!.url).toBe("/api/actions/explain");
    expect(post!.body).toEqual({
      target_id: "t3_x",
      reasons: ["creative", "helpful"],
      custom: ["one of a kind"],
    });
    expect(document.querySelector(".explain-modal")).toBeNull();
  });

  it("cancel closes without posting", async () => {
    const stub = previewStub();
    const modal = openExplainModal(
      document,
      host(),
      new ApiClient("", stub.fetch),
      { id: "t3_x", kind: "post" },
      DEFAULT_REASONS,
    );
    (document.querySelector(".modal-cancel") as HTMLButtonElement).click();
    expect(await modal.done).toBe(false);
    expect(stub.calls.filter((call) => call.method === "POST")).toHaveLength(0);
    expect(document.querySelector(".explain-modal")).toBeNull();
  });

  it("shows the engine's error and stays open when submit fails", async () => {
    const stub = makeFetchStub([
      {
        match: /\/api\/explain\/preview/,
        reply: () => ({ kind: "post", text: CANARY }),
      },
      {
        match: /\/api\/actions\/explain/,
        method: "POST",
        status: 422,
        reply: () => ({ error: "empty_reason", detail: "no reasons given" }),
      },
    ]);
    openExplainModal(
      document,
      host(),
      new ApiClient("", stub.fetch),
      { id: "t3_x", kind: "post" },
      DEFAULT_REASONS,
    );
    (document.querySelector('[data-reason-id="creative"]') as HTMLElement).click();
    await tick();
    (document.querySelector(".modal-submit") as HTMLButtonElement).click();
    await tick();
    const error = document.querySelector(".modal-error") as HTMLElement;
    expect(error.hidden).toBe(false);
    expect(error.textContent).toBe("no reasons given");
    expect(document.querySelector(".explain-modal")).not.toBeNull();
  });
});
