import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { openCurateDialog } from "../src/curate_dialog.js";
import { makeFetchStub } from "./helpers.js";

const tick = () => new Promise((resolve) => setTimeout(resolve, 0));

describe("openCurateDialog", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("asks before posting and names the target", () => {
    const stub = makeFetchStub([]);
    openCurateDialog(
      document,
      document.body,
      new ApiClient("", stub.fetch),
      "t3_x",
      "A lovely post",
    );
    expect(document.querySelector(".curate-question")!.textContent).toContain(
      "A lovely post",
    );
    expect(stub.calls).toHaveLength(0);
  });

  it("confirm posts the curate action and resolves with the result", async () => {
    const stub = makeFetchStub([
      {
        match: /\/api\/actions\/curate/,
        method: "POST",
        reply: () => ({ action: "curate", target_id: "t3_x", changed: true }),
      },
    ]);
    const dialog = openCurateDialog(
      document,
      document.body,
      new ApiClient("", stub.fetch),
      "t3_x",
      "A lovely post",
    );
    (document.querySelector(".modal-confirm") as HTMLButtonElement).click();
    const result = await dialog.done;
    expect(result).toMatchObject({ action: "curate", changed: true });
    expect(stub.calls[0]).toMatchObject({
      url: "/api/actions/curate",
      method: "POST",
      body: { target_id: "t3_x" },
    });
    expect(document.querySelector(".curate-dialog")).toBeNull();
  });

  it("cancel closes without any network traffic", async () => {
    const stub = makeFetchStub([]);
    const dialog = openCurateDialog(
      document,
      document.body,
      new ApiClient("", stub.fetch),
      "t3_x",
      "A lovely post",
    );
    (document.querySelector(".modal-cancel") as HTMLButtonElement).click();
    expect(await dialog.done).toBeNull();
    expect(stub.calls).toHaveLength(0);
    expect(document.querySelector(".curate-dialog")).toBeNull();
  });

  it("shows a 409 inline and keeps the dialog open", async () => {
    const stub = makeFetchStub([
      {
        match: /\/api\/actions\/curate/,
        method: "POST",
        status: 409,
        reply: () => ({
          error: "duplicate",
          detail: "t3_x is already curated in this period",
        }),
      },
    ]);
    openCurateDialog(
      document,
      document.body,
      new ApiClient("", stub.fetch),
      "t3_x",
      "A lovely post",
    );
    (document.querySelector(".modal-confirm") as HTMLButtonElement).click();
    await tick();
    const error = document.querySelector(".modal-error") as HTMLElement;
    expect(error.hidden).toBe(false);
    expect(error.textContent).toBe("t3_x is already curated in this period");
    expect(document.querySelector(".curate-dialog")).not.toBeNull();
    const confirm = document.querySelector(".modal-confirm") as HTMLButtonElement;
    expect(confirm.disabled).toBe(false);
  });
});
