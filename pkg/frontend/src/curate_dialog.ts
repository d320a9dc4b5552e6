import { ApiClient, ApiError } from "./api.js";
import type { ActionResult } from "./types.js";

export interface CurateDialogHandle {
  element: HTMLElement;
  /** Resolves with the action result after confirm, or null on cancel. */
  done: Promise<ActionResult | null>;
}

export function openCurateDialog(
  doc: Document,
  host: HTMLElement,
  api: ApiClient,
  targetId: string,
  targetLabel: string,
): CurateDialogHandle {
  const backdrop = doc.createElement("div");
  backdrop.className = "modal-backdrop";
  const dialog = doc.createElement("div");
  dialog.className = "curate-dialog";
  dialog.setAttribute("role", "dialog");
  backdrop.appendChild(dialog);

  const question = doc.createElement("p");
  question.className = "curate-question";
  question.textContent = `Add "${targetLabel}" to the current best-of thread?`;
  dialog.appendChild(question);

  const errorLine = doc.createElement("p");
  errorLine.className = "modal-error";
  errorLine.hidden = true;
  dialog.appendChild(errorLine);

  const buttons = doc.createElement("div");
  buttons.className = "modal-buttons";
  const cancel = doc.createElement("button");
  cancel.className = "modal-cancel";
  cancel.textContent = "Cancel";
  const confirm = doc.createElement("button");
  confirm.className = "modal-confirm";
  confirm.textContent = "Curate";
  buttons.append(cancel, confirm);
  dialog.appendChild(buttons);

  let resolveDone: (result: ActionResult | null) => void;
  const done = new Promise<ActionResult | null>((resolve) => {
    resolveDone = resolve;
  });

  cancel.addEventListener("click", () => {
    backdrop.remove();
    resolveDone(null);
  });

  confirm.addEventListener("click", async () => {
    confirm.disabled = true;
    try {
      const result = await api.action("curate", { target_id: targetId });
      backdrop.remove();
      resolveDone(result);
    } catch (error) {
      confirm.disabled = false;
      errorLine.hidden = false;
      errorLine.textContent =
        error instanceof ApiError ? error.detail : String(error);
    }
  });

  host.appendChild(backdrop);
  return { element: backdrop, done };
}
