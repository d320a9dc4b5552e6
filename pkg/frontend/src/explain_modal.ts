import { ApiClient, ApiError } from "./api.js";
import type { Reason } from "./types.js";

export interface ExplainTarget {
  id: string;
  kind: string;
}

export interface ExplainModalHandle {
  element: HTMLElement;
  /** Resolves once the modal closes; true when an explanation was posted. */
  done: Promise<boolean>;
}

export function openExplainModal(
  doc: Document,
  host: HTMLElement,
  api: ApiClient,
  target: ExplainTarget,
  reasons: Reason[],
): ExplainModalHandle {
  const backdrop = doc.createElement("div");
  backdrop.className = "modal-backdrop";
  const modal = doc.createElement("div");
  modal.className = "explain-modal";
  modal.setAttribute("role", "dialog");
  backdrop.appendChild(modal);

  const title = doc.createElement("h3");
  title.textContent = `Explain why ${target.id} deserves recognition`;
  modal.appendChild(title);

  const chipRow = doc.createElement("div");
  chipRow.className = "reason-chips";
  modal.appendChild(chipRow);

  const customRow = doc.createElement("div");
  customRow.className = "custom-reason-row";
  const customInput = doc.createElement("input");
  customInput.type = "text";
  customInput.className = "custom-reason-input";
  customInput.placeholder = "Custom reason…";
  const addButton = doc.createElement("button");
  addButton.className = "add-reason";
  addButton.textContent = "Add";
  customRow.append(customInput, addButton);
  modal.appendChild(customRow);

  const preview = doc.createElement("p");
  preview.className = "explain-preview";
  modal.appendChild(preview);

  const errorLine = doc.createElement("p");
  errorLine.className = "modal-error";
  errorLine.hidden = true;
  modal.appendChild(errorLine);

  const buttons = doc.createElement("div");
  buttons.className = "modal-buttons";
  const cancel = doc.createElement("button");
  cancel.className = "modal-cancel";
  cancel.textContent = "Cancel";
  const submit = doc.createElement("button");
  submit.className = "modal-submit";
  submit.textContent = "Post explanation";
  buttons.append(cancel, submit);
  modal.appendChild(buttons);

  const selected = new Set<string>();
  let known = reasons.slice();
  let previewEpoch = 0;

  let resolveDone: (posted: boolean) => void;
  const done = new Promise<boolean>((resolve) => {
    resolveDone = resolve;
  });
  const close = (posted: boolean) => {
    backdrop.remove();
    resolveDone(posted);
  };

  const customTexts = (): string[] => {
    const text = customInput.value.trim();
    return text ? [text] : [];
  };

  const syncSubmit = () => {
    submit.disabled = selected.size === 0 && customTexts().length === 0;
  };

  // The preview sentence always comes from the engine; a stale response
  // from an earlier keystroke must never overwrite a newer one.
  const refreshPreview = async () => {
    syncSubmit();
    const epoch = ++previewEpoch;
    if (selected.size === 0 && customTexts().length === 0) {
      preview.textContent = "";
      return;
    }
    try {
      const result = await api.explainPreview(
        target.kind,
        [...selected],
        customTexts(),
      );
      if (epoch === previewEpoch) preview.textContent = result.text;
    } catch (error) {
      if (epoch === previewEpoch) {
        preview.textContent = "";
        errorLine.hidden = false;
        errorLine.textContent =
          error instanceof ApiError ? error.detail : String(error);
      }
    }
  };

  const renderChips = () => {
    chipRow.innerHTML = "";
    for (const reason of known) {
      const chip = doc.createElement("button");
      chip.className = "reason-chip";
      chip.dataset.reasonId = reason.id;
      chip.textContent = reason.label;
      if (selected.has(reason.id)) chip.classList.add("selected");
      chip.addEventListener("click", () => {
        if (selected.has(reason.id)) {
          selected.delete(reason.id);
          chip.classList.remove("selected");
        } else {
          selected.add(reason.id);
          chip.classList.add("selected");
        }
        void refreshPreview();
      });
      chipRow.appendChild(chip);
    }
  };
  renderChips();
  syncSubmit();

  customInput.addEventListener("input", () => void refreshPreview());

  addButton.addEventListener("click", async () => {
    const label = customInput.value.trim();
    if (!label) return;
    try {
      const result = await api.addReason(label);
      known = result.reasons;
      selected.add(result.added.id);
      customInput.value = "";
      errorLine.hidden = true;
      renderChips();
      void refreshPreview();
    } catch (error) {
      errorLine.hidden = false;
      errorLine.textContent =
        error instanceof ApiError ? error.detail : String(error);
    }
  });

  submit.addEventListener("click", async () => {
    if (submit.disabled) return;
    submit.disabled = true;
    try {
      await api.action("explain", {
        target_id: target.id,
        reasons: [...selected],
        custom: customTexts(),
      });
      close(true);
    } catch (error) {
      submit.disabled = false;
      errorLine.hidden = false;
      errorLine.textContent =
        error instanceof ApiError ? error.detail : String(error);
    }
  });

  cancel.addEventListener("click", () => close(false));

  host.appendChild(backdrop);
  return { element: backdrop, done };
}
