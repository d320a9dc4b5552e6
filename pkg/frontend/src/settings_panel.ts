import { ACTION_BUTTONS, type ConsoleConfig } from "./config.js";

/** Checkbox per action button; unchecking hides it everywhere in the UI. */
export function initSettingsPanel(
  doc: Document,
  config: ConsoleConfig,
  onChange: (config: ConsoleConfig) => void,
): HTMLElement {
  const panel = doc.createElement("details");
  panel.className = "settings-panel";
  const summary = doc.createElement("summary");
  summary.textContent = "Console settings";
  panel.appendChild(summary);

  const note = doc.createElement("p");
  note.className = "settings-note";
  note.textContent = "Hidden buttons stay available to other moderators.";
  panel.appendChild(note);

  for (const verb of ACTION_BUTTONS) {
    const row = doc.createElement("label");
    row.className = "settings-row";
    const box = doc.createElement("input");
    box.type = "checkbox";
    box.dataset.verb = verb;
    box.checked = !config.hiddenActions.has(verb);
    box.addEventListener("change", () => {
      if (box.checked) {
        config.hiddenActions.delete(verb);
      } else {
        config.hiddenActions.add(verb);
      }
      onChange(config);
    });
    const caption = doc.createElement("span");
    caption.textContent = `Show ${verb} button`;
    row.append(box, caption);
    panel.appendChild(row);
  }
  return panel;
}
