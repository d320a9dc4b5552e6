import { debounce, snapToStep } from "./state.js";
import type { FilterMetaEntry, FiltersMeta } from "./types.js";

export interface FilterPanelChange {
  filters: Record<string, number>;
  sort: string;
}

export interface FilterPanelHandle {
  element: HTMLElement;
  /** Re-syncs checkboxes, sliders, and the sort menu from external state. */
  update(filters: Record<string, number>, sort: string): void;
  read(): FilterPanelChange;
}

interface Row {
  entry: FilterMetaEntry;
  checkbox: HTMLInputElement;
  slider: HTMLInputElement;
  valueBox: HTMLElement;
  wrap: HTMLElement;
}

function sortLabel(token: string): string {
  return token.replace(/_/g, " ");
}

export function initFilterPanel(
  doc: Document,
  meta: FiltersMeta,
  initialFilters: Record<string, number>,
  initialSort: string,
  onChange: (change: FilterPanelChange) => void,
  debounceMs = 250,
): FilterPanelHandle {
  const panel = doc.createElement("aside");
  panel.className = "filter-panel";

  const sortRow = doc.createElement("div");
  sortRow.className = "sort-row";
  const sortCaption = doc.createElement("label");
  sortCaption.textContent = "Sort by";
  const sortSelect = doc.createElement("select");
  sortSelect.className = "sort-select";
  for (const token of meta.sorts) {
    const option = doc.createElement("option");
    option.value = token;
    option.textContent = sortLabel(token);
    option.disabled = meta.disabled_sorts.includes(token);
    sortSelect.appendChild(option);
  }
  sortSelect.value = initialSort;
  sortRow.append(sortCaption, sortSelect);
  panel.appendChild(sortRow);

  const heading = doc.createElement("h3");
  heading.textContent = "Filters";
  panel.appendChild(heading);

  const rows: Row[] = [];
  const current: Record<string, number> = { ...initialFilters };

  const emit = debounce(() => {
    onChange({ filters: { ...current }, sort: sortSelect.value });
  }, debounceMs);

  const syncRow = (row: Row) => {
    const active = row.checkbox.checked;
    row.wrap.hidden = !active;
    row.valueBox.textContent = active ? String(Number(row.slider.value)) : "";
  };

  for (const entry of meta.filters) {
    const row = doc.createElement("div");
    row.className = "filter-row";
    row.dataset.key = entry.key;

    const checkbox = doc.createElement("input");
    checkbox.type = "checkbox";
    checkbox.id = `filter-${entry.key}`;
    const caption = doc.createElement("label");
    caption.htmlFor = checkbox.id;
    caption.textContent = entry.label;

    const wrap = doc.createElement("div");
    wrap.className = "slider-wrap";
    const slider = doc.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = String(entry.max);
    slider.step = String(entry.step);
    slider.value = "0";
    const valueBox = doc.createElement("span");
    valueBox.className = "value-box";
    wrap.append(slider, valueBox);

    const state: Row = { entry, checkbox, slider, valueBox, wrap };
    rows.push(state);

    const initial = initialFilters[entry.key];
    if (initial !== undefined) {
      checkbox.checked = true;
      slider.value = String(snapToStep(initial, entry.step, entry.max));
    }
    syncRow(state);

    checkbox.addEventListener("change", () => {
      if (checkbox.checked) {
        current[entry.key] = snapToStep(
          Number(slider.value),
          entry.step,
          entry.max,
        );
      } else {
        delete current[entry.key];
      }
      syncRow(state);
      emit();
    });

    slider.addEventListener("input", () => {
      const snapped = snapToStep(Number(slider.value), entry.step, entry.max);
      slider.value = String(snapped);
      if (checkbox.checked) {
        current[entry.key] = snapped;
        syncRow(state);
        emit();
      }
    });

    row.append(checkbox, caption, wrap);
    panel.appendChild(row);
  }

  sortSelect.addEventListener("change", () => emit());

  return {
    element: panel,
    update(filters, sort) {
      sortSelect.value = sort;
      for (const row of rows) {
        const value = filters[row.entry.key];
        row.checkbox.checked = value !== undefined;
        if (value !== undefined) {
          row.slider.value = String(
            snapToStep(value, row.entry.step, row.entry.max),
          );
        }
        syncRow(row);
      }
      for (const key of Object.keys(current)) delete current[key];
      Object.assign(current, filters);
    },
    read() {
      return { filters: { ...current }, sort: sortSelect.value };
    },
  };
}
