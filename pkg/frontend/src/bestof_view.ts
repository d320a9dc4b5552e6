import type { BestofResponse, ThreadEntry } from "./types.js";

function renderSection(
  doc: Document,
  heading: string,
  entries: ThreadEntry[],
  label: (entry: ThreadEntry) => string,
  onOpen: (id: string) => void,
): HTMLElement {
  const section = doc.createElement("section");
  section.className = "bestof-section";
  const head = doc.createElement("h2");
  head.textContent = heading;
  section.appendChild(head);

  if (entries.length === 0) {
    const placeholder = doc.createElement("p");
    placeholder.className = "bestof-empty";
    placeholder.textContent = "—";
    section.appendChild(placeholder);
    return section;
  }

  const list = doc.createElement("ul");
  for (const entry of entries) {
    const item = doc.createElement("li");
    const link = doc.createElement("a");
    link.textContent = label(entry);
    link.href = `#/posts/${encodeURIComponent(entry.id)}`;
    link.dataset.id = entry.id;
    link.addEventListener("click", (event) => {
      event.preventDefault();
      onOpen(entry.id);
    });
    item.appendChild(link);
    list.appendChild(item);
  }
  section.appendChild(list);
  return section;
}

export function renderBestofView(
  doc: Document,
  thread: BestofResponse,
  onOpen: (id: string) => void,
): HTMLElement {
  const page = doc.createElement("div");
  page.className = "bestof-view";

  const title = doc.createElement("h1");
  title.textContent = thread.title;
  page.appendChild(title);

  const period = doc.createElement("p");
  period.className = "bestof-period";
  period.textContent = thread.period;
  page.appendChild(period);

  page.appendChild(
    renderSection(
      doc,
      "Submissions",
      thread.submissions,
      (entry) => entry.title ?? entry.id,
      onOpen,
    ),
  );
  page.appendChild(
    renderSection(
      doc,
      "Comments",
      thread.comments,
      (entry) => entry.preview ?? entry.id,
      onOpen,
    ),
  );
  return page;
}
