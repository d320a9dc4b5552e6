import { describe, expect, it, vi } from "vitest";

import { renderBestofView } from "../src/bestof_view.js";
import type { BestofResponse } from "../src/types.js";

interface ParsedThread {
  title: string;
  submissions: { label: string; id: string }[];
  comments: { label: string; id: string }[];
  placeholders: string[];
}

// Reduces the engine's markdown to its semantic content so the DOM can be
// compared against it without caring about markup syntax.
function parseThreadMarkdown(markdown: string): ParsedThread {
  const out: ParsedThread = {
    title: "",
    submissions: [],
    comments: [],
    placeholders: [],
  };
  let section: "submissions" | "comments" | null = null;
  for (const line of markdown.split("\n")) {
    if (line.startsWith("# ")) {
      out.title = line.slice(2);
    } else if (line === "## Submissions") {
      section = "submissions";
    } else if (line === "## Comments") {
      section = "comments";
    } else if (line === "—") {
      out.placeholders.push(section ?? "?");
    } else {
      const entry = line.match(/^- \[(.*)\]\(\/(?:posts|comments)\/(.+)\)$/);
      if (entry && section) {
        out[section].push({
          label: entry[1].replace(/\\([[\]])/g, "$1"),
          id: entry[2],
        });
      }
    }
  }
  return out;
}

const FULL_THREAD: BestofResponse = {
  period: "2024-W05",
  period_start: 1_706_486_400,
  period_end: 1_707_091_200,
  title: "Best of the week",
  submissions: [
    { id: "t3_a", title: "A [bracketed] title" },
    { id: "t3_b", title: "Second pick" },
  ],
  comments: [{ id: "t1_c", preview: "Nice one." }],
  rendered_markdown:
    "# Best of the week\n\n## Submissions\n\n" +
    "- [A \\[bracketed\\] title](/posts/t3_a)\n- [Second pick](/posts/t3_b)\n\n" +
    "## Comments\n\n- [Nice one.](/comments/t1_c)\n",
};

describe("renderBestofView", () => {
  it("matches the engine's rendered markdown semantically", () => {
    const view = renderBestofView(document, FULL_THREAD, () => {});
    const parsed = parseThreadMarkdown(FULL_THREAD.rendered_markdown);

    expect(view.querySelector("h1")!.textContent).toBe(parsed.title);
    const sections = [...view.querySelectorAll(".bestof-section")];
    const domSubmissions = [...sections[0].querySelectorAll("a")].map((a) => ({
      label: a.textContent,
      id: a.dataset.id,
    }));
    const domComments = [...sections[1].querySelectorAll("a")].map((a) => ({
      label: a.textContent,
      id: a.dataset.id,
    }));
    expect(domSubmissions).toEqual(parsed.submissions);
    expect(domComments).toEqual(parsed.comments);
    expect(parsed.placeholders).toEqual([]);
  });

  it("renders em-dash placeholders for empty sections", () => {
    const empty: BestofResponse = {
      ...FULL_THREAD,
      submissions: [],
      comments: [],
      rendered_markdown:
        "# Best of the week\n\n## Submissions\n\n—\n\n## Comments\n\n—\n",
    };
    const view = renderBestofView(document, empty, () => {});
    const placeholders = [...view.querySelectorAll(".bestof-empty")].map(
      (el) => el.textContent,
    );
    expect(placeholders).toEqual(["—", "—"]);
    expect(parseThreadMarkdown(empty.rendered_markdown).placeholders).toEqual([
      "submissions",
      "comments",
    ]);
  });

  it("entry links navigate to the post view", () => {
    const onOpen = vi.fn();
    const view = renderBestofView(document, FULL_THREAD, onOpen);
    const link = view.querySelector('a[data-id="t3_a"]') as HTMLAnchorElement;
    expect(link.getAttribute("href")).toBe("#/posts/t3_a");
    link.click();
    expect(onOpen).toHaveBeenCalledWith("t3_a");
  });

  it("shows the period token", () => {
    const view = renderBestofView(document, FULL_THREAD, () => {});
    expect(view.querySelector(".bestof-period")!.textContent).toBe("2024-W05");
  });
});
