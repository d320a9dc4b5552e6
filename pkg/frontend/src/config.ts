import type { ActionVerb } from "./types.js";

// Per-moderator console settings. Hiding a button only trims the UI; the
// engine still accepts the verb for anyone who calls it directly.

export const ACTION_BUTTONS: readonly ActionVerb[] = [
  "award",
  "flair",
  "highlight",
  "explain",
  "curate",
  "upvote",
];

export interface ConsoleConfig {
  hiddenActions: Set<ActionVerb>;
  moderator: string;
}

const STORAGE_KEY = "posiqueue-console-config";

interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export function loadConsoleConfig(storage: StorageLike): ConsoleConfig {
  const config: ConsoleConfig = { hiddenActions: new Set(), moderator: "mod" };
  const raw = storage.getItem(STORAGE_KEY);
  if (!raw) return config;
  try {
    const parsed = JSON.parse(raw) as {
      hiddenActions?: string[];
      moderator?: string;
    };
    for (const verb of parsed.hiddenActions ?? []) {
      if ((ACTION_BUTTONS as readonly string[]).includes(verb)) {
        config.hiddenActions.add(verb as ActionVerb);
      }
    }
    if (typeof parsed.moderator === "string" && parsed.moderator) {
      config.moderator = parsed.moderator;
    }
  } catch {
    // corrupted settings fall back to defaults
  }
  return config;
}

export function saveConsoleConfig(
  storage: StorageLike,
  config: ConsoleConfig,
): void {
  storage.setItem(
    STORAGE_KEY,
    JSON.stringify({
      hiddenActions: [...config.hiddenActions],
      moderator: config.moderator,
    }),
  );
}

/** API base URL comes from runtime page config, never from the build. */
export function apiBaseUrl(win: Window): string {
  const fromGlobal = (win as unknown as { POSIQUEUE_API_BASE?: string })
    .POSIQUEUE_API_BASE;
  return fromGlobal ?? "";
}
