// Queue view state lives in the URL hash so a copied link restores the
// exact same view: route, sort, page, active filter thresholds, selection.

export const FILTER_KEYS = [
  "min_desirability",
  "min_score",
  "min_author_karma",
  "min_author_age_days",
  "min_avg_comment_desirability",
  "min_avg_comment_score",
  "min_newcomer_commenters",
] as const;

export type FilterKey = (typeof FILTER_KEYS)[number];

export interface QueueViewState {
  sort: string;
  page: number;
  filters: Partial<Record<FilterKey, number>>;
  selection: string | null;
}

export type Route =
  | { view: "queue"; state: QueueViewState }
  | { view: "post"; id: string }
  | { view: "bestof" };

export const DEFAULT_SORT = "newest";

export function defaultQueueState(): QueueViewState {
  return { sort: DEFAULT_SORT, page: 1, filters: {}, selection: null };
}

/** Clamp a slider position into [0, max] on the metric's step grid. */
export function snapToStep(value: number, step: number, max: number): number {
  const clamped = Math.min(Math.max(value, 0), max);
  const units = Math.round(clamped / step);
  // Steps are 1 or 0.1; one decimal kills float residue like 17200.000000001.
  return Math.min(Math.round(units * step * 10) / 10, max);
}

export function queueStateToHash(state: QueueViewState): string {
  const params = new URLSearchParams();
  if (state.sort !== DEFAULT_SORT) params.set("sort", state.sort);
  if (state.page !== 1) params.set("page", String(state.page));
  for (const key of FILTER_KEYS) {
    const value = state.filters[key];
    if (value !== undefined) params.set(key, String(value));
  }
  if (state.selection) params.set("selected", state.selection);
  const qs = params.toString();
  return qs ? `#/queue?${qs}` : "#/queue";
}

export function routeToHash(route: Route): string {
  switch (route.view) {
    case "queue":
      return queueStateToHash(route.state);
    case "post":
      return `#/posts/${encodeURIComponent(route.id)}`;
    case "bestof":
      return "#/bestof";
  }
}

export function parseHash(hash: string): Route {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const [path, query = ""] = raw.split("?", 2);
  const post = path.match(/^\/posts\/(.+)$/);
  if (post) return { view: "post", id: decodeURIComponent(post[1]) };
  if (path === "/bestof") return { view: "bestof" };

  const state = defaultQueueState();
  const params = new URLSearchParams(query);
  const sort = params.get("sort");
  if (sort) state.sort = sort;
  const page = Number(params.get("page"));
  if (Number.isInteger(page) && page >= 1) state.page = page;
  for (const key of FILTER_KEYS) {
    const raw = params.get(key);
    if (raw === null) continue;
    const value = Number(raw);
    if (Number.isFinite(value) && value >= 0) state.filters[key] = value;
  }
  state.selection = params.get("selected");
  return { view: "queue", state };
}

export type Listener<T> = (value: T) => void;

export interface Store<T> {
  get(): T;
  set(value: T): void;
  update(patch: (value: T) => T): void;
  subscribe(listener: Listener<T>): () => void;
}

export function createStore<T>(initial: T): Store<T> {
  let current = initial;
  const listeners = new Set<Listener<T>>();
  return {
    get: () => current,
    set(value: T) {
      current = value;
      for (const listener of listeners) listener(current);
    },
    update(patch: (value: T) => T) {
      this.set(patch(current));
    },
    subscribe(listener: Listener<T>) {
      listeners.add(listener);
      return () => listeners.delete(listener);
    },
  };
}

/** Trailing-edge debounce used by the filter sliders. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (handle !== undefined) clearTimeout(handle);
    handle = setTimeout(() => fn(...args), waitMs);
  };
}
