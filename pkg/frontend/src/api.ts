import type {
  ActionResult,
  ActionVerb,
  BestofResponse,
  CommentHover,
  FiltersMeta,
  HealthResponse,
  PostDetail,
  PostHover,
  QueueResponse,
  Reason,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: string;

  constructor(status: number, code: string, detail: string) {
    super(`${code}: ${detail}`);
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

export interface QueueQuery {
  sort?: string;
  page?: number;
  pageSize?: number;
  filters?: Record<string, number>;
}

/** Thin typed client; every console value comes through here. */
export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      // non-JSON body; fall through to the status check
    }
    if (!response.ok) {
      const envelope = (body ?? {}) as { error?: string; detail?: string };
      throw new ApiError(
        response.status,
        envelope.error ?? "http_error",
        envelope.detail ?? response.statusText,
      );
    }
    return body as T;
  }

  health(): Promise<HealthResponse> {
    return this.request("/api/health");
  }

  queue(query: QueueQuery = {}, signal?: AbortSignal): Promise<QueueResponse> {
    const params = new URLSearchParams();
    if (query.sort) params.set("sort", query.sort);
    if (query.page !== undefined) params.set("page", String(query.page));
    if (query.pageSize !== undefined) {
      params.set("page_size", String(query.pageSize));
    }
    for (const [key, value] of Object.entries(query.filters ?? {})) {
      params.set(key, String(value));
    }
    const qs = params.toString();
    return this.request(`/api/queue${qs ? `?${qs}` : ""}`, { signal });
  }

  postDetail(id: string): Promise<PostDetail> {
    return this.request(`/api/posts/${encodeURIComponent(id)}`);
  }

  postHover(id: string): Promise<PostHover> {
    return this.request(`/api/posts/${encodeURIComponent(id)}/hover`);
  }

  commentHover(id: string): Promise<CommentHover> {
    return this.request(`/api/comments/${encodeURIComponent(id)}/hover`);
  }

  filtersMeta(): Promise<FiltersMeta> {
    return this.request("/api/filters/meta");
  }

  explainPreview(
    kind: string,
    reasonIds: string[],
    custom: string[],
  ): Promise<{ kind: string; text: string }> {
    const params = new URLSearchParams({ kind });
    for (const id of reasonIds) params.append("reason", id);
    for (const text of custom) params.append("custom", text);
    return this.request(`/api/explain/preview?${params.toString()}`);
  }

  bestofCurrent(): Promise<BestofResponse> {
    return this.request("/api/bestof/current");
  }

  reasons(): Promise<{ reasons: Reason[] }> {
    return this.request("/api/config/reasons");
  }

  addReason(label: string): Promise<{ added: Reason; reasons: Reason[] }> {
    return this.request("/api/config/reasons", {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ label }),
    });
  }

  action(
    verb: ActionVerb,
    body: Record<string, unknown>,
  ): Promise<ActionResult> {
    return this.request(`/api/actions/${verb}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
