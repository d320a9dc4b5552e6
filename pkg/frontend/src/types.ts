// Response shapes of the engine's HTTP API. The console renders these
// verbatim; it never derives scores, categories, or preview text itself.

export interface CueView {
  category: string;
  color_token: string;
  rank: number;
}

export interface AuthorView {
  id: string;
  name: string;
  karma: number;
  account_age_days: number;
}

export interface QueueItem {
  id: string;
  kind: string;
  title: string | null;
  preview: string;
  subreddit: string;
  created_utc: number;
  score: number;
  num_reports: number;
  desirability_score: number;
  cue: CueView;
  author: AuthorView;
  metrics: Record<string, number>;
  comment_count: number;
  award_count: number;
  flair: string | null;
  curated: boolean;
  highlighted: boolean;
  upvote_count: number;
}

export interface QueueResponse {
  items: QueueItem[];
  total: number;
  page: number;
  page_size: number;
  pages: number;
  sort: string;
  filters: Record<string, number>;
}

export interface CommentView {
  id: string;
  kind: string;
  body: string;
  created_utc: number;
  score: number;
  desirability_score: number;
  cue: CueView;
  author: AuthorView;
  award_count: number;
  upvote_count: number;
  curated: boolean;
  replies: CommentView[];
}

export interface PostDetail extends QueueItem {
  body: string;
  comments: CommentView[];
}

export interface Histogram {
  bin_edges: number[];
  counts: number[];
  value_range: [number, number];
}

export interface PostHover {
  id: string;
  desirability_score: number;
  category: string;
  color_token: string;
  desirability_histogram: Histogram;
  score_histogram: Histogram;
}

export interface CommentHover {
  id: string;
  desirability_score: number;
  category: string;
  color_token: string;
}

export interface FilterMetaEntry {
  key: string;
  metric: string;
  label: string;
  max: number;
  step: number;
}

export interface FiltersMeta {
  filters: FilterMetaEntry[];
  sorts: string[];
  disabled_sorts: string[];
  default_sort: string;
  newcomer_threshold_days: number;
  cue_categories: CueView[];
  flairs: string[];
  page_size: { default: number; max: number };
}

export interface Reason {
  id: string;
  label: string;
  origin: "default" | "custom";
}

export interface ThreadEntry {
  id: string;
  title?: string;
  preview?: string;
}

export interface ThreadView {
  period: string;
  period_start: number;
  period_end: number;
  title: string;
  submissions: ThreadEntry[];
  comments: ThreadEntry[];
}

export interface BestofResponse extends ThreadView {
  rendered_markdown: string;
}

export interface HealthResponse {
  status: string;
  version: string;
  posts: number;
  comments: number;
  moderator: string;
}

export type ActionVerb =
  | "curate"
  | "uncurate"
  | "explain"
  | "award"
  | "flair"
  | "highlight"
  | "unhighlight"
  | "upvote";

export interface ActionResult {
  action: string;
  target_id: string;
  changed?: boolean;
  warning?: string;
  thread?: ThreadView;
  rendered_markdown?: string;
  award_count?: number;
  flair?: string;
  highlights?: string[];
  score?: number;
  text?: string;
  reply?: CommentView;
}
