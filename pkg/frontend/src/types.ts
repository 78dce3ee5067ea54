/** Payload shapes of the annotation service API. */

export type Category =
  | "economic"
  | "environmental"
  | "geopolitical"
  | "societal"
  | "technological";

export type Verdict = "accepted" | "rejected";

export interface EventRecord {
  id: number;
  sentence: string;
  date: string;
  story: string | null;
}

export interface MatchSpan {
  root: string;
  start: number;
  end: number;
}

export interface QueueItem {
  event: EventRecord;
  risk: number;
  risk_name: string;
  category: Category;
  tag: string;
  matches: MatchSpan[];
  status: "pending" | "decided";
  verdict: Verdict | null;
}

export interface DetectionStats {
  events: number;
  candidates: number;
  filtered: number;
  filter_rate: number;
}

export interface QueueResponse {
  items: QueueItem[];
  stats: DetectionStats;
}

export interface DecisionBody {
  event: number;
  risk: number;
  tag: string;
  verdict: Verdict;
  decided_by?: string;
  supersede?: boolean;
}

export interface IterationBody {
  seed: number;
  params?: Record<string, unknown>;
  negative_ratio?: number;
  top_a?: number;
}

export interface IterationRow {
  risk: number;
  tag: string;
  n_pos: number;
  n_neg: number;
  proposals: string[];
  importances: Record<string, number>;
}

export interface IterationReport {
  iteration: number;
  per_tag: IterationRow[];
  skipped: { risk: number; tag: string; reason: string }[];
  filter_rate: number;
  seed: number;
}

export interface KeywordBody {
  risk: number;
  tag: string;
  root: string;
  new_tag?: boolean;
}

export interface KeywordResult {
  risk: number;
  tag: string;
  root: string;
  newly_queued: number;
}

export interface NetworkNode {
  id: number;
  category: Category;
  degree: number;
}

export interface NetworkEdge {
  a: number;
  b: number;
  provenance: [number, number][];
}

export interface NetworkResponse {
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export interface SessionInfo {
  iteration: number;
  events: number;
  candidates: number;
  filtered: number;
  filter_rate: number;
  decisions: number;
  pending_items: number;
  log_offset: number;
}

export interface AuditEntry {
  offset: number;
  kind: string;
  at: string;
  payload: Record<string, unknown>;
}
