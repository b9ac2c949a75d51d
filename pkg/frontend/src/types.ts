/**
 * Wire types for the audit API.
 *
 * These mirror the JSON the server sends; the client never derives
 * counts, scores, or presence values itself, so every field here is
 * displayed verbatim or not at all.
 */

export type ViewName = "repositories" | "libraries" | "bugs";

export type RowKind = "repository" | "module" | "library" | "bug";

export type SeverityName = "unscored" | "low" | "medium" | "high" | "critical";

export interface Histogram {
  low: number;
  medium: number;
  high: number;
  critical: number;
  unscored: number;
}

export interface StripEntry {
  cveId: string;
  score: number;
}

export interface QualityMeta {
  lgtmGrade?: string;
  lgtmScore?: number;
  githubIssues?: number;
  githubStars?: number;
  githubWatchers?: number;
}

export interface Row {
  kind: RowKind;
  id: string;
  name: string;
  linkCount: number;
  severity: SeverityName;
  vulnCount?: number;
  dependencyCount?: number;
  maxCvss?: number;
  cvssScore?: number;
  cvssVector?: string;
  description?: string;
  histogram?: Histogram;
  coordinates?: string;
  scoreStrip?: StripEntry[];
  matrix?: boolean[];
  meta?: QualityMeta;
  children?: Row[];
}

export interface AppliedFilter {
  nameQuery: string | null;
  minCvss: number | null;
  maxCvss: number | null;
  minDependencies: number | null;
  maxDependencies: number | null;
  minVulnerabilities: number | null;
  maxVulnerabilities: number | null;
  hideVulnerabilityFree: boolean;
  hideUnscoredCves: boolean;
}

export interface AppliedSort {
  key: string;
  direction: "asc" | "desc";
}

export interface ViewResponse {
  view: ViewName;
  totalRows: number;
  rows: Row[];
  appliedFilter: AppliedFilter;
  appliedSort: AppliedSort | null;
  matrixColumns: string[];
  page?: number;
  pageSize?: number;
}

export interface MatrixDefaults {
  columns: string[];
}

export interface GraphModule {
  id: string;
  name: string;
  parentModuleId: string | null;
}

export interface GraphLibrary {
  digest: string;
  name: string;
  coordinates: string;
}

export interface GraphBug {
  cveId: string;
  severity: SeverityName;
  cvssScore?: number;
}

export interface GraphEdge {
  from: string;
  to: string;
}

export interface GraphResponse {
  repository: { id: string; name: string };
  modules: GraphModule[];
  libraries: GraphLibrary[];
  bugs: GraphBug[];
  edges: GraphEdge[];
}
