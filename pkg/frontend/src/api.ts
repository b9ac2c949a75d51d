/**
 * Thin fetch wrapper around the audit API.
 *
 * At most one view request is in flight at a time: starting a new one
 * aborts the previous, so a fast sequence of filter edits can never
 * render out of order.
 */

import { requestPath, type ViewState } from "./state.js";
import type { GraphResponse, MatrixDefaults, ViewResponse } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function getJson<T>(fetchImpl: FetchLike, url: string, init?: RequestInit): Promise<T> {
  const response = await fetchImpl(url, init);
  if (!response.ok) {
    let detail = `request failed with status ${response.status}`;
    try {
      const body = (await response.json()) as { detail?: string };
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

let inflightView: AbortController | null = null;

/** Fetch the view for a state, cancelling any previous view request. */
export async function fetchView(
  state: ViewState,
  fetchImpl: FetchLike = fetch,
): Promise<ViewResponse> {
  inflightView?.abort();
  const controller = new AbortController();
  inflightView = controller;
  try {
    return await getJson<ViewResponse>(fetchImpl, requestPath(state), {
      signal: controller.signal,
    });
  } finally {
    if (inflightView === controller) inflightView = null;
  }
}

export function fetchGraph(
  repositoryId: string,
  fetchImpl: FetchLike = fetch,
): Promise<GraphResponse> {
  return getJson<GraphResponse>(fetchImpl, `/api/graph/${encodeURIComponent(repositoryId)}`);
}

export function fetchMatrixDefaults(fetchImpl: FetchLike = fetch): Promise<MatrixDefaults> {
  return getJson<MatrixDefaults>(fetchImpl, "/api/matrix/defaults");
}
