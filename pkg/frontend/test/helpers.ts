/**
 * Shared test utilities: fixture loading (recorded API responses) and
 * fetch stubs that honor AbortSignal the way real fetch does.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import type { GraphResponse, MatrixDefaults, ViewResponse } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

export const fixtures = {
  repositories: (): ViewResponse => loadFixture("view_repositories.json"),
  libraries: (): ViewResponse => loadFixture("view_libraries.json"),
  bugs: (): ViewResponse => loadFixture("view_bugs.json"),
  repositoriesExpanded: (): ViewResponse => loadFixture("view_repositories_expanded.json"),
  repositoriesHideFree: (): ViewResponse => loadFixture("view_repositories_hidefree.json"),
  repositoriesMarm: (): ViewResponse => loadFixture("view_repositories_marm.json"),
  matrixDefaults: (): MatrixDefaults => loadFixture("matrix_defaults.json"),
  graphLowMarmoset: (): GraphResponse => loadFixture("graph_org.acme:low-marmoset.json"),
  graphHumbleTapir: (): GraphResponse => loadFixture("graph_org.acme:humble-tapir.json"),
};

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export interface RouteHit {
  status?: number;
  body: unknown;
}

export interface RecordedCall {
  url: string;
  init: RequestInit | undefined;
}

/** Synchronous router stub: maps a URL to a canned response. Unrouted
 * URLs come back 404 so a test fails loudly on unexpected requests. */
export function fetchStub(
  route: (url: string, params: URLSearchParams) => RouteHit | undefined,
  calls?: RecordedCall[],
): FetchLike {
  return async (url, init) => {
    calls?.push({ url, init });
    const query = url.includes("?") ? url.slice(url.indexOf("?") + 1) : "";
    const hit = route(url, new URLSearchParams(query));
    if (hit === undefined) {
      return jsonResponse({ detail: `no stub route for ${url}` }, 404);
    }
    return jsonResponse(hit.body, hit.status ?? 200);
  };
}

export interface PendingRequest {
  url: string;
  resolve(body: unknown, status?: number): void;
}

/** Fetch stub whose responses stay pending until the test releases
 * them; aborting the request's signal rejects like real fetch. */
export function deferredFetch(): { fetch: FetchLike; pending: PendingRequest[] } {
  const pending: PendingRequest[] = [];
  const fetch: FetchLike = (url, init) =>
    new Promise<Response>((resolve, reject) => {
      const signal = init?.signal ?? null;
      if (signal?.aborted) {
        reject(new DOMException("The operation was aborted.", "AbortError"));
        return;
      }
      signal?.addEventListener("abort", () => {
        reject(new DOMException("The operation was aborted.", "AbortError"));
      });
      pending.push({
        url,
        resolve: (body, status = 200) => resolve(jsonResponse(body, status)),
      });
    });
  return { fetch, pending };
}

/** Let queued microtasks and zero-delay timers run. */
export async function flush(): Promise<void> {
  await new Promise<void>((resolve) => setTimeout(resolve, 0));
}
