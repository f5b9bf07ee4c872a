import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { SpotIndex, SpotRecord } from "../src/types";

const here = dirname(fileURLToPath(import.meta.url));

export function fixtureText(name: string): string {
  return readFileSync(join(here, "fixtures", name), "utf8");
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

export interface SpotsFile {
  cell_types: string[];
  spots: Record<string, SpotRecord>;
}

/** The spot index exactly as the artifact server derives it. */
export function buildSpotIndex(file: SpotsFile): SpotIndex {
  const records = Object.values(file.spots);
  return {
    cell_types: file.cell_types,
    ids: records.map(r => r.id),
    markers: records.map(r => ({
      id: r.id,
      x: r.x,
      y: r.y,
      cluster: r.cluster,
      status: r.status,
    })),
  };
}

export interface FetchStubOptions {
  /** every request rejects, as if the service were down */
  fail?: boolean;
  /** detail lookups for these ids return 404 despite being indexed */
  missingSpots?: string[];
  /** detail responses for these ids wait on the given promise */
  gates?: Map<string, Promise<void>>;
}

function respond(status: number, body: string): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => JSON.parse(body),
    text: async () => body,
  } as unknown as Response;
}

/** Serve the fixture artifact set through a stubbed global fetch. */
export function installFetch(opts: FetchStubOptions = {}): void {
  const summary = fixtureText("summary.json");
  const geojson = fixtureText("overlay.geojson");
  const svg = fixtureText("overlay.svg");
  const spotsFile = fixtureJson<SpotsFile>("spots.json");
  const index = buildSpotIndex(spotsFile);

  globalThis.fetch = (async (input: RequestInfo | URL) => {
    if (opts.fail) throw new TypeError("fetch failed");
    const path = String(input).replace(/^https?:\/\/[^/]+/, "");
    if (path === "/api/summary") return respond(200, summary);
    if (path === "/api/overlay.geojson") return respond(200, geojson);
    if (path === "/api/overlay.svg") return respond(200, svg);
    if (path === "/api/clusters") {
      return respond(200, JSON.stringify(JSON.parse(summary).clusters));
    }
    if (path === "/api/spots") return respond(200, JSON.stringify(index));
    const detail = /^\/api\/spots\/(.+)$/.exec(path);
    if (detail) {
      const id = decodeURIComponent(detail[1]);
      await opts.gates?.get(id);
      const record = spotsFile.spots[id];
      if (record === undefined || opts.missingSpots?.includes(id)) {
        return respond(404, JSON.stringify({ error: "unknown spot id", id }));
      }
      return respond(200, JSON.stringify(record));
    }
    if (path === "/api/image") {
      return respond(404, JSON.stringify({ error: "no image in this artifact set" }));
    }
    return respond(404, JSON.stringify({ error: "no route", path }));
  }) as typeof fetch;
}

export function deferred(): { promise: Promise<void>; resolve: () => void } {
  let resolve!: () => void;
  const promise = new Promise<void>(r => {
    resolve = r;
  });
  return { promise, resolve };
}

/** First covered spot id plus one from a different cluster, for hover tests. */
export function coveredSamples(file: SpotsFile): [SpotRecord, SpotRecord] {
  const covered = Object.values(file.spots).filter(r => r.status === "covered");
  const first = covered[0];
  const other = covered.find(r => r.cluster !== first.cluster);
  if (!other) throw new Error("fixture lost its multi-cluster shape");
  return [first, other];
}
