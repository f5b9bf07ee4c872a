import type {
  ClusterSummary,
  OverlayGeoJson,
  SpotIndex,
  SpotRecord,
  Summary,
} from "./types";

export class SpotNotFound extends Error {
  constructor(public readonly id: string) {
    super(`unknown spot id: ${id}`);
  }
}

export async function getSummary(base: string) {
  const r = await fetch(`${base}/api/summary`);
  if (!r.ok) throw new Error(`summary failed: ${r.status}`);
  return r.json() as Promise<Summary>;
}

export async function getClusters(base: string) {
  const r = await fetch(`${base}/api/clusters`);
  if (!r.ok) throw new Error(`clusters failed: ${r.status}`);
  return r.json() as Promise<ClusterSummary[]>;
}

export async function getOverlayGeoJson(base: string) {
  const r = await fetch(`${base}/api/overlay.geojson`);
  if (!r.ok) throw new Error(`overlay.geojson failed: ${r.status}`);
  return r.json() as Promise<OverlayGeoJson>;
}

export async function getOverlaySvg(base: string): Promise<string> {
  const r = await fetch(`${base}/api/overlay.svg`);
  if (!r.ok) throw new Error(`overlay.svg failed: ${r.status}`);
  return r.text();
}

export async function getSpotIndex(base: string) {
  const r = await fetch(`${base}/api/spots`);
  if (!r.ok) throw new Error(`spot index failed: ${r.status}`);
  return r.json() as Promise<SpotIndex>;
}

export async function getSpot(base: string, id: string) {
  const r = await fetch(`${base}/api/spots/${encodeURIComponent(id)}`);
  if (r.status === 404) throw new SpotNotFound(id);
  if (!r.ok) throw new Error(`spot ${id} failed: ${r.status}`);
  return r.json() as Promise<SpotRecord>;
}

/** URL of the background image, or null when the artifact set has none. */
export async function probeImage(base: string): Promise<string | null> {
  const url = `${base}/api/image`;
  try {
    const r = await fetch(url);
    return r.ok ? url : null;
  } catch {
    return null;
  }
}
