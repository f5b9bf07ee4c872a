export interface OkhslTriple {
  h: number;
  s: number;
  l: number;
}

export interface DotPlotPoint {
  cell_type: string;
  proportion: number;
  shape: string;
}

export interface ClusterSummary {
  cluster: number;
  hex: string;
  okhsl: OkhslTriple;
  srgb: [number, number, number];
  member_count: number;
  dotplot: {
    series: DotPlotPoint[];
    connector: [number, number][];
  };
}

export interface RegionSummary {
  id: string;
  cluster: number;
  group: number;
  member_count: number;
  area: number;
  holes: number;
}

export interface RetainedSummary {
  id: string;
  x: number;
  y: number;
  cluster: number;
  reason: "uncovered" | "misplaced";
}

export interface StyleEcho {
  stripe_angle: number;
  stripe_width: number;
  stripe_gap: number;
  outline_color: string;
  outline_width: number;
  point_radius: number;
  point_rim_width: number;
  image_opacity: number;
}

export interface Summary {
  clusters: ClusterSummary[];
  regions: RegionSummary[];
  retained: RetainedSummary[];
  config: { style: StyleEcho; config_hash: string; [key: string]: unknown };
}

export interface SpotRecord {
  id: string;
  x: number;
  y: number;
  cluster: number;
  proportions: number[];
  status: "covered" | "retained";
  region: string | null;
  reason: "uncovered" | "misplaced" | null;
}

export interface SpotMarker {
  id: string;
  x: number;
  y: number;
  cluster: number;
  status: "covered" | "retained";
}

export interface SpotIndex {
  cell_types: string[];
  ids: string[];
  markers: SpotMarker[];
}

export interface RegionFeature {
  type: "Feature";
  id: string;
  geometry: { type: "Polygon"; coordinates: number[][][] };
  properties: {
    kind: "region";
    cluster: number;
    color: string;
    member_count: number;
    group: number;
  };
}

export interface RetainedFeature {
  type: "Feature";
  id: string;
  geometry: { type: "Point"; coordinates: [number, number] };
  properties: {
    kind: "retained";
    spot: string;
    cluster: number;
    color: string;
    reason: "uncovered" | "misplaced";
  };
}

export type OverlayFeature = RegionFeature | RetainedFeature;

export interface OverlayGeoJson {
  type: "FeatureCollection";
  metadata: {
    coordinate_space: string;
    units: string;
    y_axis: string;
    ring_orientation: string;
    config_hash: string;
    seed: number;
  };
  features: OverlayFeature[];
}
