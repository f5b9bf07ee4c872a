import { fmt } from "./fmt";
import { svgEl } from "./markers";
import type { LayerToggles, Transform } from "./state";
import type {
  OverlayGeoJson,
  RegionFeature,
  RetainedFeature,
  SpotIndex,
  Summary,
} from "./types";

export interface SlideView {
  svg: SVGSVGElement;
  view: SVGGElement;
  layers: {
    image: SVGGElement;
    regions: SVGGElement;
    retained: SVGGElement;
    hits: SVGGElement;
  };
  regionPaths: Map<string, SVGPathElement>;
  regionsByCluster: Map<number, SVGPathElement[]>;
  spotNodes: Map<string, SVGElement>;
}

export function parseViewBox(svgText: string): [number, number, number, number] {
  const m = /viewBox="([^"]+)"/.exec(svgText);
  if (!m) throw new Error("overlay.svg carries no viewBox");
  const parts = m[1].trim().split(/\s+/).map(Number);
  if (parts.length !== 4 || parts.some(Number.isNaN)) {
    throw new Error(`malformed viewBox: ${m[1]}`);
  }
  return parts as [number, number, number, number];
}

/** Path data from GeoJSON polygon rings, quantized like the artifact writer. */
export function ringsToPathD(rings: number[][][]): string {
  return rings
    .map(ring => {
      const open = ring.slice(0, -1); // rings arrive closed
      const coords = open.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" L ");
      return `M ${coords} Z`;
    })
    .join(" ");
}

export function renderSlide(
  geojson: OverlayGeoJson,
  svgText: string,
  summary: Summary,
  index: SpotIndex,
  imageUrl: string | null,
): SlideView {
  const style = summary.config.style;
  const [vx, vy, vw, vh] = parseViewBox(svgText);
  const svg = svgEl("svg", {
    viewBox: `${vx} ${vy} ${vw} ${vh}`,
    class: "slide",
    preserveAspectRatio: "xMidYMid meet",
  });

  const period = style.stripe_width + style.stripe_gap;
  const defs = svgEl("defs");
  for (const cluster of summary.clusters) {
    const pattern = svgEl("pattern", {
      id: `stripes-${cluster.cluster}`,
      patternUnits: "userSpaceOnUse",
      width: `${period}`,
      height: `${period}`,
      patternTransform: `rotate(${style.stripe_angle})`,
    });
    pattern.appendChild(
      svgEl("rect", {
        width: `${style.stripe_width}`,
        height: `${period}`,
        fill: cluster.hex,
      }),
    );
    defs.appendChild(pattern);
  }
  svg.appendChild(defs);

  const view = svgEl("g", { class: "view" });
  svg.appendChild(view);

  const layers = {
    image: svgEl("g", { class: "image-layer" }),
    regions: svgEl("g", { class: "region-layer" }),
    retained: svgEl("g", { class: "point-layer" }),
    hits: svgEl("g", { class: "hit-layer" }),
  };
  view.append(layers.image, layers.regions, layers.retained, layers.hits);

  if (imageUrl !== null) {
    layers.image.appendChild(
      svgEl("image", {
        href: imageUrl,
        x: "0",
        y: "0",
        width: `${vw}`,
        height: `${vh}`,
        opacity: `${style.image_opacity}`,
      }),
    );
  }

  const regionPaths = new Map<string, SVGPathElement>();
  const regionsByCluster = new Map<number, SVGPathElement[]>();
  const spotNodes = new Map<string, SVGElement>();

  for (const feature of geojson.features) {
    if (feature.properties.kind === "region") {
      const region = feature as RegionFeature;
      const path = svgEl("path", {
        d: ringsToPathD(region.geometry.coordinates),
        fill: `url(#stripes-${region.properties.cluster})`,
        "fill-rule": "evenodd",
        stroke: style.outline_color,
        "stroke-width": `${style.outline_width}`,
        "data-region": region.id,
        "data-cluster": `${region.properties.cluster}`,
      });
      layers.regions.appendChild(path);
      regionPaths.set(region.id, path);
      const group = regionsByCluster.get(region.properties.cluster) ?? [];
      group.push(path);
      regionsByCluster.set(region.properties.cluster, group);
    } else {
      const point = feature as RetainedFeature;
      const [x, y] = point.geometry.coordinates;
      const node = svgEl("circle", {
        cx: `${x}`,
        cy: `${y}`,
        r: `${style.point_radius}`,
        fill: point.properties.color,
        stroke: "#ffffff",
        "stroke-width": `${style.point_rim_width}`,
        class: "retained",
        "data-spot": point.properties.spot,
        "data-cluster": `${point.properties.cluster}`,
        "data-reason": point.properties.reason,
      });
      layers.retained.appendChild(node);
      spotNodes.set(point.properties.spot, node);
    }
  }

  // invisible markers so covered spots are hoverable (regions alone cannot
  // identify a spot)
  for (const marker of index.markers) {
    if (marker.status !== "covered") continue;
    const node = svgEl("circle", {
      cx: `${marker.x}`,
      cy: `${marker.y}`,
      r: `${style.point_radius * 1.6}`,
      fill: "transparent",
      "pointer-events": "all",
      class: "hit",
      "data-spot": marker.id,
      "data-cluster": `${marker.cluster}`,
    });
    layers.hits.appendChild(node);
    spotNodes.set(marker.id, node);
  }

  return { svg, view, layers, regionPaths, regionsByCluster, spotNodes };
}

export function applyLayers(slide: SlideView, toggles: LayerToggles): void {
  slide.layers.image.style.display = toggles.image ? "" : "none";
  slide.layers.regions.style.display = toggles.regions ? "" : "none";
  slide.layers.retained.style.display = toggles.retained ? "" : "none";
}

export function applyTransform(slide: SlideView, t: Transform): void {
  slide.view.setAttribute(
    "transform",
    `translate(${t.x} ${t.y}) scale(${t.scale})`,
  );
}

/** Mark the hovered spot and its cluster's regions; null clears. */
export function highlightSpot(
  slide: SlideView,
  spotId: string | null,
  cluster: number | null,
): void {
  for (const node of slide.spotNodes.values()) node.classList.remove("hovered");
  for (const path of slide.regionPaths.values()) path.classList.remove("hl");
  if (spotId !== null) {
    slide.spotNodes.get(spotId)?.classList.add("hovered");
  }
  if (cluster !== null) {
    for (const path of slide.regionsByCluster.get(cluster) ?? []) {
      path.classList.add("hl");
    }
  }
}
