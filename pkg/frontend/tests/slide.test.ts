import { beforeEach, describe, expect, it } from "vitest";

import {
  applyLayers,
  applyTransform,
  highlightSpot,
  parseViewBox,
  renderSlide,
  type SlideView,
} from "../src/slide";
import { initialState } from "../src/state";
import type { OverlayGeoJson, RetainedFeature, Summary } from "../src/types";
import { buildSpotIndex, fixtureJson, fixtureText, type SpotsFile } from "./helpers";

const geojson = fixtureJson<OverlayGeoJson>("overlay.geojson");
const summary = fixtureJson<Summary>("summary.json");
const svgText = fixtureText("overlay.svg");
const spotsFile = fixtureJson<SpotsFile>("spots.json");
const index = buildSpotIndex(spotsFile);

let slide: SlideView;

beforeEach(() => {
  slide = renderSlide(geojson, svgText, summary, index, null);
});

describe("slide rendering", () => {
  it("draws one striped path per region feature", () => {
    const regions = geojson.features.filter(f => f.properties.kind === "region");
    expect(slide.regionPaths.size).toBe(regions.length);
    for (const [id, path] of slide.regionPaths) {
      const feature = regions.find(f => f.id === id)!;
      expect(path.getAttribute("fill")).toBe(
        `url(#stripes-${feature.properties.cluster})`,
      );
      expect(path.getAttribute("fill-rule")).toBe("evenodd");
      const d = path.getAttribute("d")!;
      expect(d.startsWith("M ")).toBe(true);
      expect(d.endsWith(" Z")).toBe(true);
    }
  });

  it("rebuilds the stripe patterns from the style echo", () => {
    const style = summary.config.style;
    const period = `${style.stripe_width + style.stripe_gap}`;
    for (const cluster of summary.clusters) {
      const pattern = slide.svg.querySelector(`#stripes-${cluster.cluster}`)!;
      expect(pattern.getAttribute("width")).toBe(period);
      expect(pattern.getAttribute("patternTransform")).toBe(
        `rotate(${style.stripe_angle})`,
      );
      const bar = pattern.querySelector("rect")!;
      expect(bar.getAttribute("width")).toBe(`${style.stripe_width}`);
      expect(bar.getAttribute("fill")).toBe(cluster.hex);
    }
  });

  it("keeps pixel y-down: no mirroring between data and screen", () => {
    const points = geojson.features.filter(
      (f): f is RetainedFeature => f.properties.kind === "retained",
    );
    expect(points.length).toBeGreaterThan(0);
    for (const point of points) {
      const node = slide.spotNodes.get(point.properties.spot)!;
      expect(Number(node.getAttribute("cx"))).toBe(point.geometry.coordinates[0]);
      expect(Number(node.getAttribute("cy"))).toBe(point.geometry.coordinates[1]);
    }
    expect(parseViewBox(svgText)).toHaveLength(4);
  });

  it("draws retained markers in their cluster color with a rim", () => {
    const retained = slide.layers.retained.querySelectorAll("circle.retained");
    expect(retained.length).toBe(3);
    const misplaced = slide.spotNodes.get("s0058")!;
    expect(misplaced.getAttribute("data-reason")).toBe("misplaced");
    expect(misplaced.getAttribute("stroke")).toBe("#ffffff");
  });

  it("gives every covered spot an invisible hit marker", () => {
    const covered = index.markers.filter(m => m.status === "covered");
    const hits = slide.layers.hits.querySelectorAll("circle.hit");
    expect(hits.length).toBe(covered.length);
    const sample = hits[0]!;
    expect(sample.getAttribute("fill")).toBe("transparent");
    expect(sample.getAttribute("data-spot")).toBeTruthy();
  });

  it("toggling regions off leaves image and retained drawn", () => {
    const state = initialState();
    state.layers.regions = false;
    applyLayers(slide, state.layers);
    expect(slide.layers.regions.style.display).toBe("none");
    expect(slide.layers.image.style.display).toBe("");
    expect(slide.layers.retained.style.display).toBe("");
  });

  it("writes the zoom/pan transform onto the view group", () => {
    applyTransform(slide, { x: 10, y: -4, scale: 2.5 });
    expect(slide.view.getAttribute("transform")).toBe("translate(10 -4) scale(2.5)");
  });

  it("highlights the hovered spot and its cluster's regions, then clears", () => {
    const target = geojson.features.find(
      f => f.properties.kind === "region",
    )!;
    const cluster = target.properties.cluster;
    const spot = index.markers.find(
      m => m.status === "covered" && m.cluster === cluster,
    )!;
    highlightSpot(slide, spot.id, cluster);
    expect(slide.spotNodes.get(spot.id)!.classList.contains("hovered")).toBe(true);
    for (const [id, path] of slide.regionPaths) {
      const feature = geojson.features.find(f => f.id === id)!;
      expect(path.classList.contains("hl")).toBe(
        feature.properties.cluster === cluster,
      );
    }
    highlightSpot(slide, null, null);
    expect(slide.svg.querySelectorAll(".hovered, .hl").length).toBe(0);
  });

  it("renders no image element when the artifact set has none", () => {
    expect(slide.layers.image.childNodes.length).toBe(0);
    const withImage = renderSlide(geojson, svgText, summary, index, "/api/image");
    const image = withImage.layers.image.querySelector("image")!;
    expect(image.getAttribute("href")).toBe("/api/image");
    expect(image.getAttribute("opacity")).toBe(`${summary.config.style.image_opacity}`);
  });
});
