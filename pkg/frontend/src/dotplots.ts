import { markerNode, svgEl } from "./markers";
import type { ClusterSummary, Summary } from "./types";

export const PLOT = {
  width: 300,
  left: 92,
  right: 18,
  top: 26,
  rowHeight: 20,
  bottom: 12,
  centroidRadius: 5,
  overlayRadius: 7,
};

export function plotX(proportion: number): number {
  return PLOT.left + proportion * (PLOT.width - PLOT.left - PLOT.right);
}

export function plotY(typeIndex: number): number {
  return PLOT.top + (typeIndex + 0.5) * PLOT.rowHeight;
}

interface PlotHandle {
  svg: SVGSVGElement;
  overlay: SVGGElement;
  hex: string;
}

export interface DotPlotPanel {
  element: HTMLElement;
  byCluster: Map<number, PlotHandle>;
  cellTypes: string[];
}

function renderOnePlot(cluster: ClusterSummary, cellTypes: string[]): PlotHandle {
  const height = PLOT.top + cellTypes.length * PLOT.rowHeight + PLOT.bottom;
  const svg = svgEl("svg", {
    viewBox: `0 0 ${PLOT.width} ${height}`,
    class: "dotplot",
    "data-plot-cluster": `${cluster.cluster}`,
  });

  const title = svgEl("text", { x: "8", y: "16", class: "plot-title" });
  title.textContent = `cluster ${cluster.cluster} (${cluster.member_count} spots)`;
  svg.appendChild(title);
  svg.appendChild(
    svgEl("rect", {
      x: `${PLOT.width - 26}`,
      y: "6",
      width: "14",
      height: "14",
      fill: cluster.hex,
      class: "swatch",
    }),
  );

  for (const [i, name] of cellTypes.entries()) {
    const label = svgEl("text", {
      x: `${PLOT.left - 8}`,
      y: `${plotY(i) + 4}`,
      "text-anchor": "end",
      class: "row-label",
    });
    label.textContent = name;
    svg.appendChild(label);
  }
  for (const p of [0, 0.5, 1]) {
    svg.appendChild(
      svgEl("line", {
        x1: `${plotX(p)}`,
        x2: `${plotX(p)}`,
        y1: `${PLOT.top}`,
        y2: `${PLOT.top + cellTypes.length * PLOT.rowHeight}`,
        class: "grid",
      }),
    );
  }

  const connector = cluster.dotplot.connector
    .map(([i, p]) => `${plotX(p)},${plotY(i)}`)
    .join(" ");
  svg.appendChild(
    svgEl("polyline", {
      points: connector,
      fill: "none",
      stroke: cluster.hex,
      "stroke-dasharray": "4 3",
      class: "connector",
    }),
  );

  for (const [i, point] of cluster.dotplot.series.entries()) {
    const dot = markerNode(point.shape, plotX(point.proportion), plotY(i), PLOT.centroidRadius);
    dot.setAttribute("fill", cluster.hex);
    dot.setAttribute("class", "centroid");
    dot.setAttribute("data-cell-type", point.cell_type);
    svg.appendChild(dot);
  }

  const overlay = svgEl("g", { class: "hover-overlay" });
  svg.appendChild(overlay);
  return { svg, overlay, hex: cluster.hex };
}

export function renderDotPlots(summary: Summary, cellTypes: string[]): DotPlotPanel {
  const element = document.createElement("div");
  element.className = "plots";
  const byCluster = new Map<number, PlotHandle>();
  for (const cluster of summary.clusters) {
    const handle = renderOnePlot(cluster, cellTypes);
    element.appendChild(handle.svg);
    byCluster.set(cluster.cluster, handle);
  }
  return { element, byCluster, cellTypes };
}

/** Remove hovered-spot markers from every plot. */
export function clearOverlays(panel: DotPlotPanel): void {
  for (const handle of panel.byCluster.values()) {
    handle.overlay.replaceChildren();
  }
}

/** Add hollow markers for one spot's proportions onto its cluster's plot.
 *
 * Purely additive: centroid dots are never touched. Shapes repeat the
 * per-type shapes so the two layers read as the same series.
 */
export function overlaySpot(
  panel: DotPlotPanel,
  summary: Summary,
  cluster: number,
  proportions: number[],
): void {
  clearOverlays(panel);
  const handle = panel.byCluster.get(cluster);
  const spec = summary.clusters.find(c => c.cluster === cluster);
  if (!handle || !spec) return;
  for (const [i, value] of proportions.entries()) {
    const shape = spec.dotplot.series[i]?.shape ?? "circle";
    const node = markerNode(shape, plotX(value), plotY(i), PLOT.overlayRadius);
    node.setAttribute("fill", "none");
    node.setAttribute("stroke", handle.hex);
    node.setAttribute("stroke-width", "1.5");
    node.setAttribute("class", "overlay");
    node.setAttribute("data-prop", `${value}`);
    node.setAttribute("data-cell-type", panel.cellTypes[i] ?? `${i}`);
    handle.overlay.appendChild(node);
  }
}
