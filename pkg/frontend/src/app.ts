import {
  getOverlayGeoJson,
  getOverlaySvg,
  getSpot,
  getSpotIndex,
  getSummary,
  probeImage,
  SpotNotFound,
} from "./api";
import { showError } from "./banner";
import {
  clearOverlays,
  overlaySpot,
  renderDotPlots,
  type DotPlotPanel,
} from "./dotplots";
import {
  applyLayers,
  applyTransform,
  highlightSpot,
  renderSlide,
  type SlideView,
} from "./slide";
import {
  initialState,
  panBy,
  setHovered,
  toggleLayer,
  zoomAt,
  type LayerToggles,
  type ViewState,
} from "./state";
import type { OverlayGeoJson, SpotIndex, Summary } from "./types";

export interface DashboardView {
  root: HTMLElement;
  base: string;
  state: ViewState;
  summary: Summary;
  index: SpotIndex;
  knownIds: Set<string>;
  slide: SlideView;
  plots: DotPlotPanel;
  hoverToken: number;
}

function clearHoverVisuals(view: DashboardView): void {
  view.state.hovered = null;
  clearOverlays(view.plots);
  highlightSpot(view.slide, null, view.state.selectedCluster);
}

/** Hover transition; `null` is un-hover. Last hover wins over slow fetches. */
export async function hoverSpot(view: DashboardView, id: string | null): Promise<void> {
  const token = ++view.hoverToken;
  if (id === null) {
    clearHoverVisuals(view);
    return;
  }
  if (!setHovered(view.state, id, view.knownIds)) return;
  try {
    const record = await getSpot(view.base, id);
    if (token !== view.hoverToken) return; // superseded while in flight
    overlaySpot(view.plots, view.summary, record.cluster, record.proportions);
    highlightSpot(view.slide, record.id, record.cluster);
  } catch (err) {
    if (token !== view.hoverToken) return;
    clearHoverVisuals(view);
    if (err instanceof SpotNotFound) {
      console.warn(`hover: ${err.message}`);
    } else {
      console.warn(`hover fetch failed: ${(err as Error).message}`);
    }
  }
}

export function setLayer(view: DashboardView, layer: keyof LayerToggles): void {
  toggleLayer(view.state, layer);
  applyLayers(view.slide, view.state.layers);
}

function slidePoint(view: DashboardView, ev: { clientX: number; clientY: number }) {
  const rect = view.slide.svg.getBoundingClientRect();
  const [vx, vy, vw, vh] = view.slide.svg
    .getAttribute("viewBox")!
    .split(" ")
    .map(Number);
  if (rect.width === 0 || rect.height === 0) {
    return { x: vx + vw / 2, y: vy + vh / 2, kx: 1, ky: 1 };
  }
  return {
    x: vx + ((ev.clientX - rect.left) / rect.width) * vw,
    y: vy + ((ev.clientY - rect.top) / rect.height) * vh,
    kx: vw / rect.width,
    ky: vh / rect.height,
  };
}

function wireInteractions(view: DashboardView): void {
  const svg = view.slide.svg;

  svg.addEventListener("pointerover", ev => {
    const hit = (ev.target as Element).closest?.("[data-spot]");
    if (hit) void hoverSpot(view, hit.getAttribute("data-spot"));
  });
  svg.addEventListener("pointerout", ev => {
    if ((ev.target as Element).closest?.("[data-spot]")) {
      void hoverSpot(view, null);
    }
  });

  svg.addEventListener("wheel", ev => {
    ev.preventDefault();
    const p = slidePoint(view, ev as WheelEvent);
    zoomAt(view.state, p.x, p.y, Math.exp(-(ev as WheelEvent).deltaY * 0.002));
    applyTransform(view.slide, view.state.transform);
  });

  let dragging: { x: number; y: number } | null = null;
  svg.addEventListener("pointerdown", ev => {
    dragging = { x: (ev as PointerEvent).clientX, y: (ev as PointerEvent).clientY };
  });
  svg.addEventListener("pointermove", ev => {
    if (!dragging) return;
    const e = ev as PointerEvent;
    const p = slidePoint(view, e);
    panBy(view.state, (e.clientX - dragging.x) * p.kx, (e.clientY - dragging.y) * p.ky);
    dragging = { x: e.clientX, y: e.clientY };
    applyTransform(view.slide, view.state.transform);
  });
  svg.addEventListener("pointerup", () => {
    dragging = null;
  });

  // clicking a plot selects its cluster; clicking it again deselects
  for (const [cluster, handle] of view.plots.byCluster) {
    handle.svg.addEventListener("click", () => {
      view.state.selectedCluster =
        view.state.selectedCluster === cluster ? null : cluster;
      for (const [c, h] of view.plots.byCluster) {
        h.svg.classList.toggle("selected", c === view.state.selectedCluster);
      }
      highlightSpot(view.slide, view.state.hovered, view.state.selectedCluster);
    });
  }
}

function buildToolbar(view: DashboardView): HTMLElement {
  const bar = document.createElement("header");
  bar.className = "toolbar";
  const title = document.createElement("span");
  title.className = "title";
  title.textContent = "spothull";
  bar.appendChild(title);
  for (const layer of ["image", "regions", "retained"] as const) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = view.state.layers[layer];
    box.setAttribute("data-layer", layer);
    box.addEventListener("change", () => setLayer(view, layer));
    label.append(box, ` ${layer}`);
    bar.appendChild(label);
  }
  return bar;
}

/** Fetch every artifact and build the two panels.
 *
 * Any fetch failure leaves only an error banner behind: no partial render.
 */
export async function loadArtifact(
  root: HTMLElement,
  base = "",
): Promise<DashboardView | null> {
  root.replaceChildren();
  let parts: [Summary, OverlayGeoJson, string, SpotIndex, string | null];
  try {
    parts = await Promise.all([
      getSummary(base),
      getOverlayGeoJson(base),
      getOverlaySvg(base),
      getSpotIndex(base),
      probeImage(base),
    ]);
  } catch (err) {
    showError(root, `artifact service unreachable: ${(err as Error).message}`);
    return null;
  }
  const [summary, geojson, svgText, index, imageUrl] = parts;

  const state = initialState();
  const slide = renderSlide(geojson, svgText, summary, index, imageUrl);
  const plots = renderDotPlots(summary, index.cell_types);
  const view: DashboardView = {
    root,
    base,
    state,
    summary,
    index,
    knownIds: new Set(index.ids),
    slide,
    plots,
    hoverToken: 0,
  };

  applyLayers(slide, state.layers);
  applyTransform(slide, state.transform);
  wireInteractions(view);

  const main = document.createElement("main");
  const slidePanel = document.createElement("section");
  slidePanel.className = "slide-panel";
  slidePanel.appendChild(slide.svg);
  const plotPanel = document.createElement("aside");
  plotPanel.className = "plot-panel";
  plotPanel.appendChild(plots.element);
  main.append(slidePanel, plotPanel);
  root.append(buildToolbar(view), main);
  return view;
}
