import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { hoverSpot, loadArtifact, setLayer, type DashboardView } from "../src/app";
import type { SpotRecord, Summary } from "../src/types";
import {
  coveredSamples,
  deferred,
  fixtureJson,
  installFetch,
  type SpotsFile,
} from "./helpers";

const spotsFile = fixtureJson<SpotsFile>("spots.json");
const summary = fixtureJson<Summary>("summary.json");
const [spotA, spotB] = coveredSamples(spotsFile);

function freshRoot(): HTMLElement {
  const root = document.createElement("div");
  document.body.replaceChildren(root);
  return root;
}

async function loadedView(): Promise<DashboardView> {
  const view = await loadArtifact(freshRoot());
  if (!view) throw new Error("fixture artifact failed to load");
  return view;
}

function overlayValues(view: DashboardView): Map<number, number[]> {
  const populated = new Map<number, number[]>();
  for (const [cluster, handle] of view.plots.byCluster) {
    const nodes = [...handle.svg.querySelectorAll(".overlay")];
    if (nodes.length > 0) {
      populated.set(
        cluster,
        nodes.map(n => Number(n.getAttribute("data-prop"))),
      );
    }
  }
  return populated;
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("loadArtifact", () => {
  beforeEach(() => installFetch());

  it("renders toolbar, slide and one plot per cluster", async () => {
    const view = await loadedView();
    const root = view.root;
    expect(root.querySelectorAll("input[data-layer]").length).toBe(3);
    expect(root.querySelector(".slide-panel svg.slide")).not.toBeNull();
    expect(root.querySelectorAll(".plot-panel svg.dotplot").length).toBe(
      summary.clusters.length,
    );
    expect(view.knownIds.size).toBe(Object.keys(spotsFile.spots).length);
  });

  it("shows only an error banner when the service is unreachable", async () => {
    installFetch({ fail: true });
    const root = freshRoot();
    const view = await loadArtifact(root);
    expect(view).toBeNull();
    const banner = root.querySelector(".error-banner");
    expect(banner).not.toBeNull();
    expect(banner!.textContent).toContain("unreachable");
    expect(root.querySelector("main")).toBeNull();
    expect(root.querySelector("svg")).toBeNull();
  });

  it("layer checkboxes hide and restore their layer", async () => {
    const view = await loadedView();
    setLayer(view, "regions");
    expect(view.slide.layers.regions.style.display).toBe("none");
    expect(view.slide.layers.retained.style.display).toBe("");
    setLayer(view, "regions");
    expect(view.slide.layers.regions.style.display).toBe("");
  });
});

describe("hover contract", () => {
  beforeEach(() => installFetch());

  it("puts the spot's proportions on exactly one plot", async () => {
    const view = await loadedView();
    await hoverSpot(view, spotA.id);

    const populated = overlayValues(view);
    expect([...populated.keys()]).toEqual([spotA.cluster]);
    expect(populated.get(spotA.cluster)).toEqual(spotA.proportions);

    const node = view.slide.spotNodes.get(spotA.id)!;
    expect(node.classList.contains("hovered")).toBe(true);
    for (const path of view.slide.regionsByCluster.get(spotA.cluster) ?? []) {
      expect(path.classList.contains("hl")).toBe(true);
    }
  });

  it("un-hover restores centroid-only plots", async () => {
    const view = await loadedView();
    await hoverSpot(view, spotA.id);
    await hoverSpot(view, null);

    expect(view.state.hovered).toBeNull();
    expect(overlayValues(view).size).toBe(0);
    for (const handle of view.plots.byCluster.values()) {
      expect(handle.svg.querySelectorAll(".centroid").length).toBe(
        view.index.cell_types.length,
      );
    }
    for (const node of view.slide.spotNodes.values()) {
      expect(node.classList.contains("hovered")).toBe(false);
    }
  });

  it("moving between spots leaves a single populated plot", async () => {
    const view = await loadedView();
    await hoverSpot(view, spotA.id);
    await hoverSpot(view, spotB.id);
    const populated = overlayValues(view);
    expect([...populated.keys()]).toEqual([spotB.cluster]);
    expect(populated.get(spotB.cluster)).toEqual(spotB.proportions);
  });

  it("a misplaced spot reports to its own cluster's plot", async () => {
    const misplaced = Object.values(spotsFile.spots).find(
      r => r.reason === "misplaced",
    )!;
    // the fixture plants it among spots labeled with a different cluster
    const nearest = [...Object.values(spotsFile.spots)]
      .filter(r => r.status === "covered")
      .sort(
        (a, b) =>
          (a.x - misplaced.x) ** 2 +
          (a.y - misplaced.y) ** 2 -
          ((b.x - misplaced.x) ** 2 + (b.y - misplaced.y) ** 2),
      )[0];
    expect(nearest.cluster).not.toBe(misplaced.cluster);

    const view = await loadedView();
    await hoverSpot(view, misplaced.id);
    expect([...overlayValues(view).keys()]).toEqual([misplaced.cluster]);
  });

  it("refuses ids missing from the loaded index", async () => {
    const view = await loadedView();
    await hoverSpot(view, "nope");
    expect(view.state.hovered).toBeNull();
    expect(overlayValues(view).size).toBe(0);
  });

  it("clears the overlay and warns when the detail 404s", async () => {
    installFetch({ missingSpots: [spotA.id] });
    const warn = vi.spyOn(console, "warn").mockImplementation(() => {});
    const view = await loadedView();

    await hoverSpot(view, spotB.id);
    expect(overlayValues(view).size).toBe(1);

    await hoverSpot(view, spotA.id);
    expect(overlayValues(view).size).toBe(0);
    expect(view.state.hovered).toBeNull();
    expect(warn).toHaveBeenCalledOnce();
    expect(String(warn.mock.calls[0][0])).toContain(spotA.id);
  });

  it("a stale response cannot overwrite a newer hover", async () => {
    const slow = deferred();
    const fast = deferred();
    installFetch({
      gates: new Map([
        [spotA.id, slow.promise],
        [spotB.id, fast.promise],
      ]),
    });
    const view = await loadedView();

    const first = hoverSpot(view, spotA.id);
    const second = hoverSpot(view, spotB.id);
    fast.resolve();
    await second;
    expect([...overlayValues(view).keys()]).toEqual([spotB.cluster]);

    slow.resolve();
    await first; // finishes after B, must be discarded
    const populated = overlayValues(view);
    expect([...populated.keys()]).toEqual([spotB.cluster]);
    expect(populated.get(spotB.cluster)).toEqual(spotB.proportions);
    expect(view.state.hovered).toBe(spotB.id);
  });

  it("pointer events on a hit marker drive the same path", async () => {
    const view = await loadedView();
    const node = view.slide.spotNodes.get(spotA.id)!;

    node.dispatchEvent(new Event("pointerover", { bubbles: true }));
    await vi.waitFor(() => {
      expect(overlayValues(view).size).toBe(1);
    });

    node.dispatchEvent(new Event("pointerout", { bubbles: true }));
    await vi.waitFor(() => {
      expect(overlayValues(view).size).toBe(0);
    });
  });
});

describe("hover detail payload", () => {
  it("fixture records carry full proportion vectors", () => {
    for (const record of Object.values(spotsFile.spots) as SpotRecord[]) {
      expect(record.proportions.length).toBe(spotsFile.cell_types.length);
    }
  });
});
