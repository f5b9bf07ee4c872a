export interface LayerToggles {
  image: boolean;
  regions: boolean;
  retained: boolean;
}

export interface Transform {
  x: number;
  y: number;
  scale: number;
}

export interface ViewState {
  hovered: string | null;
  selectedCluster: number | null;
  layers: LayerToggles;
  transform: Transform;
}

export function initialState(): ViewState {
  return {
    hovered: null,
    selectedCluster: null,
    layers: { image: true, regions: true, retained: true },
    transform: { x: 0, y: 0, scale: 1 },
  };
}

/** Set the hovered spot; ids not present in the loaded index are refused. */
export function setHovered(
  state: ViewState,
  id: string | null,
  knownIds: ReadonlySet<string>,
): boolean {
  if (id !== null && !knownIds.has(id)) return false;
  state.hovered = id;
  return true;
}

export function toggleLayer(state: ViewState, layer: keyof LayerToggles): void {
  state.layers[layer] = !state.layers[layer];
}

const MIN_SCALE = 0.25;
const MAX_SCALE = 16;

/** Scale around a fixed point in slide coordinates. */
export function zoomAt(state: ViewState, px: number, py: number, factor: number): void {
  const t = state.transform;
  const next = Math.min(MAX_SCALE, Math.max(MIN_SCALE, t.scale * factor));
  const applied = next / t.scale;
  t.x = px - (px - t.x) * applied;
  t.y = py - (py - t.y) * applied;
  t.scale = next;
}

export function panBy(state: ViewState, dx: number, dy: number): void {
  state.transform.x += dx;
  state.transform.y += dy;
}
