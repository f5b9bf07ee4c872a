const SVG_NS = "http://www.w3.org/2000/svg";

export const MARKER_SHAPES = [
  "circle",
  "square",
  "triangle",
  "diamond",
  "cross",
  "star",
] as const;

export function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

function starPath(x: number, y: number, r: number): string {
  const pts: string[] = [];
  for (let i = 0; i < 10; i++) {
    const radius = i % 2 === 0 ? r : r * 0.45;
    const a = -Math.PI / 2 + (i * Math.PI) / 5;
    pts.push(`${x + radius * Math.cos(a)},${y + radius * Math.sin(a)}`);
  }
  return `M ${pts.join(" L ")} Z`;
}

function crossPath(x: number, y: number, r: number): string {
  const t = r * 0.35;
  return (
    `M ${x - t},${y - r} H ${x + t} V ${y - t} H ${x + r} V ${y + t}` +
    ` H ${x + t} V ${y + r} H ${x - t} V ${y + t} H ${x - r} V ${y - t}` +
    ` H ${x - t} Z`
  );
}

/** One marker glyph; fill and stroke are left to the caller. */
export function markerNode(shape: string, x: number, y: number, r: number): SVGElement {
  let el: SVGElement;
  switch (shape) {
    case "circle":
      el = svgEl("circle", { cx: `${x}`, cy: `${y}`, r: `${r}` });
      break;
    case "square":
      el = svgEl("rect", {
        x: `${x - r}`,
        y: `${y - r}`,
        width: `${2 * r}`,
        height: `${2 * r}`,
      });
      break;
    case "triangle":
      el = svgEl("path", {
        d: `M ${x},${y - r} L ${x + r * 0.866},${y + r / 2} L ${x - r * 0.866},${y + r / 2} Z`,
      });
      break;
    case "diamond":
      el = svgEl("path", {
        d: `M ${x},${y - r} L ${x + r},${y} L ${x},${y + r} L ${x - r},${y} Z`,
      });
      break;
    case "cross":
      el = svgEl("path", { d: crossPath(x, y, r) });
      break;
    case "star":
      el = svgEl("path", { d: starPath(x, y, r) });
      break;
    default:
      throw new Error(`unknown marker shape: ${shape}`);
  }
  el.setAttribute("data-shape", shape);
  return el;
}
