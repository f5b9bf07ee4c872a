/** Fixed 6-decimal quantization with trailing zeros trimmed.
 *
 * Mirrors the coordinate formatting of the artifact writer so vertices
 * rendered here are token-identical to the served overlay.svg.
 */
export function fmt(v: number): string {
  let s = v.toFixed(6);
  if (s.includes(".")) {
    s = s.replace(/0+$/, "").replace(/\.$/, "");
  }
  return s === "-0" || s === "" ? "0" : s;
}
