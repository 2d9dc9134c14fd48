/** String-assembly SVG helpers; enough for static batch plots. */

export type Attrs = Record<string, string | number>;

/** Round coordinates so the files stay small. */
export function fmt(n: number): string {
  const r = Math.round(n * 100) / 100;
  return Object.is(r, -0) ? "0" : String(r);
}

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function tag(name: string, attrs: Attrs, children?: string): string {
  const parts = Object.entries(attrs).map(
    ([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`,
  );
  const open = parts.length > 0 ? `<${name} ${parts.join(" ")}` : `<${name}`;
  return children === undefined ? `${open}/>` : `${open}>${children}</${name}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return tag("text", { x, y, "font-family": "sans-serif", ...attrs }, esc(content));
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs = {}): string {
  return tag("line", { x1, y1, x2, y2, stroke: "#000", ...attrs });
}

export function rect(x: number, y: number, w: number, h: number, attrs: Attrs = {}): string {
  return tag("rect", { x, y, width: w, height: h, ...attrs });
}

export function circle(cx: number, cy: number, r: number, attrs: Attrs = {}): string {
  return tag("circle", { cx, cy, r, ...attrs });
}

export function svgDocument(width: number, height: number, body: string[]): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">`;
  const background = rect(0, 0, width, height, { fill: "#ffffff" });
  return `${head}\n${background}\n${body.join("\n")}\n</svg>\n`;
}
