// SVG rendering of service-supplied depiction payloads. The geometry is
// exactly the server's planar coordinates, scaled to the viewport; no
// client-side structure handling.

import type { Depiction, DepictionAtom } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";

const ELEMENT_COLORS: Record<string, string> = {
  N: "#2060c0",
  O: "#c03020",
  S: "#b08000",
  F: "#20a050",
  Cl: "#20a050",
  Br: "#904020",
  I: "#702090",
  P: "#c07000",
};

function atomLabel(atom: DepictionAtom): string {
  let label = atom.element;
  if (atom.element !== "C" && atom.h_count > 0) {
    label += atom.h_count === 1 ? "H" : `H${atom.h_count}`;
  }
  if (atom.charge !== 0) {
    const magnitude = Math.abs(atom.charge);
    label += (magnitude > 1 ? String(magnitude) : "") + (atom.charge > 0 ? "+" : "-");
  }
  return label;
}

function line(
  x1: number, y1: number, x2: number, y2: number,
  cls: string, dashed = false,
): SVGLineElement {
  const el = document.createElementNS(SVG_NS, "line");
  el.setAttribute("x1", x1.toFixed(2));
  el.setAttribute("y1", y1.toFixed(2));
  el.setAttribute("x2", x2.toFixed(2));
  el.setAttribute("y2", y2.toFixed(2));
  el.setAttribute("class", cls);
  el.setAttribute("stroke", "#444");
  el.setAttribute("stroke-width", "1.4");
  if (dashed) el.setAttribute("stroke-dasharray", "4 3");
  return el;
}

export function renderDepiction(dep: Depiction, size = 220): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "molecule");
  svg.setAttribute("width", String(size));
  svg.setAttribute("height", String(size));
  svg.setAttribute("viewBox", `0 0 ${size} ${size}`);

  const xs = dep.atoms.map((a) => a.x);
  const ys = dep.atoms.map((a) => a.y);
  const span = Math.max(
    Math.max(...xs) - Math.min(...xs),
    Math.max(...ys) - Math.min(...ys),
    1.0,
  );
  const scale = (size * 0.8) / span;
  const cx = (Math.max(...xs) + Math.min(...xs)) / 2;
  const cy = (Math.max(...ys) + Math.min(...ys)) / 2;
  const px = (a: DepictionAtom) => size / 2 + (a.x - cx) * scale;
  const py = (a: DepictionAtom) => size / 2 - (a.y - cy) * scale;

  const byIndex = new Map(dep.atoms.map((a) => [a.index, a]));
  for (const bond of dep.bonds) {
    const a = byIndex.get(bond.a);
    const b = byIndex.get(bond.b);
    if (!a || !b) continue;
    const x1 = px(a), y1 = py(a), x2 = px(b), y2 = py(b);
    if (bond.order === 2 || bond.order === 3) {
      const nx = -(y2 - y1), ny = x2 - x1;
      const norm = Math.hypot(nx, ny) || 1;
      const off = 2.4;
      const dx = (nx / norm) * off, dy = (ny / norm) * off;
      svg.appendChild(line(x1 + dx, y1 + dy, x2 + dx, y2 + dy, "bond"));
      svg.appendChild(line(x1 - dx, y1 - dy, x2 - dx, y2 - dy, "bond"));
      if (bond.order === 3) svg.appendChild(line(x1, y1, x2, y2, "bond"));
    } else {
      svg.appendChild(line(x1, y1, x2, y2, "bond", bond.order === 4));
      if (bond.order === 4) svg.appendChild(line(x1, y1, x2, y2, "bond-aromatic-base"));
    }
  }

  for (const atom of dep.atoms) {
    if (atom.element === "C" && atom.charge === 0) continue;
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", px(atom).toFixed(2));
    text.setAttribute("y", (py(atom) + 4).toFixed(2));
    text.setAttribute("class", "atom-label");
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("font-size", "13");
    text.setAttribute("fill", ELEMENT_COLORS[atom.element] ?? "#222");
    text.textContent = atomLabel(atom);
    svg.appendChild(text);
  }
  return svg;
}
