/** SVG scatter rendering of a ScatterModel (thin DOM layer, no math). */

import { ScatterModel } from "./state.js";

const W = 560;
const H = 520;
const PAD = 0.12;

function norm(v: number[]): [number, number] {
  const n = Math.hypot(v[0], v[1]);
  return n === 0 ? [0, 0] : [v[0] / n, v[1] / n];
}

export function renderScatter(container: HTMLElement, model: ScatterModel): void {
  if (model.empty) {
    container.innerHTML = '<div class="empty-state">No alternatives loaded yet.</div>';
    return;
  }
  const xs = model.points.map((p) => p.x);
  const ys = model.points.map((p) => p.y);
  const xmin = Math.min(...xs);
  const xmax = Math.max(...xs);
  const ymin = Math.min(...ys);
  const ymax = Math.max(...ys);
  const spanX = xmax - xmin || 1;
  const spanY = ymax - ymin || 1;
  const sx = (x: number) => W * (PAD + (1 - 2 * PAD) * ((x - xmin) / spanX));
  const sy = (y: number) => H * (1 - PAD - (1 - 2 * PAD) * ((y - ymin) / spanY));

  const parts: string[] = [
    `<svg viewBox="0 0 ${W} ${H}" role="img" aria-label="rank scatter">`,
    `<rect width="${W}" height="${H}" fill="#fdfdfd"/>`,
  ];

  const arm = 0.28 * Math.max(spanX, spanY);
  const anchor: [number, number] = [xmin, ymin];
  const rays = model.coneRays.filter((r) => r[0] !== 0 || r[1] !== 0);
  if (rays.length >= 2) {
    const tips = rays.map(norm).map(
      (u) => [anchor[0] + arm * u[0], anchor[1] + arm * u[1]] as [number, number],
    );
    const path =
      `M ${sx(anchor[0]).toFixed(1)} ${sy(anchor[1]).toFixed(1)} ` +
      tips.map((t) => `L ${sx(t[0]).toFixed(1)} ${sy(t[1]).toFixed(1)}`).join(" ") +
      " Z";
    parts.push(
      `<path d="${path}" fill="#4f81bd" fill-opacity="0.12" stroke="#4f81bd" stroke-width="1"/>`,
    );
  }
  for (const r of model.dualRays) {
    const u = norm(r);
    const tip = [anchor[0] + 0.8 * arm * u[0], anchor[1] + 0.8 * arm * u[1]];
    parts.push(
      `<line x1="${sx(anchor[0]).toFixed(1)}" y1="${sy(anchor[1]).toFixed(1)}" ` +
        `x2="${sx(tip[0]).toFixed(1)}" y2="${sy(tip[1]).toFixed(1)}" ` +
        `stroke="#c0504d" stroke-dasharray="5 3"/>`,
    );
  }
  for (const p of model.points) {
    const cls = p.pending ? "pt pending" : p.pendingRemoval ? "pt removing" : "pt";
    parts.push(
      `<g class="${cls}" data-id="${p.id}">` +
        `<circle cx="${sx(p.x).toFixed(1)}" cy="${sy(p.y).toFixed(1)}" r="8" ` +
        `fill="${p.shade}" stroke="${p.pendingRemoval ? "#c0504d" : "#222"}" ` +
        `stroke-width="${p.pending || p.pendingRemoval ? 2.5 : 1}" ` +
        `${p.pending ? 'stroke-dasharray="3 2"' : ""}>` +
        `<title>${p.hover}${p.pending ? " | uncommitted" : ""}${p.pendingRemoval ? " | marked for removal" : ""}</title>` +
        `</circle>` +
        `<text x="${(sx(p.x) + 11).toFixed(1)}" y="${(sy(p.y) - 9).toFixed(1)}">${p.id}${p.pending ? "*" : ""}</text>` +
        `</g>`,
    );
  }
  parts.push(
    `<text x="${W - 10}" y="${H - 8}" text-anchor="end" class="axis">${model.axisNames[0]} →</text>`,
    `<text x="12" y="16" class="axis">↑ ${model.axisNames[1]}</text>`,
    "</svg>",
  );
  container.innerHTML = parts.join("");
}
