/** DOM wiring for the decision explorer. */

import { ConerankClient } from "./api.js";
import { ExplorerSession } from "./state.js";
import { renderScatter } from "./scatter.js";

const baseUrl = new URLSearchParams(window.location.search).get("api") ?? "";
const client = new ConerankClient(baseUrl);
const session = new ExplorerSession(client);

const el = (id: string) => document.getElementById(id) as HTMLElement;

function renderSliders(): void {
  const box = el("sliders");
  const snap = session.snapshot();
  box.innerHTML = "";
  snap.sliders.forEach((s, i) => {
    const row = document.createElement("div");
    row.className = "slider-row";
    row.innerHTML =
      `<span class="crit">${snap.criteria[i] ?? `c${i + 1}`}</span>` +
      `<label>min <input type="range" min="0" max="100" value="${s.lo}" data-i="${i}" data-kind="lo"></label>` +
      `<span class="val">${(s.lo / 100).toFixed(2)}</span>` +
      `<label>max <input type="range" min="0" max="100" value="${s.hi}" data-i="${i}" data-kind="hi"></label>` +
      `<span class="val">${(s.hi / 100).toFixed(2)}</span>`;
    box.appendChild(row);
  });
  box.querySelectorAll("input[type=range]").forEach((input) => {
    input.addEventListener("change", (ev) => {
      const t = ev.target as HTMLInputElement;
      const i = Number(t.dataset.i);
      const s = session.snapshot().sliders[i];
      const lo = t.dataset.kind === "lo" ? Number(t.value) : s.lo;
      const hi = t.dataset.kind === "hi" ? Number(t.value) : s.hi;
      session.setSlider(i, lo, hi);
      void session.refreshRanks();
    });
  });
}

function renderAlerts(): void {
  const snap = session.snapshot();
  const box = el("alerts");
  box.innerHTML = "";
  for (const alert of snap.alerts) {
    const div = document.createElement("div");
    div.className = "alert";
    div.innerHTML = `<strong>Rank reversal</strong> ${alert.message} <button data-key="${alert.key}">dismiss</button>`;
    div.querySelector("button")!.addEventListener("click", () => {
      session.dismissAlert(alert.key);
    });
    box.appendChild(div);
  }
  const replay = el("replay");
  replay.innerHTML = snap.dismissedAlerts.length
    ? "<h3>Dismissed alerts</h3>" +
      snap.dismissedAlerts.map((a) => `<div class="replay-item">${a.message}</div>`).join("")
    : "";
}

function renderStatus(): void {
  const snap = session.snapshot();
  el("status").textContent = snap.error
    ? `error: ${snap.error}`
    : snap.busy
      ? "working…"
      : snap.datasetId
        ? `dataset ${snap.datasetId} @ rev ${snap.revision}` +
          (snap.uncommitted ? " — uncommitted edits" : "")
        : "no dataset";
  (el("commit") as HTMLButtonElement).disabled = !snap.uncommitted;
  (el("discard") as HTMLButtonElement).disabled = !snap.uncommitted;
}

function renderAll(): void {
  renderStatus();
  renderAlerts();
  renderScatter(el("scatter"), session.scatterModel());
}

session.onChange(renderAll);

el("load").addEventListener("click", () => {
  const csv = (el("csv") as HTMLTextAreaElement).value;
  void session.loadCsv(csv).then(renderSliders).catch(() => renderAll());
});

el("add").addEventListener("click", () => {
  const raw = (el("coords") as HTMLInputElement).value;
  const coords = raw.split(",").map((c) => Number(c.trim()));
  if (coords.every((c) => Number.isFinite(c))) {
    void session.addPoint(coords);
  }
});

el("remove").addEventListener("click", () => {
  const id = (el("remove-id") as HTMLInputElement).value.trim();
  if (id) void session.removePoint(id);
});

el("commit").addEventListener("click", () => void session.commitEdits());
el("discard").addEventListener("click", () => void session.clearEdits().then(() => session.refreshRanks()));

renderAll();
