// DOM wiring: scenario picker, measurement buttons, log, probability bars and
// the phase-plane panel. All state lives in a UiSessionModel; every render is
// a pure function of it. On any HTTP error the full session is re-fetched so
// the log never desynchronizes.

import { ApiClient, ApiError, ScenarioDescriptor } from "./api.js";
import {
  UiSessionModel,
  emptyModel,
  withView,
  withError,
  withPending,
  buttonsEnabled,
  annotateLog,
  barSegments,
} from "./model.js";
import { drawPhasePlane, standardAxes, stateAngle } from "./phasePlane.js";

const api = new ApiClient("");
let model: UiSessionModel = emptyModel();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function render(): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = model.error ?? "";
  banner.style.display = model.error ? "block" : "none";

  const buttons = el<HTMLDivElement>("measurements");
  buttons.querySelectorAll("button").forEach((b) => {
    b.disabled = !buttonsEnabled(model);
  });

  const view = model.view;
  if (!view) return;

  el<HTMLSpanElement>("session-label").textContent =
    `${view.scenario} · seed ${view.seed} · session ${view.id.slice(0, 8)}…`;

  const bars = el<HTMLDivElement>("bars");
  bars.innerHTML = view.measurements
    .map((m) => {
      const segs = barSegments(m.predicted);
      const rows = segs
        .map(
          (s) => `
        <div class="bar-row">
          <span class="bar-label">${m.name}=${s.label}</span>
          <span class="bar-track"><span class="bar-fill" style="width:${s.percent}%"></span></span>
          <span class="bar-pct">${s.percent}%</span>
        </div>`,
        )
        .join("");
      return `<div class="bar-group"><h3>${m.name}</h3>${rows}</div>`;
    })
    .join("");

  const log = el<HTMLTableSectionElement>("log-body");
  log.innerHTML = annotateLog(view.history)
    .map(
      (row) => `
      <tr class="flag-${row.flag}">
        <td>${row.index}</td>
        <td>${row.measurement}</td>
        <td>${row.label}</td>
        <td>${row.value}</td>
        <td>${row.note}</td>
      </tr>`,
    )
    .join("");

  const canvas = el<HTMLCanvasElement>("phase-plane");
  const note = el<HTMLDivElement>("phase-note");
  if (view.dim === 2 && view.state) {
    note.textContent = "";
    const names = view.measurements.map((m) => m.name);
    drawPhasePlane(canvas, standardAxes(names[0], names[1] ?? "?"), stateAngle(view.state));
  } else if (view.dim === 2) {
    note.textContent =
      "State hidden by the server — predictions only. Start the service with --reveal-state to see the phase plane.";
    drawPhasePlane(canvas, [], null);
  } else {
    note.textContent = "Phase-plane view needs a two-dimensional scenario.";
    drawPhasePlane(canvas, [], null);
  }
}

async function refresh(): Promise<void> {
  if (!model.view) return;
  try {
    model = withView(model, await api.getSession(model.view.id));
  } catch (e) {
    model = withError(model, e instanceof ApiError ? e.message : String(e));
  }
  render();
}

async function startSession(scenario: ScenarioDescriptor): Promise<void> {
  model = withPending(model);
  render();
  try {
    const view = await api.createSession(scenario.name);
    model = withView(model, view);
    const buttons = el<HTMLDivElement>("measurements");
    buttons.innerHTML = "";
    for (const name of scenario.measurements) {
      const b = document.createElement("button");
      b.textContent = `Measure ${name}`;
      b.onclick = () => measure(name);
      buttons.appendChild(b);
    }
  } catch (e) {
    model = withError(model, e instanceof ApiError ? e.message : String(e));
  }
  render();
}

async function measure(name: string): Promise<void> {
  const view = model.view;
  if (!buttonsEnabled(model) || !view) return;
  model = withPending(model);
  render();
  try {
    const resp = await api.measure(view.id, name);
    model = withView(model, resp.session);
    render();
  } catch (e) {
    model = withError(model, e instanceof ApiError ? e.message : String(e));
    render();
    await refresh(); // never let the log drift from the server
  }
}

async function boot(): Promise<void> {
  const picker = el<HTMLDivElement>("scenarios");
  try {
    const scenarios = await api.listScenarios();
    picker.innerHTML = "";
    for (const sc of scenarios) {
      const card = document.createElement("button");
      card.className = "scenario-card";
      card.innerHTML = `<strong>${sc.name}</strong><br><small>${sc.description}</small>`;
      card.onclick = () => startSession(sc);
      picker.appendChild(card);
    }
  } catch (e) {
    model = withError(model, e instanceof ApiError ? e.message : String(e));
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.onclick = () => boot();
    picker.innerHTML = "";
    picker.appendChild(retry);
  }
  render();
}

boot();
