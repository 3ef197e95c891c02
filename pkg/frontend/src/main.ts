/** DOM wiring for the what-if workbench.
 *
 * One in-flight simulate per draft edit: edits are debounced 250 ms and
 * responses are gated by sequence number so a slow older response can never
 * overwrite a newer one.
 */

import { ApiClient, ApiError } from "./api.js";
import { buildPanels } from "./dashboard.js";
import { SequenceGate, debounce } from "./debounce.js";
import {
  RATE_SLIDER_MAX,
  RATE_SLIDER_MIN,
  RATE_SLIDER_STEP,
  defaultDraft,
  draftToPayload,
  isRateLocked,
  presetToDraft,
  withBase,
  withExemption,
  withLabel,
  withRate,
} from "./editor.js";
import { computeRadar, renderRadarSvg } from "./radar.js";
import { ComparisonSet, MAX_COMPARISONS } from "./state.js";
import type {
  DesignDraft,
  SimulateResponse,
  TaxDesignPayload,
  WealthBase,
} from "./types.js";
import { BASE_LABELS, WEALTH_BASES } from "./types.js";
import { designDiagnostics } from "./validation.js";

const api = new ApiClient("");
const gate = new SequenceGate();
const comparisons = new ComparisonSet();

let draft: DesignDraft = defaultDraft();
let lastResponse: SimulateResponse | null = null;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

function renderBanner(text: string | null): void {
  const banner = $("banner");
  banner.textContent = text ?? "";
  banner.classList.toggle("hidden", text === null);
}

function renderDiagnostics(messages: string[]): void {
  const box = $("diagnostics");
  box.innerHTML = "";
  for (const message of messages) {
    const li = document.createElement("li");
    li.textContent = message;
    box.appendChild(li);
  }
  box.classList.toggle("hidden", messages.length === 0);
}

function renderEditor(): void {
  ($("base-select") as HTMLSelectElement).value = draft.base;
  const p90 = $("exemption-90") as HTMLInputElement;
  const p95 = $("exemption-95") as HTMLInputElement;
  p90.checked = draft.exemptionPercentile === 90;
  p95.checked = draft.exemptionPercentile === 95;
  draft.ratesPct.forEach((pct, i) => {
    const slider = $(`rate-${i}`) as HTMLInputElement;
    slider.value = String(pct);
    slider.disabled = isRateLocked(draft, i);
    $(`rate-${i}-value`).textContent = `${pct.toFixed(1)}%`;
  });
  ($("design-label") as HTMLInputElement).value = draft.label;
}

function renderPanels(response: SimulateResponse | null): void {
  const host = $("panels");
  host.innerHTML = "";
  if (!response) return;
  for (const panel of buildPanels(response)) {
    const card = document.createElement("div");
    card.className = "panel";
    card.innerHTML =
      `<div class="panel-goal"></div>` +
      `<div class="panel-title"></div>` +
      `<div class="panel-value"></div>` +
      `<div class="panel-detail"></div>`;
    (card.querySelector(".panel-goal") as HTMLElement).textContent = panel.goal;
    (card.querySelector(".panel-title") as HTMLElement).textContent = panel.title;
    (card.querySelector(".panel-value") as HTMLElement).textContent = panel.formatted;
    (card.querySelector(".panel-detail") as HTMLElement).textContent = panel.detail;
    host.appendChild(card);
  }
  $("timing").textContent = `computed in ${response.timing_ms.toFixed(0)} ms`;
}

function renderComparisons(): void {
  const list = $("comparison-list");
  list.innerHTML = "";
  for (const entry of comparisons.toArray()) {
    const item = document.createElement("li");
    const name = document.createElement("span");
    name.textContent = entry.label;
    const remove = document.createElement("button");
    remove.textContent = "remove";
    remove.addEventListener("click", () => {
      comparisons.remove(entry.label);
      renderComparisons();
    });
    item.append(name, remove);
    list.appendChild(item);
  }
  const chart = $("radar-chart");
  if (comparisons.size >= 2) {
    chart.innerHTML = renderRadarSvg(
      computeRadar(
        comparisons.toArray().map((r) => ({ label: r.label, report: r })),
      ),
    );
    $("radar-hint").classList.add("hidden");
  } else {
    chart.innerHTML = "";
    $("radar-hint").classList.remove("hidden");
  }
  ($("save-button") as HTMLButtonElement).disabled =
    lastResponse === null ||
    (!comparisons.has(draft.label) && comparisons.size >= MAX_COMPARISONS);
}

async function simulateNow(): Promise<void> {
  const payload = draftToPayload(draft);
  const problems = designDiagnostics(
    payload.base,
    payload.exemption_percentile,
    payload.rates,
  );
  renderDiagnostics(problems.map((p) => p.message));
  if (problems.length > 0) {
    return; // invalid drafts never reach the server
  }
  const token = gate.next();
  try {
    const response = await api.simulate(payload);
    if (!gate.accept(token)) return; // superseded by a newer edit
    lastResponse = response;
    renderBanner(null);
    renderPanels(response);
    renderComparisons();
  } catch (error) {
    if (!gate.accept(token)) return;
    lastResponse = null;
    if (error instanceof ApiError) {
      const extra = error.diagnostics.map((d) => d.message).join("; ");
      renderBanner(
        error.status === 503
          ? "snapshot is still loading, retry shortly"
          : `server rejected the request: ${extra || error.message}`,
      );
    } else {
      renderBanner(`service unreachable: ${String(error)}`);
    }
    renderPanels(null);
  }
}

const simulateSoon = debounce(() => void simulateNow());

function updateDraft(next: DesignDraft): void {
  draft = next;
  renderEditor();
  simulateSoon();
}

function wireEditor(presets: TaxDesignPayload[]): void {
  const presetSelect = $("preset-select") as HTMLSelectElement;
  for (const preset of presets) {
    const option = document.createElement("option");
    option.value = preset.label;
    option.textContent = preset.label;
    presetSelect.appendChild(option);
  }
  presetSelect.addEventListener("change", () => {
    const preset = presets.find((p) => p.label === presetSelect.value);
    if (preset) updateDraft(presetToDraft(preset));
  });

  const baseSelect = $("base-select") as HTMLSelectElement;
  for (const base of WEALTH_BASES) {
    const option = document.createElement("option");
    option.value = base;
    option.textContent = BASE_LABELS[base];
    baseSelect.appendChild(option);
  }
  baseSelect.addEventListener("change", () =>
    updateDraft(withBase(draft, baseSelect.value as WealthBase)),
  );

  ($("exemption-90") as HTMLInputElement).addEventListener("change", () =>
    updateDraft(withExemption(draft, 90)),
  );
  ($("exemption-95") as HTMLInputElement).addEventListener("change", () =>
    updateDraft(withExemption(draft, 95)),
  );

  for (const i of [0, 1, 2]) {
    const slider = $(`rate-${i}`) as HTMLInputElement;
    slider.min = String(RATE_SLIDER_MIN);
    slider.max = String(RATE_SLIDER_MAX);
    slider.step = String(RATE_SLIDER_STEP);
    slider.addEventListener("input", () =>
      updateDraft(withRate(draft, i, Number(slider.value))),
    );
  }

  ($("design-label") as HTMLInputElement).addEventListener("change", (event) =>
    updateDraft(withLabel(draft, (event.target as HTMLInputElement).value || "custom")),
  );

  ($("save-button") as HTMLButtonElement).addEventListener("click", () => {
    if (lastResponse) {
      comparisons.add({ ...lastResponse, label: draft.label });
      renderComparisons();
    }
  });
}

async function start(): Promise<void> {
  try {
    const presets = await api.getPresets();
    wireEditor(presets);
    const summary = await api.getSummary();
    $("dataset-info").textContent =
      `${summary.records_per_implicate.toLocaleString("en-US")} households x ` +
      `${summary.implicates} implicates, reference year ${summary.reference_year}`;
  } catch (error) {
    renderBanner(
      error instanceof ApiError && error.status === 503
        ? "snapshot is still loading, retry shortly"
        : `service unreachable: ${String(error)}`,
    );
  }
  renderEditor();
  renderComparisons();
  simulateSoon();
}

if (typeof document !== "undefined" && document.getElementById("panels")) {
  void start();
}
