// Browser entry point: wires the store to the DOM. All rendering goes
// through the pure string builders in render.ts.

import { AnalyzeClient } from "./api.js";
import {
  renderChart,
  renderDecisionCard,
  renderIndicatorPane,
  renderPatternTrendPane,
  renderStatus,
} from "./render.js";
import { ConsoleStore } from "./store.js";
import type { Backend } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

export function mountConsole(baseUrl: string): ConsoleStore {
  const client = new AnalyzeClient(baseUrl, (url, init) => fetch(url, init));
  const store = new ConsoleStore(client);

  const datasetSelect = byId<HTMLSelectElement>("dataset");
  const endIndexInput = byId<HTMLInputElement>("end-index");
  const contextInput = byId<HTMLInputElement>("context-bars");
  const backendSelect = byId<HTMLSelectElement>("backend");
  const submitButton = byId<HTMLButtonElement>("submit");

  store.subscribe((state) => {
    if (datasetSelect.options.length !== state.datasets.length) {
      datasetSelect.innerHTML = state.datasets
        .map(
          (d) =>
            `<option value="${d.name}">${d.name} (${d.timeframe}, ${d.bars} bars)</option>`,
        )
        .join("");
      if (state.selection.dataset) {
        datasetSelect.value = state.selection.dataset;
      }
    }
    submitButton.disabled = state.status === "pending";
    byId("status").innerHTML = renderStatus(state.status, state.error);
    byId("decision-card").innerHTML = renderDecisionCard(state.response);
    byId("indicator-pane").innerHTML = renderIndicatorPane(
      state.response?.indicator ?? null,
    );
    byId("pattern-trend-pane").innerHTML = renderPatternTrendPane(
      state.response?.pattern ?? null,
      state.response?.trend ?? null,
    );
    byId("chart-pane").innerHTML = renderChart(state.response?.chart ?? null);
  });

  datasetSelect.addEventListener("change", () => {
    store.updateSelection({ dataset: datasetSelect.value });
  });
  endIndexInput.addEventListener("change", () => {
    const raw = endIndexInput.value.trim();
    store.updateSelection({ endIndex: raw === "" ? null : Number(raw) });
  });
  contextInput.addEventListener("change", () => {
    store.updateSelection({ contextBars: Number(contextInput.value) || 97 });
  });
  backendSelect.addEventListener("change", () => {
    store.updateSelection({ backend: backendSelect.value as Backend });
  });
  submitButton.addEventListener("click", () => {
    void store.submitAnalysis();
  });

  void store.loadDatasets();
  return store;
}

declare global {
  interface Window {
    quantdeskConsole?: ConsoleStore;
  }
}

if (typeof document !== "undefined" && document.getElementById("submit")) {
  window.quantdeskConsole = mountConsole(
    (window as unknown as { QUANTDESK_API?: string }).QUANTDESK_API ??
      "http://127.0.0.1:8000",
  );
}
