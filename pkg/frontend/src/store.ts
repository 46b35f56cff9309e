// Single-session console state machine. At most one analysis request is
// live at a time: each submit gets a monotonically increasing id and only
// the latest id may write its outcome back, so a rapid double-submit can
// never surface stale data.

import type { AnalyzeClient } from "./api.js";
import type {
  AnalyzeResponse,
  Backend,
  DatasetInfo,
} from "./types.js";

export type RequestStatus = "idle" | "pending" | "done" | "error";

export interface Selection {
  dataset: string | null;
  endIndex: number | null;
  backend: Backend;
  contextBars: number;
}

export interface ConsoleState {
  datasets: DatasetInfo[];
  selection: Selection;
  status: RequestStatus;
  response: AnalyzeResponse | null;
  error: string | null;
}

type Listener = (state: ConsoleState) => void;

export class ConsoleStore {
  private state: ConsoleState = {
    datasets: [],
    selection: {
      dataset: null,
      endIndex: null,
      backend: "rule",
      contextBars: 97,
    },
    status: "idle",
    response: null,
    error: null,
  };

  private listeners: Listener[] = [];
  private requestCounter = 0;

  constructor(private readonly client: AnalyzeClient) {}

  getState(): ConsoleState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private setState(patch: Partial<ConsoleState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  updateSelection(patch: Partial<Selection>): void {
    this.setState({ selection: { ...this.state.selection, ...patch } });
  }

  async loadDatasets(): Promise<void> {
    const datasets = await this.client.datasets();
    const selected = this.state.selection.dataset;
    this.setState({ datasets });
    if (selected === null && datasets.length > 0) {
      this.updateSelection({ dataset: datasets[0].name });
    }
  }

  async submitAnalysis(): Promise<void> {
    const { dataset, endIndex, backend, contextBars } = this.state.selection;
    if (dataset === null) {
      this.setState({ status: "error", error: "select a dataset first" });
      return;
    }
    const requestId = ++this.requestCounter;
    this.setState({ status: "pending", error: null });
    try {
      const response = await this.client.analyze({
        dataset,
        end_index: endIndex,
        backend,
        context_bars: contextBars,
      });
      if (requestId !== this.requestCounter) return; // superseded
      this.setState({ status: "done", response, error: null });
    } catch (error) {
      if (requestId !== this.requestCounter) return; // superseded failure
      this.setState({
        status: "error",
        error: error instanceof Error ? error.message : String(error),
      });
    }
  }
}
