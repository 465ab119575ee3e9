// Pure view-model for a measurement session. Everything here is a function of
// the last fetched SessionView (plus the pending flag); no client-side
// randomness, no hidden state. main.ts only wires these to the DOM.

export interface OutcomeInfo {
  label: string;
  value: number;
}

export interface MeasurementInfo {
  name: string;
  outcomes: OutcomeInfo[];
  predicted: Record<string, number>;
}

export interface MeasurementEvent {
  step_index: number;
  measurement: string;
  outcome_label: string;
  value: number;
  invalidated: [string, string, string][];
}

export interface SessionView {
  id: string;
  scenario: string;
  dim: number;
  seed: number;
  measurements: MeasurementInfo[];
  history: MeasurementEvent[];
  state?: [number, number][];
}

export type LogFlag = "first" | "repeat" | "invalidated";

export interface LogRow {
  index: number;
  measurement: string;
  label: string;
  value: number;
  flag: LogFlag;
  note: string;
}

export interface UiSessionModel {
  view: SessionView | null;
  pending: boolean;
  error: string | null;
}

export function emptyModel(): UiSessionModel {
  return { view: null, pending: false, error: null };
}

/**
 * Annotate the server history with repeat/invalidation flags, computed
 * client-side by comparing each event with the previous event of the same
 * measurement. Row indices match the server history exactly.
 */
export function annotateLog(history: MeasurementEvent[]): LogRow[] {
  const lastLabel = new Map<string, string>();
  return history.map((e) => {
    const prev = lastLabel.get(e.measurement);
    lastLabel.set(e.measurement, e.outcome_label);
    let flag: LogFlag = "first";
    let note = "";
    if (prev !== undefined) {
      if (prev === e.outcome_label) {
        flag = "repeat";
        note = "repeat: same value";
      } else {
        flag = "invalidated";
        note = `invalidated earlier ${e.measurement} (${prev} → ${e.outcome_label})`;
      }
    }
    return {
      index: e.step_index,
      measurement: e.measurement,
      label: e.outcome_label,
      value: e.value,
      flag,
      note,
    };
  });
}

export interface BarSegment {
  label: string;
  probability: number;
  percent: number; // integer, segments always total exactly 100
}

/**
 * Turn a predicted distribution into integer-percent bar segments that total
 * exactly 100 (largest-remainder rounding).
 */
export function barSegments(predicted: Record<string, number>): BarSegment[] {
  const entries = Object.entries(predicted);
  const floors = entries.map(([label, p]) => ({
    label,
    probability: p,
    percent: Math.floor(p * 100),
    remainder: p * 100 - Math.floor(p * 100),
  }));
  let leftover = 100 - floors.reduce((s, f) => s + f.percent, 0);
  const byRemainder = [...floors].sort((a, b) => b.remainder - a.remainder);
  for (const f of byRemainder) {
    if (leftover <= 0) break;
    f.percent += 1;
    leftover -= 1;
  }
  return floors.map(({ label, probability, percent }) => ({
    label,
    probability,
    percent,
  }));
}

export function totalPercent(segments: BarSegment[]): number {
  return segments.reduce((s, b) => s + b.percent, 0);
}

/** Apply a freshly fetched view, clearing any stale error. */
export function withView(model: UiSessionModel, view: SessionView): UiSessionModel {
  return { view, pending: false, error: null };
}

export function withError(model: UiSessionModel, message: string): UiSessionModel {
  return { ...model, pending: false, error: message };
}

export function withPending(model: UiSessionModel): UiSessionModel {
  return { ...model, pending: true };
}

/** Buttons are disabled while a request is in flight or no session exists. */
export function buttonsEnabled(model: UiSessionModel): boolean {
  return model.view !== null && !model.pending;
}
