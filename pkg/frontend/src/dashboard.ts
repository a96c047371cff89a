// Campaign dashboard: per-iteration box summaries of predicted activity,
// the cutoff series, the context-size curve, and condition pass rates.
// Polls the service while the campaign is running.

import { ApiClient } from "./api";
import type { CampaignInfo, IterationReport } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
export const POLL_INTERVAL_MS = 2000;

const WIDTH = 460;
const HEIGHT = 180;
const PAD = 30;

function svgCanvas(cls: string): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", cls);
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  return svg;
}

interface Scale {
  x: (iteration: number) => number;
  y: (value: number) => number;
}

function makeScale(reports: IterationReport[], lo: number, hi: number): Scale {
  const n = Math.max(reports.length, 1);
  const span = hi - lo || 1;
  return {
    x: (iteration) => PAD + ((iteration - 1) / Math.max(n - 1, 1)) * (WIDTH - 2 * PAD),
    y: (value) => HEIGHT - PAD - ((value - lo) / span) * (HEIGHT - 2 * PAD),
  };
}

export function renderActivityBoxes(reports: IterationReport[]): SVGSVGElement {
  const svg = svgCanvas("chart activity-chart");
  const values = reports.flatMap((r) => {
    const s = r.prediction_summary;
    return [s.min ?? 0, s.max ?? 0, r.cutoff];
  });
  const lo = Math.min(...values, 0);
  const hi = Math.max(...values, 1);
  const scale = makeScale(reports, lo, hi);

  for (const report of reports) {
    const s = report.prediction_summary;
    if (s.min === undefined) continue;
    const x = scale.x(report.iteration);
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "activity-box");
    group.setAttribute("data-iteration", String(report.iteration));
    const whisker = document.createElementNS(SVG_NS, "line");
    whisker.setAttribute("x1", String(x));
    whisker.setAttribute("x2", String(x));
    whisker.setAttribute("y1", String(scale.y(s.min!)));
    whisker.setAttribute("y2", String(scale.y(s.max!)));
    whisker.setAttribute("stroke", "#888");
    group.appendChild(whisker);
    const box = document.createElementNS(SVG_NS, "rect");
    box.setAttribute("x", String(x - 7));
    box.setAttribute("width", "14");
    box.setAttribute("y", String(scale.y(s.q3!)));
    box.setAttribute("height", String(Math.max(1, scale.y(s.q1!) - scale.y(s.q3!))));
    box.setAttribute("fill", "#7aa6d9");
    group.appendChild(box);
    const median = document.createElementNS(SVG_NS, "line");
    median.setAttribute("x1", String(x - 7));
    median.setAttribute("x2", String(x + 7));
    median.setAttribute("y1", String(scale.y(s.median!)));
    median.setAttribute("y2", String(scale.y(s.median!)));
    median.setAttribute("stroke", "#20406a");
    group.appendChild(median);
    svg.appendChild(group);
  }

  // cutoff line across iterations
  const cutoffs = reports.map((r) => `${scale.x(r.iteration)},${scale.y(r.cutoff)}`);
  const line = document.createElementNS(SVG_NS, "polyline");
  line.setAttribute("class", "cutoff-series");
  line.setAttribute("points", cutoffs.join(" "));
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", "#c04040");
  line.setAttribute("stroke-dasharray", "5 3");
  line.setAttribute("data-values", reports.map((r) => r.cutoff.toFixed(6)).join(","));
  svg.appendChild(line);
  return svg;
}

export function renderContextCurve(reports: IterationReport[]): SVGSVGElement {
  const svg = svgCanvas("chart context-chart");
  const sizes = reports.map((r) => r.context_size);
  const lo = Math.min(...sizes, 0);
  const hi = Math.max(...sizes, 1);
  const scale = makeScale(reports, lo, hi);
  const polyline = document.createElementNS(SVG_NS, "polyline");
  polyline.setAttribute("class", "context-series");
  polyline.setAttribute(
    "points",
    reports.map((r) => `${scale.x(r.iteration)},${scale.y(r.context_size)}`).join(" "),
  );
  polyline.setAttribute("fill", "none");
  polyline.setAttribute("stroke", "#2a7a4a");
  polyline.setAttribute("data-values", sizes.join(","));
  svg.appendChild(polyline);
  for (const report of reports) {
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("class", "context-point");
    dot.setAttribute("cx", String(scale.x(report.iteration)));
    dot.setAttribute("cy", String(scale.y(report.context_size)));
    dot.setAttribute("r", "3");
    dot.setAttribute("fill", "#2a7a4a");
    svg.appendChild(dot);
  }
  return svg;
}

export function renderPassRates(reports: IterationReport[]): HTMLElement {
  const container = document.createElement("div");
  container.className = "pass-rates";
  const last = reports[reports.length - 1];
  if (!last || Object.keys(last.condition_pass_rates).length === 0) {
    container.textContent = "No property conditions configured.";
    return container;
  }
  for (const [label, rate] of Object.entries(last.condition_pass_rates)) {
    const row = document.createElement("div");
    row.className = "pass-rate-row";
    const name = document.createElement("span");
    name.textContent = label;
    const bar = document.createElement("div");
    bar.className = "pass-rate-bar";
    const fill = document.createElement("div");
    fill.className = "pass-rate-fill";
    fill.style.width = `${Math.round(rate * 100)}%`;
    fill.dataset.rate = rate.toFixed(3);
    bar.appendChild(fill);
    const value = document.createElement("span");
    value.textContent = `${Math.round(rate * 100)}%`;
    row.append(name, bar, value);
    container.appendChild(row);
  }
  return container;
}

export class Dashboard {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly campaignId: string,
  ) {}

  async start(): Promise<void> {
    await this.refresh();
    if (this.timer === null) {
      this.timer = setInterval(() => void this.refresh(), POLL_INTERVAL_MS);
    }
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async refresh(): Promise<void> {
    let info: CampaignInfo;
    try {
      info = await this.api.campaign(this.campaignId);
    } catch (err) {
      this.root.innerHTML = `<div class="error-banner">campaign unavailable: ${String(err)}</div>`;
      this.stop();
      return;
    }
    this.render(info);
    if (info.status !== "running") this.stop();
  }

  private render(info: CampaignInfo): void {
    this.root.innerHTML = "";
    const status = document.createElement("div");
    status.className = "campaign-status";
    status.textContent =
      `Campaign ${info.id} — ${info.status}, ` +
      `${info.reports.length} iterations, context ${info.context_size}`;
    this.root.appendChild(status);
    if (info.reports.length === 0) return;

    const charts = document.createElement("div");
    charts.className = "charts";
    charts.appendChild(renderActivityBoxes(info.reports));
    charts.appendChild(renderContextCurve(info.reports));
    this.root.appendChild(charts);
    this.root.appendChild(renderPassRates(info.reports));
  }
}
