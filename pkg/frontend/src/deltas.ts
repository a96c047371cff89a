// Signed before/after/delta table. Every number is formatted from the API
// payload verbatim; nothing is recomputed client-side.

import type { ModificationResult } from "./types";

const PROPERTY_LABELS: Record<string, string> = {
  molecular_weight: "Mol. weight",
  logp: "logP",
  tpsa: "tPSA",
  sa_score: "SA score",
};

export function formatSigned(value: number): string {
  const text = value.toFixed(2);
  return value > 0 ? `+${text}` : text;
}

export function buildDeltaTable(result: ModificationResult): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "delta-table";
  const head = table.createTHead().insertRow();
  for (const caption of ["Property", "Before", "After", "Δ"]) {
    const cell = document.createElement("th");
    cell.textContent = caption;
    head.appendChild(cell);
  }
  const body = table.createTBody();
  for (const key of Object.keys(result.deltas)) {
    const row = body.insertRow();
    row.insertCell().textContent = PROPERTY_LABELS[key] ?? key;
    row.insertCell().textContent = result.input_properties[key].toFixed(2);
    row.insertCell().textContent = result.output_properties[key].toFixed(2);
    const delta = row.insertCell();
    delta.textContent = formatSigned(result.deltas[key]);
    delta.className = "delta-value";
    delta.dataset.property = key;
  }
  return table;
}
