// Interactive modification session: submit an instruction against a
// molecule, inspect both depictions and the signed delta table, and accept
// good candidates into the session pool.

import { ApiClient, ApiError } from "./api";
import { buildDeltaTable } from "./deltas";
import { renderDepiction } from "./depiction";
import type { ModifyResponse } from "./types";

export class SessionView {
  private readonly form: HTMLFormElement;
  private readonly smilesInput: HTMLInputElement;
  private readonly instructionInput: HTMLInputElement;
  private readonly submitButton: HTMLButtonElement;
  private readonly formError: HTMLElement;
  private readonly history: HTMLElement;
  private readonly poolCount: HTMLElement;
  private inFlight = false;

  constructor(
    root: HTMLElement,
    private readonly api: ApiClient,
    private readonly sessionId: string,
  ) {
    root.innerHTML = `
      <form class="modify-form">
        <label>Molecule (SMILES)
          <input class="smiles-input" name="smiles" spellcheck="false" />
        </label>
        <label>Instruction
          <input class="instruction-input" name="instruction" />
        </label>
        <button type="submit" class="submit-btn">Modify</button>
        <span class="form-error" role="alert"></span>
      </form>
      <div class="pool-panel">Accepted pool: <span class="pool-count">0</span></div>
      <div class="history"></div>
    `;
    this.form = root.querySelector(".modify-form") as HTMLFormElement;
    this.smilesInput = root.querySelector(".smiles-input") as HTMLInputElement;
    this.instructionInput = root.querySelector(".instruction-input") as HTMLInputElement;
    this.submitButton = root.querySelector(".submit-btn") as HTMLButtonElement;
    this.formError = root.querySelector(".form-error") as HTMLElement;
    this.history = root.querySelector(".history") as HTMLElement;
    this.poolCount = root.querySelector(".pool-count") as HTMLElement;
    this.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
  }

  get turnCount(): number {
    return this.history.querySelectorAll(".turn").length;
  }

  async submit(): Promise<void> {
    const smiles = this.smilesInput.value.trim();
    const instruction = this.instructionInput.value.trim();
    this.formError.textContent = "";
    if (!instruction) {
      // Client-side validation: no request leaves the page.
      this.formError.textContent = "Instruction must not be empty.";
      return;
    }
    if (!smiles) {
      this.formError.textContent = "Molecule SMILES must not be empty.";
      return;
    }
    if (this.inFlight) return; // one in-flight modification per session
    this.inFlight = true;
    this.submitButton.disabled = true;
    try {
      const response = await this.api.modify(this.sessionId, smiles, instruction);
      this.renderTurn(response, instruction);
    } catch (err) {
      // API and network failures are shown inline; input stays editable.
      const detail = err instanceof ApiError ? err.detail : String(err);
      this.formError.textContent = detail;
    } finally {
      this.inFlight = false;
      this.submitButton.disabled = false;
    }
  }

  private renderTurn(response: ModifyResponse, instruction: string): void {
    const { result } = response;
    const card = document.createElement("div");
    card.className = "turn";
    card.dataset.turnIndex = String(response.turn_index);

    const header = document.createElement("div");
    header.className = "turn-instruction";
    header.textContent = `#${response.turn_index + 1}: ${instruction}`;
    card.appendChild(header);

    const figures = document.createElement("div");
    figures.className = "depictions";
    figures.appendChild(this.figure(response.input_depiction, result.input_smiles, "before"));
    if (result.valid && response.output_depiction) {
      figures.appendChild(this.figure(response.output_depiction, result.canonical ?? "", "after"));
    }
    card.appendChild(figures);

    if (result.valid) {
      card.appendChild(buildDeltaTable(result));
    } else {
      const banner = document.createElement("div");
      banner.className = "error-banner";
      banner.textContent = "The backend returned an invalid molecule. ";
      const details = document.createElement("details");
      const summary = document.createElement("summary");
      summary.textContent = "raw output";
      const raw = document.createElement("pre");
      raw.className = "raw-output";
      raw.textContent = `${result.output_smiles}\n${result.error ?? ""}`;
      details.appendChild(summary);
      details.appendChild(raw);
      banner.appendChild(details);
      card.appendChild(banner);
    }

    const accept = document.createElement("button");
    accept.className = "accept-btn";
    accept.textContent = "Accept into pool";
    accept.disabled = !result.valid;
    accept.addEventListener("click", () => {
      void this.accept(response.turn_index, accept);
    });
    card.appendChild(accept);

    this.history.prepend(card);
  }

  private figure(depiction: Parameters<typeof renderDepiction>[0], caption: string, kind: string) {
    const figure = document.createElement("figure");
    figure.className = `depiction depiction-${kind}`;
    figure.appendChild(renderDepiction(depiction));
    const figcaption = document.createElement("figcaption");
    figcaption.textContent = caption;
    figure.appendChild(figcaption);
    return figure;
  }

  private async accept(turnIndex: number, button: HTMLButtonElement): Promise<void> {
    try {
      const response = await this.api.accept(this.sessionId, turnIndex);
      this.poolCount.textContent = String(response.pool_size);
      button.textContent = "In pool";
    } catch (err) {
      const detail = err instanceof ApiError ? err.detail : String(err);
      this.formError.textContent = detail;
    }
  }
}
