// Page bootstrap: wires the session view and the campaign dashboard to the
// service base URL.

import { ApiClient } from "./api";
import { Dashboard } from "./dashboard";
import { SessionView } from "./session";

function randomId(): string {
  return Math.random().toString(36).slice(2, 10);
}

export function bootstrap(doc: Document = document): void {
  const baseInput = doc.querySelector("#base-url") as HTMLInputElement;
  const sessionRoot = doc.querySelector("#session") as HTMLElement;
  const dashboardRoot = doc.querySelector("#dashboard") as HTMLElement;
  const campaignInput = doc.querySelector("#campaign-id") as HTMLInputElement;
  const watchButton = doc.querySelector("#watch-campaign") as HTMLButtonElement;

  const api = () => new ApiClient(baseInput.value || "http://127.0.0.1:8000");

  new SessionView(sessionRoot, api(), randomId());

  let dashboard: Dashboard | null = null;
  watchButton.addEventListener("click", () => {
    dashboard?.stop();
    dashboard = new Dashboard(dashboardRoot, api(), campaignInput.value.trim());
    void dashboard.start();
  });
}

if (typeof document !== "undefined" && document.querySelector("#session")) {
  bootstrap();
}
