/** Browser bootstrap: query the service named by ?service=... (default :8000). */

import { ServiceClient, type ProblemDocument } from "./api.js";
import { App, type AppElements } from "./app.js";
import type { Mode } from "./store.js";

function required<T extends Element>(selector: string): T {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
}

function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const serviceUrl = params.get("service") ?? "http://127.0.0.1:8000";
  const els: AppElements = {
    svg: required<SVGSVGElement>("#map"),
    bars: required<HTMLElement>("#bars"),
    status: required<HTMLElement>("#status"),
    stepCounter: required<HTMLElement>("#step-counter"),
    retry: required<HTMLButtonElement>("#retry"),
  };
  const app = new App(new ServiceClient(serviceUrl), els);

  for (const mode of ["init", "intention", "observe"] as Mode[]) {
    required<HTMLButtonElement>(`#mode-${mode}`).addEventListener("click", () => {
      app.setMode(mode);
      document
        .querySelectorAll(".mode-button")
        .forEach((b) => b.classList.toggle("active", b.id === `mode-${mode}`));
    });
  }

  required<HTMLButtonElement>("#start-session").addEventListener("click", () => {
    void app.createSession();
  });

  els.svg.addEventListener("click", (event) => {
    const rect = els.svg.getBoundingClientRect();
    const viewBox = els.svg.viewBox.baseVal;
    const x = ((event.clientX - rect.left) / rect.width) * viewBox.width;
    const y = ((event.clientY - rect.top) / rect.height) * viewBox.height;
    void app.handleMapClick(app.map.project().toLatLng(x, y));
  });

  const upload = required<HTMLInputElement>("#problem-upload");
  upload.addEventListener("change", async () => {
    const file = upload.files?.[0];
    if (!file) return;
    const doc = JSON.parse(await file.text());
    const problem: ProblemDocument = Array.isArray(doc) ? doc[0] : doc;
    await app.loadProblemReplay(problem);
  });
  required<HTMLButtonElement>("#replay-play").addEventListener("click", () => app.replay?.play());
  required<HTMLButtonElement>("#replay-pause").addEventListener("click", () =>
    app.replay?.pause(),
  );
  required<HTMLButtonElement>("#replay-step").addEventListener("click", () =>
    app.replay?.stepForward(),
  );

  void app.start();
}

boot();
