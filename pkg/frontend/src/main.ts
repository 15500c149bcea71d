// Browser bootstrap: bind the controller to the page.

import { ScannerApi } from "./api.js";
import { ScanController } from "./controller.js";

function boot(): void {
  const input = document.querySelector<HTMLInputElement>("#query");
  const output = document.querySelector<HTMLElement>("#output");
  if (!input || !output) {
    throw new Error("scanner page is missing #query or #output");
  }
  const baseUrl =
    document.documentElement.dataset.serviceUrl ?? window.location.origin;
  const api = new ScannerApi(baseUrl);
  const controller = new ScanController(api, (c) => {
    output.innerHTML = c.html();
  });

  input.addEventListener("input", () => controller.handleInput(input.value));
  output.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.matches("li.suggestion")) {
      const title = target.dataset.title;
      if (title) {
        input.value = title;
        void controller.selectTitle(title);
      }
    } else if (target.matches("button.retry")) {
      void controller.retry();
    }
  });
}

document.addEventListener("DOMContentLoaded", boot);
