/** Single-page shell: queue / review / ontology / query tabs over the
 * service API. The service base URL comes from the ?service= query
 * parameter, defaulting to the page origin. */

import { ApiClient } from "./api.js";
import { renderLinkReview } from "./reviewView.js";
import { renderOntologyBrowser } from "./ontologyView.js";
import { renderQueryPanel } from "./queryView.js";
import { renderQueue } from "./queueView.js";

export function serviceBaseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("service");
  return fromQuery ?? window.location.origin;
}

export function installApp(root: HTMLElement, api: ApiClient): void {
  root.textContent = "";
  const nav = document.createElement("nav");
  const content = document.createElement("main");
  root.append(nav, content);

  const openReview = (linkId: string) => {
    void renderLinkReview(content, api, linkId);
  };

  const tabs: Array<[string, () => void]> = [
    ["Queue", () => void renderQueue(content, api, openReview)],
    ["Ontology", () => void renderOntologyBrowser(content, api)],
    ["Query", () => renderQueryPanel(content, api)],
  ];
  for (const [label, activate] of tabs) {
    const button = document.createElement("button");
    button.textContent = label;
    button.setAttribute("data-tab", label.toLowerCase());
    button.onclick = activate;
    nav.appendChild(button);
  }
  void renderQueue(content, api, openReview);
}

declare global {
  interface Window {
    __TRACEFACTS_TEST__?: boolean;
  }
}

if (typeof window !== "undefined" && !window.__TRACEFACTS_TEST__) {
  const root = document.querySelector<HTMLElement>("#app");
  if (root) {
    installApp(root, new ApiClient(serviceBaseUrl()));
  }
}
