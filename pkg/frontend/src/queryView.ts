/** Query panel: free-text terms expand through accepted facts; expansion
 * chips reveal their justifying fact path, and matching artifacts list
 * below, ranked by weighted term hits. */

import { ApiClient, Expansion } from "./api.js";
import { showErrorBanner } from "./banner.js";

export function renderQueryPanel(root: HTMLElement, api: ApiClient): { run: () => Promise<void> } {
  root.textContent = "";
  const heading = document.createElement("h2");
  heading.textContent = "Project Q&A";
  root.appendChild(heading);

  const form = document.createElement("div");
  form.className = "query-form";
  const input = document.createElement("input");
  input.placeholder = "terms, comma separated (e.g. PCA pump, exception)";
  input.setAttribute("data-testid", "query-input");
  input.size = 48;
  const hops = document.createElement("select");
  hops.setAttribute("data-testid", "max-hops");
  for (const n of [0, 1, 2, 3]) {
    const option = document.createElement("option");
    option.value = String(n);
    option.textContent = `${n} hops`;
    if (n === 2) option.selected = true;
    hops.appendChild(option);
  }
  const runButton = document.createElement("button");
  runButton.textContent = "Search";
  runButton.setAttribute("data-testid", "run-query");
  form.append(input, hops, runButton);
  root.appendChild(form);

  const chips = document.createElement("div");
  chips.className = "expansion-chips";
  chips.setAttribute("data-testid", "chips");
  root.appendChild(chips);

  const pathView = document.createElement("div");
  pathView.className = "fact-path";
  pathView.setAttribute("data-testid", "fact-path");
  root.appendChild(pathView);

  const results = document.createElement("ol");
  results.className = "search-results";
  results.setAttribute("data-testid", "results");
  root.appendChild(results);

  function chip(origin: string, expansion: Expansion): HTMLElement {
    const el = document.createElement("button");
    el.className = "chip";
    el.setAttribute("data-term", expansion.term);
    el.textContent = `${expansion.term} (${expansion.relation}, ${expansion.hops} hop${expansion.hops > 1 ? "s" : ""})`;
    el.onclick = () => {
      pathView.textContent = `${origin} → ${expansion.term} via facts: ${expansion.path.join(" → ")}`;
    };
    return el;
  }

  async function run(): Promise<void> {
    const terms = input.value
      .split(",")
      .map((t) => t.trim())
      .filter(Boolean);
    chips.textContent = "";
    pathView.textContent = "";
    results.textContent = "";
    if (terms.length === 0) return;
    let response;
    try {
      response = await api.search(terms, Number(hops.value));
    } catch (err) {
      showErrorBanner(root, `Query failed: ${String(err)}`, () => void run());
      return;
    }
    for (const [origin, expansions] of Object.entries(response.expanded)) {
      for (const expansion of expansions) {
        chips.appendChild(chip(origin, expansion));
      }
    }
    for (const hit of response.results) {
      const item = document.createElement("li");
      const title = document.createElement("strong");
      title.textContent = `${hit.artifact_id} (score ${hit.score.toFixed(2)})`;
      const body = document.createElement("p");
      body.textContent = hit.text;
      const matched = document.createElement("small");
      matched.textContent = "matched: " + Object.keys(hit.matched).join(", ");
      item.append(title, body, matched);
      results.appendChild(item);
    }
  }

  runButton.onclick = () => void run();
  hops.onchange = () => {
    if (input.value.trim()) void run();
  };
  input.onkeydown = (ev) => {
    if (ev.key === "Enter") void run();
  };
  return { run };
}
