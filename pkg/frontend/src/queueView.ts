/** Review queue: every trace link with its candidate count and progress,
 * loaded lazily so first paint is immediate. */

import { ApiClient, LinkSummary } from "./api.js";
import { showErrorBanner } from "./banner.js";

export async function renderQueue(
  root: HTMLElement,
  api: ApiClient,
  onOpen: (linkId: string) => void,
): Promise<void> {
  root.textContent = "";
  const heading = document.createElement("h2");
  heading.textContent = "Review queue";
  root.appendChild(heading);

  let links: LinkSummary[];
  try {
    links = await api.links();
  } catch (err) {
    showErrorBanner(root, `Cannot load links: ${String(err)}`, () => void renderQueue(root, api, onOpen));
    return;
  }

  const list = document.createElement("ul");
  list.className = "queue";
  root.appendChild(list);

  for (const link of links) {
    const item = document.createElement("li");
    item.setAttribute("data-link-id", link.id);
    const open = document.createElement("button");
    open.textContent = link.id;
    open.onclick = () => onOpen(link.id);
    const summary = document.createElement("span");
    const clip = (t: string) => (t.length > 70 ? t.slice(0, 67) + "..." : t);
    summary.textContent = ` ${link.source.id} → ${link.target.id}: ${clip(link.source.text)}`;
    const progress = document.createElement("span");
    progress.className = "queue-progress";
    progress.textContent = " …";
    item.append(open, summary, progress);
    list.appendChild(item);
    void api
      .candidates(link.id)
      .then((candidates) => {
        const reviewed = candidates.filter((c) => c.status !== "suggested").length;
        progress.textContent = ` ${reviewed}/${candidates.length} reviewed`;
      })
      .catch(() => {
        progress.textContent = " (unavailable)";
      });
  }
}
