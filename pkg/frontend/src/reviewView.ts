/** Per-link review table: ranked candidate facts with evidence, editable
 * relation and terms, accept/reject controls.
 *
 * Decisions are pessimistic: a row only changes state after the service
 * confirms; a failed request reverts the controls and raises the banner.
 * Progress is recomputed from served candidate statuses, so a page refresh
 * reconstructs it entirely from the server. */

import { ApiClient, Candidate, LinkSummary } from "./api.js";
import { showErrorBanner } from "./banner.js";

function highlightTerms(text: string, terms: string[]): DocumentFragment {
  const fragment = document.createDocumentFragment();
  if (terms.length === 0) {
    fragment.appendChild(document.createTextNode(text));
    return fragment;
  }
  const escaped = terms
    .slice()
    .sort((a, b) => b.length - a.length)
    .map((t) => t.replace(/[.*+?^${}()|[\]\\]/g, "\\$&").replace(/\s+/g, "\\s+"));
  // match inflected suffixes so "alarms" highlights for the term "alarm"
  const re = new RegExp(`\\b(${escaped.join("|")})([a-z]{0,2})\\b`, "gi");
  let last = 0;
  for (const m of text.matchAll(re)) {
    const start = m.index ?? 0;
    fragment.appendChild(document.createTextNode(text.slice(last, start)));
    const mark = document.createElement("mark");
    mark.textContent = m[0];
    fragment.appendChild(mark);
    last = start + m[0].length;
  }
  fragment.appendChild(document.createTextNode(text.slice(last)));
  return fragment;
}

function artifactPanel(title: string, ref: { id: string; text: string; domain_terms: string[] }): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "artifact-panel";
  const heading = document.createElement("h3");
  heading.textContent = `${title} ${ref.id}`;
  panel.appendChild(heading);
  const body = document.createElement("p");
  body.appendChild(highlightTerms(ref.text, ref.domain_terms));
  panel.appendChild(body);
  return panel;
}

function evidenceCell(candidate: Candidate): HTMLElement {
  const cell = document.createElement("td");
  cell.className = "evidence";
  const ev = candidate.evidence;
  const bits = [
    `tm ${ev.tm.toFixed(2)}`,
    `sem ${Math.max(ev.sem_hw, ev.sem_aw).toFixed(2)}`,
    `arm ${ev.arm.toFixed(2)}`,
  ];
  cell.textContent = bits.join(" · ");
  if (ev.syn) {
    const syn = document.createElement("div");
    syn.className = "syn-evidence";
    syn.textContent = `syn: ${ev.syn.relation_label}${ev.syn.reversed ? " (Reverse)" : ""} @ ${ev.syn.sentence_ref}`;
    cell.appendChild(syn);
  }
  return cell;
}

export interface ReviewHandle {
  refreshProgress(): void;
}

function displayRelation(candidate: Candidate): string {
  if (!candidate.relation_label) return "";
  return candidate.relation_label;
}

export async function renderLinkReview(
  root: HTMLElement,
  api: ApiClient,
  linkId: string,
): Promise<ReviewHandle> {
  root.textContent = "";
  let link: LinkSummary;
  let candidates: Candidate[];
  try {
    link = await api.link(linkId);
    candidates = await api.candidates(linkId);
  } catch (err) {
    showErrorBanner(root, `Cannot load link ${linkId}: ${String(err)}`, () => {
      void renderLinkReview(root, api, linkId);
    });
    return { refreshProgress: () => undefined };
  }

  const header = document.createElement("header");
  const title = document.createElement("h2");
  title.textContent = `Link ${link.id}`;
  header.appendChild(title);
  header.appendChild(artifactPanel("Source", link.source));
  header.appendChild(artifactPanel("Target", link.target));
  root.appendChild(header);

  const progress = document.createElement("div");
  progress.className = "progress";
  progress.setAttribute("data-testid", "progress");
  root.appendChild(progress);

  const statuses = new Map<string, string>(candidates.map((c) => [c.fact_id, c.status]));

  function refreshProgress(): void {
    const reviewed = [...statuses.values()].filter((s) => s !== "suggested").length;
    const total = statuses.size;
    const fraction = total === 0 ? 0 : reviewed / total;
    progress.textContent = `${reviewed} / ${total} reviewed (${Math.round(fraction * 100)}%)`;
  }
  refreshProgress();

  const table = document.createElement("table");
  table.className = "candidates";
  const head = document.createElement("tr");
  for (const label of ["Rank", "Source Entity", "Target Entity", "Suggested Relation", "Conf.", "Evidence", ""]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const candidate of candidates) {
    table.appendChild(candidateRow(candidate));
  }
  root.appendChild(table);

  function candidateRow(candidate: Candidate): HTMLElement {
    const row = document.createElement("tr");
    row.className = `candidate status-${candidate.status}`;
    row.setAttribute("data-fact-id", candidate.fact_id);
    row.setAttribute("data-rank", String(candidate.rank));

    const rankCell = document.createElement("td");
    rankCell.textContent = String(candidate.rank);
    row.appendChild(rankCell);

    const sourceInput = document.createElement("input");
    sourceInput.value = candidate.source_term;
    sourceInput.setAttribute("data-testid", "source-input");
    const sourceCell = document.createElement("td");
    sourceCell.appendChild(sourceInput);
    row.appendChild(sourceCell);

    const targetInput = document.createElement("input");
    targetInput.value = candidate.target_term;
    targetInput.setAttribute("data-testid", "target-input");
    const targetCell = document.createElement("td");
    targetCell.appendChild(targetInput);
    row.appendChild(targetCell);

    const relationInput = document.createElement("input");
    relationInput.value = displayRelation(candidate);
    relationInput.placeholder = "associated-with";
    relationInput.setAttribute("data-testid", "relation-input");
    const relationCell = document.createElement("td");
    relationCell.appendChild(relationInput);
    if (candidate.reversed) {
      const marker = document.createElement("span");
      marker.className = "reversed";
      marker.textContent = " (Reverse)";
      relationCell.appendChild(marker);
    }
    row.appendChild(relationCell);

    const confCell = document.createElement("td");
    confCell.textContent = candidate.conf.toFixed(1);
    row.appendChild(confCell);

    row.appendChild(evidenceCell(candidate));

    const actions = document.createElement("td");
    const acceptButton = document.createElement("button");
    acceptButton.textContent = "Accept";
    acceptButton.setAttribute("data-testid", "accept");
    const rejectButton = document.createElement("button");
    rejectButton.textContent = "Reject";
    rejectButton.setAttribute("data-testid", "reject");
    const statusBadge = document.createElement("span");
    statusBadge.className = "status-badge";
    statusBadge.setAttribute("data-testid", "status");
    statusBadge.textContent = candidate.status;
    actions.append(acceptButton, rejectButton, statusBadge);
    row.appendChild(actions);

    function setPending(pending: boolean): void {
      acceptButton.disabled = pending;
      rejectButton.disabled = pending;
      row.classList.toggle("pending", pending);
    }

    function commit(status: string): void {
      statuses.set(candidate.fact_id, status);
      statusBadge.textContent = status;
      row.className = `candidate status-${status}`;
      refreshProgress();
    }

    async function submit(action: "accept" | "reject" | "modify"): Promise<void> {
      setPending(true);
      const body: { action: typeof action; relation?: string; source?: string; target?: string } = { action };
      const relation = relationInput.value.trim();
      const termsEdited =
        sourceInput.value.trim() !== candidate.source_term ||
        targetInput.value.trim() !== candidate.target_term;
      if (action !== "reject") {
        if (relation) body.relation = relation;
        if (termsEdited) {
          body.action = "modify";
          body.source = sourceInput.value.trim();
          body.target = targetInput.value.trim();
          if (!body.relation) body.relation = candidate.relation_label ?? "associated-with";
        }
      }
      try {
        const fact = await api.decide(candidate.fact_id, body);
        commit(fact.status);
      } catch (err) {
        // revert: nothing was committed locally, re-enable the controls
        showErrorBanner(root, `Decision failed: ${String(err)}`, () => void submit(action));
      } finally {
        setPending(false);
      }
    }

    acceptButton.onclick = () => void submit("accept");
    rejectButton.onclick = () => void submit("reject");
    return row;
  }

  return { refreshProgress };
}
