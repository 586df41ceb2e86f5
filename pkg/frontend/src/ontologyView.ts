/** Ontology browser: accepted facts drawn as a labeled graph.
 *
 * Layout is a small deterministic force simulation computed up front and
 * rendered as SVG, so it works headless; clicking an edge reveals the fact's
 * provenance (link, confidence, editor). */

import { ApiClient, FactRecord } from "./api.js";
import { showErrorBanner } from "./banner.js";

interface NodePosition {
  x: number;
  y: number;
  vx: number;
  vy: number;
}

const WIDTH = 820;
const HEIGHT = 520;

function forceLayout(nodes: string[], edges: Array<[string, string]>): Map<string, NodePosition> {
  const positions = new Map<string, NodePosition>();
  nodes.forEach((name, i) => {
    // deterministic ring start
    const angle = (2 * Math.PI * i) / nodes.length;
    positions.set(name, {
      x: WIDTH / 2 + Math.cos(angle) * 180,
      y: HEIGHT / 2 + Math.sin(angle) * 180,
      vx: 0,
      vy: 0,
    });
  });
  for (let iter = 0; iter < 150; iter++) {
    // pairwise repulsion
    for (const a of nodes) {
      const pa = positions.get(a)!;
      for (const b of nodes) {
        if (a === b) continue;
        const pb = positions.get(b)!;
        const dx = pa.x - pb.x;
        const dy = pa.y - pb.y;
        const d2 = Math.max(dx * dx + dy * dy, 25);
        const force = 12000 / d2;
        const d = Math.sqrt(d2);
        pa.vx += (dx / d) * force;
        pa.vy += (dy / d) * force;
      }
    }
    // spring attraction along edges
    for (const [a, b] of edges) {
      const pa = positions.get(a)!;
      const pb = positions.get(b)!;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 5);
      const pull = (d - 160) * 0.02;
      pa.vx += (dx / d) * pull;
      pa.vy += (dy / d) * pull;
      pb.vx -= (dx / d) * pull;
      pb.vy -= (dy / d) * pull;
    }
    for (const name of nodes) {
      const p = positions.get(name)!;
      p.x = Math.min(Math.max(p.x + p.vx * 0.4, 40), WIDTH - 40);
      p.y = Math.min(Math.max(p.y + p.vy * 0.4, 30), HEIGHT - 30);
      p.vx *= 0.5;
      p.vy *= 0.5;
    }
  }
  return positions;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export async function renderOntologyBrowser(root: HTMLElement, api: ApiClient): Promise<void> {
  root.textContent = "";
  let facts: FactRecord[];
  try {
    facts = (await api.ontology()).facts;
  } catch (err) {
    showErrorBanner(root, `Cannot load ontology: ${String(err)}`, () => {
      void renderOntologyBrowser(root, api);
    });
    return;
  }

  const heading = document.createElement("h2");
  heading.textContent = "Ontology";
  root.appendChild(heading);

  if (facts.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.setAttribute("data-testid", "empty-state");
    empty.textContent = "No accepted facts yet. Review some candidate facts first.";
    root.appendChild(empty);
    return;
  }

  const nodes = [...new Set(facts.flatMap((f) => [f.source, f.target]))].sort();
  const positions = forceLayout(
    nodes,
    facts.map((f) => [f.source, f.target]),
  );

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));
  svg.setAttribute("data-testid", "ontology-graph");

  const provenance = document.createElement("aside");
  provenance.className = "provenance";
  provenance.setAttribute("data-testid", "provenance");

  for (const fact of facts) {
    const pa = positions.get(fact.source)!;
    const pb = positions.get(fact.target)!;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", pa.x.toFixed(1));
    line.setAttribute("y1", pa.y.toFixed(1));
    line.setAttribute("x2", pb.x.toFixed(1));
    line.setAttribute("y2", pb.y.toFixed(1));
    line.setAttribute("class", "edge");
    line.setAttribute("data-fact-id", fact.id);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", ((pa.x + pb.x) / 2).toFixed(1));
    label.setAttribute("y", ((pa.y + pb.y) / 2 - 4).toFixed(1));
    label.setAttribute("class", "edge-label");
    label.textContent = fact.relation;
    const showProvenance = () => {
      const prov = fact.provenance ?? {};
      provenance.textContent = "";
      const title = document.createElement("h4");
      title.textContent = `${fact.source} — ${fact.relation} — ${fact.target}`;
      provenance.appendChild(title);
      const list = document.createElement("dl");
      const rows: Array<[string, unknown]> = [
        ["fact", fact.id],
        ["status", fact.status],
        ["link", prov["link_id"]],
        ["confidence", prov["conf"]],
        ["editor", prov["editor"]],
      ];
      for (const [k, v] of rows) {
        if (v === undefined || v === null) continue;
        const dt = document.createElement("dt");
        dt.textContent = k;
        const dd = document.createElement("dd");
        dd.textContent = String(v);
        list.append(dt, dd);
      }
      provenance.appendChild(list);
    };
    line.addEventListener("click", showProvenance);
    label.addEventListener("click", showProvenance);
    svg.appendChild(line);
    svg.appendChild(label);
  }

  for (const name of nodes) {
    const p = positions.get(name)!;
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", p.x.toFixed(1));
    circle.setAttribute("cy", p.y.toFixed(1));
    circle.setAttribute("r", "14");
    circle.setAttribute("class", "node");
    circle.setAttribute("data-entity", name);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", p.x.toFixed(1));
    label.setAttribute("y", (p.y - 18).toFixed(1));
    label.setAttribute("class", "node-label");
    label.setAttribute("text-anchor", "middle");
    label.textContent = name;
    svg.appendChild(circle);
    svg.appendChild(label);
  }

  root.appendChild(svg);
  root.appendChild(provenance);
}
