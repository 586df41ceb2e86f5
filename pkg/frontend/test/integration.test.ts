// @vitest-environment jsdom
/** End-to-end acceptance: the review UI drives the real mining service.
 *
 * Round trip: open the design/requirement link, relabel the top-ranked fact
 * to "is pressed by", accept it, and confirm /ontology holds exactly that
 * accepted fact. Resilience: kill the service mid-decision, expect the error
 * banner and a reverted control, then restart and confirm no phantom fact
 * was recorded. */

import { afterAll, beforeAll, describe, expect, test, vi } from "vitest";
import { type ChildProcess, execFileSync, spawn } from "node:child_process";
import { cpSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { ApiClient } from "../src/api.js";
import { renderLinkReview } from "../src/reviewView.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const FIXTURE = path.resolve(HERE, "../../tests/fixtures/project1");

function pythonReady(): boolean {
  try {
    execFileSync("python3", ["-c", "import tracefacts"], { stdio: "ignore" });
    return true;
  } catch {
    return false;
  }
}

const HAVE_PYTHON = pythonReady();
const PORT = 8000 + Math.floor(Math.random() * 20000);
const BASE = `http://127.0.0.1:${PORT}`;

let projectDir: string;
let server: ChildProcess | null = null;

function startServer(): ChildProcess {
  const child = spawn(
    "python3",
    ["-m", "tracefacts.cli", "serve", "--project-dir", projectDir, "--port", String(PORT)],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  child.stderr?.on("data", () => undefined);
  return child;
}

async function waitReady(timeoutMs = 90_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/project/summary`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("service did not come up");
    await new Promise((resolve) => setTimeout(resolve, 300));
  }
}

async function stopServer(): Promise<void> {
  if (!server) return;
  const child = server;
  server = null;
  const gone = new Promise((resolve) => child.once("exit", resolve));
  child.kill("SIGKILL");
  await gone;
}

describe.skipIf(!HAVE_PYTHON)("review UI against the live service", () => {
  beforeAll(async () => {
    projectDir = mkdtempSync(path.join(tmpdir(), "tracefacts-ui-"));
    cpSync(FIXTURE, projectDir, { recursive: true });
    server = startServer();
    await waitReady();
  }, 120_000);

  afterAll(async () => {
    await stopServer();
  });

  test(
    "round trip: relabel and accept rank 1, then the ontology holds exactly that fact",
    async () => {
      const root = document.createElement("div");
      document.body.appendChild(root);
      const api = new ApiClient(BASE);
      await renderLinkReview(root, api, "L1");

      const first = root.querySelector<HTMLElement>('tr.candidate[data-rank="1"]');
      expect(first).not.toBeNull();
      const relation = first!.querySelector<HTMLInputElement>('[data-testid="relation-input"]')!;
      expect(relation.value).toBe("press of");
      expect(first!.textContent).toContain("Reverse");

      relation.value = "is pressed by";
      first!.querySelector<HTMLButtonElement>('[data-testid="accept"]')!.click();
      await vi.waitFor(
        () => {
          expect(first!.classList.contains("status-accepted")).toBe(true);
        },
        { timeout: 15_000 },
      );

      const ontology = (await (await fetch(`${BASE}/ontology`)).json()) as {
        facts: Array<{ source: string; relation: string; target: string; status: string }>;
      };
      expect(ontology.facts).toHaveLength(1);
      expect(ontology.facts[0]).toMatchObject({
        source: "start button",
        relation: "is pressed by",
        target: "clinician",
        status: "accepted",
      });
    },
    60_000,
  );

  test(
    "resilience: killing the service mid-decision shows the banner, reverts, and leaves no phantom fact",
    async () => {
      const root = document.createElement("div");
      document.body.appendChild(root);
      const api = new ApiClient(BASE);
      await renderLinkReview(root, api, "L1");

      const second = root.querySelector<HTMLElement>('tr.candidate[data-rank="2"]')!;
      expect(second.classList.contains("status-suggested")).toBe(true);

      await stopServer(); // service dies before the analyst clicks
      second.querySelector<HTMLButtonElement>('[data-testid="accept"]')!.click();
      await vi.waitFor(
        () => {
          expect(root.querySelector('[data-testid="error-banner"]')).not.toBeNull();
        },
        { timeout: 15_000 },
      );
      expect(second.classList.contains("status-accepted")).toBe(false);
      expect(second.classList.contains("status-suggested")).toBe(true);
      expect(second.querySelector<HTMLButtonElement>('[data-testid="accept"]')!.disabled).toBe(false);

      server = startServer();
      await waitReady();
      const ontology = (await (await fetch(`${BASE}/ontology`)).json()) as {
        facts: Array<{ relation: string }>;
      };
      // only the fact accepted in the round-trip test; nothing phantom
      expect(ontology.facts).toHaveLength(1);
      expect(ontology.facts[0].relation).toBe("is pressed by");
    },
    180_000,
  );
});
