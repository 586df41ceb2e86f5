/** Typed client for the fact-mining service. All state lives server-side;
 * the UI never caches mutations locally. */

export interface ArtifactRef {
  id: string;
  kind: string;
  text: string;
  domain_terms: string[];
}

export interface LinkSummary {
  id: string;
  label: string | null;
  source: ArtifactRef;
  target: ArtifactRef;
}

export interface SynEvidencePayload {
  relation_label: string;
  reversed: boolean;
  sentence_ref: string;
  kind: string;
}

export interface EvidencePayload {
  syn: SynEvidencePayload | null;
  sem_hw: number;
  sem_aw: number;
  arm: number;
  tm: number;
}

export interface Candidate {
  link_id: string;
  source_term: string;
  target_term: string;
  relation_label: string | null;
  reversed: boolean;
  conf: number;
  rank: number;
  evidence: EvidencePayload;
  fact_id: string;
  status: string;
}

export interface FactRecord {
  id: string;
  source: string;
  relation: string;
  target: string;
  status: string;
  provenance: Record<string, unknown>;
}

export interface Expansion {
  term: string;
  relation: string;
  hops: number;
  path: string[];
}

export interface SearchResult {
  artifact_id: string;
  score: number;
  matched: Record<string, number>;
  text: string;
}

export interface SearchResponse {
  expanded: Record<string, Expansion[]>;
  results: SearchResult[];
}

export type DecisionAction = "accept" | "reject" | "modify";

export interface DecisionBody {
  action: DecisionAction;
  relation?: string;
  source?: string;
  target?: string;
  editor?: string;
}

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // leave the status text
    }
    throw new ApiError(detail, response.status);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async summary(): Promise<Record<string, unknown>> {
    return asJson(await fetch(this.url("/project/summary")));
  }

  async links(): Promise<LinkSummary[]> {
    return asJson(await fetch(this.url("/links")));
  }

  async link(id: string): Promise<LinkSummary> {
    return asJson(await fetch(this.url(`/links/${encodeURIComponent(id)}`)));
  }

  async candidates(linkId: string): Promise<Candidate[]> {
    return asJson(await fetch(this.url(`/links/${encodeURIComponent(linkId)}/candidates`)));
  }

  async decide(factId: string, body: DecisionBody): Promise<FactRecord> {
    const response = await fetch(this.url(`/facts/${encodeURIComponent(factId)}/decision`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return asJson(response);
  }

  async ontology(): Promise<{ facts: FactRecord[] }> {
    return asJson(await fetch(this.url("/ontology")));
  }

  async search(terms: string[], maxHops: number): Promise<SearchResponse> {
    const response = await fetch(this.url("/query/search"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ terms, max_hops: maxHops }),
    });
    return asJson(response);
  }
}
