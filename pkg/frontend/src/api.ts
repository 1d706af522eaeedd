import type {
  Api,
  FacetKind,
  MemberSummary,
  QueryFacets,
  SearchResponse,
  Suggestion,
} from "./types";

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = (await response.json()) as { detail?: unknown };
      if (body.detail) detail = String(body.detail);
    } catch {
      // body was not JSON; the status code is the message
    }
    throw new Error(detail);
  }
  return (await response.json()) as T;
}

function post<T>(path: string, payload: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

/** Record shape the refresh endpoint validates: ids with scores only. */
function facetRecord(facets: QueryFacets): { facets: Record<string, { id: number; score: number }[]> } {
  const record: Record<string, { id: number; score: number }[]> = {};
  for (const [kind, entries] of Object.entries(facets)) {
    record[kind] = entries.map((entry) => ({ id: entry.id, score: entry.score }));
  }
  return { facets: record };
}

export class HttpApi implements Api {
  async searchMembers(text: string, limit: number): Promise<MemberSummary[]> {
    const query = encodeURIComponent(text);
    const body = await request<{ members: MemberSummary[] }>(
      `/api/members?q=${query}&limit=${limit}`,
    );
    return body.members;
  }

  search(idealCandidateIds: number[], offset: number, limit: number): Promise<SearchResponse> {
    return post("/api/search", { ideal_candidate_ids: idealCandidateIds, offset, limit });
  }

  refresh(
    facets: QueryFacets,
    idealCandidateIds: number[],
    offset: number,
    limit: number,
  ): Promise<SearchResponse> {
    return post("/api/refresh", {
      query: facetRecord(facets),
      ideal_candidate_ids: idealCandidateIds,
      offset,
      limit,
    });
  }

  async suggest(facets: QueryFacets, facet: FacetKind, limit: number): Promise<Suggestion[]> {
    const params = new URLSearchParams({ facet, limit: String(limit) });
    const csv: Record<FacetKind, string> = {
      skill: "skills",
      title: "titles",
      company: "companies",
      industry: "industries",
    };
    for (const [kind, entries] of Object.entries(facets) as [FacetKind, QueryFacets[FacetKind]][]) {
      if (entries.length) params.set(csv[kind], entries.map((entry) => entry.id).join(","));
    }
    const body = await request<{ suggestions: Suggestion[] }>(`/api/suggest?${params}`);
    return body.suggestions;
  }
}
