/** Wire shapes for the search service API. */

export const FACET_KINDS = ["skill", "title", "company", "industry"] as const;

export type FacetKind = (typeof FACET_KINDS)[number];

export interface FacetEntry {
  id: number;
  score: number;
  name: string;
}

export type QueryFacets = Record<FacetKind, FacetEntry[]>;

export interface MemberSummary {
  member_id: number;
  name: string;
  headline: string;
  current_title: string;
}

export interface ResultRow {
  member_id: number;
  score: number;
  name: string;
  headline: string;
  current_title: string;
  seniority: number | null;
  location: string;
  matched: Partial<Record<FacetKind, number[]>>;
}

export interface SearchResponse {
  query: { facets: QueryFacets };
  results: ResultRow[];
  total: number;
  offset: number;
  limit: number;
  snapshot_version: string;
}

export interface Suggestion {
  id: number;
  score: number;
  name: string;
}

export interface Api {
  searchMembers(text: string, limit: number): Promise<MemberSummary[]>;
  search(idealCandidateIds: number[], offset: number, limit: number): Promise<SearchResponse>;
  refresh(
    facets: QueryFacets,
    idealCandidateIds: number[],
    offset: number,
    limit: number,
  ): Promise<SearchResponse>;
  suggest(facets: QueryFacets, facet: FacetKind, limit: number): Promise<Suggestion[]>;
}

export function emptyFacets(): QueryFacets {
  return { skill: [], title: [], company: [], industry: [] };
}
