import type {
  Api,
  FacetEntry,
  FacetKind,
  MemberSummary,
  QueryFacets,
  ResultRow,
  SearchResponse,
  Suggestion,
} from "./types";

export const MAX_CANDIDATES = 3;
export const PAGE_SIZE = 25;

export interface State {
  candidates: MemberSummary[];
  facets: QueryFacets | null;
  results: ResultRow[];
  total: number;
  offset: number;
  limit: number;
  loading: boolean;
  error: string | null;
  snapshotVersion: string | null;
  suggestions: Partial<Record<FacetKind, Suggestion[]>>;
}

type Listener = (state: State) => void;

/**
 * All UI state and every service call, with no DOM knowledge.
 *
 * Search and refresh responses apply only when they belong to the most
 * recently issued request, so a slow older response never overwrites a
 * newer page. Facet edits keep the service's invariant that scores
 * never increase within a facet.
 */
export class SearchStore {
  private readonly api: Api;
  private readonly listeners: Listener[] = [];
  private seq = 0;
  private suggestSeq: Partial<Record<FacetKind, number>> = {};
  readonly state: State = {
    candidates: [],
    facets: null,
    results: [],
    total: 0,
    offset: 0,
    limit: PAGE_SIZE,
    loading: false,
    error: null,
    snapshotVersion: null,
    suggestions: {},
  };

  constructor(api: Api) {
    this.api = api;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  addCandidate(member: MemberSummary): boolean {
    if (this.state.candidates.some((c) => c.member_id === member.member_id)) {
      this.state.error = `${member.name} is already picked`;
      this.notify();
      return false;
    }
    if (this.state.candidates.length >= MAX_CANDIDATES) {
      this.state.error = `a query builds from at most ${MAX_CANDIDATES} candidates`;
      this.notify();
      return false;
    }
    this.state.candidates.push(member);
    this.state.error = null;
    this.notify();
    return true;
  }

  removeCandidate(memberId: number): void {
    this.state.candidates = this.state.candidates.filter(
      (c) => c.member_id !== memberId,
    );
    this.state.error = null;
    this.notify();
  }

  private candidateIds(): number[] {
    return this.state.candidates.map((c) => c.member_id);
  }

  private apply(response: SearchResponse): void {
    this.state.facets = response.query.facets;
    this.state.results = response.results;
    this.state.total = response.total;
    this.state.offset = response.offset;
    this.state.limit = response.limit;
    this.state.snapshotVersion = response.snapshot_version;
    this.state.suggestions = {};
  }

  private async run(call: () => Promise<SearchResponse>): Promise<void> {
    const ticket = ++this.seq;
    this.state.loading = true;
    this.state.error = null;
    this.notify();
    try {
      const response = await call();
      if (ticket !== this.seq) return;
      this.apply(response);
    } catch (err) {
      if (ticket !== this.seq) return;
      this.state.error = err instanceof Error ? err.message : String(err);
    } finally {
      if (ticket === this.seq) {
        this.state.loading = false;
        this.notify();
      }
    }
  }

  generate(): Promise<void> {
    if (!this.state.candidates.length) {
      this.state.error = "pick at least one candidate first";
      this.notify();
      return Promise.resolve();
    }
    return this.run(() => this.api.search(this.candidateIds(), 0, this.state.limit));
  }

  private refreshAt(offset: number): Promise<void> {
    const facets = this.state.facets;
    if (!facets) return Promise.resolve();
    return this.run(() =>
      this.api.refresh(facets, this.candidateIds(), offset, this.state.limit),
    );
  }

  removeFacetEntry(kind: FacetKind, entityId: number): Promise<void> {
    const facets = this.state.facets;
    if (!facets) return Promise.resolve();
    facets[kind] = facets[kind].filter((entry) => entry.id !== entityId);
    if (Object.values(facets).every((entries) => entries.length === 0)) {
      this.state.error = "a query needs at least one facet value";
      this.notify();
      return Promise.resolve();
    }
    return this.refreshAt(0);
  }

  addFacetEntry(kind: FacetKind, entry: FacetEntry): Promise<void> {
    const facets = this.state.facets;
    if (!facets) return Promise.resolve();
    if (facets[kind].some((existing) => existing.id === entry.id)) {
      this.state.error = `${entry.name} is already in the query`;
      this.notify();
      return Promise.resolve();
    }
    const at = facets[kind].findIndex((existing) => existing.score < entry.score);
    if (at === -1) facets[kind].push(entry);
    else facets[kind].splice(at, 0, entry);
    return this.refreshAt(0);
  }

  nextPage(): Promise<void> {
    const next = this.state.offset + this.state.limit;
    if (next >= this.state.total) return Promise.resolve();
    return this.refreshAt(next);
  }

  prevPage(): Promise<void> {
    if (this.state.offset === 0) return Promise.resolve();
    return this.refreshAt(Math.max(0, this.state.offset - this.state.limit));
  }

  async loadSuggestions(kind: FacetKind): Promise<void> {
    const facets = this.state.facets;
    if (!facets) return;
    const ticket = (this.suggestSeq[kind] ?? 0) + 1;
    this.suggestSeq[kind] = ticket;
    try {
      const suggestions = await this.api.suggest(facets, kind, 5);
      if (this.suggestSeq[kind] !== ticket || this.state.facets !== facets) return;
      this.state.suggestions[kind] = suggestions;
      this.notify();
    } catch (err) {
      if (this.suggestSeq[kind] !== ticket) return;
      this.state.error = err instanceof Error ? err.message : String(err);
      this.notify();
    }
  }
}
