import { describe, expect, test } from "vitest";

import { MAX_CANDIDATES, SearchStore } from "../src/store";
import {
  FACET_KINDS,
  emptyFacets,
  type Api,
  type FacetKind,
  type MemberSummary,
  type QueryFacets,
  type ResultRow,
  type SearchResponse,
  type Suggestion,
} from "../src/types";

interface FakeMember {
  member_id: number;
  name: string;
  headline: string;
  facets: Record<FacetKind, number[]>;
}

function member(
  id: number,
  facets: Partial<Record<FacetKind, number[]>>,
  name = `Member ${id}`,
): FakeMember {
  return {
    member_id: id,
    name,
    headline: `headline ${id}`,
    facets: {
      skill: facets.skill ?? [],
      title: facets.title ?? [],
      company: facets.company ?? [],
      industry: facets.industry ?? [],
    },
  };
}

/**
 * In-memory stand-in for the service with the same retrieval contract:
 * non-empty facets are a conjunction, entries within one a disjunction,
 * ideal candidates never appear in results.
 */
class FakeApi implements Api {
  corpus: FakeMember[];
  manual = false;
  failNext = false;
  pending: Array<() => void> = [];
  calls = 0;

  constructor(corpus: FakeMember[]) {
    this.corpus = corpus;
  }

  private defer<T>(make: () => T): Promise<T> {
    this.calls += 1;
    if (this.failNext) {
      this.failNext = false;
      return Promise.reject(new Error("backend unavailable"));
    }
    if (!this.manual) {
      return Promise.resolve(make());
    }
    return new Promise((resolve, reject) => {
      this.pending.push(() => {
        try {
          resolve(make());
        } catch (err) {
          reject(err instanceof Error ? err : new Error(String(err)));
        }
      });
    });
  }

  settle(index: number): void {
    const run = this.pending[index];
    if (!run) throw new Error(`no pending call ${index}`);
    run();
  }

  searchMembers(text: string, limit: number): Promise<MemberSummary[]> {
    const needle = text.toLowerCase();
    const hits = this.corpus
      .filter((m) => m.name.toLowerCase().includes(needle))
      .slice(0, limit)
      .map((m) => ({
        member_id: m.member_id,
        name: m.name,
        headline: m.headline,
        current_title: "",
      }));
    return Promise.resolve(hits);
  }

  private matches(candidate: FakeMember, facets: QueryFacets): boolean {
    for (const kind of FACET_KINDS) {
      const wanted = facets[kind];
      if (!wanted.length) continue;
      const owned = new Set(candidate.facets[kind]);
      if (!wanted.some((entry) => owned.has(entry.id))) return false;
    }
    return true;
  }

  private retrieve(
    facets: QueryFacets,
    exclude: number[],
    offset: number,
    limit: number,
  ): SearchResponse {
    const banned = new Set(exclude);
    const hits = this.corpus.filter(
      (m) => !banned.has(m.member_id) && this.matches(m, facets),
    );
    const scored = hits.map((m) => {
      const matched: Partial<Record<FacetKind, number[]>> = {};
      let count = 0;
      for (const kind of FACET_KINDS) {
        const owned = new Set(m.facets[kind]);
        const ids = facets[kind].filter((e) => owned.has(e.id)).map((e) => e.id);
        if (ids.length) {
          matched[kind] = ids;
          count += ids.length;
        }
      }
      return { m, count, matched };
    });
    scored.sort((a, b) => b.count - a.count || a.m.member_id - b.m.member_id);
    const rows: ResultRow[] = scored.slice(offset, offset + limit).map((s) => ({
      member_id: s.m.member_id,
      score: s.count,
      name: s.m.name,
      headline: s.m.headline,
      current_title: "",
      seniority: null,
      location: "",
      matched: s.matched,
    }));
    return {
      query: { facets },
      results: rows,
      total: scored.length,
      offset,
      limit,
      snapshot_version: "fake",
    };
  }

  search(ids: number[], offset: number, limit: number): Promise<SearchResponse> {
    return this.defer(() => {
      const generated = emptyFacets();
      for (const kind of FACET_KINDS) {
        const union = new Set<number>();
        for (const id of ids) {
          const picked = this.corpus.find((m) => m.member_id === id);
          if (!picked) throw new Error(`unknown member ${id}`);
          for (const entity of picked.facets[kind]) union.add(entity);
        }
        generated[kind] = [...union]
          .sort((a, b) => a - b)
          .map((entity) => ({ id: entity, score: 1.0, name: `${kind} ${entity}` }));
      }
      return this.retrieve(generated, ids, offset, limit);
    });
  }

  refresh(
    facets: QueryFacets,
    ids: number[],
    offset: number,
    limit: number,
  ): Promise<SearchResponse> {
    return this.defer(() => {
      for (const kind of FACET_KINDS) {
        const scores = facets[kind].map((e) => e.score);
        for (let i = 1; i < scores.length; i += 1) {
          const prev = scores[i - 1];
          const here = scores[i];
          if (prev !== undefined && here !== undefined && prev < here) {
            throw new Error(`scores increase within facet ${kind}`);
          }
        }
      }
      return this.retrieve(facets, ids, offset, limit);
    });
  }

  suggest(facets: QueryFacets, facet: FacetKind, limit: number): Promise<Suggestion[]> {
    const present = new Set(facets[facet].map((e) => e.id));
    const pool = [900, 901, 902].map((id, i) => ({
      id,
      score: 0.9 - i * 0.2,
      name: `${facet} ${id}`,
    }));
    return Promise.resolve(pool.filter((s) => !present.has(s.id)).slice(0, limit));
  }
}

function summary(m: FakeMember): MemberSummary {
  return {
    member_id: m.member_id,
    name: m.name,
    headline: m.headline,
    current_title: "",
  };
}

function smallCorpus(): FakeMember[] {
  const anchor = member(100, { skill: [1, 2], title: [11], company: [21], industry: [31] });
  return [
    anchor,
    member(1, { skill: [1, 2], title: [11], company: [21], industry: [31] }),
    member(2, { skill: [2], title: [11], company: [21], industry: [31] }),
    member(3, { skill: [1], title: [12], company: [21], industry: [31] }),
    member(4, { skill: [3], title: [11], company: [21], industry: [31] }),
    member(5, { skill: [1], title: [11], company: [22], industry: [31] }),
  ];
}

describe("candidate picking", () => {
  test("rejects duplicates and a fourth candidate", () => {
    const api = new FakeApi(smallCorpus());
    const store = new SearchStore(api);
    const extras = [
      member(200, {}, "Ada"),
      member(201, {}, "Ben"),
      member(202, {}, "Cam"),
      member(203, {}, "Dot"),
    ];
    expect(store.addCandidate(summary(extras[0]!))).toBe(true);
    expect(store.addCandidate(summary(extras[0]!))).toBe(false);
    expect(store.state.error).toContain("already picked");
    expect(store.addCandidate(summary(extras[1]!))).toBe(true);
    expect(store.addCandidate(summary(extras[2]!))).toBe(true);
    expect(store.addCandidate(summary(extras[3]!))).toBe(false);
    expect(store.state.candidates).toHaveLength(MAX_CANDIDATES);
    expect(store.state.error).toContain("at most 3");
  });

  test("generate without candidates sets an error and calls nothing", async () => {
    const api = new FakeApi(smallCorpus());
    const store = new SearchStore(api);
    await store.generate();
    expect(store.state.error).toContain("at least one candidate");
    expect(api.calls).toBe(0);
  });
});

describe("query generation and retrieval semantics", () => {
  test("generated query excludes the candidates and fills facets", async () => {
    const corpus = smallCorpus();
    const api = new FakeApi(corpus);
    const store = new SearchStore(api);
    store.addCandidate(summary(corpus[0]!));
    await store.generate();
    const facets = store.state.facets;
    expect(facets).not.toBeNull();
    expect(facets!.skill.map((e) => e.id)).toEqual([1, 2]);
    expect(facets!.title.map((e) => e.id)).toEqual([11]);
    const ids = store.state.results.map((r) => r.member_id);
    expect(ids).not.toContain(100);
    expect(store.state.snapshotVersion).toBe("fake");
  });

  test("results equal a hand filter: every facet must hit, any entry within one suffices", async () => {
    const corpus = smallCorpus();
    const api = new FakeApi(corpus);
    const store = new SearchStore(api);
    store.addCandidate(summary(corpus[0]!));
    await store.generate();
    const facets = store.state.facets!;
    const expected = corpus
      .filter((m) => m.member_id !== 100)
      .filter((m) =>
        FACET_KINDS.every((kind) => {
          const wanted = facets[kind].map((e) => e.id);
          if (!wanted.length) return true;
          return wanted.some((id) => m.facets[kind].includes(id));
        }),
      )
      .map((m) => m.member_id);
    const got = store.state.results.map((r) => r.member_id);
    expect(new Set(got)).toEqual(new Set(expected));
    expect(got).toContain(2);
    expect(got).not.toContain(3);
    expect(got).not.toContain(4);
  });

  test("removing a facet entry widens retrieval", async () => {
    const corpus = smallCorpus();
    const api = new FakeApi(corpus);
    const store = new SearchStore(api);
    store.addCandidate(summary(corpus[0]!));
    await store.generate();
    const before = store.state.total;
    await store.removeFacetEntry("title", 11);
    expect(store.state.total).toBeGreaterThan(before);
    expect(store.state.results.map((r) => r.member_id)).toContain(3);
  });

  test("removing the last entry keeps the stale page and reports the problem", async () => {
    const corpus = [member(100, { skill: [1] }), member(1, { skill: [1] })];
    const api = new FakeApi(corpus);
    const store = new SearchStore(api);
    store.addCandidate(summary(corpus[0]!));
    await store.generate();
    const callsBefore = api.calls;
    await store.removeFacetEntry("skill", 1);
    expect(api.calls).toBe(callsBefore);
    expect(store.state.error).toContain("at least one facet value");
  });
});

describe("facet editing", () => {
  test("added entries keep scores non-increasing and duplicates are refused", async () => {
    const corpus = smallCorpus();
    const api = new FakeApi(corpus);
    const store = new SearchStore(api);
    store.addCandidate(summary(corpus[0]!));
    await store.generate();
    await store.addFacetEntry("skill", { id: 7, score: 1.5, name: "skill 7" });
    await store.addFacetEntry("skill", { id: 8, score: 0.4, name: "skill 8" });
    await store.addFacetEntry("skill", { id: 9, score: 0.9, name: "skill 9" });
    const scores = store.state.facets!.skill.map((e) => e.score);
    expect(scores).toEqual([...scores].sort((a, b) => b - a));
    expect(store.state.facets!.skill.map((e) => e.id)).toEqual([7, 1, 2, 9, 8]);
    const callsBefore = api.calls;
    await store.addFacetEntry("skill", { id: 7, score: 0.2, name: "skill 7" });
    expect(api.calls).toBe(callsBefore);
    expect(store.state.error).toContain("already in the query");
  });

  test("suggestions load for a facet and skip ids already present", async () => {
    const corpus = [
      member(100, { skill: [900] }),
      member(1, { skill: [900] }),
    ];
    const api = new FakeApi(corpus);
    const store = new SearchStore(api);
    store.addCandidate(summary(corpus[0]!));
    await store.generate();
    await store.loadSuggestions("skill");
    const ids = store.state.suggestions.skill!.map((s) => s.id);
    expect(ids).toEqual([901, 902]);
  });
});

describe("response ordering and failures", () => {
  function pagedCorpus(): FakeMember[] {
    const members = [member(100, { skill: [1] })];
    for (let i = 1; i <= 30; i += 1) members.push(member(i, { skill: [1] }));
    return members;
  }

  test("a stale response never overwrites a newer one", async () => {
    const corpus = pagedCorpus();
    const api = new FakeApi(corpus);
    const store = new SearchStore(api);
    store.addCandidate(summary(corpus[0]!));
    await store.generate();
    api.manual = true;
    const slow = store.nextPage();
    expect(api.pending).toHaveLength(1);
    const fast = store.addFacetEntry("skill", { id: 2, score: 0.5, name: "skill 2" });
    expect(api.pending).toHaveLength(2);
    api.settle(1);
    await fast;
    expect(store.state.offset).toBe(0);
    api.settle(0);
    await slow;
    expect(store.state.offset).toBe(0);
    expect(store.state.loading).toBe(false);
    expect(store.state.total).toBe(30);
  });

  test("paging respects the total and previous returns", async () => {
    const corpus = pagedCorpus();
    const api = new FakeApi(corpus);
    const store = new SearchStore(api);
    store.addCandidate(summary(corpus[0]!));
    await store.generate();
    expect(store.state.total).toBe(30);
    expect(store.state.results).toHaveLength(25);
    await store.nextPage();
    expect(store.state.offset).toBe(25);
    expect(store.state.results).toHaveLength(5);
    const callsBefore = api.calls;
    await store.nextPage();
    expect(api.calls).toBe(callsBefore);
    await store.prevPage();
    expect(store.state.offset).toBe(0);
    expect(store.state.results).toHaveLength(25);
  });

  test("a failing call surfaces the error and keeps the last page", async () => {
    const corpus = pagedCorpus();
    const api = new FakeApi(corpus);
    const store = new SearchStore(api);
    store.addCandidate(summary(corpus[0]!));
    await store.generate();
    const kept = store.state.results.map((r) => r.member_id);
    api.failNext = true;
    await store.nextPage();
    expect(store.state.error).toContain("backend unavailable");
    expect(store.state.loading).toBe(false);
    expect(store.state.results.map((r) => r.member_id)).toEqual(kept);
    expect(store.state.offset).toBe(0);
  });
});
