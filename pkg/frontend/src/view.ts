import type { SearchStore, State } from "./store";
import { FACET_KINDS, type FacetKind, type MemberSummary } from "./types";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function must(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

/** Renders the whole page from store state; re-renders on every change. */
export class View {
  private readonly store: SearchStore;
  private readonly candidates = must("candidates");
  private readonly facets = must("facets");
  private readonly results = must("results");
  private readonly pager = must("pager");
  private readonly status = must("status");
  private readonly matches = must("typeahead-matches");

  constructor(store: SearchStore) {
    this.store = store;
    store.subscribe((state) => this.render(state));
  }

  showMatches(members: MemberSummary[]): void {
    this.matches.replaceChildren();
    for (const member of members) {
      const row = el("button", "match");
      row.type = "button";
      row.append(
        el("span", "match-name", member.name),
        el("span", "match-headline", member.headline),
      );
      row.addEventListener("click", () => {
        this.store.addCandidate(member);
        this.clearMatches();
      });
      this.matches.append(row);
    }
  }

  clearMatches(): void {
    this.matches.replaceChildren();
  }

  private render(state: State): void {
    this.renderStatus(state);
    this.renderCandidates(state);
    this.renderFacets(state);
    this.renderResults(state);
    this.renderPager(state);
  }

  private renderStatus(state: State): void {
    this.status.replaceChildren();
    if (state.loading) this.status.append(el("span", "loading", "searching..."));
    if (state.error) this.status.append(el("span", "error", state.error));
    if (!state.loading && !state.error && state.snapshotVersion) {
      this.status.append(
        el("span", "version", `snapshot ${state.snapshotVersion}`),
      );
    }
  }

  private renderCandidates(state: State): void {
    this.candidates.replaceChildren();
    for (const member of state.candidates) {
      const chip = el("span", "chip candidate-chip");
      chip.append(el("span", "chip-label", member.name));
      const remove = el("button", "chip-remove", "×");
      remove.type = "button";
      remove.addEventListener("click", () =>
        this.store.removeCandidate(member.member_id),
      );
      chip.append(remove);
      this.candidates.append(chip);
    }
  }

  private renderFacets(state: State): void {
    this.facets.replaceChildren();
    if (!state.facets) return;
    for (const kind of FACET_KINDS) {
      const entries = state.facets[kind];
      const suggestions = state.suggestions[kind] ?? [];
      if (!entries.length && !suggestions.length) continue;
      const group = el("div", "facet-group");
      const head = el("div", "facet-head");
      head.append(el("span", "facet-kind", kind));
      const suggest = el("button", "suggest-button", "suggest");
      suggest.type = "button";
      suggest.addEventListener("click", () => void this.store.loadSuggestions(kind));
      head.append(suggest);
      group.append(head);
      const chips = el("div", "facet-chips");
      for (const entry of entries) {
        const chip = el("span", "chip facet-chip");
        chip.title = `weight ${entry.score.toFixed(3)}`;
        chip.append(el("span", "chip-label", entry.name));
        const remove = el("button", "chip-remove", "×");
        remove.type = "button";
        remove.addEventListener("click", () =>
          void this.store.removeFacetEntry(kind, entry.id),
        );
        chip.append(remove);
        chips.append(chip);
      }
      for (const suggestion of suggestions) {
        const chip = el("button", "chip suggestion-chip");
        chip.type = "button";
        chip.title = `weight ${suggestion.score.toFixed(3)}`;
        chip.textContent = `+ ${suggestion.name}`;
        chip.addEventListener("click", () =>
          void this.store.addFacetEntry(kind, suggestion),
        );
        chips.append(chip);
      }
      group.append(chips);
      this.facets.append(group);
    }
  }

  private renderResults(state: State): void {
    this.results.replaceChildren();
    for (const row of state.results) {
      const card = el("div", "result");
      const head = el("div", "result-head");
      head.append(el("span", "result-name", row.name));
      head.append(el("span", "result-score", row.score.toFixed(3)));
      card.append(head);
      card.append(el("div", "result-headline", row.headline));
      const meta = el("div", "result-meta");
      meta.append(el("span", undefined, row.current_title));
      if (row.location) meta.append(el("span", undefined, row.location));
      card.append(meta);
      const kinds = Object.keys(row.matched) as FacetKind[];
      if (kinds.length) {
        const badges = el("div", "result-badges");
        for (const kind of kinds) {
          const hits = row.matched[kind];
          badges.append(el("span", "badge", `${kind} · ${hits ? hits.length : 0}`));
        }
        card.append(badges);
      }
      this.results.append(card);
    }
  }

  private renderPager(state: State): void {
    this.pager.replaceChildren();
    if (!state.total) return;
    const prev = el("button", "page-button", "previous");
    prev.type = "button";
    prev.disabled = state.offset === 0 || state.loading;
    prev.addEventListener("click", () => void this.store.prevPage());
    const last = Math.min(state.offset + state.results.length, state.total);
    const label = el(
      "span",
      "page-label",
      `${state.offset + 1} to ${last} of ${state.total}`,
    );
    const next = el("button", "page-button", "next");
    next.type = "button";
    next.disabled = state.offset + state.limit >= state.total || state.loading;
    next.addEventListener("click", () => void this.store.nextPage());
    this.pager.append(prev, label, next);
  }
}
