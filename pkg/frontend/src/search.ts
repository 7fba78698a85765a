/** Search page: query box, removable filter chips, facet suggestions,
 * result list, pagination. Facet clicks add one chip and re-query live;
 * responses arriving out of order are discarded by sequence number. */

import { ApiError, Facet, SearchClient, SearchResult } from "./api.js";
import { clear, el, formatDuration } from "./dom.js";
import {
  FilterChip,
  UiSearchState,
  addChip,
  facetToChip,
  hasCriteria,
  initialState,
  removeChip,
  searchParams,
} from "./state.js";

export class SearchPage {
  readonly state: UiSearchState;
  private input!: HTMLInputElement;
  private chipsBar!: HTMLElement;
  private status!: HTMLElement;
  private resultsList!: HTMLElement;
  private facetPanel!: HTMLElement;
  private pager!: HTMLElement;

  constructor(
    private readonly client: SearchClient,
    private readonly onOpenDetail: (id: string) => void,
    limit = 20,
  ) {
    this.state = initialState(limit);
  }

  mount(container: HTMLElement): void {
    this.input = el("input", {
      type: "search",
      class: "query-input",
      placeholder: "Search videos and podcasts…",
      "aria-label": "search query",
    });
    const form = el("form", { class: "search-form" }, this.input,
      el("button", { type: "submit" }, "Search"));
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.state.query = this.input.value;
      this.state.offset = 0;
      void this.refresh();
    });
    this.chipsBar = el("div", { class: "chips" });
    this.status = el("div", { class: "status" });
    this.resultsList = el("div", { class: "results" });
    this.facetPanel = el("aside", { class: "facets" });
    this.pager = el("nav", { class: "pager" });
    container.append(
      form,
      this.chipsBar,
      this.status,
      el("div", { class: "search-body" }, this.resultsList, this.facetPanel),
      this.pager,
    );
    this.renderEmptyState();
  }

  /** Issue the search for the current state, or show the empty-state prompt
   * without firing a request when there is nothing to search for. */
  async refresh(): Promise<void> {
    this.renderChips();
    if (!hasCriteria(this.state)) {
      this.state.lastResponse = null;
      this.renderEmptyState();
      return;
    }
    const seq = ++this.state.seq;
    this.setStatus("Searching…", "loading");
    let response;
    try {
      response = await this.client.search(searchParams(this.state));
    } catch (err) {
      if (seq !== this.state.seq) return; // superseded; keep newer outcome
      if (err instanceof ApiError && err.status === 400) {
        this.setStatus(`Cannot run this search: ${err.detail}`, "inline-error");
      } else {
        this.setStatus(
          "The library is unreachable right now — check the gateway and retry.",
          "offline-banner",
        );
      }
      return;
    }
    if (seq !== this.state.seq) return; // stale response, a newer query won
    this.state.lastResponse = response;
    this.renderResults();
  }

  addFacet(facet: Facet): void {
    const chip = facetToChip(facet);
    if (!chip || !addChip(this.state, chip)) return;
    void this.refresh();
  }

  removeChipAt(index: number): void {
    removeChip(this.state, index);
    void this.refresh();
  }

  private setStatus(text: string, kind: string): void {
    this.status.className = `status ${kind}`;
    this.status.textContent = text;
  }

  private renderEmptyState(): void {
    clear(this.resultsList);
    clear(this.facetPanel);
    clear(this.pager);
    this.setStatus(
      "Type a search or pick a filter to explore the library.",
      "empty-state",
    );
  }

  private renderChips(): void {
    clear(this.chipsBar);
    this.state.chips.forEach((chip: FilterChip, index: number) => {
      const remove = el("button", { class: "chip-remove", "aria-label": `remove ${chip.display}` }, "×");
      remove.addEventListener("click", () => this.removeChipAt(index));
      this.chipsBar.append(
        el("span", { class: "chip", "data-kind": chip.kind }, chip.display, remove),
      );
    });
  }

  private renderResults(): void {
    const response = this.state.lastResponse;
    if (!response) return;
    this.setStatus(
      `${response.total} result${response.total === 1 ? "" : "s"}` +
        (response.partial ? " (partial — one store was unavailable)" : ""),
      "result-count",
    );
    clear(this.resultsList);
    if (response.total === 0) {
      this.resultsList.append(el("p", { class: "no-results" }, "Nothing matched."));
    }
    for (const result of response.results) {
      this.resultsList.append(this.renderResult(result));
    }
    this.renderFacets(response.facets);
    this.renderPager(response.total);
  }

  /** One result card. Identifiers stay out of the list on purpose; they
   * appear on the detail page only. */
  private renderResult(result: SearchResult): HTMLElement {
    const title = el("a", { class: "result-title", href: `#/media/${result.media}` }, result.title);
    title.addEventListener("click", (event) => {
      event.preventDefault();
      this.onOpenDetail(result.media);
    });
    const meta: string[] = [];
    const md = result.metadata;
    if (typeof md["media-type"] === "string") meta.push(md["media-type"] as string);
    if (typeof md["language"] === "string") meta.push(md["language"] as string);
    if (typeof md["publication-date"] === "string") {
      meta.push((md["publication-date"] as string).slice(0, 4));
    }
    if (typeof md["duration"] === "number") {
      meta.push(formatDuration(md["duration"] as number));
    }
    const card = el(
      "article",
      { class: "result", "data-media": result.media },
      title,
      el("div", { class: "result-meta" }, meta.join(" · ")),
    );
    if (result.snippet) {
      card.append(el("p", { class: "result-snippet" }, result.snippet));
    }
    if (result.matched_in !== "graph-only") {
      card.append(el("span", { class: "match-tag" }, "matched in transcript"));
    }
    return card;
  }

  private renderFacets(facets: Facet[]): void {
    clear(this.facetPanel);
    if (facets.length === 0) return;
    this.facetPanel.append(el("h3", {}, "Refine"));
    const groups = new Map<string, Facet[]>();
    for (const facet of facets) {
      const list = groups.get(facet.property) ?? [];
      list.push(facet);
      groups.set(facet.property, list);
    }
    for (const [property, group] of groups) {
      const body = el("div", { class: "facet-group", "data-property": property });
      body.append(el("h4", {}, property));
      for (const facet of group) {
        const button = el(
          "button",
          {
            class: "facet",
            "data-property": facet.property,
            "data-value": String(facet.value),
            "data-count": String(facet.count),
          },
          `${facet.value} (${facet.count})`,
        );
        button.addEventListener("click", () => this.addFacet(facet));
        body.append(button);
      }
      this.facetPanel.append(body);
    }
  }

  private renderPager(total: number): void {
    clear(this.pager);
    const pages = Math.max(1, Math.ceil(total / this.state.limit));
    const current = Math.floor(this.state.offset / this.state.limit) + 1;
    if (pages <= 1) return;
    const prev = el("button", { class: "pager-prev" }, "← previous");
    const next = el("button", { class: "pager-next" }, "next →");
    (prev as HTMLButtonElement).disabled = current <= 1;
    (next as HTMLButtonElement).disabled = current >= pages;
    prev.addEventListener("click", () => {
      this.state.offset = Math.max(0, this.state.offset - this.state.limit);
      void this.refresh();
    });
    next.addEventListener("click", () => {
      this.state.offset += this.state.limit;
      void this.refresh();
    });
    this.pager.append(prev, el("span", {}, ` page ${current} of ${pages} `), next);
  }
}
