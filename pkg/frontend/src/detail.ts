/** Media detail page: core metadata (identifier included here, and only
 * here), series information, description, and the transcript excerpt with
 * timestamp anchors and search-term highlighting. */

import { ApiError, DetailView } from "./api.js";
import { clear, el, formatDuration, highlight } from "./dom.js";

export interface DetailClient {
  detail(id: string): Promise<DetailView>;
}

const METADATA_ROWS: [string, string][] = [
  ["media-type", "Type"],
  ["language", "Language"],
  ["publication-date", "Published"],
  ["duration", "Duration"],
  ["creator", "Creator"],
  ["publisher-institution", "Publisher"],
  ["platform", "Platform"],
  ["license", "License"],
  ["topic", "Topics"],
  ["keyword", "Keywords"],
];

export class DetailPage {
  constructor(
    private readonly client: DetailClient,
    private readonly highlightTokens: () => string[],
  ) {}

  async show(container: HTMLElement, id: string): Promise<void> {
    clear(container);
    let view: DetailView;
    try {
      view = await this.client.detail(id);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        container.append(
          el("section", { class: "not-found" },
            el("h2", {}, "Not found"),
            el("p", {}, `There is no media item ${id} in this library.`),
            el("a", { href: "#/" }, "Back to search")),
        );
        return;
      }
      container.append(
        el("div", { class: "offline-banner" },
          "The library is unreachable right now — check the gateway and retry."),
      );
      return;
    }
    container.append(this.render(view));
  }

  private render(view: DetailView): HTMLElement {
    const section = el("section", { class: "detail" });
    section.append(el("a", { href: "#/", class: "back-link" }, "← back to search"));
    section.append(el("h2", {}, view.title));
    section.append(el("div", { class: "detail-id" }, `Identifier: ${view.id}`));
    if (view.description) {
      section.append(el("p", { class: "detail-blurb" }, view.description));
    }

    const table = el("table", { class: "detail-metadata" });
    for (const [key, label] of METADATA_ROWS) {
      const value = view.metadata[key];
      if (value === undefined || value === null) continue;
      const text =
        key === "duration" && typeof value === "number"
          ? formatDuration(value)
          : Array.isArray(value)
            ? value.join(", ")
            : String(value);
      table.append(el("tr", {}, el("th", {}, label), el("td", {}, text)));
    }
    section.append(table);

    const series = view.metadata["series"];
    if (typeof series === "string") {
      const position = view.metadata["series-position"];
      section.append(
        el("div", { class: "series-info" },
          `Part of series: ${series}` +
            (typeof position === "number" ? ` (episode ${position})` : "")),
      );
    }

    if (view.description_text) {
      section.append(
        el("section", { class: "description-text" },
          el("h3", {}, "Description"),
          el("p", {}, view.description_text)),
      );
    }

    section.append(this.renderTranscript(view));
    section.append(
      el("div", { class: "revision-summary" },
        `${view.revisions.count} revision${view.revisions.count === 1 ? "" : "s"} on record`),
    );
    return section;
  }

  private renderTranscript(view: DetailView): HTMLElement {
    const block = el("section", { class: "transcript" }, el("h3", {}, "Transcript"));
    if (!view.transcript.available) {
      block.append(
        el("p", { class: "no-transcript" }, "No transcript available for this item."),
      );
      return block;
    }
    const tokens = this.highlightTokens();
    for (const segment of view.transcript.segments) {
      const row = el("p", { class: "transcript-segment" });
      if (segment.start !== null) {
        row.append(
          el("a", {
            class: "timestamp-anchor",
            href: `#t=${segment.start}`,
            "data-start": String(segment.start),
          }, `[${formatDuration(segment.start)}]`),
          " ",
        );
      }
      row.append(highlight(segment.text, tokens));
      block.append(row);
    }
    block.append(
      el("p", { class: "transcript-note" },
        "Full transcript stored — excerpt shown above."),
    );
    return block;
  }
}
