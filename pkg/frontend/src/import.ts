/** Bulk import page: dataset file plus mapping JSON plus the write token.
 * The one mutating surface in the UI; everything else stays view-only. */

import { ApiError, ImportReport } from "./api.js";
import { clear, el } from "./dom.js";

export interface ImportClient {
  importDataset(req: {
    dataset: Blob;
    filename: string;
    mapping: string;
    token: string;
  }): Promise<ImportReport>;
}

const DEFAULT_MAPPING = JSON.stringify(
  {
    rules: [
      { source: "title", target: "title" },
      { source: "kind", target: "media-type" },
      { source: "lang", target: "language", transform: "to-language-code" },
      { source: "length", target: "duration", transform: "to-duration-seconds" },
      { source: "released", target: "publication-date", transform: "to-iso-date" },
      { source: "subjects", target: "topic", transform: "split-list", delimiter: ";" },
    ],
  },
  null,
  2,
);

export class ImportPage {
  private tokenInput!: HTMLInputElement;
  private fileInput!: HTMLInputElement;
  private mappingArea!: HTMLTextAreaElement;
  private output!: HTMLElement;

  constructor(private readonly client: ImportClient) {}

  mount(container: HTMLElement): void {
    clear(container);
    this.tokenInput = el("input", {
      type: "password",
      class: "token-input",
      placeholder: "write token",
      "aria-label": "write token",
    });
    this.fileInput = el("input", { type: "file", class: "dataset-input", "aria-label": "dataset file" });
    this.mappingArea = el("textarea", { class: "mapping-input", rows: "12", "aria-label": "mapping config" });
    this.mappingArea.value = DEFAULT_MAPPING;
    this.output = el("div", { class: "import-output" });

    const form = el("form", { class: "import-form" },
      el("h2", {}, "Bulk import"),
      el("p", {}, "Upload a JSON-lines or CSV dataset with a field mapping. Requires the write token."),
      el("label", {}, "Write token ", this.tokenInput),
      el("label", {}, "Dataset file ", this.fileInput),
      el("label", {}, "Mapping ", this.mappingArea),
      el("button", { type: "submit" }, "Import"));
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
    container.append(form, this.output);
  }

  async submit(): Promise<void> {
    clear(this.output);
    const token = this.tokenInput.value.trim();
    if (!token) {
      this.renderAuthPrompt("A write token is required to import.");
      return;
    }
    const file = this.fileInput.files?.[0];
    if (!file) {
      this.output.append(el("p", { class: "inline-error" }, "Choose a dataset file first."));
      return;
    }
    let report: ImportReport;
    try {
      report = await this.client.importDataset({
        dataset: file,
        filename: file.name,
        mapping: this.mappingArea.value,
        token,
      });
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        this.renderAuthPrompt("The gateway rejected this token — enter a valid write token.");
      } else if (err instanceof ApiError && err.status === 422) {
        this.output.append(
          el("div", { class: "mapping-error" },
            el("h3", {}, "Mapping problem"),
            el("p", {}, err.detail)),
        );
      } else {
        this.output.append(
          el("div", { class: "offline-banner" },
            "The library is unreachable right now — check the gateway and retry."),
        );
      }
      return;
    }
    this.renderReport(report);
  }

  private renderAuthPrompt(message: string): void {
    this.output.append(
      el("div", { class: "auth-prompt" }, el("h3", {}, "Authorization needed"), el("p", {}, message)),
    );
  }

  private renderReport(report: ImportReport): void {
    const table = el("table", { class: "import-report" },
      el("tr", {}, el("th", {}, "created"), el("td", { class: "report-created" }, String(report.created))),
      el("tr", {}, el("th", {}, "updated"), el("td", { class: "report-updated" }, String(report.updated))),
      el("tr", {}, el("th", {}, "skipped"), el("td", { class: "report-skipped" }, String(report.skipped_duplicates))),
      el("tr", {}, el("th", {}, "errors"), el("td", { class: "report-errors" }, String(report.errors.length))));
    this.output.append(el("h3", {}, "Import report"), table);
    if (report.errors.length > 0) {
      const list = el("ul", { class: "error-list" });
      for (const [line, reason] of report.errors.slice(0, 20)) {
        list.append(el("li", {}, `line ${line}: ${reason}`));
      }
      this.output.append(list);
    }
  }
}
