/** Hash router wiring the three pages to one gateway client. The gateway
 * origin comes from `?api=` or defaults to the page origin. */

import { GatewayClient } from "./api.js";
import { clear, el } from "./dom.js";
import { DetailPage } from "./detail.js";
import { ImportPage } from "./import.js";
import { SearchPage } from "./search.js";
import { tokenizeQuery } from "./tokens.js";

export function apiBaseUrl(): string {
  const override = new URLSearchParams(window.location.search).get("api");
  return (override ?? window.location.origin).replace(/\/$/, "");
}

export class App {
  private readonly client: GatewayClient;
  private readonly search: SearchPage;
  private readonly detail: DetailPage;
  private readonly importPage: ImportPage;
  private searchView!: HTMLElement;
  private detailView!: HTMLElement;
  private importView!: HTMLElement;

  constructor(private readonly root: HTMLElement, client?: GatewayClient) {
    this.client = client ?? new GatewayClient(apiBaseUrl());
    this.search = new SearchPage(this.client, (id) => {
      window.location.hash = `#/media/${id}`;
    });
    this.detail = new DetailPage(this.client, () =>
      tokenizeQuery(this.search.state.query),
    );
    this.importPage = new ImportPage(this.client);
  }

  start(): void {
    clear(this.root);
    const nav = el("nav", { class: "top-nav" },
      el("a", { href: "#/" }, "Search"),
      " · ",
      el("a", { href: "#/import" }, "Import"));
    this.searchView = el("main", { class: "view view-search" });
    this.detailView = el("main", { class: "view view-detail" });
    this.importView = el("main", { class: "view view-import" });
    this.root.append(nav, this.searchView, this.detailView, this.importView);
    this.search.mount(this.searchView);
    this.importPage.mount(this.importView);
    window.addEventListener("hashchange", () => void this.route());
    void this.route();
  }

  async route(): Promise<void> {
    const hash = window.location.hash;
    const media = hash.match(/^#\/media\/([^/?]+)/);
    this.searchView.style.display = "none";
    this.detailView.style.display = "none";
    this.importView.style.display = "none";
    if (media) {
      this.detailView.style.display = "";
      await this.detail.show(this.detailView, decodeURIComponent(media[1]));
    } else if (hash.startsWith("#/import")) {
      this.importView.style.display = "";
    } else {
      this.searchView.style.display = "";
    }
  }
}

export function main(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  new App(root).start();
}
