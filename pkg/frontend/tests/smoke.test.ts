/** End-to-end smoke: drives the real pages against a real, fixture-seeded
 * gateway spawned for the test run. */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { GatewayClient } from "../src/api.js";
import { DetailPage } from "../src/detail.js";
import { ImportPage } from "../src/import.js";
import { SearchPage } from "../src/search.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;
const TOKEN = "smoke-secret";

let server: ChildProcess;
let client: GatewayClient;

async function waitFor(
  predicate: () => boolean,
  timeoutMs = 8000,
  what = "condition",
): Promise<void> {
  const start = Date.now();
  while (!predicate()) {
    if (Date.now() - start > timeoutMs) throw new Error(`timed out waiting for ${what}`);
    await new Promise((r) => setTimeout(r, 25));
  }
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), "mediahub-smoke-"));
  const seeded = spawnSync(
    "python3",
    ["-m", "mediahub.cli", "seed", "--fixture", "--data-dir", dataDir],
    { encoding: "utf-8" },
  );
  if (seeded.status !== 0) throw new Error(`seed failed: ${seeded.stderr}`);
  server = spawn(
    "python3",
    [
      "-m", "mediahub.cli", "serve",
      "--addr", `127.0.0.1:${PORT}`,
      "--token", TOKEN,
      "--data-dir", dataDir,
    ],
    { stdio: "ignore" },
  );
  client = new GatewayClient(BASE);
  const start = Date.now();
  for (;;) {
    try {
      const health = await client.health();
      if (health.status === "ok") break;
    } catch {
      // not up yet
    }
    if (Date.now() - start > 30000) throw new Error("gateway did not come up");
    await new Promise((r) => setTimeout(r, 200));
  }
});

afterAll(() => {
  server?.kill("SIGTERM");
});

function mountSearch(onOpen: (id: string) => void = () => {}): {
  page: SearchPage;
  root: HTMLElement;
} {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.append(root);
  const page = new SearchPage(client, onOpen);
  page.mount(root);
  return { page, root };
}

function submitQuery(root: HTMLElement, text: string): void {
  const input = root.querySelector<HTMLInputElement>(".query-input")!;
  input.value = text;
  root.querySelector("form")!.dispatchEvent(new Event("submit", { cancelable: true }));
}

describe("smoke: search -> chip -> detail -> import against the seeded gateway", () => {
  it("reports the seeded corpus in /health", async () => {
    const health = await client.health();
    expect(health.items).toBe(6);
    expect(health.documents).toBe(2);
  });

  it("finds the 2023 fatty-liver video and narrows by year chip", async () => {
    const { root } = mountSearch();
    submitQuery(root, "fatty liver");
    await waitFor(() => root.querySelectorAll(".result").length > 0, 8000, "results");
    expect(root.querySelectorAll(".result")).toHaveLength(1);
    expect(root.querySelector(".result-title")!.textContent).toBe(
      "Fatty Liver Disease Explained",
    );
    const yearFacet = [...root.querySelectorAll<HTMLButtonElement>(".facet")].find(
      (b) => b.dataset.property === "publication-year" && b.dataset.value === "2023",
    );
    expect(yearFacet).toBeDefined();
    yearFacet!.click();
    await waitFor(() => root.querySelectorAll(".chip").length === 1, 8000, "chip");
    await waitFor(
      () => root.querySelector(".status")!.textContent!.includes("1 result"),
      8000,
      "narrowed count",
    );
    expect(root.querySelector(".chip")!.textContent).toContain("year: 2023");
  });

  it("facet chip counts equal the API's counts, and applying one matches", async () => {
    const { root } = mountSearch();
    submitQuery(root, "science");
    await waitFor(() => root.querySelectorAll(".result").length > 0, 8000, "results");
    const api = await client.search(
      new URLSearchParams([["q", "science"], ["offset", "0"], ["limit", "20"]]),
    );
    const buttons = [...root.querySelectorAll<HTMLButtonElement>(".facet")];
    expect(buttons.length).toBeGreaterThan(0);
    for (const button of buttons) {
      const fromApi = api.facets.find(
        (f) =>
          f.property === button.dataset.property &&
          String(f.value) === button.dataset.value,
      );
      expect(fromApi, `${button.dataset.property}=${button.dataset.value}`).toBeDefined();
      expect(Number(button.dataset.count)).toBe(fromApi!.count);
    }
    const langFacet = buttons.find(
      (b) => b.dataset.property === "language" && b.dataset.value === "en",
    )!;
    const promised = Number(langFacet.dataset.count);
    langFacet.click();
    await waitFor(
      () =>
        root.querySelector(".status")!.textContent!.startsWith(`${promised} result`),
      8000,
      "facet-consistent count",
    );
  });

  it("clicking a result opens its detail page; Q3 has no transcript", async () => {
    let openedId = "";
    const { root } = mountSearch((id) => (openedId = id));
    submitQuery(root, "fatty liver");
    await waitFor(() => root.querySelectorAll(".result").length > 0, 8000, "results");
    root.querySelector<HTMLAnchorElement>(".result-title")!.click();
    expect(openedId).toBe("Q3");

    const view = document.createElement("div");
    document.body.append(view);
    const detail = new DetailPage(client, () => ["fatty", "liver"]);
    await detail.show(view, openedId);
    expect(view.querySelector("h2")!.textContent).toBe("Fatty Liver Disease Explained");
    expect(view.querySelector(".detail-id")!.textContent).toContain("Q3");
    expect(view.querySelector(".no-transcript")).not.toBeNull();
  });

  it("shows the transcript with timestamp anchors for the climate video", async () => {
    const view = document.createElement("div");
    document.body.innerHTML = "";
    document.body.append(view);
    const detail = new DetailPage(client, () => ["klimakrise"]);
    await detail.show(view, "Q1");
    expect(view.querySelector(".no-transcript")).toBeNull();
    const segments = view.querySelectorAll(".transcript-segment");
    expect(segments.length).toBeGreaterThan(0);
    const anchors = view.querySelectorAll(".timestamp-anchor");
    expect(anchors.length).toBeGreaterThan(0);
    expect(anchors[0].textContent).toBe("[0:00]");
    expect(view.querySelectorAll("mark").length).toBeGreaterThan(0);
  });

  it("renders a not-found view for unknown ids", async () => {
    const view = document.createElement("div");
    document.body.innerHTML = "";
    document.body.append(view);
    const detail = new DetailPage(client, () => []);
    await detail.show(view, "Q999");
    expect(view.querySelector(".not-found")).not.toBeNull();
  });

  it("imports new records through the form and reports created=2", async () => {
    document.body.innerHTML = "";
    const root = document.createElement("div");
    document.body.append(root);
    const page = new ImportPage(client);
    page.mount(root);

    const rows =
      JSON.stringify({ title: "Gravitational Waves Primer", kind: "video", lang: "English", length: "30:00", released: "2024-03-03" }) +
      "\n" +
      JSON.stringify({ title: "Soil Ecology Roundtable", kind: "podcast", lang: "English", length: "55:00", released: "2024-05-05" }) +
      "\n";
    const file = new File([rows], "new-media.jsonl", { type: "application/x-ndjson" });
    root.querySelector<HTMLInputElement>(".token-input")!.value = TOKEN;
    const input = root.querySelector<HTMLInputElement>(".dataset-input")!;
    Object.defineProperty(input, "files", {
      value: { 0: file, length: 1, item: (i: number) => (i === 0 ? file : null) },
      configurable: true,
    });
    await page.submit();
    expect(root.querySelector(".report-created")!.textContent).toBe("2");
    expect(root.querySelector(".report-errors")!.textContent).toBe("0");

    const after = await client.health();
    expect(after.items).toBe(8);
  });

  it("rejects the import form with a bad token and renders the auth prompt", async () => {
    document.body.innerHTML = "";
    const root = document.createElement("div");
    document.body.append(root);
    const page = new ImportPage(client);
    page.mount(root);
    const file = new File(['{"title": "X"}\n'], "x.jsonl");
    root.querySelector<HTMLInputElement>(".token-input")!.value = "not-the-token";
    const input = root.querySelector<HTMLInputElement>(".dataset-input")!;
    Object.defineProperty(input, "files", {
      value: { 0: file, length: 1, item: (i: number) => (i === 0 ? file : null) },
      configurable: true,
    });
    await page.submit();
    expect(root.querySelector(".auth-prompt")).not.toBeNull();
  });
});
