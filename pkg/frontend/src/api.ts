/** Typed client for the gateway JSON API. Every request goes through this
 * module, so the request log is the single place to audit what the UI sent. */

export interface SearchResult {
  media: string;
  title: string;
  matched_in: "graph-only" | "text-only" | "both";
  metadata: Record<string, unknown>;
  score: number;
  snippet: string | null;
  timestamps: number[] | null;
}

export interface Facet {
  property: string;
  value: string | number;
  count: number;
}

export interface SearchResponse {
  results: SearchResult[];
  total: number;
  facets: Facet[];
  partial: boolean;
}

export interface TranscriptView {
  available: boolean;
  doc: string | null;
  language: string | null;
  excerpt: string | null;
  segments: { start: number | null; text: string }[];
  timestamps: number[];
}

export interface DetailView {
  id: string;
  title: string;
  labels: Record<string, string>;
  description: string | null;
  metadata: Record<string, unknown>;
  description_text: string | null;
  transcript: TranscriptView;
  revisions: { count: number; latest: { rev: number; actor: string; timestamp: string }[] };
}

export interface ImportReport {
  created: number;
  updated: number;
  skipped_duplicates: number;
  errors: [number, string][];
  warnings: string[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let code = "error";
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    if (body && typeof body.error === "string") code = body.error;
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(resp.status, code, detail);
}

export interface ImportRequest {
  dataset: Blob;
  filename: string;
  mapping: string;
  token: string;
  format?: "jsonl" | "csv";
  actor?: string;
}

/** Blob.text() with a FileReader fallback for DOM implementations that
 * predate it. */
function blobText(blob: Blob): Promise<string> {
  if (typeof blob.text === "function") return blob.text();
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result));
    reader.onerror = () => reject(reader.error);
    reader.readAsText(blob);
  });
}

export class GatewayClient {
  /** URLs of every issued request, for the reconstruction tests. */
  readonly requestLog: string[] = [];

  constructor(readonly baseUrl: string) {}

  private url(path: string, params?: URLSearchParams): string {
    const query = params && [...params].length ? `?${params.toString()}` : "";
    return `${this.baseUrl}${path}${query}`;
  }

  async search(params: URLSearchParams): Promise<SearchResponse> {
    const url = this.url("/search", params);
    this.requestLog.push(url);
    const resp = await fetch(url);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as SearchResponse;
  }

  async detail(id: string): Promise<DetailView> {
    const url = this.url(`/media/${encodeURIComponent(id)}`);
    this.requestLog.push(url);
    const resp = await fetch(url);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as DetailView;
  }

  async importDataset(req: ImportRequest): Promise<ImportReport> {
    const url = this.url("/import");
    this.requestLog.push(url);
    // Multipart body built by hand: DOM and Node fetch disagree about
    // FormData classes, and the format is trivial for two parts.
    const boundary = `mediahub-${Date.now().toString(36)}-${Math.random().toString(36).slice(2)}`;
    const dataset = await blobText(req.dataset);
    const parts = [
      `--${boundary}\r\nContent-Disposition: form-data; name="dataset"; ` +
        `filename="${req.filename.replace(/"/g, "")}"\r\n` +
        `Content-Type: application/octet-stream\r\n\r\n${dataset}\r\n`,
      `--${boundary}\r\nContent-Disposition: form-data; name="mapping"\r\n\r\n${req.mapping}\r\n`,
    ];
    if (req.format) {
      parts.push(
        `--${boundary}\r\nContent-Disposition: form-data; name="format"\r\n\r\n${req.format}\r\n`,
      );
    }
    if (req.actor) {
      parts.push(
        `--${boundary}\r\nContent-Disposition: form-data; name="actor"\r\n\r\n${req.actor}\r\n`,
      );
    }
    const body = new TextEncoder().encode(parts.join("") + `--${boundary}--\r\n`);
    const resp = await fetch(url, {
      method: "POST",
      headers: {
        Authorization: `Bearer ${req.token}`,
        "Content-Type": `multipart/form-data; boundary=${boundary}`,
      },
      body,
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as ImportReport;
  }

  async health(): Promise<{ status: string; items: number; documents: number }> {
    const resp = await fetch(this.url("/health"));
    if (!resp.ok) throw await parseError(resp);
    return await resp.json();
  }
}

/** The slice of the client the search page needs; test doubles implement this. */
export interface SearchClient {
  search(params: URLSearchParams): Promise<SearchResponse>;
}
