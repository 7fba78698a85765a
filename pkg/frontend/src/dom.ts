/** Tiny DOM construction helper; children are appended, strings become
 * text nodes (never innerHTML, so API text can't inject markup). */

export type Child = Node | string | null | undefined;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    if (child === null || child === undefined) continue;
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

/** Text with the given tokens wrapped in <mark>, built from text nodes. */
export function highlight(text: string, tokens: string[]): DocumentFragment {
  const fragment = document.createDocumentFragment();
  const cleaned = tokens.map((t) => t.trim()).filter((t) => t.length > 0);
  if (cleaned.length === 0) {
    fragment.append(text);
    return fragment;
  }
  const pattern = new RegExp(
    `(${cleaned.map((t) => t.replace(/[.*+?^${}()|[\]\\]/g, "\\$&")).join("|")})`,
    "giu",
  );
  let last = 0;
  for (const match of text.matchAll(pattern)) {
    const at = match.index ?? 0;
    if (at > last) fragment.append(text.slice(last, at));
    const mark = document.createElement("mark");
    mark.textContent = match[0];
    fragment.append(mark);
    last = at + match[0].length;
  }
  if (last < text.length) fragment.append(text.slice(last));
  return fragment;
}

export function formatDuration(seconds: number): string {
  const total = Math.max(0, Math.floor(seconds));
  const h = Math.floor(total / 3600);
  const m = Math.floor((total % 3600) / 60);
  const s = total % 60;
  return h > 0
    ? `${h}:${String(m).padStart(2, "0")}:${String(s).padStart(2, "0")}`
    : `${m}:${String(s).padStart(2, "0")}`;
}
