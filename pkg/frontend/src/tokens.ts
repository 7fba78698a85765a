/** Word tokens of the current query text, for transcript highlighting. */

export function tokenizeQuery(query: string): string[] {
  return (query.match(/[\p{L}\p{N}_]+/gu) ?? []).map((t) => t.toLowerCase());
}
