"""Federated search across the metadata graph and the full-text store.

A query fans out to both stores, merges and deduplicates the hits, fills
every result with the item's graph metadata regardless of which store
matched (the complement step), ranks deterministically, and derives exact
facet suggestions from the full filtered result set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import EmptyQueryError, StoresUnavailableError
from .graph import (
    FilterAtom,
    Item,
    MediaGraph,
    date_range,
    equals,
    item_number,
    quantity_range,
)
from .schema import (
    DURATION_BUCKETS,
    FACET_PROPERTIES,
    duration_bucket,
    duration_bucket_bounds,
)
from .textstore import TextHit, TextStore, tokenize

logger = logging.getLogger(__name__)

# Added to the score of results whose label exactly matches the query text.
# Far above any reachable tf-idf sum, so score-descending order always puts
# exact title matches first.
EXACT_TITLE_BONUS = 1.0e9

GRAPH_ONLY = "graph-only"
TEXT_ONLY = "text-only"
BOTH = "both"


@lru_cache(maxsize=65536)
def _label_tokens(label: str) -> tuple[str, ...]:
    # Keyed by label content, so the cache can never go stale.
    return tuple(tokenize(label))


@lru_cache(maxsize=65536)
def _label_token_set(label: str) -> frozenset[str]:
    return frozenset(_label_tokens(label))


@dataclass
class MediaQuery:
    free_text: list[str] | None = None
    filters: list[FilterAtom] = field(default_factory=list)
    offset: int = 0
    limit: int = 20
    browse_all: bool = False


@dataclass
class SearchResult:
    media: str
    title: str
    matched_in: str
    metadata: dict[str, object]
    score: float
    snippet: str | None = None
    timestamps: tuple[float, ...] | None = None


@dataclass(frozen=True)
class Facet:
    property: str
    value: object
    count: int


@dataclass
class SearchResponse:
    results: list[SearchResult]
    total: int
    facets: list[Facet]
    partial: bool = False


class Federator:
    """Stateless query engine over a graph store and a text store."""

    def __init__(self, graph: MediaGraph, textstore: TextStore):
        self.graph = graph
        self.textstore = textstore

    # ------------------------------------------------------------------
    # Metadata projection

    def display_title(self, item: Item) -> str:
        """Label in the item's own language when present, else first label."""
        lang_prop = self.graph.resolve_property("language")
        for lang in item.values_of(lang_prop.id):
            if lang in item.labels:
                return item.labels[lang]
        return item.labels[min(item.labels)]

    def core_metadata(self, item: Item) -> dict[str, object]:
        """Projection of an item onto the core schema, keyed by property
        label; multi-valued properties map to value lists."""
        out: dict[str, object] = {"title": self.display_title(item)}
        for stmt in item.statements:
            prop = self.graph.registry[stmt.property]
            if prop.multi_valued:
                out.setdefault(prop.label, [])
                out[prop.label].append(stmt.value)
            else:
                out[prop.label] = stmt.value
        return out

    # ------------------------------------------------------------------
    # Search

    def federated_search(self, q: MediaQuery) -> SearchResponse:
        has_text = bool(q.free_text) and any(tokenize(t) for t in q.free_text)
        if not has_text and not q.filters and not q.browse_all:
            raise EmptyQueryError("query needs free text, filters, or browse-all")
        self.graph.validate_filters(q.filters)
        if q.offset < 0 or q.limit < 1:
            raise ValueError("offset must be >= 0 and limit >= 1")

        partial = False
        doc_scores: dict[str, float] = {}
        graph_ids: set[str] | None = None
        if has_text:
            tokens: list[str] = []
            for term in q.free_text:
                tokens.extend(tokenize(term))
            tokens = list(dict.fromkeys(tokens))
            text_ok = graph_ok = True
            try:
                doc_scores = self.textstore.match_scores(tokens)
            except Exception:
                logger.exception("text store failed; answering from graph only")
                text_ok, partial = False, True
            try:
                graph_ids = self._label_matches(tokens)
            except Exception:
                logger.exception("graph store failed; answering from text only")
                graph_ok, partial = False, True
                graph_ids = set()
            if not text_ok and not graph_ok:
                raise StoresUnavailableError("both stores failed")
        else:
            # Browse: every live item is a candidate, matched via metadata.
            graph_ids = {item.id for item in self.graph.all_items()}

        # Fold document scores into per-item totals, remembering the best
        # document for snippet extraction; unresolvable hits are dropped.
        item_text_score: dict[str, float] = {}
        best_doc: dict[str, tuple[float, int, str]] = {}
        for doc_id, score in doc_scores.items():
            media_ref = self.textstore.docs[doc_id].media_ref
            if not self.graph.has_item(media_ref):
                logger.warning("dropping text hit for unknown item %s", media_ref)
                partial = True
                continue
            item_text_score[media_ref] = item_text_score.get(media_ref, 0.0) + score
            key = (-score, int(doc_id[1:]), doc_id)
            if media_ref not in best_doc or key < best_doc[media_ref]:
                best_doc[media_ref] = key

        candidate_ids = set(graph_ids or set()) | set(item_text_score)
        matched: list[Item] = []
        for item_id in sorted(candidate_ids, key=item_number):
            item = self.graph.items[item_id]
            if item.deleted:
                continue
            if self.graph.item_matches(item, q.filters):
                matched.append(item)

        facets = self.suggest_filters(matched)

        query_tokens = tuple(tokens) if has_text else None
        ranked: list[tuple[float, int, Item]] = []
        for item in matched:
            score = item_text_score.get(item.id, 0.0)
            if query_tokens and self._exact_label_match(item, query_tokens):
                score += EXACT_TITLE_BONUS
            ranked.append((-score, item_number(item.id), item))
        ranked.sort(key=lambda t: (t[0], t[1]))

        page = ranked[q.offset : q.offset + q.limit]
        results = []
        for neg_score, _, item in page:
            in_graph = (not has_text) or (graph_ids is not None and item.id in graph_ids)
            hit = None
            if item.id in best_doc:
                neg_doc_score, _, doc_id = best_doc[item.id]
                hit = self.textstore.build_hit(doc_id, list(query_tokens), -neg_doc_score)
            results.append(
                self._build_result(item, hit, in_graph=in_graph, score=-neg_score)
            )
        return SearchResponse(
            results=results, total=len(matched), facets=facets, partial=partial
        )

    def _label_matches(self, tokens: list[str]) -> set[str]:
        """Items with some label containing every query token."""
        token_set = set(tokens)
        out = set()
        for item in self.graph.all_items():
            for label in item.labels.values():
                if token_set <= _label_token_set(label):
                    out.add(item.id)
                    break
        return out

    @staticmethod
    def _exact_label_match(item: Item, query_tokens: tuple[str, ...]) -> bool:
        return any(
            _label_tokens(label) == query_tokens for label in item.labels.values()
        )

    def _build_result(
        self, item: Item, best: TextHit | None, in_graph: bool, score: float
    ) -> SearchResult:
        if best and in_graph:
            matched_in = BOTH
        elif best:
            matched_in = TEXT_ONLY
        else:
            matched_in = GRAPH_ONLY
        return SearchResult(
            media=item.id,
            title=self.display_title(item),
            matched_in=matched_in,
            metadata=self.core_metadata(item),
            score=score,
            snippet=best.snippet if best else None,
            timestamps=best.timestamps if best else None,
        )

    # ------------------------------------------------------------------
    # Complementing

    def complement(
        self, graph_hits: set[str], text_hits: list[TextHit]
    ) -> tuple[list[SearchResult], bool]:
        """Union the two stores' hits keyed by item id.

        Text-only results gain full graph metadata; graph-only results get no
        snippet. Unresolvable text hits are logged and dropped, flagging the
        response as partial. Results come back in ascending item order.
        """
        partial = False
        hits_by_item: dict[str, list[TextHit]] = {}
        for hit in text_hits:
            if not self.graph.has_item(hit.media_ref):
                logger.warning("dropping text hit for unknown item %s", hit.media_ref)
                partial = True
                continue
            hits_by_item.setdefault(hit.media_ref, []).append(hit)
        all_ids = sorted(set(graph_hits) | set(hits_by_item), key=item_number)
        results = []
        for item_id in all_ids:
            item = self.graph.get_item(item_id)
            hits = hits_by_item.get(item_id, [])
            score = sum(h.score for h in hits)
            best = min(hits, key=lambda h: (-h.score, int(h.doc[1:]))) if hits else None
            results.append(
                self._build_result(item, best, in_graph=item_id in graph_hits, score=score)
            )
        return results, partial

    # ------------------------------------------------------------------
    # Ranking

    @staticmethod
    def rank(results: list[SearchResult]) -> list[SearchResult]:
        """Deterministic order: score descending, then item id ascending."""
        return sorted(results, key=lambda r: (-r.score, item_number(r.media)))

    # ------------------------------------------------------------------
    # Facets

    def suggest_filters(self, results: list[Item]) -> list[Facet]:
        """Exact facet counts over the full filtered result set.

        Per facet property the top values are kept (count descending, value
        ascending), at most ten each.
        """
        if not results:
            return []
        counters: dict[str, dict[object, int]] = {name: {} for name in FACET_PROPERTIES}
        for item in results:
            seen: dict[str, set[object]] = {name: set() for name in FACET_PROPERTIES}
            for stmt in item.statements:
                prop = self.graph.registry[stmt.property]
                if prop.label in ("language", "topic", "media-type", "publisher-institution"):
                    seen[prop.label].add(stmt.value)
                elif prop.label == "publication-date":
                    seen["publication-year"].add(int(str(stmt.value)[:4]))
                elif prop.label == "duration":
                    seen["duration-bucket"].add(duration_bucket(stmt.value))
            for name, values in seen.items():
                for value in values:
                    counters[name][value] = counters[name].get(value, 0) + 1

        facets: list[Facet] = []
        for name in FACET_PROPERTIES:
            values = counters[name]
            if name == "duration-bucket":
                order = {label: i for i, (label, _, _) in enumerate(DURATION_BUCKETS)}
                ranked = sorted(values.items(), key=lambda kv: (-kv[1], order[kv[0]]))
            else:
                ranked = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
            facets.extend(Facet(name, value, count) for value, count in ranked[:10])
        return facets

    def facet_atom(self, facet: Facet) -> FilterAtom:
        """The filter atom that re-selects exactly the facet's results."""
        if facet.property == "publication-year":
            year = int(facet.value)
            return date_range("publication-date", f"{year:04d}-01-01", f"{year:04d}-12-31")
        if facet.property == "duration-bucket":
            low, high = duration_bucket_bounds(str(facet.value))
            return quantity_range("duration", low, high)
        return equals(facet.property, facet.value)
