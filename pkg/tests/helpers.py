"""Brute-force oracles the tests trust instead of the engine under test.

Everything here is written directly from the documented query semantics:
linear scans, no indexes, no shared code paths with the federator beyond the
tokenizer (which *defines* normalization).
"""

from __future__ import annotations

from mediahub.federator import MediaQuery
from mediahub.graph import FilterAtom, MediaGraph, Item, date_range, equals, quantity_range
from mediahub.schema import duration_bucket_bounds
from mediahub.textstore import TextStore, tokenize


def params_to_query(params: dict, limit: int = 100) -> MediaQuery:
    """Generated query descriptor -> engine query."""
    atoms = []
    if "lang" in params:
        atoms.append(equals("language", params["lang"]))
    if "topic" in params:
        atoms.append(equals("topic", params["topic"]))
    if "media_type" in params:
        atoms.append(equals("media-type", params["media_type"]))
    if "publisher" in params:
        atoms.append(equals("publisher-institution", params["publisher"]))
    if "year" in params:
        y = params["year"]
        atoms.append(date_range("publication-date", f"{y}-01-01", f"{y}-12-31"))
    if "bucket" in params:
        low, high = duration_bucket_bounds(params["bucket"])
        atoms.append(quantity_range("duration", low, high))
    return MediaQuery(free_text=params.get("tokens"), filters=atoms, limit=limit)


def atom_holds(graph: MediaGraph, item: Item, atom: FilterAtom) -> bool:
    """One filter atom, evaluated the slow and obvious way."""
    prop = graph.resolve_property(atom.property)
    if prop.label == "title":
        values = list(item.labels.values())
    else:
        values = [s.value for s in item.statements if s.property == prop.id]
    if atom.kind == "equals":
        return atom.value in values
    if atom.kind == "contains":
        return any(str(atom.value).casefold() in str(v).casefold() for v in values)
    if atom.kind == "date-range":
        return any(
            (atom.low is None or v >= atom.low) and (atom.high is None or v <= atom.high)
            for v in values
        )
    if atom.kind == "quantity-range":
        return any(
            (atom.low is None or v >= atom.low) and (atom.high is None or v <= atom.high)
            for v in values
        )
    raise AssertionError(f"unexpected atom kind {atom.kind}")


def brute_force_query(graph: MediaGraph, atoms: list[FilterAtom]) -> list[str]:
    """Ids of all live items satisfying every atom, ascending."""
    out = [
        item.id
        for item in graph.all_items()
        if all(atom_holds(graph, item, a) for a in atoms)
    ]
    return sorted(out, key=lambda i: int(i[1:]))


def naive_text_search(store: TextStore, terms: list[str]) -> list[str]:
    """Docs whose normalized token sequence contains every query token."""
    tokens = [tok for t in terms for tok in tokenize(t)]
    hits = []
    for doc_id, doc in store.docs.items():
        words = tokenize(doc.full_text())
        if all(tok in words for tok in tokens):
            hits.append(doc_id)
    return sorted(hits, key=lambda d: int(d[1:]))


def flat_table_search(
    graph: MediaGraph,
    store: TextStore,
    tokens: list[str] | None,
    atoms: list[FilterAtom],
) -> set[str]:
    """Single-pass scan over joined (item, document) rows.

    An item matches free text when some label or some of its documents
    carries every token; filters are then applied to the item metadata.
    """
    expected = set()
    for item in graph.all_items():
        if tokens:
            wanted = set(tokens)
            label_hit = any(wanted <= set(tokenize(l)) for l in item.labels.values())
            doc_words: set[str] = set()
            for doc in store.docs.values():
                if doc.media_ref == item.id:
                    doc_words |= set(tokenize(doc.full_text()))
            if not label_hit and not wanted <= doc_words:
                continue
        if all(atom_holds(graph, item, a) for a in atoms):
            expected.add(item.id)
    return expected


def item_content_signature(graph: MediaGraph, item: Item):
    """Item content, id-free, for order-insensitivity comparisons."""
    labels = tuple(sorted(item.labels.items()))
    statements = tuple(
        sorted(
            (graph.registry[s.property].label, repr(s.value)) for s in item.statements
        )
    )
    return labels, statements
