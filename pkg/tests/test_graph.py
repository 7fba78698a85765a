from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mediahub.errors import (
    CorruptSnapshotError,
    EmptyLabelsError,
    InvalidFilterError,
    SchemaViolationError,
    UnknownItemError,
)
from mediahub.graph import (
    MediaGraph,
    contains,
    date_range,
    equals,
    quantity_range,
)
from mediahub.seed import FIXTURE_ITEMS

from .helpers import brute_force_query

ACTOR = "tester"


def seed_items_only(graph: MediaGraph) -> list[str]:
    return [
        graph.create_item(dict(labels), list(statements), ACTOR)
        for labels, statements in FIXTURE_ITEMS
    ]


# ----------------------------------------------------------------------
# create_item


def test_sequential_id_allocation(graph):
    first = graph.create_item({"en": "First"}, [], ACTOR)
    second = graph.create_item({"en": "Second"}, [], ACTOR)
    assert (first, second) == ("Q1", "Q2")


def test_negative_quantity_rejected(graph):
    with pytest.raises(SchemaViolationError):
        graph.create_item({"en": "X"}, [("duration", -5)], ACTOR)


def test_fixture_replay_ids_and_revision_log(graph):
    ids = seed_items_only(graph)
    assert ids == [f"Q{i}" for i in range(1, 7)]
    assert len(graph.revisions) == 6
    assert [r.rev for r in graph.revisions] == list(range(1, 7))


def test_empty_labels_rejected(graph):
    with pytest.raises(EmptyLabelsError):
        graph.create_item({}, [], ACTOR)


def test_unknown_property_rejected(graph):
    with pytest.raises(SchemaViolationError):
        graph.create_item({"en": "X"}, [("no-such-prop", "v")], ACTOR)


def test_datatype_mismatch_rejected(graph):
    with pytest.raises(SchemaViolationError):
        graph.create_item({"en": "X"}, [("duration", "long")], ACTOR)
    with pytest.raises(SchemaViolationError):
        graph.create_item({"en": "X"}, [("publication-date", "2023-02-30")], ACTOR)
    with pytest.raises(SchemaViolationError):
        graph.create_item({"en": "X"}, [("media-type", "livestream")], ACTOR)


def test_single_valued_duplicate_in_draft_rejected(graph):
    with pytest.raises(SchemaViolationError):
        graph.create_item({"en": "X"}, [("duration", 10), ("duration", 20)], ACTOR)


def test_empty_actor_rejected(graph):
    with pytest.raises(ValueError):
        graph.create_item({"en": "X"}, [], "")


# ----------------------------------------------------------------------
# upsert_statement


def test_idempotent_upsert_appends_revision_but_not_state(graph):
    qid = graph.create_item({"en": "X"}, [], ACTOR)
    graph.upsert_statement(qid, "language", "de", ACTOR)
    before = graph.get_item(qid).statements[:]
    rev = graph.upsert_statement(qid, "language", "de", ACTOR)
    assert graph.get_item(qid).statements == before
    assert graph.revisions[-1].rev == rev  # revision recorded anyway


def test_single_valued_replacement(graph):
    qid = graph.create_item({"en": "X"}, [], ACTOR)
    graph.upsert_statement(qid, "duration", 900, ACTOR)
    graph.upsert_statement(qid, "duration", 901, ACTOR)
    duration = graph.resolve_property("duration")
    assert graph.get_item(qid).values_of(duration.id) == [901]


def test_multi_valued_append(graph):
    qid = graph.create_item({"en": "X"}, [], ACTOR)
    graph.upsert_statement(qid, "topic", "history", ACTOR)
    graph.upsert_statement(qid, "topic", "medicine", ACTOR)
    topic = graph.resolve_property("topic")
    assert graph.get_item(qid).values_of(topic.id) == ["history", "medicine"]


def test_upsert_unknown_item(graph):
    with pytest.raises(UnknownItemError):
        graph.upsert_statement("Q99", "language", "en", ACTOR)


# ----------------------------------------------------------------------
# get_item


def test_get_item_fixture_values(graph):
    seed_items_only(graph)
    item = graph.get_item("Q3")
    assert item.labels["en"] == "Fatty Liver Disease Explained"
    date_prop = graph.resolve_property("publication-date")
    assert item.values_of(date_prop.id) == ["2023-02-14"]


def test_get_item_unknown(graph):
    seed_items_only(graph)
    with pytest.raises(UnknownItemError):
        graph.get_item("Q999")


def test_read_your_writes(graph):
    qid = graph.create_item({"en": "X"}, [], ACTOR)
    graph.upsert_statement(qid, "language", "fr", ACTOR)
    lang = graph.resolve_property("language")
    assert graph.get_item(qid).values_of(lang.id) == ["fr"]


# ----------------------------------------------------------------------
# query_items


def test_query_language_en(graph):
    seed_items_only(graph)
    page = graph.query_items([equals("language", "en")])
    assert page.ids == ["Q2", "Q3", "Q4", "Q5"]
    assert page.total == 4


def test_query_compound_filter(graph):
    seed_items_only(graph)
    atoms = [
        contains("topic", "computer science"),
        quantity_range("duration", min_=3601),
        date_range("publication-date", "2013-01-01", "2014-12-31"),
    ]
    page = graph.query_items(atoms)
    assert page.ids == ["Q4"]
    assert page.ids == brute_force_query(graph, atoms)


def test_query_empty_filterset_returns_all(graph):
    seed_items_only(graph)
    page = graph.query_items([])
    assert page.ids == [f"Q{i}" for i in range(1, 7)]


def test_invalid_filters(graph):
    seed_items_only(graph)
    with pytest.raises(InvalidFilterError):
        graph.query_items([equals("no-such", "x")])
    with pytest.raises(InvalidFilterError):
        graph.query_items([date_range("publication-date", "2024-01-01", "2023-01-01")])
    with pytest.raises(InvalidFilterError):
        graph.query_items([date_range("duration", "2023-01-01", None)])
    with pytest.raises(InvalidFilterError):
        graph.query_items([quantity_range("publication-date", 0, 10)])


def test_pagination_concatenation(graph):
    seed_items_only(graph)
    full = graph.query_items([])
    paged = []
    offset = 0
    while offset < full.total:
        page = graph.query_items([], offset=offset, limit=2)
        paged.extend(page.ids)
        offset += 2
    assert paged == full.ids


def test_soft_delete_hides_from_queries(graph):
    ids = seed_items_only(graph)
    graph.delete_item("Q3", ACTOR)
    page = graph.query_items([])
    assert "Q3" not in page.ids
    # id not reused: next create continues the sequence
    assert graph.create_item({"en": "New"}, [], ACTOR) == "Q7"
    # history still replayable
    assert graph.get_item("Q3").deleted
    assert len(ids) == 6


# ----------------------------------------------------------------------
# Properties

_topics = st.sampled_from(["physics", "history", "ecology", "medicine"])
_langs = st.sampled_from(["en", "de", "fr"])
_titles = st.text(
    alphabet="abcdefg ", min_size=1, max_size=12
).filter(lambda s: s.strip())
_dates = st.dates().map(lambda d: d.isoformat())


@st.composite
def drafts(draw):
    lang = draw(_langs)
    statements = [("language", lang)]
    if draw(st.booleans()):
        statements.append(("duration", draw(st.integers(0, 7200))))
    if draw(st.booleans()):
        statements.append(("publication-date", draw(_dates)))
    for topic in draw(st.lists(_topics, unique=True, max_size=2)):
        statements.append(("topic", topic))
    return {lang: draw(_titles)}, statements


@st.composite
def filter_atoms(draw):
    kind = draw(st.sampled_from(["equals-lang", "equals-topic", "contains", "dates", "quantity"]))
    if kind == "equals-lang":
        return equals("language", draw(_langs))
    if kind == "equals-topic":
        return equals("topic", draw(_topics))
    if kind == "contains":
        return contains("title", draw(st.text(alphabet="abcdefg", min_size=1, max_size=3)))
    if kind == "dates":
        a, b = sorted([draw(_dates), draw(_dates)])
        return date_range("publication-date", a, b)
    low, high = sorted([draw(st.integers(0, 7200)), draw(st.integers(0, 7200))])
    return quantity_range("duration", low, high)


@settings(max_examples=60, deadline=None)
@given(st.lists(drafts(), max_size=15), st.lists(filter_atoms(), max_size=3))
def test_query_matches_brute_force(items, atoms):
    graph = MediaGraph()
    for labels, statements in items:
        graph.create_item(labels, statements, ACTOR)
    page = graph.query_items(atoms)
    assert page.ids == brute_force_query(graph, atoms)


@settings(max_examples=50, deadline=None)
@given(st.lists(drafts(), max_size=12), st.lists(filter_atoms(), min_size=1, max_size=3))
def test_adding_atom_never_grows_results(items, atoms):
    graph = MediaGraph()
    for labels, statements in items:
        graph.create_item(labels, statements, ACTOR)
    totals = [graph.query_items(atoms[:i]).total for i in range(len(atoms) + 1)]
    assert all(a >= b for a, b in zip(totals, totals[1:]))


@settings(max_examples=30, deadline=None)
@given(st.lists(drafts(), min_size=1, max_size=10), st.data())
def test_revision_numbers_gap_free(items, data):
    graph = MediaGraph()
    ids = [graph.create_item(labels, stmts, ACTOR) for labels, stmts in items]
    for _ in range(data.draw(st.integers(0, 5))):
        qid = data.draw(st.sampled_from(ids))
        graph.upsert_statement(qid, "topic", data.draw(_topics), ACTOR)
    revs = [r.rev for r in graph.revisions]
    assert revs == list(range(1, len(revs) + 1))


@settings(max_examples=30, deadline=None)
@given(st.lists(drafts(), max_size=10))
def test_snapshot_roundtrip_identity(tmp_path_factory, items):
    graph = MediaGraph()
    for labels, statements in items:
        graph.create_item(labels, statements, ACTOR)
    path = tmp_path_factory.mktemp("snap") / "graph.jsonl"
    graph.snapshot(path)
    loaded = MediaGraph.load(path)
    assert loaded.items == graph.items
    assert loaded.registry == graph.registry
    assert loaded.revisions == graph.revisions
    assert loaded.next_item_number == graph.next_item_number
    assert loaded.next_rev_number == graph.next_rev_number
    assert loaded.digest() == graph.digest()


# ----------------------------------------------------------------------
# Snapshots


def test_snapshot_empty_store_roundtrip(tmp_path):
    graph = MediaGraph()
    path = tmp_path / "empty.jsonl"
    graph.snapshot(path)
    loaded = MediaGraph.load(path)
    assert loaded.items == {}
    assert loaded.create_item({"en": "First"}, [], ACTOR) == "Q1"


def test_truncated_snapshot_detected(graph, tmp_path):
    seed_items_only(graph)
    path = tmp_path / "graph.jsonl"
    graph.snapshot(path)
    blob = path.read_bytes()
    for cut in (0, 1, len(blob) // 2, len(blob) - 1):
        path.write_bytes(blob[:cut])
        with pytest.raises(CorruptSnapshotError):
            MediaGraph.load(path)


def test_tampered_snapshot_detected(graph, tmp_path):
    seed_items_only(graph)
    path = tmp_path / "graph.jsonl"
    graph.snapshot(path)
    text = path.read_text(encoding="utf-8")
    path.write_text(text.replace("Fatty", "Salty"), encoding="utf-8")
    with pytest.raises(CorruptSnapshotError):
        MediaGraph.load(path)
