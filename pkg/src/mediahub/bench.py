"""Benchmark harness: replays the five reference search tasks as API calls.

Expected answer sets come from an independent flat-table scan over the two
stores, so the harness never trusts the engine under test. A task fails when
the API result set differs from the scan, when the scan itself comes up
empty (nothing planted to find), or when an optional latency budget is
exceeded.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .graph import MediaGraph, item_number
from .seed import PLANTED_TITLE
from .textstore import TextStore, tokenize

logger = logging.getLogger(__name__)

PAGE_LIMIT = 100


@dataclass(frozen=True)
class BenchTask:
    name: str
    params: dict[str, str]
    # item id that must be ranked first, resolved lazily by title
    first_title: str | None = None


@dataclass
class TaskResult:
    name: str
    passed: bool
    wall_ms: float
    expected: int
    actual: int
    detail: str = ""


@dataclass
class BenchReport:
    tasks: list[TaskResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.tasks) and all(t.passed for t in self.tasks)

    def lines(self) -> list[str]:
        out = []
        for t in self.tasks:
            status = "PASS" if t.passed else "FAIL"
            line = (
                f"[{status}] {t.name}: expected {t.expected}, got {t.actual},"
                f" {t.wall_ms:.1f} ms"
            )
            if t.detail:
                line += f" ({t.detail})"
            out.append(line)
        return out


def bench_tasks(kind: str) -> list[BenchTask]:
    if kind == "fixture":
        title = "Introduction to Computer Science"
        fatty_after = "2023-01-01"
    elif kind == "synthetic":
        title = PLANTED_TITLE
        fatty_after = "2023-01-01"
    else:
        raise ValueError(f"unknown corpus kind: {kind!r}")
    return [
        BenchTask("find-by-title", {"q": title}, first_title=title),
        BenchTask(
            "topic-and-publisher",
            {"topic": "history", "publisher": "University of Göttingen"},
        ),
        BenchTask("text-after-date", {"q": "fatty liver", "after": fatty_after}),
        BenchTask(
            "topic-duration-years",
            {
                "topic": "computer science",
                "minSeconds": "3601",
                "after": "2013-01-01",
                "before": "2014-12-31",
            },
        ),
        BenchTask("browse-language", {"lang": "en"}),
    ]


# ----------------------------------------------------------------------
# Flat-table oracle


def flat_table_expected(
    graph: MediaGraph, textstore: TextStore, params: dict[str, str]
) -> set[str]:
    """Single-pass scan over joined (item, document) rows mirroring the
    public query semantics."""
    tokens = tokenize(params["q"]) if params.get("q") else None
    doc_tokens: dict[str, set[str]] = {}
    for doc in textstore.docs.values():
        doc_tokens.setdefault(doc.media_ref, set()).update(tokenize(doc.full_text()))

    expected = set()
    for item in graph.all_items():
        if tokens is not None:
            label_hit = any(
                set(tokens) <= set(tokenize(label)) for label in item.labels.values()
            )
            text_hit = set(tokens) <= doc_tokens.get(item.id, set())
            if not (label_hit or text_hit):
                continue
        values: dict[str, list[object]] = {}
        for stmt in item.statements:
            values.setdefault(graph.registry[stmt.property].label, []).append(stmt.value)
        if not _metadata_match(values, params):
            continue
        expected.add(item.id)
    return expected


def _metadata_match(values: dict[str, list[object]], params: dict[str, str]) -> bool:
    for param, label in (
        ("lang", "language"),
        ("topic", "topic"),
        ("publisher", "publisher-institution"),
        ("type", "media-type"),
    ):
        want = params.get(param)
        if want is not None and want not in values.get(label, []):
            return False
    after, before = params.get("after"), params.get("before")
    if after or before:
        dates = values.get("publication-date", [])
        if not any(
            (after is None or d >= after) and (before is None or d <= before)
            for d in dates
        ):
            return False
    min_s = params.get("minSeconds")
    max_s = params.get("maxSeconds")
    if min_s or max_s:
        durations = values.get("duration", [])
        low = int(min_s) if min_s else None
        high = int(max_s) if max_s else None
        if not any(
            (low is None or d >= low) and (high is None or d <= high)
            for d in durations
        ):
            return False
    return True


# ----------------------------------------------------------------------
# Runner


def _collect_results(client, params: dict[str, str]) -> tuple[list[dict], int, float]:
    """All result pages for a query; wall time covers the first call only."""
    first_params = dict(params, offset="0", limit=str(PAGE_LIMIT))
    start = time.perf_counter()
    resp = client.get("/search", params=first_params)
    wall_ms = (time.perf_counter() - start) * 1000.0
    if resp.status_code != 200:
        raise RuntimeError(f"/search returned {resp.status_code}: {resp.text[:200]}")
    body = resp.json()
    results = list(body["results"])
    total = body["total"]
    offset = len(results)
    while offset < total:
        page = client.get(
            "/search", params=dict(params, offset=str(offset), limit=str(PAGE_LIMIT))
        ).json()
        if not page["results"]:
            break
        results.extend(page["results"])
        offset += len(page["results"])
    return results, total, wall_ms


def run_bench(
    client,
    graph: MediaGraph,
    textstore: TextStore,
    kind: str = "fixture",
    latency_budget_ms: float | None = None,
) -> BenchReport:
    """Execute the five tasks against an API client (httpx-compatible)."""
    report = BenchReport()
    title_to_id = {}
    for item in graph.all_items():
        for label in item.labels.values():
            title_to_id.setdefault(label, item.id)
    for task in bench_tasks(kind):
        expected = flat_table_expected(graph, textstore, task.params)
        try:
            results, total, wall_ms = _collect_results(client, task.params)
        except RuntimeError as exc:
            report.tasks.append(
                TaskResult(task.name, False, 0.0, len(expected), 0, str(exc))
            )
            continue
        actual = [r["media"] for r in results]
        detail = ""
        passed = True
        if not expected:
            passed, detail = False, "no planted answer in corpus"
        elif set(actual) != expected or total != len(expected):
            passed = False
            missing = sorted(expected - set(actual), key=item_number)[:5]
            extra = sorted(set(actual) - expected, key=item_number)[:5]
            detail = f"missing={missing} extra={extra}"
        elif task.first_title is not None:
            want_first = title_to_id.get(task.first_title)
            if not actual or actual[0] != want_first:
                passed, detail = False, f"expected {want_first} ranked first"
        if passed and latency_budget_ms is not None and wall_ms > latency_budget_ms:
            passed, detail = False, f"over latency budget {latency_budget_ms} ms"
        report.tasks.append(
            TaskResult(task.name, passed, wall_ms, len(expected), len(actual), detail)
        )
    return report
