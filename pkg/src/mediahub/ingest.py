"""Bulk ingestion pipeline: parse, map, enrich, deduplicate, commit.

Dataset rows are mapped to item drafts through a declarative field mapping,
optionally enriched from a provider, and committed with per-draft error
isolation. Committing the same batch twice is a no-op: drafts are matched to
existing items by a deterministic dedup key and only changed statements are
written.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    EmptyLabelsError,
    MissingTitleError,
    SchemaViolationError,
    SnapshotIOError,
    UnknownFormatError,
)
from .graph import MediaGraph, PropertyDef

logger = logging.getLogger(__name__)

TRANSFORMS = frozenset(
    {"identity", "to-duration-seconds", "to-iso-date", "split-list", "to-language-code"}
)

_LANGUAGE_NAMES = {
    "english": "en",
    "german": "de",
    "deutsch": "de",
    "french": "fr",
    "français": "fr",
    "francais": "fr",
    "spanish": "es",
    "español": "es",
    "espanol": "es",
    "italian": "it",
    "dutch": "nl",
    "portuguese": "pt",
}


@dataclass
class RawRecord:
    """One dataset row with its provenance line number."""

    source_line: int
    fields: dict[str, str]


@dataclass(frozen=True)
class MappingRule:
    source: str
    target: str
    transform: str = "identity"
    delimiter: str = ","


@dataclass
class MappingConfig:
    rules: list[MappingRule]

    @classmethod
    def from_json(cls, text: str) -> "MappingConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"mapping is not valid JSON: {exc}") from None
        if not isinstance(data, dict) or not isinstance(data.get("rules"), list):
            raise ValueError('mapping needs a top-level {"rules": [...]} list')
        rules = []
        for i, raw in enumerate(data["rules"]):
            if not isinstance(raw, dict) or "source" not in raw or "target" not in raw:
                raise ValueError(f"rule {i}: needs source and target")
            transform = raw.get("transform", "identity")
            if transform not in TRANSFORMS:
                raise ValueError(f"rule {i}: unknown transform {transform!r}")
            rules.append(
                MappingRule(
                    source=str(raw["source"]),
                    target=str(raw["target"]),
                    transform=transform,
                    delimiter=str(raw.get("delimiter", ",")),
                )
            )
        return cls(rules=rules)

    @classmethod
    def from_file(cls, path: str | Path) -> "MappingConfig":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def validate(self, graph: MediaGraph) -> None:
        if not any(r.target == "title" for r in self.rules):
            raise ValueError("mapping needs a title rule")
        for rule in self.rules:
            graph.resolve_property(rule.target)  # raises on unknown property


@dataclass
class ItemDraft:
    labels: dict[str, str]
    statements: list[tuple[str, object]]
    dedup_key: tuple
    source_line: int = 0
    warnings: list[str] = field(default_factory=list)


class EnrichmentProvider:
    """Looks up extra fields for an external id; returns None on miss."""

    def lookup(self, external_id: str) -> dict[str, object] | None:
        raise NotImplementedError


class StubProvider(EnrichmentProvider):
    """File-backed provider: a JSON map external-id -> partial field map."""

    def __init__(self, data: dict[str, dict[str, object]]):
        self.data = data

    @classmethod
    def from_file(cls, path: str | Path) -> "StubProvider":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def lookup(self, external_id: str) -> dict[str, object] | None:
        return self.data.get(external_id)


class HttpProvider(EnrichmentProvider):
    """Live provider, off by default: GET {base_url}/{external_id} -> JSON."""

    def __init__(self, base_url: str, timeout: float = 5.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def lookup(self, external_id: str) -> dict[str, object] | None:
        import httpx

        resp = httpx.get(f"{self.base_url}/{external_id}", timeout=self.timeout)
        if resp.status_code == 404:
            return None
        resp.raise_for_status()
        return resp.json()


@dataclass
class ImportReport:
    created: int = 0
    updated: int = 0
    skipped_duplicates: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def total(self) -> int:
        return self.created + self.updated + self.skipped_duplicates + len(self.errors)


@dataclass
class ParseResult:
    records: list[RawRecord]
    errors: list[tuple[int, str]]


# ----------------------------------------------------------------------
# Parsing


def parse_dataset(path: str | Path, fmt: str) -> ParseResult:
    """Read a dataset file; malformed rows become error entries and parsing
    continues. Line numbers are 1-based physical lines (CSV header included).
    """
    if fmt not in ("jsonl", "csv"):
        raise UnknownFormatError(f"unsupported dataset format: {fmt!r}")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SnapshotIOError(str(exc)) from exc
    if fmt == "jsonl":
        return _parse_jsonl(text)
    return _parse_csv(text)


def _parse_jsonl(text: str) -> ParseResult:
    records, errors = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            errors.append((lineno, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            errors.append((lineno, "row is not a JSON object"))
            continue
        fields_map = {}
        bad = None
        for key, value in obj.items():
            if value is None:
                continue
            if isinstance(value, (dict, list)):
                bad = f"field {key!r} is nested; rows must be flat"
                break
            if isinstance(value, bool):
                fields_map[str(key)] = "true" if value else "false"
            else:
                fields_map[str(key)] = str(value)
        if bad:
            errors.append((lineno, bad))
        else:
            records.append(RawRecord(source_line=lineno, fields=fields_map))
    return ParseResult(records, errors)


def _parse_csv(text: str) -> ParseResult:
    records, errors = [], []
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        return ParseResult([], [])
    header = rows[0]
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            errors.append(
                (lineno, f"expected {len(header)} columns, got {len(row)}")
            )
            continue
        records.append(
            RawRecord(source_line=lineno, fields=dict(zip(header, row)))
        )
    return ParseResult(records, errors)


# ----------------------------------------------------------------------
# Transforms


class TransformError(ValueError):
    pass


def to_duration_seconds(raw: str) -> int:
    """Accepts integer seconds, "MM:SS", or "HH:MM:SS"."""
    raw = raw.strip()
    if ":" not in raw:
        try:
            value = int(raw)
        except ValueError:
            raise TransformError(f"not a duration: {raw!r}") from None
        if value < 0:
            raise TransformError("negative duration")
        return value
    parts = raw.split(":")
    if len(parts) == 2:
        parts = ["0"] + parts
    if len(parts) != 3:
        raise TransformError(f"not a duration: {raw!r}")
    try:
        h, m, s = (int(p) for p in parts)
    except ValueError:
        raise TransformError(f"not a duration: {raw!r}") from None
    if h < 0 or not (0 <= m < 60) or not (0 <= s < 60):
        raise TransformError(f"not a duration: {raw!r}")
    return h * 3600 + m * 60 + s


def to_iso_date(raw: str) -> str:
    from datetime import date

    raw = raw.strip()
    candidate = raw[:10] if len(raw) > 10 else raw
    try:
        return date.fromisoformat(candidate).isoformat()
    except ValueError:
        raise TransformError(f"not an ISO date: {raw!r}") from None


def to_language_code(raw: str) -> str:
    value = raw.strip().casefold()
    if len(value) == 2 and value.isalpha():
        return value
    mapped = _LANGUAGE_NAMES.get(value)
    if mapped is None:
        raise TransformError(f"unknown language: {raw!r}")
    return mapped


def _apply_transform(rule: MappingRule, raw: str) -> list[object]:
    if rule.transform == "identity":
        return [raw]
    if rule.transform == "to-duration-seconds":
        return [to_duration_seconds(raw)]
    if rule.transform == "to-iso-date":
        return [to_iso_date(raw)]
    if rule.transform == "to-language-code":
        return [to_language_code(raw)]
    if rule.transform == "split-list":
        parts = [p.strip() for p in raw.split(rule.delimiter)]
        return list(dict.fromkeys(p for p in parts if p))
    raise TransformError(f"unknown transform: {rule.transform!r}")


def _coerce_for(prop: PropertyDef, value: object) -> object:
    """Datatype-aware coercion of a mapped value before graph validation."""
    if prop.datatype == "quantity" and isinstance(value, str):
        try:
            return float(value) if "." in value else int(value)
        except ValueError:
            raise TransformError(f"{prop.label}: not a number: {value!r}") from None
    if prop.datatype == "boolean" and isinstance(value, str):
        low = value.strip().casefold()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise TransformError(f"{prop.label}: not a boolean: {value!r}")
    if prop.datatype == "date" and isinstance(value, str):
        return to_iso_date(value)
    return value


# ----------------------------------------------------------------------
# Mapping


def normalized_title(title: str) -> str:
    return " ".join(title.casefold().split())


def compute_dedup_key(statements: list[tuple[str, object]], labels: dict[str, str]) -> tuple:
    """(platform, external-id) when both present, else normalized title plus
    publication date."""
    by_prop: dict[str, object] = {}
    for prop, value in statements:
        by_prop.setdefault(prop, value)
    platform = by_prop.get("platform")
    external = by_prop.get("external-id")
    if platform and external:
        return ("ext", str(platform), str(external))
    title = next(iter(sorted(labels.values())), "")
    return ("title", normalized_title(title), str(by_prop.get("publication-date", "")))


def map_record(record: RawRecord, mapping: MappingConfig, graph: MediaGraph) -> ItemDraft:
    """Apply every mapping rule to a record.

    Per-field transform failures become draft warnings; the draft is still
    produced as long as a title came through. Raises MissingTitleError
    otherwise.
    """
    statements: list[tuple[str, object]] = []
    warnings: list[str] = []
    title_value: str | None = None
    for rule in mapping.rules:
        raw = record.fields.get(rule.source)
        if raw is None or raw == "":
            continue
        try:
            values = _apply_transform(rule, raw)
        except TransformError as exc:
            warnings.append(f"line {record.source_line}: {rule.source}: {exc}")
            continue
        if rule.target == "title":
            title_value = str(values[0])
            continue
        prop = graph.resolve_property(rule.target)
        for value in values:
            try:
                coerced = _coerce_for(prop, value)
            except TransformError as exc:
                warnings.append(f"line {record.source_line}: {rule.source}: {exc}")
                continue
            statements.append((prop.label, coerced))

    if not title_value or not title_value.strip():
        raise MissingTitleError(f"line {record.source_line}: record has no title")

    # Drop repeats: extra values for single-valued properties, duplicate
    # values for multi-valued ones.
    deduped: list[tuple[str, object]] = []
    seen: dict[str, list[object]] = {}
    for label, value in statements:
        prop = graph.resolve_property(label)
        prior = seen.setdefault(label, [])
        if prior and not prop.multi_valued:
            warnings.append(
                f"line {record.source_line}: extra value for {label} ignored"
            )
            continue
        if value in prior:
            continue
        prior.append(value)
        deduped.append((label, value))

    label_lang = next(
        (str(v) for l, v in deduped if l == "language"), "en"
    )
    labels = {label_lang: title_value.strip()}
    return ItemDraft(
        labels=labels,
        statements=deduped,
        dedup_key=compute_dedup_key(deduped, labels),
        source_line=record.source_line,
        warnings=warnings,
    )


# ----------------------------------------------------------------------
# Enrichment


def enrich(draft: ItemDraft, provider: EnrichmentProvider | None) -> ItemDraft:
    """Fill absent fields from the provider; mapped fields are never
    overwritten. Provider failures leave the draft unchanged."""
    if provider is None:
        return draft
    external = next((v for p, v in draft.statements if p == "external-id"), None)
    if external is None:
        return draft
    try:
        data = provider.lookup(str(external))
    except Exception as exc:
        draft.warnings.append(f"enrichment failed for {external}: {exc}")
        logger.warning("enrichment failed for %s: %s", external, exc)
        return draft
    if not data:
        draft.warnings.append(f"enrichment miss for {external}")
        return draft
    present = {p for p, _ in draft.statements}
    for label, raw in sorted(data.items()):
        if label == "title" or label in present:
            continue
        values = raw if isinstance(raw, list) else [raw]
        for value in values:
            draft.statements.append((label, value))
    draft.dedup_key = compute_dedup_key(draft.statements, draft.labels)
    return draft


# ----------------------------------------------------------------------
# Commit


def _item_dedup_key(graph: MediaGraph, item) -> tuple:
    statements = [
        (graph.registry[s.property].label, s.value) for s in item.statements
    ]
    return compute_dedup_key(statements, item.labels)


def _diff_changes(graph: MediaGraph, item, draft: ItemDraft) -> list[tuple[str, ...]]:
    """Pending writes to bring the item up to the draft; empty if unchanged."""
    changes: list[tuple[str, ...]] = []
    for lang, text in draft.labels.items():
        if item.labels.get(lang) != text:
            changes.append(("label", lang, text))
    current: dict[str, list[object]] = {}
    for stmt in item.statements:
        current.setdefault(graph.registry[stmt.property].label, []).append(stmt.value)
    for label, value in draft.statements:
        prop = graph.resolve_property(label)
        cval = graph.canonical_value(prop, value)
        have = current.get(label, [])
        if prop.multi_valued:
            if cval not in have:
                changes.append(("statement", label, cval))
        else:
            if not have or have[0] != cval:
                changes.append(("statement", label, cval))
    return changes


def commit(graph: MediaGraph, drafts: list[ItemDraft], actor: str) -> ImportReport:
    """Apply a batch of drafts with per-draft error isolation.

    The whole batch is validated against the schema first, then applied
    serially: fresh dedup keys create items, known keys update only changed
    statements, and content-identical drafts are skipped without touching
    the revision log.
    """
    report = ImportReport()
    validated: list[tuple[ItemDraft, bool]] = []
    for draft in drafts:
        report.warnings.extend(draft.warnings)
        try:
            graph.validate_draft(draft.labels, draft.statements)
            validated.append((draft, True))
        except (SchemaViolationError, EmptyLabelsError) as exc:
            report.errors.append((draft.source_line, str(exc)))
            validated.append((draft, False))

    keys: dict[tuple, str] = {}
    for item in graph.all_items():
        keys[_item_dedup_key(graph, item)] = item.id

    for draft, ok in validated:
        if not ok:
            continue
        existing_id = keys.get(draft.dedup_key)
        try:
            if existing_id is None:
                item_id = graph.create_item(draft.labels, draft.statements, actor)
                keys[draft.dedup_key] = item_id
                report.created += 1
                continue
            item = graph.get_item(existing_id)
            changes = _diff_changes(graph, item, draft)
            if not changes:
                report.skipped_duplicates += 1
                continue
            for change in changes:
                if change[0] == "label":
                    graph.update_label(existing_id, change[1], change[2], actor)
                else:
                    graph.upsert_statement(existing_id, change[1], change[2], actor)
            report.updated += 1
        except (SchemaViolationError, EmptyLabelsError) as exc:
            report.errors.append((draft.source_line, str(exc)))
    return report


# ----------------------------------------------------------------------
# Whole pipeline


def run_import(
    graph: MediaGraph,
    path: str | Path,
    fmt: str,
    mapping: MappingConfig,
    actor: str,
    provider: EnrichmentProvider | None = None,
) -> ImportReport:
    """parse -> map -> enrich -> commit; the report conserves the input row
    count across created/updated/skipped/errors."""
    mapping.validate(graph)
    parsed = parse_dataset(path, fmt)
    drafts: list[ItemDraft] = []
    map_errors: list[tuple[int, str]] = []
    for record in parsed.records:
        try:
            draft = map_record(record, mapping, graph)
        except MissingTitleError as exc:
            map_errors.append((record.source_line, str(exc)))
            continue
        drafts.append(enrich(draft, provider))
    report = commit(graph, drafts, actor)
    report.errors = parsed.errors + map_errors + report.errors
    report.errors.sort(key=lambda e: e[0])
    return report
