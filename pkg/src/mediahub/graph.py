"""Entity store for media metadata.

Items carry labeled statements under a registered property schema. Every write
goes through a single-writer commit path that appends to a store-wide revision
log, and the whole store round-trips through a checksummed JSON-lines
snapshot.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import threading
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path

from .errors import (
    CorruptSnapshotError,
    EmptyLabelsError,
    InvalidFilterError,
    SchemaViolationError,
    SnapshotIOError,
    UnknownItemError,
)
from .schema import CORE_PROPERTIES, DATATYPES, VALUE_ENUMS

logger = logging.getLogger(__name__)

SNAPSHOT_FORMAT = "mediahub-graph"
SNAPSHOT_VERSION = 1

_ITEM_ID_RE = re.compile(r"^Q[1-9][0-9]*$")
_LANGUAGE_RE = re.compile(r"^[a-z]{2}$")


def item_number(item_id: str) -> int:
    """Numeric part of a Q-identifier, used for ordering."""
    return int(item_id[1:])


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class PropertyDef:
    """A registered property: id, display label, datatype, optional unit."""

    id: str
    label: str
    datatype: str
    unit: str | None = None
    multi_valued: bool = False


@dataclass(frozen=True)
class Statement:
    """A (property, value) pair; the value matches the property datatype."""

    property: str
    value: object


@dataclass
class Item:
    """A media entity: labels per language plus an ordered statement list."""

    id: str
    labels: dict[str, str]
    description: str | None = None
    statements: list[Statement] = field(default_factory=list)
    transcript_ref: str | None = None
    deleted: bool = False

    def values_of(self, property_id: str) -> list[object]:
        return [s.value for s in self.statements if s.property == property_id]


@dataclass(frozen=True)
class RevisionRecord:
    """Append-only edit-history entry; rev numbers are store-wide."""

    rev: int
    actor: str
    timestamp: str
    target: str
    delta: dict


@dataclass(frozen=True)
class FilterAtom:
    """One conjunct of a filter set.

    kind is one of "equals", "contains", "date-range", "quantity-range";
    value is used by equals/contains, low/high by the range kinds.
    """

    kind: str
    property: str
    value: object = None
    low: object = None
    high: object = None


def equals(prop: str, value: object) -> FilterAtom:
    return FilterAtom("equals", prop, value=value)


def contains(prop: str, value: str) -> FilterAtom:
    return FilterAtom("contains", prop, value=value)


def date_range(prop: str, from_: str | None = None, to: str | None = None) -> FilterAtom:
    return FilterAtom("date-range", prop, low=from_, high=to)


def quantity_range(
    prop: str, min_: float | None = None, max_: float | None = None
) -> FilterAtom:
    return FilterAtom("quantity-range", prop, low=min_, high=max_)


@dataclass
class QueryPage:
    """One page of a filtered query plus the unpaginated total."""

    ids: list[str]
    items: list[Item]
    total: int


class MediaGraph:
    """In-memory entity store with revision history and snapshots.

    Concurrency contract: any number of readers; every mutation and every
    snapshot runs under the single writer lock.
    """

    def __init__(self, register_core_schema: bool = True):
        self.registry: dict[str, PropertyDef] = {}
        self._property_by_label: dict[str, str] = {}
        self.items: dict[str, Item] = {}
        self.revisions: list[RevisionRecord] = []
        self._next_item = 1
        self._next_property = 1
        self._next_rev = 1
        self._write_lock = threading.RLock()
        if register_core_schema:
            for label, datatype, unit, multi in CORE_PROPERTIES:
                self.register_property(label, datatype, unit=unit, multi_valued=multi)

    # ------------------------------------------------------------------
    # Property registry

    def register_property(
        self,
        label: str,
        datatype: str,
        unit: str | None = None,
        multi_valued: bool = False,
    ) -> PropertyDef:
        if datatype not in DATATYPES:
            raise SchemaViolationError(f"unknown datatype: {datatype}")
        if unit is not None and datatype != "quantity":
            raise SchemaViolationError("unit is only valid for quantity properties")
        if label in self._property_by_label:
            raise SchemaViolationError(f"property already registered: {label}")
        with self._write_lock:
            prop = PropertyDef(
                id=f"P{self._next_property}",
                label=label,
                datatype=datatype,
                unit=unit,
                multi_valued=multi_valued,
            )
            self._next_property += 1
            self.registry[prop.id] = prop
            self._property_by_label[label] = prop.id
        return prop

    def resolve_property(self, ref: str) -> PropertyDef:
        """Look up a property by id ("P9") or label ("duration")."""
        pid = self._property_by_label.get(ref, ref)
        prop = self.registry.get(pid)
        if prop is None:
            raise SchemaViolationError(f"unknown property: {ref}")
        return prop

    def canonical_value(self, prop: PropertyDef, value: object) -> object:
        """Validate a raw value against the property datatype.

        Returns the canonical form (e.g. zero-padded ISO dates) or raises
        SchemaViolationError.
        """
        dt = prop.datatype
        if dt == "quantity":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise SchemaViolationError(f"{prop.label}: quantity value required")
            if value < 0:
                raise SchemaViolationError(f"{prop.label}: quantity must be >= 0")
            return value
        if dt == "date":
            if not isinstance(value, str):
                raise SchemaViolationError(f"{prop.label}: ISO date string required")
            try:
                return date.fromisoformat(value).isoformat()
            except ValueError as exc:
                raise SchemaViolationError(f"{prop.label}: {exc}") from None
        if dt == "boolean":
            if not isinstance(value, bool):
                raise SchemaViolationError(f"{prop.label}: boolean value required")
            return value
        if dt == "item-ref":
            if not isinstance(value, str) or not _ITEM_ID_RE.match(value):
                raise SchemaViolationError(f"{prop.label}: item reference required")
            return value
        # text, monolingual-text, external-id
        if not isinstance(value, str) or not value.strip():
            raise SchemaViolationError(f"{prop.label}: non-empty text required")
        if prop.label == "language" and not _LANGUAGE_RE.match(value):
            raise SchemaViolationError(f"language must be an ISO 639-1 code: {value!r}")
        enum = VALUE_ENUMS.get(prop.label)
        if enum is not None and value not in enum:
            raise SchemaViolationError(f"{prop.label}: {value!r} not in {sorted(enum)}")
        return value

    # ------------------------------------------------------------------
    # Writes

    def validate_draft(
        self, labels: dict[str, str], statements: list[tuple[str, object]]
    ) -> list[Statement]:
        """Check a draft against all item invariants without writing.

        Returns the canonicalized statement list.
        """
        if not labels or not any(v.strip() for v in labels.values()):
            raise EmptyLabelsError("item needs at least one label")
        for lang, text in labels.items():
            if not _LANGUAGE_RE.match(lang):
                raise SchemaViolationError(f"bad label language code: {lang!r}")
            if not isinstance(text, str) or not text.strip():
                raise SchemaViolationError(f"empty label for language {lang!r}")
        canonical: list[Statement] = []
        seen: dict[str, list[object]] = {}
        for ref, value in statements:
            prop = self.resolve_property(ref)
            cval = self.canonical_value(prop, value)
            prior = seen.setdefault(prop.id, [])
            if prior and not prop.multi_valued:
                raise SchemaViolationError(
                    f"{prop.label}: multiple values for single-valued property"
                )
            if cval in prior:
                raise SchemaViolationError(f"{prop.label}: duplicate value {cval!r}")
            prior.append(cval)
            canonical.append(Statement(prop.id, cval))
        return canonical

    def create_item(
        self,
        labels: dict[str, str],
        statements: list[tuple[str, object]],
        actor: str,
        description: str | None = None,
    ) -> str:
        """Persist a new item and append one revision. Returns the fresh id."""
        if not actor:
            raise ValueError("actor must be non-empty")
        canonical = self.validate_draft(labels, statements)
        with self._write_lock:
            item_id = f"Q{self._next_item}"
            self._next_item += 1
            item = Item(
                id=item_id,
                labels=dict(labels),
                description=description,
                statements=canonical,
            )
            self.items[item_id] = item
            self._append_revision(
                actor,
                item_id,
                {
                    "op": "create",
                    "labels": dict(labels),
                    "statements": [[s.property, s.value] for s in canonical],
                },
            )
        return item_id

    def upsert_statement(
        self, item_id: str, property_ref: str, value: object, actor: str
    ) -> int:
        """Set or add a statement.

        Single-valued properties are replaced; multi-valued ones gain the
        value if it is not already present. A revision is appended even when
        the value was already there.
        """
        if not actor:
            raise ValueError("actor must be non-empty")
        item = self._require_item(item_id)
        prop = self.resolve_property(property_ref)
        cval = self.canonical_value(prop, value)
        with self._write_lock:
            previous = item.values_of(prop.id)
            changed = False
            if prop.multi_valued:
                if cval not in previous:
                    item.statements.append(Statement(prop.id, cval))
                    changed = True
            else:
                if previous and previous[0] != cval:
                    idx = next(
                        i for i, s in enumerate(item.statements) if s.property == prop.id
                    )
                    item.statements[idx] = Statement(prop.id, cval)
                    changed = True
                elif not previous:
                    item.statements.append(Statement(prop.id, cval))
                    changed = True
            rev = self._append_revision(
                actor,
                item_id,
                {
                    "op": "upsert",
                    "property": prop.id,
                    "value": cval,
                    "previous": previous[0] if previous and not prop.multi_valued else None,
                    "changed": changed,
                },
            )
        return rev

    def update_label(self, item_id: str, lang: str, text: str, actor: str) -> int | None:
        """Set a label; appends a revision only when the text changes."""
        if not _LANGUAGE_RE.match(lang):
            raise SchemaViolationError(f"bad label language code: {lang!r}")
        if not text or not text.strip():
            raise SchemaViolationError("empty label")
        item = self._require_item(item_id)
        with self._write_lock:
            if item.labels.get(lang) == text:
                return None
            previous = item.labels.get(lang)
            item.labels[lang] = text
            return self._append_revision(
                actor,
                item_id,
                {"op": "set-label", "language": lang, "value": text, "previous": previous},
            )

    def set_transcript_ref(self, item_id: str, doc_id: str, actor: str) -> int | None:
        """Point an item at its transcript document.

        Records a revision only when the pointer actually changes.
        """
        item = self._require_item(item_id)
        with self._write_lock:
            if item.transcript_ref == doc_id:
                return None
            previous = item.transcript_ref
            item.transcript_ref = doc_id
            return self._append_revision(
                actor,
                item_id,
                {"op": "set-transcript", "doc": doc_id, "previous": previous},
            )

    def delete_item(self, item_id: str, actor: str) -> int:
        """Soft-delete: the item is tombstoned, never removed, and its id is
        never reused. Queries skip tombstoned items."""
        item = self._require_item(item_id)
        with self._write_lock:
            item.deleted = True
            return self._append_revision(actor, item_id, {"op": "delete"})

    def _append_revision(self, actor: str, target: str, delta: dict) -> int:
        rev = RevisionRecord(
            rev=self._next_rev,
            actor=actor,
            timestamp=_utc_now(),
            target=target,
            delta=delta,
        )
        self._next_rev += 1
        self.revisions.append(rev)
        return rev.rev

    # ------------------------------------------------------------------
    # Reads

    def has_item(self, item_id: str) -> bool:
        return item_id in self.items

    def _require_item(self, item_id: str) -> Item:
        item = self.items.get(item_id)
        if item is None:
            raise UnknownItemError(f"no such item: {item_id}")
        return item

    def get_item(self, item_id: str) -> Item:
        return self._require_item(item_id)

    def all_items(self) -> list[Item]:
        """Live items in ascending id order."""
        return [
            self.items[k]
            for k in sorted(self.items, key=item_number)
            if not self.items[k].deleted
        ]

    def revisions_for(self, item_id: str) -> list[RevisionRecord]:
        return [r for r in self.revisions if r.target == item_id]

    # ------------------------------------------------------------------
    # Filtering

    def validate_filters(self, atoms: list[FilterAtom]) -> None:
        """Raise InvalidFilterError unless every atom is well-formed."""
        for atom in atoms:
            try:
                prop = self.resolve_property(atom.property)
            except SchemaViolationError as exc:
                raise InvalidFilterError(str(exc)) from None
            if atom.kind == "equals":
                try:
                    self.canonical_value(prop, atom.value)
                except SchemaViolationError as exc:
                    raise InvalidFilterError(str(exc)) from None
            elif atom.kind == "contains":
                if not isinstance(atom.value, str) or not atom.value:
                    raise InvalidFilterError("contains needs a non-empty string")
            elif atom.kind == "date-range":
                if prop.datatype != "date":
                    raise InvalidFilterError(f"{prop.label} is not a date property")
                low, high = atom.low, atom.high
                for bound in (low, high):
                    if bound is not None:
                        try:
                            date.fromisoformat(bound)
                        except (TypeError, ValueError):
                            raise InvalidFilterError(f"bad date bound: {bound!r}") from None
                if low is not None and high is not None and low > high:
                    raise InvalidFilterError("date-range bounds out of order")
            elif atom.kind == "quantity-range":
                if prop.datatype != "quantity":
                    raise InvalidFilterError(f"{prop.label} is not a quantity property")
                for bound in (atom.low, atom.high):
                    if bound is not None and (
                        isinstance(bound, bool) or not isinstance(bound, (int, float))
                    ):
                        raise InvalidFilterError(f"bad quantity bound: {bound!r}")
                if (
                    atom.low is not None
                    and atom.high is not None
                    and atom.low > atom.high
                ):
                    raise InvalidFilterError("quantity-range bounds out of order")
            else:
                raise InvalidFilterError(f"unknown filter kind: {atom.kind}")

    def item_matches(self, item: Item, atoms: list[FilterAtom]) -> bool:
        """True when the item satisfies every atom (vacuously true if none)."""
        return all(self._matches_atom(item, atom) for atom in atoms)

    def _matches_atom(self, item: Item, atom: FilterAtom) -> bool:
        prop = self.resolve_property(atom.property)
        if prop.label == "title":
            candidates: list[object] = list(item.labels.values())
        else:
            candidates = item.values_of(prop.id)
        if atom.kind == "equals":
            target = self.canonical_value(prop, atom.value)
            return any(v == target for v in candidates)
        if atom.kind == "contains":
            needle = atom.value.casefold()
            return any(needle in str(v).casefold() for v in candidates)
        if atom.kind == "date-range":
            low = date.fromisoformat(atom.low).isoformat() if atom.low else None
            high = date.fromisoformat(atom.high).isoformat() if atom.high else None
            for v in candidates:
                if (low is None or v >= low) and (high is None or v <= high):
                    return True
            return False
        if atom.kind == "quantity-range":
            for v in candidates:
                if (atom.low is None or v >= atom.low) and (
                    atom.high is None or v <= atom.high
                ):
                    return True
            return False
        raise InvalidFilterError(f"unknown filter kind: {atom.kind}")

    def query_items(
        self,
        filters: list[FilterAtom],
        offset: int = 0,
        limit: int | None = None,
    ) -> QueryPage:
        """All items satisfying every atom, ascending by id, paginated."""
        self.validate_filters(filters)
        if offset < 0:
            raise InvalidFilterError("offset must be >= 0")
        if limit is not None and limit < 1:
            raise InvalidFilterError("limit must be >= 1")
        matched = [item for item in self.all_items() if self.item_matches(item, filters)]
        page = matched[offset:] if limit is None else matched[offset : offset + limit]
        return QueryPage(ids=[i.id for i in page], items=page, total=len(matched))

    # ------------------------------------------------------------------
    # Snapshots

    @property
    def next_item_number(self) -> int:
        return self._next_item

    @property
    def next_rev_number(self) -> int:
        return self._next_rev

    def _body_lines(self) -> list[str]:
        lines = []
        for pid in sorted(self.registry, key=item_number):
            p = self.registry[pid]
            lines.append(
                json_line(
                    {
                        "type": "property",
                        "id": p.id,
                        "label": p.label,
                        "datatype": p.datatype,
                        "unit": p.unit,
                        "multi_valued": p.multi_valued,
                    }
                )
            )
        for iid in sorted(self.items, key=item_number):
            item = self.items[iid]
            lines.append(
                json_line(
                    {
                        "type": "item",
                        "id": item.id,
                        "labels": item.labels,
                        "description": item.description,
                        "statements": [[s.property, s.value] for s in item.statements],
                        "transcript_ref": item.transcript_ref,
                        "deleted": item.deleted,
                    }
                )
            )
        for rev in self.revisions:
            lines.append(
                json_line(
                    {
                        "type": "revision",
                        "rev": rev.rev,
                        "actor": rev.actor,
                        "timestamp": rev.timestamp,
                        "target": rev.target,
                        "delta": rev.delta,
                    }
                )
            )
        return lines

    def dumps(self) -> str:
        """Full snapshot as a string (header line + body lines)."""
        body = "".join(line + "\n" for line in self._body_lines())
        header = json_line(
            {
                "format": SNAPSHOT_FORMAT,
                "version": SNAPSHOT_VERSION,
                "next_item": self._next_item,
                "next_rev": self._next_rev,
                "checksum": body_checksum(body),
            }
        )
        return header + "\n" + body

    def digest(self) -> str:
        """Stable digest of the full store state, for deep-equality checks."""
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()

    def snapshot(self, path: str | Path) -> None:
        with self._write_lock:
            data = self.dumps()
        try:
            Path(path).write_text(data, encoding="utf-8", newline="\n")
        except OSError as exc:
            raise SnapshotIOError(str(exc)) from exc

    @classmethod
    def load(cls, path: str | Path) -> "MediaGraph":
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise SnapshotIOError(str(exc)) from exc
        header, records = read_snapshot(raw, SNAPSHOT_FORMAT)
        graph = cls(register_core_schema=False)
        try:
            graph._next_item = int(header["next_item"])
            graph._next_rev = int(header["next_rev"])
            for rec in records:
                kind = rec.get("type")
                if kind == "property":
                    prop = PropertyDef(
                        id=rec["id"],
                        label=rec["label"],
                        datatype=rec["datatype"],
                        unit=rec["unit"],
                        multi_valued=rec["multi_valued"],
                    )
                    graph.registry[prop.id] = prop
                    graph._property_by_label[prop.label] = prop.id
                    graph._next_property = max(
                        graph._next_property, item_number(prop.id) + 1
                    )
                elif kind == "item":
                    graph.items[rec["id"]] = Item(
                        id=rec["id"],
                        labels=rec["labels"],
                        description=rec["description"],
                        statements=[Statement(p, v) for p, v in rec["statements"]],
                        transcript_ref=rec["transcript_ref"],
                        deleted=rec["deleted"],
                    )
                elif kind == "revision":
                    graph.revisions.append(
                        RevisionRecord(
                            rev=rec["rev"],
                            actor=rec["actor"],
                            timestamp=rec["timestamp"],
                            target=rec["target"],
                            delta=rec["delta"],
                        )
                    )
                else:
                    raise CorruptSnapshotError(f"unknown record type: {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptSnapshotError(f"malformed snapshot record: {exc}") from None
        return graph


def json_line(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def body_checksum(body: str) -> str:
    return "sha256:" + hashlib.sha256(body.encode("utf-8")).hexdigest()


def read_snapshot(raw: bytes, expected_format: str) -> tuple[dict, list[dict]]:
    """Shared snapshot reader: verifies framing and checksum, returns
    (header, body records). Raises CorruptSnapshotError on any defect."""
    if not raw.endswith(b"\n"):
        raise CorruptSnapshotError("snapshot does not end with LF")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise CorruptSnapshotError("snapshot is not valid UTF-8") from None
    head, _, body = text.partition("\n")
    try:
        header = json.loads(head)
    except json.JSONDecodeError:
        raise CorruptSnapshotError("unreadable snapshot header") from None
    if not isinstance(header, dict) or header.get("format") != expected_format:
        raise CorruptSnapshotError("unexpected snapshot format")
    if header.get("version") != SNAPSHOT_VERSION:
        raise CorruptSnapshotError(f"unsupported version: {header.get('version')!r}")
    if header.get("checksum") != body_checksum(body):
        raise CorruptSnapshotError("checksum mismatch")
    records = []
    for line in body.splitlines():
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError:
            raise CorruptSnapshotError("unreadable snapshot record") from None
    return header, records
