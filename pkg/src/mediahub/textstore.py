"""Full-text store for transcripts and descriptions.

Documents are tokenized into an inverted index at put time. Tokenization is
Unicode-aware lowercase word segmentation with no stemming, so German and
English text index the same way. Transcripts are accepted only with
copyright-holder consent; descriptions pass without it.
"""

from __future__ import annotations

import hashlib
import logging
import math
import re
import threading
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    ConsentMissingError,
    CorruptSnapshotError,
    EmptyDocumentError,
    EmptyQueryError,
    SnapshotIOError,
    UnknownDocumentError,
    UnknownMediaError,
)
from .graph import MediaGraph, body_checksum, json_line, read_snapshot

logger = logging.getLogger(__name__)

SNAPSHOT_FORMAT = "mediahub-text"
SNAPSHOT_VERSION = 1

DOCUMENT_KINDS = frozenset({"transcript", "description"})
SNIPPET_MAX_CHARS = 240

_WORD_RE = re.compile(r"\w+", re.UNICODE)
_LANGUAGE_RE = re.compile(r"^[a-z]{2}$")


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; diacritics preserved, no stemming."""
    return [m.group(0).casefold() for m in _WORD_RE.finditer(text)]


def doc_number(doc_id: str) -> int:
    return int(doc_id[1:])


@dataclass(frozen=True)
class Segment:
    """One transcript segment; start_seconds is optional but non-negative."""

    text: str
    start_seconds: float | None = None


@dataclass
class Document:
    media_ref: str
    kind: str
    language: str
    consent: bool
    segments: list[Segment]
    id: str | None = None

    def full_text(self) -> str:
        return " ".join(seg.text for seg in self.segments)


@dataclass(frozen=True)
class TextHit:
    doc: str
    media_ref: str
    score: float
    snippet: str
    timestamps: tuple[float, ...] = ()


class TextStore:
    """Inverted-index text store bound to a media graph.

    put_document refuses documents whose media_ref is not a graph item, and
    keeps the graph's transcript pointer (and its revision log) in sync.
    """

    def __init__(self, graph: MediaGraph):
        self._graph = graph
        self.docs: dict[str, Document] = {}
        self._slot: dict[tuple[str, str], str] = {}  # (media_ref, kind) -> doc id
        self._postings: dict[str, dict[str, int]] = {}  # token -> doc id -> tf
        self._next_doc = 1
        self._write_lock = threading.RLock()

    # ------------------------------------------------------------------
    # Writes

    def put_document(self, doc: Document, actor: str = "textstore") -> str:
        """Index a document; re-putting the same (media_ref, kind) replaces
        the previous content under the same document id."""
        if doc.kind not in DOCUMENT_KINDS:
            raise ValueError(f"unknown document kind: {doc.kind!r}")
        if not _LANGUAGE_RE.match(doc.language):
            raise ValueError(f"language must be an ISO 639-1 code: {doc.language!r}")
        if not self._graph.has_item(doc.media_ref):
            raise UnknownMediaError(f"no such media item: {doc.media_ref}")
        if doc.kind == "transcript" and not doc.consent:
            raise ConsentMissingError(
                "transcripts require copyright-holder consent"
            )
        if not doc.segments or not any(seg.text.strip() for seg in doc.segments):
            raise EmptyDocumentError("document has no text")
        last_start: float | None = None
        for seg in doc.segments:
            if not seg.text.strip():
                raise EmptyDocumentError("segment with empty text")
            if seg.start_seconds is not None:
                if seg.start_seconds < 0:
                    raise ValueError("segment start_seconds must be >= 0")
                if last_start is not None and seg.start_seconds < last_start:
                    raise ValueError("segment start_seconds must be non-decreasing")
                last_start = seg.start_seconds

        with self._write_lock:
            slot = (doc.media_ref, doc.kind)
            doc_id = self._slot.get(slot)
            if doc_id is None:
                doc_id = f"D{self._next_doc}"
                self._next_doc += 1
                self._slot[slot] = doc_id
            else:
                self._unindex(doc_id)
            stored = Document(
                media_ref=doc.media_ref,
                kind=doc.kind,
                language=doc.language,
                consent=doc.consent,
                segments=list(doc.segments),
                id=doc_id,
            )
            self.docs[doc_id] = stored
            self._index(stored)
            if doc.kind == "transcript":
                self._graph.set_transcript_ref(doc.media_ref, doc_id, actor)
        return doc_id

    def _index(self, doc: Document) -> None:
        for token in tokenize(doc.full_text()):
            self._postings.setdefault(token, {})
            self._postings[token][doc.id] = self._postings[token].get(doc.id, 0) + 1

    def _unindex(self, doc_id: str) -> None:
        old = self.docs.get(doc_id)
        if old is None:
            return
        for token in set(tokenize(old.full_text())):
            bucket = self._postings.get(token)
            if bucket is not None:
                bucket.pop(doc_id, None)
                if not bucket:
                    del self._postings[token]

    def rebuild_index(self) -> None:
        """Recompute the inverted index from stored documents."""
        with self._write_lock:
            self._postings = {}
            for doc in self.docs.values():
                self._index(doc)

    # ------------------------------------------------------------------
    # Reads

    def get_document(self, doc_id: str) -> Document:
        doc = self.docs.get(doc_id)
        if doc is None:
            raise UnknownDocumentError(f"no such document: {doc_id}")
        return doc

    def document_for(self, media_ref: str, kind: str) -> Document | None:
        doc_id = self._slot.get((media_ref, kind))
        return self.docs.get(doc_id) if doc_id else None

    def count(self) -> int:
        return len(self.docs)

    @staticmethod
    def normalize_terms(terms: list[str]) -> list[str]:
        """Distinct normalized tokens; raises EmptyQueryError if none remain."""
        tokens: list[str] = []
        for term in terms:
            tokens.extend(tokenize(term))
        if not tokens:
            raise EmptyQueryError("at least one non-empty search token required")
        return list(dict.fromkeys(tokens))

    def match_scores(self, terms: list[str]) -> dict[str, float]:
        """Scores for every document containing ALL query tokens.

        Score is term frequency times smoothed inverse document frequency,
        summed over the query tokens; matched docs always score > 0.
        """
        tokens = self.normalize_terms(terms)
        candidates: set[str] | None = None
        for token in tokens:
            bucket = self._postings.get(token)
            if not bucket:
                return {}
            ids = set(bucket)
            candidates = ids if candidates is None else candidates & ids
            if not candidates:
                return {}
        n_docs = len(self.docs)
        scores: dict[str, float] = {}
        for doc_id in candidates:
            score = 0.0
            for token in tokens:
                tf = self._postings[token][doc_id]
                df = len(self._postings[token])
                score += tf * (1.0 + math.log(n_docs / df))
            scores[doc_id] = score
        return scores

    def build_hit(self, doc_id: str, terms: list[str], score: float) -> TextHit:
        """Materialize the snippet and timestamps for one matched document."""
        tokens = self.normalize_terms(terms)
        doc = self.docs[doc_id]
        return TextHit(
            doc=doc_id,
            media_ref=doc.media_ref,
            score=score,
            snippet=self._snippet(doc, tokens),
            timestamps=self._timestamps(doc, tokens),
        )

    def search_text(self, terms: list[str], limit: int = 10) -> list[TextHit]:
        """Documents containing ALL query tokens, score-descending with ties
        on ascending doc id, at most `limit` hits."""
        if limit < 1:
            raise ValueError("limit must be a positive integer")
        scores = self.match_scores(terms)
        ordered = sorted(scores.items(), key=lambda kv: (-kv[1], doc_number(kv[0])))
        return [self.build_hit(doc_id, terms, score) for doc_id, score in ordered[:limit]]

    @staticmethod
    def _snippet(doc: Document, tokens: list[str]) -> str:
        """Window of at most SNIPPET_MAX_CHARS around the first matched token."""
        text = doc.full_text()
        token_set = set(tokens)
        span = None
        for m in _WORD_RE.finditer(text):
            if m.group(0).casefold() in token_set:
                span = m.span()
                break
        if span is None:  # unreachable for matched docs; defensive
            return text[: SNIPPET_MAX_CHARS - 3] + "..." if len(text) > SNIPPET_MAX_CHARS else text
        window = SNIPPET_MAX_CHARS - 6  # leave room for ellipses both sides
        start = max(0, span[0] - window // 3)
        end = min(len(text), start + window)
        if end < span[1]:  # keep the matched token inside the window
            end = min(len(text), span[1])
            start = max(0, end - window)
        snippet = text[start:end]
        if start > 0:
            snippet = "..." + snippet
        if end < len(text):
            snippet = snippet + "..."
        return snippet

    @staticmethod
    def _timestamps(doc: Document, tokens: list[str]) -> tuple[float, ...]:
        token_set = set(tokens)
        out = []
        for seg in doc.segments:
            if seg.start_seconds is None:
                continue
            if token_set & set(tokenize(seg.text)):
                out.append(seg.start_seconds)
        return tuple(out)

    # ------------------------------------------------------------------
    # Dump / load

    def dumps(self) -> str:
        body_lines = []
        for doc_id in sorted(self.docs, key=doc_number):
            doc = self.docs[doc_id]
            body_lines.append(
                json_line(
                    {
                        "type": "document",
                        "id": doc.id,
                        "media_ref": doc.media_ref,
                        "kind": doc.kind,
                        "language": doc.language,
                        "consent": doc.consent,
                        "segments": [[s.start_seconds, s.text] for s in doc.segments],
                    }
                )
            )
        body = "".join(line + "\n" for line in body_lines)
        header = json_line(
            {
                "format": SNAPSHOT_FORMAT,
                "version": SNAPSHOT_VERSION,
                "next_doc": self._next_doc,
                "checksum": body_checksum(body),
            }
        )
        return header + "\n" + body

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()

    def dump(self, path: str | Path) -> None:
        with self._write_lock:
            data = self.dumps()
        try:
            Path(path).write_text(data, encoding="utf-8", newline="\n")
        except OSError as exc:
            raise SnapshotIOError(str(exc)) from exc

    @classmethod
    def load(cls, path: str | Path, graph: MediaGraph) -> "TextStore":
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise SnapshotIOError(str(exc)) from exc
        header, records = read_snapshot(raw, SNAPSHOT_FORMAT)
        store = cls(graph)
        try:
            store._next_doc = int(header["next_doc"])
            for rec in records:
                if rec.get("type") != "document":
                    raise CorruptSnapshotError(f"unknown record type: {rec.get('type')!r}")
                doc = Document(
                    media_ref=rec["media_ref"],
                    kind=rec["kind"],
                    language=rec["language"],
                    consent=rec["consent"],
                    segments=[Segment(text=t, start_seconds=s) for s, t in rec["segments"]],
                    id=rec["id"],
                )
                store.docs[doc.id] = doc
                store._slot[(doc.media_ref, doc.kind)] = doc.id
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptSnapshotError(f"malformed dump record: {exc}") from None
        store.rebuild_index()
        return store
