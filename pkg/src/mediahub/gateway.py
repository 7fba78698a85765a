"""JSON-over-HTTP API: tokenless reads, token-gated import, detail-page
aggregation, and snapshot persistence wiring."""

from __future__ import annotations

import hashlib
import hmac
import json
import logging
import tempfile
from contextlib import asynccontextmanager
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import (
    EmptyQueryError,
    InvalidFilterError,
    MediaHubError,
    StoresUnavailableError,
    UnknownFormatError,
    UnknownItemError,
)
from .federator import Facet, Federator, MediaQuery, SearchResponse, SearchResult
from .graph import FilterAtom, MediaGraph, date_range, equals, quantity_range
from .ingest import MappingConfig, StubProvider, run_import
from .schema import DURATION_BUCKETS, FACET_PROPERTIES
from .textstore import TextStore

logger = logging.getLogger(__name__)

GRAPH_FILE = "graph.jsonl"
DOCS_FILE = "documents.jsonl"

TRANSCRIPT_EXCERPT_CHARS = 480

# Flat query-string filter params and the properties they target.
FILTER_PARAMS = {
    "lang": "language",
    "topic": "topic",
    "publisher": "publisher-institution",
    "type": "media-type",
}


@dataclass
class ApiConfig:
    addr: str = "127.0.0.1:8080"
    write_token: str = ""
    data_dir: Path | None = None
    enrichment_enabled: bool = False
    enrichment_stub: Path | None = None
    page_size: int = 20
    max_page_size: int = 100


# ----------------------------------------------------------------------
# Store persistence


def load_stores(data_dir: str | Path | None) -> tuple[MediaGraph, TextStore]:
    """Load both stores from a data directory, or start fresh ones."""
    if data_dir is not None:
        data_dir = Path(data_dir)
        graph_path = data_dir / GRAPH_FILE
        docs_path = data_dir / DOCS_FILE
        if graph_path.exists():
            graph = MediaGraph.load(graph_path)
            if docs_path.exists():
                return graph, TextStore.load(docs_path, graph)
            return graph, TextStore(graph)
    graph = MediaGraph()
    return graph, TextStore(graph)


def persist_stores(graph: MediaGraph, textstore: TextStore, data_dir: str | Path) -> None:
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    graph.snapshot(data_dir / GRAPH_FILE)
    textstore.dump(data_dir / DOCS_FILE)


# ----------------------------------------------------------------------
# Serialization


def _result_json(result: SearchResult) -> dict:
    return {
        "media": result.media,
        "title": result.title,
        "matched_in": result.matched_in,
        "metadata": result.metadata,
        "score": result.score,
        "snippet": result.snippet,
        "timestamps": list(result.timestamps) if result.timestamps else None,
    }


def _facet_json(facet: Facet) -> dict:
    return {"property": facet.property, "value": facet.value, "count": facet.count}


def _response_json(resp: SearchResponse) -> dict:
    return {
        "results": [_result_json(r) for r in resp.results],
        "total": resp.total,
        "facets": [_facet_json(f) for f in resp.facets],
        "partial": resp.partial,
    }


def _error(status: int, code: str, detail: str = "") -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


# ----------------------------------------------------------------------
# Query-string parsing


def build_query(params, config: ApiConfig) -> MediaQuery:
    """Translate flat search params into a MediaQuery.

    Raises InvalidFilterError for unparseable values; semantic validation of
    the atoms happens in the federator.
    """
    atoms: list[FilterAtom] = []
    for param, prop in FILTER_PARAMS.items():
        for value in params.getlist(param):
            atoms.append(equals(prop, value))
    after = params.get("after")
    before = params.get("before")
    if after or before:
        atoms.append(date_range("publication-date", after or None, before or None))
    min_s = params.get("minSeconds")
    max_s = params.get("maxSeconds")
    if min_s or max_s:
        try:
            low = int(min_s) if min_s else None
            high = int(max_s) if max_s else None
        except ValueError:
            raise InvalidFilterError("minSeconds/maxSeconds must be integers") from None
        atoms.append(quantity_range("duration", low, high))
    try:
        offset = int(params.get("offset", "0"))
        limit = int(params.get("limit", str(config.page_size)))
    except ValueError:
        raise InvalidFilterError("offset/limit must be integers") from None
    if offset < 0 or limit < 1:
        raise InvalidFilterError("offset must be >= 0 and limit >= 1")
    limit = min(limit, config.max_page_size)
    q_text = params.get("q")
    browse_all = params.get("all", "").lower() in ("1", "true", "yes")
    return MediaQuery(
        free_text=q_text.split() if q_text else None,
        filters=atoms,
        offset=offset,
        limit=limit,
        browse_all=browse_all,
    )


# ----------------------------------------------------------------------
# Application factory


def create_app(graph: MediaGraph, textstore: TextStore, config: ApiConfig) -> FastAPI:
    federator = Federator(graph, textstore)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        if config.data_dir is not None:
            persist_stores(graph, textstore, config.data_dir)

    app = FastAPI(title="mediahub", lifespan=lifespan)
    # The dashboard is served from its own origin; auth stays token-based.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["Authorization", "Content-Type"],
    )
    app.state.graph = graph
    app.state.textstore = textstore
    app.state.config = config
    app.state.federator = federator

    def _authorized(request: Request) -> bool:
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            return False
        supplied = header[len("Bearer ") :]
        return bool(config.write_token) and hmac.compare_digest(
            supplied, config.write_token
        )

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "items": len(graph.all_items()),
            "documents": textstore.count(),
        }

    @app.get("/search")
    def search(request: Request):
        try:
            query = build_query(request.query_params, config)
            resp = federator.federated_search(query)
        except EmptyQueryError as exc:
            return _error(400, exc.code, str(exc))
        except InvalidFilterError as exc:
            return _error(400, exc.code, str(exc))
        except StoresUnavailableError as exc:
            return _error(503, exc.code, str(exc))
        return _response_json(resp)

    @app.get("/media/{item_id}")
    def media_detail(item_id: str):
        try:
            item = graph.get_item(item_id)
        except UnknownItemError as exc:
            return _error(404, exc.code, str(exc))
        if item.deleted:
            return _error(404, "unknown-item", f"item {item_id} was deleted")
        transcript = textstore.document_for(item_id, "transcript")
        description = textstore.document_for(item_id, "description")
        revisions = graph.revisions_for(item_id)
        view = {
            "id": item.id,
            "title": federator.display_title(item),
            "labels": item.labels,
            "description": item.description,
            "metadata": federator.core_metadata(item),
            "description_text": description.full_text() if description else None,
            "transcript": {
                "available": transcript is not None,
                "doc": transcript.id if transcript else None,
                "language": transcript.language if transcript else None,
                "excerpt": (
                    transcript.full_text()[:TRANSCRIPT_EXCERPT_CHARS]
                    if transcript
                    else None
                ),
                "segments": (
                    [
                        {"start": seg.start_seconds, "text": seg.text}
                        for seg in transcript.segments[:5]
                    ]
                    if transcript
                    else []
                ),
                "timestamps": (
                    [
                        seg.start_seconds
                        for seg in transcript.segments
                        if seg.start_seconds is not None
                    ]
                    if transcript
                    else []
                ),
            },
            "revisions": {
                "count": len(revisions),
                "latest": [
                    {"rev": r.rev, "actor": r.actor, "timestamp": r.timestamp}
                    for r in revisions[-10:][::-1]
                ],
            },
        }
        return view

    @app.get("/filters")
    def filters(request: Request):
        payload = {
            "properties": [
                {
                    "id": p.id,
                    "label": p.label,
                    "datatype": p.datatype,
                    "unit": p.unit,
                    "multi_valued": p.multi_valued,
                }
                for p in sorted(graph.registry.values(), key=lambda p: int(p.id[1:]))
            ],
            "facets": list(FACET_PROPERTIES),
            "duration_buckets": [
                {"label": label, "min": low, "max": high}
                for label, low, high in DURATION_BUCKETS
            ],
            "params": dict(
                FILTER_PARAMS,
                after="publication-date (from)",
                before="publication-date (to)",
                minSeconds="duration (min)",
                maxSeconds="duration (max)",
            ),
        }
        body = json.dumps(payload, ensure_ascii=False, sort_keys=True)
        etag = '"' + hashlib.sha256(body.encode("utf-8")).hexdigest()[:32] + '"'
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304, headers={"ETag": etag})
        return JSONResponse(content=payload, headers={"ETag": etag})

    @app.post("/import")
    async def import_dataset(request: Request):
        # Token first: malformed bodies must still get a 401 when unauthorized.
        if not _authorized(request):
            return _error(401, "unauthorized", "missing or bad write token")
        try:
            form = await request.form()
        except Exception:
            return _error(400, "bad-multipart", "could not parse multipart body")
        dataset = form.get("dataset")
        if dataset is None or isinstance(dataset, str):
            return _error(400, "bad-multipart", "missing dataset file part")
        mapping_part = form.get("mapping")
        if mapping_part is None:
            return _error(422, "invalid-mapping", "missing mapping part")
        try:
            mapping_text = (
                mapping_part
                if isinstance(mapping_part, str)
                else (await mapping_part.read()).decode("utf-8")
            )
            mapping = MappingConfig.from_json(mapping_text)
            mapping.validate(graph)
        except (ValueError, MediaHubError) as exc:
            return _error(422, "invalid-mapping", str(exc))
        fmt = form.get("format")
        if not fmt:
            name = dataset.filename or ""
            fmt = "csv" if name.endswith(".csv") else "jsonl"
        provider = None
        if config.enrichment_enabled and config.enrichment_stub:
            provider = StubProvider.from_file(config.enrichment_stub)
        actor = form.get("actor") or "api"
        data = await dataset.read()
        with tempfile.NamedTemporaryFile(suffix=f".{fmt}", delete=False) as tmp:
            tmp.write(data)
            tmp_path = Path(tmp.name)
        try:
            report = run_import(graph, tmp_path, str(fmt), mapping, str(actor), provider)
        except UnknownFormatError as exc:
            return _error(400, exc.code, str(exc))
        finally:
            tmp_path.unlink(missing_ok=True)
        if config.data_dir is not None:
            persist_stores(graph, textstore, config.data_dir)
        return {
            "created": report.created,
            "updated": report.updated,
            "skipped_duplicates": report.skipped_duplicates,
            "errors": [[line, reason] for line, reason in report.errors],
            "warnings": report.warnings,
        }

    return app
