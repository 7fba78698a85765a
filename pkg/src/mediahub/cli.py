"""Operator CLI: serve, seed, import, bench, snapshot, load.

Environment variables MEDIAHUB_ADDR, MEDIAHUB_TOKEN and MEDIAHUB_DATA_DIR
supply defaults. Exit codes: 0 ok, 1 configuration error, 2 bench failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .bench import run_bench
from .errors import MediaHubError
from .gateway import (
    DOCS_FILE,
    GRAPH_FILE,
    ApiConfig,
    create_app,
    load_stores,
    persist_stores,
)
from .ingest import MappingConfig, StubProvider, run_import
from .seed import seed_fixture, seed_synthetic

logger = logging.getLogger(__name__)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mediahub")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_dir(p):
        p.add_argument(
            "--data-dir",
            default=os.environ.get("MEDIAHUB_DATA_DIR"),
            help="directory holding the store snapshots",
        )

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--addr", default=os.environ.get("MEDIAHUB_ADDR", "127.0.0.1:8080"))
    p.add_argument("--token", default=os.environ.get("MEDIAHUB_TOKEN"))
    p.add_argument("--enrich-stub", default=None, help="stub enrichment JSON file")
    add_data_dir(p)

    p = sub.add_parser("seed", help="seed the store with demo or synthetic data")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--fixture", action="store_true", help="six-item demo corpus")
    group.add_argument("--synthetic", type=int, metavar="N", help="N generated items")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--transcripts", type=float, default=0.1,
                   help="fraction of synthetic items given a transcript")
    add_data_dir(p)

    p = sub.add_parser("import", help="bulk-import a dataset file")
    p.add_argument("dataset")
    p.add_argument("--mapping", required=True)
    p.add_argument("--format", choices=("jsonl", "csv"), default=None)
    p.add_argument("--actor", default="cli")
    p.add_argument("--enrich-stub", default=None)
    add_data_dir(p)

    p = sub.add_parser("bench", help="replay the five reference tasks")
    p.add_argument("--kind", choices=("fixture", "synthetic"), default="fixture")
    p.add_argument("--budget-ms", type=float, default=None)
    add_data_dir(p)

    p = sub.add_parser("snapshot", help="copy store snapshots to a directory")
    p.add_argument("--out", required=True)
    add_data_dir(p)

    p = sub.add_parser("load", help="load store snapshots from a directory")
    p.add_argument("--from", dest="source", required=True)
    add_data_dir(p)

    return parser


def _require_data_dir(args) -> Path:
    if not args.data_dir:
        raise SystemExit2("--data-dir or MEDIAHUB_DATA_DIR is required")
    return Path(args.data_dir)


class SystemExit2(Exception):
    """Configuration error carrying the message for stderr."""


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _dispatch(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MediaHubError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "seed":
        return _cmd_seed(args)
    if args.command == "import":
        return _cmd_import(args)
    if args.command == "bench":
        return _cmd_bench(args)
    if args.command == "snapshot":
        return _cmd_snapshot(args)
    if args.command == "load":
        return _cmd_load(args)
    raise SystemExit2(f"unknown command {args.command!r}")


def _cmd_serve(args) -> int:
    import uvicorn

    if not args.token:
        raise SystemExit2("--token or MEDIAHUB_TOKEN is required to serve")
    if ":" not in args.addr:
        raise SystemExit2(f"bad listen address: {args.addr!r}")
    host, _, port_text = args.addr.rpartition(":")
    try:
        port = int(port_text)
    except ValueError:
        raise SystemExit2(f"bad listen address: {args.addr!r}") from None
    graph, textstore = load_stores(args.data_dir)
    config = ApiConfig(
        addr=args.addr,
        write_token=args.token,
        data_dir=Path(args.data_dir) if args.data_dir else None,
        enrichment_enabled=bool(args.enrich_stub),
        enrichment_stub=Path(args.enrich_stub) if args.enrich_stub else None,
    )
    app = create_app(graph, textstore, config)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


def _cmd_seed(args) -> int:
    data_dir = _require_data_dir(args)
    graph, textstore = load_stores(args.data_dir)
    if args.fixture:
        seed_fixture(graph, textstore)
        created = len(graph.all_items())
        print(f"seeded fixture corpus: {created} items, {textstore.count()} documents")
    else:
        created = seed_synthetic(
            graph, textstore, args.synthetic, seed=args.seed,
            transcript_fraction=args.transcripts,
        )
        print(
            f"seeded synthetic corpus: {created} items created,"
            f" {textstore.count()} documents"
        )
    persist_stores(graph, textstore, data_dir)
    return 0


def _cmd_import(args) -> int:
    data_dir = _require_data_dir(args)
    graph, textstore = load_stores(args.data_dir)
    try:
        mapping = MappingConfig.from_file(args.mapping)
        mapping.validate(graph)
    except (OSError, ValueError) as exc:
        raise SystemExit2(f"bad mapping: {exc}") from None
    fmt = args.format or ("csv" if args.dataset.endswith(".csv") else "jsonl")
    provider = StubProvider.from_file(args.enrich_stub) if args.enrich_stub else None
    report = run_import(graph, args.dataset, fmt, mapping, args.actor, provider)
    persist_stores(graph, textstore, data_dir)
    print(
        f"created={report.created} updated={report.updated}"
        f" skipped={report.skipped_duplicates} errors={len(report.errors)}"
    )
    for line, reason in report.errors[:20]:
        print(f"  line {line}: {reason}")
    return 0


def _cmd_bench(args) -> int:
    from fastapi.testclient import TestClient

    data_dir = _require_data_dir(args)
    if not (data_dir / GRAPH_FILE).exists():
        raise SystemExit2(f"no store found under {data_dir}")
    graph, textstore = load_stores(args.data_dir)
    config = ApiConfig(write_token="bench-only")
    app = create_app(graph, textstore, config)
    with TestClient(app) as client:
        report = run_bench(
            client, graph, textstore, kind=args.kind,
            latency_budget_ms=args.budget_ms,
        )
    for line in report.lines():
        print(line)
    return 0 if report.ok else 2


def _cmd_snapshot(args) -> int:
    data_dir = _require_data_dir(args)
    graph, textstore = load_stores(data_dir)
    out = Path(args.out)
    persist_stores(graph, textstore, out)
    print(f"snapshot written to {out / GRAPH_FILE} and {out / DOCS_FILE}")
    return 0


def _cmd_load(args) -> int:
    data_dir = _require_data_dir(args)
    source = Path(args.source)
    if not (source / GRAPH_FILE).exists():
        raise SystemExit2(f"no snapshot found under {source}")
    graph, textstore = load_stores(source)
    persist_stores(graph, textstore, data_dir)
    print(
        f"loaded {len(graph.all_items())} items and {textstore.count()} documents"
        f" into {data_dir}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
