"""Seed corpora: the six-item demo fixture, a synthetic bulk dataset with
planted benchmark answers, and randomized corpora for property testing.

All generators take an explicit seed so every corpus is reproducible.
"""

from __future__ import annotations

import json
import random
from datetime import date, timedelta
from pathlib import Path

from .graph import MediaGraph
from .ingest import MappingConfig, RawRecord, commit, map_record
from .textstore import Document, Segment, TextStore

SEED_ACTOR = "seed"

# ----------------------------------------------------------------------
# Demo fixture: six items, two transcripts.

FIXTURE_ITEMS: tuple[tuple[dict[str, str], list[tuple[str, object]]], ...] = (
    (
        {"de": "Die Klimakrise erklärt"},
        [
            ("media-type", "video"),
            ("language", "de"),
            ("duration", 900),
            ("publication-date", "2021-03-01"),
            ("topic", "climate change"),
        ],
    ),
    (
        {"en": "History of Göttingen University"},
        [
            ("media-type", "video"),
            ("language", "en"),
            ("duration", 3600),
            ("publication-date", "2013-05-10"),
            ("topic", "history"),
            ("publisher-institution", "University of Göttingen"),
        ],
    ),
    (
        {"en": "Fatty Liver Disease Explained"},
        [
            ("media-type", "video"),
            ("language", "en"),
            ("duration", 1200),
            ("publication-date", "2023-02-14"),
            ("topic", "medicine"),
        ],
    ),
    (
        {"en": "Introduction to Computer Science"},
        [
            ("media-type", "video"),
            ("language", "en"),
            ("duration", 5400),
            ("publication-date", "2014-09-01"),
            ("topic", "computer science"),
        ],
    ),
    (
        {"en": "Computer Science Lecture 2"},
        [
            ("media-type", "video"),
            ("language", "en"),
            ("duration", 2700),
            ("publication-date", "2013-11-11"),
            ("topic", "computer science"),
        ],
    ),
    (
        {"de": "Wissenschaft heute"},
        [
            ("media-type", "podcast"),
            ("language", "de"),
            ("duration", 2400),
            ("publication-date", "2022-06-01"),
        ],
    ),
)

# Q1's transcript intentionally says "Klimakrise", never "Klimawandel", so a
# Klimawandel search hits only Q6's transcript.
FIXTURE_TRANSCRIPT_Q1 = (
    (0.0, "Willkommen zu unserer Sendung über die Klimakrise."),
    (14.0, "Wir erklären, wie Treibhausgase die Erde aufheizen."),
    (55.0, "Die Klimakrise betrifft Landwirtschaft, Städte und Küsten gleichermaßen."),
    (120.0, "Zum Schluss zeigen wir, was jede und jeder Einzelne tun kann."),
)

FIXTURE_TRANSCRIPT_Q6 = (
    (0.0, "Herzlich willkommen bei Wissenschaft heute."),
    (18.0, "In dieser Folge sprechen wir über den Klimawandel und seine Folgen."),
    (75.0, "Forscherinnen berichten über neue Messdaten aus der Arktis."),
    (140.0, "Vielen Dank fürs Zuhören und bis zur nächsten Folge."),
)


def seed_fixture(graph: MediaGraph, textstore: TextStore) -> None:
    """Create the six demo items plus the two consented transcripts."""
    ids = []
    for labels, statements in FIXTURE_ITEMS:
        ids.append(graph.create_item(dict(labels), list(statements), SEED_ACTOR))
    textstore.put_document(
        Document(
            media_ref=ids[0],
            kind="transcript",
            language="de",
            consent=True,
            segments=[Segment(text=t, start_seconds=s) for s, t in FIXTURE_TRANSCRIPT_Q1],
        ),
        actor=SEED_ACTOR,
    )
    textstore.put_document(
        Document(
            media_ref=ids[5],
            kind="transcript",
            language="de",
            consent=True,
            segments=[Segment(text=t, start_seconds=s) for s, t in FIXTURE_TRANSCRIPT_Q6],
        ),
        actor=SEED_ACTOR,
    )


def fixture_records() -> list[dict[str, str]]:
    """The six fixture items as raw dataset rows (for the import pipeline)."""
    return [
        {
            "title": "Die Klimakrise erklärt",
            "kind": "video",
            "lang": "German",
            "length": "15:00",
            "released": "2021-03-01",
            "subjects": "climate change",
        },
        {
            "title": "History of Göttingen University",
            "kind": "video",
            "lang": "English",
            "length": "1:00:00",
            "released": "2013-05-10",
            "subjects": "history",
            "organisation": "University of Göttingen",
        },
        {
            "title": "Fatty Liver Disease Explained",
            "kind": "video",
            "lang": "English",
            "length": "20:00",
            "released": "2023-02-14",
            "subjects": "medicine",
        },
        {
            "title": "Introduction to Computer Science",
            "kind": "video",
            "lang": "English",
            "length": "1:30:00",
            "released": "2014-09-01",
            "subjects": "computer science",
        },
        {
            "title": "Computer Science Lecture 2",
            "kind": "video",
            "lang": "English",
            "length": "45:00",
            "released": "2013-11-11",
            "subjects": "computer science",
        },
        {
            "title": "Wissenschaft heute",
            "kind": "podcast",
            "lang": "German",
            "length": "40:00",
            "released": "2022-06-01",
        },
    ]


def default_mapping() -> MappingConfig:
    return MappingConfig.from_json(json.dumps(default_mapping_json()))


def default_mapping_json() -> dict:
    return {
        "rules": [
            {"source": "title", "target": "title"},
            {"source": "kind", "target": "media-type"},
            {"source": "site", "target": "platform"},
            {"source": "video_id", "target": "external-id"},
            {"source": "link", "target": "url"},
            {"source": "author", "target": "creator"},
            {"source": "organisation", "target": "publisher-institution"},
            {"source": "lang", "target": "language", "transform": "to-language-code"},
            {"source": "length", "target": "duration", "transform": "to-duration-seconds"},
            {"source": "released", "target": "publication-date", "transform": "to-iso-date"},
            {"source": "subjects", "target": "topic", "transform": "split-list", "delimiter": ";"},
            {"source": "licence", "target": "license"},
        ]
    }


def write_jsonl(path: str | Path, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


# ----------------------------------------------------------------------
# Synthetic bulk dataset (world-lecture-style field roles).
#
# The real upstream dataset schema is not public; this generator produces
# rows with the same field roles, plus four planted rows so the benchmark
# tasks always have an answer.

PLANTED_TITLE = "Deep Sea Microbiomes and the Carbon Pump"
PLANTED_HISTORY_TITLE = "Göttingen University Historical Collections"
PLANTED_FATTY_TITLE = "Fatty Liver Research Update"
PLANTED_CS_TITLE = "Computer Science Colloquium Marathon"

_ADJECTIVES = (
    "Modern", "Applied", "Quantum", "Cellular", "Statistical",
    "Cognitive", "Marine", "Solar", "Neural", "Ancient",
)
_NOUNS = (
    "Mechanics", "Genetics", "Astronomy", "Ecology", "Linguistics",
    "Robotics", "Chemistry", "Economics", "Geology", "Immunology",
)
_FORMATS = (
    "Basics", "Advances", "Seminar", "Overview", "Deep Dive",
    "Field Notes", "Review", "Workshop", "Panel", "Primer",
)
# Random rows never use the planted task topics or publisher, so the planted
# rows stay the only guaranteed answers.
_TOPICS = (
    "physics", "biology", "chemistry", "mathematics", "astronomy",
    "ecology", "economics", "linguistics", "robotics", "genetics",
)
_PUBLISHERS = (
    "Leibniz University Hanover", "TU Munich", "ETH Zurich",
    "MIT OpenCourseWare", "Stanford Online", "Max Planck Institute",
)
_CREATORS = (
    "A. Brandt", "C. Okafor", "J. Martínez", "L. Chen", "M. Novak",
    "P. Singh", "R. Dubois", "S. Johansson", "T. Yamamoto", "V. Petrov",
)
_LANGS = ("English", "German", "French", "Spanish")
_LANG_WEIGHTS = (0.4, 0.4, 0.1, 0.1)
_SITES = ("youtube", "vimeo", "podcast-feed")
_LICENSES = ("CC-BY-4.0", "CC-BY-SA-4.0", "CC0", "proprietary")


def _hms(seconds: int) -> str:
    h, rem = divmod(seconds, 3600)
    m, s = divmod(rem, 60)
    return f"{h:02d}:{m:02d}:{s:02d}"


def _random_date(rng: random.Random, start_year: int = 2010, end_year: int = 2025) -> str:
    start = date(start_year, 1, 1)
    days = (date(end_year, 12, 31) - start).days
    return (start + timedelta(days=rng.randrange(days + 1))).isoformat()


def _planted_records() -> list[dict[str, str]]:
    return [
        {
            "title": PLANTED_TITLE,
            "kind": "video",
            "site": "youtube",
            "video_id": "wlp-p0001",
            "link": "https://example.org/media/p0001",
            "author": "A. Brandt",
            "organisation": "Leibniz University Hanover",
            "lang": "English",
            "length": "00:25:00",
            "released": "2021-05-20",
            "subjects": "ecology",
            "licence": "CC-BY-4.0",
        },
        {
            "title": PLANTED_HISTORY_TITLE,
            "kind": "video",
            "site": "youtube",
            "video_id": "wlp-p0002",
            "link": "https://example.org/media/p0002",
            "author": "M. Novak",
            "organisation": "University of Göttingen",
            "lang": "English",
            "length": "00:48:30",
            "released": "2019-11-02",
            "subjects": "history",
            "licence": "CC-BY-4.0",
        },
        {
            "title": PLANTED_FATTY_TITLE,
            "kind": "video",
            "site": "vimeo",
            "video_id": "wlp-p0003",
            "link": "https://example.org/media/p0003",
            "author": "L. Chen",
            "organisation": "TU Munich",
            "lang": "English",
            "length": "00:19:45",
            "released": "2023-04-12",
            "subjects": "medicine",
            "licence": "CC-BY-SA-4.0",
        },
        {
            "title": PLANTED_CS_TITLE,
            "kind": "video",
            "site": "youtube",
            "video_id": "wlp-p0004",
            "link": "https://example.org/media/p0004",
            "author": "P. Singh",
            "organisation": "ETH Zurich",
            "lang": "English",
            "length": "02:00:00",
            "released": "2013-06-15",
            "subjects": "computer science",
            "licence": "CC0",
        },
    ]


def generate_records(n: int, seed: int = 2024) -> list[dict[str, str]]:
    """n dataset rows, planted benchmark answers included."""
    planted = _planted_records()
    if n < len(planted):
        raise ValueError(f"need at least {len(planted)} records")
    rng = random.Random(seed)
    records = []
    for i in range(n - len(planted)):
        adj, noun, fmt = rng.choice(_ADJECTIVES), rng.choice(_NOUNS), rng.choice(_FORMATS)
        topics = rng.sample(_TOPICS, k=rng.randint(1, 3))
        records.append(
            {
                "title": f"{adj} {noun} {fmt} {i + 1}",
                "kind": "video" if rng.random() < 0.8 else "podcast",
                "site": rng.choice(_SITES),
                "video_id": f"wlp-{i + 1:05d}",
                "link": f"https://example.org/media/{i + 1}",
                "author": rng.choice(_CREATORS),
                "organisation": rng.choice(_PUBLISHERS),
                "lang": rng.choices(_LANGS, weights=_LANG_WEIGHTS)[0],
                "length": _hms(rng.randint(120, 7200)),
                "released": _random_date(rng),
                "subjects": ";".join(topics),
                "licence": rng.choice(_LICENSES),
            }
        )
    return records + planted


_SENTENCES = (
    "In this episode we discuss {topic} and recent findings.",
    "Our guest explains how {topic} research is done in practice.",
    "We review the most cited {topic} results of the decade.",
    "Listeners asked how {topic} connects to everyday life.",
    "A short interlude on laboratory methods and open data follows.",
)


def seed_synthetic(
    graph: MediaGraph,
    textstore: TextStore,
    n: int,
    seed: int = 2024,
    transcript_fraction: float = 0.1,
) -> int:
    """Import n generated records and give a fraction of items a transcript.

    Returns the number of created items.
    """
    records = generate_records(n, seed=seed)
    mapping = default_mapping()
    drafts = []
    for lineno, rec in enumerate(records, start=1):
        raw = RawRecord(source_line=lineno, fields=rec)
        drafts.append(map_record(raw, mapping, graph))
    report = commit(graph, drafts, SEED_ACTOR)
    rng = random.Random(seed + 1)
    for item in graph.all_items():
        if rng.random() >= transcript_fraction:
            continue
        meta_topics = [
            str(s.value)
            for s in item.statements
            if graph.registry[s.property].label == "topic"
        ]
        topic = meta_topics[0] if meta_topics else "science"
        segments = [
            Segment(text=_SENTENCES[i % len(_SENTENCES)].format(topic=topic),
                    start_seconds=float(i * 30))
            for i in range(rng.randint(2, 5))
        ]
        textstore.put_document(
            Document(
                media_ref=item.id,
                kind="transcript",
                language="en",
                consent=True,
                segments=segments,
            ),
            actor=SEED_ACTOR,
        )
    return report.created


# ----------------------------------------------------------------------
# Randomized corpora and query families for property testing.

CORPUS_TOKEN_POOL = (
    "klima", "wandel", "energie", "research", "data", "model", "climate",
    "ocean", "temperature", "carbon", "neural", "network", "galaxy",
    "protein", "enzyme", "market", "policy", "grammar", "syntax", "robot",
)


def build_random_corpus(
    n_items: int, seed: int = 7, transcript_fraction: float = 0.35
) -> tuple[MediaGraph, TextStore]:
    """A reproducible corpus of random items, some with transcripts or
    descriptions drawn from a shared token pool."""
    rng = random.Random(seed)
    graph = MediaGraph()
    textstore = TextStore(graph)
    for i in range(n_items):
        lang = rng.choice(("en", "de", "fr", "es"))
        n_title = rng.randint(2, 5)
        title = " ".join(rng.choice(CORPUS_TOKEN_POOL) for _ in range(n_title))
        statements: list[tuple[str, object]] = [
            ("media-type", rng.choice(("video", "podcast"))),
            ("language", lang),
            ("duration", rng.randint(60, 7200)),
            ("publication-date", _random_date(rng, 2012, 2025)),
        ]
        for topic in rng.sample(_TOPICS, k=rng.randint(0, 2)):
            statements.append(("topic", topic))
        if rng.random() < 0.7:
            statements.append(("publisher-institution", rng.choice(_PUBLISHERS)))
        item_id = graph.create_item({lang: title.title()}, statements, SEED_ACTOR)
        roll = rng.random()
        if roll < transcript_fraction:
            kind = "transcript"
        elif roll < transcript_fraction + 0.15:
            kind = "description"
        else:
            continue
        segments = []
        t = 0.0
        for _ in range(rng.randint(1, 4)):
            words = " ".join(
                rng.choice(CORPUS_TOKEN_POOL) for _ in range(rng.randint(4, 12))
            )
            segments.append(
                Segment(text=words, start_seconds=t if rng.random() < 0.8 else None)
            )
            t += rng.uniform(5, 60)
        textstore.put_document(
            Document(
                media_ref=item_id,
                kind=kind,
                language=lang,
                consent=(kind == "transcript") or rng.random() < 0.5,
                segments=segments,
            ),
            actor=SEED_ACTOR,
        )
    return graph, textstore


def generate_query_params(n_queries: int, seed: int = 11) -> list[dict]:
    """Random query descriptors: free-text tokens and/or filter params.

    Returned dicts have optional keys: tokens (list of str), lang, topic,
    media_type, publisher, year, bucket.
    """
    rng = random.Random(seed)
    queries = []
    for _ in range(n_queries):
        q: dict = {}
        style = rng.random()
        if style < 0.7:
            pool = list(CORPUS_TOKEN_POOL) + ["zzzyx"]
            q["tokens"] = [rng.choice(pool) for _ in range(rng.randint(1, 2))]
        if style >= 0.3:
            choice = rng.randrange(6)
            if choice == 0:
                q["lang"] = rng.choice(("en", "de", "fr", "es"))
            elif choice == 1:
                q["topic"] = rng.choice(_TOPICS)
            elif choice == 2:
                q["media_type"] = rng.choice(("video", "podcast"))
            elif choice == 3:
                q["publisher"] = rng.choice(_PUBLISHERS)
            elif choice == 4:
                q["year"] = rng.randint(2012, 2025)
            else:
                q["bucket"] = rng.choice(("<10 min", "10–60 min", ">60 min"))
        if not q:
            q["lang"] = "en"
        queries.append(q)
    return queries
