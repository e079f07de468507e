"""Curated story corpus: loading, validation, and theme queries.

The corpus is a UTF-8 JSONL file with one record object per line. An optional
first line may be a header object declaring ``label_aliases``, which maps raw
label strings (as they appear in curated sources) onto canonical theme names.
Records are kept in file order; the corpus is immutable after load and safe to
share across threads.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import CorpusError, UnknownThemeError


class Theme(enum.Enum):
    """Life-context scope restricting abilities, retrieval, and questions."""

    EMPLOYMENT = "Employment"
    EDUCATION = "Education"
    FAMILY = "Family"

    @classmethod
    def parse(cls, raw: str) -> "Theme":
        """Parse a theme name case-insensitively into its canonical member."""
        if isinstance(raw, str):
            for theme in cls:
                if raw.strip().lower() == theme.value.lower():
                    return theme
        known = ", ".join(t.value for t in cls)
        raise UnknownThemeError(f"unknown theme {raw!r}; known themes: {known}")

    def __str__(self) -> str:  # used in prompts and CLI output
        return self.value


RECORD_KEYS = (
    "record_id",
    "name",
    "diagnosis",
    "resources",
    "age",
    "gender",
    "region",
    "education",
    "occupation",
    "family_situation",
    "labels",
    "abilities_text",
    "challenges_text",
)

_STR_KEYS = (
    "record_id",
    "name",
    "diagnosis",
    "resources",
    "gender",
    "region",
    "education",
    "occupation",
    "family_situation",
    "challenges_text",
)


@dataclass(frozen=True)
class StoryRecord:
    """One curated lived-experience entry."""

    record_id: str
    name: str
    diagnosis: str
    resources: str
    age: int
    gender: str
    region: str
    education: str
    occupation: str
    family_situation: str
    labels: frozenset[Theme]
    abilities_text: Mapping[Theme, str]
    challenges_text: str

    def to_json(self) -> dict:
        """Serialize with canonical theme names (reloads without aliases)."""
        return {
            "record_id": self.record_id,
            "name": self.name,
            "diagnosis": self.diagnosis,
            "resources": self.resources,
            "age": self.age,
            "gender": self.gender,
            "region": self.region,
            "education": self.education,
            "occupation": self.occupation,
            "family_situation": self.family_situation,
            "labels": sorted(t.value for t in self.labels),
            "abilities_text": {
                t.value: self.abilities_text[t]
                for t in sorted(self.abilities_text, key=lambda t: t.value)
            },
            "challenges_text": self.challenges_text,
        }


@dataclass(frozen=True)
class Corpus:
    """Ordered, validated collection of story records."""

    records: tuple[StoryRecord, ...]
    per_theme_counts: Mapping[Theme, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        counts = {theme: 0 for theme in Theme}
        for record in self.records:
            for theme in record.labels:
                counts[theme] += 1
        object.__setattr__(self, "per_theme_counts", counts)

    def __len__(self) -> int:
        return len(self.records)


def _resolve_labels(
    raw_labels: list, aliases: Mapping[str, tuple[Theme, ...]]
) -> frozenset[Theme]:
    themes: set[Theme] = set()
    for raw in raw_labels:
        if not isinstance(raw, str):
            raise UnknownThemeError(f"label must be a string, got {raw!r}")
        if raw in aliases:
            themes.update(aliases[raw])
            continue
        themes.add(Theme.parse(raw))
    return frozenset(themes)


def parse_record(obj: dict, aliases: Mapping[str, tuple[Theme, ...]] | None = None) -> StoryRecord:
    """Validate one record object and build a StoryRecord.

    The key set must match RECORD_KEYS exactly; raw labels are resolved
    through ``aliases`` or parsed as canonical theme names.
    """
    aliases = aliases or {}
    if not isinstance(obj, dict):
        raise CorpusError(f"record must be an object, got {type(obj).__name__}")
    missing = [k for k in RECORD_KEYS if k not in obj]
    if missing:
        raise CorpusError(f"missing required key(s): {', '.join(missing)}")
    unknown = [k for k in obj if k not in RECORD_KEYS]
    if unknown:
        raise CorpusError(f"unknown key(s): {', '.join(unknown)}")

    for key in _STR_KEYS:
        if not isinstance(obj[key], str):
            raise CorpusError(f"{key} must be a string")
    if not obj["name"]:
        raise CorpusError("name must be non-empty")
    if not obj["resources"]:
        raise CorpusError("resources must be non-empty")
    age = obj["age"]
    if isinstance(age, bool) or not isinstance(age, int):
        raise CorpusError("age must be an integer")

    if not isinstance(obj["labels"], list) or not obj["labels"]:
        raise CorpusError("labels must be a non-empty array")
    labels = _resolve_labels(obj["labels"], aliases)
    if not labels:
        raise CorpusError("labels resolved to an empty theme set")

    raw_abilities = obj["abilities_text"]
    if not isinstance(raw_abilities, dict):
        raise CorpusError("abilities_text must be an object")
    abilities: dict[Theme, str] = {}
    for raw_key, text in raw_abilities.items():
        theme = Theme.parse(raw_key)
        if not isinstance(text, str):
            raise CorpusError(f"abilities_text[{raw_key!r}] must be a string")
        if theme in abilities:
            raise CorpusError(f"abilities_text has duplicate theme {theme.value}")
        abilities[theme] = text
    outside = [t.value for t in abilities if t not in labels]
    if outside:
        raise CorpusError(f"abilities_text theme(s) not in labels: {', '.join(outside)}")

    return StoryRecord(
        record_id=obj["record_id"],
        name=obj["name"],
        diagnosis=obj["diagnosis"],
        resources=obj["resources"],
        age=age,
        gender=obj["gender"],
        region=obj["region"],
        education=obj["education"],
        occupation=obj["occupation"],
        family_situation=obj["family_situation"],
        labels=labels,
        abilities_text=abilities,
        challenges_text=obj["challenges_text"],
    )


def _parse_header(obj: dict) -> dict[str, tuple[Theme, ...]]:
    aliases: dict[str, tuple[Theme, ...]] = {}
    raw_aliases = obj.get("label_aliases", {})
    if not isinstance(raw_aliases, dict):
        raise CorpusError("label_aliases must be an object")
    for raw, targets in raw_aliases.items():
        if not isinstance(targets, list) or not targets:
            raise CorpusError(f"alias {raw!r} must map to a non-empty array of themes")
        aliases[raw] = tuple(Theme.parse(t) for t in targets)
    return aliases


def load_corpus(path: str | Path) -> Corpus:
    """Load and validate a JSONL corpus file.

    Raises CorpusError with the offending line number on malformed input,
    duplicate record ids, or unknown theme labels.
    """
    path = Path(path)
    try:
        raw_lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc

    records: list[StoryRecord] = []
    seen_ids: dict[str, int] = {}
    aliases: dict[str, tuple[Theme, ...]] = {}
    first_content_line = True
    for lineno, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"invalid JSON ({exc.msg})", line=lineno) from exc
        is_header = (
            isinstance(obj, dict)
            and "record_id" not in obj
            and ("label_aliases" in obj or "schema_version" in obj)
        )
        if first_content_line and is_header:
            try:
                aliases = _parse_header(obj)
            except (CorpusError, UnknownThemeError) as exc:
                raise CorpusError(f"bad header: {exc}", line=lineno) from exc
            first_content_line = False
            continue
        first_content_line = False
        try:
            record = parse_record(obj, aliases)
        except (CorpusError, UnknownThemeError) as exc:
            message = exc.args[0] if isinstance(exc, CorpusError) and exc.line is None else str(exc)
            raise CorpusError(str(message), line=lineno) from exc
        if record.record_id in seen_ids:
            raise CorpusError(
                f"duplicate record_id {record.record_id!r} "
                f"(first seen on line {seen_ids[record.record_id]})",
                line=lineno,
            )
        seen_ids[record.record_id] = lineno
        records.append(record)

    return Corpus(records=tuple(records))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the corpus back to JSONL with canonical theme names."""
    path = Path(path)
    lines = [json.dumps(r.to_json(), ensure_ascii=False) for r in corpus.records]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def filter_by_theme(corpus: Corpus, theme: Theme) -> list[StoryRecord]:
    """Records whose labels contain ``theme``, in corpus order."""
    return [r for r in corpus.records if theme in r.labels]


def corpus_stats(corpus: Corpus) -> dict[Theme, int]:
    """Per-theme record counts; multi-label records count once per theme."""
    return dict(corpus.per_theme_counts)


def iter_theme_texts(record: StoryRecord) -> Iterable[tuple[Theme, str]]:
    """Yield (theme, grounding text) pairs for each labeled theme.

    The grounding text joins the theme-scoped abilities narrative with the
    record's challenges; themes with no text at all are skipped. Themes are
    yielded in declaration order for deterministic passage ids.
    """
    for theme in Theme:
        if theme not in record.labels:
            continue
        parts = [p for p in (record.abilities_text.get(theme), record.challenges_text) if p]
        if parts:
            yield theme, "\n".join(parts)
