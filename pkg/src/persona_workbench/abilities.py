"""Theme-scoped ability catalog with drivers and blockers.

The shipped catalog is a curated JSONL file; ``generate_ability_entries`` is
an optional regeneration path that drafts new entries from grounding passages
through a completion provider. Generated candidates are validated before
acceptance and are meant for human review, never for silently replacing the
live catalog.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, Theme
from .errors import AbilityNotFoundError, CatalogError, GroundingError, UnknownThemeError
from .retrieval import RetrievalIndex, retrieve

logger = logging.getLogger(__name__)

CATALOG_SOURCES = ("curated-file", "generated")


@dataclass(frozen=True)
class AbilityFactor:
    """A driver or blocker, illustrated by a first-person story."""

    name: str
    story: str

    def __post_init__(self) -> None:
        if not self.name or not self.story:
            raise CatalogError("ability factor name and story must be non-empty")


@dataclass(frozen=True)
class AbilityEntry:
    """One ability under a theme, with at least one driver and one blocker."""

    theme: Theme
    name: str
    description: str
    drivers: tuple[AbilityFactor, ...]
    blockers: tuple[AbilityFactor, ...]

    def __post_init__(self) -> None:
        if not self.name:
            raise CatalogError("ability name must be non-empty")
        if not self.description:
            raise CatalogError(f"ability {self.name!r}: description must be non-empty")
        if not self.drivers:
            raise CatalogError(f"ability {self.name!r}: needs at least one driver")
        if not self.blockers:
            raise CatalogError(f"ability {self.name!r}: needs at least one blocker")

    def to_json(self) -> dict:
        return {
            "theme": self.theme.value,
            "name": self.name,
            "description": self.description,
            "drivers": [{"name": f.name, "story": f.story} for f in self.drivers],
            "blockers": [{"name": f.name, "story": f.story} for f in self.blockers],
        }


@dataclass(frozen=True)
class AbilityCatalog:
    entries: tuple[AbilityEntry, ...]
    source: str = "curated-file"

    def __post_init__(self) -> None:
        if self.source not in CATALOG_SOURCES:
            raise CatalogError(f"catalog source must be one of {CATALOG_SOURCES}")
        seen: set[tuple[Theme, str]] = set()
        for entry in self.entries:
            key = (entry.theme, entry.name)
            if key in seen:
                raise CatalogError(f"duplicate ability ({entry.theme.value}, {entry.name!r})")
            seen.add(key)


def _factor_from_json(obj: dict, entry_name: str, kind: str) -> AbilityFactor:
    if not isinstance(obj, dict) or set(obj) != {"name", "story"}:
        raise CatalogError(f"entry {entry_name!r}: each {kind} needs exactly name and story")
    if not all(isinstance(obj[k], str) for k in ("name", "story")):
        raise CatalogError(f"entry {entry_name!r}: {kind} name and story must be strings")
    return AbilityFactor(name=obj["name"], story=obj["story"])


def entry_from_json(obj: dict) -> AbilityEntry:
    """Validate one catalog object {theme, name, description, drivers, blockers}."""
    if not isinstance(obj, dict):
        raise CatalogError(f"catalog entry must be an object, got {type(obj).__name__}")
    required = {"theme", "name", "description", "drivers", "blockers"}
    if set(obj) != required:
        raise CatalogError(
            f"catalog entry keys must be exactly {sorted(required)}, got {sorted(obj)}"
        )
    name = obj["name"]
    for key in ("theme", "name", "description"):
        if not isinstance(obj[key], str):
            raise CatalogError(f"entry {name!r}: {key} must be a string")
    for kind in ("drivers", "blockers"):
        if not isinstance(obj[kind], list) or not obj[kind]:
            raise CatalogError(f"entry {name!r}: {kind} must be a non-empty array")
    return AbilityEntry(
        theme=Theme.parse(obj["theme"]),
        name=name,
        description=obj["description"],
        drivers=tuple(_factor_from_json(f, name, "driver") for f in obj["drivers"]),
        blockers=tuple(_factor_from_json(f, name, "blocker") for f in obj["blockers"]),
    )


def load_catalog(path: str | Path) -> AbilityCatalog:
    """Load a JSONL ability catalog; duplicates and malformed entries error."""
    path = Path(path)
    try:
        raw_lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CatalogError(f"cannot read catalog file {path}: {exc}") from exc
    entries: list[AbilityEntry] = []
    for lineno, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        try:
            entries.append(entry_from_json(obj))
        except CatalogError as exc:
            raise CatalogError(f"line {lineno}: {exc}") from exc
    return AbilityCatalog(entries=tuple(entries), source="curated-file")


def save_catalog(catalog: AbilityCatalog, path: str | Path) -> None:
    path = Path(path)
    lines = [json.dumps(e.to_json(), ensure_ascii=False) for e in catalog.entries]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def list_abilities(catalog: AbilityCatalog, theme: Theme) -> list[AbilityEntry]:
    """Entries of one theme, in stable catalog order."""
    return [e for e in catalog.entries if e.theme is theme]


def get_ability(catalog: AbilityCatalog, theme: Theme, name: str) -> AbilityEntry:
    """Unique entry for (theme, name); name comparison is case-sensitive."""
    for entry in catalog.entries:
        if entry.theme is theme and entry.name == name:
            return entry
    raise AbilityNotFoundError(theme.value, name)


def generate_ability_entries(
    theme: Theme,
    corpus: Corpus,
    index: RetrievalIndex,
    provider,
    k: int = 4,
) -> list[AbilityEntry]:
    """Draft candidate ability entries for a theme from grounded passages.

    The provider is asked for a JSON array of entries; drafts that fail
    AbilityEntry validation are logged and dropped, never persisted. Raises
    GroundingError when the theme has no passages and CatalogError when the
    provider output is unusable in full.
    """
    from .engine import build_drafting_bundle  # local import to avoid a cycle

    query = f"{theme.value} abilities skills strengths support"
    grounding = retrieve(index, query, theme, k)
    if not grounding:
        raise GroundingError(f"no grounding passages for theme {theme.value}")
    passages = [p for p, _ in grounding]
    bundle = build_drafting_bundle(theme, passages)
    completion = provider.complete(bundle)
    try:
        drafts = json.loads(completion)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"provider did not return JSON ability drafts: {exc.msg}") from exc
    if not isinstance(drafts, list):
        raise CatalogError("provider ability drafts must be a JSON array")

    accepted: list[AbilityEntry] = []
    for i, draft in enumerate(drafts):
        if isinstance(draft, dict) and "theme" not in draft:
            draft = {"theme": theme.value, **draft}
        try:
            entry = entry_from_json(draft)
        except (CatalogError, UnknownThemeError) as exc:
            logger.warning("rejected ability draft %d: %s", i, exc)
            continue
        if entry.theme is not theme:
            logger.warning("rejected ability draft %d: wrong theme %s", i, entry.theme.value)
            continue
        accepted.append(entry)
    if not accepted:
        raise CatalogError("all provider ability drafts failed validation")
    return accepted
