"""Durable persistence for personas, conversations, marks, and annotations.

Single-directory, file-per-entity JSON store with atomic write-rename.
Conversations are append-only: no operation rewrites an existing turn.
Deletion is a soft tombstone so the annotation timeline stays audit-complete.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, replace
from pathlib import Path

from .corpus import Theme
from .engine import ChatTurn, PersonaProfile, now_utc
from .errors import NotFoundError, StoreError, ValidationError

SCHEMA_VERSION = 1

EVENT_KINDS = (
    "question-asked",
    "question-marked",
    "question-unmarked",
    "note-added",
    "persona-edited",
)


@dataclass(frozen=True)
class StoredTurn:
    index: int
    turn: ChatTurn
    timestamp: str


@dataclass(frozen=True)
class TimelineEvent:
    """One logged change. ``conversation_id`` holds the owning scope:
    the conversation for chat events, the persona for persona-edited."""

    event_id: str
    conversation_id: str
    kind: str
    payload: str
    timestamp: str

    def to_json(self) -> dict:
        return {
            "event_id": self.event_id,
            "conversation_id": self.conversation_id,
            "kind": self.kind,
            "payload": self.payload,
            "timestamp": self.timestamp,
        }


@dataclass(frozen=True)
class Conversation:
    conversation_id: str
    persona_id: str
    created_at: str
    turns: tuple[StoredTurn, ...] = ()
    marked: frozenset[int] = frozenset()
    events: tuple[TimelineEvent, ...] = ()
    deleted: bool = False


@dataclass(frozen=True)
class InterviewScript:
    """Extractive export of a conversation's question/answer pairs."""

    persona_id: str
    generated_at: str
    items: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class PersonaSummary:
    persona_id: str
    name: str
    theme: Theme
    created_at: str
    description: str


@dataclass(frozen=True)
class ConversationSummary:
    conversation_id: str
    persona_id: str
    created_at: str
    turn_count: int
    marked_count: int


def _atomic_write_json(path: Path, payload: dict) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
    os.replace(tmp, path)


class PersonaStore:
    """File-backed store rooted at one directory.

    Writes to a conversation are serialized by a per-entity lock; reads work
    on immutable snapshots, so no read ever blocks another.
    """

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.personas_dir = self.root / "personas"
        self.conversations_dir = self.root / "conversations"
        self.scripts_dir = self.root / "scripts"
        for directory in (self.personas_dir, self.conversations_dir, self.scripts_dir):
            directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, entity_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(entity_id, threading.Lock())

    def _next_timestamp(self, previous: str | None) -> str:
        now = now_utc()
        if previous is not None and now < previous:
            return previous  # clamp so per-conversation timestamps never regress
        return now

    # -- personas ----------------------------------------------------------

    def _persona_path(self, persona_id: str) -> Path:
        return self.personas_dir / f"{persona_id}.json"

    def _read_persona_file(self, persona_id: str) -> dict:
        path = self._persona_path(persona_id)
        if not path.exists():
            raise NotFoundError(f"unknown persona {persona_id!r}", field="persona_id")
        return json.loads(path.read_text(encoding="utf-8"))

    def _validate_profile(self, profile: PersonaProfile) -> None:
        if not profile.persona_id:
            raise ValidationError("persona_id must be non-empty", field="persona_id")
        if not isinstance(profile.theme, Theme):
            raise ValidationError("theme must be a Theme", field="theme")
        if not profile.name:
            raise ValidationError("name must be non-empty", field="name")
        if not profile.description or not profile.system_prompt:
            raise ValidationError(
                "description and system_prompt must be non-empty after creation"
            )

    def save_persona(self, profile: PersonaProfile) -> str:
        """Persist a newly created persona; the id must be unused."""
        self._validate_profile(profile)
        with self._lock(profile.persona_id):
            path = self._persona_path(profile.persona_id)
            if path.exists():
                raise StoreError(f"persona {profile.persona_id!r} already exists")
            payload = {
                "schema_version": SCHEMA_VERSION,
                **profile.to_json(),
                "deleted": False,
                "events": [],
            }
            _atomic_write_json(path, payload)
        return profile.persona_id

    def update_persona(self, profile: PersonaProfile, change_note: str) -> None:
        """Overwrite an existing persona and log a persona-edited event."""
        self._validate_profile(profile)
        with self._lock(profile.persona_id):
            existing = self._read_persona_file(profile.persona_id)
            if existing.get("deleted"):
                raise NotFoundError(f"unknown persona {profile.persona_id!r}", field="persona_id")
            events = existing.get("events", [])
            last_ts = events[-1]["timestamp"] if events else None
            event = TimelineEvent(
                event_id=str(uuid.uuid4()),
                conversation_id=profile.persona_id,
                kind="persona-edited",
                payload=change_note,
                timestamp=self._next_timestamp(last_ts),
            )
            payload = {
                "schema_version": SCHEMA_VERSION,
                **profile.to_json(),
                "created_at": existing["created_at"],
                "deleted": False,
                "events": [*events, event.to_json()],
            }
            _atomic_write_json(self._persona_path(profile.persona_id), payload)

    def load_persona(self, persona_id: str) -> PersonaProfile:
        data = self._read_persona_file(persona_id)
        if data.get("deleted"):
            raise NotFoundError(f"unknown persona {persona_id!r}", field="persona_id")
        return PersonaProfile.from_json(data)

    def persona_events(self, persona_id: str) -> list[TimelineEvent]:
        data = self._read_persona_file(persona_id)
        return [TimelineEvent(**e) for e in data.get("events", [])]

    def list_personas(self) -> list[PersonaSummary]:
        """All live personas, newest first; ties broken by id ascending."""
        summaries = []
        for path in self.personas_dir.glob("*.json"):
            data = json.loads(path.read_text(encoding="utf-8"))
            if data.get("deleted"):
                continue
            summaries.append(
                PersonaSummary(
                    persona_id=data["persona_id"],
                    name=data["name"],
                    theme=Theme.parse(data["theme"]),
                    created_at=data["created_at"],
                    description=data.get("description", ""),
                )
            )
        summaries.sort(key=lambda s: s.persona_id)
        summaries.sort(key=lambda s: s.created_at, reverse=True)
        return summaries

    def delete_persona(self, persona_id: str) -> None:
        """Soft-delete; the file and its event history stay on disk."""
        with self._lock(persona_id):
            data = self._read_persona_file(persona_id)
            data["deleted"] = True
            _atomic_write_json(self._persona_path(persona_id), data)

    def delete_conversation(self, conversation_id: str) -> None:
        """Soft-delete; turns and timeline stay on disk for the audit trail."""
        with self._lock(conversation_id):
            data = self._read_conversation_file(conversation_id)
            data["deleted"] = True
            _atomic_write_json(self._conversation_path(conversation_id), data)

    # -- conversations -----------------------------------------------------

    def _conversation_path(self, conversation_id: str) -> Path:
        return self.conversations_dir / f"{conversation_id}.json"

    def _read_conversation_file(self, conversation_id: str) -> dict:
        path = self._conversation_path(conversation_id)
        if not path.exists():
            raise NotFoundError(f"unknown conversation {conversation_id!r}", field="conversation_id")
        return json.loads(path.read_text(encoding="utf-8"))

    def _write_conversation(self, conversation: Conversation) -> None:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "conversation_id": conversation.conversation_id,
            "persona_id": conversation.persona_id,
            "created_at": conversation.created_at,
            "deleted": conversation.deleted,
            "turns": [
                {
                    "index": st.index,
                    "role": st.turn.role,
                    "content": st.turn.content,
                    "timestamp": st.timestamp,
                }
                for st in conversation.turns
            ],
            "marked": sorted(conversation.marked),
            "events": [e.to_json() for e in conversation.events],
        }
        _atomic_write_json(self._conversation_path(conversation.conversation_id), payload)

    def _conversation_from_json(self, data: dict) -> Conversation:
        turns = tuple(
            StoredTurn(
                index=t["index"],
                turn=ChatTurn(role=t["role"], content=t["content"]),
                timestamp=t["timestamp"],
            )
            for t in data.get("turns", [])
        )
        return Conversation(
            conversation_id=data["conversation_id"],
            persona_id=data["persona_id"],
            created_at=data["created_at"],
            turns=turns,
            marked=frozenset(data.get("marked", [])),
            events=tuple(TimelineEvent(**e) for e in data.get("events", [])),
            deleted=data.get("deleted", False),
        )

    def new_conversation(self, persona_id: str) -> str:
        self.load_persona(persona_id)  # raises NotFoundError on unknown/deleted
        conversation = Conversation(
            conversation_id=str(uuid.uuid4()),
            persona_id=persona_id,
            created_at=now_utc(),
        )
        self._write_conversation(conversation)
        return conversation.conversation_id

    def get_conversation(self, conversation_id: str) -> Conversation:
        data = self._read_conversation_file(conversation_id)
        conversation = self._conversation_from_json(data)
        if conversation.deleted:
            raise NotFoundError(f"unknown conversation {conversation_id!r}", field="conversation_id")
        return conversation

    def list_conversations(self, persona_id: str) -> list[ConversationSummary]:
        self.load_persona(persona_id)
        summaries = []
        for path in self.conversations_dir.glob("*.json"):
            data = json.loads(path.read_text(encoding="utf-8"))
            if data["persona_id"] != persona_id or data.get("deleted"):
                continue
            summaries.append(
                ConversationSummary(
                    conversation_id=data["conversation_id"],
                    persona_id=persona_id,
                    created_at=data["created_at"],
                    turn_count=len(data.get("turns", [])),
                    marked_count=len(data.get("marked", [])),
                )
            )
        summaries.sort(key=lambda s: s.conversation_id)
        summaries.sort(key=lambda s: s.created_at, reverse=True)
        return summaries

    def _last_timestamp(self, conversation: Conversation) -> str | None:
        stamps = [st.timestamp for st in conversation.turns]
        stamps.extend(e.timestamp for e in conversation.events)
        return max(stamps) if stamps else None

    def _append_event(
        self, conversation: Conversation, kind: str, payload: str
    ) -> tuple[Conversation, TimelineEvent]:
        if kind not in EVENT_KINDS:
            raise StoreError(f"unknown event kind {kind!r}")
        event = TimelineEvent(
            event_id=str(uuid.uuid4()),
            conversation_id=conversation.conversation_id,
            kind=kind,
            payload=payload,
            timestamp=self._next_timestamp(self._last_timestamp(conversation)),
        )
        return replace(conversation, events=(*conversation.events, event)), event

    def append_turn(self, conversation_id: str, turn: ChatTurn) -> int:
        """Append one turn; returns its dense index. User turns are logged
        to the timeline as question-asked events."""
        with self._lock(conversation_id):
            conversation = self.get_conversation(conversation_id)
            index = len(conversation.turns)
            stored = StoredTurn(
                index=index,
                turn=turn,
                timestamp=self._next_timestamp(self._last_timestamp(conversation)),
            )
            conversation = replace(conversation, turns=(*conversation.turns, stored))
            if turn.role == "user":
                conversation, _ = self._append_event(conversation, "question-asked", turn.content)
            self._write_conversation(conversation)
            return index

    def _set_mark(self, conversation_id: str, turn_index: int, marked: bool) -> frozenset[int]:
        with self._lock(conversation_id):
            conversation = self.get_conversation(conversation_id)
            if turn_index < 0 or turn_index >= len(conversation.turns):
                raise ValidationError(
                    f"turn index {turn_index} out of range", field="turn_index"
                )
            if conversation.turns[turn_index].turn.role != "user":
                raise ValidationError(
                    f"turn {turn_index} is not a user question", field="turn_index"
                )
            new_marked = set(conversation.marked)
            changed = (turn_index not in new_marked) if marked else (turn_index in new_marked)
            if marked:
                new_marked.add(turn_index)
            else:
                new_marked.discard(turn_index)
            conversation = replace(conversation, marked=frozenset(new_marked))
            if changed:  # idempotent: no event when the set is unchanged
                kind = "question-marked" if marked else "question-unmarked"
                conversation, _ = self._append_event(conversation, kind, f"turn {turn_index}")
            self._write_conversation(conversation)
            return conversation.marked

    def mark_question(self, conversation_id: str, turn_index: int) -> frozenset[int]:
        return self._set_mark(conversation_id, turn_index, True)

    def unmark_question(self, conversation_id: str, turn_index: int) -> frozenset[int]:
        return self._set_mark(conversation_id, turn_index, False)

    def annotate(self, conversation_id: str, note: str) -> TimelineEvent:
        if not note:
            raise ValidationError("note must be non-empty", field="note")
        with self._lock(conversation_id):
            conversation = self.get_conversation(conversation_id)
            conversation, event = self._append_event(conversation, "note-added", note)
            self._write_conversation(conversation)
            return event

    def timeline(self, conversation_id: str) -> list[TimelineEvent]:
        return list(self.get_conversation(conversation_id).events)

    # -- interview scripts ---------------------------------------------------

    def export_interview_script(
        self, conversation_id: str, marked_only: bool = False
    ) -> InterviewScript:
        """Summarize the conversation and persist the script alongside it."""
        from .engine import summarize_conversation  # late import; engine imports our types

        with self._lock(conversation_id):
            conversation = self.get_conversation(conversation_id)
            script = summarize_conversation(conversation, marked_only=marked_only)
            payload = {
                "schema_version": SCHEMA_VERSION,
                "conversation_id": conversation_id,
                "persona_id": script.persona_id,
                "generated_at": script.generated_at,
                "marked_only": marked_only,
                "items": [[q, a] for q, a in script.items],
            }
            _atomic_write_json(self.scripts_dir / f"{conversation_id}.json", payload)
        return script

    def load_interview_script(self, conversation_id: str) -> InterviewScript:
        path = self.scripts_dir / f"{conversation_id}.json"
        if not path.exists():
            raise NotFoundError(f"no exported script for conversation {conversation_id!r}")
        data = json.loads(path.read_text(encoding="utf-8"))
        return InterviewScript(
            persona_id=data["persona_id"],
            generated_at=data["generated_at"],
            items=tuple((q, a) for q, a in data["items"]),
        )
