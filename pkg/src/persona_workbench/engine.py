"""Prompt assembly, persona creation, and chat orchestration.

Every generated reply is grounded by injecting theme-restricted passages,
verbatim and fenced, into the system turn of the prompt bundle. The engine is
stateless between calls; all durable state lives in the persona store.
"""

from __future__ import annotations

import json
import logging
import re
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, Mapping, Protocol, Sequence

from .abilities import AbilityCatalog, AbilityEntry, get_ability
from .corpus import Theme
from .errors import ValidationError
from .retrieval import Passage, RetrievalIndex, retrieve

if TYPE_CHECKING:
    from .store import Conversation, InterviewScript, PersonaStore

logger = logging.getLogger(__name__)

ROLES = ("system", "assistant", "user")
STRATEGIES = ("general", "role-play", "one-shot", "incremental")

CONTEXT_OPEN = "###CONTEXT###"
CONTEXT_CLOSE = "###END CONTEXT###"
PROFILE_OPEN = "###PROFILE###"
PROFILE_CLOSE = "###END PROFILE###"
ABILITIES_OPEN = "###ABILITIES###"
ABILITIES_CLOSE = "###END ABILITIES###"

DEFAULT_REPLY_WORD_CAP = 120

# instruction prefixes recognized by the deterministic stub provider
DRAFT_DESCRIPTION_PREFIX = "Create a persona description for "
ENRICH_ATTRIBUTES_PREFIX = "Add the following attributes to the persona:"
DRAFT_ABILITIES_PREFIX = "Draft ability entries"


def now_utc() -> str:
    # fixed-width so lexical ordering of timestamps equals chronological
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%f+00:00")


@dataclass(frozen=True)
class ChatTurn:
    """One conversation message with a role from the closed set."""

    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValidationError(f"role must be one of {ROLES}, got {self.role!r}", field="role")
        if not self.content:
            raise ValidationError("content must be non-empty", field="content")

    def to_json(self) -> dict:
        return {"role": self.role, "content": self.content}


@dataclass(frozen=True)
class PromptBundle:
    """Fully assembled, ordered provider input.

    The first turn is always the system turn; grounding passages appear
    verbatim inside it, wrapped in ###CONTEXT### fences.
    """

    turns: tuple[ChatTurn, ...]
    grounding: tuple[Passage, ...] = ()
    strategy: str = "general"

    def __post_init__(self) -> None:
        if not self.turns:
            raise ValidationError("bundle must have at least one turn")
        if self.turns[0].role != "system":
            raise ValidationError("first bundle turn must have role system")
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"strategy must be one of {STRATEGIES}")
        system_content = self.turns[0].content
        for passage in self.grounding:
            if passage.text not in system_content:
                raise ValidationError(
                    f"grounding passage {passage.passage_id} not present in system turn"
                )

    def to_json(self) -> dict:
        """Canonical serialization (used for stub digests and logging)."""
        return {
            "strategy": self.strategy,
            "turns": [t.to_json() for t in self.turns],
            "grounding": [
                {"passage_id": p.passage_id, "record_id": p.record_id} for p in self.grounding
            ],
        }


class LlmProvider(Protocol):
    """Behavioral contract for completion backends."""

    identity: str

    def complete(self, bundle: PromptBundle) -> str:
        """Return the assistant completion for an assembled bundle."""
        ...


@dataclass
class PersonaProfile:
    """A created persona: attributes, selections, and its system prompt."""

    persona_id: str
    theme: Theme
    name: str
    age: int
    occupation: str
    medical_condition: str
    selected_abilities: tuple[tuple[Theme, str], ...] = ()
    description: str = ""
    system_prompt: str = ""
    created_at: str = field(default_factory=now_utc)

    def to_json(self) -> dict:
        return {
            "persona_id": self.persona_id,
            "theme": self.theme.value,
            "name": self.name,
            "age": self.age,
            "occupation": self.occupation,
            "medical_condition": self.medical_condition,
            "selected_abilities": [[t.value, n] for t, n in self.selected_abilities],
            "description": self.description,
            "system_prompt": self.system_prompt,
            "created_at": self.created_at,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "PersonaProfile":
        return cls(
            persona_id=obj["persona_id"],
            theme=Theme.parse(obj["theme"]),
            name=obj["name"],
            age=obj["age"],
            occupation=obj["occupation"],
            medical_condition=obj["medical_condition"],
            selected_abilities=tuple(
                (Theme.parse(t), n) for t, n in obj.get("selected_abilities", [])
            ),
            description=obj.get("description", ""),
            system_prompt=obj.get("system_prompt", ""),
            created_at=obj["created_at"],
        )


def _validate_profile_inputs(name: str, age: object, occupation: str, medical_condition: str) -> None:
    if not isinstance(name, str) or not name.strip():
        raise ValidationError("name must be a non-empty string", field="profile.name")
    if isinstance(age, bool) or not isinstance(age, int) or age <= 0:
        raise ValidationError("age must be a positive integer", field="profile.age")
    if not isinstance(occupation, str) or not occupation.strip():
        raise ValidationError("occupation must be a non-empty string", field="profile.occupation")
    if not isinstance(medical_condition, str) or not medical_condition.strip():
        raise ValidationError(
            "medical condition must be a non-empty string", field="profile.Medical Condition"
        )


def resolve_selected_abilities(
    catalog: AbilityCatalog, profile: PersonaProfile
) -> list[AbilityEntry]:
    """Catalog entries for the profile's selections; missing entries raise."""
    return [get_ability(catalog, theme, name) for theme, name in profile.selected_abilities]


def assemble_system_prompt(
    profile: PersonaProfile,
    abilities: Sequence[AbilityEntry],
    reply_word_cap: int = DEFAULT_REPLY_WORD_CAP,
) -> str:
    """Role-play system prompt for a populated profile.

    Opens with "You are <name>", carries the profile attributes verbatim in a
    delimited block, and lists each selected ability with one driver and one
    blocker. Raises when a selected ability has no entry among ``abilities``.
    """
    _validate_profile_inputs(profile.name, profile.age, profile.occupation, profile.medical_condition)
    by_key = {(e.theme, e.name): e for e in abilities}
    for key in profile.selected_abilities:
        if key not in by_key:
            raise ValidationError(
                f"selected ability ({key[0].value}, {key[1]!r}) missing from catalog",
                field="selected_abilities",
            )

    lines = [
        f"You are {profile.name}. You are a {profile.age}-year-old "
        f"{profile.occupation.lower()} with {profile.medical_condition}. "
        f"Stay in character and speak in the first person about your "
        f"{profile.theme.value.lower()} experiences.",
        PROFILE_OPEN,
        f"Name: {profile.name}",
        f"Age: {profile.age}",
        f"Occupation: {profile.occupation}",
        f"Medical Condition: {profile.medical_condition}",
        f"Theme: {profile.theme.value}",
        PROFILE_CLOSE,
    ]
    if profile.selected_abilities:
        lines.append(ABILITIES_OPEN)
        for key in profile.selected_abilities:
            entry = by_key[key]
            lines.append(
                f"- {entry.name} (driver: {entry.drivers[0].name}; "
                f"blocker: {entry.blockers[0].name})"
            )
        lines.append(ABILITIES_CLOSE)
    lines.append(
        f"Ground every answer in the material between the {CONTEXT_OPEN} fences when "
        f"present, keep replies under about {reply_word_cap} words, and never invent "
        f"details that contradict your profile."
    )
    return "\n".join(lines)


def _grounding_block(passages: Sequence[Passage]) -> str:
    chunks = [f"[record {p.record_id}] {p.text}" for p in passages]
    return "\n".join([CONTEXT_OPEN, *chunks, CONTEXT_CLOSE])


def _system_turn(base_prompt: str, passages: Sequence[Passage]) -> ChatTurn:
    content = base_prompt
    if passages:
        content = f"{base_prompt}\n{_grounding_block(passages)}"
    return ChatTurn(role="system", content=content)


def assemble_chat_bundle(
    profile: PersonaProfile,
    history: Sequence[ChatTurn],
    user_msg: str,
    passages: Sequence[Passage],
) -> PromptBundle:
    """Bundle ordered exactly [system, history..., user message].

    History is preserved verbatim and must not contain a system turn; the
    system turn is engine-owned and carries the fenced grounding passages.
    """
    if not user_msg:
        raise ValidationError("user message must be non-empty", field="user_msg")
    if not profile.system_prompt:
        raise ValidationError("profile has no system prompt; create the persona first")
    for i, turn in enumerate(history):
        if turn.role == "system":
            raise ValidationError(
                f"history turn {i} has role system; the system turn is engine-owned",
                field=f"context[{i}].role",
            )
    turns = (
        _system_turn(profile.system_prompt, passages),
        *history,
        ChatTurn(role="user", content=user_msg),
    )
    return PromptBundle(turns=turns, grounding=tuple(passages), strategy="role-play")


def bundle_from_context(
    context: Sequence[ChatTurn], passages: Sequence[Passage] = ()
) -> PromptBundle:
    """Passthrough bundle for client-supplied context (no stored persona).

    The client's leading system turn is used as the base prompt; when absent
    a neutral one is synthesized. The final turn must be the user message.
    """
    if not context:
        raise ValidationError("context must be non-empty", field="context")
    if context[-1].role != "user":
        raise ValidationError("last context turn must have role user", field="context")
    if context[0].role == "system":
        base, rest = context[0].content, list(context[1:])
    else:
        base, rest = "You are a persona. Stay in character and answer in the first person.", list(context)
    for i, turn in enumerate(rest[:-1]):
        if turn.role == "system":
            raise ValidationError(
                f"context turn {i + 1} has role system; only the first turn may",
                field=f"context[{i + 1}].role",
            )
    turns = (_system_turn(base, passages), *rest)
    return PromptBundle(turns=turns, grounding=tuple(passages), strategy="role-play")


def build_drafting_bundle(theme: Theme, passages: Sequence[Passage]) -> PromptBundle:
    """Bundle asking the provider to draft ability entries as a JSON array."""
    base = (
        "You are a careful curator. Draft ability entries grounded only in the "
        "material between the fences; answer with JSON and nothing else."
    )
    instruction = (
        f"{DRAFT_ABILITIES_PREFIX} for the {theme.value} theme as a JSON array. "
        'Each entry needs keys "name", "description", "drivers", "blockers"; '
        'drivers and blockers are arrays of {"name", "story"} with first-person stories.'
    )
    turns = (
        _system_turn(base, passages),
        ChatTurn(role="user", content=instruction),
    )
    return PromptBundle(turns=turns, grounding=tuple(passages), strategy="general")


def greeting_for(name: str) -> str:
    return f"Hello, I'm {name}. How can I assist you today?"


@dataclass(frozen=True)
class CreationResult:
    persona_id: str
    description: str
    system_prompt: str
    assistant_message: str


def create_persona(
    theme: Theme,
    inputs: Mapping[str, object],
    catalog: AbilityCatalog,
    index: RetrievalIndex,
    provider: LlmProvider,
    store: "PersonaStore",
    k: int = 4,
) -> CreationResult:
    """Create, ground, and persist a persona from profile attributes.

    Description drafting is a fixed two-step incremental chain: draft from
    grounded context, then enrich with the concrete attributes. Grounding
    passages are retrieved with the occupation and condition as the query.
    """
    if not isinstance(theme, Theme):
        theme = Theme.parse(theme)  # raises UnknownThemeError
    name = inputs.get("name", "")
    age = inputs.get("age", 0)
    occupation = inputs.get("occupation", "")
    medical_condition = inputs.get("medical_condition", "")
    _validate_profile_inputs(name, age, occupation, medical_condition)

    query = f"{occupation} {medical_condition}"
    grounding = [p for p, _ in retrieve(index, query, theme, k)]
    if not grounding:
        logger.warning("no grounding passages for persona creation (theme=%s)", theme.value)

    draft_base = (
        f"You are {name}. Draft first-person persona content grounded only in the "
        f"material between the fences."
    )
    step_one = PromptBundle(
        turns=(
            _system_turn(draft_base, grounding),
            ChatTurn(role="user", content=f"{DRAFT_DESCRIPTION_PREFIX}{name}."),
        ),
        grounding=tuple(grounding),
        strategy="incremental",
    )
    draft = provider.complete(step_one)

    enrich_msg = (
        f"{ENRICH_ATTRIBUTES_PREFIX} age {age}; occupation {occupation}; "
        f"medical condition {medical_condition}; theme {theme.value}."
    )
    step_two = PromptBundle(
        turns=(
            *step_one.turns,
            ChatTurn(role="assistant", content=draft),
            ChatTurn(role="user", content=enrich_msg),
        ),
        grounding=tuple(grounding),
        strategy="incremental",
    )
    description = provider.complete(step_two)

    profile = PersonaProfile(
        persona_id=str(uuid.uuid4()),
        theme=theme,
        name=name,
        age=age,
        occupation=occupation,
        medical_condition=medical_condition,
        description=description,
    )
    profile.system_prompt = assemble_system_prompt(profile, [])
    store.save_persona(profile)
    return CreationResult(
        persona_id=profile.persona_id,
        description=description,
        system_prompt=profile.system_prompt,
        assistant_message=greeting_for(name),
    )


@dataclass(frozen=True)
class ChatResult:
    reply: ChatTurn
    conversation_id: str


def chat(
    persona_id: str,
    context: Sequence[ChatTurn],
    catalog: AbilityCatalog,
    index: RetrievalIndex,
    provider: LlmProvider,
    store: "PersonaStore",
    conversation_id: str | None = None,
    k: int = 4,
    history_window: int | None = None,
) -> ChatResult:
    """One grounded exchange: retrieve, assemble, complete, persist.

    The client may send the full context or just the new user turn; the
    stored conversation wins on conflict. A leading client system turn is
    dropped (the system turn is engine-owned). Both the user turn and the
    reply are appended to the conversation, never rewriting prior turns.
    The full history is re-sent to the provider unless ``history_window``
    caps it to the most recent N turns (the store always keeps everything).
    """
    profile = store.load_persona(persona_id)
    if not context:
        raise ValidationError("context must be non-empty", field="context")
    if context[-1].role != "user":
        raise ValidationError("last context turn must have role user", field="context")
    resolve_selected_abilities(catalog, profile)  # fails fast on catalog drift

    incoming = list(context)
    if incoming and incoming[0].role == "system":
        incoming = incoming[1:]
    if not incoming:
        raise ValidationError("context carries no user message", field="context")
    user_turn = incoming[-1]
    prior = incoming[:-1]

    if conversation_id is None:
        conversation_id = store.new_conversation(persona_id)
        stored_turns: list[ChatTurn] = []
    else:
        conversation = store.get_conversation(conversation_id)
        if conversation.persona_id != persona_id:
            raise ValidationError(
                "conversation belongs to a different persona", field="conversation_id"
            )
        stored_turns = [st.turn for st in conversation.turns]

    if stored_turns:
        history = stored_turns
    else:
        history = prior
        for turn in prior:
            store.append_turn(conversation_id, turn)

    if history_window is not None and history_window >= 0:
        history = history[-history_window:] if history_window else []

    passages = [p for p, _ in retrieve(index, user_turn.content, profile.theme, k)]
    bundle = assemble_chat_bundle(profile, history, user_turn.content, passages)
    reply = ChatTurn(role="assistant", content=provider.complete(bundle))

    store.append_turn(conversation_id, user_turn)
    store.append_turn(conversation_id, reply)
    return ChatResult(reply=reply, conversation_id=conversation_id)


@dataclass(frozen=True)
class Question:
    """One suggested question, scoped to a theme and optionally an ability."""

    theme: Theme
    text: str
    ability: str | None = None


def load_question_bank(path: str | Path) -> tuple[Question, ...]:
    """Load the question bank JSONL: entries {theme, ability (optional), text}."""
    path = Path(path)
    try:
        raw_lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read question bank {path}: {exc}") from exc
    questions: list[Question] = []
    for lineno, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"question bank line {lineno}: invalid JSON ({exc.msg})") from exc
        extra = set(obj) - {"theme", "ability", "text"}
        if extra or "theme" not in obj or "text" not in obj:
            raise ValidationError(
                f"question bank line {lineno}: entries need theme and text (ability optional)"
            )
        if not isinstance(obj["text"], str) or not obj["text"]:
            raise ValidationError(f"question bank line {lineno}: text must be non-empty")
        questions.append(
            Question(theme=Theme.parse(obj["theme"]), text=obj["text"], ability=obj.get("ability"))
        )
    return tuple(questions)


def suggest_questions(
    theme: Theme,
    selected_abilities: Sequence[str],
    question_bank: Sequence[Question],
) -> list[str]:
    """Theme questions plus those tagged with a selected ability.

    Stable bank order, deduplicated by text. Ability names with no tagged
    questions simply fall back to the theme-level ones.
    """
    selected = set(selected_abilities)
    seen: set[str] = set()
    out: list[str] = []
    for question in question_bank:
        if question.theme is not theme:
            continue
        if question.ability is not None and question.ability not in selected:
            continue
        if question.text in seen:
            continue
        seen.add(question.text)
        out.append(question.text)
    return out


_SENTENCE_END = re.compile(r"^(.*?[.!?])(?=\s|$)", re.S)


def first_sentence(text: str) -> str:
    """First sentence of an answer; the whole text when no terminator exists."""
    stripped = text.strip()
    match = _SENTENCE_END.match(stripped)
    return match.group(1) if match else stripped


def summarize_conversation(conversation: "Conversation", marked_only: bool = False) -> "InterviewScript":
    """Extractive interview script: (question, first sentence of answer) pairs.

    Pairs are ordered by turn index; with ``marked_only`` only marked user
    turns contribute. Questions without a following assistant answer are
    skipped.
    """
    from .store import InterviewScript  # late import; store depends on this module

    items: list[tuple[str, str]] = []
    turns = conversation.turns
    for position, stored in enumerate(turns):
        if stored.turn.role != "user":
            continue
        if marked_only and stored.index not in conversation.marked:
            continue
        answer = None
        for later in turns[position + 1 :]:
            if later.turn.role == "user":
                break
            if later.turn.role == "assistant":
                answer = later.turn.content
                break
        if answer is None:
            continue
        items.append((stored.turn.content, first_sentence(answer)))
    return InterviewScript(
        persona_id=conversation.persona_id,
        generated_at=now_utc(),
        items=tuple(items),
    )
