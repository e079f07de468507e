"""HTTP service exposing the persona creation/chat APIs and the library.

Response bodies for the two core APIs keep the documented key names exactly;
extensions (persona_id, conversation_id) ride along as additional keys and
are never renames. Handlers are stateless apart from the persona store; the
corpus, index, and catalog are immutable and shared across requests.
"""

from __future__ import annotations

import logging
from typing import Literal

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import AliasChoices, BaseModel, ConfigDict, Field

from . import engine
from .abilities import get_ability, list_abilities, load_catalog
from .config import ServiceConfig
from .corpus import Theme, load_corpus
from .errors import (
    AbilityNotFoundError,
    NotFoundError,
    ProviderError,
    UnknownThemeError,
    ValidationError,
    WorkbenchError,
)
from .providers import BoundedProvider, RemoteProvider, StubProvider
from .retrieval import build_index, passages_from_corpus
from .store import PersonaStore

logger = logging.getLogger(__name__)


class ProfileBody(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    name: str
    age: int
    occupation: str
    medical_condition: str = Field(
        validation_alias=AliasChoices("Medical Condition", "medical_condition"),
        serialization_alias="Medical Condition",
    )


class PersonaCreationRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    theme: str
    profile: ProfileBody


class ChatTurnBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    role: Literal["system", "assistant", "user"]
    content: str


class ChatRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    context: list[ChatTurnBody]
    persona_id: str | None = None
    conversation_id: str | None = None


class AbilitySelection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    theme: str
    name: str


class PersonaUpdateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    selected_abilities: list[AbilitySelection]


class MarkRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    turn_index: int
    marked: bool = True


class AnnotateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    note: str


def _error_body(code: str, message: str, field: str | None = None) -> dict:
    return {"error": {"code": code, "message": message, "field": field}}


def build_provider(config: ServiceConfig):
    if config.provider == "stub":
        inner = StubProvider(seed=config.stub_seed)
    else:
        inner = RemoteProvider(
            base_url=config.remote_base_url,
            model=config.remote_model,
            api_key=config.remote_api_key(),
            timeout=config.request_timeout,
        )
    return BoundedProvider(inner, max_inflight=config.max_inflight)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    corpus = load_corpus(config.corpus_path)
    index = build_index(passages_from_corpus(corpus))
    catalog = load_catalog(config.catalog_path)
    question_bank = engine.load_question_bank(config.question_bank_path)
    store = PersonaStore(config.store_dir)
    provider = build_provider(config)

    app = FastAPI(title="persona-workbench", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.config = config
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def on_schema_violation(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = [str(part) for part in first.get("loc", []) if part != "body"]
        return JSONResponse(
            status_code=400,
            content=_error_body("schema_violation", first.get("msg", "invalid body"), ".".join(loc) or None),
        )

    @app.exception_handler(ValidationError)
    async def on_validation_error(request: Request, exc: ValidationError):
        return JSONResponse(status_code=400, content=_error_body("invalid_value", str(exc), exc.field))

    @app.exception_handler(UnknownThemeError)
    async def on_unknown_theme(request: Request, exc: UnknownThemeError):
        return JSONResponse(status_code=404, content=_error_body("not_found", str(exc), "theme"))

    @app.exception_handler(NotFoundError)
    async def on_not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content=_error_body("not_found", str(exc)))

    @app.exception_handler(AbilityNotFoundError)
    async def on_ability_not_found(request: Request, exc: AbilityNotFoundError):
        return JSONResponse(
            status_code=404, content=_error_body("not_found", str(exc), "selected_abilities")
        )

    @app.exception_handler(ProviderError)
    async def on_provider_error(request: Request, exc: ProviderError):
        return JSONResponse(
            status_code=502,
            content={
                "error": {
                    "code": "provider_failure",
                    "message": str(exc),
                    "field": None,
                    "retryable": exc.retryable,
                }
            },
        )

    @app.exception_handler(WorkbenchError)
    async def on_workbench_error(request: Request, exc: WorkbenchError):
        return JSONResponse(status_code=400, content=_error_body("invalid_value", str(exc)))

    def _parse_body_theme(raw: str) -> Theme:
        try:
            return Theme.parse(raw)
        except UnknownThemeError as exc:
            raise ValidationError(str(exc), field="theme") from exc

    # -- core persona APIs ---------------------------------------------------

    @app.post("/api/personas")
    def create_persona_endpoint(body: PersonaCreationRequest) -> dict:
        theme = _parse_body_theme(body.theme)
        result = engine.create_persona(
            theme,
            {
                "name": body.profile.name,
                "age": body.profile.age,
                "occupation": body.profile.occupation,
                "medical_condition": body.profile.medical_condition,
            },
            catalog,
            index,
            provider,
            store,
            k=config.retrieval_k,
        )
        return {
            "description": result.description,
            "system_prompt": result.system_prompt,
            "assistant_message": result.assistant_message,
            "persona_id": result.persona_id,
        }

    @app.post("/api/chat")
    def chat_endpoint(body: ChatRequest) -> dict:
        context = [engine.ChatTurn(role=t.role, content=t.content) for t in body.context]
        if not context:
            raise ValidationError("context must be non-empty", field="context")
        if context[-1].role != "user":
            raise ValidationError("last context turn must have role user", field="context")
        if body.persona_id is None:
            # documented-shape passthrough: stateless, ungrounded (no theme)
            bundle = engine.bundle_from_context(context)
            reply = provider.complete(bundle)
            return {"assistant_message": {"role": "assistant", "content": reply}}
        result = engine.chat(
            body.persona_id,
            context,
            catalog,
            index,
            provider,
            store,
            conversation_id=body.conversation_id,
            k=config.retrieval_k,
            history_window=config.history_window,
        )
        return {
            "assistant_message": result.reply.to_json(),
            "persona_id": body.persona_id,
            "conversation_id": result.conversation_id,
        }

    # -- themes, abilities, questions ---------------------------------------

    @app.get("/api/themes")
    def themes_endpoint() -> list[str]:
        return [t.value for t in Theme]

    @app.get("/api/themes/{theme}/abilities")
    def abilities_endpoint(theme: str) -> list[dict]:
        parsed = Theme.parse(theme)  # 404 on unknown via handler
        return [entry.to_json() for entry in list_abilities(catalog, parsed)]

    @app.get("/api/questions")
    def questions_endpoint(
        theme: str, ability: list[str] = Query(default=[])
    ) -> list[str]:
        parsed = Theme.parse(theme)
        return engine.suggest_questions(parsed, ability, question_bank)

    # -- persona library -----------------------------------------------------

    @app.get("/api/personas")
    def list_personas_endpoint() -> list[dict]:
        return [
            {
                "persona_id": s.persona_id,
                "name": s.name,
                "theme": s.theme.value,
                "created_at": s.created_at,
                "description": s.description,
            }
            for s in store.list_personas()
        ]

    @app.get("/api/personas/{persona_id}")
    def get_persona_endpoint(persona_id: str) -> dict:
        return store.load_persona(persona_id).to_json()

    @app.patch("/api/personas/{persona_id}")
    def update_persona_endpoint(persona_id: str, body: PersonaUpdateRequest) -> dict:
        profile = store.load_persona(persona_id)
        selections = tuple(
            (_parse_body_theme(sel.theme), sel.name) for sel in body.selected_abilities
        )
        entries = [get_ability(catalog, theme, name) for theme, name in selections]
        profile.selected_abilities = selections
        profile.system_prompt = engine.assemble_system_prompt(
            profile, entries, reply_word_cap=config.reply_word_cap
        )
        store.update_persona(
            profile,
            "selected_abilities=" + ", ".join(f"{t.value}/{n}" for t, n in selections),
        )
        return profile.to_json()

    # -- conversations ---------------------------------------------------------

    @app.post("/api/personas/{persona_id}/conversations")
    def new_conversation_endpoint(persona_id: str) -> dict:
        return {"conversation_id": store.new_conversation(persona_id)}

    @app.get("/api/personas/{persona_id}/conversations")
    def list_conversations_endpoint(persona_id: str) -> list[dict]:
        return [
            {
                "conversation_id": s.conversation_id,
                "persona_id": s.persona_id,
                "created_at": s.created_at,
                "turn_count": s.turn_count,
                "marked_count": s.marked_count,
            }
            for s in store.list_conversations(persona_id)
        ]

    @app.get("/api/conversations/{conversation_id}")
    def get_conversation_endpoint(conversation_id: str) -> dict:
        conversation = store.get_conversation(conversation_id)
        return {
            "conversation_id": conversation.conversation_id,
            "persona_id": conversation.persona_id,
            "created_at": conversation.created_at,
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

    @app.post("/api/conversations/{conversation_id}/mark")
    def mark_endpoint(conversation_id: str, body: MarkRequest) -> dict:
        if body.marked:
            marked = store.mark_question(conversation_id, body.turn_index)
        else:
            marked = store.unmark_question(conversation_id, body.turn_index)
        return {"conversation_id": conversation_id, "marked": sorted(marked)}

    @app.post("/api/conversations/{conversation_id}/annotate")
    def annotate_endpoint(conversation_id: str, body: AnnotateRequest) -> dict:
        return store.annotate(conversation_id, body.note).to_json()

    @app.get("/api/conversations/{conversation_id}/script")
    def script_endpoint(conversation_id: str, marked_only: bool = False) -> dict:
        script = store.export_interview_script(conversation_id, marked_only=marked_only)
        return {
            "conversation_id": conversation_id,
            "persona_id": script.persona_id,
            "generated_at": script.generated_at,
            "marked_only": marked_only,
            "items": [[q, a] for q, a in script.items],
        }

    return app
