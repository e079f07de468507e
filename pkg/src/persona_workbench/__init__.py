"""Grounded persona chat toolkit.

Builds interactive personas from a curated corpus of lived-experience story
records, grounds every reply through theme-restricted lexical retrieval, and
exposes the creation/chat APIs plus a persona library over HTTP and a CLI.
"""

from .abilities import (
    AbilityCatalog,
    AbilityEntry,
    AbilityFactor,
    generate_ability_entries,
    get_ability,
    list_abilities,
    load_catalog,
)
from .config import ServiceConfig, load_config
from .corpus import (
    Corpus,
    StoryRecord,
    Theme,
    corpus_stats,
    filter_by_theme,
    load_corpus,
    save_corpus,
)
from .engine import (
    ChatTurn,
    PersonaProfile,
    PromptBundle,
    assemble_chat_bundle,
    assemble_system_prompt,
    chat,
    create_persona,
    suggest_questions,
    summarize_conversation,
)
from .errors import WorkbenchError
from .providers import RemoteProvider, StubProvider
from .retrieval import (
    Passage,
    RetrievalIndex,
    bm25_score,
    build_index,
    passages_from_corpus,
    retrieve,
    tokenize,
)
from .store import Conversation, InterviewScript, PersonaStore, TimelineEvent

__version__ = "0.1.0"

__all__ = [
    "AbilityCatalog",
    "AbilityEntry",
    "AbilityFactor",
    "ChatTurn",
    "Conversation",
    "Corpus",
    "InterviewScript",
    "Passage",
    "PersonaProfile",
    "PersonaStore",
    "PromptBundle",
    "RemoteProvider",
    "RetrievalIndex",
    "ServiceConfig",
    "StoryRecord",
    "StubProvider",
    "Theme",
    "TimelineEvent",
    "WorkbenchError",
    "assemble_chat_bundle",
    "assemble_system_prompt",
    "bm25_score",
    "build_index",
    "chat",
    "corpus_stats",
    "create_persona",
    "filter_by_theme",
    "generate_ability_entries",
    "get_ability",
    "list_abilities",
    "load_catalog",
    "load_config",
    "load_corpus",
    "passages_from_corpus",
    "retrieve",
    "save_corpus",
    "suggest_questions",
    "summarize_conversation",
    "tokenize",
]
