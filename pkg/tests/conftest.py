from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from persona_workbench.abilities import load_catalog
from persona_workbench.config import ServiceConfig, packaged_data
from persona_workbench.corpus import load_corpus
from persona_workbench.engine import load_question_bank
from persona_workbench.providers import StubProvider
from persona_workbench.retrieval import build_index, passages_from_corpus
from persona_workbench.service import create_app
from persona_workbench.store import PersonaStore

FIXTURE_CORPUS = packaged_data("story_corpus.jsonl")
FIXTURE_CATALOG = packaged_data("ability_catalog.jsonl")
FIXTURE_QUESTIONS = packaged_data("question_bank.jsonl")

EMILY_CREATION_REQUEST = {
    "theme": "Employment",
    "profile": {
        "name": "Emily",
        "age": 34,
        "occupation": "School assistant",
        "Medical Condition": "Down Syndrome",
    },
}

EMILY_CHAT_REQUEST = {
    "context": [
        {
            "role": "system",
            "content": (
                "You are Emily, a school assistant with Down syndrome. Despite your "
                "condition, you are passionate about your job and dedicated to your "
                "responsibilities."
            ),
        },
        {"role": "assistant", "content": "Hello, I'm Emily. How can I assist you today?"},
        {
            "role": "user",
            "content": "What motivates you to learn new skills, especially those related to your job?",
        },
    ]
}


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(FIXTURE_CORPUS)


@pytest.fixture(scope="session")
def passages(corpus):
    return passages_from_corpus(corpus)


@pytest.fixture(scope="session")
def index(passages):
    return build_index(passages)


@pytest.fixture(scope="session")
def catalog():
    return load_catalog(FIXTURE_CATALOG)


@pytest.fixture(scope="session")
def question_bank():
    return load_question_bank(FIXTURE_QUESTIONS)


@pytest.fixture
def store(tmp_path):
    return PersonaStore(tmp_path / "store")


@pytest.fixture
def provider():
    return StubProvider(seed=0)


@pytest.fixture
def service_config(tmp_path):
    return ServiceConfig(store_dir=tmp_path / "service_store")


@pytest.fixture
def client(service_config):
    app = create_app(service_config)
    with TestClient(app) as test_client:
        yield test_client
