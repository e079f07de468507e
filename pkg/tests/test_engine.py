from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from persona_workbench.abilities import get_ability
from persona_workbench.corpus import Theme
from persona_workbench.engine import (
    ChatTurn,
    PersonaProfile,
    PromptBundle,
    Question,
    assemble_chat_bundle,
    assemble_system_prompt,
    bundle_from_context,
    chat,
    create_persona,
    first_sentence,
    load_question_bank,
    suggest_questions,
    summarize_conversation,
)
from persona_workbench.errors import (
    NotFoundError,
    ProviderError,
    ValidationError,
)
from persona_workbench.providers import StubProvider
from persona_workbench.retrieval import Passage, retrieve
from tests.oracle import oracle_retrieve

EMILY_INPUTS = {
    "name": "Emily",
    "age": 34,
    "occupation": "School assistant",
    "medical_condition": "Down Syndrome",
}

MOTIVATION_QUESTION = (
    "What motivates you to learn new skills, especially those related to your job?"
)


def emily_profile(**overrides) -> PersonaProfile:
    profile = PersonaProfile(
        persona_id="p-emily",
        theme=Theme.EMPLOYMENT,
        name="Emily",
        age=34,
        occupation="School assistant",
        medical_condition="Down Syndrome",
        **overrides,
    )
    if not profile.system_prompt and not profile.selected_abilities:
        profile.system_prompt = assemble_system_prompt(profile, [])
    return profile


def make_passage(pid=0, theme=Theme.EMPLOYMENT, text="memory skills help work"):
    return Passage(passage_id=pid, record_id=f"R-{pid}", theme=theme, text=text)


class TestChatTurn:
    def test_closed_role_set(self):
        with pytest.raises(ValidationError):
            ChatTurn(role="narrator", content="hi")

    def test_empty_content_rejected(self):
        with pytest.raises(ValidationError):
            ChatTurn(role="user", content="")


class TestAssembleSystemPrompt:
    def test_emily_without_abilities(self):
        prompt = assemble_system_prompt(emily_profile(), [])
        assert prompt.startswith("You are Emily")
        assert "school assistant" in prompt
        assert "34" in prompt
        assert "Occupation: School assistant" in prompt
        assert "Down Syndrome" in prompt
        assert "Employment" in prompt
        assert "###PROFILE###" in prompt and "###END PROFILE###" in prompt

    def test_emily_with_memory_skills_golden(self, catalog):
        # golden recorded from the templater
        profile = emily_profile(
            selected_abilities=((Theme.EMPLOYMENT, "Memory Skills"),), system_prompt=""
        )
        entry = get_ability(catalog, Theme.EMPLOYMENT, "Memory Skills")
        prompt = assemble_system_prompt(profile, [entry])
        assert prompt == (
            "You are Emily. You are a 34-year-old school assistant with Down Syndrome. "
            "Stay in character and speak in the first person about your employment experiences.\n"
            "###PROFILE###\n"
            "Name: Emily\n"
            "Age: 34\n"
            "Occupation: School assistant\n"
            "Medical Condition: Down Syndrome\n"
            "Theme: Employment\n"
            "###END PROFILE###\n"
            "###ABILITIES###\n"
            "- Memory Skills (driver: Visual and Auditory aids; blocker: Complex Information)\n"
            "###END ABILITIES###\n"
            "Ground every answer in the material between the ###CONTEXT### fences when "
            "present, keep replies under about 120 words, and never invent details that "
            "contradict your profile."
        )

    def test_empty_name_rejected(self):
        profile = emily_profile()
        profile.name = ""
        with pytest.raises(ValidationError, match="name"):
            assemble_system_prompt(profile, [])

    def test_selected_ability_missing_from_catalog(self):
        profile = emily_profile(
            selected_abilities=((Theme.EMPLOYMENT, "Juggling"),), system_prompt=""
        )
        with pytest.raises(ValidationError, match="missing from catalog"):
            assemble_system_prompt(profile, [])


class TestAssembleChatBundle:
    def test_minimal_bundle(self):
        bundle = assemble_chat_bundle(emily_profile(), [], "Hi", [])
        assert [t.role for t in bundle.turns] == ["system", "user"]
        assert bundle.turns[-1].content == "Hi"
        assert bundle.grounding == ()

    def test_documented_context_order_reproduced(self):
        history = [ChatTurn("assistant", "Hello, I'm Emily. How can I assist you today?")]
        bundle = assemble_chat_bundle(emily_profile(), history, MOTIVATION_QUESTION, [])
        assert [t.role for t in bundle.turns] == ["system", "assistant", "user"]
        assert bundle.turns[-1].content == MOTIVATION_QUESTION
        assert bundle.turns[1] == history[0]

    def test_grounding_passage_verbatim_and_fenced(self):
        passage = make_passage(text="I use color-coded labels at the register.")
        bundle = assemble_chat_bundle(emily_profile(), [], "How do you work?", [passage])
        system = bundle.turns[0].content
        assert passage.text in system
        assert system.index("###CONTEXT###") < system.index(passage.text)
        assert system.index(passage.text) < system.index("###END CONTEXT###")

    def test_history_with_system_turn_rejected(self):
        history = [ChatTurn("system", "You are someone else.")]
        with pytest.raises(ValidationError, match="engine-owned"):
            assemble_chat_bundle(emily_profile(), history, "Hi", [])

    def test_empty_user_msg_rejected(self):
        with pytest.raises(ValidationError, match="user message"):
            assemble_chat_bundle(emily_profile(), [], "", [])

    def test_history_not_mutated(self):
        history = [ChatTurn("user", "First?"), ChatTurn("assistant", "Yes.")]
        snapshot = list(history)
        assemble_chat_bundle(emily_profile(), history, "Second?", [])
        assert history == snapshot


@settings(max_examples=60, deadline=None)
@given(
    roles=st.lists(st.sampled_from(["user", "assistant"]), max_size=6),
    msg=st.text(min_size=1, max_size=40).filter(lambda s: s.strip()),
)
def test_bundle_ordering_property(roles, msg):
    history = [ChatTurn(role, f"{role} turn {i}") for i, role in enumerate(roles)]
    bundle = assemble_chat_bundle(emily_profile(), history, msg, [])
    assert bundle.turns[0].role == "system"
    assert bundle.turns[-1] == ChatTurn("user", msg)
    assert list(bundle.turns[1:-1]) == history


class TestBundleFromContext:
    def test_uses_client_system_turn(self):
        context = [
            ChatTurn("system", "You are Emily, a school assistant."),
            ChatTurn("user", "Hi"),
        ]
        bundle = bundle_from_context(context)
        assert bundle.turns[0].content == "You are Emily, a school assistant."
        assert bundle.turns[-1].content == "Hi"

    def test_synthesizes_system_when_absent(self):
        bundle = bundle_from_context([ChatTurn("user", "Hi")])
        assert bundle.turns[0].role == "system"
        assert len(bundle.turns) == 2

    def test_last_turn_must_be_user(self):
        with pytest.raises(ValidationError):
            bundle_from_context([ChatTurn("assistant", "Hello.")])


class TestPromptBundleInvariants:
    def test_first_turn_must_be_system(self):
        with pytest.raises(ValidationError):
            PromptBundle(turns=(ChatTurn("user", "hi"),))

    def test_grounding_must_appear_in_system_turn(self):
        with pytest.raises(ValidationError, match="not present"):
            PromptBundle(
                turns=(ChatTurn("system", "bare prompt"), ChatTurn("user", "hi")),
                grounding=(make_passage(),),
            )

    def test_unknown_strategy_rejected(self):
        with pytest.raises(ValidationError, match="strategy"):
            PromptBundle(turns=(ChatTurn("system", "x"),), strategy="freestyle")


class TestCreatePersona:
    def test_emily_result_shape(self, catalog, index, store, provider):
        result = create_persona(Theme.EMPLOYMENT, EMILY_INPUTS, catalog, index, provider, store)
        assert result.description
        assert result.system_prompt.startswith("You are Emily")
        assert result.assistant_message == "Hello, I'm Emily. How can I assist you today?"
        assert store.load_persona(result.persona_id).name == "Emily"

    def test_description_golden(self, catalog, index, store, provider):
        # golden recorded from the stub template over the shipped fixture
        result = create_persona(Theme.EMPLOYMENT, EMILY_INPUTS, catalog, index, provider, store)
        assert result.description == (
            "Hi! I am Emily, a 34-year-old school assistant with Down Syndrome. "
            "I love what I do, and my employment story comes from lived experience. "
            "[source:R-EMP-02]"
        )

    def test_stub_rerun_is_byte_identical(self, catalog, index, store, provider):
        first = create_persona(Theme.EMPLOYMENT, EMILY_INPUTS, catalog, index, provider, store)
        second = create_persona(Theme.EMPLOYMENT, EMILY_INPUTS, catalog, index, provider, store)
        assert first.description == second.description
        assert first.persona_id != second.persona_id

    def test_zero_age_rejected(self, catalog, index, store, provider):
        bad = dict(EMILY_INPUTS, age=0)
        with pytest.raises(ValidationError, match="age"):
            create_persona(Theme.EMPLOYMENT, bad, catalog, index, provider, store)

    def test_provider_failure_surfaces(self, catalog, index, store):
        class Failing:
            identity = "stub"

            def complete(self, bundle):
                raise ProviderError("backend down", retryable=True)

        with pytest.raises(ProviderError):
            create_persona(Theme.EMPLOYMENT, EMILY_INPUTS, catalog, index, Failing(), store)


class TestChat:
    def make_emily(self, catalog, index, store, provider):
        return create_persona(Theme.EMPLOYMENT, EMILY_INPUTS, catalog, index, provider, store)

    def test_documented_context_shape(self, catalog, index, store, provider):
        created = self.make_emily(catalog, index, store, provider)
        context = [
            ChatTurn("system", created.system_prompt),
            ChatTurn("assistant", created.assistant_message),
            ChatTurn("user", MOTIVATION_QUESTION),
        ]
        result = chat(created.persona_id, context, catalog, index, provider, store)
        assert result.reply.role == "assistant"
        assert result.reply.content

    def test_stub_reply_embeds_name_and_top_passage_marker(
        self, catalog, index, passages, store, provider
    ):
        created = self.make_emily(catalog, index, store, provider)
        result = chat(
            created.persona_id,
            [ChatTurn("user", MOTIVATION_QUESTION)],
            catalog,
            index,
            provider,
            store,
        )
        assert "Emily" in result.reply.content
        expected_top = oracle_retrieve(list(passages), MOTIVATION_QUESTION, Theme.EMPLOYMENT, 4)
        top_record = next(p for p in passages if p.passage_id == expected_top[0][0]).record_id
        assert f"[source:{top_record}]" in result.reply.content

    def test_last_turn_must_be_user(self, catalog, index, store, provider):
        created = self.make_emily(catalog, index, store, provider)
        with pytest.raises(ValidationError, match="role user"):
            chat(
                created.persona_id,
                [ChatTurn("assistant", "Hello.")],
                catalog,
                index,
                provider,
                store,
            )

    def test_unknown_persona(self, catalog, index, store, provider):
        with pytest.raises(NotFoundError):
            chat("missing", [ChatTurn("user", "Hi")], catalog, index, provider, store)

    def test_empty_context(self, catalog, index, store, provider):
        created = self.make_emily(catalog, index, store, provider)
        with pytest.raises(ValidationError, match="non-empty"):
            chat(created.persona_id, [], catalog, index, provider, store)

    def test_turns_appended_never_rewritten(self, catalog, index, store, provider):
        created = self.make_emily(catalog, index, store, provider)
        first = chat(
            created.persona_id,
            [ChatTurn("user", "What do you do at work?")],
            catalog,
            index,
            provider,
            store,
        )
        before = store.get_conversation(first.conversation_id).turns
        chat(
            created.persona_id,
            [ChatTurn("user", "And what helps you focus?")],
            catalog,
            index,
            provider,
            store,
            conversation_id=first.conversation_id,
        )
        after = store.get_conversation(first.conversation_id).turns
        assert after[: len(before)] == before
        assert len(after) == len(before) + 2

    def test_grounding_restricted_to_persona_theme(self, catalog, index, store, provider):
        created = create_persona(
            Theme.FAMILY,
            {
                "name": "Rosa",
                "age": 30,
                "occupation": "Cook",
                "medical_condition": "Down Syndrome",
            },
            catalog,
            index,
            provider,
            store,
        )
        result = chat(
            created.persona_id,
            [ChatTurn("user", "How do picture schedules help your family?")],
            catalog,
            index,
            provider,
            store,
        )
        assert "[source:R-FAM" in result.reply.content


class TestStubDeterminism:
    def test_identical_bundle_and_seed(self):
        bundle = assemble_chat_bundle(emily_profile(), [], "Hi there", [make_passage()])
        a = StubProvider(seed=5).complete(bundle)
        b = StubProvider(seed=5).complete(bundle)
        assert a == b

    def test_different_seed_differs(self):
        bundle = assemble_chat_bundle(emily_profile(), [], "Hi there", [make_passage()])
        assert StubProvider(seed=5).complete(bundle) != StubProvider(seed=6).complete(bundle)

    def test_different_bundle_differs(self):
        a = assemble_chat_bundle(emily_profile(), [], "Hi there", [])
        b = assemble_chat_bundle(emily_profile(), [], "Hi there!", [])
        provider = StubProvider(seed=5)
        assert provider.complete(a) != provider.complete(b)


class TestSuggestQuestions:
    def test_filter_oracle_over_shipped_bank(self, question_bank):
        got = suggest_questions(Theme.EMPLOYMENT, ["Memory Skills"], question_bank)
        expected = []
        for q in question_bank:  # independent filter pass
            if q.theme is Theme.EMPLOYMENT and q.ability in (None, "Memory Skills"):
                if q.text not in expected:
                    expected.append(q.text)
        assert got == expected
        assert got  # the shipped bank covers this combination

    def test_empty_bank(self):
        assert suggest_questions(Theme.EMPLOYMENT, ["Memory Skills"], []) == []

    def test_unknown_ability_falls_back_to_theme_level(self, question_bank):
        got = suggest_questions(Theme.EMPLOYMENT, ["No Such Ability"], question_bank)
        theme_level = [
            q.text for q in question_bank if q.theme is Theme.EMPLOYMENT and q.ability is None
        ]
        assert got == theme_level

    def test_deduplicates_by_text(self):
        bank = (
            Question(Theme.FAMILY, "How was dinner?"),
            Question(Theme.FAMILY, "How was dinner?", ability="Shared Routines"),
        )
        assert suggest_questions(Theme.FAMILY, ["Shared Routines"], bank) == ["How was dinner?"]

    def test_shipped_bank_loads(self, question_bank):
        assert len(question_bank) >= 12
        assert all(q.theme in set(Theme) for q in question_bank)


class TestSummarize:
    def test_first_sentence(self):
        assert first_sentence("I like my job. It keeps me busy.") == "I like my job."
        assert first_sentence("Do I like it? Yes!") == "Do I like it?"
        assert first_sentence("no terminator at all") == "no terminator at all"

    def _conversation(self, store, catalog, index, provider):
        created = create_persona(Theme.EMPLOYMENT, EMILY_INPUTS, catalog, index, provider, store)
        first = chat(
            created.persona_id,
            [ChatTurn("user", "What do you do at work?")],
            catalog,
            index,
            provider,
            store,
        )
        chat(
            created.persona_id,
            [ChatTurn("user", "What helps you remember steps?")],
            catalog,
            index,
            provider,
            store,
            conversation_id=first.conversation_id,
        )
        return first.conversation_id

    def test_all_pairs_in_turn_order(self, store, catalog, index, provider):
        cid = self._conversation(store, catalog, index, provider)
        script = summarize_conversation(store.get_conversation(cid))
        assert [q for q, _ in script.items] == [
            "What do you do at work?",
            "What helps you remember steps?",
        ]
        for _, answer in script.items:
            assert answer.startswith("Speaking as Emily, here is what I can share.")

    def test_marked_only_filters(self, store, catalog, index, provider):
        cid = self._conversation(store, catalog, index, provider)
        store.mark_question(cid, 2)  # second question
        script = summarize_conversation(store.get_conversation(cid), marked_only=True)
        assert len(script.items) == 1
        assert script.items[0][0] == "What helps you remember steps?"

    def test_unanswered_question_skipped(self, store, catalog, index, provider):
        cid = self._conversation(store, catalog, index, provider)
        store.append_turn(cid, ChatTurn("user", "Anything else?"))
        script = summarize_conversation(store.get_conversation(cid))
        assert len(script.items) == 2

    def test_empty_conversation(self, store, catalog, index, provider):
        created = create_persona(Theme.EMPLOYMENT, EMILY_INPUTS, catalog, index, provider, store)
        cid = store.new_conversation(created.persona_id)
        script = summarize_conversation(store.get_conversation(cid))
        assert script.items == ()


def test_question_bank_rejects_unknown_keys(tmp_path):
    path = tmp_path / "bank.jsonl"
    path.write_text('{"theme": "Family", "text": "Hi?", "topic": "x"}', encoding="utf-8")
    with pytest.raises(ValidationError, match="line 1"):
        load_question_bank(path)


def test_retrieve_then_bundle_keeps_theme_purity(index, catalog):
    # grounding injected into bundles is always persona-theme passages
    profile = emily_profile()
    passages = [p for p, _ in retrieve(index, "skills support work", profile.theme, 4)]
    bundle = assemble_chat_bundle(profile, [], "Tell me about work.", passages)
    assert all(p.theme is profile.theme for p in bundle.grounding)


class TestHistoryWindow:
    def test_window_caps_provider_history_not_store(self, catalog, index, store):
        captured = []

        class Spy(StubProvider):
            def complete(self, bundle):
                captured.append(bundle)
                return super().complete(bundle)

        spy = Spy(seed=0)
        created = create_persona(Theme.EMPLOYMENT, EMILY_INPUTS, catalog, index, spy, store)
        cid = None
        for i in range(4):
            result = chat(
                created.persona_id,
                [ChatTurn("user", f"question number {i}?")],
                catalog,
                index,
                spy,
                store,
                conversation_id=cid,
                history_window=2,
            )
            cid = result.conversation_id
        last_bundle = captured[-1]
        # system + capped history (2) + new user message
        assert len(last_bundle.turns) == 4
        assert len(store.get_conversation(cid).turns) == 8
