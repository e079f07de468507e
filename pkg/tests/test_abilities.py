from __future__ import annotations

import json

import pytest

from persona_workbench.abilities import (
    AbilityCatalog,
    AbilityEntry,
    AbilityFactor,
    entry_from_json,
    generate_ability_entries,
    get_ability,
    list_abilities,
    load_catalog,
    save_catalog,
)
from persona_workbench.corpus import Corpus, Theme
from persona_workbench.errors import (
    AbilityNotFoundError,
    CatalogError,
    GroundingError,
)
from persona_workbench.providers import StubProvider
from persona_workbench.retrieval import build_index


def make_entry_obj(theme="Employment", name="Memory Skills"):
    return {
        "theme": theme,
        "name": name,
        "description": "Hi! I remember everything.",
        "drivers": [{"name": "Labels", "story": "Labels help me."}],
        "blockers": [{"name": "Noise", "story": "Noise distracts me."}],
    }


class TestLoadCatalog:
    def test_shipped_catalog_has_memory_skills(self, catalog):
        entry = get_ability(catalog, Theme.EMPLOYMENT, "Memory Skills")
        assert any(f.name == "Visual and Auditory aids" for f in entry.drivers)
        assert any(f.name == "Complex Information" for f in entry.blockers)

    def test_driver_story_mentions_color_coded_labels(self, catalog):
        entry = get_ability(catalog, Theme.EMPLOYMENT, "Memory Skills")
        assert "color-coded labels" in entry.drivers[0].story

    def test_empty_catalog_file_is_valid(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        assert load_catalog(path).entries == ()

    def test_duplicate_theme_name_rejected(self, tmp_path):
        path = tmp_path / "dup.jsonl"
        rows = [make_entry_obj(), make_entry_obj()]
        path.write_text("\n".join(json.dumps(r) for r in rows), encoding="utf-8")
        with pytest.raises(CatalogError, match="duplicate ability"):
            load_catalog(path)

    def test_malformed_entry_reports_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        obj = make_entry_obj()
        del obj["blockers"]
        path.write_text(json.dumps(obj), encoding="utf-8")
        with pytest.raises(CatalogError, match="line 1"):
            load_catalog(path)

    def test_empty_driver_list_rejected(self):
        obj = make_entry_obj()
        obj["drivers"] = []
        with pytest.raises(CatalogError, match="drivers"):
            entry_from_json(obj)

    def test_shipped_catalog_breadth(self, catalog):
        # 3 to 5 entries per theme keeps the choice meaningful
        for theme in Theme:
            assert 3 <= len(list_abilities(catalog, theme)) <= 5


class TestListAndGet:
    def test_list_includes_memory_skills(self, catalog):
        names = [e.name for e in list_abilities(catalog, Theme.EMPLOYMENT)]
        assert "Memory Skills" in names

    def test_list_empty_theme(self):
        lone = AbilityCatalog(entries=(entry_from_json(make_entry_obj()),))
        assert list_abilities(lone, Theme.FAMILY) == []

    def test_list_preserves_catalog_order(self, catalog):
        listed = list_abilities(catalog, Theme.EDUCATION)
        expected = [e for e in catalog.entries if e.theme is Theme.EDUCATION]
        assert listed == expected

    def test_partition_property(self, catalog):
        union = []
        for theme in Theme:
            union.extend(list_abilities(catalog, theme))
        assert sorted(union, key=lambda e: (e.theme.value, e.name)) == sorted(
            catalog.entries, key=lambda e: (e.theme.value, e.name)
        )

    def test_get_missing_entry(self, catalog):
        with pytest.raises(AbilityNotFoundError):
            get_ability(catalog, Theme.EDUCATION, "Memory Skills")

    def test_name_lookup_is_case_sensitive(self, catalog):
        # theme parsing is forgiving, the name is not
        with pytest.raises(AbilityNotFoundError):
            get_ability(catalog, Theme.parse("employment"), "memory skills")

    def test_factor_invariants(self):
        with pytest.raises(CatalogError):
            AbilityFactor(name="", story="something")
        with pytest.raises(CatalogError):
            AbilityFactor(name="something", story="")


class TestRoundTrip:
    def test_shipped_catalog_round_trips(self, catalog, tmp_path):
        out = tmp_path / "cat.jsonl"
        save_catalog(catalog, out)
        assert load_catalog(out) == catalog


class TestGenerateAbilityEntries:
    def test_stub_golden_on_employment_fixture(self, corpus, index):
        # golden recorded from the stub template over the shipped fixture
        entries = generate_ability_entries(
            Theme.EMPLOYMENT, corpus, index, StubProvider(seed=0)
        )
        assert len(entries) == 1
        entry = entries[0]
        assert entry.theme is Theme.EMPLOYMENT
        assert entry.name == "Teamwork"
        assert entry.description == (
            "Hi! My teamwork carries me through my employment days, "
            "and I am proud of what I can do."
        )
        assert entry.drivers[0].name == "Support with new"
        assert entry.blockers[0].name == "Rushed bakery"

    def test_no_grounding_passages_errors(self, corpus):
        empty_index = build_index([])
        with pytest.raises(GroundingError, match="no grounding passages"):
            generate_ability_entries(
                Theme.EMPLOYMENT, Corpus(records=()), empty_index, StubProvider()
            )

    def test_generated_entries_pass_catalog_validation(self, corpus, index):
        for theme in Theme:
            entries = generate_ability_entries(theme, corpus, index, StubProvider(seed=3))
            for entry in entries:
                assert entry_from_json(entry.to_json()) == entry

    def test_non_json_provider_output_rejected(self, corpus, index):
        class Garbage:
            identity = "stub"

            def complete(self, bundle):
                return "not json at all"

        with pytest.raises(CatalogError, match="did not return JSON"):
            generate_ability_entries(Theme.EMPLOYMENT, corpus, index, Garbage())

    def test_invalid_drafts_dropped_valid_kept(self, corpus, index, caplog):
        good = make_entry_obj(name="Focus")

        class Mixed:
            identity = "stub"

            def complete(self, bundle):
                return json.dumps([{"name": "broken"}, good])

        with caplog.at_level("WARNING"):
            entries = generate_ability_entries(Theme.EMPLOYMENT, corpus, index, Mixed())
        assert [e.name for e in entries] == ["Focus"]
        assert any("rejected ability draft 0" in r.message for r in caplog.records)

    def test_all_invalid_drafts_error(self, corpus, index):
        class Broken:
            identity = "stub"

            def complete(self, bundle):
                return json.dumps([{"name": "broken"}])

        with pytest.raises(CatalogError, match="failed validation"):
            generate_ability_entries(Theme.EMPLOYMENT, corpus, index, Broken())
