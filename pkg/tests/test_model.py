from __future__ import annotations

import pytest

from opaq import ModelError, project, validate_model

from conftest import g2_dict


def test_g2_loads(g2):
    assert len(g2.states) == 10
    assert len(g2.events) == 4
    assert g2.initial == ("0",)
    assert g2.secret == ("1", "5", "9")
    assert g2.nonsecret == ("0", "2", "3", "4", "6", "7", "8")


def test_transition_from_undeclared_state_names_it():
    raw = g2_dict()
    raw["transitions"].append(["99", "a", "0"])
    with pytest.raises(ModelError, match="99"):
        validate_model(raw)


def test_empty_initial_set_rejected():
    raw = g2_dict()
    raw["initial"] = []
    with pytest.raises(ModelError, match="empty initial"):
        validate_model(raw)


def test_unknown_fields_rejected():
    raw = g2_dict()
    raw["extra"] = 1
    with pytest.raises(ModelError, match="unknown model fields"):
        validate_model(raw)


def test_duplicate_states_rejected():
    raw = g2_dict()
    raw["states"].append("0")
    with pytest.raises(ModelError, match="duplicate state"):
        validate_model(raw)


def test_duplicate_transitions_rejected():
    raw = g2_dict()
    raw["transitions"].append(["0", "a", "1"])
    with pytest.raises(ModelError, match="duplicate transitions"):
        validate_model(raw)


def test_undeclared_event_rejected():
    raw = g2_dict()
    raw["transitions"].append(["0", "z", "1"])
    with pytest.raises(ModelError, match="'z'"):
        validate_model(raw)


def test_secret_member_must_be_declared():
    raw = g2_dict()
    raw["secret"] = ["1", "42"]
    with pytest.raises(ModelError, match="42"):
        validate_model(raw)


def test_event_entries_must_be_name_observable_objects():
    raw = g2_dict()
    raw["events"][0] = {"name": "a"}
    with pytest.raises(ModelError, match="events\\[0\\]"):
        validate_model(raw)


def test_state_set_is_canonical(g2):
    assert g2.state_set(["9", "1", "5", "1"]) == ("1", "5", "9")
    with pytest.raises(ModelError):
        g2.state_set(["nope"])


def test_project_identity_when_everything_observable(g2):
    assert project(g2, ("a", "b", "c")) == ("a", "b", "c")


def test_project_deletes_unobservable(g8frag):
    assert project(g8frag, ("b", "a")) == ("a",)


def test_project_empty_string(g2, g8frag):
    assert project(g2, ()) == ()
    assert project(g8frag, ()) == ()


def test_project_rejects_undeclared_event(g2):
    with pytest.raises(ModelError, match="'x'"):
        project(g2, ("a", "x"))
