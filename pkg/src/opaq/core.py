"""Automaton model, validation, projection, and reachability primitives.

States and events are identified by string tokens.  All set-valued results
are returned as canonical ``StateSet`` tuples sorted by declaration order,
so that equal sets are bit-identical and hash consistently.  Every function
here is pure; ``Nfa`` instances are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

# A canonical, duplicate-free tuple of state identifiers, sorted by
# declaration order of the owning Nfa.
StateSet = tuple[str, ...]

# Finite sequences of event names.  An observation string contains
# observable events only.
EventString = tuple[str, ...]
ObservationString = tuple[str, ...]

MODEL_FIELDS = ("states", "events", "initial", "secret", "transitions")


class ModelError(ValueError):
    """Raised for malformed models or undeclared identifiers."""


class ResourceLimitError(RuntimeError):
    """Raised when a construction exceeds its configured state cap."""


@dataclass(frozen=True)
class Event:
    name: str
    observable: bool


@dataclass(frozen=True)
class Nfa:
    """A partially observed nondeterministic finite automaton.

    ``states`` and ``events`` fix the canonical iteration order used by
    every construction in this package.  ``secret`` is a subset of
    ``states``; the nonsecret states are exactly the rest.
    """

    states: tuple[str, ...]
    events: tuple[Event, ...]
    transitions: tuple[tuple[str, str, str], ...]
    initial: tuple[str, ...]
    secret: tuple[str, ...]

    _order: dict[str, int] = field(init=False, repr=False, compare=False)
    _step: dict[tuple[str, str], tuple[str, ...]] = field(init=False, repr=False, compare=False)
    _silent: dict[str, tuple[str, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        order = {s: i for i, s in enumerate(self.states)}
        if len(order) != len(self.states):
            raise ModelError("duplicate state identifiers")
        names = [e.name for e in self.events]
        if len(set(names)) != len(names):
            raise ModelError("duplicate event names")
        event_by_name = {e.name: e for e in self.events}
        for src, ev, dst in self.transitions:
            for endpoint in (src, dst):
                if endpoint not in order:
                    raise ModelError(f"transition ({src},{ev},{dst}) uses undeclared state {endpoint!r}")
            if ev not in event_by_name:
                raise ModelError(f"transition ({src},{ev},{dst}) uses undeclared event {ev!r}")
        if len(set(self.transitions)) != len(self.transitions):
            raise ModelError("duplicate transitions")
        if not self.initial:
            raise ModelError("empty initial set")
        for group, members in (("initial", self.initial), ("secret", self.secret)):
            for s in members:
                if s not in order:
                    raise ModelError(f"{group} member {s!r} is not a declared state")
            if len(set(members)) != len(members):
                raise ModelError(f"duplicate {group} states")

        step: dict[tuple[str, str], list[str]] = {}
        silent: dict[str, list[str]] = {}
        unobservable = {e.name for e in self.events if not e.observable}
        for src, ev, dst in self.transitions:
            step.setdefault((src, ev), []).append(dst)
            if ev in unobservable:
                silent.setdefault(src, []).append(dst)
        object.__setattr__(self, "_order", order)
        object.__setattr__(
            self, "_step",
            {k: tuple(sorted(set(v), key=order.__getitem__)) for k, v in step.items()},
        )
        object.__setattr__(
            self, "_silent",
            {k: tuple(sorted(set(v), key=order.__getitem__)) for k, v in silent.items()},
        )

    # -- canonical views -------------------------------------------------

    def state_set(self, members: Iterable[str]) -> StateSet:
        """Canonicalize *members* into a StateSet (declaration order)."""
        seen = set()
        for s in members:
            if s not in self._order:
                raise ModelError(f"unknown state {s!r}")
            seen.add(s)
        return tuple(sorted(seen, key=self._order.__getitem__))

    @property
    def observable_events(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.events if e.observable)

    @property
    def unobservable_events(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.events if not e.observable)

    @property
    def nonsecret(self) -> tuple[str, ...]:
        secret = set(self.secret)
        return tuple(s for s in self.states if s not in secret)

    @property
    def secret_set(self) -> frozenset[str]:
        return frozenset(self.secret)

    def is_observable(self, event: str) -> bool:
        for e in self.events:
            if e.name == event:
                return e.observable
        raise ModelError(f"unknown event {event!r}")

    def event_declared(self, event: str) -> bool:
        return any(e.name == event for e in self.events)


def validate_model(raw: Mapping) -> Nfa:
    """Build a well-formed :class:`Nfa` from a raw JSON-shaped mapping.

    Enforces the model schema exactly: the five known fields, strings for
    identifiers, and all structural invariants.  Unknown fields are
    rejected.  Errors name the offending location.
    """
    if not isinstance(raw, Mapping):
        raise ModelError("model must be a JSON object")
    unknown = set(raw) - set(MODEL_FIELDS)
    if unknown:
        raise ModelError(f"unknown model fields: {sorted(unknown)}")
    missing = [f for f in MODEL_FIELDS if f not in raw]
    if missing:
        raise ModelError(f"missing model fields: {missing}")

    def str_list(name: str) -> tuple[str, ...]:
        value = raw[name]
        if not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
            raise ModelError(f"field {name!r} must be an array of strings")
        return tuple(value)

    states = str_list("states")
    events = []
    if not isinstance(raw["events"], (list, tuple)):
        raise ModelError("field 'events' must be an array")
    for i, entry in enumerate(raw["events"]):
        if not isinstance(entry, Mapping) or set(entry) != {"name", "observable"}:
            raise ModelError(f"events[{i}] must be an object with fields 'name' and 'observable'")
        name, obs = entry["name"], entry["observable"]
        if not isinstance(name, str) or not name:
            raise ModelError(f"events[{i}].name must be a non-empty string")
        if not isinstance(obs, bool):
            raise ModelError(f"events[{i}].observable must be a boolean")
        events.append(Event(name, obs))
    transitions = []
    if not isinstance(raw["transitions"], (list, tuple)):
        raise ModelError("field 'transitions' must be an array")
    for i, entry in enumerate(raw["transitions"]):
        if not isinstance(entry, (list, tuple)) or len(entry) != 3 or not all(isinstance(v, str) for v in entry):
            raise ModelError(f"transitions[{i}] must be a [src, event, dst] triple of strings")
        transitions.append(tuple(entry))
    return Nfa(
        states=states,
        events=tuple(events),
        transitions=tuple(transitions),
        initial=str_list("initial"),
        secret=str_list("secret"),
    )


def load_model(path: str) -> Nfa:
    """Read a model JSON file and validate it."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ModelError(f"cannot read model file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed JSON in {path!r}: {exc}") from exc
    return validate_model(raw)


def model_to_dict(nfa: Nfa) -> dict:
    """Inverse of :func:`validate_model`, for serializing generated models."""
    return {
        "states": list(nfa.states),
        "events": [{"name": e.name, "observable": e.observable} for e in nfa.events],
        "initial": list(nfa.initial),
        "secret": list(nfa.secret),
        "transitions": [list(t) for t in nfa.transitions],
    }


# -- natural projection --------------------------------------------------


def project(nfa: Nfa, s: Sequence[str]) -> ObservationString:
    """Erase unobservable events from *s*, preserving order."""
    observable = set(nfa.observable_events)
    out = []
    for ev in s:
        if not nfa.event_declared(ev):
            raise ModelError(f"unknown event {ev!r}")
        if ev in observable:
            out.append(ev)
    return tuple(out)


# -- reachability primitives ---------------------------------------------


def step(nfa: Nfa, from_states: Iterable[str], event: str) -> StateSet:
    """One-event transition targets over the whole set; may be empty."""
    if not nfa.event_declared(event):
        raise ModelError(f"unknown event {event!r}")
    out: set[str] = set()
    for s in from_states:
        out.update(nfa._step.get((s, event), ()))
    return nfa.state_set(out)


def unobservable_reach(nfa: Nfa, from_states: Iterable[str]) -> StateSet:
    """States reachable via unobservable events only (fixpoint closure).

    Always a superset of the input; unobservable cycles are handled by the
    visited set, never by bounded unrolling.
    """
    reached = set(from_states)
    frontier = list(reached)
    while frontier:
        nxt = []
        for s in frontier:
            for t in nfa._silent.get(s, ()):
                if t not in reached:
                    reached.add(t)
                    nxt.append(t)
        frontier = nxt
    return nfa.state_set(reached)


def observable_reach(nfa: Nfa, from_states: Iterable[str], event: str) -> StateSet:
    """States reachable by strings whose projection is exactly *event*.

    Computed as unobservable closure, one observable step, unobservable
    closure again, which matches the there-exists-a-string quantification.
    """
    if not nfa.is_observable(event):
        raise ModelError(f"event {event!r} is not observable")
    closed = unobservable_reach(nfa, from_states)
    return unobservable_reach(nfa, step(nfa, closed, event))


def observable_events_at(nfa: Nfa, from_states: Iterable[str]) -> tuple[str, ...]:
    """Observable events with a nonempty observable reach from the set."""
    src = list(from_states)
    return tuple(e for e in nfa.observable_events if observable_reach(nfa, src, e))


def nonsecret_unobservable_reach(nfa: Nfa, from_states: Iterable[str]) -> StateSet:
    """Unobservable closure where every state entered must be nonsecret.

    The starting states are used as given (they are not filtered); only
    states reached after an event are constrained.
    """
    secret = nfa.secret_set
    reached = set(from_states)
    frontier = list(reached)
    while frontier:
        nxt = []
        for s in frontier:
            for t in nfa._silent.get(s, ()):
                if t not in reached and t not in secret:
                    reached.add(t)
                    nxt.append(t)
        frontier = nxt
    return nfa.state_set(reached)


def secret_avoiding_reach(nfa: Nfa, from_states: Iterable[str], event: str) -> StateSet:
    """Observable reach through runs whose every post-event state is nonsecret.

    Mirrors the nested intersect-with-nonsecret form: the source states are
    used as given, while the state after every event of the witnessing
    string (observable and unobservable alike) must be nonsecret.  The
    result is therefore always a subset of the nonsecret states.
    """
    if not nfa.is_observable(event):
        raise ModelError(f"event {event!r} is not observable")
    secret = nfa.secret_set
    closed = nonsecret_unobservable_reach(nfa, from_states)
    after = [t for t in step(nfa, closed, event) if t not in secret]
    return nonsecret_unobservable_reach(nfa, after)


def format_state_set(states: StateSet) -> str:
    return "{" + ",".join(states) + "}"


def format_pair(x1: StateSet, x2: StateSet) -> str:
    return f"({format_state_set(x1)},{format_state_set(x2)})"
