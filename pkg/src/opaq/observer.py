"""Deterministic observer built by subset construction with unobservable closure."""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Nfa,
    ResourceLimitError,
    StateSet,
    format_state_set,
    observable_reach,
    unobservable_reach,
)


@dataclass(frozen=True, eq=False)
class Observer:
    """Deterministic automaton over canonical state estimates.

    ``states`` is in construction (BFS) order with the initial estimate
    first; ``transitions`` holds only pairs whose reach is nonempty, so the
    automaton is deterministic and partial.
    """

    states: tuple[StateSet, ...]
    initial: StateSet
    transitions: dict[tuple[StateSet, str], StateSet]
    events: tuple[str, ...]

    def successors(self, state: StateSet) -> tuple[tuple[str, StateSet], ...]:
        return tuple(
            (e, self.transitions[(state, e)])
            for e in self.events
            if (state, e) in self.transitions
        )


def build_observer(nfa: Nfa, max_states: int | None = None) -> Observer:
    """Subset construction from the closed initial estimate.

    BFS with events in declaration order and a FIFO frontier fixes the
    state numbering for DOT export and witness extraction.  Empty-reach
    targets are never materialized.
    """
    initial = unobservable_reach(nfa, nfa.initial)
    states: list[StateSet] = [initial]
    seen = {initial}
    transitions: dict[tuple[StateSet, str], StateSet] = {}
    queue = [initial]
    while queue:
        current = queue.pop(0)
        for event in nfa.observable_events:
            target = observable_reach(nfa, current, event)
            if not target:
                continue
            transitions[(current, event)] = target
            if target not in seen:
                seen.add(target)
                states.append(target)
                queue.append(target)
                if max_states is not None and len(states) > max_states:
                    raise ResourceLimitError(
                        f"observer exceeded {max_states} states"
                    )
    return Observer(
        states=tuple(states),
        initial=initial,
        transitions=transitions,
        events=nfa.observable_events,
    )


def observer_state_after(obs: Observer, w: tuple[str, ...]) -> StateSet | None:
    """Unique estimate reached by observation *w*, or None if undefined."""
    current = obs.initial
    for event in w:
        nxt = obs.transitions.get((current, event))
        if nxt is None:
            return None
        current = nxt
    return current


def shortest_access_strings(obs: Observer) -> dict[StateSet, tuple[str, ...]]:
    """BFS-shortest observation reaching each observer state.

    Ties break by event declaration order, so the map is deterministic.
    """
    access: dict[StateSet, tuple[str, ...]] = {obs.initial: ()}
    queue = [obs.initial]
    while queue:
        current = queue.pop(0)
        for event, target in obs.successors(current):
            if target not in access:
                access[target] = access[current] + (event,)
                queue.append(target)
    return access


def observer_dot(obs: Observer) -> str:
    """Deterministic DOT rendering; one node per estimate."""
    lines = ["digraph observer {", "  rankdir=LR;"]
    for state in obs.states:
        label = format_state_set(state)
        shape = "doublecircle" if state == obs.initial else "circle"
        lines.append(f'  "{label}" [shape={shape}];')
    for state in obs.states:
        for event, target in obs.successors(state):
            lines.append(
                f'  "{format_state_set(state)}" -> "{format_state_set(target)}" [label="{event}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
