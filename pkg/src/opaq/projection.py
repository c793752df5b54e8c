"""Projected automaton over observable events, and its secret-involved variant.

The secret-involved projected automaton (SIPA) tags each state with N or Y:
a step into ``x'_N`` means the step can be realized by a run whose every
post-event state is nonsecret, while ``x'_Y`` means a secret was definitely
visited on the step.  Only the N-to-N fragment feeds the strong-opacity
constructions downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .core import (
    Nfa,
    StateSet,
    nonsecret_unobservable_reach,
    observable_reach,
    secret_avoiding_reach,
    unobservable_reach,
)

TAG_N = "N"
TAG_Y = "Y"


class TaggedState(NamedTuple):
    base: str
    tag: str

    def label(self) -> str:
        return f"{self.base}_{self.tag}"


@dataclass(frozen=True, eq=False)
class ProjectedAutomaton:
    """NFA over observable events whose edges are observable-reach steps."""

    states: tuple[str, ...]
    initial: StateSet
    events: tuple[str, ...]
    transitions: tuple[tuple[str, str, str], ...]

    @property
    def transition_count(self) -> int:
        return len(self.transitions)


@dataclass(frozen=True, eq=False)
class Sipa:
    """Secret-involved projected automaton.

    ``trimmed`` indicates whether ``states`` and ``transitions`` hold only
    the tagged states reachable from the initial set (the default) or the
    full universe.  ``n_edges`` always indexes the full N-to-N relation of
    the two-case construction rule: tree and verifier steps may start from
    window-eligible states whose N tag is unreachable in the trimmed graph,
    so step queries must not depend on trimming.
    """

    states: tuple[TaggedState, ...]
    initial: tuple[TaggedState, ...]
    events: tuple[str, ...]
    transitions: tuple[tuple[TaggedState, str, TaggedState], ...]
    trimmed: bool
    n_edges: dict[tuple[str, str], frozenset[str]] = field(repr=False, compare=False)

    def n_targets(self, base: str, event: str) -> frozenset[str]:
        """Bases x' with an N-to-N edge (x_N, event, x'_N)."""
        return self.n_edges.get((base, event), frozenset())


def build_projected_automaton(nfa: Nfa) -> ProjectedAutomaton:
    """One observable-event NFA over the same state set.

    An edge (x, e, x') is present exactly when x' lies in the observable
    reach of {x} under e.
    """
    transitions = []
    for x in nfa.states:
        for event in nfa.observable_events:
            for target in observable_reach(nfa, (x,), event):
                transitions.append((x, event, target))
    return ProjectedAutomaton(
        states=nfa.states,
        initial=unobservable_reach(nfa, nfa.initial),
        events=nfa.observable_events,
        transitions=tuple(transitions),
    )


def _initial_tags(nfa: Nfa) -> tuple[TaggedState, ...]:
    # A state in the closed initial estimate is tagged N exactly when some
    # nonsecret initial state reaches it by an all-nonsecret unobservable
    # run; otherwise it is tagged Y.  Each base appears once.
    closed = unobservable_reach(nfa, nfa.initial)
    nonsecret_start = [s for s in nfa.initial if s not in nfa.secret_set]
    clean = set(nonsecret_unobservable_reach(nfa, nonsecret_start))
    return tuple(
        TaggedState(x, TAG_N if x in clean else TAG_Y) for x in closed
    )


def build_sipa(nfa: Nfa, trimmed: bool = True) -> Sipa:
    """Tagged-state automaton over observable events.

    Transitions follow the two-case rule: from a nonsecret base x, a target
    x' reached secret-avoidingly yields (x_N,e,x'_N) and (x_Y,e,x'_N),
    otherwise (x_N,e,x'_Y) and (x_Y,e,x'_Y); from a secret base only
    (x_Y,e,x'_Y).  A tagged state with tag N therefore never has a secret
    base.
    """
    initial = _initial_tags(nfa)
    secret = nfa.secret_set
    transitions: list[tuple[TaggedState, str, TaggedState]] = []
    n_edges: dict[tuple[str, str], frozenset[str]] = {}
    for x in nfa.states:
        for event in nfa.observable_events:
            targets = observable_reach(nfa, (x,), event)
            if not targets:
                continue
            if x in secret:
                for t in targets:
                    transitions.append((TaggedState(x, TAG_Y), event, TaggedState(t, TAG_Y)))
                continue
            avoiding = set(secret_avoiding_reach(nfa, (x,), event))
            if avoiding:
                n_edges[(x, event)] = frozenset(avoiding)
            for t in targets:
                tag = TAG_N if t in avoiding else TAG_Y
                transitions.append((TaggedState(x, TAG_N), event, TaggedState(t, tag)))
                transitions.append((TaggedState(x, TAG_Y), event, TaggedState(t, tag)))

    if trimmed:
        by_src: dict[TaggedState, list[tuple[TaggedState, str, TaggedState]]] = {}
        for tr in transitions:
            by_src.setdefault(tr[0], []).append(tr)
        reachable = set(initial)
        frontier = list(initial)
        while frontier:
            src = frontier.pop(0)
            for _, _, t in by_src.get(src, ()):
                if t not in reachable:
                    reachable.add(t)
                    frontier.append(t)
        transitions = [tr for tr in transitions if tr[0] in reachable]
        order = {s: i for i, s in enumerate(nfa.states)}
        states = tuple(
            sorted(reachable, key=lambda ts: (order[ts.base], ts.tag))
        )
    else:
        states = tuple(
            [TaggedState(x, TAG_N) for x in nfa.states if x not in secret]
            + [TaggedState(x, TAG_Y) for x in nfa.states]
        )
    return Sipa(
        states=states,
        initial=initial,
        events=nfa.observable_events,
        transitions=tuple(transitions),
        trimmed=trimmed,
        n_edges=n_edges,
    )


def sipa_n_step(sipa: Sipa, bases: Iterable[str], event: str) -> set[str]:
    """Union of N-to-N targets over *bases* (the secret-avoiding fragment)."""
    out: set[str] = set()
    for base in bases:
        out.update(sipa.n_targets(base, event))
    return out


def projected_dot(pa: ProjectedAutomaton) -> str:
    lines = ["digraph projected {", "  rankdir=LR;"]
    initial = set(pa.initial)
    for state in pa.states:
        shape = "doublecircle" if state in initial else "circle"
        lines.append(f'  "{state}" [shape={shape}];')
    for src, event, dst in pa.transitions:
        lines.append(f'  "{src}" -> "{dst}" [label="{event}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def sipa_dot(sipa: Sipa) -> str:
    lines = ["digraph sipa {", "  rankdir=LR;"]
    initial = set(sipa.initial)
    for state in sipa.states:
        shape = "doublecircle" if state in initial else "circle"
        lines.append(f'  "{state.label()}" [shape={shape}];')
    for src, event, dst in sipa.transitions:
        lines.append(f'  "{src.label()}" -> "{dst.label()}" [label="{event}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
