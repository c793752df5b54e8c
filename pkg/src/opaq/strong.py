"""K-step and infinite-step strong opacity.

K-step strong opacity is checked with secret-unvisited state trees (SSTs):
the first component carries the full estimate, the second the subset still
reachable by runs that avoided secrets at every step inside the window.
Infinite-step strong opacity is checked with a verifier over pairs
(estimate, everywhere-secret-avoiding subset) built by a deterministic
worklist; emptiness of the second component certifies a violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .core import (
    Nfa,
    ResourceLimitError,
    StateSet,
    format_pair,
    nonsecret_unobservable_reach,
    secret_avoiding_reach,
)
from .observer import Observer, build_observer
from .projection import Sipa, TAG_N, build_sipa, sipa_n_step
from .weak import (
    Pair,
    StateTree,
    Verdict,
    Witness,
    _grow_tree,
    _search_pairs,
    secret_intersecting_roots,
)


class VerifierState(NamedTuple):
    x1: StateSet
    x2: StateSet


@dataclass(frozen=True, eq=False)
class VerifierAutomaton:
    """Deterministic automaton over (estimate, secret-avoiding subset) pairs."""

    states: tuple[VerifierState, ...]
    initial: VerifierState
    transitions: dict[tuple[VerifierState, str], VerifierState]
    events: tuple[str, ...]

    def successors(self, state: VerifierState) -> tuple[tuple[str, VerifierState], ...]:
        return tuple(
            (e, self.transitions[(state, e)])
            for e in self.events
            if (state, e) in self.transitions
        )


def _sst_step(nfa: Nfa, sipa: Sipa, obs: Observer, estimate: StateSet, x2: StateSet, event: str) -> StateSet:
    """Second-component successor: N-to-N steps, equal to the secret-avoiding reach."""
    target = obs.transitions[(estimate, event)]
    via_sipa = sipa_n_step(sipa, x2, event) & set(target)
    via_reach = set(secret_avoiding_reach(nfa, x2, event)) & set(target)
    assert via_sipa == via_reach, "tagged-edge and reach-based secret-avoiding steps disagree"
    return nfa.state_set(via_sipa)


def sst_root_pair(nfa: Nfa, root_state: StateSet) -> Pair:
    # The root keeps the full estimate as x1; x2 is its nonsecret part
    # (secret visits before the window do not disqualify a state).
    secret = nfa.secret_set
    return root_state, tuple(s for s in root_state if s not in secret)


def build_sst(nfa: Nfa, obs: Observer, sipa: Sipa, root_state: StateSet, k: int) -> StateTree:
    """Materialize the depth-K secret-unvisited state tree for one root."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if root_state not in set(obs.states):
        raise ValueError(f"root {format_pair(root_state, ())} is not a reachable observer state")
    if not set(root_state) & set(nfa.secret_set):
        raise ValueError("root estimate contains no secret state")
    return _grow_tree(
        nfa, obs, root_state, k,
        sst_root_pair(nfa, root_state),
        lambda pair, event: (
            obs.transitions[(pair[0], event)],
            _sst_step(nfa, sipa, obs, pair[0], pair[1], event),
        ),
    )


def verify_k_step_strong(
    nfa: Nfa,
    k: int,
    obs: Observer | None = None,
    sipa: Sipa | None = None,
) -> Verdict:
    """Opaque iff every SST node keeps its second component nonempty."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if obs is None:
        obs = build_observer(nfa)
    if sipa is None:
        sipa = build_sipa(nfa)
    return _search_pairs(
        nfa, obs, secret_intersecting_roots(nfa, obs), k,
        lambda root: sst_root_pair(nfa, root),
        lambda pair, event: (
            obs.transitions[(pair[0], event)],
            _sst_step(nfa, sipa, obs, pair[0], pair[1], event),
        ),
    )


def _verifier_initial(nfa: Nfa, obs: Observer, sipa: Sipa) -> VerifierState:
    tagged_n = {ts.base for ts in sipa.initial if ts.tag == TAG_N}
    x2 = tuple(s for s in obs.initial if s in tagged_n)
    clean = nonsecret_unobservable_reach(nfa, [s for s in nfa.initial if s not in nfa.secret_set])
    assert x2 == clean, "initial tagged states disagree with the nonsecret closure"
    return VerifierState(obs.initial, x2)


def _verifier_step(nfa: Nfa, sipa: Sipa, obs: Observer, state: VerifierState, event: str) -> VerifierState:
    x1 = obs.transitions[(state.x1, event)]
    x2 = sipa_n_step(sipa, state.x2, event) & set(x1)
    via_reach = set(secret_avoiding_reach(nfa, state.x2, event)) & set(x1)
    assert x2 == via_reach, "tagged-edge and reach-based secret-avoiding steps disagree"
    return VerifierState(x1, nfa.state_set(x2))


def build_verifier(
    nfa: Nfa,
    obs: Observer | None = None,
    sipa: Sipa | None = None,
    max_states: int | None = None,
) -> VerifierAutomaton:
    """Worklist construction of the verifier.

    The initial state pairs the closed initial estimate with the states whose
    initial tag is N; each transition pairs the observer step with the
    N-to-N filtered step.  FIFO order over declaration-ordered events makes
    the state numbering deterministic; each (state, event) is examined once.
    """
    if obs is None:
        obs = build_observer(nfa)
    if sipa is None:
        sipa = build_sipa(nfa)
    initial = _verifier_initial(nfa, obs, sipa)
    states = [initial]
    seen = {initial}
    transitions: dict[tuple[VerifierState, str], VerifierState] = {}
    queue = [initial]
    while queue:
        current = queue.pop(0)
        for event in obs.events:
            if (current.x1, event) not in obs.transitions:
                continue
            target = _verifier_step(nfa, sipa, obs, current, event)
            transitions[(current, event)] = target
            if target not in seen:
                seen.add(target)
                states.append(target)
                queue.append(target)
                if max_states is not None and len(states) > max_states:
                    raise ResourceLimitError(f"verifier exceeded {max_states} states")
    return VerifierAutomaton(
        states=tuple(states),
        initial=initial,
        transitions=transitions,
        events=obs.events,
    )


def verify_infinite_step_strong(
    nfa: Nfa,
    obs: Observer | None = None,
    sipa: Sipa | None = None,
) -> Verdict:
    """Abort construction at the first empty second component.

    The witness is the observation reaching the offending verifier state.
    """
    if obs is None:
        obs = build_observer(nfa)
    if sipa is None:
        sipa = build_sipa(nfa)
    initial = _verifier_initial(nfa, obs, sipa)
    seen = {initial}
    queue: list[tuple[VerifierState, tuple[str, ...]]] = [(initial, ())]
    while queue:
        current, path = queue.pop(0)
        if not current.x2:
            return Verdict(False, Witness((), path, (current.x1, current.x2)))
        for event in obs.events:
            if (current.x1, event) not in obs.transitions:
                continue
            target = _verifier_step(nfa, sipa, obs, current, event)
            if target not in seen:
                seen.add(target)
                queue.append((target, path + (event,)))
    return Verdict(True)


def check_verifier_observer_language_equality(
    obs: Observer, ver: VerifierAutomaton
) -> tuple[bool, list[str]]:
    """First-component projection must be a functional bisimulation.

    The projection maps the reachable verifier onto the reachable observer,
    matching transitions exactly in both directions, which implies language
    equality with no bound.  Returns (ok, certificate); the certificate
    lists every offending state or edge.
    """
    problems: list[str] = []
    if ver.initial.x1 != obs.initial:
        problems.append(
            f"initial mismatch: verifier {format_pair(*ver.initial)} vs observer "
            f"{format_pair(obs.initial, ())}"
        )
    observer_states = set(obs.states)
    covered = set()
    for state in ver.states:
        if state.x1 not in observer_states:
            problems.append(f"verifier state {format_pair(*state)} projects outside the observer")
            continue
        covered.add(state.x1)
        for event in dict.fromkeys(ver.events + obs.events):
            v_target = ver.transitions.get((state, event))
            o_target = obs.transitions.get((state.x1, event))
            if (v_target is None) != (o_target is None):
                problems.append(
                    f"transition definedness mismatch at {format_pair(*state)} on {event!r}"
                )
            elif v_target is not None and v_target.x1 != o_target:
                problems.append(
                    f"transition target mismatch at {format_pair(*state)} on {event!r}"
                )
    for state in obs.states:
        if state not in covered:
            problems.append(f"observer state {format_pair(state, ())} has no verifier preimage")
    return (not problems, problems)


def verifier_dot(ver: VerifierAutomaton) -> str:
    """Deterministic DOT rendering; one node per verifier state."""
    lines = ["digraph verifier {", "  rankdir=LR;"]
    for state in ver.states:
        label = format_pair(state.x1, state.x2)
        shape = "doublecircle" if state == ver.initial else "circle"
        lines.append(f'  "{label}" [shape={shape}];')
    for state in ver.states:
        for event, target in ver.successors(state):
            lines.append(
                f'  "{format_pair(state.x1, state.x2)}" -> "{format_pair(target.x1, target.x2)}" [label="{event}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
