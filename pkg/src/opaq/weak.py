"""K-step and infinite-step weak opacity via state trees over the observer.

A tree node splits an estimate by ancestry: ``x1`` descends from the root's
secret part, ``x2`` from its nonsecret part.  The system is K-step weak
opaque exactly when every node of every tree rooted at a secret-intersecting
estimate keeps ``x2`` nonempty.

Verdict-level checks walk the pair graph with breadth-first search and pair
deduplication: a child pair depends only on its parent pair and the event,
and BFS visits each pair at its shallowest depth, so reachability of an
empty-``x2`` pair within the depth budget is decided exactly without
materializing duplicate subtrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import Nfa, StateSet, format_pair, observable_reach
from .observer import Observer, build_observer, shortest_access_strings

Pair = tuple[StateSet, StateSet]


@dataclass(frozen=True)
class Witness:
    """Replayable evidence for a non-opacity verdict.

    ``prefix`` reaches the root estimate, ``continuation`` descends to the
    violating node, whose pair is recorded in ``node``.
    """

    prefix: tuple[str, ...]
    continuation: tuple[str, ...]
    node: Pair

    @property
    def observation(self) -> tuple[str, ...]:
        return self.prefix + self.continuation


@dataclass(frozen=True)
class Verdict:
    opaque: bool
    witness: Witness | None = None

    def __post_init__(self) -> None:
        assert self.opaque == (self.witness is None)


def verdict_to_dict(property_name: str, k: int | None, verdict: Verdict) -> dict:
    """Serialize a verdict as {property, k, opaque, witness{prefix, continuation}}."""
    out: dict = {"property": property_name, "k": k, "opaque": verdict.opaque}
    if verdict.witness is None:
        out["witness"] = None
    else:
        out["witness"] = {
            "prefix": list(verdict.witness.prefix),
            "continuation": list(verdict.witness.continuation),
        }
    return out


@dataclass(eq=False)
class TreeNode:
    x1: StateSet
    x2: StateSet
    depth: int


@dataclass(eq=False)
class StateTree:
    """Rooted, edge-labeled tree of (x1, x2) pairs of depth at most K."""

    root_state: StateSet
    root: TreeNode
    nodes: tuple[TreeNode, ...]
    edges: tuple[tuple[TreeNode, str, TreeNode], ...]

    @property
    def node_count(self) -> int:
        return len(self.nodes)


def weak_root_pair(nfa: Nfa, root_state: StateSet) -> Pair:
    secret = nfa.secret_set
    x1 = tuple(s for s in root_state if s in secret)
    x2 = tuple(s for s in root_state if s not in secret)
    return x1, x2


def _grow_tree(
    nfa: Nfa,
    obs: Observer,
    root_state: StateSet,
    k: int,
    root_pair: Pair,
    child: Callable[[Pair, str], Pair],
) -> StateTree:
    # Duplicate pairs within one tree are deliberately not merged; the node
    # count stays within the structural cap 1+|Eo|+...+|Eo|^K.
    root = TreeNode(root_pair[0], root_pair[1], 0)
    nodes = [root]
    edges: list[tuple[TreeNode, str, TreeNode]] = []
    frontier: list[tuple[TreeNode, StateSet]] = [(root, root_state)]
    for depth in range(1, k + 1):
        nxt: list[tuple[TreeNode, StateSet]] = []
        for node, estimate in frontier:
            for event, target in obs.successors(estimate):
                x1, x2 = child((node.x1, node.x2), event)
                new = TreeNode(x1, x2, depth)
                nodes.append(new)
                edges.append((node, event, new))
                nxt.append((new, target))
        frontier = nxt
    return StateTree(root_state, root, tuple(nodes), tuple(edges))


def build_weak_state_tree(nfa: Nfa, obs: Observer, root_state: StateSet, k: int) -> StateTree:
    """Materialize the depth-K tree rooted at a secret-intersecting estimate."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if root_state not in set(obs.states):
        raise ValueError(f"root {format_pair(root_state, ())} is not a reachable observer state")
    if not set(root_state) & set(nfa.secret_set):
        raise ValueError("root estimate contains no secret state")
    return _grow_tree(
        nfa, obs, root_state, k,
        weak_root_pair(nfa, root_state),
        lambda pair, event: (
            observable_reach(nfa, pair[0], event),
            observable_reach(nfa, pair[1], event),
        ),
    )


def secret_intersecting_roots(nfa: Nfa, obs: Observer) -> tuple[StateSet, ...]:
    secret = nfa.secret_set
    return tuple(s for s in obs.states if set(s) & secret)


def _search_pairs(
    nfa: Nfa,
    obs: Observer,
    roots: tuple[StateSet, ...],
    k: int | None,
    root_pair: Callable[[StateSet], Pair],
    child: Callable[[Pair, str], Pair],
) -> Verdict:
    """Multi-source BFS over pairs with a global visited set.

    Roots seed the queue in observer construction order and events expand in
    declaration order, so the first empty-``x2`` pair dequeued yields the
    shortest (then lexicographically least by construction) witness.
    """
    access = shortest_access_strings(obs)
    queue: list[tuple[Pair, StateSet, StateSet, tuple[str, ...]]] = []
    visited: set[tuple[StateSet, Pair]] = set()
    for root in roots:
        pair = root_pair(root)
        key = (root, pair)
        if key not in visited:
            visited.add(key)
            queue.append((pair, root, root, ()))
    while queue:
        pair, estimate, root, continuation = queue.pop(0)
        if not pair[1]:
            return Verdict(False, Witness(access[root], continuation, pair))
        if k is not None and len(continuation) >= k:
            continue
        for event, target in obs.successors(estimate):
            nxt = child(pair, event)
            key = (target, nxt)
            if key not in visited:
                visited.add(key)
                queue.append((nxt, target, root, continuation + (event,)))
    return Verdict(True)


def verify_k_step_weak(nfa: Nfa, k: int, obs: Observer | None = None) -> Verdict:
    """Opaque iff every tree node over every secret-intersecting root keeps x2 nonempty."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if obs is None:
        obs = build_observer(nfa)
    return _search_pairs(
        nfa, obs, secret_intersecting_roots(nfa, obs), k,
        lambda root: weak_root_pair(nfa, root),
        lambda pair, event: (
            observable_reach(nfa, pair[0], event),
            observable_reach(nfa, pair[1], event),
        ),
    )


def verify_current_state_opacity(nfa: Nfa, obs: Observer | None = None) -> Verdict:
    """No reachable estimate may consist of secret states only."""
    if obs is None:
        obs = build_observer(nfa)
    secret = nfa.secret_set
    for state in obs.states:
        if state and all(s in secret for s in state):
            access = shortest_access_strings(obs)
            return Verdict(False, Witness(access[state], (), (state, ())))
    return Verdict(True)


def verify_infinite_step_weak(nfa: Nfa, obs: Observer | None = None) -> Verdict:
    """Unbounded pair-graph exploration with global deduplication.

    Pairs number at most 4^|X|, so the search terminates without an explicit
    depth bound; opaque iff no reachable pair has an empty second component.
    """
    if obs is None:
        obs = build_observer(nfa)
    return _search_pairs(
        nfa, obs, secret_intersecting_roots(nfa, obs), None,
        lambda root: weak_root_pair(nfa, root),
        lambda pair, event: (
            observable_reach(nfa, pair[0], event),
            observable_reach(nfa, pair[1], event),
        ),
    )


def tree_dot(tree: StateTree, name: str = "state_tree") -> str:
    """Deterministic DOT rendering; nodes are numbered in creation order."""
    ids = {id(node): f"n{i}" for i, node in enumerate(tree.nodes)}
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for node in tree.nodes:
        label = format_pair(node.x1, node.x2)
        lines.append(f'  {ids[id(node)]} [shape=box,label="{label}"];')
    for src, event, dst in tree.edges:
        lines.append(f'  {ids[id(src)]} -> {ids[id(dst)]} [label="{event}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
