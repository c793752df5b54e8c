"""Brute-force definitional checks and a reproducible random-model generator.

Everything here is implemented directly from the four opacity definitions on
a bitmask engine of its own, independent of the observer, tagged-automaton,
tree, and verifier constructions, so the two sides can be cross-validated.
Per-observation set computations use fixpoint closures throughout, never raw
run enumeration, so unobservable cycles cannot cause nontermination.

Window semantics for the strong checks: for an observation w the window is
anchored at position max(0, |w|-K); the anchor set is the full (closure
included) reach at that position intersected with the nonsecret states, and
each subsequent step is a secret-avoiding reach.  With K=0 this coincides
with current-state opacity.

Every reported violation is replayed through an independent per-observation
recomputation before being returned (soundness self-check).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import ModelError, Nfa, validate_model


@dataclass(frozen=True)
class OracleConfig:
    """Oracle bound and random-model parameters.

    ``max_len`` caps the examined observation length; None means the bound
    needed for an exact verdict is computed from the model.  The seed fully
    determines generated models.
    """

    max_len: int | None = None
    n_states: int = 4
    n_events: int = 3
    unobservable_fraction: float = 0.25
    secret_fraction: float = 0.3
    density: float = 1.8
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_len is not None and self.max_len < 1:
            raise ValueError("max_len must be at least 1")


@dataclass(frozen=True)
class OracleVerdict:
    """Verdict of a bounded definitional search.

    A reported violation is always genuine; ``opaque`` with ``exact`` False
    is only a within-bound claim.  ``bound`` is the longest observation
    length the search accounted for.
    """

    opaque: bool
    violation: tuple[str, ...] | None
    split: int | None
    bound: int
    exact: bool


class MaskEngine:
    """Bitmask reachability over a fixed model; one bit per state."""

    def __init__(self, nfa: Nfa):
        self.nfa = nfa
        self.states = nfa.states
        self.index = {s: i for i, s in enumerate(nfa.states)}
        n = len(nfa.states)
        self.n = n
        self.full = (1 << n) - 1
        self.secret = self._mask(nfa.secret)
        self.nonsecret = self.full & ~self.secret
        self.initial = self._mask(nfa.initial)
        self.events = nfa.observable_events
        self.step_tbl: dict[str, list[int]] = {
            e.name: [0] * n for e in nfa.events
        }
        self.silent_tbl = [0] * n
        unobservable = set(nfa.unobservable_events)
        for src, ev, dst in nfa.transitions:
            bit = 1 << self.index[dst]
            self.step_tbl[ev][self.index[src]] |= bit
            if ev in unobservable:
                self.silent_tbl[self.index[src]] |= bit

    def _mask(self, states) -> int:
        out = 0
        for s in states:
            out |= 1 << self.index[s]
        return out

    def to_states(self, mask: int) -> tuple[str, ...]:
        return tuple(s for i, s in enumerate(self.states) if mask >> i & 1)

    def _bits(self, mask: int):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def step(self, mask: int, event: str) -> int:
        tbl = self.step_tbl[event]
        out = 0
        for i in self._bits(mask):
            out |= tbl[i]
        return out

    def ur(self, mask: int) -> int:
        reached = mask
        frontier = mask
        while frontier:
            added = 0
            for i in self._bits(frontier):
                added |= self.silent_tbl[i]
            frontier = added & ~reached
            reached |= frontier
        return reached

    def ur_nonsecret(self, mask: int) -> int:
        # Closure where every state entered (not the sources) is nonsecret.
        reached = mask
        frontier = mask
        while frontier:
            added = 0
            for i in self._bits(frontier):
                added |= self.silent_tbl[i]
            frontier = added & self.nonsecret & ~reached
            reached |= frontier
        return reached

    def reach(self, mask: int, event: str) -> int:
        return self.ur(self.step(self.ur(mask), event))

    def avoid_reach(self, mask: int, event: str) -> int:
        inner = self.step(self.ur_nonsecret(mask), event) & self.nonsecret
        return self.ur_nonsecret(inner)

    def estimates(self, w: tuple[str, ...]) -> list[int] | None:
        """Closure-included reach sets along *w*; None if infeasible."""
        current = self.ur(self.initial)
        out = [current]
        for event in w:
            current = self.reach(current, event)
            if not current:
                return None
            out.append(current)
        return out

    def continuation_sets(self, ests: list[int], w: tuple[str, ...]) -> list[int]:
        """Backward pass: states at each position with a run over the rest of *w*."""
        cont = [0] * len(ests)
        cont[-1] = ests[-1]
        for i in range(len(w) - 1, -1, -1):
            mask = 0
            for b in self._bits(ests[i]):
                if self.reach(1 << b, w[i]) & cont[i + 1]:
                    mask |= 1 << b
            cont[i] = mask
        return cont


def _reach_bfs(eng: MaskEngine) -> tuple[list[int], dict[int, tuple[str, ...]], int]:
    """All reachable estimate sets with shortest access observations."""
    start = eng.ur(eng.initial)
    order = [start]
    access = {start: ()}
    depth = 0
    queue = [start]
    while queue:
        current = queue.pop(0)
        for event in eng.events:
            target = eng.reach(current, event)
            if target and target not in access:
                access[target] = access[current] + (event,)
                depth = max(depth, len(access[target]))
                order.append(target)
                queue.append(target)
    return order, access, depth


# -- per-observation replays (soundness self-checks) -----------------------


def replay_weak_violation(nfa: Nfa, w: tuple[str, ...], split: int, k: int | None) -> bool:
    """Definitional check of one claimed weak violation at (*w*, *split*).

    True when some secret state in the estimate at the split continues over
    the remaining observation while no nonsecret state there does.
    """
    eng = MaskEngine(nfa)
    if not 0 <= split <= len(w):
        return False
    if k is not None and len(w) - split > k:
        return False
    ests = eng.estimates(w)
    if ests is None:
        return False
    cont = eng.continuation_sets(ests, w)
    a = ests[split]
    c = cont[split]
    return bool(a & eng.secret & c) and not (a & eng.nonsecret & c)


def replay_strong_violation(nfa: Nfa, w: tuple[str, ...], k: int) -> bool:
    """Definitional check of one claimed K-step strong violation at *w*."""
    eng = MaskEngine(nfa)
    ests = eng.estimates(w)
    if ests is None:
        return False
    cont = eng.continuation_sets(ests, w)
    anchor = max(0, len(w) - k)
    precondition = any(ests[i] & eng.secret & cont[i] for i in range(anchor, len(w) + 1))
    window = ests[anchor] & eng.nonsecret
    for event in w[anchor:]:
        window = eng.avoid_reach(window, event)
    return precondition and not window


def replay_infinite_strong_violation(nfa: Nfa, w: tuple[str, ...]) -> bool:
    """Definitional check of one claimed infinite-step strong violation at *w*."""
    eng = MaskEngine(nfa)
    if eng.estimates(w) is None:
        return False
    clean, dirty = _flagged_initial(eng)
    avoid = eng.ur_nonsecret(eng.initial & eng.nonsecret)
    for event in w:
        clean, dirty = _flagged_step(eng, clean, dirty, event)
        avoid = eng.avoid_reach(avoid, event)
    return bool(dirty) and not avoid


def _checked(nfa: Nfa, verdict: OracleVerdict, kind: str, k: int | None) -> OracleVerdict:
    if verdict.violation is not None:
        if kind == "weak":
            ok = replay_weak_violation(nfa, verdict.violation, verdict.split, k)
        elif kind == "strong":
            ok = replay_strong_violation(nfa, verdict.violation, k)
        else:
            ok = replay_infinite_strong_violation(nfa, verdict.violation)
        if not ok:
            raise AssertionError(
                f"oracle self-check failed: {kind} violation {verdict.violation} does not replay"
            )
    return verdict


# -- K-step weak ------------------------------------------------------------


def oracle_k_step_weak(nfa: Nfa, k: int, cfg: OracleConfig | None = None) -> OracleVerdict:
    """Quantifier evaluation of the K-step weak definition.

    Every observation splits into a prefix reaching an estimate and a
    continuation of at most K observable events; the violation condition is
    evaluated per split.  Grouping observations by the estimate at the split
    makes the search exact at bound D+K, where D is the largest shortest
    access over reachable estimates.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    cfg = cfg or OracleConfig()
    eng = MaskEngine(nfa)
    order, access, depth = _reach_bfs(eng)
    bound = depth + k if cfg.max_len is None else cfg.max_len
    exact = bound >= depth + k
    for a in order:
        if not a & eng.secret:
            continue
        budget = min(k, bound - len(access[a]))
        if budget < 0:
            exact = False
            continue
        if budget < k:
            exact = False
        hit = _weak_dfs(eng, a & eng.secret, a & eng.nonsecret, budget, ())
        if hit is not None:
            w = access[a] + hit
            return _checked(
                nfa,
                OracleVerdict(False, w, len(access[a]), bound, True),
                "weak", k,
            )
    return OracleVerdict(True, None, None, bound, exact)


def _weak_dfs(eng: MaskEngine, fs: int, fns: int, budget: int, path: tuple[str, ...]):
    if fs and not fns:
        return path
    if budget == 0 or not fs:
        return None
    for event in eng.events:
        ns, nns = eng.reach(fs, event), eng.reach(fns, event)
        if not (ns | nns):
            continue
        hit = _weak_dfs(eng, ns, nns, budget - 1, path + (event,))
        if hit is not None:
            return hit
    return None


# -- K-step strong -----------------------------------------------------------


def oracle_k_step_strong(nfa: Nfa, k: int, cfg: OracleConfig | None = None) -> OracleVerdict:
    """Quantifier evaluation of the K-step strong definition.

    For each observation the window covers its last K observable events (or
    all of them when shorter).  The check runs a full reach to the window
    anchor, intersects with the nonsecret states, then iterates the
    secret-avoiding reach; a violation needs a secret inside the window that
    continues to the end of the observation and an empty final set.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    cfg = cfg or OracleConfig()
    eng = MaskEngine(nfa)
    order, access, depth = _reach_bfs(eng)
    bound = depth + k if cfg.max_len is None else cfg.max_len
    exact = bound >= depth + k
    start = order[0]
    for a in order:
        at_initial = a == start
        budget = min(k, bound - len(access[a]))
        if budget < k:
            exact = False
        if budget < 0:
            continue
        hit = _strong_dfs(
            eng,
            estimate=a,
            sec_cont=a & eng.secret,
            window=a & eng.nonsecret,
            budget=budget,
            k=k,
            check_short=at_initial,
            path=(),
        )
        if hit is not None:
            w = access[a] + hit
            return _checked(
                nfa,
                OracleVerdict(False, w, max(0, len(w) - k), bound, True),
                "strong", k,
            )
    return OracleVerdict(True, None, None, bound, exact)


def _strong_dfs(eng, estimate, sec_cont, window, budget, k, check_short, path):
    depth = len(path)
    # Windows anchored at the initial estimate may be shorter than K; all
    # others are checked at full window length only.
    if (depth == k or (check_short and depth < k)) and sec_cont and not window:
        return path
    if depth >= budget:
        return None
    for event in eng.events:
        nxt = eng.reach(estimate, event)
        if not nxt:
            continue
        hit = _strong_dfs(
            eng,
            estimate=nxt,
            sec_cont=eng.reach(sec_cont, event) | (nxt & eng.secret),
            window=eng.avoid_reach(window, event),
            budget=budget,
            k=k,
            check_short=check_short,
            path=path + (event,),
        )
        if hit is not None:
            return hit
    return None


# -- infinite-step weak -------------------------------------------------------


def oracle_infinite_step_weak(nfa: Nfa, cfg: OracleConfig | None = None) -> OracleVerdict:
    """K-step weak check with unbounded continuations.

    Continuation behavior depends only on the (secret-descended,
    nonsecret-descended) pair, so the per-root search prunes repeated pairs;
    exploration is exact once every reachable pair has been expanded.
    """
    cfg = cfg or OracleConfig()
    eng = MaskEngine(nfa)
    order, access, _ = _reach_bfs(eng)
    bound = 0
    exact = True
    for a in order:
        if not a & eng.secret:
            continue
        seen: set[tuple[int, int]] = set()
        stack = [(a & eng.secret, a & eng.nonsecret, ())]
        seen.add((a & eng.secret, a & eng.nonsecret))
        while stack:
            fs, fns, path = stack.pop()
            bound = max(bound, len(access[a]) + len(path))
            if fs and not fns:
                w = access[a] + path
                return _checked(
                    nfa,
                    OracleVerdict(False, w, len(access[a]), len(w), True),
                    "weak", None,
                )
            if cfg.max_len is not None and len(access[a]) + len(path) >= cfg.max_len:
                exact = False
                continue
            for event in reversed(eng.events):
                ns, nns = eng.reach(fs, event), eng.reach(fns, event)
                if (ns | nns) and (ns, nns) not in seen:
                    seen.add((ns, nns))
                    stack.append((ns, nns, path + (event,)))
    return OracleVerdict(True, None, None, bound, exact)


# -- infinite-step strong ------------------------------------------------------


def _flagged_initial(eng: MaskEngine) -> tuple[int, int]:
    clean = eng.initial & eng.nonsecret
    dirty = eng.initial & eng.secret
    return _flagged_ur(eng, clean, dirty)


def _flagged_ur(eng: MaskEngine, clean: int, dirty: int) -> tuple[int, int]:
    # Visited-a-secret flag propagated through the unobservable closure.
    changed = True
    while changed:
        changed = False
        add_clean = add_dirty = 0
        for i in eng._bits(clean):
            t = eng.silent_tbl[i]
            add_clean |= t & eng.nonsecret
            add_dirty |= t & eng.secret
        for i in eng._bits(dirty):
            add_dirty |= eng.silent_tbl[i]
        if add_clean & ~clean:
            clean |= add_clean
            changed = True
        if add_dirty & ~dirty:
            dirty |= add_dirty
            changed = True
    return clean, dirty


def _flagged_step(eng: MaskEngine, clean: int, dirty: int, event: str) -> tuple[int, int]:
    from_clean = eng.step(clean, event)
    from_dirty = eng.step(dirty, event)
    new_clean = from_clean & eng.nonsecret
    new_dirty = from_dirty | (from_clean & eng.secret)
    return _flagged_ur(eng, new_clean, new_dirty)


def oracle_infinite_step_strong(nfa: Nfa, cfg: OracleConfig | None = None) -> OracleVerdict:
    """Quantifier evaluation of the infinite-step strong definition.

    Runs that have visited a secret are tracked by flagged reachability over
    (state, visited-bit) pairs; the companion chain tracks states reachable
    from a nonsecret initial state, after nonsecret unobservable closure,
    with every post-event state nonsecret.  The search deduplicates the
    joint (flagged set, avoiding set) node, so it is exact on termination.
    """
    cfg = cfg or OracleConfig()
    eng = MaskEngine(nfa)
    clean, dirty = _flagged_initial(eng)
    avoid = eng.ur_nonsecret(eng.initial & eng.nonsecret)
    queue: list[tuple[int, int, int, tuple[str, ...]]] = [(clean, dirty, avoid, ())]
    seen = {(clean, dirty, avoid)}
    bound = 0
    exact = True
    while queue:
        clean, dirty, avoid, path = queue.pop(0)
        bound = max(bound, len(path))
        if dirty and not avoid:
            return _checked(
                nfa,
                OracleVerdict(False, path, None, len(path), True),
                "inf-strong", None,
            )
        if cfg.max_len is not None and len(path) >= cfg.max_len:
            exact = False
            continue
        for event in eng.events:
            if not eng.reach(clean | dirty, event):
                continue
            nclean, ndirty = _flagged_step(eng, clean, dirty, event)
            navoid = eng.avoid_reach(avoid, event)
            key = (nclean, ndirty, navoid)
            if key not in seen:
                seen.add(key)
                queue.append((nclean, ndirty, navoid, path + (event,)))
    return OracleVerdict(True, None, None, bound, exact)


def oracle_current_state(nfa: Nfa, cfg: OracleConfig | None = None) -> OracleVerdict:
    return oracle_k_step_weak(nfa, 0, cfg)


# -- random models -------------------------------------------------------------


def random_nfa(cfg: OracleConfig) -> Nfa:
    """Seeded, reproducible model satisfying all structural invariants.

    Guarantees at least one observable event and a nonempty initial set;
    with a positive unobservable fraction at least one event is
    unobservable.  Cycles and nondeterminism are allowed.
    """
    if cfg.n_states < 1:
        raise ModelError("random model needs at least one state")
    if cfg.n_events < 1:
        raise ModelError("random model needs at least one event")
    rng = random.Random(cfg.seed)
    states = [str(i) for i in range(cfg.n_states)]
    observable = [rng.random() >= cfg.unobservable_fraction for _ in range(cfg.n_events)]
    if not any(observable):
        observable[0] = True
    if cfg.unobservable_fraction > 0 and all(observable) and cfg.n_events > 1:
        observable[-1] = False
    events = [
        {"name": f"e{i}", "observable": observable[i]} for i in range(cfg.n_events)
    ]
    universe = [
        (s, e["name"], t) for s in states for e in events for t in states
    ]
    wanted = max(1, round(cfg.density * cfg.n_states))
    transitions = [list(t) for t in sorted(rng.sample(universe, min(wanted, len(universe))))]
    size = 2 if cfg.n_states > 1 and rng.random() < 0.3 else 1
    initial = rng.sample(states, size)
    secret = [s for s in states if rng.random() < cfg.secret_fraction]
    return validate_model(
        {
            "states": states,
            "events": events,
            "initial": sorted(initial),
            "secret": secret,
            "transitions": transitions,
        }
    )
