"""Command-line front end: verify, export, crosscheck.

Exit codes: 0 opaque / zero disagreements, 1 not opaque / disagreements,
2 input error, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .core import ModelError, ResourceLimitError, load_model
from .crosscheck import run_crosscheck
from .observer import build_observer, observer_dot
from .projection import build_projected_automaton, build_sipa, projected_dot, sipa_dot
from .strong import (
    build_sst,
    build_verifier,
    verifier_dot,
    verify_infinite_step_strong,
    verify_k_step_strong,
)
from .weak import (
    build_weak_state_tree,
    secret_intersecting_roots,
    tree_dot,
    verdict_to_dict,
    verify_current_state_opacity,
    verify_infinite_step_weak,
    verify_k_step_weak,
)

PROPERTIES = ("cs", "k-weak", "k-strong", "inf-weak", "inf-strong")
STRUCTURES = ("observer", "projected", "sipa", "verifier", "weak-tree", "sst")
DEFAULT_STATE_CAP = 2**20


def _color_enabled() -> bool:
    mode = os.environ.get("OPAQ_COLOR", "auto")
    if mode == "always":
        return True
    if mode == "never":
        return False
    return sys.stdout.isatty()


def _paint(text: str, good: bool) -> str:
    if not _color_enabled():
        return text
    code = "32" if good else "31"
    return f"\x1b[{code}m{text}\x1b[0m"


def _parse_k_range(text: str) -> tuple[int, ...]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return (int(text),)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opaq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="check an opacity property of a model")
    verify.add_argument("--property", required=True, choices=PROPERTIES)
    verify.add_argument("--k", type=int, default=None)
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP,
                        help="cap on observer/verifier states (exit 3 when exceeded)")
    verify.add_argument("model")

    export = sub.add_parser("export", help="emit a structure as DOT on stdout")
    export.add_argument("--structure", required=True, choices=STRUCTURES)
    export.add_argument("--root", default=None, help="comma-separated root estimate for trees")
    export.add_argument("--k", type=int, default=None)
    export.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    export.add_argument("model")

    cross = sub.add_parser("crosscheck", help="seeded random-model agreement batch")
    cross.add_argument("--models", type=int, default=500)
    cross.add_argument("--max-states", type=int, default=5)
    cross.add_argument("--k", type=_parse_k_range, default=(0, 1, 2, 3),
                       help="single K or an inclusive range like 0..3")
    cross.add_argument("--seed", type=int, default=7)
    cross.add_argument("--report", default="crosscheck_report.jsonl")
    cross.add_argument("--fixtures-dir", default="divergences")
    cross.add_argument("--no-structural", action="store_true",
                       help="skip structural cap and projection checks")
    return parser


def _sizes(nfa, obs, sipa=None, ver=None, tree_nodes=None) -> dict:
    out = {"observer_states": len(obs.states)}
    if sipa is not None:
        out["sipa_states"] = len(sipa.states)
    if ver is not None:
        out["verifier_states"] = len(ver.states)
    if tree_nodes is not None:
        out["tree_nodes"] = tree_nodes
    return out


def _run_verify(args) -> int:
    if args.property in ("k-weak", "k-strong"):
        if args.k is None:
            print("error: --k is required for k-weak and k-strong", file=sys.stderr)
            return 2
        if args.k < 0:
            print("error: --k must be nonnegative", file=sys.stderr)
            return 2
    elif args.k is not None:
        print(f"warning: --k is ignored for property {args.property}", file=sys.stderr)

    nfa = load_model(args.model)
    obs = build_observer(nfa, max_states=args.state_cap)
    sipa = None
    ver = None
    tree_nodes = None
    if args.property == "cs":
        verdict = verify_current_state_opacity(nfa, obs)
    elif args.property == "k-weak":
        verdict = verify_k_step_weak(nfa, args.k, obs)
    elif args.property == "inf-weak":
        verdict = verify_infinite_step_weak(nfa, obs)
    elif args.property == "k-strong":
        sipa = build_sipa(nfa)
        verdict = verify_k_step_strong(nfa, args.k, obs, sipa)
    else:
        sipa = build_sipa(nfa)
        ver = build_verifier(nfa, obs, sipa, max_states=args.state_cap)
        verdict = verify_infinite_step_strong(nfa, obs, sipa)

    if args.property in ("k-weak", "k-strong", "cs"):
        k = args.k if args.property != "cs" else 0
        tree_nodes = 0
        if args.property == "k-strong":
            sipa = sipa or build_sipa(nfa)
            for root in secret_intersecting_roots(nfa, obs):
                tree_nodes += build_sst(nfa, obs, sipa, root, k).node_count
        else:
            for root in secret_intersecting_roots(nfa, obs):
                tree_nodes += build_weak_state_tree(nfa, obs, root, k).node_count

    payload = verdict_to_dict(args.property, args.k, verdict)
    payload["sizes"] = _sizes(nfa, obs, sipa, ver, tree_nodes)
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        word = "opaque" if verdict.opaque else "not opaque"
        print(_paint(word, verdict.opaque))
        if verdict.witness is not None:
            w = verdict.witness
            print(f"witness prefix: {' '.join(w.prefix) or '(empty)'}")
            print(f"witness continuation: {' '.join(w.continuation) or '(empty)'}")
        for key, value in payload["sizes"].items():
            print(f"{key}: {value}")
    return 0 if verdict.opaque else 1


def _run_export(args) -> int:
    nfa = load_model(args.model)
    if args.structure == "projected":
        print(projected_dot(build_projected_automaton(nfa)), end="")
        return 0
    if args.structure == "sipa":
        print(sipa_dot(build_sipa(nfa)), end="")
        return 0
    obs = build_observer(nfa, max_states=args.state_cap)
    if args.structure == "observer":
        print(observer_dot(obs), end="")
        return 0
    if args.structure == "verifier":
        print(verifier_dot(build_verifier(nfa, obs, max_states=args.state_cap)), end="")
        return 0
    if args.root is None or args.k is None:
        print("error: --root and --k are required for tree exports", file=sys.stderr)
        return 2
    root = nfa.state_set(t.strip() for t in args.root.split(","))
    if root not in set(obs.states):
        print(f"error: root {args.root!r} is not a reachable observer state", file=sys.stderr)
        return 2
    if args.structure == "weak-tree":
        print(tree_dot(build_weak_state_tree(nfa, obs, root, args.k), "weak_tree"), end="")
    else:
        print(tree_dot(build_sst(nfa, obs, build_sipa(nfa), root, args.k), "sst"), end="")
    return 0


def _run_crosscheck(args) -> int:
    if args.models < 1 or args.max_states < 1:
        print("error: --models and --max-states must be positive", file=sys.stderr)
        return 2
    if any(k < 0 for k in args.k):
        print("error: K values must be nonnegative", file=sys.stderr)
        return 2
    result = run_crosscheck(
        models=args.models,
        max_states=args.max_states,
        ks=tuple(args.k),
        seed=args.seed,
        report_path=args.report,
        fixtures_dir=args.fixtures_dir,
        structural=not args.no_structural,
    )
    checks = len(result.rows)
    bad = len(result.disagreements)
    print(f"models: {result.models}  checks: {checks}  disagreements: {bad}")
    for failure in result.structural_failures:
        print(f"structural: {failure}")
    for path in result.divergence_fixtures:
        print(f"divergence fixture written: {path}")
    print(f"report: {args.report}")
    ok = result.ok
    print(_paint("agreement: 100%" if ok else "agreement: FAILED", ok))
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args)
        if args.command == "export":
            return _run_export(args)
        return _run_crosscheck(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
