"""Command-line front end: graph analysis, simulation, fuzzing, paths.

Every command prints deterministically (identical invocations produce
identical bytes) and supports ``--porcelain`` for stable key=value output.
Exit codes: 0 success, 1 the analysis found violations or came up short,
2 invalid input, 3 internal cross-check mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .conditions import (
    BRUTEFORCE_FAULT_CAP,
    BRUTEFORCE_NODE_CAP,
    classify,
    is_f_good_bruteforce,
    is_f_good_characterized,
)
from .graphs import (
    Graph,
    GraphFormatError,
    InsufficientPathsError,
    canonical_disjoint_paths,
    parse_graph,
)
from .simnet import (
    ADVERSARIES,
    ScenarioError,
    decode_actions,
    export_transcript,
    fuzz,
    make_scenario,
    run_scenario,
    scenario_to_text,
)


def _load_graph(source: str) -> Graph:
    if source == "-":
        return parse_graph(sys.stdin.read())
    return parse_graph(Path(source).read_text())


def _emit(porcelain: bool, key: str, human: str, value) -> None:
    if porcelain:
        print(f"{key}={value}")
    else:
        print(f"{human}: {value}")


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _cmd_check(args) -> int:
    try:
        g = _load_graph(args.graph)
        report = classify(g, args.f)
    except (GraphFormatError, OSError, ValueError) as err:
        return _fail(str(err))
    p = args.porcelain
    _emit(p, "n", "nodes", g.n)
    _emit(p, "min_degree", "min degree", report.min_degree)
    _emit(p, "connectivity", "vertex connectivity", report.connectivity)
    _emit(p, "f", "fault budget f", report.f)
    _emit(p, "degree_required", "degree required (2f)", 2 * report.f)
    _emit(
        p,
        "impossibility_threshold",
        "impossibility threshold (floor(3f/2))",
        3 * report.f // 2,
    )
    _emit(p, "connectivity_required", "connectivity required (2f)", 2 * report.f)
    _emit(p, "necessary", "necessary condition", _yn(report.necessary_holds))
    _emit(p, "sufficient", "sufficient condition", _yn(report.sufficient_holds))
    _emit(p, "classification", "classification", report.classification)
    witness = (
        " ".join(str(x) for x in sorted(report.witness))
        if report.witness
        else ("" if p else "none")
    )
    _emit(p, "witness", "witness cut", witness)
    return 0


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _cmd_simulate(args) -> int:
    try:
        g = _load_graph(args.graph)
        faulty = [int(x) for x in args.faulty.split(",") if x != ""]
        inputs = [int(c) for c in args.inputs]
        params = []
        if args.actions:
            decode_actions(args.actions)  # validate early
            params.append(("actions", args.actions))
        scenario = make_scenario(
            g, args.f, faulty, inputs, args.adversary, args.seed, params
        )
    except (GraphFormatError, ScenarioError, OSError, ValueError) as err:
        return _fail(str(err))
    transcript, outcome = run_scenario(scenario)
    p = args.porcelain
    _emit(p, "advisory", "advisory (connectivity below 2f)", _yn(outcome.advisory))
    for v in range(g.n):
        if v in scenario.faulty:
            if p:
                print(f"node.{v}.role=faulty")
            else:
                print(f"node {v}: faulty")
            continue
        decision = outcome.decisions[v]
        ntype = outcome.node_types[v]
        faults = " ".join(str(x) for x in sorted(outcome.fault_sets[v]))
        if p:
            print(f"node.{v}.decision={decision}")
            print(f"node.{v}.type={ntype}")
            print(f"node.{v}.faults={faults}")
        else:
            shown = faults if faults else "none"
            print(
                f"node {v}: decision={decision} type={ntype} convicted={shown}"
            )
    if outcome.violations:
        _emit(p, "verdict", "verdict", "violations")
        for i, (prop, evidence) in enumerate(outcome.violations):
            if p:
                print(f"violation.{i}={prop}: {evidence}")
            else:
                print(f"  {prop}: {evidence}")
    else:
        _emit(p, "verdict", "verdict", "ok")
    if args.trace:
        text = export_transcript(transcript)
        if text:
            print(text, end="")
    return 1 if outcome.violations else 0


def _cmd_fuzz(args) -> int:
    try:
        summary = fuzz(args.trials, args.n_max, args.f_max, args.seed)
    except ValueError as err:
        return _fail(str(err))
    p = args.porcelain
    _emit(p, "trials", "trials", summary.trials)
    _emit(p, "clean", "clean", summary.clean)
    _emit(p, "violations", "violations", summary.violation_count)
    for name, count in sorted(summary.by_adversary.items()):
        _emit(p, f"adversary.{name}", f"violations under {name}", count)
    if summary.first_failure is None:
        return 0
    if p:
        for line in scenario_to_text(summary.first_failure).splitlines():
            print(f"failure.{line}")
        for i, (prop, evidence) in enumerate(summary.first_failure_violations):
            print(f"failure.violation.{i}={prop}: {evidence}")
    else:
        print("first failing scenario:")
        print(scenario_to_text(summary.first_failure), end="")
        for prop, evidence in summary.first_failure_violations:
            print(f"  {prop}: {evidence}")
    return 1


def _cmd_paths(args) -> int:
    try:
        g = _load_graph(args.graph)
    except (GraphFormatError, OSError, ValueError) as err:
        return _fail(str(err))
    if args.from_node == args.to_node:
        return _fail("endpoints must differ")
    if args.k < 1:
        return _fail("k must be positive")
    try:
        paths = canonical_disjoint_paths(g, args.from_node, args.to_node, args.k)
        achieved = len(paths)
    except InsufficientPathsError as err:
        paths = err.paths
        achieved = err.achieved
    except ValueError as err:
        return _fail(str(err))
    p = args.porcelain
    if p:
        print(f"requested={args.k}")
        print(f"found={achieved}")
        for i, path in enumerate(paths):
            print(f"path.{i}=" + " ".join(str(x) for x in path))
    else:
        for path in paths:
            print(" ".join(str(x) for x in path))
    if achieved < args.k:
        print(
            f"warning: only {achieved} of {args.k} disjoint paths exist",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_fgood(args) -> int:
    try:
        g = _load_graph(args.graph)
    except (GraphFormatError, OSError, ValueError) as err:
        return _fail(str(err))
    if args.f < 1:
        return _fail("f must be at least 1")
    p = args.porcelain
    characterized = is_f_good_characterized(g, args.f)
    _emit(p, "characterized", "f-good (characterized)", _yn(characterized))
    if not (args.brute_force or args.witness):
        return 0
    if g.n > BRUTEFORCE_NODE_CAP:
        return _fail(
            f"brute force is capped at {BRUTEFORCE_NODE_CAP} nodes, graph has {g.n}"
        )
    if args.f > BRUTEFORCE_FAULT_CAP:
        return _fail(
            f"brute force is capped at f={BRUTEFORCE_FAULT_CAP}, got {args.f}"
        )
    brute, witness = is_f_good_bruteforce(g, args.f)
    _emit(p, "brute_force", "f-good (brute force)", _yn(brute))
    if args.witness:
        if witness is None:
            _emit(p, "witness", "witness partition", "" if p else "none")
        else:
            txt = "F:{}|L:{}|C:{}|R:{}".format(
                *(
                    " ".join(str(x) for x in sorted(part))
                    for part in (
                        witness.fault_candidate_set,
                        witness.left,
                        witness.center,
                        witness.right,
                    )
                )
            )
            _emit(p, "witness", "witness partition", txt)
    if brute != characterized:
        _emit(p, "agreement", "cross-check", "mismatch")
        return 3
    _emit(p, "agreement", "cross-check", "ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lbcast",
        description=(
            "Byzantine consensus under identical-broadcast: graph analysis, "
            "protocol simulation, and adversarial fuzzing."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument(
            "--porcelain",
            action="store_true",
            help="stable key=value output for scripts",
        )

    sp = sub.add_parser("check", help="evaluate fault-tolerance conditions")
    sp.add_argument("--graph", required=True, help="graph file, or - for stdin")
    sp.add_argument("--f", type=int, required=True, help="fault budget")
    common(sp)
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("simulate", help="run one protocol scenario")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--f", type=int, required=True)
    sp.add_argument("--faulty", default="", help="comma-separated node ids")
    sp.add_argument("--inputs", required=True, help="bit string, one per node")
    sp.add_argument("--adversary", default="honest", choices=ADVERSARIES)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--actions", default="", help="scripted action table")
    sp.add_argument("--trace", action="store_true", help="print the transcript")
    common(sp)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("fuzz", help="randomized adversarial sweep")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--n-max", type=int, default=8, dest="n_max")
    sp.add_argument("--f-max", type=int, default=2, dest="f_max")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=_cmd_fuzz)

    sp = sub.add_parser("paths", help="canonical disjoint paths between nodes")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--from", type=int, required=True, dest="from_node")
    sp.add_argument("--to", type=int, required=True, dest="to_node")
    sp.add_argument("--k", type=int, required=True)
    common(sp)
    sp.set_defaults(func=_cmd_paths)

    sp = sub.add_parser("fgood", help="evaluate the f-good property")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--f", type=int, required=True)
    sp.add_argument("--witness", action="store_true", help="show a violating partition")
    sp.add_argument(
        "--brute-force",
        action="store_true",
        dest="brute_force",
        help="cross-check against exhaustive enumeration",
    )
    common(sp)
    sp.set_defaults(func=_cmd_fgood)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
