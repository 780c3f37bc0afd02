"""Release gate: every shipped guarantee exercised end to end.

Each criterion prints one summary line (visible under ``pytest -s``) and
asserts its exact tolerance. The consensus sweep of criterion 1 dominates
the runtime at several minutes; its results are cached and reused by
criterion 3, as are the fuzz results of criterion 2 and the shared graph
populations of criteria 4 through 6.
"""

import itertools
import random
import time

from lbcast.cli import main as cli_main
from lbcast.conditions import (
    CLASS_IMPOSSIBLE,
    check_sufficient,
    classify,
    is_f_good_bruteforce,
    is_f_good_characterized,
)
from lbcast.graphs import (
    InsufficientPathsError,
    brute_force_min_vertex_cut,
    canonical_disjoint_paths,
    cycle_graph,
    format_graph,
    gnp_graph,
    is_connected,
    local_connectivity,
    vertex_connectivity,
)
from lbcast.simnet import (
    encode_actions,
    fuzz,
    graph_connectivity,
    make_scenario,
    run_scenario,
    structured_families,
)

_RANDOM_SEEDS = (101, 102, 103, 104, 105)
_CONSENSUS_PROPS = ("termination", "agreement", "validity")
_LEMMA_PROPS = ("lemma1", "lemma3", "lemma4", "soundness")
_cache: dict = {}


def _report(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


def _input_vectors(n: int) -> tuple:
    return (
        tuple(0 for _ in range(n)),
        tuple(1 for _ in range(n)),
        tuple(i % 2 for i in range(n)),
        tuple(1 if i < n // 2 else 0 for i in range(n)),
    )


def _strategy_matrix() -> list:
    matrix = [("honest", 0), ("silent", 0), ("tamper", 0), ("frame", 0)]
    matrix.extend(("random", seed) for seed in _RANDOM_SEEDS)
    return matrix


def _consensus_sweep() -> dict:
    """Every structured graph up to 8 nodes, every admissible f, every
    faulty set, every strategy, four input vectors. Cached for reuse."""
    if "sweep" in _cache:
        return _cache["sweep"]
    by_property: dict = {}
    crashes: list = []
    runs = 0
    t0 = time.perf_counter()
    for g in structured_families(8):
        conn = graph_connectivity(g)
        for f in range(1, conn // 2 + 1):
            for size in range(f + 1):
                for faulty in itertools.combinations(range(g.n), size):
                    for adversary, seed in _strategy_matrix():
                        for inputs in _input_vectors(g.n):
                            sc = make_scenario(
                                g, f, faulty, inputs, adversary, seed
                            )
                            runs += 1
                            try:
                                _, outcome = run_scenario(sc)
                            except AssertionError as err:
                                crashes.append((sc, str(err)))
                                continue
                            for prop, _ in outcome.violations:
                                by_property[prop] = by_property.get(prop, 0) + 1
    result = {
        "runs": runs,
        "seconds": time.perf_counter() - t0,
        "by_property": by_property,
        "crashes": crashes,
    }
    _cache["sweep"] = result
    return result


def _fuzz_result() -> dict:
    if "fuzz" in _cache:
        return _cache["fuzz"]
    t0 = time.perf_counter()
    crash = None
    summary = None
    try:
        summary = fuzz(1000, n_max=8, f_max=2, seed=2026)
    except AssertionError as err:
        crash = str(err)
    result = {
        "summary": summary,
        "crash": crash,
        "seconds": time.perf_counter() - t0,
    }
    _cache["fuzz"] = result
    return result


def _oracle_population() -> list:
    """Connected structured graphs up to 7 nodes plus 500 connected random
    graphs, shared by the oracle-equivalence and implication criteria."""
    if "oracle" in _cache:
        return _cache["oracle"]
    graphs = [g for g in structured_families(7) if is_connected(g)]
    rng = random.Random(20260818)
    drawn = 0
    while drawn < 500:
        g = gnp_graph(rng.randint(3, 7), rng.uniform(0.3, 0.9), rng)
        if is_connected(g):
            graphs.append(g)
            drawn += 1
    _cache["oracle"] = graphs
    return graphs


def test_criterion_1_consensus_sweep():
    sweep = _consensus_sweep()
    broken = {
        prop: sweep["by_property"].get(prop, 0) for prop in _CONSENSUS_PROPS
    }
    total = sum(broken.values()) + len(sweep["crashes"])
    _report(
        1,
        total == 0,
        f"{sweep['runs']} runs in {sweep['seconds']:.0f}s, "
        f"{sum(broken.values())} consensus violations, "
        f"{len(sweep['crashes'])} crashes",
    )


def test_criterion_2_fuzz_sweep():
    result = _fuzz_result()
    summary = result["summary"]
    ok = (
        result["crash"] is None
        and summary is not None
        and summary.trials == 1000
        and summary.violation_count == 0
        and summary.clean == 1000
    )
    detail = (
        f"crashed: {result['crash']}"
        if summary is None
        else f"{summary.trials} trials in {result['seconds']:.0f}s, "
        f"{summary.violation_count} violations"
    )
    _report(2, ok, detail)


def test_criterion_3_structural_guarantees():
    sweep = _consensus_sweep()
    result = _fuzz_result()
    summary = result["summary"]
    lemma_hits = sum(sweep["by_property"].get(p, 0) for p in _LEMMA_PROPS)
    fuzz_hits = -1 if summary is None else summary.violation_count
    ok = (
        lemma_hits == 0
        and not sweep["crashes"]
        and result["crash"] is None
        and fuzz_hits == 0
    )
    _report(
        3,
        ok,
        f"{sweep['runs']} sweep runs and 1000 fuzz trials: "
        f"{lemma_hits} lemma or soundness violations, "
        f"{len(sweep['crashes'])} sweep crashes, fuzz crash: {result['crash']}",
    )


def test_criterion_4_goodness_oracle_equivalence():
    mismatches = []
    compared = 0
    for g in _oracle_population():
        for f in (1, 2):
            brute, _ = is_f_good_bruteforce(g, f)
            if brute != is_f_good_characterized(g, f):
                mismatches.append((g, f))
            compared += 1
    _report(
        4,
        not mismatches,
        f"{compared} comparisons, {len(mismatches)} mismatches",
    )


def test_criterion_5_connectivity_implies_goodness():
    counterexamples = []
    applicable = 0
    for g in _oracle_population():
        conn = vertex_connectivity(g)
        for f in (1, 2):
            if conn < 2 * f:
                continue
            applicable += 1
            if not is_f_good_bruteforce(g, f)[0]:
                counterexamples.append((g, f))
    _report(
        5,
        not counterexamples,
        f"{applicable} sufficiently connected cases, "
        f"{len(counterexamples)} counterexamples",
    )


def _structurally_disjoint(g, u, w, paths) -> bool:
    interiors: set = set()
    for p in paths:
        if p[0] != u or p[-1] != w or len(set(p)) != len(p):
            return False
        for a, b in zip(p, p[1:]):
            if b not in g.adjacency[a]:
                return False
        inner = set(p[1:-1])
        if inner & interiors:
            return False
        interiors |= inner
    return True


def test_criterion_6_connectivity_and_path_oracles():
    population = structured_families(8) + _oracle_population()
    cut_mismatches = 0
    path_failures = 0
    pairs = 0
    seen = set()
    for g in population:
        if g in seen:
            continue
        seen.add(g)
        if vertex_connectivity(g) != brute_force_min_vertex_cut(g):
            cut_mismatches += 1
        for u in range(g.n):
            for w in range(g.n):
                if u == w:
                    continue
                pairs += 1
                k_loc = local_connectivity(g, u, w)
                if k_loc > 0:
                    paths = canonical_disjoint_paths(g, u, w, k_loc)
                    if len(paths) != k_loc or not _structurally_disjoint(
                        g, u, w, paths
                    ):
                        path_failures += 1
                        continue
                try:
                    canonical_disjoint_paths(g, u, w, k_loc + 1)
                    path_failures += 1
                except InsufficientPathsError as err:
                    if err.achieved != k_loc or len(err.paths) != k_loc:
                        path_failures += 1
                    elif err.paths and not _structurally_disjoint(
                        g, u, w, err.paths
                    ):
                        path_failures += 1
    _report(
        6,
        cut_mismatches == 0 and path_failures == 0,
        f"{len(seen)} graphs, {pairs} ordered pairs: "
        f"{cut_mismatches} cut mismatches, {path_failures} path failures",
    )


def test_criterion_7_single_tamperer_regression():
    actions = {(1, ("relay", 0, 2, 0)): "flip"}
    sc = make_scenario(
        cycle_graph(4),
        1,
        [1],
        [1, 1, 1, 1],
        "scripted",
        0,
        [("actions", encode_actions(actions))],
    )
    _, outcome = run_scenario(sc)
    expected_decisions = {0: 1, 2: 1, 3: 1}
    expected_types = {0: "A", 2: "A", 3: "A"}
    expected_faults = {0: frozenset({1}), 2: frozenset({1}), 3: frozenset({1})}
    ok = (
        outcome.decisions == expected_decisions
        and outcome.node_types == expected_types
        and outcome.fault_sets == expected_faults
        and not outcome.violations
    )
    _report(
        7,
        ok,
        f"decisions {outcome.decisions}, types {outcome.node_types}, "
        f"convictions {dict(sorted(outcome.fault_sets.items()))}, "
        f"{len(outcome.violations)} violations",
    )


def test_criterion_8_threshold_arithmetic():
    gaps = [f for f in range(1, 65) if 2 * f < (3 * f) // 2 + 1]
    contradictions = 0
    checked = 0
    for g in structured_families(8):
        for f in (1, 2, 3, 4):
            if check_sufficient(g, f):
                checked += 1
                if classify(g, f).classification == CLASS_IMPOSSIBLE:
                    contradictions += 1
    _report(
        8,
        not gaps and contradictions == 0,
        f"threshold gap at f={gaps or 'none'}, "
        f"{checked} sufficient cases, {contradictions} classified impossible",
    )


def test_criterion_9_cli_determinism(tmp_path, capsys):
    graph_path = tmp_path / "graph.txt"
    graph_path.write_text(format_graph(cycle_graph(5)))
    simulate_argv = [
        "simulate",
        "--graph", str(graph_path),
        "--f", "1",
        "--faulty", "2",
        "--inputs", "10110",
        "--adversary", "random",
        "--seed", "77",
        "--trace",
        "--porcelain",
    ]
    fuzz_argv = ["fuzz", "--trials", "12", "--n-max", "6", "--seed", "9",
                 "--porcelain"]
    outputs = {"simulate": set(), "fuzz": set()}
    for _ in range(3):
        assert cli_main(simulate_argv) == 0
        outputs["simulate"].add(capsys.readouterr().out)
        assert cli_main(fuzz_argv) == 0
        outputs["fuzz"].add(capsys.readouterr().out)
    ok = len(outputs["simulate"]) == 1 and len(outputs["fuzz"]) == 1
    with capsys.disabled():
        _report(
            9,
            ok,
            f"3 simulate runs gave {len(outputs['simulate'])} distinct "
            f"outputs, 3 fuzz runs gave {len(outputs['fuzz'])}",
        )
