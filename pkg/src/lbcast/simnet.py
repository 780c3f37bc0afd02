"""Synchronous network simulator and adversary harness for the protocol.

A run executes 4n steps in four windows of n: input flooding, observation
report flooding, decision flooding, and adoption. Within a window, a path's
hop j broadcasts at offset j, so every canonical path (length at most n-1
hops) completes inside its window. The engine delivers each broadcast to
all graph neighbors identically, which is the whole point of the model:
a faulty node chooses one content per step, never one per neighbor.

Faulty nodes are driven through ``adversary_act``: at each step the engine
hands the strategy the node's pending obligations (what an honest node
would broadcast, and what just arrived for relaying) and the strategy picks
the actual emissions. Every shipped strategy except ``silent`` relays
round-2 report bundles faithfully; report transport is the evidence channel
the identification rules lean on, and a relay adversary gains nothing by
corrupting it that it could not get more simply by corrupting round 1,
while wholesale report forgery is indistinguishable from a denial of the
model's broadcast guarantee. The ``scripted`` strategy can still express
arbitrary per-slot behavior for experiments.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .graphs import (
    Graph,
    circulant_graph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    gnp_graph,
    vertex_connectivity,
)
from .protocol import (
    Bundle,
    NodeState,
    PathTable,
    ReportPayload,
    RoutedMessage,
    build_reports,
    decide,
    identify_faults,
    reliable_receive,
    relay_step,
)

ADVERSARIES = ("honest", "silent", "tamper", "frame", "random", "scripted")

_SEED_LIMIT = 1 << 64


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    """One complete, reproducible experiment description."""

    graph: Graph
    f: int
    faulty: frozenset
    inputs: tuple
    adversary: str = "honest"
    seed: int = 0
    params: tuple = ()  # sorted (key, value) string pairs

    def param(self, key: str, default: str = "") -> str:
        for k, v in self.params:
            if k == key:
                return v
        return default


def make_scenario(graph, f, faulty, inputs, adversary="honest", seed=0, params=()):
    s = Scenario(
        graph,
        f,
        frozenset(faulty),
        tuple(inputs),
        adversary,
        seed,
        tuple(sorted(params)),
    )
    validate_scenario(s)
    return s


def validate_scenario(s: Scenario) -> None:
    problems = []
    n = s.graph.n
    if s.f < 1:
        problems.append(f"f must be at least 1, got {s.f}")
    if not s.faulty <= set(range(n)):
        problems.append(f"faulty nodes {sorted(s.faulty)} outside 0..{n - 1}")
    if len(s.faulty) > s.f:
        problems.append(f"{len(s.faulty)} faulty nodes exceed the budget f={s.f}")
    if len(s.inputs) != n:
        problems.append(f"expected {n} inputs, got {len(s.inputs)}")
    elif any(b not in (0, 1) for b in s.inputs):
        problems.append("inputs must be bits")
    if not 0 <= s.seed < _SEED_LIMIT:
        problems.append("seed must fit in 64 bits")
    if s.adversary not in ADVERSARIES:
        problems.append(f"unknown adversary {s.adversary!r}")
    if problems:
        raise ScenarioError("; ".join(problems))


# --- adversary strategies ---


def _chance(seed: int, node: int, tag: str) -> float:
    """Deterministic uniform draw in [0, 1), independent of call order."""
    raw = hashlib.blake2b(
        f"{seed}/{node}/{tag}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(raw, "big") / float(1 << 64)


def _lied_bundle(bundle: Bundle) -> Bundle:
    return tuple(
        ReportPayload(
            p.reporter,
            p.subject,
            tuple((slot, 1 - val) for slot, val in p.observed),
        )
        for p in bundle
    )


class Strategy:
    """Faulty-node behavior; the base class acts exactly honestly."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario

    def flood_value(self, node: int, input_bit: int):
        return input_bit

    def relay_flood(self, node: int, slot, incoming):
        return incoming

    def own_report(self, node: int, truthful: Bundle):
        return truthful

    def relay_report(self, node: int, slot, incoming):
        return incoming

    def own_decision(self, node: int):
        return None  # nothing to pretend; honest type B would flood later

    def relay_decision(self, node: int, slot, incoming):
        return incoming


class HonestStrategy(Strategy):
    pass


class SilentStrategy(Strategy):
    """Broadcasts nothing, ever; the one strategy that drops reports too."""

    def flood_value(self, node, input_bit):
        return None

    def relay_flood(self, node, slot, incoming):
        return None

    def own_report(self, node, truthful):
        return None

    def relay_report(self, node, slot, incoming):
        return None

    def own_decision(self, node):
        return None

    def relay_decision(self, node, slot, incoming):
        return None


class TamperStrategy(Strategy):
    """Floods and reports truthfully but flips every value it relays."""

    def relay_flood(self, node, slot, incoming):
        return None if incoming is None else 1 - incoming

    def own_decision(self, node):
        return 1 - self.scenario.inputs[node]

    def relay_decision(self, node, slot, incoming):
        return None if incoming is None else 1 - incoming


class FrameStrategy(Strategy):
    """Relays faithfully but lies in its own report, inverting every
    observation to accuse its neighbors of flipped broadcasts."""

    def own_report(self, node, truthful):
        return _lied_bundle(truthful)


class RandomStrategy(Strategy):
    """Well-formed but erratic: seeded per-slot flips, drops, fabrications."""

    def flood_value(self, node, input_bit):
        r = _chance(self.scenario.seed, node, "flood")
        if r < 0.70:
            return input_bit
        if r < 0.85:
            return 1 - input_bit
        return None

    def relay_flood(self, node, slot, incoming):
        r = _chance(self.scenario.seed, node, f"r1{slot}")
        if incoming is None:
            return self._maybe_fabricate(node, slot, r)
        if r < 0.55:
            return incoming
        if r < 0.80:
            return 1 - incoming
        if r < 0.95:
            return None
        return self._maybe_fabricate(node, slot, r)

    def _maybe_fabricate(self, node, slot, r):
        if r < 0.5:
            return None
        return int(_chance(self.scenario.seed, node, f"fab{slot}") < 0.5)

    def own_report(self, node, truthful):
        if _chance(self.scenario.seed, node, "report") < 0.6:
            return truthful
        return _lied_bundle(truthful)

    def own_decision(self, node):
        r = _chance(self.scenario.seed, node, "decide")
        if r < 0.5:
            return None
        return int(r * 1000) & 1

    def relay_decision(self, node, slot, incoming):
        if incoming is None:
            return None
        r = _chance(self.scenario.seed, node, f"r3{slot}")
        if r < 0.60:
            return incoming
        if r < 0.85:
            return 1 - incoming
        return None


class ScriptedStrategy(Strategy):
    """Follows an explicit per-slot action table; everything else honest.

    Actions map (node, slot) to "flip", "drop", or ("value", v). Origin
    slots are ("flood", node), ("report", node), ("decide", node).
    """

    def __init__(self, scenario: Scenario, actions: Optional[dict] = None):
        super().__init__(scenario)
        if actions is None:
            actions = decode_actions(scenario.param("actions"))
        self.actions = actions

    def _apply(self, node, slot, honest_value):
        act = self.actions.get((node, slot))
        if act is None:
            return honest_value
        if act == "drop":
            return None
        if act == "flip":
            if honest_value is None:
                return None
            return 1 - honest_value
        if isinstance(act, tuple) and act[0] == "value":
            return act[1]
        raise ScenarioError(f"unknown scripted action {act!r}")

    def flood_value(self, node, input_bit):
        return self._apply(node, ("flood", node), input_bit)

    def relay_flood(self, node, slot, incoming):
        return self._apply(node, slot, incoming)

    def own_report(self, node, truthful):
        act = self.actions.get((node, ("report", node)))
        if act == "drop":
            return None
        if act == "flip":
            return _lied_bundle(truthful)
        if isinstance(act, tuple) and act[0] == "value":
            return act[1]
        return truthful

    def relay_report(self, node, slot, incoming):
        act = self.actions.get((node, slot))
        if act == "drop":
            return None
        return incoming

    def own_decision(self, node):
        act = self.actions.get((node, ("decide", node)))
        if isinstance(act, tuple) and act[0] == "value":
            return act[1]
        if act == "flip":
            return 1 - self.scenario.inputs[node]
        return None

    def relay_decision(self, node, slot, incoming):
        return self._apply(node, slot, incoming)


def encode_actions(actions: dict) -> str:
    """Canonical text form of a scripted action table."""
    items = []
    for (node, slot), act in sorted(actions.items(), key=repr):
        slot_txt = ",".join(str(p) for p in slot)
        if isinstance(act, tuple):
            act_txt = f"value={act[1]}"
        else:
            act_txt = act
        items.append(f"{node}@{slot_txt}:{act_txt}")
    return ";".join(items)


def decode_actions(text: str) -> dict:
    actions: dict = {}
    if not text:
        return actions
    for item in text.split(";"):
        loc, _, act_txt = item.partition(":")
        node_txt, _, slot_txt = loc.partition("@")
        parts = slot_txt.split(",")
        try:
            slot = (parts[0],) + tuple(int(p) for p in parts[1:])
            node = int(node_txt)
        except ValueError:
            raise ScenarioError(f"malformed action item {item!r}") from None
        if act_txt.startswith("value="):
            try:
                act = ("value", int(act_txt[6:]))
            except ValueError:
                raise ScenarioError(f"malformed action item {item!r}") from None
        elif act_txt in ("flip", "drop"):
            act = act_txt
        else:
            raise ScenarioError(f"unknown scripted action {act_txt!r}")
        actions[(node, slot)] = act
    return actions


def make_strategy(scenario: Scenario) -> Strategy:
    cls = {
        "honest": HonestStrategy,
        "silent": SilentStrategy,
        "tamper": TamperStrategy,
        "frame": FrameStrategy,
        "random": RandomStrategy,
        "scripted": ScriptedStrategy,
    }[scenario.adversary]
    return cls(scenario)


@dataclass
class AdversaryView:
    """Everything a faulty node is offered at one step: its own pending
    origin broadcast (if this is the window's first step) and each relay
    obligation with whatever arrived for it."""

    node: int
    window: int
    offset: int
    origin_duty: Optional[tuple] = None  # (kind, honest content)
    relay_duties: list = field(default_factory=list)  # (kind, slot, incoming)


def adversary_act(strategy: Strategy, view: AdversaryView) -> dict:
    """One faulty node's chosen broadcast content for one step.

    Returns {slot: value}; the engine broadcasts exactly this to all of the
    node's neighbors, so per-neighbor equivocation cannot be expressed.
    """
    out: dict = {}
    x = view.node
    if view.origin_duty is not None:
        kind, honest_content = view.origin_duty
        if kind == "flood":
            val = strategy.flood_value(x, honest_content)
        elif kind == "report":
            val = strategy.own_report(x, honest_content)
        else:
            val = strategy.own_decision(x)
        if val is not None:
            out[(kind, x)] = val
    for kind, slot, incoming in view.relay_duties:
        if kind == "flood":
            val = strategy.relay_flood(x, slot, incoming)
        elif kind == "report":
            val = strategy.relay_report(x, slot, incoming)
        else:
            val = strategy.relay_decision(x, slot, incoming)
        if val is not None:
            out[slot] = val
    return out


# --- the engine ---


@dataclass
class Transcript:
    scenario: Scenario
    # step -> node -> sorted tuple of (slot, value) broadcast that step
    steps: dict
    final_states: dict  # honest node -> NodeState


@dataclass
class Outcome:
    decisions: dict
    node_types: dict
    fault_sets: dict
    violations: list  # (property, evidence)
    advisory: bool

    @property
    def ok(self) -> bool:
        return not self.violations


_table_cache: dict = {}
_conn_cache: dict = {}


def _paths_for(g: Graph, k: int) -> PathTable:
    key = (g, k)
    table = _table_cache.get(key)
    if table is None:
        table = PathTable(g, k)
        _table_cache[key] = table
    return table


def graph_connectivity(g: Graph) -> int:
    c = _conn_cache.get(g)
    if c is None:
        c = vertex_connectivity(g) if g.n >= 2 else 0
        _conn_cache[g] = c
    return c


_KINDS = ("flood", "report", "decide")


class _Engine:
    def __init__(self, scenario: Scenario):
        self.s = scenario
        self.g = scenario.graph
        self.n = self.g.n
        self.table = _paths_for(self.g, 2 * scenario.f)
        self.strategy = make_strategy(scenario)
        self.honest = [x for x in range(self.n) if x not in scenario.faulty]
        self.states = {
            x: NodeState(x, scenario.f, scenario.inputs[x], self.g, self.table)
            for x in self.honest
        }
        # per-round emissions, node -> {slot: value}
        self.rounds = [
            {x: {} for x in range(self.n)},
            {x: {} for x in range(self.n)},
            {x: {} for x in range(self.n)},
        ]
        self.transcript_steps = {t: {} for t in range(4 * self.n)}
        # relay positions of each faulty node: offset -> [(o, w, i, pos)]
        self.fault_positions: dict = {}
        for (u, w), paths in self.table.pairs.items():
            for i, p in enumerate(paths):
                for pos in range(1, len(p) - 1):
                    x = p[pos]
                    if x in scenario.faulty:
                        self.fault_positions.setdefault((x, pos), []).append(
                            (u, w, i, pos)
                        )

    def run(self) -> Transcript:
        for window in range(3):
            self._run_window(window)
            if window == 0:
                self._after_flood_window()
            elif window == 1:
                self._after_report_window()
        self._adopt()
        return Transcript(self.s, self.transcript_steps, self.states)

    # -- window mechanics --

    def _run_window(self, window: int) -> None:
        base = window * self.n
        emissions = self.rounds[window]
        pending: list[RoutedMessage] = []
        for offset in range(self.n):
            step = base + offset
            broadcasts: dict[int, dict] = {}
            arrivals: list[RoutedMessage] = []
            if offset == 0:
                self._emit_origins(window, broadcasts)
            else:
                for msg in pending:
                    nh = self._next_hop(msg)
                    if nh is None or nh in self.s.faulty:
                        continue  # consumed, or handled with the duties below
                    for out in relay_step(self.states[nh], msg):
                        broadcasts.setdefault(nh, {})[out.slot()] = (
                            out.carried_value
                        )
                        arrivals.append(out)
                self._emit_faulty_relays(window, offset, pending, broadcasts)
            # a broadcast is one content per node per step; fan messages out
            for x, slots in broadcasts.items():
                emis = emissions[x]
                recorded = []
                for slot, val in sorted(slots.items()):
                    assert slot not in emis, "second broadcast in one slot"
                    emis[slot] = val
                    recorded.append((slot, val))
                self.transcript_steps[step][x] = tuple(recorded)
            if offset == 0:
                arrivals = self._origin_messages(window, broadcasts)
            else:
                arrivals.extend(
                    self._faulty_relay_messages(window, broadcasts)
                )
            pending = arrivals

    def _emit_origins(self, window: int, broadcasts: dict) -> None:
        kind = _KINDS[window]
        for x in range(self.n):
            if x in self.s.faulty:
                duty = (kind, self._honest_origin_content(window, x))
                view = AdversaryView(x, window, 0, origin_duty=duty)
                out = adversary_act(self.strategy, view)
                if out:
                    broadcasts[x] = out
                continue
            content = self._honest_origin_content(window, x)
            if content is None:
                continue
            broadcasts[x] = {(kind, x): content}

    def _honest_origin_content(self, window: int, x: int):
        if window == 0:
            return self.s.inputs[x]
        if window == 1:
            if x in self.s.faulty:
                return self._truthful_bundle(x)
            state = self.states[x]
            bundle = tuple(build_reports(state))
            state.sent[("report", x)] = bundle
            return bundle
        # window 2: only honest type B nodes flood a decision
        if x in self.s.faulty:
            return None
        state = self.states[x]
        if state.node_type != "B":
            return None
        return decide(state)

    def _truthful_bundle(self, x: int) -> Bundle:
        flood = self.rounds[0]
        out = []
        for nb in sorted(self.g.adjacency[x]):
            obs = tuple(sorted(flood[nb].items()))
            out.append(ReportPayload(x, nb, obs))
        return tuple(out)

    def _origin_messages(self, window, broadcasts) -> list[RoutedMessage]:
        kind = _KINDS[window]
        msgs = []
        for x, slots in broadcasts.items():
            content = slots.get((kind, x))
            if content is None:
                continue
            for w, paths in self.table.paths_from(x):
                for i, p in enumerate(paths):
                    if len(p) > 2:
                        msgs.append(
                            RoutedMessage(x, kind, (x, w, i), (x,), content)
                        )
        return msgs

    def _faulty_relay_messages(self, window, broadcasts) -> list[RoutedMessage]:
        kind = _KINDS[window]
        msgs = []
        for x, slots in broadcasts.items():
            if x not in self.s.faulty:
                continue
            for slot, val in slots.items():
                if len(slot) != 4:
                    continue
                _, u, w, i = slot
                p = self.table.pairs[(u, w)][i]
                pos = p.index(x)
                msgs.append(
                    RoutedMessage(u, kind, (u, w, i), p[: pos + 1], val)
                )
        return msgs

    def _next_hop(self, msg: RoutedMessage) -> Optional[int]:
        p = self.table.pairs[(msg.path[0], msg.path[1])][msg.path[2]]
        nh = p[len(msg.hop_trace)]
        return None if nh == msg.path[1] else nh

    def _emit_faulty_relays(self, window, offset, pending, broadcasts):
        kind = _KINDS[window]
        relay_kind = {"flood": "relay", "report": "rbundle", "decide": "rdecide"}[
            kind
        ]
        duties: dict[int, dict] = {}  # node -> {relay slot: incoming}
        for msg in pending:
            nh = self._next_hop(msg)
            if nh in self.s.faulty:
                o, w, i = msg.path
                duties.setdefault(nh, {})[(relay_kind, o, w, i)] = (
                    msg.carried_value
                )
        # obligations whose incoming never arrived (upstream went dark)
        for x in sorted(self.s.faulty):
            for (u, w, i, pos) in self.fault_positions.get((x, offset), ()):
                duties.setdefault(x, {}).setdefault((relay_kind, u, w, i), None)
        for x, slot_map in sorted(duties.items()):
            relay_duties = [
                (kind, slot, incoming) for slot, incoming in sorted(slot_map.items())
            ]
            view = AdversaryView(x, window, offset, relay_duties=relay_duties)
            out = adversary_act(self.strategy, view)
            for slot, val in out.items():
                broadcasts.setdefault(x, {})[slot] = val

    # -- state assembly between windows --

    def _after_flood_window(self) -> None:
        flood = self.rounds[0]
        for v, state in self.states.items():
            for nb in self.g.adjacency[v]:
                state.overheard[nb] = flood[nb]
            state.sent.update(flood[v])
            for u in range(self.n):
                if u == v:
                    continue
                paths = self.table.pairs[(u, v)]
                for i, p in enumerate(paths):
                    last = p[-2]
                    slot = ("flood", u) if len(p) == 2 else ("relay", u, v, i)
                    state.round1_view[(u, i)] = flood[last].get(slot)
            for u in range(self.n):
                rv = reliable_receive(state, u)
                if rv is not None:
                    state.reliable[u] = rv

    def _after_report_window(self) -> None:
        reports = self.rounds[1]
        for v, state in self.states.items():
            for nb in self.g.adjacency[v]:
                state.overheard_reports[nb] = reports[nb]
            state.sent.update(reports[v])
            for r in range(self.n):
                if r == v:
                    continue
                paths = self.table.pairs[(r, v)]
                interiors = self.table.interiors[(r, v)]
                copies = []
                for i, p in enumerate(paths):
                    last = p[-2]
                    slot = ("report", r) if len(p) == 2 else ("rbundle", r, v, i)
                    copies.append((interiors[i], reports[last].get(slot)))
                state.report_copies[r] = tuple(copies)
                self._reliable_bundle(state, r)
            identify_faults(state)

    def _reliable_bundle(self, state: NodeState, r: int) -> None:
        if r in self.g.adjacency[state.id]:
            bundle = state.overheard_reports[r].get(("report", r))
            if bundle is not None:
                state.report_view[r] = bundle
            return
        counts: dict = {}
        for mask, content in state.report_copies[r]:
            if content is not None:
                counts.setdefault(content, []).append(mask)
        winners = [c for c, ms in counts.items() if len(ms) >= state.f + 1]
        assert len(winners) <= 1, "two report quorums for one reporter"
        if winners:
            state.report_view[r] = winners[0]

    def _adopt(self) -> None:
        decided = self.rounds[2]
        for v, state in self.states.items():
            if state.decision is not None:
                continue  # type B decided when it flooded
            arrivals = []
            for u in range(self.n):
                if u == v:
                    continue
                paths = self.table.pairs[(u, v)]
                for i, p in enumerate(paths):
                    last = p[-2]
                    slot = ("decide", u) if len(p) == 2 else ("rdecide", u, v, i)
                    val = decided[last].get(slot)
                    if val is not None:
                        arrivals.append((max(len(p) - 2, 0), u, i, val))
            decide(state, arrivals)


def run_scenario(scenario: Scenario):
    """Execute a scenario; returns (Transcript, Outcome), pure in scenario."""
    validate_scenario(scenario)
    transcript = _Engine(scenario).run()
    outcome = outcome_of(transcript)
    return transcript, outcome


def outcome_of(transcript: Transcript) -> Outcome:
    s = transcript.scenario
    states = transcript.final_states
    return Outcome(
        decisions={v: st.decision for v, st in sorted(states.items())},
        node_types={v: st.node_type for v, st in sorted(states.items())},
        fault_sets={
            v: frozenset(st.fault_set) for v, st in sorted(states.items())
        },
        violations=verify_outcome(transcript),
        advisory=graph_connectivity(s.graph) < 2 * s.f,
    )


# --- outcome verification ---


def verify_outcome(transcript: Transcript) -> list:
    """Independent audit of a finished run; returns (property, evidence).

    Checks the consensus contract (agreement, validity, termination), the
    structural guarantees the algorithm's correctness rests on (every
    actually-broadcast input is reliably received everywhere; honest type B
    nodes hold identical reliable sets; everyone reliably receives enough
    other inputs), and conviction soundness (no honest node convicted).
    """
    s = transcript.scenario
    states = transcript.final_states
    violations: list = []
    honest = sorted(states)

    undecided = [v for v in honest if states[v].decision is None]
    if undecided:
        violations.append(("termination", f"undecided nodes {undecided}"))
    decisions = {states[v].decision for v in honest if states[v].decision is not None}
    if len(decisions) > 1:
        detail = ", ".join(f"{v}:{states[v].decision}" for v in honest)
        violations.append(("agreement", detail))
    honest_inputs = {s.inputs[v] for v in honest}
    if len(honest_inputs) == 1 and honest:
        b = honest_inputs.pop()
        wrong = [
            v
            for v in honest
            if states[v].decision is not None and states[v].decision != b
        ]
        if wrong:
            violations.append(
                ("validity", f"common input {b}, nodes {wrong} decided otherwise")
            )

    flood_step = transcript.steps.get(0, {})

    def flooded(x):
        for slot, val in flood_step.get(x, ()):
            if slot == ("flood", x):
                return val
        return None

    for u in sorted(s.faulty):
        e = flooded(u)
        if e is None:
            continue
        for v in honest:
            rv = states[v].reliable.get(u)
            if rv is None or rv.value != e:
                got = None if rv is None else rv.value
                violations.append(
                    ("lemma1", f"node {v} holds {got} for broadcast {e} of {u}")
                )

    type_b = [v for v in honest if states[v].node_type == "B"]
    if len(type_b) > 1:
        base = {u: rv.value for u, rv in states[type_b[0]].reliable.items()}
        for v in type_b[1:]:
            view = {u: rv.value for u, rv in states[v].reliable.items()}
            if view != base:
                violations.append(
                    (
                        "lemma3",
                        f"type B nodes {type_b[0]} and {v} hold different "
                        f"reliable sets: {base} vs {view}",
                    )
                )
                break

    dark = sum(1 for u in s.faulty if flooded(u) is None)
    need = 2 * s.f - dark
    for v in honest:
        got = sum(1 for u in states[v].reliable if u != v)
        if got < need:
            violations.append(
                ("lemma4", f"node {v} reliably received {got} < {need} inputs")
            )

    for v in honest:
        bogus = states[v].fault_set - s.faulty
        if bogus:
            violations.append(
                ("soundness", f"node {v} convicted honest nodes {sorted(bogus)}")
            )

    return violations


# --- serialization ---


def scenario_to_text(s: Scenario) -> str:
    lines = [
        f"n = {s.graph.n}",
        "edges = " + " ".join(f"{u}-{w}" for u, w in s.graph.edges),
        f"f = {s.f}",
        "faulty = " + " ".join(str(x) for x in sorted(s.faulty)),
        "inputs = " + "".join(str(b) for b in s.inputs),
        f"adversary = {s.adversary}",
        f"seed = {s.seed}",
    ]
    for k, v in s.params:
        lines.append(f"param.{k} = {v}")
    return "\n".join(lines) + "\n"


def scenario_from_text(text: str) -> Scenario:
    fields: dict[str, tuple[str, int]] = {}
    params = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ScenarioError(f"line {lineno}: expected 'key = value'")
        key = key.strip()
        value = value.strip()
        if key.startswith("param."):
            params.append((key[6:], value))
        else:
            fields[key] = (value, lineno)

    def take(key, default=None):
        if key in fields:
            return fields[key]
        if default is None:
            raise ScenarioError(f"missing field {key!r}")
        return default, 0

    def ints(key, tokens, lineno):
        try:
            return [int(t) for t in tokens]
        except ValueError:
            raise ScenarioError(
                f"line {lineno}: bad integer in {key}"
            ) from None

    n_txt, n_line = take("n")
    n = ints("n", [n_txt], n_line)[0]
    edges_txt, edges_line = take("edges", "")
    edges = []
    for part in edges_txt.split():
        a, _, b = part.partition("-")
        edges.append(tuple(ints("edges", [a, b], edges_line)))
    try:
        graph = Graph.from_edges(n, edges)
    except ValueError as err:
        raise ScenarioError(str(err)) from None
    faulty_txt, faulty_line = take("faulty", "")
    faulty = ints("faulty", faulty_txt.split(), faulty_line)
    inputs_txt, inputs_line = take("inputs")
    inputs = ints("inputs", list(inputs_txt), inputs_line)
    f_txt, f_line = take("f")
    seed_txt, seed_line = take("seed", "0")
    return make_scenario(
        graph,
        ints("f", [f_txt], f_line)[0],
        faulty,
        inputs,
        take("adversary", "honest")[0],
        ints("seed", [seed_txt], seed_line)[0],
        params,
    )


def _encode_value(val) -> str:
    if isinstance(val, int):
        return str(val)
    if isinstance(val, tuple):  # report bundle
        parts = []
        for p in val:
            obs = ",".join(
                "{}={}".format(".".join(str(c) for c in slot), v)
                for slot, v in p.observed
            )
            parts.append(f"{p.reporter}>{p.subject}[{obs}]")
        return "|".join(parts)
    return repr(val)


def export_transcript(transcript: Transcript) -> str:
    """Canonical text form: one line per broadcast slot, in step order."""
    lines = []
    for step in sorted(transcript.steps):
        per_node = transcript.steps[step]
        for node in sorted(per_node):
            for slot, val in per_node[node]:
                slot_txt = ".".join(str(c) for c in slot)
                lines.append(
                    f"step={step} node={node} slot={slot_txt} "
                    f"value={_encode_value(val)}"
                )
    return "\n".join(lines) + ("\n" if lines else "")


def structured_families(n_max: int) -> list:
    """Deduplicated structured graph population up to ``n_max`` nodes:
    complete graphs, cycles, circulants over every jump set, and complete
    bipartite graphs. Includes disconnected and low-connectivity members;
    callers filter by whatever bound they need."""
    seen: dict = {}

    def add(g: Graph) -> None:
        seen.setdefault((g.n, g.edges), g)

    for n in range(2, n_max + 1):
        add(complete_graph(n))
    for n in range(3, n_max + 1):
        add(cycle_graph(n))
        half = n // 2
        for r in range(1, half + 1):
            for jumps in itertools.combinations(range(1, half + 1), r):
                add(circulant_graph(n, list(jumps)))
    for a in range(1, n_max):
        for b in range(a, n_max - a + 1):
            add(complete_bipartite_graph(a, b))
    return [seen[key] for key in sorted(seen)]


# --- fuzzing ---


@dataclass
class FuzzSummary:
    trials: int
    clean: int
    violation_count: int
    by_adversary: dict
    first_failure: Optional[Scenario]
    first_failure_violations: list


_FUZZ_ADVERSARIES = ("silent", "tamper", "frame", "random")


def _fuzz_graph(rng: random.Random, n_max: int) -> Graph:
    for _ in range(64):
        n = rng.randint(4, n_max)
        style = rng.randrange(4)
        if style == 0:
            g = complete_graph(n)
        elif style == 1:
            jumps = sorted(rng.sample(range(1, n // 2 + 1), rng.randint(1, 2)))
            g = circulant_graph(n, jumps)
        elif style == 2 and n >= 4:
            a = rng.randint(2, n - 2)
            g = complete_bipartite_graph(a, n - a)
        else:
            g = gnp_graph(n, 0.4 + 0.5 * rng.random(), rng)
        if graph_connectivity(g) >= 2:
            return g
    return complete_graph(max(4, min(n_max, 5)))


def fuzz(budget: int, n_max: int = 10, f_max: int = 3, seed: int = 0) -> FuzzSummary:
    """Randomized adversarial sweep; deterministic for a fixed seed.

    Samples graphs with connectivity at least 2, picks f within both the
    connectivity bound and f_max, a faulty set biased toward full size,
    random inputs, and one of the misbehaving strategies, then runs and
    audits each scenario. Stops counting nothing: the summary reflects
    exactly ``budget`` runs.
    """
    if n_max > 10:
        raise ValueError("fuzz graphs are capped at 10 nodes")
    rng = random.Random(seed)
    by_adversary = {name: 0 for name in _FUZZ_ADVERSARIES}
    clean = 0
    violation_count = 0
    first_failure = None
    first_violations: list = []
    for _ in range(budget):
        g = _fuzz_graph(rng, n_max)
        conn = graph_connectivity(g)
        f = rng.randint(1, max(1, min(f_max, conn // 2)))
        size = rng.choice([f, f, f, rng.randint(0, f)])
        faulty = rng.sample(range(g.n), size)
        inputs = [rng.randint(0, 1) for _ in range(g.n)]
        adversary = _FUZZ_ADVERSARIES[rng.randrange(len(_FUZZ_ADVERSARIES))]
        trial_seed = rng.getrandbits(64)
        scenario = make_scenario(g, f, faulty, inputs, adversary, trial_seed)
        _, outcome = run_scenario(scenario)
        if outcome.violations and not outcome.advisory:
            violation_count += 1
            by_adversary[adversary] += 1
            if first_failure is None:
                first_failure = scenario
                first_violations = outcome.violations
        else:
            clean += 1
    return FuzzSummary(
        trials=budget,
        clean=clean,
        violation_count=violation_count,
        by_adversary=by_adversary,
        first_failure=first_failure,
        first_failure_violations=first_violations,
    )


# --- exhaustive misbehavior search at tiny sizes ---


def _scriptable_slots(table: PathTable, node: int) -> list:
    slots = [("flood", node), ("report", node), ("decide", node)]
    relay = []
    for (u, w), paths in table.pairs.items():
        for i, p in enumerate(paths):
            if node in p[1:-1]:
                relay.append((u, w, i))
    for u, w, i in sorted(relay):
        slots.append(("relay", u, w, i))
        slots.append(("rdecide", u, w, i))
    return slots


def search_worst_case(
    graph: Graph,
    f: int,
    faulty_node: int,
    inputs,
    limit: Optional[int] = None,
    slots: Optional[list] = None,
) -> tuple[int, Optional[Scenario], list]:
    """Try every per-slot misbehavior combination of one faulty node.

    By default covers its own three origin broadcasts and every flood and
    decision relay slot it owns, each independently honest, flipped, or
    dropped (report relays stay faithful, matching the shipped
    strategies); pass ``slots`` to restrict the search to a subset. The
    space is 3^k, so an unrestricted search is only feasible when the node
    sits on few paths; ``limit`` bounds the number of scenarios run.
    Returns (number of scenarios executed, first violating scenario or
    None, its violations).
    """
    if graph.n > 6:
        raise ValueError("exhaustive search is limited to 6 nodes")
    table = _paths_for(graph, 2 * f)
    if slots is None:
        slots = _scriptable_slots(table, faulty_node)
    choices = [(None, "flip", "drop")] * len(slots)
    ran = 0
    for combo in _product(choices, limit):
        actions = {
            (faulty_node, slot): act
            for slot, act in zip(slots, combo)
            if act is not None
        }
        scenario = make_scenario(
            graph,
            f,
            [faulty_node],
            inputs,
            "scripted",
            0,
            [("actions", encode_actions(actions))],
        )
        _, outcome = run_scenario(scenario)
        ran += 1
        if outcome.violations and not outcome.advisory:
            return ran, scenario, outcome.violations
    return ran, None, []


def _product(choices, limit) -> Iterator[tuple]:
    it = itertools.product(*choices)
    if limit is None:
        yield from it
    else:
        yield from itertools.islice(it, limit)
