"""Consensus protocol for synchronous broadcast networks with Byzantine nodes.

The communication model: every broadcast by a node is delivered reliably and
identically to all its graph neighbors, with the sender correctly identified.
A faulty node can lie, tamper, or stay silent, but it cannot send different
content to different neighbors in one step, and it cannot forge the sender.

The algorithm tolerates f Byzantine nodes on any graph with vertex
connectivity at least 2f and runs in three logical rounds:

1. every node floods its input bit along fixed canonical disjoint paths;
2. every node reports, verbatim, everything it overheard each neighbor
   broadcast in round 1, and these reports are flooded the same way;
3. nodes that identified all f faulty nodes ("type A") wait to adopt a
   decision from the rest ("type B"), who decide by majority over the
   values they received reliably and flood that decision.

Fault identification uses three mechanisms, from cheap to expensive: direct
overhearing of a neighbor relaying a value that differs from what this node
itself broadcast; a scan along each canonical path for the first hop whose
transmission (as established by f+1 independent reporters) contradicts the
origin value; and, when some origin's value could not be received reliably,
an exhaustive consistency check that convicts exactly the nodes contained
in every fault hypothesis consistent with the local view.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from .graphs import Graph, InsufficientPathsError, canonical_disjoint_paths

# Slot keys name one broadcast obligation each. A node's emission under a
# slot is what it broadcast for that obligation (every neighbor hears it).
#   ("flood", u)                round-1 input broadcast by origin u
#   ("relay", u, w, i)          round-1 relay on canonical path i from u to w
#   ("report", r)               round-2 observation bundle of reporter r
#   ("rbundle", r, w, i)        round-2 relay of r's bundle toward w
#   ("decide", u)               round-3 decision broadcast by u
#   ("rdecide", u, w, i)        round-3 relay of u's decision toward w
Slot = tuple

EV_SELF = "self"
EV_DIRECT = "direct-neighbor"
EV_QUORUM = "path-quorum"


class RoutedMessage(NamedTuple):
    """One path-routed message as broadcast by some node.

    ``path`` names a canonical path by (origin, destination, index), and
    ``hop_trace`` lists the nodes that broadcast this copy so far; an honest
    relay keeps it a prefix of the named path. ``carried_value`` is the
    current content, which a faulty relay may have altered.
    """

    origin: int
    kind: str  # "flood" | "report" | "decide"
    path: tuple[int, int, int]
    hop_trace: tuple[int, ...]
    carried_value: object

    def slot(self) -> Slot:
        o, w, i = self.path
        if len(self.hop_trace) == 1:
            return _origin_slot(self.kind, o)
        return _relay_slot(self.kind, o, w, i)


def _origin_slot(kind: str, origin: int) -> Slot:
    return (kind, origin)


def _relay_slot(kind: str, origin: int, dest: int, idx: int) -> Slot:
    return ({"flood": "relay", "report": "rbundle", "decide": "rdecide"}[kind],
            origin, dest, idx)


@dataclass(frozen=True)
class ReportPayload:
    """Reporter's verbatim record of one neighbor's round-1 broadcasts.

    ``observed`` maps each slot the subject broadcast in to the value heard,
    as a sorted tuple of (slot, value) pairs. A subject that broadcast
    nothing yields an empty tuple; absence of a slot is itself an assertion
    that the subject did not broadcast in it.
    """

    reporter: int
    subject: int
    observed: tuple[tuple[Slot, int], ...]


Bundle = tuple  # tuple[ReportPayload, ...] sorted by subject


@dataclass(frozen=True)
class ReliableValue:
    origin: int
    value: int
    evidence: str  # EV_SELF | EV_DIRECT | EV_QUORUM
    paths: tuple[tuple[int, ...], ...] = ()


class PathTable:
    """Fixed canonical disjoint paths for every ordered node pair.

    For each (origin, dest) the table holds up to ``k`` pairwise
    node-disjoint paths in canonical order; graphs below the required
    connectivity simply get fewer (callers treating such runs as advisory).
    """

    def __init__(self, g: Graph, k: int):
        self.graph = g
        self.k = k
        self.pairs: dict[tuple[int, int], tuple[tuple[int, ...], ...]] = {}
        self.complete = True
        for u in range(g.n):
            for w in range(g.n):
                if u == w:
                    continue
                try:
                    paths = canonical_disjoint_paths(g, u, w, k)
                except InsufficientPathsError as err:
                    paths = err.paths
                    self.complete = False
                self.pairs[(u, w)] = paths
        # interior masks per (u, w): one bitmask per path index
        self.interiors: dict[tuple[int, int], tuple[int, ...]] = {}
        for key, paths in self.pairs.items():
            masks = []
            for p in paths:
                m = 0
                for x in p[1:-1]:
                    m |= 1 << x
                masks.append(m)
            self.interiors[key] = tuple(masks)
        # every relay slot a node legitimately owns, plus its origin slots
        kinds = ("flood", "report", "decide")
        self.owned: dict[int, set[Slot]] = {
            x: {_origin_slot(k, x) for k in kinds} for x in range(g.n)
        }
        for (u, w), paths in self.pairs.items():
            for i, p in enumerate(paths):
                for x in p[1:-1]:
                    for k in kinds:
                        self.owned[x].add(_relay_slot(k, u, w, i))
        # per node: (what I broadcast, successor, successor's relay slot)
        # for every path position where the node feeds an interior hop
        self.direct_checks: dict[int, tuple] = {x: () for x in range(g.n)}
        acc: dict[int, list] = {x: [] for x in range(g.n)}
        for (u, w), paths in self.pairs.items():
            for i, p in enumerate(paths):
                slot = _relay_slot("flood", u, w, i)
                for j in range(len(p) - 2):
                    mine = _origin_slot("flood", u) if j == 0 else slot
                    acc[p[j]].append((mine, p[j + 1], slot))
        for x, checks in acc.items():
            self.direct_checks[x] = tuple(checks)

    def paths_from(self, origin: int):
        for w in range(self.graph.n):
            if w != origin:
                yield w, self.pairs[(origin, w)]


@dataclass
class NodeState:
    """Everything one non-faulty node knows during a run."""

    id: int
    f: int
    input: int
    graph: Graph
    paths: PathTable
    # (origin, path-index) -> value delivered on that incoming path, or None
    round1_view: dict = field(default_factory=dict)
    # neighbor -> its complete round-1 emissions {slot: value}
    overheard: dict = field(default_factory=dict)
    # neighbor -> its complete round-2 emissions {slot: bundle}
    overheard_reports: dict = field(default_factory=dict)
    # everything this node itself broadcast, {slot: content}
    sent: dict = field(default_factory=dict)
    # reporter -> per path-index (interior bitmask, delivered bundle or None)
    report_copies: dict = field(default_factory=dict)
    # reporter -> reliably received bundle
    report_view: dict = field(default_factory=dict)
    # origin -> ReliableValue (filled after round 1)
    reliable: dict = field(default_factory=dict)
    fault_set: set = field(default_factory=set)
    decision: Optional[int] = None
    relay_seen: set = field(default_factory=set)
    malformed_log: list = field(default_factory=list)
    _believed_cache: dict = field(default_factory=dict)
    _parsed_reports: Optional[dict] = None

    @property
    def node_type(self) -> str:
        return "A" if len(self.fault_set) == self.f else "B"


def majority(values: Iterable[int]) -> int:
    """Majority bit of a non-empty collection; ties go to 0."""
    ones = zeros = 0
    for v in values:
        if v:
            ones += 1
        else:
            zeros += 1
    if ones + zeros == 0:
        raise ValueError("majority of empty collection")
    return 1 if ones > zeros else 0


def reliable_receive(state: NodeState, origin: int) -> Optional[ReliableValue]:
    """Value of ``origin`` accepted by this node, if any.

    Own input counts as received; a neighbor's broadcast is taken directly
    (path deliveries cannot override what was heard first-hand); any other
    origin needs the same value delivered on at least f+1 of its canonical
    disjoint paths. At most one value can ever clear that bar, since two
    quorums would need more disjoint paths than exist.
    """
    if origin == state.id:
        return ReliableValue(origin, state.input, EV_SELF)
    if origin in state.graph.adjacency[state.id]:
        val = state.overheard.get(origin, {}).get(("flood", origin))
        if val is None:
            return None
        return ReliableValue(origin, val, EV_DIRECT)
    paths = state.paths.pairs.get((origin, state.id), ())
    by_value: dict[int, list[int]] = {}
    for i in range(len(paths)):
        val = state.round1_view.get((origin, i))
        if val is not None:
            by_value.setdefault(val, []).append(i)
    winners = [v for v, idxs in by_value.items() if len(idxs) >= state.f + 1]
    assert len(winners) <= 1, "two path quorums for one origin"
    if not winners:
        return None
    val = winners[0]
    return ReliableValue(
        origin, val, EV_QUORUM, tuple(paths[i] for i in by_value[val])
    )


def relay_step(state: NodeState, incoming: RoutedMessage) -> list[RoutedMessage]:
    """Honest relay: rebroadcast an on-path message unchanged, once.

    Returns the rebroadcast in a list, or an empty list when this node is
    not the next hop, the copy is a duplicate for its (origin, path), or the
    message is malformed (logged).
    """
    key = incoming.path
    table_paths = state.paths.pairs.get((key[0], key[1]))
    if (
        table_paths is None
        or not (0 <= key[2] < len(table_paths))
        or incoming.origin != key[0]
    ):
        state.malformed_log.append(("bad-path", incoming))
        return []
    path = table_paths[key[2]]
    trace = incoming.hop_trace
    if tuple(path[: len(trace)]) != trace:
        state.malformed_log.append(("trace-mismatch", incoming))
        return []
    if len(trace) >= len(path) or path[len(trace)] != state.id:
        return []  # not the next hop of this copy
    if path[-1] == state.id:
        return []  # destination consumes, never relays
    dedup = (incoming.kind, key)
    if dedup in state.relay_seen:
        return []
    state.relay_seen.add(dedup)
    return [
        RoutedMessage(
            incoming.origin,
            incoming.kind,
            incoming.path,
            trace + (state.id,),
            incoming.carried_value,
        )
    ]


def build_reports(state: NodeState) -> list[ReportPayload]:
    """One verbatim observation record per neighbor, in id order."""
    out = []
    for x in sorted(state.graph.adjacency[state.id]):
        obs = tuple(sorted(state.overheard.get(x, {}).items()))
        out.append(ReportPayload(state.id, x, obs))
    return out


def _parsed(state: NodeState) -> dict:
    """Validated view of report_view: reporter -> {subject: {slot: value}}."""
    if state._parsed_reports is None:
        parsed: dict[int, dict[int, dict]] = {}
        for r, bundle in state.report_view.items():
            subjects: dict[int, dict] = {}
            for payload in bundle:
                if not isinstance(payload, ReportPayload):
                    state.malformed_log.append(("bad-payload", r, payload))
                    continue
                if payload.reporter != r or payload.subject not in state.graph.adjacency[r]:
                    state.malformed_log.append(("forged-payload", r, payload))
                    continue
                subjects[payload.subject] = dict(payload.observed)
            parsed[r] = subjects
        state._parsed_reports = parsed
    return state._parsed_reports


def believed_transmission(state: NodeState, x: int, slot: Slot) -> Optional[int]:
    """What this node believes x broadcast in ``slot``, if anything.

    Neighbors are believed directly. For anyone else, f+1 distinct
    neighbors of x must assert the same value through reliably received
    reports; fewer is not enough, which is exactly what stops f liars from
    framing an honest node. Two different values can never both reach the
    bar, because x broadcast only one thing and at most f reporters lie.
    """
    cache_key = (x, slot)
    if cache_key in state._believed_cache:
        return state._believed_cache[cache_key]
    result: Optional[int] = None
    if x in state.graph.adjacency[state.id]:
        result = state.overheard.get(x, {}).get(slot)
    else:
        counts: dict[int, set[int]] = {}
        parsed = _parsed(state)
        for r in state.graph.adjacency[x]:
            record = parsed.get(r, {}).get(x)
            if record is None:
                continue
            val = record.get(slot)
            if val is not None:
                counts.setdefault(val, set()).add(r)
        winners = [v for v, rs in counts.items() if len(rs) >= state.f + 1]
        assert len(winners) <= 1, "two believed values for one broadcast"
        result = winners[0] if winners else None
    state._believed_cache[cache_key] = result
    return result


def _direct_suspects(state: NodeState) -> set[int]:
    """Neighbors overheard relaying something other than what this node
    itself broadcast to them on a shared canonical path."""
    out: set[int] = set()
    sent = state.sent
    for mine_slot, x, their_slot in state.paths.direct_checks[state.id]:
        mine = sent.get(mine_slot)
        if mine is None:
            continue
        theirs = state.overheard.get(x, {}).get(their_slot)
        if theirs is not None and theirs != mine:
            out.add(x)
    return out


def _path_scan_suspects(state: NodeState) -> set[int]:
    """First believed contradiction along each canonical path.

    For every origin whose value b was received reliably, walk each of that
    origin's canonical paths; the first hop believed to have broadcast the
    complement convicts itself (every earlier hop was believed consistent
    or silent, so the contradiction originated there).
    """
    out: set[int] = set()
    for u, rv in sorted(state.reliable.items()):
        b = rv.value
        for w, paths in state.paths.paths_from(u):
            for i, p in enumerate(paths):
                slot = _relay_slot("flood", u, w, i)
                for x in p[1:-1]:
                    if x == state.id:
                        break  # own relays are not evidence against others
                    bt = believed_transmission(state, x, slot)
                    if bt is not None and bt != b:
                        out.add(x)
                        break
    return out


# --- consistency-based fault deduction ---
#
# Runs only when some origin's value is missing, i.e. when this node's view
# was actually damaged. The node enumerates every fault hypothesis T (a set
# of at most f candidates, never including itself) and keeps those under
# which its complete local knowledge could have been produced; nodes common
# to all surviving hypotheses must be faulty, because the true faulty set
# always survives. Knowledge per hypothesis:
#
#   * own broadcasts and every neighbor's broadcasts (complete, both
#     report rounds included);
#   * the full round-1 record of every neighbor of a trusted reporter,
#     where a reporter r outside T is trusted once a copy of its bundle
#     arrives over a path whose interior avoids T (relays outside T are
#     honest under the hypothesis, so the copy is genuine);
#   * forced relays: an honest hop must rebroadcast exactly what the
#     previous hop emitted, must not invent a value from silence, and every
#     honest node must broadcast in round 1 and round 2.
#
# Any contradiction kills the hypothesis. Soundness needs no assumptions
# beyond |faulty| <= f: the real fault set is always consistent, so the
# intersection never contains an honest node.

_UNKNOWN = object()
_SILENT = object()


class _Hypothesis:
    def __init__(self, state: NodeState, t_mask: int):
        self.state = state
        self.t_mask = t_mask
        self.rec1: dict[int, dict] = {}  # complete round-1 records
        self.trusted_bundles: dict[int, Bundle] = {}
        self.pins: dict = {}

    def excluded(self, x: int) -> bool:
        return bool(self.t_mask >> x & 1)


def _hyp_collect_trusted(h: _Hypothesis) -> bool:
    """Stage 1: decide which report bundles are genuine under T.

    Returns False on contradiction: a reporter outside T whose bundle
    failed to arrive over a T-clean path (honest nodes always report and
    honest relays always deliver), two different T-clean copies of one
    bundle (broadcasts are heard identically, so genuine copies agree), or
    a trusted bundle that is malformed or conflicts with direct knowledge.
    """
    st = h.state
    g = st.graph
    own_nbrs = g.adjacency[st.id]
    h.rec1[st.id] = {
        s: val for s, val in st.sent.items() if s[0] in ("flood", "relay")
    }
    for x in own_nbrs:
        h.rec1[x] = st.overheard.get(x, {})
    for r in range(g.n):
        if r == st.id or h.excluded(r):
            continue
        copies = st.report_copies.get(r, ())
        genuine: Optional[Bundle] = None
        if r in own_nbrs:
            genuine = st.overheard_reports.get(r, {}).get(("report", r))
            if genuine is None:
                return False  # honest neighbors always report
        for mask, content in copies:
            if mask & h.t_mask:
                continue
            if content is None:
                return False  # lost on a path with no suspect on it
            if genuine is None:
                genuine = content
            elif content != genuine:
                return False  # two genuine copies cannot differ
        if genuine is None:
            continue  # every copy blocked by T; nothing learned
        if not _merge_trusted_bundle(h, r, genuine):
            return False
    return True


def _merge_trusted_bundle(h: _Hypothesis, r: int, bundle: Bundle) -> bool:
    g = h.state.graph
    if not isinstance(bundle, tuple):
        return False
    seen_subjects = set()
    for payload in bundle:
        if (
            not isinstance(payload, ReportPayload)
            or payload.reporter != r
            or payload.subject in seen_subjects
            or payload.subject not in g.adjacency[r]
        ):
            return False
        seen_subjects.add(payload.subject)
    if seen_subjects != set(g.adjacency[r]):
        return False  # honest reports cover every neighbor exactly once
    h.trusted_bundles[r] = bundle
    for payload in bundle:
        record = dict(payload.observed)
        existing = h.rec1.get(payload.subject)
        if existing is None:
            h.rec1[payload.subject] = record
        elif existing != record:
            return False  # two genuine records of one node disagree
    return True


def _hyp_check_records(h: _Hypothesis) -> bool:
    """Stage 2: every fully known node outside T behaved legally on its own:
    it broadcast in round 1, and only in slots it owns."""
    st = h.state
    owned = st.paths.owned
    for x, record in h.rec1.items():
        if h.excluded(x):
            continue
        if ("flood", x) not in record:
            return False  # honest nodes always flood their input
        for slot in record:
            if slot not in owned[x]:
                return False  # broadcast in a slot it has no business in
    return True


def _hyp_lookup1(h: _Hypothesis, x: int, slot: Slot):
    record = h.rec1.get(x)
    if record is None:
        return _UNKNOWN
    val = record.get(slot)
    return _SILENT if val is None else val


def _hyp_lookup2(h: _Hypothesis, x: int, slot: Slot):
    st = h.state
    if x == st.id:
        val = st.sent.get(slot)
        return _SILENT if val is None else val
    if x in st.graph.adjacency[st.id]:
        val = st.overheard_reports.get(x, {}).get(slot)
        return _SILENT if val is None else val
    if slot[0] == "report" and x in h.trusted_bundles:
        return h.trusted_bundles[x]
    return _UNKNOWN


def _hyp_walk_chains(h: _Hypothesis, kind: str, lookup) -> Optional[bool]:
    """Stage 3/4: propagate forced relays along every canonical path.

    Walks every chain of the given round; honest hops must pass along
    exactly what reached them. Origins outside T with unknown content get
    pinned the first time an honest downstream broadcast reveals it; pin
    conflicts between chains are contradictions. Returns True/False for
    consistent/contradiction; None means another pass is needed because a
    pin was added.
    """
    st = h.state
    pinned = False
    origin_kind = kind
    for (u, w), paths in st.paths.pairs.items():
        start = lookup(h, u, _origin_slot(origin_kind, u))
        for i, p in enumerate(paths):
            if start is _SILENT:
                if not h.excluded(u):
                    return False  # honest nodes always broadcast this round
                cur = _SILENT
            elif start is _UNKNOWN:
                if h.excluded(u):
                    cur = _UNKNOWN
                elif (origin_kind, u) in h.pins:
                    cur = h.pins[(origin_kind, u)]
                else:
                    cur = ("emitted?", u)  # broadcast something, value unknown
            else:
                cur = start
            slot = _relay_slot(origin_kind, u, w, i)
            for x in p[1:-1]:
                e = lookup(h, x, slot)
                if h.excluded(x):
                    cur = e  # suspect hops may do anything; track what they did
                    continue
                # honest hop
                if isinstance(cur, tuple) and cur and cur[0] == "emitted?":
                    if e is _SILENT:
                        return False  # received a value, relayed nothing
                    if e is not _UNKNOWN:
                        origin_pin = (origin_kind, cur[1])
                        prev = h.pins.get(origin_pin, _UNKNOWN)
                        if prev is _UNKNOWN:
                            h.pins[origin_pin] = e
                            pinned = True
                        elif prev != e:
                            return False  # two honest chains reveal two values
                        cur = e
                    # else: still carrying the unknown value forward
                elif cur is _SILENT:
                    if e is not _SILENT and e is not _UNKNOWN:
                        return False  # invented a broadcast from silence
                    cur = _SILENT
                elif cur is _UNKNOWN:
                    cur = e if e is not _UNKNOWN else _UNKNOWN
                else:  # concrete value
                    if e is _SILENT:
                        return False  # dropped a value it must relay
                    if e is not _UNKNOWN and e != cur:
                        return False  # changed a value it must relay
                    # unknown emission of an honest hop is forced to cur
    return None if pinned else True


def _consistent(state: NodeState, t_mask: int) -> bool:
    h = _Hypothesis(state, t_mask)
    if not _hyp_collect_trusted(h):
        return False
    if not _hyp_check_records(h):
        return False
    for kind, lookup in (("flood", _hyp_lookup1), ("report", _hyp_lookup2)):
        for _ in range(state.graph.n + 1):
            verdict = _hyp_walk_chains(h, kind, lookup)
            if verdict is False:
                return False
            if verdict is True:
                break
        else:  # pragma: no cover - pin count is bounded by n
            raise AssertionError("pin propagation failed to settle")
    return True


def _forced_faults(state: NodeState) -> set[int]:
    """Nodes present in every fault hypothesis consistent with the view."""
    g = state.graph
    others = [x for x in range(g.n) if x != state.id]
    if _consistent(state, 0):
        return set()
    survivors_mask: Optional[int] = None
    for size in range(1, state.f + 1):
        for combo in itertools.combinations(others, size):
            mask = 0
            for x in combo:
                mask |= 1 << x
            if survivors_mask is not None and survivors_mask & mask == 0:
                continue  # cannot change an already-empty intersection
            if _consistent(state, mask):
                survivors_mask = (
                    mask if survivors_mask is None else survivors_mask & mask
                )
                if survivors_mask == 0:
                    return set()
    assert survivors_mask is not None, "no fault hypothesis fits the view"
    return {x for x in others if survivors_mask >> x & 1}


def identify_faults(state: NodeState) -> set[int]:
    """Convict faulty nodes from the local view; sound by construction.

    Cheap rules first (direct overhearing, believed-transmission path
    scan). When the view is damaged (some origin missing from the reliable
    set) and the cheap rules have not already identified f nodes, fall back
    to the consistency deduction, which convicts every node that belongs to
    all surviving fault hypotheses.

    Only direct overhearing is sound on arbitrary graphs. The path scan
    blames the first hop whose believed broadcast contradicts the origin,
    which is the true culprit only when every faulty node's broadcasts are
    attested by f+1 honest neighbors; the deduction likewise needs some
    hypothesis to fit and the intersection to stay within budget. Both are
    guaranteed by a complete path table and switched off without one.
    """
    suspects = _direct_suspects(state)
    if state.paths.complete:
        suspects |= _path_scan_suspects(state)
        if len(suspects) < state.f and len(state.reliable) < state.graph.n:
            suspects |= _forced_faults(state)
    assert len(suspects) <= state.f, "convicted more nodes than the budget"
    state.fault_set = suspects
    return suspects


def decide_type_b(state: NodeState) -> int:
    """Majority over every reliably received input, own included."""
    return majority(rv.value for rv in state.reliable.values())


def choose_adopted_decision(
    state: NodeState, arrivals: list[tuple[int, int, int, int]]
) -> Optional[int]:
    """First usable decision flood for a type A node.

    ``arrivals`` holds (arrival_offset, origin, path_index, value) for every
    decision delivery. Usable means: origin not convicted, and the interior
    of the delivering path avoids every convicted node, so the value cannot
    have been forged or tampered.
    """
    for offset, origin, idx, value in sorted(arrivals):
        if origin in state.fault_set:
            continue
        mask = state.paths.interiors[(origin, state.id)][idx]
        if any(mask >> x & 1 for x in state.fault_set):
            continue
        return value
    return None


def fallback_decision(state: NodeState) -> int:
    """Type A decision when no type B node exists anywhere.

    Reads each unconvicted node's input over a canonical path whose
    interior avoids the convicted set; with all f faulty nodes convicted,
    at least f of the 2f disjoint paths qualify, so the read succeeds. The
    majority of those inputs (own included) is the decision.

    The success guarantees hold only at full connectivity (a complete path
    table); below the threshold an unreadable node is skipped so the run
    still terminates, with the damage left for the outcome audit to report.
    """
    strict = state.paths.complete
    fault_mask = 0
    for x in state.fault_set:
        fault_mask |= 1 << x
    values = [state.input]
    for u in range(state.graph.n):
        if u == state.id or u in state.fault_set:
            continue
        if u in state.graph.adjacency[state.id]:
            val = state.overheard.get(u, {}).get(("flood", u))
            assert val is not None or not strict, "honest neighbor silent"
            if val is not None:
                values.append(val)
            continue
        for i, mask in enumerate(state.paths.interiors[(u, state.id)]):
            if mask & fault_mask == 0:
                val = state.round1_view.get((u, i))
                assert val is not None or not strict, "clean path empty"
                if val is not None:
                    values.append(val)
                    break
        else:
            assert not strict, "no canonical path avoids the fault set"
    return majority(values)


def decide(
    state: NodeState, arrivals: Optional[list[tuple[int, int, int, int]]] = None
) -> int:
    """Final decision: type B takes the reliable majority, type A adopts."""
    if state.node_type == "B":
        value = decide_type_b(state)
    else:
        value = choose_adopted_decision(state, arrivals or [])
        if value is None:
            value = fallback_decision(state)
    if state.decision is None:
        state.decision = value
    return state.decision
