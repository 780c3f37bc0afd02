import pytest

from lbcast.graphs import complete_graph, cycle_graph
from lbcast.protocol import (
    EV_DIRECT,
    EV_QUORUM,
    EV_SELF,
    NodeState,
    PathTable,
    ReliableValue,
    ReportPayload,
    RoutedMessage,
    build_reports,
    believed_transmission,
    decide_type_b,
    majority,
    relay_step,
    reliable_receive,
)
from lbcast.simnet import encode_actions, make_scenario, run_scenario


C4 = cycle_graph(4)


def _state(g, node, f, input_bit=0, k=None):
    return NodeState(node, f, input_bit, g, PathTable(g, k or 2 * f))


def test_majority():
    assert majority([1, 1, 0]) == 1
    assert majority([0, 0, 1]) == 0
    assert majority([1, 0]) == 0  # ties break low
    assert majority([1]) == 1
    with pytest.raises(ValueError):
        majority([])


def test_routed_message_slot():
    first_hop = RoutedMessage(0, "flood", (0, 2, 1), (0,), 1)
    assert first_hop.slot() == ("flood", 0)
    relayed = RoutedMessage(0, "flood", (0, 2, 1), (0, 3), 1)
    assert relayed.slot() == ("relay", 0, 2, 1)
    rep = RoutedMessage(0, "report", (0, 2, 0), (0, 1), ())
    assert rep.slot() == ("rbundle", 0, 2, 0)
    dec = RoutedMessage(0, "decide", (0, 2, 0), (0, 1), 1)
    assert dec.slot() == ("rdecide", 0, 2, 0)


def test_path_table_covers_all_pairs():
    table = PathTable(C4, 2)
    assert table.complete
    for u in range(4):
        for w in range(4):
            if u != w:
                assert len(table.pairs[(u, w)]) == 2
    # opposite corners route through both interiors
    interiors = {p[1] for p in table.pairs[(0, 2)]}
    assert interiors == {1, 3}


def test_path_table_ownership():
    table = PathTable(C4, 2)
    # node 1 owns its three origin slots plus a relay slot per kind for
    # every path it sits inside
    owned = table.owned[1]
    assert ("flood", 1) in owned
    assert ("report", 1) in owned
    assert ("decide", 1) in owned
    assert any(s[0] == "relay" and s[1:] == (0, 2, i) for i in (0, 1) for s in owned)
    # and never a relay slot for a path avoiding it
    for slot in owned:
        if slot[0] in ("relay", "rbundle", "rdecide"):
            o, d, i = slot[1:]
            assert 1 in table.pairs[(o, d)][i][1:-1]


def test_path_table_direct_checks_match_paths():
    table = PathTable(C4, 2)
    for x in range(4):
        for mine, successor, theirs in table.direct_checks[x]:
            o, d, i = theirs[1:]
            p = table.pairs[(o, d)][i]
            j = p.index(x)
            assert p[j + 1] == successor
            if j == 0:
                assert mine == ("flood", o)
            else:
                assert mine == theirs


def test_path_table_incomplete_graph_flagged():
    g = cycle_graph(6)
    table = PathTable(g, 3)  # only 2 disjoint routes exist on a cycle
    assert not table.complete
    assert len(table.pairs[(0, 3)]) == 2


def test_reliable_receive_self_and_direct():
    st = _state(C4, 0, 1, input_bit=1)
    got = reliable_receive(st, 0)
    assert (got.value, got.evidence) == (1, EV_SELF)
    st.overheard[1] = {("flood", 1): 0}
    got = reliable_receive(st, 1)
    assert (got.value, got.evidence) == (0, EV_DIRECT)
    # a silent neighbor yields nothing, whatever the paths say
    assert reliable_receive(st, 3) is None


def test_reliable_receive_path_quorum():
    st = _state(C4, 2, 1)
    st.round1_view[(0, 0)] = 1
    assert reliable_receive(st, 0) is None  # one path is below f+1
    st.round1_view[(0, 1)] = 1
    got = reliable_receive(st, 0)
    assert (got.value, got.evidence) == (1, EV_QUORUM)
    assert len(got.paths) == 2


def test_reliable_receive_split_paths_no_quorum():
    st = _state(C4, 2, 1)
    st.round1_view[(0, 0)] = 1
    st.round1_view[(0, 1)] = 0
    assert reliable_receive(st, 0) is None


def test_relay_step_forwards_once():
    st = _state(C4, 1, 1)
    table = st.paths
    path = table.pairs[(0, 2)]
    idx = next(i for i, p in enumerate(path) if p == (0, 1, 2))
    msg = RoutedMessage(0, "flood", (0, 2, idx), (0,), 1)
    out = relay_step(st, msg)
    assert len(out) == 1
    assert out[0].hop_trace == (0, 1)
    assert out[0].carried_value == 1
    # an identical second copy is swallowed
    assert relay_step(st, msg) == []


def test_relay_step_ignores_other_hops():
    st = _state(C4, 3, 1)
    table = st.paths
    idx = next(i for i, p in enumerate(table.pairs[(0, 2)]) if p == (0, 1, 2))
    msg = RoutedMessage(0, "flood", (0, 2, idx), (0,), 1)
    assert relay_step(st, msg) == []  # node 3 is not on that path
    assert st.malformed_log == []


def test_relay_step_destination_consumes():
    st = _state(C4, 2, 1)
    idx = next(i for i, p in enumerate(st.paths.pairs[(0, 2)]) if p == (0, 1, 2))
    msg = RoutedMessage(0, "flood", (0, 2, idx), (0, 1), 1)
    assert relay_step(st, msg) == []
    assert st.malformed_log == []


@pytest.mark.parametrize(
    "msg, tag",
    [
        (RoutedMessage(0, "flood", (0, 2, 9), (0,), 1), "bad-path"),
        (RoutedMessage(3, "flood", (0, 2, 0), (0,), 1), "bad-path"),
        (RoutedMessage(0, "flood", (0, 2, 0), (2, 0), 1), "trace-mismatch"),
    ],
)
def test_relay_step_logs_malformed(msg, tag):
    st = _state(C4, 1, 1)
    assert relay_step(st, msg) == []
    assert st.malformed_log and st.malformed_log[-1][0] == tag


def test_build_reports_verbatim_in_id_order():
    st = _state(C4, 0, 1)
    st.overheard[1] = {("flood", 1): 1, ("relay", 3, 2, 0): 0}
    st.overheard[3] = {}
    reports = build_reports(st)
    assert [p.subject for p in reports] == [1, 3]
    assert all(p.reporter == 0 for p in reports)
    assert dict(reports[0].observed) == st.overheard[1]
    assert reports[1].observed == ()


def test_believed_transmission_direct():
    st = _state(C4, 0, 1)
    st.overheard[1] = {("flood", 1): 0}
    assert believed_transmission(st, 1, ("flood", 1)) == 0
    assert believed_transmission(st, 1, ("relay", 2, 0, 0)) is None


def test_believed_transmission_report_quorum():
    st = _state(C4, 2, 1)
    obs = ((("flood", 0), 1),)
    st.report_view[1] = (ReportPayload(1, 0, obs),)
    # one attester is below the f+1 bar, a liar alone cannot frame
    assert believed_transmission(st, 0, ("flood", 0)) is None
    st._believed_cache.clear()
    st._parsed_reports = None
    st.report_view[3] = (ReportPayload(3, 0, obs),)
    assert believed_transmission(st, 0, ("flood", 0)) == 1


def test_believed_transmission_skips_forged_payloads():
    st = _state(C4, 2, 1)
    obs = ((("flood", 0), 1),)
    # reporter field does not match the bundle owner: dropped
    st.report_view[1] = (ReportPayload(3, 0, obs),)
    # subject is not adjacent to the claimed reporter: dropped
    st.report_view[3] = (ReportPayload(3, 1, obs),)
    assert believed_transmission(st, 0, ("flood", 0)) is None
    tags = {entry[0] for entry in st.malformed_log}
    assert tags == {"forged-payload"}


def test_decide_type_b_majority():
    st = _state(C4, 0, 1, input_bit=1)
    for origin, value in enumerate((1, 0, 1, 0)):
        st.reliable[origin] = ReliableValue(origin, value, EV_SELF)
    assert decide_type_b(st) == 0  # 2-2 tie breaks low


def _final_states(scenario):
    transcript, outcome = run_scenario(scenario)
    assert not outcome.violations, outcome.violations
    return transcript.final_states, outcome


def test_silent_fault_convicted_by_everyone():
    sc = make_scenario(complete_graph(4), 1, [2], [1, 1, 0, 1], "silent", 7)
    states, outcome = _final_states(sc)
    for v, st in states.items():
        assert st.fault_set == {2}
        assert st.node_type == "A"
    assert set(outcome.decisions.values()) == {1}


def test_relay_tamper_convicted_through_three_routes():
    # node 1 flips one flood relay on the 4-cycle; node 0 sees its own
    # broadcast come back wrong, node 3 scans the delivery paths, and
    # node 2 is left to deduce the only consistent culprit
    actions = {(1, ("relay", 0, 2, 0)): "flip"}
    sc = make_scenario(
        C4,
        1,
        [1],
        [1, 1, 1, 1],
        "scripted",
        0,
        [("actions", encode_actions(actions))],
    )
    states, outcome = _final_states(sc)
    for v in (0, 2, 3):
        assert states[v].fault_set == {1}, f"node {v}"
        assert states[v].node_type == "A"
    assert set(outcome.decisions.values()) == {1}


def test_honest_run_convicts_nobody():
    sc = make_scenario(cycle_graph(5), 1, [], [0, 1, 0, 1, 1], "honest", 0)
    states, outcome = _final_states(sc)
    for st in states.values():
        assert st.fault_set == set()
        assert st.node_type == "B"
        assert len(st.reliable) == 5
    assert set(outcome.decisions.values()) == {1}


def test_frame_on_complete_graph_changes_nothing():
    # everyone hears everyone first-hand, so a lying report bundle never
    # enters any believed value and the liar goes unconvicted but harmless
    sc = make_scenario(complete_graph(5), 2, [0, 4], [1, 0, 1, 0, 1], "frame", 3)
    states, outcome = _final_states(sc)
    for st in states.values():
        assert st.fault_set == set()
    assert len(set(outcome.decisions.values())) == 1
