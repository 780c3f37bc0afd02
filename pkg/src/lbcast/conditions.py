"""Feasibility conditions for consensus on a given graph and fault budget.

Two independent formulations are provided and cross-validated:

* a brute-force checker that enumerates every fault-candidate set F with
  |F| <= f and every (L, C, R) partition of the nodes, testing the
  neighbourhood-count condition directly, and
* a closed-form checker in terms of vertex connectivity and minimum degree.

``classify`` folds the necessary and sufficient thresholds into a verdict:
``impossible`` (no algorithm can work), ``achievable`` (the protocol in
:mod:`lbcast.protocol` works), or ``open-gap`` (between the two thresholds,
where neither verdict is forced).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .graphs import (
    Graph,
    gamma,
    min_degree,
    vertex_connectivity,
    is_connected,
    _max_disjoint_flow,
)

CLASS_IMPOSSIBLE = "impossible"
CLASS_ACHIEVABLE = "achievable"
CLASS_OPEN_GAP = "open-gap"

BRUTEFORCE_NODE_CAP = 10
BRUTEFORCE_FAULT_CAP = 3


@dataclass(frozen=True)
class FPartition:
    """A fault-candidate set F plus a 3-way node partition (L, C, R).

    Valid when (L, C, R) partitions the node set, |F| <= f, and both
    L - F and R - F are nonempty.
    """

    fault_candidate_set: frozenset
    left: frozenset
    center: frozenset
    right: frozenset

    def is_valid(self, g: Graph, f: int) -> bool:
        nodes = frozenset(range(g.n))
        parts = (self.left, self.center, self.right)
        if self.left | self.center | self.right != nodes:
            return False
        if sum(len(p) for p in parts) != g.n:
            return False
        if len(self.fault_candidate_set) > f:
            return False
        if not self.fault_candidate_set <= nodes:
            return False
        return bool(self.left - self.fault_candidate_set) and bool(
            self.right - self.fault_candidate_set
        )


@dataclass(frozen=True)
class ConditionReport:
    f: int
    min_degree: int
    connectivity: int
    necessary_holds: bool
    sufficient_holds: bool
    classification: str
    witness: Optional[Union[frozenset, FPartition]] = None


def connects_k(g: Graph, t: Iterable[int], s: Iterable[int], k: int) -> bool:
    """True iff at least k nodes of t are adjacent to the (disjoint) set s."""
    t_set = frozenset(t)
    s_set = frozenset(s)
    if t_set & s_set:
        raise ValueError("t and s must be disjoint")
    for x in t_set | s_set:
        if not (0 <= x < g.n):
            raise ValueError(f"node {x} out of range")
    return len(gamma(g, s_set) & t_set) >= k


def _partition_violates_both(g: Graph, f: int, part: FPartition) -> bool:
    """True iff neither side of the f-good condition holds for ``part``."""
    l_free = part.left - part.fault_candidate_set
    r_free = part.right - part.fault_candidate_set
    if connects_k(g, part.right | part.center, l_free, f + 1):
        return False
    if connects_k(g, part.left | part.center, r_free, f + 1):
        return False
    return True


def is_f_good_bruteforce(
    g: Graph, f: int
) -> tuple[bool, Optional[FPartition]]:
    """Exhaustively test the partition condition; report a witness on failure.

    Returns (True, None) when every F-partition has at least f+1 nodes of one
    side adjacent to the other side's fault-free part, and (False, witness)
    otherwise. Graphs with n <= 2f are never good; in the degenerate cases
    where no F-partition exists at all the witness is None.

    The enumeration works on bitmasks: gamma is precomputed for every node
    subset with a subset-DP, so each partition costs a few word operations.
    """
    if f < 1:
        raise ValueError("fault budget must be at least 1")
    if g.n > BRUTEFORCE_NODE_CAP or f > BRUTEFORCE_FAULT_CAP:
        raise ValueError(
            f"brute force capped at n <= {BRUTEFORCE_NODE_CAP}, "
            f"f <= {BRUTEFORCE_FAULT_CAP}"
        )
    n = g.n
    full = (1 << n) - 1
    adj = g.adj_masks

    # gamma_mask[S] = union of neighbourhoods over S (S's own bits not yet
    # removed); built by peeling the lowest set bit.
    gamma_mask = [0] * (1 << n)
    for s_mask in range(1, 1 << n):
        low = s_mask & -s_mask
        gamma_mask[s_mask] = gamma_mask[s_mask ^ low] | adj[low.bit_length() - 1]

    def to_set(mask: int) -> frozenset:
        return frozenset(i for i in range(n) if mask >> i & 1)

    threshold = f + 1
    f_masks: list[int] = []
    for size in range(f + 1):
        for combo in itertools.combinations(range(n), size):
            m = 0
            for i in combo:
                m |= 1 << i
            f_masks.append(m)

    for f_mask in f_masks:
        for l_mask in range(1 << n):
            l_free = l_mask & ~f_mask
            if not l_free:
                continue
            rem = full ^ l_mask
            # enumerate C over submasks of rem; R is the rest
            c_mask = rem
            while True:
                r_mask = rem ^ c_mask
                r_free = r_mask & ~f_mask
                if r_free:
                    g_l = gamma_mask[l_free] & ~l_free
                    if (g_l & (r_mask | c_mask)).bit_count() < threshold:
                        g_r = gamma_mask[r_free] & ~r_free
                        if (g_r & (l_mask | c_mask)).bit_count() < threshold:
                            return False, FPartition(
                                to_set(f_mask),
                                to_set(l_mask),
                                to_set(c_mask),
                                to_set(r_mask),
                            )
                if c_mask == 0:
                    break
                c_mask = (c_mask - 1) & rem
    if n <= 2 * f:
        # Too few nodes to ever be good; when no partition violates the
        # condition it is because (almost) none exist, so there is nothing
        # to exhibit.
        return False, None
    return True, None


def is_f_good_characterized(g: Graph, f: int) -> bool:
    """Closed form: connectivity >= floor(3f/2)+1 and min degree >= 2f."""
    if f < 1:
        raise ValueError("fault budget must be at least 1")
    if g.n == 0:
        return False
    if min_degree(g) < 2 * f:
        return False
    return vertex_connectivity(g) >= (3 * f) // 2 + 1


def check_necessary(g: Graph, f: int) -> bool:
    """True iff consensus is not ruled out: degree and connectivity clear
    the lower thresholds (min degree >= 2f, connectivity >= floor(3f/2)+1)."""
    return is_f_good_characterized(g, f)


def check_sufficient(g: Graph, f: int) -> bool:
    """True iff vertex connectivity >= 2f, which guarantees consensus."""
    if f < 1:
        raise ValueError("fault budget must be at least 1")
    if g.n < 2:
        return False
    return vertex_connectivity(g) >= 2 * f


def min_vertex_cut_set(g: Graph) -> frozenset:
    """A minimum vertex cut, deterministically chosen. Complete graphs and
    graphs with n < 2 have no cut and raise ValueError."""
    if g.n < 2:
        raise ValueError("cuts are undefined for graphs with n < 2")
    if g.is_complete():
        raise ValueError("complete graphs have no vertex cut")
    if not is_connected(g):
        return frozenset()
    best_pair = None
    best = g.n
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if not g.has_edge(u, v):
                flow, _ = _max_disjoint_flow(g, u, v, best)
                if flow < best:
                    best = flow
                    best_pair = (u, v)
    assert best_pair is not None
    u, v = best_pair
    # Edge arcs get large capacity here so the flow min cut consists of
    # node-internal arcs only; the flow value is still bounded by them.
    _, res = _max_disjoint_flow(g, u, v, None, edge_cap=g.n)
    # nodes whose internal arc crosses the residual-reachable boundary
    reachable = {2 * u + 1}
    stack = [2 * u + 1]
    arcs: dict[int, list[int]] = {}
    for (x, y), r in res.items():
        if r > 0:
            arcs.setdefault(x, []).append(y)
    while stack:
        x = stack.pop()
        for y in arcs.get(x, ()):
            if y not in reachable:
                reachable.add(y)
                stack.append(y)
    cut = frozenset(
        i
        for i in range(g.n)
        if 2 * i in reachable and 2 * i + 1 not in reachable
    )
    assert len(cut) == best
    return cut


def classify(g: Graph, f: int) -> ConditionReport:
    """Fold both thresholds into a single verdict with supporting numbers.

    A ``witness`` accompanies non-achievable verdicts when one is cheap to
    exhibit: a small vertex cut when connectivity is the failing side, or
    the isolating neighbourhood of a minimum-degree node.
    """
    if f < 1:
        raise ValueError("fault budget must be at least 1")
    if g.n < 2:
        deg = 0 if g.n == 0 else min_degree(g)
        return ConditionReport(
            f=f,
            min_degree=deg,
            connectivity=0,
            necessary_holds=False,
            sufficient_holds=False,
            classification=CLASS_IMPOSSIBLE,
            witness=None,
        )
    deg = min_degree(g)
    conn = vertex_connectivity(g)
    necessary = deg >= 2 * f and conn >= (3 * f) // 2 + 1
    sufficient = conn >= 2 * f
    if not necessary:
        classification = CLASS_IMPOSSIBLE
    elif sufficient:
        classification = CLASS_ACHIEVABLE
    else:
        classification = CLASS_OPEN_GAP
    witness: Optional[Union[frozenset, FPartition]] = None
    if classification != CLASS_ACHIEVABLE:
        if conn < 2 * f and not g.is_complete():
            witness = min_vertex_cut_set(g)
        elif deg < 2 * f:
            u = min(range(g.n), key=g.degree)
            nbhd = g.neighbors(u)
            if len(nbhd) + 1 < g.n:
                witness = frozenset(nbhd)
    return ConditionReport(
        f=f,
        min_degree=deg,
        connectivity=conn,
        necessary_holds=necessary,
        sufficient_holds=sufficient,
        classification=classification,
        witness=witness,
    )
