"""Combinatorial kernels: node-split flow networks, max flow, separators, linkings.

The central construction is the auxiliary graph: every node v of a digraph is
split into v- and v+ joined by a unit-capacity edge, original edges become
(u+, w-) edges, and a dummy source s (sink t) is wired to the available
(target) set.  Integral max flow on this network equals the maximum number of
vertex-disjoint direct paths from the available set to the target set, and the
source side of the minimal cut found by the labelling procedure yields the
minimal left separator.

All operations are pure functions; inputs are never mutated.  Graphs are plain
successor mappings ``{node: sequence_of_successors}`` whose keys must cover
every node and be mutually orderable (ints, or like-shaped tuples).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

Node = Hashable

SOURCE = "s"
SINK = "t"


class PreconditionError(RuntimeError):
    """A caller-supplied object violates an operation's precondition."""


def minus(label: Node) -> tuple:
    """Auxiliary-graph name of the entry half of a split node."""
    return (label, "-")


def plus(label: Node) -> tuple:
    """Auxiliary-graph name of the exit half of a split node."""
    return (label, "+")


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuxiliaryGraph:
    """Node-split unit-capacity flow network over a digraph.

    Node numbering: for the k-th label (ascending), 2k is its minus node and
    2k+1 its plus node; the last two ids are the source and the sink.  Edges
    are stored as parallel arrays over directed arc ids where arc ``2e`` is the
    forward direction of edge e and ``2e+1`` its residual reverse.  Capacities
    are 1 on split edges and ``infinite_capacity`` (a sentinel strictly larger
    than any feasible flow) elsewhere.

    Immutable after construction; max_flow works on private copies.
    """

    labels: tuple                      # original node labels, ascending
    available: tuple                   # A-labels wired from the source
    targets: tuple                     # T-labels wired into the sink
    infinite_capacity: int
    _index: dict                       # label -> position in labels
    _adj: tuple                        # per aux node: tuple of (arc_id, head)
    _head: tuple                       # arc id -> head aux-node id
    _cap: tuple                        # arc id -> capacity (reverse arcs: 0)
    _sink_arcs: tuple                  # forward arc ids entering the sink

    @property
    def node_count(self) -> int:
        return 2 * len(self.labels) + 2

    @property
    def edge_count(self) -> int:
        """Number of forward edges: splits + original + source + sink arcs."""
        return len(self._head) // 2

    @property
    def source_id(self) -> int:
        return 2 * len(self.labels)

    @property
    def sink_id(self) -> int:
        return 2 * len(self.labels) + 1

    def node_label(self, aux_id: int) -> Node:
        """Public name of an auxiliary node id: (label, '-'/'+') or 's'/'t'."""
        if aux_id == self.source_id:
            return SOURCE
        if aux_id == self.sink_id:
            return SINK
        return (self.labels[aux_id // 2], "-" if aux_id % 2 == 0 else "+")

    def edges(self) -> list[tuple[Node, Node, int]]:
        """Forward edges as (tail label, head label, capacity) triples."""
        out = []
        for e in range(self.edge_count):
            tail = self.node_label(self._head[2 * e + 1])
            head = self.node_label(self._head[2 * e])
            out.append((tail, head, self._cap[2 * e]))
        return out


@dataclass(frozen=True)
class Flow:
    """Integral feasible s-t flow on an AuxiliaryGraph.

    ``edge_flow[e]`` is the flow on forward edge e (same order as
    ``AuxiliaryGraph.edges()``); ``value`` is the total flow out of the source.
    """

    value: int
    edge_flow: tuple


@dataclass(frozen=True)
class Linking:
    """Vertex-disjoint simple direct paths from an available to a target set.

    Each path is a tuple of original node labels; a node both available and
    targeted may form a length-0 path ``(v,)``.
    """

    paths: tuple

    @property
    def size(self) -> int:
        return len(self.paths)

    def start_nodes(self) -> tuple:
        return tuple(path[0] for path in self.paths)

    def as_lists(self) -> list[list]:
        return [list(p) for p in self.paths]


# ---------------------------------------------------------------------------
# Graph preprocessing
# ---------------------------------------------------------------------------

def preprocess_direct(
    graph: Mapping[Node, Sequence[Node]],
    available: Iterable[Node],
    targets: Iterable[Node],
) -> dict:
    """Remove every edge entering the available set or leaving the target set.

    Direct available-to-target paths never use such edges, so this is lossless
    for linking and separator computations, and it makes every remaining
    available-to-target path direct by construction.
    """
    a_set = set(available)
    t_set = set(targets)
    out: dict = {}
    for u, succs in graph.items():
        if u in t_set:
            out[u] = ()
        else:
            out[u] = tuple(v for v in succs if v not in a_set)
    return out


# ---------------------------------------------------------------------------
# Network construction
# ---------------------------------------------------------------------------

def _build_arrays(
    graph: Mapping[Node, Sequence[Node]],
    available: Sequence[Node],
    targets: Sequence[Node],
    inf_cap: int,
    source_cap: int,
):
    """Shared constructor for split-node flow networks.

    Arc 2e is the forward direction of edge e, arc 2e+1 its zero-capacity
    reverse.  Construction order (splits, graph edges sorted, source arcs,
    sink arcs, each ascending) fixes the BFS tie-break deterministically.
    """
    labels = sorted(graph)
    index = {lab: k for k, lab in enumerate(labels)}
    n_aux = 2 * len(labels) + 2
    s_id = n_aux - 2
    t_id = n_aux - 1

    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_aux)]
    head: list[int] = []
    cap: list[int] = []
    happend = head.append
    cappend = cap.append

    def add(u: int, v: int, c: int) -> int:
        e = len(head)
        adj[u].append((e, v))
        happend(v)
        cappend(c)
        adj[v].append((e + 1, u))
        happend(u)
        cappend(0)
        return e

    for lab in labels:
        k2 = 2 * index[lab]
        add(k2, k2 + 1, 1)
    for u in labels:
        ku = 2 * index[u] + 1
        for v in sorted(graph[u]):
            add(ku, 2 * index[v], inf_cap)
    for a in sorted(set(available)):
        add(s_id, 2 * index[a], source_cap)
    sink_arcs = []
    for t in sorted(set(targets)):
        sink_arcs.append(add(2 * index[t] + 1, t_id, inf_cap))

    return labels, index, adj, head, cap, sink_arcs


def build_auxiliary_graph(
    graph: Mapping[Node, Sequence[Node]],
    available: Iterable[Node],
    targets: Iterable[Node],
) -> AuxiliaryGraph:
    """Build the node-split flow network for a digraph and its A/T sets.

    The graph is normally preprocessed with :func:`preprocess_direct` first so
    that extracted flow paths are direct.  Node count is 2n+2 and forward edge
    count is n + |edges| + |A| + |T|.  The "infinite" capacity is the finite
    sentinel |T| + 1, which exceeds any feasible flow value.
    """
    available = tuple(sorted(set(available)))
    targets = tuple(sorted(set(targets)))
    for v in available + targets:
        if v not in graph:
            raise ValueError(f"node {v!r} not in graph")
    inf_cap = len(targets) + 1
    labels, index, adj, head, cap, sink_arcs = _build_arrays(
        graph, available, targets, inf_cap, inf_cap
    )
    return AuxiliaryGraph(
        labels=tuple(labels),
        available=available,
        targets=targets,
        infinite_capacity=inf_cap,
        _index=index,
        _adj=tuple(tuple(a) for a in adj),
        _head=tuple(head),
        _cap=tuple(cap),
        _sink_arcs=tuple(sink_arcs),
    )


# ---------------------------------------------------------------------------
# Max-flow kernel
# ---------------------------------------------------------------------------

def _solve(adj, head, res, s_id, t_id, sink_arcs):
    """Augment ``res`` (residual capacities, mutated) to a maximum flow.

    Breadth-first augmenting-path search from the source; from each BFS tree
    as many sink in-arcs as possible are harvested (every parent chain is
    re-verified against current residuals, so each applied chain is a valid
    augmenting path).  Harvesting only reduces the number of full BFS passes;
    the final BFS doubles as the labelling pass, whose reachable set is
    returned (it is the unique min-cut source set of the max flow).

    Returns (flow value, visited array of the final exhausted BFS).
    """
    value = 0
    n_aux = len(adj)
    while True:
        parent = [-1] * n_aux
        parent[s_id] = -2
        queue = deque([s_id])
        pop = queue.popleft
        push = queue.append
        while queue:
            u = pop()
            for arc, v in adj[u]:
                if parent[v] < 0 and res[arc] > 0:
                    parent[v] = arc
                    push(v)
        if parent[t_id] < 0:
            return value, parent
        for sink_arc in sink_arcs:
            tail = head[sink_arc ^ 1]
            if res[sink_arc] <= 0 or parent[tail] < 0:
                continue
            chain = [sink_arc]
            v = tail
            ok = True
            while v != s_id:
                arc = parent[v]
                if res[arc] <= 0:
                    ok = False
                    break
                chain.append(arc)
                v = head[arc ^ 1]
            if not ok:
                continue
            bottleneck = min(res[arc] for arc in chain)
            if bottleneck <= 0:
                continue
            for arc in chain:
                res[arc] -= bottleneck
                res[arc ^ 1] += bottleneck
            value += bottleneck


def max_flow(aux: AuxiliaryGraph) -> Flow:
    """Compute an integral maximum s-t flow on an auxiliary graph.

    Deterministic: the BFS visits arcs in the fixed construction order
    (forward arcs ascending by head node), so identical inputs yield
    identical flows.
    """
    res = list(aux._cap)
    value, _ = _solve(aux._adj, aux._head, res, aux.source_id, aux.sink_id,
                      aux._sink_arcs)
    edge_flow = tuple(
        aux._cap[2 * e] - res[2 * e] for e in range(aux.edge_count)
    )
    return Flow(value=value, edge_flow=edge_flow)


def _residual_from_flow(aux: AuxiliaryGraph, flow: Flow) -> list:
    res = list(aux._cap)
    for e, f in enumerate(flow.edge_flow):
        if f:
            res[2 * e] -= f
            res[2 * e + 1] += f
    return res


def min_cut_source_set(aux: AuxiliaryGraph, flow: Flow) -> frozenset:
    """Nodes reachable from s in the residual graph of a maximum flow.

    This is the source set of the minimal cut closest to the source; it is
    unique for a given network regardless of how the maximum flow was found.
    Returned as public node names: ``"s"`` plus ``(label, "-"/"+")`` pairs.

    Raises:
        PreconditionError: if ``flow`` is not maximum (the sink is reachable).
    """
    res = _residual_from_flow(aux, flow)
    s_id, t_id = aux.source_id, aux.sink_id
    visited = bytearray(aux.node_count)
    visited[s_id] = 1
    queue = deque([s_id])
    while queue:
        u = queue.popleft()
        for arc, v in aux._adj[u]:
            if not visited[v] and res[arc] > 0:
                if v == t_id:
                    raise PreconditionError(
                        "flow is not maximum: an augmenting path exists"
                    )
                visited[v] = 1
                queue.append(v)
    return frozenset(
        aux.node_label(i) for i in range(aux.node_count) if visited[i]
    )


def extract_linking(aux: AuxiliaryGraph, flow: Flow) -> Linking:
    """Decompose an integral maximum flow into vertex-disjoint paths.

    Walks saturated arcs from the source, consuming flow, and merges split
    nodes back into original labels.  Unit split capacities make every walk
    node-simple and terminating.  On an auxiliary graph built from a
    preprocessed digraph the resulting paths are direct.
    """
    remaining = list(flow.edge_flow)
    # forward-edge successor lists per aux node, in construction order
    out_edges: list[list[int]] = [[] for _ in range(aux.node_count)]
    for e in range(aux.edge_count):
        tail = aux._head[2 * e + 1]
        out_edges[tail].append(e)

    s_id, t_id = aux.source_id, aux.sink_id
    paths = []
    for e0 in out_edges[s_id]:
        while remaining[e0] > 0:
            remaining[e0] -= 1
            node = aux._head[2 * e0]
            path = []
            while node != t_id:
                if node % 2 == 0:
                    path.append(aux.labels[node // 2])
                nxt = None
                for e in out_edges[node]:
                    if remaining[e] > 0:
                        nxt = e
                        break
                if nxt is None:
                    raise PreconditionError(
                        "flow violates conservation; cannot decompose"
                    )
                remaining[nxt] -= 1
                node = aux._head[2 * nxt]
            paths.append(tuple(path))
    return Linking(paths=tuple(paths))


# ---------------------------------------------------------------------------
# High-level operations
# ---------------------------------------------------------------------------

def max_linking_size(
    graph: Mapping[Node, Sequence[Node]],
    available: Iterable[Node],
    targets: Iterable[Node],
) -> int:
    """Size of a maximum set of vertex-disjoint direct available-target paths."""
    pre = preprocess_direct(graph, available, targets)
    aux = build_auxiliary_graph(pre, available, targets)
    return max_flow(aux).value


def maximum_linking(
    graph: Mapping[Node, Sequence[Node]],
    available: Iterable[Node],
    targets: Iterable[Node],
) -> Linking:
    """A maximum linking itself (deterministic witness)."""
    pre = preprocess_direct(graph, available, targets)
    aux = build_auxiliary_graph(pre, available, targets)
    return extract_linking(aux, max_flow(aux))


def minimal_left_separator(
    graph: Mapping[Node, Sequence[Node]],
    available: Iterable[Node],
    targets: Iterable[Node],
) -> frozenset:
    """The unique minimal separator closest to the available set.

    Computed as the split edges crossing the min-cut source set of the
    auxiliary graph: node v belongs to the separator iff v- is labelled and
    v+ is not.  Its size equals the maximum linking size, and removing it
    disconnects the available set from the target set.
    """
    pre = preprocess_direct(graph, available, targets)
    aux = build_auxiliary_graph(pre, available, targets)
    res = list(aux._cap)
    _, parent = _solve(aux._adj, aux._head, res, aux.source_id, aux.sink_id,
                       aux._sink_arcs)
    sep = []
    for k, lab in enumerate(aux.labels):
        if parent[2 * k] >= 0 and parent[2 * k + 1] < 0:
            sep.append(lab)
    return frozenset(sep)


def essential_start_analysis(
    graph: Mapping[Node, Sequence[Node]],
    available: Iterable[Node],
    targets: Iterable[Node],
) -> tuple[int, frozenset, frozenset]:
    """Maximum steering capacity and the unavoidable start nodes.

    Returns ``(value, essential, reaches_target)`` where ``value`` is the
    maximum number of vertex-disjoint paths that can start at distinct
    available nodes and end at distinct target nodes (intermediate nodes of
    either set may be traversed), ``essential`` is the set of available nodes
    without which that value drops, and ``reaches_target`` is the set of all
    nodes with a path to the target set.

    The flow model differs from the linking pipeline in two ways: no
    preprocessing (paths may pass through unused available nodes) and
    unit-capacity source arcs.  With unit source arcs, an available node a
    that starts a path in the computed flow is avoidable iff its entry node
    a- is still reachable from s in the residual graph (the residual path
    plus the reverse source arc form a rerouting cycle); unreachable means a
    lies in every maximum family of disjoint paths, i.e. it is essential.
    """
    available = tuple(sorted(set(available)))
    targets = tuple(sorted(set(targets)))

    # reverse reachability to the target set (raw graph)
    radj: dict = {v: [] for v in graph}
    for u, succs in graph.items():
        for v in succs:
            radj[v].append(u)
    reaches = set(targets)
    queue = deque(targets)
    while queue:
        u = queue.popleft()
        for v in radj[u]:
            if v not in reaches:
                reaches.add(v)
                queue.append(v)

    # forward reachability from the useful available nodes
    live_sources = [a for a in available if a in reaches]
    from_a = set(live_sources)
    queue = deque(live_sources)
    while queue:
        u = queue.popleft()
        for v in graph[u]:
            if v in reaches and v not in from_a:
                from_a.add(v)
                queue.append(v)

    # flow network restricted to nodes on some available-to-target path
    keep = {v: tuple(w for w in graph[v] if w in reaches)
            for v in graph if v in reaches and v in from_a}
    live_targets = [t for t in targets if t in keep]
    if not keep or not live_targets or not live_sources:
        return 0, frozenset(), frozenset(reaches)

    inf_cap = len(live_targets) + 1
    labels, index, adj, head, cap, sink_arcs = _build_arrays(
        keep, live_sources, live_targets, inf_cap, 1
    )
    s_id = 2 * len(labels)
    t_id = s_id + 1
    value, parent = _solve(adj, head, cap, s_id, t_id, sink_arcs)

    essential = []
    for arc, v in adj[s_id]:
        if arc % 2 == 0 and cap[arc] == 0 and parent[v] < 0:
            essential.append(labels[v // 2])
    return value, frozenset(essential), frozenset(reaches)
