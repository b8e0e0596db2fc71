"""Brute-force min-cut oracle over explicitly built information-flow graphs.

Independent route to the storable-file-size bound for tiny instances: build
the flow graph of a rack-aware cluster after a schedule of single-node
failures and repairs, and take the minimum s-t max-flow over all repair
schedules and all k-node data collectors.

Graph rules: the source feeds every initial node; a node is an in/out
vertex pair joined by a capacity-alpha edge.  A repaired node receives the
surviving u-1 nodes of its rack over free (infinite) edges and, from each
helper rack, one capacity-beta edge out of a relay that aggregates that
rack's current nodes for free.  A collector reaches its k chosen nodes
over free edges.
"""

import itertools
from collections import deque

INF = 1 << 30


def max_flow(edges, source, sink):
    """Edmonds-Karp on a {u: {v: capacity}} adjacency dict."""
    residual = {}
    for u, outs in edges.items():
        for v, cap in outs.items():
            residual.setdefault(u, {})[v] = residual.get(u, {}).get(v, 0) + cap
            residual.setdefault(v, {}).setdefault(u, 0)
    flow = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            if u == sink:
                break
            for v, cap in residual.get(u, {}).items():
                if cap > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        path = []
        v = sink
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        bottleneck = min(residual[u][v] for u, v in path)
        for u, v in path:
            residual[u][v] -= bottleneck
            residual[v][u] += bottleneck
        flow += bottleneck


class ClusterFlowGraph:
    """Rack-aware information-flow graph under a failure/repair schedule."""

    def __init__(self, nbar, u, alpha, beta):
        self.nbar = nbar
        self.u = u
        self.alpha = alpha
        self.beta = beta
        self.edges = {}
        self.incarnation = {}
        self.relay_count = 0
        for e in range(nbar):
            for g in range(u):
                self.incarnation[(e, g)] = 0
                self._add("S", ("in", e, g, 0), INF)
                self._add(("in", e, g, 0), ("out", e, g, 0), alpha)

    def _add(self, u, v, cap):
        if cap <= 0:
            return
        self.edges.setdefault(u, {})[v] = self.edges.get(u, {}).get(v, 0) + cap

    def _out(self, e, g):
        return ("out", e, g, self.incarnation[(e, g)])

    def fail_and_repair(self, rack, helper_racks):
        """Fail node (rack, 0) and wire its replacement."""
        r = self.incarnation[(rack, 0)] + 1
        self.incarnation[(rack, 0)] = r
        new_in, new_out = ("in", rack, 0, r), ("out", rack, 0, r)
        self._add(new_in, new_out, self.alpha)
        for g in range(1, self.u):
            self._add(self._out(rack, g), new_in, INF)
        for h in helper_racks:
            self.relay_count += 1
            relay = ("relay", self.relay_count)
            for g in range(self.u):
                self._add(self._out(h, g), relay, INF)
            self._add(relay, new_in, self.beta)

    def collector_flow(self, nodes):
        edges = {u: dict(vs) for u, vs in self.edges.items()}
        for e, g in nodes:
            edges.setdefault(self._out(e, g), {})["C"] = INF
        return max_flow(edges, "S", "C")


def min_cut_over_schedules(p, alpha, beta):
    """Minimum collector max-flow over all repair schedules that fail one
    node in each of up to kbar distinct racks (any order, any helper sets)."""
    all_nodes = [(e, g) for e in range(p.nbar) for g in range(p.u)]
    best = None
    for m in range(0, p.kbar + 1):
        for racks in itertools.permutations(range(p.nbar), m):
            helper_menu = []
            for rack in racks:
                others = [e for e in range(p.nbar) if e != rack]
                helper_menu.append(list(itertools.combinations(others, p.dbar)))
            for helper_choice in itertools.product(*helper_menu):
                graph = ClusterFlowGraph(p.nbar, p.u, alpha, beta)
                for rack, helpers in zip(racks, helper_choice):
                    graph.fail_and_repair(rack, helpers)
                for collector in itertools.combinations(all_nodes, p.k):
                    value = graph.collector_flow(collector)
                    if best is None or value < best:
                        best = value
    return best
