"""Minimum-cost flow with per-arc lower bounds.

The engine is a textbook successive-shortest-path solver: Dijkstra with node
potentials finds cheapest augmenting paths in the residual graph, which is
valid because all arc costs here are nonnegative.  Lower bounds are removed
by the usual transformation (force the mandatory flow, track the resulting
node imbalances, and saturate them from a super source to a super sink).

The graphs in this package are tiny (tens of nodes), so clarity wins over
asymptotics; correctness is cross-checked in the tests against brute-force
enumeration of balanced assignments.
"""

from __future__ import annotations

import heapq


class MinCostFlow:
    """Successive shortest paths on a residual graph, nonnegative costs."""

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.adjacent: list[list[int]] = [[] for _ in range(num_nodes)]
        self.arc_to: list[int] = []
        self.arc_cap: list[int] = []
        self.arc_cost: list[int] = []

    def add(self, tail: int, head: int, capacity: int, cost: int) -> int:
        """Add an arc and its residual twin; returns the arc id."""
        if capacity < 0 or cost < 0:
            raise ValueError("capacity and cost must be >= 0")
        arc_id = len(self.arc_to)
        self.arc_to.extend((head, tail))
        self.arc_cap.extend((capacity, 0))
        self.arc_cost.extend((cost, -cost))
        self.adjacent[tail].append(arc_id)
        self.adjacent[head].append(arc_id + 1)
        return arc_id

    def flow_on(self, arc_id: int) -> int:
        """Units pushed through the arc returned by :meth:`add`."""
        return self.arc_cap[arc_id ^ 1]

    def run(self, source: int, sink: int) -> tuple[int, int]:
        """Push a maximum flow from source to sink at minimum total cost."""
        total_flow = 0
        total_cost = 0
        potential = [0] * self.num_nodes
        infinity = float("inf")
        while True:
            distance = [infinity] * self.num_nodes
            parent_arc = [-1] * self.num_nodes
            distance[source] = 0
            heap = [(0, source)]
            while heap:
                dist, node = heapq.heappop(heap)
                if dist > distance[node]:
                    continue
                for arc_id in self.adjacent[node]:
                    if self.arc_cap[arc_id] <= 0:
                        continue
                    other = self.arc_to[arc_id]
                    reduced = (
                        dist
                        + self.arc_cost[arc_id]
                        + potential[node]
                        - potential[other]
                    )
                    if reduced < distance[other]:
                        distance[other] = reduced
                        parent_arc[other] = arc_id
                        heapq.heappush(heap, (reduced, other))
            if distance[sink] == infinity:
                return total_flow, total_cost
            for node in range(self.num_nodes):
                if distance[node] != infinity:
                    potential[node] += distance[node]
            bottleneck = None
            node = sink
            while node != source:
                arc_id = parent_arc[node]
                room = self.arc_cap[arc_id]
                bottleneck = room if bottleneck is None else min(bottleneck, room)
                node = self.arc_to[arc_id ^ 1]
            node = sink
            while node != source:
                arc_id = parent_arc[node]
                self.arc_cap[arc_id] -= bottleneck
                self.arc_cap[arc_id ^ 1] += bottleneck
                total_cost += bottleneck * self.arc_cost[arc_id]
                node = self.arc_to[arc_id ^ 1]
            total_flow += bottleneck


def feasible_min_cost(
    num_nodes: int,
    arcs: list[tuple[int, int, int, int, int]],
    source: int,
    sink: int,
    amount: int,
) -> tuple[int, list[int]] | None:
    """Cheapest source-to-sink flow of exactly ``amount`` units.

    ``arcs`` holds ``(tail, head, low, high, cost)`` tuples; ``low`` units are
    mandatory on each arc.  Returns ``(total_cost, per_arc_flow)`` with flows
    in input order, or ``None`` when no feasible flow exists.
    """
    super_source = num_nodes
    super_sink = num_nodes + 1
    engine = MinCostFlow(num_nodes + 2)
    imbalance = [0] * num_nodes
    base_cost = 0
    arc_ids = []
    for tail, head, low, high, cost in arcs:
        if not 0 <= low <= high:
            raise ValueError("need 0 <= low <= high")
        imbalance[head] += low
        imbalance[tail] -= low
        base_cost += low * cost
        arc_ids.append(engine.add(tail, head, high - low, cost))
    # Closing the circulation: the sink owes the source exactly `amount`.
    imbalance[source] += amount
    imbalance[sink] -= amount
    required = 0
    for node, excess in enumerate(imbalance):
        if excess > 0:
            engine.add(super_source, node, excess, 0)
            required += excess
        elif excess < 0:
            engine.add(node, super_sink, -excess, 0)
    pushed, cost = engine.run(super_source, super_sink)
    if pushed != required:
        return None
    flows = [
        arcs[i][2] + engine.flow_on(arc_id) for i, arc_id in enumerate(arc_ids)
    ]
    return base_cost + cost, flows
