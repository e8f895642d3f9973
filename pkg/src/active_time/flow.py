"""Integral maximum flow (Dinic's blocking-flow algorithm)."""

from __future__ import annotations

from collections import deque


class FlowNetwork:
    """Residual network stored as parallel edge arrays.

    Edge ``e`` and its reverse ``e ^ 1`` are always adjacent, so the flow
    on a forward edge is the residual capacity of its reverse.
    """

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.adj: list[list[int]] = [[] for _ in range(num_nodes)]
        self.head: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, capacity: int) -> int:
        e = len(self.head)
        self.head += [v, u]
        self.cap += [capacity, 0]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def flow_on(self, e: int) -> int:
        return self.cap[e ^ 1]

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.num_nodes
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.head[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _augment(self, u: int, t: int, pushed: int, level: list[int], it: list[int]) -> int:
        if u == t:
            return pushed
        adj = self.adj[u]
        while it[u] < len(adj):
            e = adj[it[u]]
            v = self.head[e]
            if self.cap[e] > 0 and level[v] == level[u] + 1:
                got = self._augment(v, t, min(pushed, self.cap[e]), level, it)
                if got:
                    self.cap[e] -= got
                    self.cap[e ^ 1] += got
                    return got
            it[u] += 1
        return 0

    def max_flow(self, s: int, t: int, limit: int | None = None) -> int:
        """Push flow from ``s`` to ``t``; stop early once ``limit`` is reached."""
        total = 0
        big = sum(self.cap[e] for e in self.adj[s]) + 1
        while limit is None or total < limit:
            level = self._levels(s, t)
            if level is None:
                break
            it = [0] * self.num_nodes
            while True:
                got = self._augment(s, t, big, level, it)
                if not got:
                    break
                total += got
        return total
