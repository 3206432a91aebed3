"""Static O(1) LCA via Euler tour + sparse table."""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np


class EulerLCA:
    """Euler tour of a rooted tree with a sparse table over tour depths.

    Build is O(n log n) with numpy row operations; each query is two table
    lookups.
    """

    __slots__ = ("euler", "depths", "first", "table", "log")

    def __init__(self, root: int, children: Sequence[Sequence[int]], depth: Sequence[int]):
        euler: list[int] = []
        first: dict[int, int] = {}
        # iterative dfs; the tour re-emits a vertex after each child returns
        stack: list[tuple[int, int]] = [(root, 0)]
        while stack:
            u, i = stack.pop()
            if i == 0:
                first[u] = len(euler)
            euler.append(u)
            kids = children[u]
            if i < len(kids):
                stack.append((u, i + 1))
                stack.append((kids[i], 0))

        self.euler = np.asarray(euler, dtype=np.int64)
        self.depths = np.asarray([depth[u] for u in euler], dtype=np.int64)
        self.first = first

        m = len(euler)
        self.log = np.zeros(m + 1, dtype=np.int64)
        if m > 1:
            self.log[2:] = np.floor(np.log2(np.arange(2, m + 1))).astype(np.int64)

        levels = int(self.log[m]) + 1
        table = np.empty((levels, m), dtype=np.int64)
        table[0] = np.arange(m)
        for k in range(1, levels):
            half = 1 << (k - 1)
            span = m - (1 << k) + 1
            left = table[k - 1, :span]
            right = table[k - 1, half:half + span]
            table[k, :span] = np.where(self.depths[left] <= self.depths[right], left, right)
            table[k, span:] = table[k - 1, span:]
        self.table = table

    def __contains__(self, u: int) -> bool:
        return u in self.first

    def query(self, u: int, v: int) -> int:
        lo, hi = self.first[u], self.first[v]
        if lo > hi:
            lo, hi = hi, lo
        k = int(self.log[hi - lo + 1])
        a = self.table[k, lo]
        b = self.table[k, hi - (1 << k) + 1]
        return int(self.euler[a] if self.depths[a] <= self.depths[b] else self.euler[b])
