"""Disjoint-set forest that remembers the smallest element of every set."""
from typing import Tuple


class UnionFind:
    """Union by rank with path compression over elements 0 .. n - 1."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.minimum = list(range(n))
        self.components = n

    def find(self, element: int) -> int:
        root = element
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[element] != root:
            self.parent[element], element = root, self.parent[element]
        return root

    def unite(self, first: int, second: int) -> Tuple[bool, int, int]:
        """
        Merge the sets of two elements.

        :returns: (merged, absorbed_min, surviving_min); the surviving set is
            the one with the smaller minimum element
        """
        rep_first = self.find(first)
        rep_second = self.find(second)
        if rep_first == rep_second:
            return False, self.minimum[rep_first], self.minimum[rep_first]

        min_first, min_second = self.minimum[rep_first], self.minimum[rep_second]
        surviving, absorbed = min(min_first, min_second), max(min_first, min_second)

        if self.rank[rep_first] < self.rank[rep_second]:
            rep_first, rep_second = rep_second, rep_first
        self.parent[rep_second] = rep_first
        if self.rank[rep_first] == self.rank[rep_second]:
            self.rank[rep_first] += 1
        self.minimum[rep_first] = surviving
        self.components -= 1
        return True, absorbed, surviving
