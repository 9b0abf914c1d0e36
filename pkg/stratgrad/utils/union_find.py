"""
stratgrad/utils/union_find.py

Disjoint-set forest with path compression, used for degree-0 persistence
by the elder rule.
"""

from typing import Dict, Hashable


class UnionFind:
    """
    Disjoint sets over arbitrary hashable nodes.

    Each root remembers a ``birth`` value so callers can apply the elder rule
    on merge: the set whose root was born later is the one that dies.
    """

    def __init__(self):
        self._parent: Dict[Hashable, Hashable] = {}
        self._rank: Dict[Hashable, int] = {}
        self.birth: Dict[Hashable, tuple] = {}

    def make_set(self, node: Hashable, birth: tuple) -> None:
        self._parent[node] = node
        self._rank[node] = 0
        self.birth[node] = birth

    def find(self, node: Hashable) -> Hashable:
        root = node
        while self._parent[root] != root:
            root = self._parent[root]
        # path compression
        while self._parent[node] != root:
            self._parent[node], node = root, self._parent[node]
        return root

    def union(self, a: Hashable, b: Hashable) -> Hashable:
        """
        Merge the sets containing ``a`` and ``b``.

        Returns:
            The root that survives; its birth is the elder of the two.
        """
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self._rank[ra] < self._rank[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        if self._rank[ra] == self._rank[rb]:
            self._rank[ra] += 1
        self.birth[ra] = min(self.birth[ra], self.birth[rb])
        return ra
