"""A small reduced ordered binary decision diagram with weighted model counting.

Variables are integer levels 0..n-1; nodes are hash-consed per manager so
structural equality is identity on node ids.  Just enough for compiling
ground logic programs: constants, variables, AND/OR/NOT, and a weighted count
against per-variable probabilities.
"""

from __future__ import annotations


class Bdd:
    FALSE = 0
    TRUE = 1

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        # node id -> (level, lo, hi); ids 0/1 are the terminals
        self.nodes: list[tuple[int, int, int]] = [
            (num_vars, 0, 0),
            (num_vars, 1, 1),
        ]
        self.unique: dict[tuple[int, int, int], int] = {}
        self.cache: dict[tuple, int] = {}

    def _mk(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (level, lo, hi)
        node = self.unique.get(key)
        if node is None:
            node = len(self.nodes)
            self.nodes.append(key)
            self.unique[key] = node
        return node

    def var(self, level: int) -> int:
        return self._mk(level, self.FALSE, self.TRUE)

    def level(self, u: int) -> int:
        return self.nodes[u][0]

    def apply_and(self, u: int, v: int) -> int:
        if u == self.FALSE or v == self.FALSE:
            return self.FALSE
        if u == self.TRUE:
            return v
        if v == self.TRUE:
            return u
        if u == v:
            return u
        if u > v:
            u, v = v, u
        key = ("and", u, v)
        r = self.cache.get(key)
        if r is not None:
            return r
        lu, lou, hiu = self.nodes[u]
        lv, lov, hiv = self.nodes[v]
        top = min(lu, lv)
        u_lo, u_hi = (lou, hiu) if lu == top else (u, u)
        v_lo, v_hi = (lov, hiv) if lv == top else (v, v)
        r = self._mk(top, self.apply_and(u_lo, v_lo), self.apply_and(u_hi, v_hi))
        self.cache[key] = r
        return r

    def apply_or(self, u: int, v: int) -> int:
        if u == self.TRUE or v == self.TRUE:
            return self.TRUE
        if u == self.FALSE:
            return v
        if v == self.FALSE:
            return u
        if u == v:
            return u
        if u > v:
            u, v = v, u
        key = ("or", u, v)
        r = self.cache.get(key)
        if r is not None:
            return r
        lu, lou, hiu = self.nodes[u]
        lv, lov, hiv = self.nodes[v]
        top = min(lu, lv)
        u_lo, u_hi = (lou, hiu) if lu == top else (u, u)
        v_lo, v_hi = (lov, hiv) if lv == top else (v, v)
        r = self._mk(top, self.apply_or(u_lo, v_lo), self.apply_or(u_hi, v_hi))
        self.cache[key] = r
        return r

    def negate(self, u: int) -> int:
        if u == self.FALSE:
            return self.TRUE
        if u == self.TRUE:
            return self.FALSE
        key = ("not", u)
        r = self.cache.get(key)
        if r is not None:
            return r
        level, lo, hi = self.nodes[u]
        r = self._mk(level, self.negate(lo), self.negate(hi))
        self.cache[key] = r
        return r

    def conjoin(self, us) -> int:
        r = self.TRUE
        for u in us:
            r = self.apply_and(r, u)
        return r

    def disjoin(self, us) -> int:
        r = self.FALSE
        for u in us:
            r = self.apply_or(r, u)
        return r

    def weighted_count(self, u: int, probabilities: list[float]) -> float:
        """Probability mass of the models of ``u`` under independent variable
        probabilities.  Variables skipped along an edge marginalize to 1."""
        memo: dict[int, float] = {self.FALSE: 0.0, self.TRUE: 1.0}

        def go(node: int) -> float:
            r = memo.get(node)
            if r is not None:
                return r
            level, lo, hi = self.nodes[node]
            p = probabilities[level]
            r = (1.0 - p) * go(lo) + p * go(hi)
            memo[node] = r
            return r

        return go(u)
