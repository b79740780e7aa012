"""
Isomorph-free enumeration of contact-graph candidates.

Graphs are tiny (n <= 13) so canonical labeling is done by iterative
degree refinement with individualization backtracking; the canonical edge
list doubles as the content-address for the refutation ledger (sha256).
"""

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .degseq import is_graphical


class NotGraphical(ValueError):
    """Raised when asked to enumerate graphs for a non-graphical sequence."""


@dataclass(frozen=True)
class ContactGraph:
    """Simple labeled graph on vertices 0..n-1."""

    n: int
    edges: tuple  # sorted tuple of (i, j) with i < j

    @classmethod
    def from_edges(cls, n, edges):
        norm = sorted((min(i, j), max(i, j)) for i, j in edges)
        if any(i == j for i, j in norm):
            raise ValueError("self-loop")
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edge")
        if norm and (norm[0][0] < 0 or norm[-1][1] >= n):
            raise ValueError("vertex out of range")
        return cls(n=n, edges=tuple(norm))

    @cached_property
    def adj(self):
        """Adjacency bitmasks, one int per vertex."""
        a = [0] * self.n
        for i, j in self.edges:
            a[i] |= 1 << j
            a[j] |= 1 << i
        return tuple(a)

    def degree(self, v):
        return self.adj[v].bit_count()

    @cached_property
    def degree_sequence(self):
        return tuple(sorted((a.bit_count() for a in self.adj), reverse=True))

    def neighbors(self, v):
        a = self.adj[v]
        return [u for u in range(self.n) if a >> u & 1]

    def has_edge(self, i, j):
        return bool(self.adj[i] >> j & 1)

    def relabel(self, perm):
        """perm[old] = new label."""
        return ContactGraph.from_edges(
            self.n, [(perm[i], perm[j]) for i, j in self.edges]
        )

    @cached_property
    def canonical_edges(self):
        return _canonical_edges(self.n, self.adj)

    @cached_property
    def canonical_hash(self):
        payload = json.dumps(
            {"n": self.n, "edges": [list(e) for e in self.canonical_edges]},
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj):
        return cls.from_edges(obj["n"], [tuple(e) for e in obj["edges"]])


def canonical_form(g):
    """Canonical representative of g's isomorphism class.

    Equal outputs iff inputs are isomorphic; idempotent; tie-breaking inside
    the refinement is smallest-vertex-first and fixed forever so ledger keys
    stay stable.
    """
    return ContactGraph(n=g.n, edges=g.canonical_edges)


def _refine(n, adj, colors):
    """Refine vertex colors by sorted multisets of neighbor colors until
    stable.  Colors are small ints; ordering of new colors follows the
    sort order of (old color, neighbor-color multiset)."""
    while True:
        keys = []
        for v in range(n):
            nbr = adj[v]
            sig = sorted(colors[u] for u in range(n) if nbr >> u & 1)
            keys.append((colors[v], tuple(sig)))
        order = sorted(set(keys))
        lookup = {k: c for c, k in enumerate(order)}
        new = [lookup[k] for k in keys]
        if new == colors:
            return colors
        colors = new


def _canonical_edges(n, adj):
    """Lexicographically smallest edge list over a refinement-guided set of
    labelings (covers at least one labeling per automorphism coset, so the
    minimum is class-invariant)."""
    best = [None]

    def label_from(colors):
        # colors discrete: vertex with color c gets label c
        perm = [0] * n
        for v in range(n):
            perm[v] = colors[v]
        edges = sorted(
            (min(perm[i], perm[j]), max(perm[i], perm[j]))
            for i in range(n)
            for j in range(i + 1, n)
            if adj[i] >> j & 1
        )
        edges = tuple(edges)
        if best[0] is None or edges < best[0]:
            best[0] = edges

    def search(colors):
        colors = _refine(n, adj, colors)
        # find first non-singleton color class (smallest color, then vertex)
        counts = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = None
        for c in sorted(counts):
            if counts[c] > 1:
                target = c
                break
        if target is None:
            label_from(colors)
            return
        for v in range(n):
            if colors[v] == target:
                child = list(colors)
                # individualize v: give it a color just below its class
                child[v] = target - 0.5
                normalized = _normalize(child)
                search(normalized)

    search([0] * n)
    return best[0]


def _normalize(colors):
    order = sorted(set(colors))
    lookup = {c: i for i, c in enumerate(order)}
    return [lookup[c] for c in colors]


def enumerate_graphs(seq):
    """Yield one ContactGraph per isomorphism class realizing `seq`.

    Labeled graphs are generated row by row of the upper adjacency
    triangle with Erdos-Gallai pruning on the residual degrees, then
    deduplicated by canonical hash.  Deterministic order.
    """
    seq = tuple(seq)
    if not is_graphical(seq):
        raise NotGraphical(str(seq))
    n = len(seq)
    seen = set()
    for edges in _labeled_graphs(n, seq):
        g = ContactGraph(n=n, edges=edges)
        key = g.canonical_edges
        if key not in seen:
            seen.add(key)
            yield g


def _labeled_graphs(n, seq):
    """All labeled simple graphs on 0..n-1 with degree sequence `seq`
    (vertex i has degree seq[i]); each graph yielded exactly once."""
    residual = list(seq)
    edges = []

    def feasible(i):
        # residual degrees of vertices > i must be graphical among themselves
        rest = sorted(residual[i + 1:], reverse=True)
        return is_graphical(tuple(rest))

    def rec(i):
        if i == n - 1:
            if residual[i] == 0:
                yield tuple(edges)
            return
        r = residual[i]
        if r == 0:
            if feasible(i):
                yield from rec(i + 1)
            return
        later = [j for j in range(i + 1, n) if residual[j] > 0]
        if len(later) < r:
            return
        for S in combinations(later, r):
            for j in S:
                residual[j] -= 1
            residual[i] = 0
            edges.extend((i, j) for j in S)
            if feasible(i):
                yield from rec(i + 1)
            del edges[-r:]
            residual[i] = r
            for j in S:
                residual[j] += 1

    yield from rec(0)


# ---------------------------------------------------------------------------
# structural predicate algebra (used by the lemma audits)

def degree_count(g, d):
    """Number of vertices of degree exactly d."""
    return sum(1 for v in range(g.n) if g.degree(v) == d)


def vertices_of_degree(g, d):
    return [v for v in range(g.n) if g.degree(v) == d]


def adjacent(g, u, v):
    return g.has_edge(u, v)


def common_neighbors(g, u, v):
    mask = g.adj[u] & g.adj[v]
    return [w for w in range(g.n) if mask >> w & 1]


def structural_query(g, predicate):
    """Evaluate a predicate from the fixed algebra on g.

    `predicate` is a callable built from degree_count / adjacent /
    common_neighbors; the indirection exists so audits can log which
    assertions they checked.
    """
    return bool(predicate(g))
