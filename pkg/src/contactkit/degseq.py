"""
Degree-sequence enumeration and Handshaking-Lemma case trees.

A candidate packing with m contacts among n spheres has a contact graph
whose degree sequence sums to 2m, with every degree at most min(n-1, 12)
(12 = kissing number of congruent spheres in R^3).  This module enumerates
those sequences, filters them by the Erdos-Gallai condition, and builds
the nested max-degree case trees used by the refutation pipeline, diffing
the leaf lists against the hand-transcribed case lists for (n=7, m=16)
and (n=8, m=19).
"""

from dataclasses import dataclass, field

KISSING_NUMBER = 12


class UnsupportedSize(ValueError):
    """Case trees are only built for n in 6..8."""


def max_degree_cap(n):
    """Largest degree any vertex of an n-sphere contact graph can have."""
    return min(n - 1, KISSING_NUMBER)


def is_wellformed(seq):
    """Sorted non-increasing, non-negative, each entry within the degree cap."""
    n = len(seq)
    if n == 0:
        return True
    cap = max_degree_cap(n)
    if seq[0] > cap or seq[-1] < 0:
        return False
    return all(seq[i] >= seq[i + 1] for i in range(n - 1))


def is_graphical(seq):
    """Erdos-Gallai test: does some simple graph have this degree sequence?

    `seq` must be sorted non-increasing.  Total function: returns False for
    anything no simple graph can realize (odd sum, degree >= n, ...).
    """
    n = len(seq)
    if n == 0:
        return True
    if seq[0] > n - 1 or seq[-1] < 0:
        return False
    if sum(seq) % 2 != 0:
        return False
    prefix = 0
    for k in range(1, n + 1):
        prefix += seq[k - 1]
        tail = sum(min(d, k) for d in seq[k:])
        if prefix > k * (k - 1) + tail:
            return False
    return True


def _descending_sequences(length, total, hi):
    """Non-increasing sequences of `length` non-negative ints summing to
    `total` with entries <= hi, in lexicographically decreasing order."""
    if length == 0:
        if total == 0:
            yield ()
        return
    top = min(hi, total)
    for d in range(top, -1, -1):
        if d * length < total:
            break
        for rest in _descending_sequences(length - 1, total - d, d):
            yield (d,) + rest


def enumerate_sequences(n, m):
    """All graphical degree sequences of length n with sum 2m.

    Entries are capped at min(n-1, 12).  Returned as a list in
    lexicographically decreasing order (deterministic).
    """
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    cap = max_degree_cap(n)
    return [
        seq
        for seq in _descending_sequences(n, 2 * m, cap)
        if is_graphical(seq)
    ]


# Case lists as printed in the source write-up, one tuple per listed
# sequence, transcribed verbatim.  n=6 has no printed list (the argument
# there is pure degree counting).
PAPER_SEQUENCES = {
    (7, 16): [
        (6, 6, 6, 5, 3, 3, 3),
        (6, 6, 6, 4, 4, 3, 3),
        (6, 6, 5, 5, 4, 3, 3),
        (6, 6, 5, 4, 4, 4, 3),
        (6, 6, 4, 4, 4, 4, 4),
        (6, 5, 5, 5, 5, 3, 3),
        (6, 5, 5, 5, 4, 4, 3),
        (6, 5, 5, 4, 4, 4, 4),
        (5, 5, 5, 5, 5, 5, 2),
        (5, 5, 5, 5, 5, 4, 3),
        (5, 5, 5, 5, 4, 4, 4),
    ],
    (8, 19): [
        (7, 7, 7, 5, 3, 3, 3, 3),
        (7, 7, 7, 4, 4, 3, 3, 3),
        (7, 7, 6, 6, 3, 3, 3, 3),
        (7, 7, 6, 5, 4, 3, 3, 3),
        (7, 7, 6, 4, 4, 4, 3, 3),
        (7, 7, 5, 5, 5, 3, 3, 3),
        (7, 7, 5, 5, 4, 4, 3, 3),
        (7, 7, 5, 4, 4, 4, 4, 3),
        (7, 6, 6, 6, 4, 3, 3, 3),
        (7, 6, 6, 5, 5, 3, 3, 3),
        (7, 6, 6, 4, 4, 4, 4, 3),
        (7, 6, 5, 4, 4, 4, 4, 4),
        (7, 5, 5, 5, 5, 5, 3, 3),
        (7, 5, 5, 5, 5, 4, 4, 3),
        (7, 5, 5, 5, 4, 4, 4, 4),
        (6, 6, 6, 6, 5, 3, 3, 3),
        (6, 6, 6, 6, 4, 4, 3, 3),
        (6, 6, 6, 5, 5, 4, 3, 3),
        (6, 6, 6, 5, 4, 4, 4, 3),
        (6, 6, 6, 4, 4, 4, 4, 4),
        (6, 6, 5, 5, 4, 4, 4, 4),
        (6, 5, 5, 5, 5, 4, 4, 4),
        (6, 5, 5, 5, 5, 5, 4, 3),
        (5, 5, 5, 5, 5, 5, 5, 3),
        (5, 5, 5, 5, 5, 5, 4, 4),
    ],
}


@dataclass
class CaseNode:
    """One branch of the nested max-degree case analysis.

    `constraint` reads like "deg[k] = d" (k-th largest degree, 0-indexed);
    `residual_bound` is the implied lower bound on the sum of the remaining
    degrees.  Leaf nodes carry the full sequences completing the prefix.
    """

    constraint: str
    residual_bound: str
    prefix: tuple = ()
    children: list = field(default_factory=list)
    leaves: list = field(default_factory=list)

    def to_json(self):
        return {
            "constraint": self.constraint,
            "residual_bound": self.residual_bound,
            "children": [c.to_json() for c in self.children],
            "leaves": [list(s) for s in self.leaves],
        }

    def all_leaves(self):
        out = list(self.leaves)
        for c in self.children:
            out.extend(c.all_leaves())
        return out


@dataclass
class CaseTree:
    n: int
    m: int
    root: CaseNode
    paper_listed: list        # sequences printed for (n, m), [] if none
    extras: list              # enumerated but not printed
    missing: list             # printed but not enumerated (would be an error)

    def leaves(self):
        return self.root.all_leaves()

    def to_json(self):
        return {
            "n": self.n,
            "m": self.m,
            "tree": self.root.to_json(),
            "paper_listed": [list(s) for s in self.paper_listed],
            "extras": [list(s) for s in self.extras],
            "missing": [list(s) for s in self.missing],
        }


def _completions(prefix, n, total, cap):
    """Graphical sequences of length n starting with `prefix`, sum `total`."""
    rest = total - sum(prefix)
    hi = min(cap, prefix[-1]) if prefix else cap
    out = []
    for tail in _descending_sequences(n - len(prefix), rest, hi):
        seq = prefix + tail
        if is_graphical(seq):
            out.append(seq)
    return out


def _build_node(prefix, n, total, cap, constraint):
    need = total - sum(prefix)
    k = len(prefix)
    node = CaseNode(
        constraint=constraint,
        residual_bound="sum(deg[%d:]) >= %d" % (k, need),
        prefix=prefix,
    )
    hi = min(cap, prefix[-1]) if prefix else cap
    # Branch while the next degree can still be 5 or more; once every
    # remaining degree is <= 4 the handshaking bound pins the tail down and
    # the node becomes a leaf bundle.
    if k < n and hi >= 5:
        for d in range(hi, -1, -1):
            if d * (n - k) < need:
                break  # all remaining <= d cannot reach the required sum
            if d >= 5:
                child = _build_node(
                    prefix + (d,), n, total, cap, "deg[%d] = %d" % (k, d)
                )
                if child.children or child.leaves:
                    node.children.append(child)
            else:
                # all remaining degrees <= 4: collect completions directly
                leaf = CaseNode(
                    constraint="deg[%d:] <= %d" % (k, d),
                    residual_bound="sum(deg[%d:]) >= %d" % (k, need),
                    prefix=prefix,
                )
                leaf.leaves = [
                    s
                    for s in _completions(prefix, n, total, cap)
                    if (len(prefix) == n or s[k] <= 4)
                ]
                if leaf.leaves:
                    node.children.append(leaf)
                break
    elif k == n:
        if need == 0 and is_graphical(prefix):
            node.leaves = [prefix]
    else:
        node.leaves = _completions(prefix, n, total, cap)
    return node


def build_case_tree(n, m):
    """Nested case tree for refuting m contacts among n spheres.

    Branches on the successive largest degrees exactly the way the written
    case analysis does; leaves are the graphical sequences with degree sum
    2m.  For (7,16) and (8,19) the tree is diffed against the printed case
    lists; extras are reported, never suppressed.
    """
    if not 6 <= n <= 8:
        raise UnsupportedSize("case trees support n in 6..8, got n=%d" % n)
    cap = max_degree_cap(n)
    root = _build_node((), n, 2 * m, cap, "root")
    leaves = set(root.all_leaves())
    listed = PAPER_SEQUENCES.get((n, m), [])
    extras = sorted(leaves - set(listed), reverse=True)
    missing = [s for s in listed if s not in leaves]
    return CaseTree(
        n=n, m=m, root=root, paper_listed=listed, extras=extras, missing=missing
    )
