"""
One-sided realizability: embed a contact graph as unit spheres in R^3.

Semantics: every edge means center distance exactly 2 (within edge_tol),
every non-edge means distance >= 2 (minus overlap_tol).  The solver can
prove realizability by producing a certificate; it never proves
impossibility -- exhausting the budget yields Unknown.
"""

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from . import kernels
from .graphenum import ContactGraph

TOOL_VERSION = "contactkit-0.1.0"

# polishing is attempted whenever a restart's objective drops this low
POLISH_TRIGGER = 1e-3


class DimensionMismatch(ValueError):
    """Certificate centers count disagrees with its graph."""


@dataclass
class SolverConfig:
    restarts: int = 200
    iters: int = 2000
    seed: int = 0
    edge_tol: float = 1e-9
    overlap_tol: float = 1e-9
    polish: bool = True

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts >= 1 required")
        if self.edge_tol <= 0 or self.overlap_tol <= 0:
            raise ValueError("tolerances must be positive")

    def to_json(self):
        return asdict(self)


@dataclass
class Packing:
    """n unit-sphere centers witnessing a contact graph."""

    centers: np.ndarray  # (n, 3)
    graph: ContactGraph
    seed: int = 0
    restarts_used: int = 0

    def residual_stats(self):
        """(max |dist-2| over edges, min dist over non-edges)."""
        c = np.asarray(self.centers, dtype=float)
        n = self.graph.n
        max_edge = 0.0
        min_gap = math.inf
        edges = set(self.graph.edges)
        for i in range(n):
            for j in range(i + 1, n):
                d = float(np.linalg.norm(c[i] - c[j]))
                if (i, j) in edges:
                    max_edge = max(max_edge, abs(d - 2.0))
                else:
                    min_gap = min(min_gap, d)
        return max_edge, min_gap

    def contact_count(self):
        return len(self.graph.edges)

    def to_json(self):
        max_edge, min_gap = self.residual_stats()
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edges],
            "centers": [[float(v) for v in row] for row in self.centers],
            "radius": 1.0,
            "max_edge_residual": max_edge,
            "min_nonedge_gap": None if math.isinf(min_gap) else min_gap,
            "seed": self.seed,
            "restarts_used": self.restarts_used,
            "tool_version": TOOL_VERSION,
        }

    @classmethod
    def from_json(cls, obj):
        g = ContactGraph.from_edges(obj["n"], [tuple(e) for e in obj["edges"]])
        centers = np.array(obj["centers"], dtype=float)
        if centers.shape != (obj["n"], 3):
            raise DimensionMismatch(
                "centers shape %s for n=%d" % (centers.shape, obj["n"])
            )
        return cls(
            centers=centers,
            graph=g,
            seed=obj.get("seed", 0),
            restarts_used=obj.get("restarts_used", 0),
        )

    def to_xyz(self):
        lines = ["%d" % self.graph.n, "contacts=%d" % self.contact_count()]
        for row in self.centers:
            lines.append("S %.17g %.17g %.17g" % tuple(float(v) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_xyz(cls, text, graph):
        lines = [ln for ln in text.strip().splitlines()]
        n = int(lines[0])
        centers = np.array(
            [[float(tok) for tok in ln.split()[1:4]] for ln in lines[2 : 2 + n]]
        )
        return cls(centers=centers, graph=graph)


@dataclass
class RealizabilityVerdict:
    status: str  # "Realized" | "Unknown"
    certificate: Packing | None
    restarts_used: int
    best_residual: float
    budget: SolverConfig = field(default=None)

    @property
    def realized(self):
        return self.status == "Realized"

    def to_json(self):
        return {
            "status": self.status,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "restarts_used": self.restarts_used,
            "best_residual": self.best_residual,
            "budget": self.budget.to_json() if self.budget else None,
        }


def _pair_arrays(g):
    ii, jj, isedge = [], [], []
    edges = set(g.edges)
    for i in range(g.n):
        for j in range(i + 1, g.n):
            ii.append(i)
            jj.append(j)
            isedge.append((i, j) in edges)
    return (
        np.array(ii, dtype=np.int32),
        np.array(jj, dtype=np.int32),
        np.array(isedge, dtype=np.uint8),
    )


def objective(centers, g):
    """Embedding objective: zero iff centers realize g exactly."""
    x = np.asarray(centers, dtype=np.float64)
    if x.shape != (g.n, 3):
        raise DimensionMismatch("expected (%d, 3), got %s" % (g.n, x.shape))
    if g.n < 2:
        return 0.0
    ii, jj, isedge = _pair_arrays(g)
    return kernels.objective(np.ascontiguousarray(x), ii, jj, isedge)


def objective_grad(centers, g):
    x = np.ascontiguousarray(centers, dtype=np.float64)
    if g.n < 2:
        return 0.0, np.zeros_like(x)
    ii, jj, isedge = _pair_arrays(g)
    return kernels.objective_grad(x, ii, jj, isedge)


def verify_certificate(p, edge_tol=1e-9, overlap_tol=1e-9):
    """Independent check of both packing invariants by direct distance
    evaluation; shares no code with the solver."""
    centers = [tuple(float(v) for v in row) for row in p.centers]
    if len(centers) != p.graph.n:
        raise DimensionMismatch(
            "%d centers for graph on %d vertices" % (len(centers), p.graph.n)
        )
    edges = set(p.graph.edges)
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            d = math.dist(centers[i], centers[j])
            if (i, j) in edges:
                if abs(d - 2.0) > edge_tol:
                    return False
            else:
                if d < 2.0 - overlap_tol:
                    return False
    return True


def _gauge_fix(pts):
    """Rigid motion placing center 0 at the origin, center 1 on +x and
    center 2 in the upper xy half-plane (when those centers exist)."""
    x = np.array(pts, dtype=float)
    n = len(x)
    x -= x[0]
    if n < 2:
        return x
    e1 = x[1]
    if np.linalg.norm(e1) < 1e-12:
        return x
    e1 = e1 / np.linalg.norm(e1)
    ref = x[2] if n >= 3 else np.array([0.0, 0.0, 1.0])
    e2 = ref - np.dot(ref, e1) * e1
    if np.linalg.norm(e2) < 1e-9:
        # collinear: any completion of the frame will do
        trial = np.array([1.0, 0.0, 0.0])
        if abs(np.dot(trial, e1)) > 0.9:
            trial = np.array([0.0, 1.0, 0.0])
        e2 = trial - np.dot(trial, e1) * e1
    e2 = e2 / np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    R = np.stack([e1, e2, e3])  # rows
    return x @ R.T


def _free_coordinate_indices(n):
    """Flat indices into (n,3) left free after pinning the 6 rigid dof."""
    pinned = set()
    if n >= 1:
        pinned.update({0, 1, 2})
    if n >= 2:
        pinned.update({4, 5})
    if n >= 3:
        pinned.add(8)
    return [k for k in range(3 * n) if k not in pinned]


def _polish(pts, g, max_iter=80):
    """Gauss-Newton on the active constraint set with gauge fixing.

    Edge constraints are equalities (|ci-cj|^2 = 4); a non-edge joins the
    active set only while violated.  Returns polished centers.
    """
    x = _gauge_fix(pts)
    n = g.n
    free = _free_coordinate_indices(n)
    edges = list(g.edges)
    nonedges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if not g.has_edge(i, j)
    ]
    for _ in range(max_iter):
        rows = []
        res = []
        for i, j in edges:
            d = x[i] - x[j]
            res.append(float(np.dot(d, d)) - 4.0)
            rows.append((i, j, d))
        for i, j in nonedges:
            d = x[i] - x[j]
            s = float(np.dot(d, d))
            if s < 4.0:
                res.append(s - 4.0)
                rows.append((i, j, d))
        res = np.array(res)
        if res.size == 0 or np.max(np.abs(res)) < 1e-13:
            break
        J = np.zeros((len(rows), 3 * n))
        for r, (i, j, d) in enumerate(rows):
            J[r, 3 * i : 3 * i + 3] = 2.0 * d
            J[r, 3 * j : 3 * j + 3] = -2.0 * d
        Jf = J[:, free]
        step, *_ = np.linalg.lstsq(Jf, -res, rcond=None)
        scale = 1.0
        base = float(np.dot(res, res))
        for _ in range(20):
            xt = x.copy()
            flat = xt.reshape(-1)
            flat[free] += scale * step
            if _constraint_norm(xt, edges, nonedges) < base:
                x = xt
                break
            scale *= 0.5
        else:
            break
    return x


def _constraint_norm(x, edges, nonedges):
    total = 0.0
    for i, j in edges:
        d = x[i] - x[j]
        total += (float(np.dot(d, d)) - 4.0) ** 2
    for i, j in nonedges:
        d = x[i] - x[j]
        s = float(np.dot(d, d))
        if s < 4.0:
            total += (s - 4.0) ** 2
    return total


def _graph_seed_key(g):
    return int(g.canonical_hash[:16], 16)


def _initial_points(g, cfg, restarts):
    """Uniform starts in a cube of side 2 n^(1/3); one spawned RNG stream
    per restart so thread count cannot change the draw."""
    n = g.n
    side = 2.0 * n ** (1.0 / 3.0)
    key = _graph_seed_key(g)
    out = np.empty((restarts, n, 3))
    for r in range(restarts):
        ss = np.random.SeedSequence(entropy=(cfg.seed, key), spawn_key=(r,))
        rng = np.random.default_rng(ss)
        out[r] = rng.uniform(-side / 2.0, side / 2.0, size=(n, 3))
    return out


def embed(g, cfg=None):
    """Budgeted realizability search for contact graph g.

    Realized comes with a polished, independently verified certificate;
    Unknown records the exhausted budget and the best residual seen.
    Deterministic given (g, cfg).
    """
    cfg = cfg or SolverConfig()
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    if n == 1:
        pack = Packing(centers=np.zeros((1, 3)), graph=g, seed=cfg.seed,
                       restarts_used=0)
        return RealizabilityVerdict("Realized", pack, 0, 0.0, cfg)
    ii, jj, isedge = _pair_arrays(g)
    inits = _initial_points(g, cfg, cfg.restarts)
    best_f = math.inf
    start = 0
    fall = np.full(cfg.restarts, np.inf)
    while start < cfg.restarts:
        stop, fout = kernels.descend_batch(
            inits, ii, jj, isedge, cfg.iters, POLISH_TRIGGER, start=start
        )
        done = cfg.restarts if stop < 0 else stop + 1
        fall[start:done] = fout[start:done]
        if stop < 0:
            break
        if cfg.polish:
            polished = _polish(inits[stop], g)
        else:
            polished = inits[stop]
        pack = Packing(centers=polished, graph=g, seed=cfg.seed,
                       restarts_used=stop + 1)
        if verify_certificate(pack, cfg.edge_tol, cfg.overlap_tol):
            best_f = min(best_f, float(np.min(fall[: done])))
            return RealizabilityVerdict(
                "Realized", pack, stop + 1, 0.0, cfg
            )
        fall[stop] = objective(inits[stop], g)
        start = stop + 1
    best_f = float(np.min(fall))
    return RealizabilityVerdict(
        "Unknown", None, cfg.restarts, math.sqrt(max(best_f, 0.0)), cfg
    )


# ---------------------------------------------------------------------------
# close-packed lower-bound construction
#
# The FCC stacking alone provably caps at 8 contacts for n=5, 28 for n=11
# and 32 for n=12 (exact maximization over a generous patch), below the
# best known clusters (double tetrahedron etc.), which live in HCP-type
# stackings.  Both stacking words are searched and the better result wins.

STACKING_WORDS = ("ABC", "AB")  # FCC and HCP

_LAYER_OFFSETS = {
    "A": (0.0, 0.0),
    "B": (0.5, math.sqrt(3.0) / 6.0),
    "C": (1.0, math.sqrt(3.0) / 3.0),
}


def _stack_sites(word, radius=2.6):
    """Close-packed lattice patch for a stacking word, NN distance 1."""
    h = math.sqrt(2.0 / 3.0)
    half = math.sqrt(3.0) / 2.0
    L = len(word)
    pts = []
    for li in range(-L, L + 1):
        ox, oy = _LAYER_OFFSETS[word[li % L]]
        z = li * h
        for a in range(-4, 5):
            for b in range(-4, 5):
                x = a + 0.5 * b + ox
                y = half * b + oy
                if x * x + y * y + z * z <= radius * radius:
                    pts.append((x, y, z))
    pts.sort(key=lambda p: (p[0] ** 2 + p[1] ** 2 + p[2] ** 2, p))
    return np.array(pts)


def _site_adjacency(pts):
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt((diff * diff).sum(axis=2))
    return np.abs(d - 1.0) < 1e-9


def _contacts(mask, adj):
    return int(adj[np.ix_(mask, mask)].sum()) // 2


def _swap_improve(mask, adj):
    """Exhaustive single-site swaps until no swap adds a contact."""
    improved = True
    while improved:
        improved = False
        deg = adj[:, mask].sum(axis=1)
        inside = np.flatnonzero(mask)
        outside = np.flatnonzero(~mask)
        for v in inside:
            better = outside[deg[outside] - adj[v, outside] > deg[v]]
            if len(better):
                mask[v] = False
                mask[better[0]] = True
                improved = True
                break
    return mask


def _greedy_cluster(n, adj, rng, trials):
    """Jittered greedy growth + swap descent, best of `trials` runs."""
    M = adj.shape[0]
    best_mask, best_score = None, -1
    for _ in range(trials):
        mask = np.zeros(M, dtype=bool)
        mask[int(rng.integers(0, M))] = True
        while int(mask.sum()) < n:
            gains = adj[:, mask].sum(axis=1).astype(float)
            gains[mask] = -1.0
            gains += rng.random(M) * 0.5  # tie jitter
            mask[int(np.argmax(gains))] = True
        mask = _swap_improve(mask, adj)
        score = _contacts(mask, adj)
        if score > best_score:
            best_score, best_mask = score, mask.copy()
    return best_mask, best_score


def greedy_fcc_lower_bound(n, seed=0, trials=400, radius=2.6):
    """Select n close-packed lattice sites maximizing touching pairs.

    Deterministic given seed.  Returns a Packing whose coordinates are
    lattice sites scaled so the touching distance is 2; the contact count
    is exact (lattice distances, no solver involved).
    """
    if not 1 <= n <= 13:
        raise ValueError("1 <= n <= 13")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, n)))
    best = None
    for word in STACKING_WORDS:
        pts = _stack_sites(word, radius)
        adj = _site_adjacency(pts)
        mask, score = _greedy_cluster(n, adj, rng, trials)
        if best is None or score > best[0]:
            best = (score, pts, adj, mask)
    _, pts, adj, mask = best
    idx = np.flatnonzero(mask)
    arr = pts[mask] * 2.0
    arr -= arr.mean(axis=0)
    edges = [
        (a, b)
        for a in range(len(idx))
        for b in range(a + 1, len(idx))
        if adj[idx[a], idx[b]]
    ]
    g = ContactGraph.from_edges(n, edges)
    return Packing(centers=arr, graph=g, seed=seed, restarts_used=0)


def load_certificate(path):
    with open(path) as fh:
        obj = json.load(fh)
    for key in ("n", "edges", "centers"):
        if key not in obj:
            raise KeyError("certificate missing field %r" % key)
    return Packing.from_json(obj)
