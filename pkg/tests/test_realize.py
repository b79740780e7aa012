import itertools
import json
import random

import numpy as np
import pytest

from contactkit.graphenum import ContactGraph
from contactkit.realize import (
    DimensionMismatch,
    Packing,
    SolverConfig,
    embed,
    greedy_fcc_lower_bound,
    objective,
    objective_grad,
    verify_certificate,
)

from conftest import complete_graph, octahedron, random_graph, regular_tetrahedron

CFG = SolverConfig(restarts=200, iters=2000, seed=42)


def test_objective_exact_tetrahedron():
    k4 = complete_graph(4)
    assert objective(regular_tetrahedron(2.0), k4) == pytest.approx(0.0, abs=1e-24)


def test_objective_coincident_centers():
    g = ContactGraph.from_edges(2, [(0, 1)])
    x = np.zeros((2, 3))
    assert objective(x, g) == pytest.approx(16.0)  # (0 - 4)^2
    # as a non-edge, coincident centers violate the overlap constraint
    g2 = ContactGraph.from_edges(2, [])
    assert objective(x, g2) == pytest.approx(16.0)


def test_objective_nonedge_far_apart_is_free():
    g = ContactGraph.from_edges(2, [])
    x = np.array([[0.0, 0, 0], [5.0, 0, 0]])
    assert objective(x, g) == 0.0


def test_gradient_matches_central_differences(rng):
    h = 1e-6
    for _ in range(20):
        n = int(rng.integers(3, 8))
        g = random_graph(n, random.Random(int(rng.integers(1 << 30))))
        x = rng.normal(scale=1.5, size=(n, 3))
        f0, grad = objective_grad(x, g)
        num = np.zeros_like(grad)
        for i in range(n):
            for k in range(3):
                xp = x.copy()
                xp[i, k] += h
                xm = x.copy()
                xm[i, k] -= h
                num[i, k] = (objective(xp, g) - objective(xm, g)) / (2 * h)
        scale = max(1.0, float(np.abs(grad).max()))
        assert np.abs(grad - num).max() / scale <= 1e-6


def test_objective_rigid_motion_invariant(rng):
    g = octahedron()
    x = rng.normal(scale=2.0, size=(6, 3))
    f0 = objective(x, g)
    for _ in range(10):
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        t = rng.normal(scale=5.0, size=3)
        assert objective(x @ q.T + t, g) == pytest.approx(f0, rel=1e-12, abs=1e-12)


def test_embed_k4_realized():
    v = embed(complete_graph(4), CFG)
    assert v.realized
    max_edge, _ = v.certificate.residual_stats()
    assert max_edge < 1e-9


def test_embed_octahedron_realized():
    v = embed(octahedron(), CFG)
    assert v.realized
    assert verify_certificate(v.certificate, 1e-9, 1e-9)
    assert v.certificate.contact_count() == 12  # witnesses 12 contacts for n=6


def test_embed_k5_unknown_negative_control():
    cfg = SolverConfig(restarts=1000, iters=2000, seed=1)
    v = embed(complete_graph(5), cfg)
    assert v.status == "Unknown"
    assert v.certificate is None
    assert v.best_residual > 1e-3
    assert v.restarts_used == 1000


def test_embed_single_sphere():
    g = ContactGraph.from_edges(1, [])
    v = embed(g, CFG)
    assert v.realized and v.certificate.contact_count() == 0


def test_embed_seed_determinism():
    g = octahedron()
    cfg = SolverConfig(restarts=50, iters=1000, seed=77)
    a = embed(g, cfg)
    b = embed(g, cfg)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    c = embed(g, SolverConfig(restarts=50, iters=1000, seed=78))
    # different seed may legitimately find a different certificate
    assert c.status == a.status


def test_verify_certificate_rejects_perturbation():
    pts = regular_tetrahedron(2.0)
    pack = Packing(centers=pts, graph=complete_graph(4))
    assert verify_certificate(pack, 1e-9, 1e-9)
    bad = pts.copy()
    bad[0, 0] += 1e-3
    assert not verify_certificate(
        Packing(centers=bad, graph=complete_graph(4)), 1e-9, 1e-9
    )


def test_verify_certificate_dimension_mismatch():
    pack = Packing(centers=np.zeros((3, 3)), graph=complete_graph(4))
    with pytest.raises(DimensionMismatch):
        verify_certificate(pack)


def test_subgraph_monotonicity(rng):
    # a packing realizing G realizes every spanning subgraph of G
    v = embed(octahedron(), CFG)
    edges = list(v.certificate.graph.edges)
    for _ in range(20):
        keep = [e for e in edges if rng.random() < 0.6]
        sub = ContactGraph.from_edges(6, keep)
        pack = Packing(centers=v.certificate.centers, graph=sub)
        assert verify_certificate(pack, CFG.edge_tol, CFG.overlap_tol)


@pytest.mark.parametrize(
    "n,target",
    [(1, 0), (2, 1), (3, 3), (4, 6), (5, 9), (6, 12), (7, 15), (8, 18),
     (9, 21), (10, 25), (11, 29), (12, 33), (13, 36)],
)
def test_greedy_lattice_lower_bound(n, target):
    pack = greedy_fcc_lower_bound(n, seed=0)
    assert pack.contact_count() == target
    assert verify_certificate(pack, 1e-9, 1e-9)


def test_certificate_json_schema():
    v = embed(complete_graph(4), CFG)
    obj = v.certificate.to_json()
    for key in ("n", "edges", "centers", "radius", "max_edge_residual",
                "min_nonedge_gap", "seed", "restarts_used", "tool_version"):
        assert key in obj
    assert obj["radius"] == 1.0
    back = Packing.from_json(obj)
    assert verify_certificate(back, 1e-9, 1e-9)


def test_xyz_roundtrip_preserves_distances():
    v = embed(octahedron(), CFG)
    text = v.certificate.to_xyz()
    lines = text.splitlines()
    assert lines[0] == "6"
    assert lines[1] == "contacts=12"
    assert all(ln.startswith("S ") for ln in lines[2:])
    back = Packing.from_xyz(text, v.certificate.graph)
    a = np.asarray(v.certificate.centers)
    b = np.asarray(back.centers)
    for i, j in itertools.combinations(range(6), 2):
        da = np.linalg.norm(a[i] - a[j])
        db = np.linalg.norm(b[i] - b[j])
        assert abs(da - db) < 1e-12
