"""Acceptance gate: one test per acceptance criterion.

Each test prints exactly one `ACCEPTANCE <k>: PASS/FAIL` line (run with
`pytest tests/test_acceptance.py -s` to see them live).  Criteria share a
session ledger so verdicts computed once are reused, and all solver runs
use seed 42.
"""

import itertools
import json

import numpy as np
import pytest

from contactkit.degseq import build_case_tree, enumerate_sequences, is_graphical
from contactkit.graphenum import ContactGraph
from contactkit.lemma_audit import LEMMAS, audit
from contactkit.realize import (
    Packing,
    SolverConfig,
    embed,
    greedy_fcc_lower_bound,
    objective,
    objective_grad,
    verify_certificate,
)
from contactkit.search import RefutationLedger, contact_number, refute

CFG = SolverConfig(restarts=200, iters=2000, seed=42)
EXTENDED = SolverConfig(restarts=500, iters=2000, seed=42)


@pytest.fixture(scope="session")
def ledger(tmp_path_factory):
    return RefutationLedger(str(tmp_path_factory.mktemp("acceptance-ledger")))


def _report(k, ok, detail):
    print("\nACCEPTANCE %d: %s (%s)" % (k, "PASS" if ok else "FAIL", detail))
    assert ok, detail


def _exhaustive_contact_number(n, cfg):
    """Independent check for tiny n: embed every isomorphism class of
    every graph on n labeled vertices directly."""
    best = 0
    pairs = list(itertools.combinations(range(n), 2))
    seen = set()
    for mask in range(1 << len(pairs)):
        edges = [pairs[p] for p in range(len(pairs)) if mask >> p & 1]
        if len(edges) <= best:
            continue
        g = ContactGraph.from_edges(n, edges)
        if g.canonical_hash in seen:
            continue
        seen.add(g.canonical_hash)
        if embed(g, cfg).realized:
            best = len(edges)
    return best


def test_criterion_1_closed_small_values(ledger):
    expected = {2: 1, 3: 3, 4: 6, 5: 9}
    got = {}
    for n in expected:
        rep = contact_number(n, CFG, ledger)
        assert rep.closed, "C(%d) did not close" % n
        got[n] = rep.lower_bound
    quick = SolverConfig(restarts=60, iters=1500, seed=42)
    independent = {n: _exhaustive_contact_number(n, quick) for n in (2, 3, 4)}
    ok = got == expected and all(independent[n] == expected[n]
                                 for n in independent)
    _report(1, ok, "C(2..5)=%s, exhaustive n<=4 check %s"
            % (sorted(got.values()), sorted(independent.values())))


def test_criterion_2_c6(ledger):
    rep = contact_number(6, CFG, ledger)
    witness_ok = (
        rep.lower_certificate.contact_count() == 12
        and verify_certificate(rep.lower_certificate, 1e-9, 1e-9)
    )
    frag = refute(6, 13, CFG, ledger)
    ok = (witness_ok and rep.closed and rep.lower_bound == 12
          and frag["refuted"] and frag["totals"]["realized"] == 0)
    _report(2, ok, "witness 12 contacts verified at 1e-9; refute(6,13): "
            "%d graphs, %d realized"
            % (frag["totals"]["graphs"], frag["totals"]["realized"]))


def test_criterion_3_c7(ledger):
    witness = greedy_fcc_lower_bound(7, seed=CFG.seed)
    frag = refute(7, 16, CFG, ledger)
    covered = set(frag["sequences"])
    wanted = {
        "(" + ",".join(map(str, s)) + ")" for s in enumerate_sequences(7, 16)
    }
    diff = build_case_tree(7, 16).to_json()
    ok = (witness.contact_count() == 15
          and verify_certificate(witness, 1e-9, 1e-9)
          and covered == wanted
          and frag["refuted"] and frag["totals"]["realized"] == 0
          and "missing" in diff and "extras" in diff)
    _report(3, ok, "lower bound 15; refute(7,16): %d sequences / %d graphs, "
            "%d realized; diff report: %d paper-listed, %d extras, %d missing"
            % (len(covered), frag["totals"]["graphs"],
               frag["totals"]["realized"], len(diff["paper_listed"]),
               len(diff["extras"]), len(diff["missing"])))


def test_criterion_4_c8_extended_budget(ledger):
    witness = greedy_fcc_lower_bound(8, seed=CFG.seed)
    frag = refute(8, 19, EXTENDED, ledger)
    ok = (witness.contact_count() == 18
          and verify_certificate(witness, 1e-9, 1e-9)
          and frag["refuted"] and frag["totals"]["realized"] == 0)
    _report(4, ok, "lower bound 18; refute(8,19): %d graphs, %d realized, "
            "budget restarts=%d iters=%d seed=%d, %.0fs"
            % (frag["totals"]["graphs"], frag["totals"]["realized"],
               frag["budget"]["restarts"], frag["budget"]["iters"],
               frag["budget"]["seed"], frag["wall_time"]))


def test_criterion_5_large_n_witnesses(ledger):
    targets = {9: 21, 10: 25, 11: 29, 12: 33, 13: 36}
    got = {}
    open_ok = True
    for n, want in targets.items():
        rep = contact_number(n, CFG, ledger)
        got[n] = rep.lower_bound
        claim = rep.to_json()["claim"]
        open_ok &= (not rep.closed and rep.upper_bound_refuted is None
                    and "open" in claim
                    and verify_certificate(rep.lower_certificate, 1e-9, 1e-9))
    ok = got == targets and open_ok
    _report(5, ok, "n=9..13 witnesses %s, upper bounds reported open"
            % sorted(got.values()))


def test_criterion_6_property_suite(rng):
    checks = {}

    # Erdos-Gallai vs exhaustive oracle, all sequences of length <= 7.
    # The oracle is the graph atlas (every graph on <= 7 vertices): a
    # length-L sequence is graphical iff it is the zero-padded degree
    # sequence of some atlas graph.
    nx = pytest.importorskip("networkx")
    atlas = {}
    for g in nx.graph_atlas_g()[1:]:
        seq = tuple(sorted((d for _, d in g.degree()), reverse=True))
        for length in range(len(seq), 8):
            atlas.setdefault(length, set()).add(
                seq + (0,) * (length - len(seq))
            )
    atlas.setdefault(1, set()).add((0,))
    agree = True
    for length in range(1, 8):
        for seq in itertools.combinations_with_replacement(
            range(length - 1, -1, -1), length
        ):
            agree &= is_graphical(seq) == (seq in atlas.get(length, set()))
    checks["erdos_gallai_vs_oracle_len<=7"] = agree

    # canonical-form stability under 1000 random relabelings
    base = ContactGraph.from_edges(
        7, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)]
    )
    stable = True
    for _ in range(1000):
        perm = rng.permutation(7)
        relabeled = ContactGraph.from_edges(
            7, [(int(perm[i]), int(perm[j])) for i, j in base.edges]
        )
        stable &= relabeled.canonical_edges == base.canonical_edges
    checks["canonical_stability_1000_relabelings"] = stable

    # gradient vs central differences <= 1e-6 relative
    g = ContactGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    h = 1e-6
    grad_ok = True
    for _ in range(10):
        x = rng.normal(scale=1.5, size=(5, 3))
        _, grad = objective_grad(x, g)
        num = np.zeros_like(grad)
        for i in range(5):
            for k in range(3):
                xp, xm = x.copy(), x.copy()
                xp[i, k] += h
                xm[i, k] -= h
                num[i, k] = (objective(xp, g) - objective(xm, g)) / (2 * h)
        scale = max(1.0, float(np.abs(grad).max()))
        grad_ok &= float(np.abs(grad - num).max() / scale) <= 1e-6
    checks["gradient_fd_rel<=1e-6"] = grad_ok

    # subgraph monotonicity under random edge deletion
    octa = ContactGraph.from_edges(
        6, [(i, j) for i, j in itertools.combinations(range(6), 2)
            if (i, j) not in {(0, 5), (1, 4), (2, 3)}]
    )
    v = embed(octa, CFG)
    mono = v.realized
    for _ in range(20):
        keep = [e for e in octa.edges if rng.random() < 0.6]
        sub = Packing(centers=v.certificate.centers,
                      graph=ContactGraph.from_edges(6, keep))
        mono &= verify_certificate(sub, CFG.edge_tol, CFG.overlap_tol)
    checks["subgraph_monotonicity"] = mono

    # K5 negative control: 1000 restarts never get below residual 1e-3
    k5 = ContactGraph.from_edges(
        5, list(itertools.combinations(range(5), 2))
    )
    vk5 = embed(k5, SolverConfig(restarts=1000, iters=2000, seed=42))
    checks["k5_negative_control"] = (
        vk5.status == "Unknown" and vk5.best_residual > 1e-3
    )

    # seed determinism, byte for byte
    a = embed(octa, CFG)
    b = embed(octa, CFG)
    checks["seed_determinism"] = (
        json.dumps(a.to_json()) == json.dumps(b.to_json())
    )

    ok = all(checks.values())
    _report(6, ok, "; ".join("%s=%s" % kv for kv in sorted(checks.items())))


def test_criterion_7_lemma_audits(ledger):
    lines = []
    ok = True
    for lid in LEMMAS:
        for rep in audit(lid, CFG, ledger):
            complete = rep.graphs_tested == rep.unknown + len(rep.realized)
            verified = all(
                verify_certificate(Packing.from_json(c), 1e-9, 1e-9)
                for c in rep.counterexamples
            )
            flagged = rep.supports_lemma == (len(rep.realized) == 0)
            ok &= complete and verified and flagged
            lines.append("%s[%s]:%s" % (
                lid, rep.variant,
                "supported" if rep.supports_lemma
                else "%d verified counterexamples" % len(rep.realized)))
    _report(7, ok, "; ".join(lines))
