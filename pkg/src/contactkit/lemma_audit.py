"""
Audits of the six unproven degree-structure lemmas (and the unproven
final counting step at n=6).

Each lemma is negated into a finite family of forbidden graphs; the audit
embeds every family member.  All-Unknown supports the lemma; any Realized
member is a verified counterexample and is flagged, never suppressed.

Two variants run for every lemma: "literal" restricts to graphs meeting
the edge minimum the lemma's hypothesis assumes (>= 16 edges at n=7,
>= 13 at n=6), "unconstrained" drops that minimum.
"""

from dataclasses import dataclass, field
from itertools import combinations

from .degseq import enumerate_sequences, max_degree_cap
from .graphenum import enumerate_graphs, structural_query, vertices_of_degree
from .realize import SolverConfig, embed, verify_certificate


class UnsupportedLemma(ValueError):
    pass


def _count(seq, d):
    return sum(1 for x in seq if x == d)


# --- violation predicates (graph level) ------------------------------------

def _v_l1(g):
    d6 = len(vertices_of_degree(g, 6))
    d5 = len(vertices_of_degree(g, 5))
    return d6 >= 3 or (d6 >= 2 and d5 >= 1)


def _v_l2(g):
    if vertices_of_degree(g, 3):
        return False
    fives = vertices_of_degree(g, 5)
    for v in vertices_of_degree(g, 6):
        if sum(1 for u in fives if g.has_edge(v, u)) >= 2:
            return True
    return False


def _v_l3(g):
    return (
        len(vertices_of_degree(g, 6)) >= 2
        and len(vertices_of_degree(g, 4)) >= 4
    )


def _v_l4(g):
    fives = vertices_of_degree(g, 5)
    if len(fives) < 3:
        return False
    return any(
        any(g.has_edge(v, u) for u in fives) for v in vertices_of_degree(g, 6)
    )


def _v_l5a(g):
    fives = set(vertices_of_degree(g, 5))
    for u, v in combinations(sorted(fives), 2):
        if not g.has_edge(u, v):
            common5 = sum(
                1 for w in fives if w not in (u, v)
                and g.has_edge(u, w) and g.has_edge(v, w)
            )
            if common5 < 3:
                return True
    return False


def _v_l5b(g):
    fives = set(vertices_of_degree(g, 5))
    for v in fives:
        if sum(1 for u in fives if u != v and g.has_edge(v, u)) < 4:
            return True
    return False


def _v_l6(g):
    fives = vertices_of_degree(g, 5)
    fours = vertices_of_degree(g, 4)
    if len(fours) < 2:
        return False
    for u, v in combinations(fives, 2):
        if not g.has_edge(u, v):
            continue
        touching = [
            w for w in fours if g.has_edge(w, u) and g.has_edge(w, v)
        ]
        if len(touching) >= 2:
            return True
    return False


def _v_t2(g):
    return (
        len(vertices_of_degree(g, 5)) == 2
        and len(vertices_of_degree(g, 4)) >= 3
    )


@dataclass
class LemmaPredicate:
    id: str
    n: int
    edge_min: int                  # the hypothesis' minimum edge count
    seq_filter: callable           # cheap necessary condition on sequences
    violation: callable            # graph-level forbidden-configuration test
    statement: str


LEMMAS = {
    "L1": LemmaPredicate(
        "L1", 7, 16,
        lambda s: _count(s, 6) >= 3 or (_count(s, 6) >= 2 and _count(s, 5) >= 1),
        _v_l1,
        "at most two degree-6 vertices; two degree-6 forces no degree-5",
    ),
    "L2": LemmaPredicate(
        "L2", 7, 16,
        lambda s: _count(s, 6) >= 1 and _count(s, 5) >= 2 and _count(s, 3) == 0,
        _v_l2,
        "degree-6 touching two degree-5 vertices forces a degree-3 vertex",
    ),
    "L3": LemmaPredicate(
        "L3", 7, 16,
        lambda s: _count(s, 6) >= 2 and _count(s, 4) >= 4,
        _v_l3,
        "two degree-6 vertices allow at most three degree-4 vertices",
    ),
    "L4": LemmaPredicate(
        "L4", 7, 16,
        lambda s: _count(s, 6) >= 1 and _count(s, 5) >= 3,
        _v_l4,
        "degree-6 touching a degree-5 allows at most one other degree-5",
    ),
    "L5a": LemmaPredicate(
        "L5a", 7, 16,
        lambda s: _count(s, 5) >= 2,
        _v_l5a,
        "non-touching degree-5 pairs share three degree-5 neighbors",
    ),
    "L5b": LemmaPredicate(
        "L5b", 7, 16,
        lambda s: _count(s, 5) >= 1,
        _v_l5b,
        "every degree-5 vertex touches four other degree-5 vertices",
    ),
    "L6": LemmaPredicate(
        "L6", 7, 16,
        lambda s: _count(s, 4) >= 2 and _count(s, 5) >= 2,
        _v_l6,
        "no two degree-4 vertices both touch a touching degree-5 pair",
    ),
    "T2-step": LemmaPredicate(
        "T2-step", 6, 13,
        lambda s: _count(s, 5) == 2 and _count(s, 4) >= 3,
        _v_t2,
        "exactly two degree-5 vertices allow at most two degree-4 vertices",
    ),
}

# "L5" expands to its two independently testable clauses
ALIASES = {"L5": ["L5a", "L5b"]}


@dataclass
class AuditReport:
    lemma: str
    variant: str               # "literal" | "unconstrained"
    graphs_tested: int
    realized: list             # canonical hashes of counterexamples
    unknown: int
    budget: SolverConfig
    counterexamples: list = field(default_factory=list)  # certificates

    @property
    def supports_lemma(self):
        return not self.realized

    def to_json(self):
        return {
            "lemma": self.lemma,
            "variant": self.variant,
            "graphs_tested": self.graphs_tested,
            "realized": self.realized,
            "unknown": self.unknown,
            "budget": self.budget.to_json(),
            "counterexamples": self.counterexamples,
            "supports_lemma": self.supports_lemma,
        }


_class_cache = {}


def _graphs_for(seq):
    if seq not in _class_cache:
        _class_cache[seq] = list(enumerate_graphs(seq))
    return _class_cache[seq]


def violation_family(p, edge_min=None):
    """Every isomorphism class violating lemma p (deterministic order).

    With edge_min set, only graphs with at least that many edges qualify
    (the lemma hypothesis taken literally).
    """
    n = p.n
    cap = max_degree_cap(n)
    max_m = n * (n - 1) // 2
    lo = edge_min if edge_min is not None else 0
    out = []
    for m in range(lo, max_m + 1):
        for seq in enumerate_sequences(n, m):
            if not p.seq_filter(seq):
                continue
            for g in _graphs_for(seq):
                if structural_query(g, p.violation):
                    out.append(g)
    return out


def resolve(lemma_id):
    if lemma_id in ALIASES:
        return [LEMMAS[x] for x in ALIASES[lemma_id]]
    if lemma_id in LEMMAS:
        return [LEMMAS[lemma_id]]
    raise UnsupportedLemma(lemma_id)


def audit(p, cfg=None, ledger=None, variants=("literal", "unconstrained")):
    """Embed every member of the lemma's violation family.

    Returns one AuditReport per variant.  Any Realized member is verified
    independently before being reported as a counterexample.
    """
    if isinstance(p, str):
        preds = resolve(p)
        out = []
        for pred in preds:
            out.extend(audit(pred, cfg, ledger, variants))
        return out
    cfg = cfg or SolverConfig()
    reports = []
    for variant in variants:
        edge_min = p.edge_min if variant == "literal" else None
        family = violation_family(p, edge_min)
        realized = []
        certs = []
        unknown = 0
        for g in family:
            assert structural_query(g, p.violation)
            rec = ledger.get(p.n, g.canonical_hash) if ledger else None
            if ledger and ledger.covers(rec, cfg):
                verdict_status = rec["verdict"]
                cert = rec.get("certificate")
            else:
                verdict = embed(g, cfg)
                if ledger:
                    ledger.record(p.n, g, verdict)
                verdict_status = verdict.status
                cert = (
                    verdict.certificate.to_json()
                    if verdict.certificate
                    else None
                )
                if verdict.certificate is not None:
                    assert verify_certificate(
                        verdict.certificate, cfg.edge_tol, cfg.overlap_tol
                    )
            if verdict_status == "Realized":
                realized.append(g.canonical_hash)
                certs.append(cert)
            else:
                unknown += 1
        reports.append(
            AuditReport(
                lemma=p.id,
                variant=variant,
                graphs_tested=len(family),
                realized=realized,
                unknown=unknown,
                budget=cfg,
                counterexamples=certs,
            )
        )
    return reports
