"""
Refutation runs and contact-number reports, backed by a persistent
content-addressed ledger.

An upper bound claimed here is always "numerical refutation at budget B":
every candidate graph returned Unknown.  Realized entries are permanent;
rerunning with a warm ledger changes no verdicts.
"""

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .degseq import enumerate_sequences
from .graphenum import enumerate_graphs
from .realize import (
    SolverConfig,
    TOOL_VERSION,
    Packing,
    embed,
    greedy_fcc_lower_bound,
    verify_certificate,
)


class BudgetExceeded(RuntimeError):
    """Wall-time budget ran out; .partial holds the fragment so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class RefutationLedger:
    """Append-only newline-delimited JSON records keyed by canonical hash.

    One file per n under the ledger directory.  A Realized record is never
    overwritten; re-recording an Unknown verdict appends (append-only) but
    reads resolve to the strongest entry.
    """

    def __init__(self, root):
        self.root = root
        os.makedirs(root, exist_ok=True)
        self._entries = {}
        self._loaded = set()

    def _path(self, n):
        return os.path.join(self.root, "n%d.ndjson" % n)

    def _load(self, n):
        if n in self._loaded:
            return
        self._loaded.add(n)
        path = self._path(n)
        if not os.path.exists(path):
            return
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                self._absorb(rec)

    def _absorb(self, rec):
        key = rec["hash"]
        prev = self._entries.get(key)
        if prev is not None and prev["verdict"] == "Realized":
            return
        if (
            prev is not None
            and rec["verdict"] == "Unknown"
            and prev["verdict"] == "Unknown"
        ):
            pb, rb = prev["budget"], rec["budget"]
            if (pb["restarts"], pb["iters"]) >= (rb["restarts"], rb["iters"]):
                return
        self._entries[key] = rec

    def get(self, n, key):
        self._load(n)
        return self._entries.get(key)

    def record(self, n, g, verdict):
        """Write one verdict atomically (single line append + flush)."""
        self._load(n)
        prev = self._entries.get(g.canonical_hash)
        if prev is not None and prev["verdict"] == "Realized":
            return prev
        rec = {
            "hash": g.canonical_hash,
            "n": n,
            "edges": [list(e) for e in g.canonical_edges],
            "verdict": verdict.status,
            "best_residual": verdict.best_residual,
            "restarts_used": verdict.restarts_used,
            "budget": {
                "restarts": verdict.budget.restarts,
                "iters": verdict.budget.iters,
                "seed": verdict.budget.seed,
            },
            "certificate": (
                verdict.certificate.to_json() if verdict.certificate else None
            ),
            "timestamp": time.time(),
            "tool_version": TOOL_VERSION,
        }
        with open(self._path(n), "a") as fh:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
            fh.flush()
        self._absorb(rec)
        return rec

    def covers(self, rec, cfg):
        """Is a prior record strong enough to reuse at this budget?"""
        if rec is None:
            return False
        if rec["verdict"] == "Realized":
            return True
        b = rec["budget"]
        return b["restarts"] >= cfg.restarts and b["iters"] >= cfg.iters


@dataclass
class SearchReport:
    n: int
    lower_bound: int
    lower_certificate: Packing
    upper_bound_refuted: int | None
    closed: bool
    verdict_counts: dict  # sequence string -> {graphs, realized, unknown}
    budget: SolverConfig
    wall_time: float
    fragments: list = field(default_factory=list)

    @property
    def value(self):
        return self.lower_bound if self.closed else None

    def to_json(self):
        return {
            "n": self.n,
            "lower_bound": self.lower_bound,
            "lower_certificate": self.lower_certificate.to_json(),
            "upper_bound_refuted": self.upper_bound_refuted,
            "closed": self.closed,
            "claim": (
                "C(%d) = %d (upper bound is numerical refutation at the "
                "stated budget, not a proof)" % (self.n, self.lower_bound)
                if self.closed
                else "C(%d) >= %d (upper bound open)" % (self.n, self.lower_bound)
            ),
            "verdict_counts": self.verdict_counts,
            "budget": self.budget.to_json(),
            "wall_time": self.wall_time,
            "fragments": self.fragments,
        }

    def to_text(self):
        lines = [
            "n\t%d" % self.n,
            "lower_bound\t%d" % self.lower_bound,
            "upper_bound\t%s"
            % (
                "refuted_at_%d" % self.upper_bound_refuted
                if self.upper_bound_refuted is not None
                else "open"
            ),
            "closed\t%s" % ("yes" if self.closed else "no"),
            "budget\trestarts=%d iters=%d seed=%d"
            % (self.budget.restarts, self.budget.iters, self.budget.seed),
            "wall_time\t%.2f" % self.wall_time,
            "",
            "sequence\tgraphs\trealized\tunknown",
        ]
        for seq, counts in self.verdict_counts.items():
            lines.append(
                "%s\t%d\t%d\t%d"
                % (seq, counts["graphs"], counts["realized"], counts["unknown"])
            )
        return "\n".join(lines) + "\n"


def _seq_key(seq):
    return "(" + ",".join(str(d) for d in seq) + ")"


def refute(n, m, cfg=None, ledger=None, threads=1, max_wall_time=None):
    """Embed every isomorphism class of every graphical degree sequence
    with degree sum 2m; returns the per-sequence verdict tally.

    Refutation is claimed only when zero classes realized.  Order:
    sequences descending by max degree, classes in enumeration order.
    """
    cfg = cfg or SolverConfig()
    t0 = time.time()
    seqs = enumerate_sequences(n, m)
    counts = {}
    realized_certs = []
    total = {"graphs": 0, "realized": 0, "unknown": 0}

    def check_budget():
        if max_wall_time is not None and time.time() - t0 > max_wall_time:
            raise BudgetExceeded(
                "refute(%d, %d) exceeded %.0fs" % (n, m, max_wall_time),
                partial=_fragment(),
            )

    def _fragment():
        return {
            "n": n,
            "m": m,
            "sequences": counts,
            "totals": dict(total),
            "refuted": total["realized"] == 0,
            "budget": cfg.to_json(),
            "wall_time": time.time() - t0,
        }

    def task(g):
        rec = ledger.get(n, g.canonical_hash) if ledger else None
        if ledger and ledger.covers(rec, cfg):
            return g, rec
        verdict = embed(g, cfg)
        if ledger:
            rec = ledger.record(n, g, verdict)
            return g, rec
        return g, {
            "verdict": verdict.status,
            "certificate": (
                verdict.certificate.to_json() if verdict.certificate else None
            ),
        }

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for seq in seqs:
            tally = {"graphs": 0, "realized": 0, "unknown": 0}
            counts[_seq_key(seq)] = tally
            graphs = enumerate_graphs(seq)
            if pool is not None:
                results = pool.map(task, graphs)
            else:
                results = map(task, graphs)
            for g, rec in results:
                tally["graphs"] += 1
                total["graphs"] += 1
                if rec["verdict"] == "Realized":
                    tally["realized"] += 1
                    total["realized"] += 1
                    realized_certs.append(rec["certificate"])
                else:
                    tally["unknown"] += 1
                    total["unknown"] += 1
                check_budget()
    finally:
        if pool is not None:
            pool.shutdown()
    frag = _fragment()
    frag["realized_certificates"] = realized_certs
    return frag


def contact_number(n, cfg=None, ledger=None, threads=1, allow_large=False,
                   max_wall_time=None):
    """Lower bound by FCC construction, upper bound by refutation at
    m = lower_bound + 1; the value closes when refutation succeeds."""
    if not 1 <= n <= 13:
        raise ValueError("1 <= n <= 13")
    cfg = cfg or SolverConfig()
    t0 = time.time()
    witness = greedy_fcc_lower_bound(n, seed=cfg.seed)
    if not verify_certificate(witness, cfg.edge_tol, cfg.overlap_tol):
        raise AssertionError("FCC witness failed verification")
    lower = witness.contact_count()
    fragments = []
    counts = {}
    refuted = None
    closed = False
    if n == 1:
        closed = True
    elif n <= 8 or allow_large:
        while True:
            frag = refute(
                n, lower + 1, cfg, ledger, threads=threads,
                max_wall_time=max_wall_time,
            )
            fragments.append({k: v for k, v in frag.items()
                              if k != "realized_certificates"})
            counts.update(frag["sequences"])
            if frag["refuted"]:
                refuted = lower + 1
                closed = True
                break
            # a candidate realized: the lower bound was not tight
            best = max(
                frag["realized_certificates"], key=lambda c: len(c["edges"])
            )
            witness = Packing.from_json(best)
            lower = witness.contact_count()
    return SearchReport(
        n=n,
        lower_bound=lower,
        lower_certificate=witness,
        upper_bound_refuted=refuted,
        closed=closed,
        verdict_counts=counts,
        budget=cfg,
        wall_time=time.time() - t0,
        fragments=fragments,
    )
