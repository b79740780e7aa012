"""contactkit command line: solve / refute / audit / export / bench.

Every run writes a manifest (command line, seed, budgets, tool version,
output paths, wall time) next to its outputs so it can be replayed.

Exit codes: solve 0=closed 2=open; refute 0=all Unknown 3=counterexample
realized; audit 0=report written; 1=invalid arguments everywhere.
"""

import hashlib
import json
import os
import sys
import time

import click

from . import __version__, bench as bench_mod
from .degseq import UnsupportedSize, build_case_tree
from .lemma_audit import UnsupportedLemma, audit as run_audit, resolve
from .realize import Packing, SolverConfig, load_certificate, verify_certificate
from .search import RefutationLedger, contact_number, refute as run_refute


def _config(seed, restarts, iters, extended):
    if extended:
        restarts = max(restarts, 500)
    return SolverConfig(restarts=restarts, iters=iters, seed=seed)


def _write(path, text):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _manifest(out_dir, t0, outputs, cfg=None):
    man = {
        "command": sys.argv,
        "seed": cfg.seed if cfg else None,
        "budget": cfg.to_json() if cfg else None,
        "tool_version": __version__,
        "input_hashes": {
            "argv": hashlib.sha256(" ".join(sys.argv).encode()).hexdigest()
        },
        "outputs": outputs,
        "wall_time": time.time() - t0,
    }
    return _write(
        os.path.join(out_dir, "manifest.json"), json.dumps(man, indent=2) + "\n"
    )


budget_options = [
    click.option("--seed", default=0, show_default=True, type=int),
    click.option("--restarts", default=200, show_default=True, type=int),
    click.option("--iters", default=2000, show_default=True, type=int),
    click.option("--threads", default=os.cpu_count() or 1, show_default=True,
                 type=int),
    click.option("--cache", "cache_dir", default="./ledger",
                 show_default=True, type=click.Path()),
    click.option("--out", "out_dir", default="./out", show_default=True,
                 type=click.Path()),
    click.option("--extended", is_flag=True,
                 help="extended budget (at least 500 restarts)"),
]


def with_budget(f):
    for opt in reversed(budget_options):
        f = opt(f)
    return f


@click.group()
@click.version_option(__version__)
def main():
    """Contact numbers of congruent sphere packings."""


@main.command()
@click.option("--n", "n", required=True, type=int)
@click.option("--unbounded", is_flag=True,
              help="attempt upper-bound refutation even for n >= 9")
@with_budget
def solve(n, unbounded, seed, restarts, iters, threads, cache_dir, out_dir,
          extended):
    """Compute C(n): FCC lower bound plus refutation of lower_bound+1."""
    t0 = time.time()
    if not 1 <= n <= 13:
        click.echo("need 1 <= n <= 13", err=True)
        sys.exit(1)
    cfg = _config(seed, restarts, iters, extended)
    ledger = RefutationLedger(cache_dir)
    report = contact_number(n, cfg, ledger, threads=threads,
                            allow_large=unbounded)
    outputs = []
    base = os.path.join(out_dir, "solve-n%d" % n)
    outputs.append(_write(base + ".json",
                          json.dumps(report.to_json(), indent=2) + "\n"))
    outputs.append(_write(base + ".txt", report.to_text()))
    outputs.append(_write(
        base + "-witness.json",
        json.dumps(report.lower_certificate.to_json(), indent=2) + "\n",
    ))
    _manifest(out_dir, t0, outputs, cfg)
    if report.closed:
        if report.upper_bound_refuted is None:
            click.echo("C(%d) = %d (trivial)" % (n, report.lower_bound))
        else:
            click.echo(
                "C(%d) = %d (refuted %d at budget restarts=%d iters=%d)"
                % (n, report.lower_bound, report.upper_bound_refuted,
                   cfg.restarts, cfg.iters))
        sys.exit(0)
    click.echo("C(%d) >= %d, upper bound open" % (n, report.lower_bound))
    sys.exit(2)


@main.command()
@click.option("--n", "n", required=True, type=int)
@click.option("--m", "m", required=True, type=int)
@click.option("--case-tree", is_flag=True,
              help="also emit the nested case tree with its diff report")
@with_budget
def refute(n, m, case_tree, seed, restarts, iters, threads, cache_dir,
           out_dir, extended):
    """Try to refute m contacts among n spheres (exit 3 if realized)."""
    t0 = time.time()
    if n < 1 or m < 0:
        click.echo("need n >= 1 and m >= 0", err=True)
        sys.exit(1)
    if n > 8 and not extended:
        click.echo("n > 8 needs --extended (unbounded runtime)", err=True)
        sys.exit(1)
    cfg = _config(seed, restarts, iters, extended)
    ledger = RefutationLedger(cache_dir)
    frag = run_refute(n, m, cfg, ledger, threads=threads)
    outputs = []
    base = os.path.join(out_dir, "refute-n%d-m%d" % (n, m))
    outputs.append(_write(base + ".json", json.dumps(frag, indent=2) + "\n"))
    if case_tree:
        try:
            tree = build_case_tree(n, m)
            outputs.append(_write(
                base + "-casetree.json",
                json.dumps(tree.to_json(), indent=2) + "\n",
            ))
        except UnsupportedSize as exc:
            click.echo("case tree skipped: %s" % exc, err=True)
    _manifest(out_dir, t0, outputs, cfg)
    if frag["refuted"]:
        click.echo(
            "refuted: %d graphs all Unknown at budget restarts=%d iters=%d "
            "(numerical refutation, not a proof)"
            % (frag["totals"]["graphs"], cfg.restarts, cfg.iters)
        )
        sys.exit(0)
    cert_path = base + "-counterexample.json"
    _write(cert_path, json.dumps(frag["realized_certificates"][0], indent=2))
    click.echo("REALIZED: %d contacts are achievable, certificate at %s"
               % (m, cert_path))
    sys.exit(3)


@main.command("audit")
@click.option("--lemma", required=True,
              help="L1..L6, L5a, L5b, or T2-step")
@click.option("--n", "n", type=int, default=None,
              help="override (informational; each lemma fixes its n)")
@with_budget
def audit_cmd(lemma, n, seed, restarts, iters, threads, cache_dir, out_dir,
              extended):
    """Embed the lemma's forbidden configurations, both variants."""
    t0 = time.time()
    cfg = _config(seed, restarts, iters, extended)
    try:
        preds = resolve(lemma)
    except UnsupportedLemma:
        click.echo("unsupported lemma %r (known: %s)"
                   % (lemma, "L1..L6, L5a, L5b, T2-step"), err=True)
        sys.exit(1)
    if n is not None and any(p.n != n for p in preds):
        click.echo("lemma %s is stated at n=%d" % (lemma, preds[0].n),
                   err=True)
        sys.exit(1)
    ledger = RefutationLedger(cache_dir)
    reports = run_audit(lemma, cfg, ledger)
    outputs = []
    payload = [r.to_json() for r in reports]
    base = os.path.join(out_dir, "audit-%s" % lemma)
    outputs.append(_write(base + ".json", json.dumps(payload, indent=2) + "\n"))
    _manifest(out_dir, t0, outputs, cfg)
    for r in reports:
        status = ("supported" if r.supports_lemma
                  else "COUNTEREXAMPLE FOUND (%d)" % len(r.realized))
        click.echo("%s [%s]: %d graphs tested, %s"
                   % (r.lemma, r.variant, r.graphs_tested, status))
    sys.exit(0)


@main.command()
@click.argument("cert", type=click.Path(exists=True))
@click.option("--format", "fmt", default="xyz", show_default=True,
              type=click.Choice(["xyz", "json"]))
@click.option("--out", "out_path", default=None, type=click.Path())
def export(cert, fmt, out_path):
    """Convert a certificate JSON to XYZ (or re-emit normalized JSON)."""
    try:
        pack = load_certificate(cert)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        click.echo("invalid certificate %s: %s" % (cert, exc), err=True)
        sys.exit(1)
    if out_path is None:
        stem = os.path.splitext(cert)[0]
        out_path = stem + ("." + fmt)
    if fmt == "xyz":
        _write(out_path, pack.to_xyz())
    else:
        _write(out_path, json.dumps(pack.to_json(), indent=2) + "\n")
    click.echo(out_path)
    sys.exit(0)


@main.command("verify")
@click.argument("cert", type=click.Path(exists=True))
@click.option("--edge-tol", default=1e-9, show_default=True, type=float)
@click.option("--overlap-tol", default=1e-9, show_default=True, type=float)
def verify_cmd(cert, edge_tol, overlap_tol):
    """Re-check a certificate by direct distance evaluation."""
    try:
        pack = load_certificate(cert)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        click.echo("invalid certificate %s: %s" % (cert, exc), err=True)
        sys.exit(1)
    ok = verify_certificate(pack, edge_tol, overlap_tol)
    click.echo("valid" if ok else "INVALID")
    sys.exit(0 if ok else 3)


@main.command("bench")
@click.option("--restarts", default=50, show_default=True, type=int)
@click.option("--iters", default=2000, show_default=True, type=int)
def bench_cmd(restarts, iters):
    """Compare compiled and pure kernel backends."""
    results = bench_mod.run(restarts=restarts, iters=iters)
    for case, per in results.items():
        for backend, secs in per.items():
            click.echo("%s\t%s\t%.3f" % (case, backend, secs))
        if {"pure", "compiled"} <= per.keys():
            click.echo("%s\tspeedup\t%.1fx"
                       % (case, per["pure"] / per["compiled"]))


if __name__ == "__main__":
    main()
