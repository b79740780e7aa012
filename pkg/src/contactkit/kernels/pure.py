"""Pure-NumPy fallback for the descent kernel.

Mirrors _core.pyx step for step; used when the compiled extension is not
built (and by the benchmark).  Roughly two orders of magnitude slower.
"""

import numpy as np

BACKEND = "pure"


def _fg(x, ii, jj, isedge, want_grad):
    d = x[ii] - x[jj]
    s = np.einsum("ij,ij->i", d, d)
    active = isedge.astype(bool) | (s < 4.0)
    r = np.where(active, s - 4.0, 0.0)
    f = float(np.dot(r, r))
    if not want_grad:
        return f, None
    c = 4.0 * r
    g = np.zeros_like(x)
    np.add.at(g, ii, c[:, None] * d)
    np.subtract.at(g, jj, c[:, None] * d)
    return f, g


def objective(x, ii, jj, isedge):
    """Sum over edges of (|ci-cj|^2-4)^2 plus overlap penalty on non-edges."""
    f, _ = _fg(np.asarray(x, dtype=np.float64), ii, jj, isedge, False)
    return f


def objective_grad(x, ii, jj, isedge):
    """Returns (f, grad) with the analytic gradient."""
    return _fg(np.asarray(x, dtype=np.float64), ii, jj, isedge, True)


def _descend_one(x, ii, jj, isedge, iters, trigger):
    f, g = _fg(x, ii, jj, isedge, True)
    gn = float(np.sqrt((g * g).sum()))
    if gn < 1e-300:
        return f
    t = 0.1 / gn
    for _ in range(iters):
        if f < trigger or t < 1e-17:
            break
        xt = x - t * g
        ft, gt = _fg(xt, ii, jj, isedge, True)
        if ft < f:
            x[...] = xt
            g = gt
            f = ft
            t *= 1.25
        else:
            t *= 0.5
    return f


def descend_batch(inits, ii, jj, isedge, iters, trigger, start=0):
    """See _core.descend_batch; identical contract."""
    R = inits.shape[0]
    fout = np.full(R, np.inf)
    for r in range(start, R):
        fout[r] = _descend_one(inits[r], ii, jj, isedge, iters, trigger)
        if fout[r] < trigger:
            return r, fout
    return -1, fout
