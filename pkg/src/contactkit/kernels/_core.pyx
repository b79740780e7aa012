# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled descent kernel for the sphere-embedding objective.

Same contract as kernels.pure; this is the hot path (restarts x iterations
of gradient evaluations), everything else stays in Python.
"""

import numpy as np

from libc.math cimport sqrt

BACKEND = "compiled"


cdef double _fg(double[:, ::1] x, int[::1] ii, int[::1] jj,
                unsigned char[::1] isedge, double[:, ::1] g,
                bint want_grad) noexcept nogil:
    cdef Py_ssize_t P = ii.shape[0], n = x.shape[0]
    cdef Py_ssize_t p, i, j, k
    cdef double dx, dy, dz, s, r, c
    cdef double f = 0.0
    if want_grad:
        for i in range(n):
            for k in range(3):
                g[i, k] = 0.0
    for p in range(P):
        i = ii[p]
        j = jj[p]
        dx = x[i, 0] - x[j, 0]
        dy = x[i, 1] - x[j, 1]
        dz = x[i, 2] - x[j, 2]
        s = dx * dx + dy * dy + dz * dz
        if isedge[p]:
            r = s - 4.0
        elif s < 4.0:
            r = s - 4.0
        else:
            continue
        f += r * r
        if want_grad:
            c = 4.0 * r
            g[i, 0] += c * dx
            g[i, 1] += c * dy
            g[i, 2] += c * dz
            g[j, 0] -= c * dx
            g[j, 1] -= c * dy
            g[j, 2] -= c * dz
    return f


def objective(x, ii, jj, isedge):
    """Sum over edges of (|ci-cj|^2-4)^2 plus overlap penalty on non-edges."""
    cdef double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    g = np.empty_like(x, dtype=np.float64)
    cdef double[:, ::1] gv = g
    return _fg(xv, ii, jj, isedge, gv, False)


def objective_grad(x, ii, jj, isedge):
    """Returns (f, grad) with the analytic gradient."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    cdef double[:, ::1] xv = x
    cdef double[:, ::1] gv = g
    f = _fg(xv, ii, jj, isedge, gv, True)
    return f, g


cdef double _descend_one(double[:, ::1] x, int[::1] ii, int[::1] jj,
                         unsigned char[::1] isedge, int iters, double trigger,
                         double[:, ::1] g, double[:, ::1] xt,
                         double[:, ::1] gt) noexcept nogil:
    """Adaptively damped first-order descent, in place.  Returns final f."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, k
    cdef int it
    cdef double f, ft, gn, t
    f = _fg(x, ii, jj, isedge, g, True)
    gn = 0.0
    for i in range(n):
        for k in range(3):
            gn += g[i, k] * g[i, k]
    gn = sqrt(gn)
    if gn < 1e-300:
        return f
    t = 0.1 / gn
    for it in range(iters):
        if f < trigger or t < 1e-17:
            break
        for i in range(n):
            for k in range(3):
                xt[i, k] = x[i, k] - t * g[i, k]
        ft = _fg(xt, ii, jj, isedge, gt, True)
        if ft < f:
            for i in range(n):
                for k in range(3):
                    x[i, k] = xt[i, k]
                    g[i, k] = gt[i, k]
            f = ft
            t *= 1.25
        else:
            t *= 0.5
    return f


def descend_batch(inits, ii, jj, isedge, int iters, double trigger,
                  int start=0):
    """Descend restarts start.. in order, mutating `inits` in place.

    Stops early at the first restart whose final objective drops below
    `trigger` (candidate for Newton polish).  Fills `fout` for every
    restart processed and returns (stop_index or -1, fout).
    """
    cdef double[:, :, ::1] pts = inits
    cdef int[::1] iv = ii
    cdef int[::1] jv = jj
    cdef unsigned char[::1] ev = isedge
    cdef Py_ssize_t R = pts.shape[0], n = pts.shape[1]
    fout = np.full(R, np.inf)
    cdef double[::1] fv = fout
    g = np.empty((n, 3))
    xt = np.empty((n, 3))
    gt = np.empty((n, 3))
    cdef double[:, ::1] gv = g
    cdef double[:, ::1] xtv = xt
    cdef double[:, ::1] gtv = gt
    cdef Py_ssize_t r
    cdef int stop = -1
    with nogil:
        for r in range(start, R):
            fv[r] = _descend_one(pts[r], iv, jv, ev, iters, trigger,
                                 gv, xtv, gtv)
            if fv[r] < trigger:
                stop = <int> r
                break
    return stop, fout
