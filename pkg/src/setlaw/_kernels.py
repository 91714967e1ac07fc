"""Numeric kernels behind the exact polytope calculus.

Every exact distance query is a small dense convex program: a two-phase
simplex solve for the polyhedral norms, a Wolfe min-norm-point iteration
for the Euclidean one.  These inner loops dominate runtime (a single
Hausdorff sweep can issue tens of thousands of solves), so the kernels
are compiled with numba when it is available.  Setting the environment
variable ``SETLAW_NUMBA=0`` selects the pure-numpy fallback path: the
same source, executed without JIT compilation.

All kernels are deterministic: entering variables use Dantzig's rule with
lowest-index tie-breaks (switching to Bland's rule to escape degenerate
stalls), ratio tests keep the lowest row index, and candidate orderings
use stable sorts.
"""

import os

import numpy as np

# norm codes shared with the geometry layer
L1 = 0
L2 = 1
LINF = 2

# solver status codes
OK = 0
INFEASIBLE = 1
UNBOUNDED = 2
ITER_LIMIT = 3

_PIVOT_TOL = 1e-11
_FEAS_TOL = 1e-9
DEFAULT_MAX_ITER = 50_000


def _numba_requested() -> bool:
    flag = os.environ.get("SETLAW_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USING_NUMBA = _numba_requested()

if USING_NUMBA:
    from numba import njit

    def _jit(fn):
        return njit(cache=True)(fn)
else:

    def _jit(fn):
        return fn


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"


def row_norms(x, norm_code):
    """Norms of the rows of a 2-D array under the coded norm."""
    if norm_code == L1:
        return np.abs(x).sum(axis=1)
    if norm_code == L2:
        return np.sqrt((x * x).sum(axis=1))
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = np.abs(x[i]).max()
    return out


def simplex_min(c, a, b, max_iter):
    """Minimize c'x subject to ax = b, x >= 0 by a dense two-phase simplex.

    Rows with negative right-hand sides are flipped internally; one
    artificial variable is attached per row for phase 1.  Returns
    ``(status, x)`` with status OK / INFEASIBLE / UNBOUNDED / ITER_LIMIT.
    """
    k, n = a.shape
    ncols = n + k + 1
    t = np.zeros((k + 1, ncols))
    t[:k, :n] = a
    t[:k, ncols - 1] = b
    for i in range(k):
        if t[i, ncols - 1] < 0.0:
            t[i, :] = -t[i, :]
        t[i, n + i] = 1.0
    basis = np.arange(n, n + k)
    # phase-1 objective: minimize the sum of artificials
    for j in range(ncols):
        t[k, j] = -t[:k, j].sum()
    t[k, n : n + k] = 0.0

    bland_after = 200 + 10 * (n + k)
    for phase in range(2):
        limit = n + k if phase == 0 else n
        it = 0
        while True:
            it += 1
            if it > max_iter:
                return ITER_LIMIT, np.zeros(n)
            red = t[k, :limit]
            if it <= bland_after:
                piv_col = np.argmin(red)
                if red[piv_col] >= -_PIVOT_TOL:
                    break
            else:
                piv_col = -1
                for j in range(limit):
                    if red[j] < -_PIVOT_TOL:
                        piv_col = j
                        break
                if piv_col < 0:
                    break
            col = t[:k, piv_col]
            pos = col > _PIVOT_TOL
            if not pos.any():
                return UNBOUNDED, np.zeros(n)
            ratios = np.where(pos, t[:k, ncols - 1] / np.where(pos, col, 1.0), np.inf)
            piv_row = np.argmin(ratios)
            if it > bland_after:
                # Bland's leaving rule: smallest basis index among tied ratios
                r_star = ratios[piv_row]
                for i2 in range(k):
                    if ratios[i2] <= r_star + 1e-12 and basis[i2] < basis[piv_row]:
                        piv_row = i2
            pv = t[piv_row, piv_col]
            t[piv_row, :] = t[piv_row, :] / pv
            f = t[:, piv_col].copy()
            f[piv_row] = 0.0
            t -= np.outer(f, t[piv_row, :])
            t[:, piv_col] = 0.0
            t[piv_row, piv_col] = 1.0
            basis[piv_row] = piv_col

        if phase == 0:
            if t[k, ncols - 1] < -1e-7:
                return INFEASIBLE, np.zeros(n)
            # drive remaining artificials out of the basis where possible
            for i in range(k):
                if basis[i] >= n:
                    piv_col = -1
                    for j in range(n):
                        if abs(t[i, j]) > 1e-9:
                            piv_col = j
                            break
                    if piv_col >= 0:
                        pv = t[i, piv_col]
                        t[i, :] = t[i, :] / pv
                        f = t[:, piv_col].copy()
                        f[i] = 0.0
                        t -= np.outer(f, t[i, :])
                        t[:, piv_col] = 0.0
                        t[i, piv_col] = 1.0
                        basis[i] = piv_col
            # install the phase-2 objective and reduce it over the basis
            t[k, :] = 0.0
            t[k, :n] = c
            for i in range(k):
                if basis[i] < n:
                    f2 = t[k, basis[i]]
                    if f2 != 0.0:
                        t[k, :] -= f2 * t[i, :]

    x = np.zeros(n)
    for i in range(k):
        if basis[i] < n:
            x[basis[i]] = t[i, ncols - 1]
    return OK, x


def membership_residual(g, p, max_iter):
    """Phase-1 residual of the membership program ``p in conv(rows of g)``.

    Solves min sum(artificials) s.t. g'lam = p, sum(lam) = 1, lam >= 0.
    The optimum is zero exactly when p lies in the hull; it is returned
    so callers can certify membership against a tolerance.  Inputs far
    from unit magnitude are rescaled first, so the residual (and the
    caller's tolerance) is relative to the coordinate scale.
    """
    mag = max(np.abs(g).max(), np.abs(p).max())
    if mag > 0.0 and (mag > 1e3 or mag < 1e-3):
        g = g / mag
        p = p / mag
    m, d = g.shape
    k = d + 1
    ncols = m + k + 1
    t = np.zeros((k + 1, ncols))
    t[:d, :m] = g.T
    t[:d, ncols - 1] = p
    t[d, :m] = 1.0
    t[d, ncols - 1] = 1.0
    for i in range(k):
        if t[i, ncols - 1] < 0.0:
            t[i, :] = -t[i, :]
        t[i, m + i] = 1.0
    basis = np.arange(m, m + k)
    for j in range(ncols):
        t[k, j] = -t[:k, j].sum()
    t[k, m : m + k] = 0.0

    bland_after = 200 + 10 * (m + k)
    it = 0
    while True:
        it += 1
        if it > max_iter:
            return ITER_LIMIT, np.inf
        red = t[k, :m]
        if it <= bland_after:
            piv_col = np.argmin(red)
            if red[piv_col] >= -_PIVOT_TOL:
                break
        else:
            piv_col = -1
            for j in range(m):
                if red[j] < -_PIVOT_TOL:
                    piv_col = j
                    break
            if piv_col < 0:
                break
        col = t[:k, piv_col]
        pos = col > _PIVOT_TOL
        if not pos.any():
            return UNBOUNDED, np.inf
        ratios = np.where(pos, t[:k, ncols - 1] / np.where(pos, col, 1.0), np.inf)
        piv_row = np.argmin(ratios)
        if it > bland_after:
            r_star = ratios[piv_row]
            for i2 in range(k):
                if ratios[i2] <= r_star + 1e-12 and basis[i2] < basis[piv_row]:
                    piv_row = i2
        pv = t[piv_row, piv_col]
        t[piv_row, :] = t[piv_row, :] / pv
        f = t[:, piv_col].copy()
        f[piv_row] = 0.0
        t -= np.outer(f, t[piv_row, :])
        t[:, piv_col] = 0.0
        t[piv_row, piv_col] = 1.0
        basis[piv_row] = piv_col
    return OK, -t[k, ncols - 1]


def min_norm_point(pts, gap_tol, max_iter):
    """Wolfe's algorithm: the least-Euclidean-norm point of conv(rows of pts).

    Finitely convergent on polytopes; ``gap_tol`` bounds the accepted
    duality gap <x,x> - min_i <p_i,x> relative to 1 + <x,x>.
    """
    m, d = pts.shape
    sq = (pts * pts).sum(axis=1)
    start = np.argmin(sq)
    cap = d + 3
    s = np.zeros((cap, d))
    idx = np.full(cap, -1, np.int64)
    lam = np.zeros(cap)
    s[0] = pts[start]
    idx[0] = start
    lam[0] = 1.0
    ns = 1
    x = pts[start].copy()

    for _ in range(max_iter):
        xx = float(np.dot(x, x))
        prods = pts @ x
        q = np.argmin(prods)
        if xx - prods[q] <= gap_tol * (1.0 + xx):
            return OK, x
        dup = False
        for i in range(ns):
            if idx[i] == q:
                dup = True
        if dup or ns >= cap:
            return OK, x
        s[ns] = pts[q]
        idx[ns] = q
        lam[ns] = 0.0
        ns += 1
        while True:
            # affine minimizer over the active set via the bordered Gram system
            mm = np.zeros((ns + 1, ns + 1))
            mm[:ns, :ns] = s[:ns] @ s[:ns].T
            mm[:ns, ns] = 1.0
            mm[ns, :ns] = 1.0
            rhs = np.zeros(ns + 1)
            rhs[ns] = 1.0
            sol = np.linalg.lstsq(mm, rhs, rcond=1e-12)[0]
            alpha = sol[:ns]
            if (alpha > 1e-12).all():
                lam[:ns] = alpha
                x = alpha @ s[:ns]
                break
            theta = np.inf
            for i in range(ns):
                if alpha[i] <= 1e-12 and lam[i] - alpha[i] > 1e-15:
                    r = lam[i] / (lam[i] - alpha[i])
                    if r < theta:
                        theta = r
            if not np.isfinite(theta):
                theta = 0.0
            drop = -1
            for i in range(ns):
                lam[i] = (1.0 - theta) * lam[i] + theta * alpha[i]
                if lam[i] <= 1e-12 and drop < 0:
                    drop = i
            if drop < 0:
                x = lam[:ns] @ s[:ns]
                break
            for i in range(drop, ns - 1):
                s[i] = s[i + 1]
                idx[i] = idx[i + 1]
                lam[i] = lam[i + 1]
            ns -= 1
            x = lam[:ns] @ s[:ns]
    return ITER_LIMIT, x


def dist_to_hull(g, p, norm_code, max_iter):
    """Distance from point p to conv(rows of g) in the coded norm.

    Inputs far from unit magnitude are rescaled first (distances are
    positively homogeneous), which keeps the solver tolerances and the
    bordered Gram systems well conditioned at any coordinate scale.
    """
    mag = max(np.abs(g).max(), np.abs(p).max())
    unit = 1.0
    if mag > 0.0 and (mag > 1e3 or mag < 1e-3):
        unit = mag
        g = g / mag
        p = p / mag
    m, d = g.shape
    if norm_code == L2:
        st, x = min_norm_point(g - p, 1e-10, max_iter)
        return st, unit * float(np.sqrt(np.dot(x, x)))
    if norm_code == LINF:
        # vars: lam (m), t, s+ (d), s- (d); rows: +/- coordinate gaps, simplex
        n = m + 1 + 2 * d
        k = 2 * d + 1
        a = np.zeros((k, n))
        b = np.zeros(k)
        for j in range(d):
            a[j, :m] = g[:, j]
            a[j, m] = -1.0
            a[j, m + 1 + j] = 1.0
            b[j] = p[j]
            a[d + j, :m] = -g[:, j]
            a[d + j, m] = -1.0
            a[d + j, m + 1 + d + j] = 1.0
            b[d + j] = -p[j]
        a[2 * d, :m] = 1.0
        b[2 * d] = 1.0
        c = np.zeros(n)
        c[m] = 1.0
        st, x = simplex_min(c, a, b, max_iter)
        return st, unit * float(x[m])
    # L1: vars lam (m), u (d), v (d) with g'lam + u - v = p
    n = m + 2 * d
    k = d + 1
    a = np.zeros((k, n))
    b = np.zeros(k)
    for j in range(d):
        a[j, :m] = g[:, j]
        a[j, m + j] = 1.0
        a[j, m + d + j] = -1.0
        b[j] = p[j]
    a[d, :m] = 1.0
    b[d] = 1.0
    c = np.zeros(n)
    c[m:] = 1.0
    st, x = simplex_min(c, a, b, max_iter)
    return st, unit * float(x[m:].sum())


def extreme_mask(g, tol, max_iter):
    """Boolean mask of the rows of g that are extreme points of conv(g).

    A row is dropped when the membership program certifies it lies in
    the hull of the remaining rows; dropping interior points never
    changes the hull, so a single ascending pass is exact.
    """
    m = g.shape[0]
    keep = np.ones(m, np.bool_)
    st_all = OK
    for i in range(m):
        keep[i] = False
        others = g[keep]
        if others.shape[0] == 0:
            keep[i] = True
            continue
        st, res = membership_residual(others, g[i], max_iter)
        if st != OK:
            st_all = st
            keep[i] = True
        elif res > tol:
            keep[i] = True
    return st_all, keep


def directed_hausdorff_kernel(ga, gb, norm_code, max_iter):
    """sup over rows b of gb of dist(b, conv(ga)), exactly.

    Cheap certificates avoid most solves: signed coordinate functionals
    give lower bounds, the nearest generator gives upper bounds, and
    candidates are visited in decreasing upper-bound order so the scan
    stops as soon as no remaining point can raise the maximum.
    """
    mb, d = gb.shape
    hp = np.empty(d)
    hm = np.empty(d)
    for j in range(d):
        hp[j] = ga[:, j].max()
        hm[j] = (-ga[:, j]).max()
    lb = np.zeros(mb)
    ub = np.empty(mb)
    for i in range(mb):
        v = 0.0
        for j in range(d):
            gap = gb[i, j] - hp[j]
            if gap > v:
                v = gap
            gap = -gb[i, j] - hm[j]
            if gap > v:
                v = gap
        lb[i] = v
        ub[i] = row_norms(ga - gb[i], norm_code).min()
    best = lb.max()
    order = np.argsort(-ub, kind="mergesort")
    for oi in range(mb):
        i = order[oi]
        if ub[i] <= best + 1e-15:
            break
        st, dv = dist_to_hull(ga, gb[i], norm_code, max_iter)
        if st != OK:
            return st, np.inf
        if dv > best:
            best = dv
    return OK, best


def max_pairwise_dist(g, norm_code):
    """Largest pairwise row distance (the diameter of the generator set)."""
    m = g.shape[0]
    best = 0.0
    for i in range(m - 1):
        v = row_norms(g[i + 1 :] - g[i], norm_code).max()
        if v > best:
            best = v
    return best


# keep the interpreted versions importable for cross-checking the JIT path
simplex_min_py = simplex_min
membership_residual_py = membership_residual
min_norm_point_py = min_norm_point
dist_to_hull_py = dist_to_hull
extreme_mask_py = extreme_mask
directed_hausdorff_kernel_py = directed_hausdorff_kernel
max_pairwise_dist_py = max_pairwise_dist
row_norms_py = row_norms

if USING_NUMBA:
    # rebinding the module globals before any call lets the lazily-compiled
    # kernels resolve their callees to the jitted versions
    row_norms = _jit(row_norms)
    simplex_min = _jit(simplex_min)
    membership_residual = _jit(membership_residual)
    min_norm_point = _jit(min_norm_point)
    dist_to_hull = _jit(dist_to_hull)
    extreme_mask = _jit(extreme_mask)
    max_pairwise_dist = _jit(max_pairwise_dist)
    directed_hausdorff_kernel = _jit(directed_hausdorff_kernel)
