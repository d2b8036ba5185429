"""Independent reference computations used by the tests.

Nothing here imports the klein algorithms it is checked against: the cone
oracle samples directions on a grid, the singular value oracle bisects a
Sturm count on a Householder tridiagonal form, and the symmetric-space
dimension oracle solves the defining linear equations of the Lie algebra.
"""

import functools
import itertools

import numpy as np

# ---------------------------------------------------------------------------
# random matrices with controlled singular values


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def random_gl(rng, n, spread=3.0):
    """``U diag(exp(s)) V`` with ``s`` uniform in ``[-spread, spread]``."""
    s = rng.uniform(-spread, spread, size=n)
    return random_orthogonal(rng, n) @ np.diag(np.exp(s)) @ random_orthogonal(rng, n)


# ---------------------------------------------------------------------------
# singular values by bisection on the characteristic polynomial


def householder_tridiagonal(a):
    a = np.array(a, dtype=float)
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        alpha = -np.copysign(np.linalg.norm(x), x[0] if x[0] != 0 else 1.0)
        v = x.copy()
        v[0] -= alpha
        nv = np.linalg.norm(v)
        if nv == 0:
            continue
        v /= nv
        h = np.eye(n)
        h[k + 1:, k + 1:] -= 2.0 * np.outer(v, v)
        a = h @ a @ h
    return np.diag(a).copy(), np.diag(a, 1).copy()


def sturm_count(d, e, x):
    """Number of eigenvalues of the tridiagonal matrix below ``x``.

    Sign changes in the sequence of leading principal minors of ``T - x``,
    run as the ratio recurrence of the characteristic polynomials.
    """
    count = 0
    q = 1.0
    for i in range(len(d)):
        off = e[i - 1] ** 2 if i > 0 else 0.0
        q = d[i] - x - (off / q if i > 0 else 0.0)
        if q == 0.0:
            q = 1e-300
        if q < 0:
            count += 1
    return count


def eigenvalues_by_bisection(a, iters=200):
    """Descending eigenvalues of a symmetric positive definite matrix."""
    d, e = householder_tridiagonal(a)
    n = len(d)
    hi_all = np.log(np.sum(np.abs(a)) + 1.0)
    lo_all = np.log(1e-300)
    out = []
    for k in range(n):
        # k-th smallest eigenvalue: smallest x with count(x) > k, in log space
        lo, hi = lo_all, hi_all
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            if sturm_count(d, e, np.exp(mid)) > k:
                hi = mid
            else:
                lo = mid
            if hi - lo < 1e-15:
                break
        out.append(np.exp(0.5 * (lo + hi)))
    return np.array(out[::-1])


def cartan_oracle(g):
    """``1/2 log`` of the eigenvalues of ``g^T g``, descending."""
    return 0.5 * np.log(eigenvalues_by_bisection(g.T @ g))


# ---------------------------------------------------------------------------
# d(G) from the Lie algebra equations


def _form(p, q):
    return np.diag([1.0] * p + [-1.0] * q)


def _j(n):
    z = np.zeros((n, n))
    i = np.eye(n)
    return np.block([[z, -i], [i, z]])


def _quaternion_units(n):
    # right multiplication by i, j, k on H^n = R^(4n), coordinates (a, b, c, d) blocks
    i2 = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float)
    j2 = np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float)
    eye = np.eye(n)
    return np.kron(i2, eye), np.kron(j2, eye)


def symmetric_part_dim(size, form=None, commute=(), traceless=False):
    """Dimension of ``{X = X^T : X^T F + F X = 0, XC = CX, tr X = 0}``."""
    N = size
    rows = []
    # X = X^T
    for i in range(N):
        for j in range(i + 1, N):
            r = np.zeros((N, N))
            r[i, j], r[j, i] = 1, -1
            rows.append(r.ravel())
    basis = np.eye(N * N).reshape(N * N, N, N)
    if form is not None:
        m = np.array([(b.T @ form + form @ b).ravel() for b in basis]).T
        rows.extend(m)
    for c in commute:
        m = np.array([(b @ c - c @ b).ravel() for b in basis]).T
        rows.extend(m)
    if traceless:
        rows.append(np.eye(N).ravel())
    a = np.array(rows)
    return N * N - np.linalg.matrix_rank(a)


def d_oracle(family, p, q=0):
    if family == "GL":
        return symmetric_part_dim(p)
    if family == "SL":
        return symmetric_part_dim(p, traceless=True)
    if family in ("O", "SO"):
        return symmetric_part_dim(p + q, _form(p, q))
    if family == "U":
        n = p + q
        f = np.kron(np.eye(2), _form(p, q))
        return symmetric_part_dim(2 * n, f, [_j(n)])
    if family == "Sp":
        n = p + q
        f = np.kron(np.eye(4), _form(p, q))
        return symmetric_part_dim(4 * n, f, _quaternion_units(n))
    if family == "Spin":
        # spin(8,1) and so(8,1) are the same Lie algebra
        return symmetric_part_dim(p + q, _form(p, q))
    raise ValueError(family)


# ---------------------------------------------------------------------------
# cones by direction sampling

GRID = 1e-3
MEET = 2e-3
MARGIN = 0.05


def _simplex_grid(k, step=GRID):
    m = int(round(1 / step))
    if k == 1:
        return np.ones((1, 1))
    if k == 2:
        t = np.arange(m + 1) / m
        return np.stack([t, 1 - t], axis=1)
    i, j = np.meshgrid(np.arange(m + 1), np.arange(m + 1), indexing="ij")
    keep = i + j <= m
    i, j = i[keep], j[keep]
    return np.stack([i, j, m - i - j], axis=1) / m


def sample_directions(pieces, step=GRID):
    """Unit directions on a coefficient grid over each simplicial piece."""
    out = []
    for gens in pieces:
        g = np.array(gens, dtype=float)
        pts = _simplex_grid(len(g), step) @ g
        nrm = np.linalg.norm(pts, axis=1)
        out.append(pts[nrm > 1e-12] / nrm[nrm > 1e-12, None])
    if not out:
        return np.zeros((0, 0))
    return np.concatenate(out)


def _simplicial_distance(x, gens):
    """Distance from each row of ``x`` to the cone on at most three independent generators."""
    g = np.array(gens, dtype=float)
    best = np.linalg.norm(x, axis=1)
    for r in range(1, len(g) + 1):
        for sub in itertools.combinations(range(len(g)), r):
            a = g[list(sub)].T
            if np.linalg.matrix_rank(a) < r:
                continue
            coef = np.linalg.pinv(a) @ x.T
            ok = np.all(coef >= -1e-12, axis=0)
            d = np.linalg.norm(x - (a @ coef).T, axis=1)
            best = np.where(ok, np.minimum(best, d), best)
    return best


def distances(x, pieces):
    best = np.full(len(x), np.inf)
    for gens in pieces:
        best = np.minimum(best, _simplicial_distance(x, gens))
    if not pieces:
        best = np.linalg.norm(x, axis=1) if len(x) else best
    return best


def _directional(a_pieces, b_pieces):
    """Distances from the sampled directions of A to B (empty when A is {0})."""
    x = sample_directions(a_pieces)
    if len(x) == 0:
        return np.zeros(0)
    if not b_pieces:
        return np.ones(len(x))
    return distances(x, b_pieces)


@functools.lru_cache(maxsize=None)
def corpus_report(i):
    """Brute-force verdicts for ``CORPUS[i]``: proper, equivalent and the raw gaps."""
    (_, a), (_, b) = CORPUS[i]
    dab = _directional(a, b)
    dba = _directional(b, a)
    meet_gap = float(dab.min()) if len(dab) and b else np.inf
    ab = float(dab.max()) if len(dab) else 0.0
    ba = float(dba.max()) if len(dba) else 0.0
    return {
        "proper": meet_gap > MEET,
        "meet_gap": meet_gap,
        "equiv": ab <= MEET and ba <= MEET,
        "containment_gaps": (ab, ba),
    }


# Each cone is ("engine generators per piece", "simplicial pieces for the oracle").
E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
N1, N2, N3 = (-1, 0, 0), (0, -1, 0), (0, 0, -1)
SQ = [(1, 1, 1), (1, -1, 1), (-1, -1, 1), (-1, 1, 1)]


def ray(v):
    return ([[v]], [[v]])


def cone(*gens):
    return ([list(gens)], [list(gens)])


def line(v):
    w = tuple(-x for x in v)
    return ([[v, w]], [[v], [w]])


def plane(u, v):
    nu = tuple(-x for x in u)
    nv = tuple(-x for x in v)
    return ([[u, nu, v, nv]], [[u, v], [v, nu], [nu, nv], [nv, u]])


def union(*cones):
    return ([p for c in cones for p in c[0]], [p for c in cones for p in c[1]])


ZERO2 = ([[]], [])
ZERO3 = ([[]], [])
SQUARE = ([SQ], [[SQ[0], SQ[1], SQ[2]], [SQ[0], SQ[2], SQ[3]]])
NEG_SQUARE = ([[tuple(-x for x in v) for v in SQ]],
              [[tuple(-x for x in v) for v in (SQ[0], SQ[1], SQ[2])],
               [tuple(-x for x in v) for v in (SQ[0], SQ[2], SQ[3])]])
SQUARE_FAN = ([[E3, SQ[i], SQ[(i + 1) % 4]] for i in range(4)],
              [[E3, SQ[i], SQ[(i + 1) % 4]] for i in range(4)])
HALF_UP = ([[E1, N1, E2, N2, E3]], [[a, b, E3] for a in (E1, N1) for b in (E2, N2)])
R2_WHOLE = ([[(1, 0), (-1, 0), (0, 1), (0, -1)]],
            [[(1, 0), (0, 1)], [(0, 1), (-1, 0)], [(-1, 0), (0, -1)], [(0, -1), (1, 0)]])
R3_WHOLE = ([[E1, N1, E2, N2, E3, N3]],
            [[a, b, c] for a in (E1, N1) for b in (E2, N2) for c in (E3, N3)])
ORTHANT = cone(E1, E2, E3)
NEG_ORTHANT = cone(N1, N2, N3)
D = (1, 1, 1)

CORPUS = [
    # R^2
    (ray((1, 0)), ray((0, 1))),
    (ray((1, 0)), ray((1, 0))),
    (cone((1, 0), (0, 1)), cone((-1, 0), (0, -1))),
    (cone((1, 0), (0, 1)), cone((0, 1), (-1, 0))),
    (cone((1, 0), (1, 1)), cone((1, 2), (0, 1))),
    (line((1, 0)), line((0, 1))),
    (line((1, 0)), cone((1, 0), (0, 1))),
    (([[(1, 0), (-1, 0), (0, 1)]], [[(1, 0), (0, 1)], [(0, 1), (-1, 0)]]), ray((1, -1))),
    (([[(1, 0), (-1, 0), (0, 1)]], [[(1, 0), (0, 1)], [(0, 1), (-1, 0)]]), ray((1, 0))),
    (R2_WHOLE, ray((3, -2))),
    (ZERO2, R2_WHOLE),
    (union(ray((1, 0)), ray((-1, 0))), line((1, 0))),
    (union(cone((1, 0), (0, 1)), cone((-1, 0), (0, -1))), line((1, -1))),
    (cone((1, 0), (0, 1)), union(cone((1, 0), (1, 1)), cone((1, 1), (0, 1)))),
    (cone((2, 1), (1, 2)), cone((1, 0), (0, 1))),
    (cone((1, 3), (-1, 3)), cone((1, -3), (-1, -3))),
    (ray((1, 1)), union(ray((1, 2)), ray((2, 1)))),
    (union(cone((1, 0), (0, 1)), cone((-1, 0), (0, -1))), ray((1, -2))),
    (([[(1, 0), (0, 1), (0, -1)]], [[(1, 0), (0, 1)], [(1, 0), (0, -1)]]),
     ([[(-1, 0), (0, 1), (0, -1)]], [[(-1, 0), (0, 1)], [(-1, 0), (0, -1)]])),
    (cone((5, 1), (1, 5)), ray((1, 1))),
    # R^3
    (ray(E1), ray(E2)),
    (ORTHANT, ray(D)),
    (ORTHANT, ray((-1, 1, 1))),
    (ORTHANT, NEG_ORTHANT),
    (plane(E1, E2), line(E3)),
    (plane(E1, E2), plane(E2, E3)),
    (SQUARE, ray(E3)),
    (SQUARE, ray((2, 0, 1))),
    (SQUARE, NEG_SQUARE),
    (SQUARE, plane(E1, E2)),
    (SQUARE, plane(E2, E3)),
    (SQUARE, ORTHANT),
    (SQUARE, SQUARE_FAN),
    (ORTHANT, union(cone(E1, E2, D), cone(E2, E3, D), cone(E3, E1, D))),
    (ORTHANT, union(cone(E1, E2, D), cone(E2, E3, D))),
    (HALF_UP, ray((1, 1, -1))),
    (HALF_UP, ray((1, 1, 0))),
    (plane((1, 1, 0), E3), line((1, -1, 0))),
    (plane((1, 1, 0), E3), ray(D)),
    (cone(E1, E2), cone(E3, D)),
    (cone(E1, E2), cone(D, (1, 1, -1))),
    (cone((1, 0, 1), (0, 1, 1)), cone((1, 0, -1), (0, 1, -1))),
    (ORTHANT, line((1, -1, 0))),
    (ZERO3, ORTHANT),
    (ZERO3, ZERO3),
    (R3_WHOLE, ray((1, 2, 3))),
    (union(ORTHANT, NEG_ORTHANT), union(NEG_ORTHANT, ORTHANT)),
    (cone((1, 2, 3), (3, 2, 1), (2, 3, 1)), ray(D)),
    (union(cone(E1, E2), cone(E3, D)), ray(D)),
    (cone((1, 2, 3), (3, 2, 1), (2, 3, 1)), cone((1, 0, 0), (0, 0, 1))),
]

CORPUS_DIMS = [2] * 20 + [3] * 30


def subspace_dual_oracle(h, candidates):
    """Which candidate subspaces of R^3 meet span(h) only at 0, by numpy ranks."""
    hb = np.array(h, dtype=float).reshape(-1, 3)
    out = []
    for c in candidates:
        cb = np.array(c, dtype=float).reshape(-1, 3)
        both = np.vstack([hb, cb])
        rank = np.linalg.matrix_rank(both) if len(both) else 0
        rh = np.linalg.matrix_rank(hb) if len(hb) else 0
        rc = np.linalg.matrix_rank(cb) if len(cb) else 0
        out.append(rank == rh + rc)
    return out
