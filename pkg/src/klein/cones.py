"""Polyhedral cone unions in R^n and the relations between them.

Two closed cones are a proper pair exactly when they meet only at the
origin, and they are coarsely equivalent exactly when they coincide.  Both
questions are answered with exact rational linear programming, so the answers
for exact cones are certificates rather than estimates.

Point clouds (Cartan projections of sampled group words) can only be compared
to a cone empirically; :func:`subset_proper_evidence` does that and never
claims more than evidence.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import rational as Q
from .errors import (
    ContractViolation,
    DimensionMismatch,
    EmpiricalConeError,
    GeneratorLimitExceeded,
)

EXACT = "exact"
EMPIRICAL = "empirical"
MAX_PROJECTION_GENERATORS = 12
COEFF_TOL = 1e-12


# ---------------------------------------------------------------------------
# double description


def double_description(inequalities: Sequence[Sequence], dim: int,
                       equalities: Sequence[Sequence] = ()):
    """Generators of ``{x : a.x >= 0 for a in inequalities, e.x = 0 for e in equalities}``.

    Returns ``(lineality, rays)``: a basis of the lineality space and the
    extreme rays of the pointed part, all as primitive integer Fraction tuples.
    """
    lin: list[list[Fraction]] = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    rays: list[list[Fraction]] = []
    rows: list[tuple] = []  # processed inequality rows (for adjacency tests)

    constraints = [(list(map(Q.to_fraction, e)), True) for e in equalities]
    constraints += [(list(map(Q.to_fraction, a)), False) for a in inequalities]

    for a, is_eq in constraints:
        vals = [Q.dot(a, l) for l in lin]
        k = next((i for i, v in enumerate(vals) if v != 0), None)
        if k is not None:
            l0 = lin.pop(k)
            v0 = vals.pop(k)
            if v0 < 0:
                l0 = [-x for x in l0]
                v0 = -v0
            lin = [[x - (v / v0) * y for x, y in zip(l, l0)] for l, v in zip(lin, vals)]
            rays = [[x - (Q.dot(a, r) / v0) * y for x, y in zip(r, l0)] for r in rays]
            if not is_eq:
                rays.append(l0)
            rows.append(tuple(a))
            rays = [list(Q.primitive(r)) for r in rays]
            continue

        rvals = [Q.dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, rvals) if v > 0]
        zero = [r for r, v in zip(rays, rvals) if v == 0]
        neg = [r for r, v in zip(rays, rvals) if v < 0]
        vpos = [v for v in rvals if v > 0]
        vneg = [v for v in rvals if v < 0]
        new = []
        if pos and neg:
            zsets = [frozenset(i for i, row in enumerate(rows) if Q.dot(row, r) == 0) for r in rays]
            zmap = {id(r): z for r, z in zip(rays, zsets)}
            need = dim - len(lin) - 2
            for p, vp in zip(pos, vpos):
                for n, vn in zip(neg, vneg):
                    common = zmap[id(p)] & zmap[id(n)]
                    if len(common) < need:
                        continue
                    if any(zmap[id(r)] >= common for r in rays if r is not p and r is not n):
                        continue
                    if need > 0 and Q.rank([rows[i] for i in common], dim) < need:
                        continue
                    new.append([vp * x - vn * y for x, y in zip(n, p)])
        rays = zero + new if is_eq else pos + zero + new
        rows.append(tuple(a))
        rays = [list(Q.primitive(r)) for r in rays if any(x != 0 for x in r)]

    lineality = [Q.primitive(l) for l in lin]
    seen = set()
    uniq = []
    for r in rays:
        t = tuple(r)
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    return lineality, uniq


# ---------------------------------------------------------------------------
# convex cones


def _canonical_generators(gens: Iterable[Sequence], dim: int) -> tuple:
    out = set()
    for g in gens:
        g = tuple(Q.to_fraction(x) for x in g)
        if len(g) != dim:
            raise DimensionMismatch(f"generator of length {len(g)} in a {dim}-dimensional cone")
        if all(x == 0 for x in g):
            continue
        out.add(Q.primitive(g))
    return tuple(sorted(out))


@dataclass(frozen=True)
class ConvexCone:
    """Closed convex cone generated by finitely many rational rays.

    The cone with no generators is ``{0}``.  Generators are stored as
    primitive integer vectors in lexicographic order, so two equal generator
    sets always compare and serialize identically.
    """

    dim: int
    generators: tuple = ()

    def __post_init__(self):
        if self.dim < 0:
            raise ContractViolation("cone dimension must be nonnegative")
        object.__setattr__(self, "generators", _canonical_generators(self.generators, self.dim))

    @classmethod
    def from_inequalities(cls, inequalities, dim, equalities=()):
        lin, rays = double_description(inequalities, dim, equalities)
        gens = list(rays) + list(lin) + [tuple(-x for x in l) for l in lin]
        return cls(dim, gens)

    @cached_property
    def h_rep(self):
        """``(equalities, inequalities)`` describing the cone exactly."""
        lin, rays = double_description(self.generators, self.dim)
        return lin, rays

    @cached_property
    def linear_dim(self) -> int:
        return Q.rank(self.generators, self.dim) if self.generators else 0

    def minimized(self) -> "ConvexCone":
        eqs, ineqs = self.h_rep
        return ConvexCone.from_inequalities(ineqs, self.dim, eqs)

    def contains(self, x: Sequence) -> bool:
        x = [Q.to_fraction(c) for c in x]
        eqs, ineqs = self.h_rep
        return all(Q.dot(e, x) == 0 for e in eqs) and all(Q.dot(a, x) >= 0 for a in ineqs)

    def contains_cone(self, other: "ConvexCone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def float_generators(self) -> np.ndarray:
        if not self.generators:
            return np.zeros((self.dim, 0))
        return np.array([[float(x) for x in g] for g in self.generators]).T

    def linear_image(self, matrix) -> "ConvexCone":
        """Image under a rational linear map given as a list of rows."""
        rows = [[Q.to_fraction(x) for x in r] for r in matrix]
        return ConvexCone(len(rows), [Q.mat_vec(rows, g) for g in self.generators])

    def to_json(self):
        return [[Q.fraction_str(x) for x in g] for g in self.generators]


@dataclass(frozen=True)
class ConeUnion:
    """Finite union of convex cones in R^dim.

    ``provenance`` is ``"exact"`` or ``"empirical"``.  Catalog cones store
    only their part inside the dominant Weyl chamber (``weyl_saturated`` is
    then False); every relation in this module is invariant under the Weyl
    group, so the dominant part is enough to decide them.
    """

    dim: int
    pieces: tuple = ()
    provenance: str = EXACT
    weyl_saturated: bool = True
    snap_error: float = 0.0

    def __post_init__(self):
        if self.provenance not in (EXACT, EMPIRICAL):
            raise ContractViolation(f"unknown provenance {self.provenance!r}")
        pieces = []
        for p in self.pieces:
            if not isinstance(p, ConvexCone):
                p = ConvexCone(self.dim, p)
            if p.dim != self.dim:
                raise DimensionMismatch(f"piece of dimension {p.dim} in a {self.dim}-dimensional union")
            pieces.append(p)
        if not pieces:
            pieces = [ConvexCone(self.dim)]
        pieces = sorted(set(pieces), key=lambda c: c.generators)
        object.__setattr__(self, "pieces", tuple(pieces))

    @classmethod
    def zero(cls, dim: int) -> "ConeUnion":
        return cls(dim, (ConvexCone(dim),))

    @classmethod
    def single(cls, generators, dim: int | None = None, **kw) -> "ConeUnion":
        generators = [tuple(g) for g in generators]
        if dim is None:
            dim = len(generators[0])
        return cls(dim, (ConvexCone(dim, generators),), **kw)

    @classmethod
    def subspace(cls, basis, dim: int | None = None) -> "ConeUnion":
        basis = [tuple(Q.to_fraction(x) for x in b) for b in basis]
        if dim is None:
            dim = len(basis[0])
        gens = basis + [tuple(-x for x in b) for b in basis]
        return cls(dim, (ConvexCone(dim, gens),))

    @property
    def is_exact(self) -> bool:
        return self.provenance == EXACT

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.pieces)

    def contains(self, x) -> bool:
        return any(p.contains(x) for p in self.pieces)

    def simplified(self) -> "ConeUnion":
        """Drop pieces contained in another piece and minimize generators."""
        pieces = [p.minimized() for p in self.pieces]
        pieces = sorted(set(pieces), key=lambda c: (-c.linear_dim, -len(c.generators), c.generators))
        kept: list[ConvexCone] = []
        for p in pieces:
            if not any(k.contains_cone(p) for k in kept):
                kept.append(p)
        return ConeUnion(self.dim, tuple(kept), self.provenance, self.weyl_saturated, self.snap_error)

    def saturate(self, weyl_generators) -> "ConeUnion":
        """Union of all images of the pieces under the group generated by ``weyl_generators``."""
        mats = [[[Q.to_fraction(x) for x in r] for r in m] for m in weyl_generators]
        seen = {p.minimized() for p in self.pieces}
        frontier = list(seen)
        while frontier:
            nxt = []
            for p in frontier:
                for m in mats:
                    img = p.linear_image(m).minimized()
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt
        return ConeUnion(self.dim, tuple(seen), self.provenance, True, self.snap_error)

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.dim,
            "provenance": self.provenance,
            "weyl_saturated": self.weyl_saturated,
            "pieces": [p.to_json() for p in self.pieces],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConeUnion":
        dim = int(data["ambient_dim"])
        pieces = tuple(ConvexCone(dim, [tuple(Fraction(x) for x in g) for g in gens])
                       for gens in data["pieces"])
        return cls(dim, pieces, data.get("provenance", EXACT), bool(data.get("weyl_saturated", True)))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# exact predicates


def _require_exact(*cones: ConeUnion):
    for c in cones:
        if not c.is_exact:
            raise EmpiricalConeError(
                "empirical cones cannot be compared exactly; use subset_proper_evidence on the point cloud")


def _require_same_dim(a: ConeUnion, b: ConeUnion):
    if a.dim != b.dim:
        raise DimensionMismatch(f"cones live in R^{a.dim} and R^{b.dim}")


def common_direction(p: ConvexCone, q: ConvexCone):
    """A nonzero vector in both cones, or ``None`` if they meet only at 0.

    Solves ``U l = V m`` with ``l, m >= 0`` plus one normalization
    ``+-(U l)_i = 1`` per coordinate and sign, each an exact LP.
    """
    if p.is_zero() or q.is_zero():
        return None
    d = p.dim
    U = p.generators
    V = q.generators
    nu, nv = len(U), len(V)
    base = []
    for i in range(d):
        base.append([U[j][i] for j in range(nu)] + [-V[j][i] for j in range(nv)])
    for i in range(d):
        for s in (1, -1):
            row = [s * U[j][i] for j in range(nu)] + [Fraction(0)] * nv
            sol = Q.feasible_nonnegative(base + [row], [Fraction(0)] * d + [Fraction(1)], nu + nv)
            if sol is not None:
                lam = sol[:nu]
                x = tuple(sum((lam[j] * U[j][k] for j in range(nu)), Fraction(0)) for k in range(d))
                return Q.primitive(x)
    return None


def proper_witness(a: ConeUnion, b: ConeUnion):
    """Common nonzero direction of two cone unions, or ``None``."""
    _require_same_dim(a, b)
    _require_exact(a, b)
    for p in a.pieces:
        for q in b.pieces:
            w = common_direction(p, q)
            if w is not None:
                return w
    return None


def cones_proper(a: ConeUnion, b: ConeUnion) -> bool:
    """True iff the two closed cone unions intersect only at the origin."""
    return proper_witness(a, b) is None


def _point_outside(p: ConvexCone, qs: Sequence[ConvexCone]):
    """A point of ``p`` lying in none of ``qs`` (exact), or ``None``."""
    if not p.generators:
        return None
    for q in qs:
        if q.contains_cone(p):
            return None
    m = len(p.generators)
    gens = p.generators
    d = p.dim

    # every way of leaving q: a strict violation of one of its constraints
    exits = []
    for q in qs:
        eqs, ineqs = q.h_rep
        opts = [tuple(-x for x in a) for a in ineqs]  # a.x < 0  ->  (-a).x > 0
        for e in eqs:
            opts.append(tuple(e))
            opts.append(tuple(-x for x in e))
        exits.append([o for o in opts if any(Q.dot(o, g) > 0 for g in gens)])
    if any(not opt for opt in exits):
        return None

    def feasible(chosen):
        # x = sum l_i g_i, c.x - s_c = 1 for each chosen c
        k = len(chosen)
        rows = []
        for j, c in enumerate(chosen):
            row = [Q.dot(c, g) for g in gens] + [Fraction(-int(i == j)) for i in range(k)]
            rows.append(row)
        sol = Q.feasible_nonnegative(rows, [Fraction(1)] * k, m + k)
        if sol is None:
            return None
        lam = sol[:m]
        return tuple(sum((lam[i] * gens[i][t] for i in range(m)), Fraction(0)) for t in range(d))

    def dfs(j, chosen):
        if j == len(exits):
            return feasible(chosen)
        for c in exits[j]:
            trial = chosen + [c]
            if feasible(trial) is None:
                continue
            found = dfs(j + 1, trial)
            if found is not None:
                return found
        return None

    pt = dfs(0, [])
    return None if pt is None else Q.primitive(pt)


def containment_witness(a: ConeUnion, b: ConeUnion):
    """A point of ``a`` outside ``b``, or ``None`` if ``a`` is contained in ``b``."""
    _require_same_dim(a, b)
    _require_exact(a, b)
    for p in a.pieces:
        w = _point_outside(p, b.pieces)
        if w is not None:
            return w
    return None


def cones_equiv(a: ConeUnion, b: ConeUnion) -> bool:
    """True iff the two closed cone unions are equal as sets."""
    return containment_witness(a, b) is None and containment_witness(b, a) is None


# ---------------------------------------------------------------------------
# distances


class _Projector:
    """Precomputed least-squares solvers for every independent generator subset."""

    def __init__(self, cone: ConvexCone):
        gens = cone.float_generators()
        m = gens.shape[1]
        if m > MAX_PROJECTION_GENERATORS:
            raise GeneratorLimitExceeded(
                f"piece has {m} generators; distance queries support at most {MAX_PROJECTION_GENERATORS}")
        self.dim = cone.dim
        self.faces = []
        for k in range(1, min(m, cone.dim) + 1):
            for subset in itertools.combinations(range(m), k):
                gs = gens[:, subset]
                if np.linalg.matrix_rank(gs, tol=1e-10) < k:
                    continue
                self.faces.append((gs, np.linalg.pinv(gs)))

    def distances(self, x: np.ndarray) -> np.ndarray:
        """Distances of the rows of ``x`` to the cone."""
        best = np.linalg.norm(x, axis=1)
        for gs, pinv in self.faces:
            coef = x @ pinv.T
            ok = np.all(coef >= -COEFF_TOL, axis=1)
            if not np.any(ok):
                continue
            proj = coef[ok] @ gs.T
            d = np.linalg.norm(x[ok] - proj, axis=1)
            best[ok] = np.minimum(best[ok], d)
        return best


_PROJECTORS: dict = {}


def _projector(cone: ConvexCone) -> _Projector:
    pr = _PROJECTORS.get(cone)
    if pr is None:
        pr = _Projector(cone)
        if len(_PROJECTORS) > 4096:
            _PROJECTORS.clear()
        _PROJECTORS[cone] = pr
    return pr


def distances_to_cone(points, cone: ConeUnion) -> np.ndarray:
    """Vectorized :func:`distance_to_cone` for an ``(N, dim)`` array."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if x.shape[1] != cone.dim:
        raise DimensionMismatch(f"points of dimension {x.shape[1]} vs cone in R^{cone.dim}")
    best = np.full(x.shape[0], np.inf)
    for p in cone.pieces:
        best = np.minimum(best, _projector(p).distances(x))
    return best


def distance_to_cone(x, cone: ConeUnion) -> float:
    """Euclidean distance from ``x`` to the cone union.

    Each piece is handled by enumerating the faces spanned by linearly
    independent generator subsets; coefficients down to ``-1e-12`` count as
    nonnegative, so boundary ties fall on the smaller distance.
    """
    return float(distances_to_cone([list(x)], cone)[0])


# ---------------------------------------------------------------------------
# point clouds and empirical evidence


@dataclass
class PointCloud:
    points: np.ndarray
    labels: list = field(default_factory=list)
    lengths: list = field(default_factory=list)

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        n = self.points.shape[0]
        if not self.labels:
            self.labels = [str(i) for i in range(n)]
        if not self.lengths:
            self.lengths = [1] * n
        if len(self.labels) != n or len(self.lengths) != n:
            raise ContractViolation("labels and lengths must match the number of points")

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]


PROPER_EVIDENCE = "PROPER-EVIDENCE"
NONPROPER_EVIDENCE = "NONPROPER-EVIDENCE"
GROWTH_FRACTIONS = (0.2, 0.4, 0.6, 0.8)
GROWTH_RATE = 1e-6
BOUNDED_NORM = 1e-9


@dataclass
class EvidenceReport:
    verdict: str
    radii: list
    counts: dict            # radius -> total count
    counts_by_length: dict  # word length -> list of counts (one per radius)
    witnesses: list         # per word length: (length, label, distance)
    growth: list            # (threshold, min distance beyond it)
    max_norm: float

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "radii": list(self.radii),
            "counts": [self.counts[r] for r in self.radii],
            "counts_by_length": {str(k): v for k, v in sorted(self.counts_by_length.items())},
            "witnesses": [{"length": l, "word": w, "distance": d} for l, w, d in self.witnesses],
            "growth": [{"threshold": t, "min_distance": m} for t, m in self.growth],
            "max_norm": self.max_norm,
        }


def subset_proper_evidence(cloud: PointCloud, cone: ConeUnion, radii: Sequence[float]) -> EvidenceReport:
    """Empirical check that a sampled set and a cone form a proper pair.

    ``N(R)`` counts cloud points within distance ``R`` of the cone.  The
    verdict looks at how close far-away points come to the cone: with
    ``T`` ranging over fixed fractions of the largest norm, the minimum
    distance among points of norm at least ``T`` must grow at a positive rate
    in ``T``, measured from the smallest to the largest threshold.  A set that
    stays a bounded distance from the cone while its norm diverges is
    reported as NONPROPER-EVIDENCE.
    """
    radii = [float(r) for r in radii]
    if not radii:
        raise ContractViolation("radii must be a nonempty increasing list")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ContractViolation("radii must be strictly increasing")
    if len(cloud) == 0:
        raise ContractViolation("point cloud is empty")
    if cloud.dim != cone.dim:
        raise DimensionMismatch(f"cloud in R^{cloud.dim} vs cone in R^{cone.dim}")

    dist = distances_to_cone(cloud.points, cone)
    norms = np.linalg.norm(cloud.points, axis=1)
    counts = {r: int(np.sum(dist <= r)) for r in radii}
    by_len: dict = {}
    witnesses = []
    lengths = np.asarray(cloud.lengths)
    for ell in sorted(set(cloud.lengths)):
        mask = lengths == ell
        by_len[int(ell)] = [int(np.sum(dist[mask] <= r)) for r in radii]
        idx = np.flatnonzero(mask)
        j = idx[np.argmin(dist[idx])]
        witnesses.append((int(ell), cloud.labels[j], float(dist[j])))

    nmax = float(norms.max())
    growth = []
    if nmax <= BOUNDED_NORM:
        verdict = PROPER_EVIDENCE
    else:
        for f in GROWTH_FRACTIONS:
            t = f * nmax
            growth.append((t, float(dist[norms >= t].min())))
        # the tails are nested, so the minima never decrease; a plateau between
        # two neighbouring thresholds only means no sample norm fell between them
        (t1, m1), (t2, m2) = growth[0], growth[-1]
        ok = m2 - m1 >= GROWTH_RATE * (t2 - t1)
        verdict = PROPER_EVIDENCE if ok else NONPROPER_EVIDENCE
    return EvidenceReport(verdict, radii, counts, by_len, witnesses, growth, nmax)


def empirical_hull(points, max_denominator: int = 10**6) -> ConeUnion:
    """Conical hull of sampled directions, snapped to rationals and flagged empirical."""
    from scipy.optimize import nnls

    x = np.atleast_2d(np.asarray(points, dtype=float))
    dim = x.shape[1]
    norms = np.linalg.norm(x, axis=1)
    dirs = x[norms > BOUNDED_NORM] / norms[norms > BOUNDED_NORM, None]
    if dirs.shape[0] == 0:
        return ConeUnion(dim, (ConvexCone(dim),), EMPIRICAL)
    dirs = np.unique(np.round(dirs, 6), axis=0)
    keep = list(range(dirs.shape[0]))
    for i in range(dirs.shape[0]):
        others = [j for j in keep if j != i]
        if not others:
            continue
        _, res = nnls(dirs[others].T, dirs[i])
        if res < 1e-9:
            keep.remove(i)
    snapped = []
    err = 0.0
    for v in dirs[keep]:
        rv, e = Q.RationalVector.snap(v, max_denominator)
        snapped.append(rv.coords)
        err = max(err, e)
    return ConeUnion(dim, (ConvexCone(dim, snapped),), EMPIRICAL, snap_error=err)


# ---------------------------------------------------------------------------
# linear subspaces


def _basis(sub) -> list:
    return [tuple(Q.to_fraction(x) for x in v) for v in sub if any(Q.to_fraction(x) != 0 for x in v)]


def subspaces_meet_trivially(h, l, dim: int) -> bool:
    """``H ∩ L = {0}`` for subspaces given by spanning vectors."""
    hb, lb = _basis(h), _basis(l)
    return Q.rank(hb + lb, dim) == Q.rank(hb, dim) + Q.rank(lb, dim)


def subspace_discontinuous_dual(h, candidates, dim: int | None = None) -> list:
    """The candidates forming a proper pair with the subspace ``h``."""
    if dim is None:
        vecs = list(h) + [v for c in candidates for v in c]
        if not vecs:
            raise ContractViolation("cannot infer the ambient dimension")
        dim = len(vecs[0])
    return [c for c in candidates if subspaces_meet_trivially(h, c, dim)]


def sign_vector_subspaces(dim: int) -> list:
    """All distinct subspaces of R^dim spanned by vectors with entries in {-1, 0, 1}.

    Each subspace is returned as its reduced row-echelon basis; ``{0}`` is the
    empty list.  R^2 has 6 of them, R^3 has 40.
    """
    vecs = [v for v in itertools.product((-1, 0, 1), repeat=dim) if any(v)]
    vecs = sorted({Q.primitive([Fraction(x) for x in v]) for v in vecs
                   if next(x for x in v if x) > 0})
    found = {(): []}
    frontier = [()]
    while frontier:
        nxt = []
        for key in frontier:
            rows = list(key)
            for v in vecs:
                if Q.rank(rows + [v], dim) == len(rows):
                    continue
                k = Q.span_key(rows + [v], dim)
                if k not in found:
                    found[k] = list(k)
                    nxt.append(k)
        frontier = nxt
    return sorted(found.values(), key=lambda b: (len(b), b))
