"""Deformations of discontinuous groups: membership in R(Gamma, G, H) and scans.

``R(Gamma, G, H)`` consists of the injective homomorphisms ``u: Gamma -> G``
whose image acts properly discontinuously and freely on ``G/H``.  Every test
here works up to a word length ``max_len`` and reports it: injectivity and
freeness are checked on the words enumerated so far, properness is sampled
through the Cartan projection.  A ``NotInR`` verdict always names a word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from .catalog import SubgroupSpec, load_catalog, nu_image
from .cones import NONPROPER_EVIDENCE, distances_to_cone
from .dynamics import FinitelyGeneratedGroup, empirical_properly_discontinuous
from .errors import ContractViolation, NumericFailure
from .groups import GroupDescriptor, parse_group

IN_R = "InR-Evidence"
NOT_IN_R = "NotInR"
NEARBY_NONCONJUGATE = "ExistsNearbyNonConjugate-Evidence"
ALL_CONJUGATE = "AllSamplesConjugate-Evidence"

CHARPOLY_TOL = 1e-9
INVARIANT_TOL = 1e-6
REFINE_WIDTH = 4e-4


@dataclass
class RepresentationPoint:
    """Images of the generators of Gamma in ``target``.

    ``orders`` gives the finite order of a generator in Gamma (``None`` for
    infinite order); the default is the free group on the generators.
    """

    target: GroupDescriptor
    images: list
    orders: list | None = None

    def __post_init__(self):
        self.target = parse_group(self.target)
        self.images = [np.asarray(m, dtype=float) for m in self.images]
        if not self.images:
            raise ContractViolation("a representation needs at least one generator image")
        for m in self.images:
            self.target.check_member(m)
        if self.orders is None:
            self.orders = [None] * len(self.images)

    def group(self) -> FinitelyGeneratedGroup:
        return FinitelyGeneratedGroup(self.target, self.images, orders=self.orders, check=False)

    def conjugate(self, g) -> "RepresentationPoint":
        g = np.asarray(g, dtype=float)
        gi = self.target.inverse(g)
        return RepresentationPoint(self.target, [g @ m @ gi for m in self.images], self.orders)


@dataclass
class RMembershipReport:
    overall: str
    max_len: int
    injectivity: dict
    freeness: dict
    properness: dict
    reasons: list = field(default_factory=list)

    @property
    def in_R(self) -> bool:
        return self.overall == IN_R

    def to_json(self) -> dict:
        return {"overall": self.overall, "max_len": self.max_len, "injectivity": self.injectivity,
                "freeness": self.freeness, "properness": self.properness, "reasons": list(self.reasons)}


# ---------------------------------------------------------------------------
# freeness


def _charpoly_close(a: np.ndarray, b: np.ndarray, tol: float = CHARPOLY_TOL) -> bool:
    ca, cb = np.poly(a), np.poly(b)
    scale = max(1.0, float(np.max(np.abs(ca))), float(np.max(np.abs(cb))))
    return float(np.max(np.abs(ca - cb))) <= tol * scale


def _blocks(G: GroupDescriptor, m: np.ndarray) -> list:
    out, i = [], 0
    for fac in G.factors:
        k = fac.ambient_size
        out.append(m[i:i + k, i:i + k])
        i += k
    return out


def _jordan(G: GroupDescriptor, m: np.ndarray) -> np.ndarray:
    """Log-moduli of eigenvalues folded to the rank frame (the Jordan projection)."""
    if G.is_product:
        return np.concatenate([_jordan(f, b) for f, b in zip(G.factors, _blocks(G, m))] or [np.zeros(0)])
    if G.real_rank == 0:
        return np.zeros(0)
    if G.family == "R":
        return np.log(np.diag(m))
    s = np.sort(np.log(np.abs(np.linalg.eigvals(m))))[::-1]
    return G.canonicalize(G.frame_from_singular(s))


def freeness_check(G: GroupDescriptor, H: SubgroupSpec, words: Sequence) -> dict:
    """Look for a nontrivial word conjugate into H (which would fix a point of G/H).

    * H the diagonal in ``G' x G'``: ``(a, b)`` is conjugate into H iff ``a``
      and ``b`` are conjugate in ``G'``; equal characteristic polynomials
      are taken as evidence of that.
    * H compact: conjugate into H means elliptic, tested by all eigenvalues
      having modulus 1.
    * otherwise: the Jordan projection of a word conjugate into H lies in
      ``nu(H)``; words passing this necessary condition are listed as
      undecided.
    """
    emb = H.embedding
    witness = None
    undecided = []
    if emb is not None and emb.kind == "diagonal" and G.is_product and len(G.factors) == 2:
        method = "characteristic polynomials of the two factors"
        for w in words:
            a, b = _blocks(G, w.matrix)
            if _charpoly_close(a, b):
                witness = w.word
                break
    elif emb is not None and emb.subgroup.is_compact:
        method = "ellipticity (all eigenvalues of modulus 1)"
        for w in words:
            ev = np.linalg.eigvals(w.matrix)
            if np.max(np.abs(np.log(np.abs(ev)))) <= CHARPOLY_TOL:
                witness = w.word
                break
    else:
        method = "Jordan projection against nu(H)"
        cone = nu_image(H)
        for w in words:
            lam = _jordan(G, w.matrix)
            if distances_to_cone(lam[None, :], cone)[0] <= CHARPOLY_TOL * max(1.0, float(np.linalg.norm(lam))):
                undecided.append(w.word)
    free = False if witness is not None else (None if undecided else True)
    return {"free": free, "witness": witness, "method": method,
            "undecided": undecided[:20], "words_checked": len(words),
            "grade": "conjugate-evidence" if witness else "evidence"}


# ---------------------------------------------------------------------------
# membership


def is_in_R(u: RepresentationPoint, G, H: SubgroupSpec, max_len: int,
            radii=(0.5, 1.0, 2.0, 4.0)) -> RMembershipReport:
    G = parse_group(G)
    if u.target != G:
        raise ContractViolation(f"representation lands in {u.target.name}, not {G.name}")
    gamma = u.group()
    en = gamma.enumerate_words(max_len)
    reasons = []
    if en.collisions:
        w, other = en.collisions[0]
        inj = {"injective": False, "witness": {"word": w, "equals": other or "identity"},
               "verified_to_length": max_len}
        reasons.append(f"injectivity: u({w}) = u({other or 'e'})")
    else:
        inj = {"injective": True, "witness": None, "verified_to_length": max_len}
    free = freeness_check(G, H, en.words)
    if free["witness"] is not None:
        reasons.append(f"freeness: u({free['witness']}) is conjugate into H")
    prop = empirical_properly_discontinuous(gamma, H, max_len, radii)
    pj = prop.to_json()
    if prop.verdict == NONPROPER_EVIDENCE:
        wl = prop.report.witnesses[-1]
        reasons.append(f"properness: u({wl[1]}) at distance {wl[2]:.3g} from nu(H) at word length {wl[0]}")
    overall = NOT_IN_R if reasons else IN_R
    return RMembershipReport(overall, max_len, inj, free, pj, reasons)


# ---------------------------------------------------------------------------
# families


@dataclass
class DeformationFamily:
    name: str
    G: GroupDescriptor
    H: SubgroupSpec
    point: Callable        # t -> RepresentationPoint
    t_min: float
    t_max: float
    step: float

    def grid(self) -> list:
        if not self.step > 0 or self.t_max < self.t_min:
            raise ContractViolation("need step > 0 and t_max >= t_min")
        n = int(np.floor((self.t_max - self.t_min) / self.step + 1e-9))
        return [float(np.round(self.t_min + i * self.step, 12)) for i in range(n + 1)]


def diagonal_pair(catalog=None) -> tuple:
    """``(SL(2) x SL(2), diagonal SL(2))`` from the catalog."""
    catalog = catalog or load_catalog()
    G = parse_group("SL(2)xSL(2)")
    return G, SubgroupSpec(G, catalog.find(G, parse_group("SL(2)"), "diagonal"))


def stretch_point(t: float) -> RepresentationPoint:
    """``u_t(gamma) = (diag(e, 1/e), diag(e^t, e^-t))`` in SL(2,R) x SL(2,R)."""
    G = parse_group("SL(2)xSL(2)")
    e = np.e
    m = np.diag([e, 1.0 / e, np.exp(t), np.exp(-t)])
    return RepresentationPoint(G, [m])


def diagonal_stretch_family(t_min=0.1, t_max=2.0, step=0.1) -> DeformationFamily:
    G, H = diagonal_pair()
    return DeformationFamily("diagonal-stretch", G, H, stretch_point, t_min, t_max, step)


def conjugation_family(base: RepresentationPoint, H: SubgroupSpec, path: Callable,
                       t_min=0.0, t_max=1.0, step=0.1) -> DeformationFamily:
    """``t -> path(t) u path(t)^-1`` for a path of group elements."""
    return DeformationFamily("conjugation", base.target, H, lambda t: base.conjugate(path(t)),
                             t_min, t_max, step)


def constant_family(base: RepresentationPoint, H: SubgroupSpec, t_min=0.0, t_max=1.0, step=0.1):
    return DeformationFamily("constant", base.target, H, lambda t: base, t_min, t_max, step)


def retract(G: GroupDescriptor, m: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Bring a nearby matrix back into G (determinant rescaling for SL, blockwise for products)."""
    m = np.asarray(m, dtype=float)
    if G.is_product:
        from .linalg import block_diag
        return block_diag(*[retract(f, b, tol) for f, b in zip(G.factors, _blocks(G, m))])
    if G.family == "SL":
        d = float(np.linalg.det(m))
        if d <= 0:
            raise NumericFailure("cannot retract a matrix with nonpositive determinant to SL")
        m = m / d ** (1.0 / m.shape[0])
    res = G.membership_residual(m)
    if not res < tol:
        raise NumericFailure(f"retraction to {G.name} failed (residual {res:.2e})")
    return m


def affine_family(u0: RepresentationPoint, u1: RepresentationPoint, H: SubgroupSpec,
                  t_min=0.0, t_max=1.0, step=0.1) -> DeformationFamily:
    """Straight-line path between generator images, retracted to the group."""
    if len(u0.images) != len(u1.images) or u0.target != u1.target:
        raise ContractViolation("endpoints must have the same target and generator count")
    G = u0.target

    def point(t):
        imgs = [retract(G, (1 - t) * a + t * b) for a, b in zip(u0.images, u1.images)]
        return RepresentationPoint(G, imgs, u0.orders)

    return DeformationFamily("affine", G, H, point, t_min, t_max, step)


# ---------------------------------------------------------------------------
# scans


@dataclass
class ScanResult:
    family: str
    max_len: int
    points: list            # (t, report)
    transitions: list       # dicts: left, right, from, to
    in_r_intervals: list
    not_in_r_intervals: list

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "max_len": self.max_len,
            "series": [{"t": t, "overall": r.overall, "reasons": r.reasons,
                        "properness": r.properness.get("evidence", {}).get("growth"),
                        "freeness": r.freeness["free"], "injective": r.injectivity["injective"]}
                       for t, r in self.points],
            "transitions": self.transitions,
            "in_r_intervals": [list(iv) for iv in self.in_r_intervals],
            "not_in_r_intervals": [list(iv) for iv in self.not_in_r_intervals],
        }


def _refine(family: DeformationFamily, lo: float, hi: float, v_lo: str, max_len: int, width: float):
    while hi - lo >= width:
        mid = 0.5 * (lo + hi)
        v = is_in_R(family.point(mid), family.G, family.H, max_len).overall
        if v == v_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def deform_scan(family: DeformationFamily, max_len: int, refine_width: float = REFINE_WIDTH) -> ScanResult:
    """Evaluate membership on the grid, then bisect every change of verdict.

    Each maximal run of equal verdicts is reported as ``[a, b]`` with ``a``
    the left end of the bracket entering it and ``b`` the right end of the
    bracket leaving it (grid ends where the run touches them), so the true
    interval lies inside.
    """
    grid = family.grid()
    if not grid:
        raise ContractViolation("empty parameter grid")
    pts = [(t, is_in_R(family.point(t), family.G, family.H, max_len)) for t in grid]
    transitions = []
    brackets = {}
    for i, ((t0, r0), (t1, r1)) in enumerate(zip(pts, pts[1:])):
        if r0.overall != r1.overall:
            lo, hi = _refine(family, t0, t1, r0.overall, max_len, refine_width)
            brackets[i] = (lo, hi)
            transitions.append({"left": lo, "right": hi, "from": r0.overall, "to": r1.overall})

    def intervals(kind):
        out = []
        i = 0
        while i < len(pts):
            if pts[i][1].overall != kind:
                i += 1
                continue
            j = i
            while j + 1 < len(pts) and pts[j + 1][1].overall == kind:
                j += 1
            a = brackets[i - 1][0] if i > 0 else pts[i][0]
            b = brackets[j][1] if j + 1 < len(pts) else pts[j][0]
            out.append((a, b))
            i = j + 1
        return out

    return ScanResult(family.name, max_len, pts, transitions, intervals(IN_R), intervals(NOT_IN_R))


# ---------------------------------------------------------------------------
# local rigidity


def _snap_finite_order(m: np.ndarray, k: int) -> np.ndarray:
    """Nearest element with eigenvalues snapped to k-th roots of unity (same eigenvectors)."""
    w, v = np.linalg.eig(m)
    roots = np.exp(2j * np.pi * np.arange(k) / k)
    snapped = np.array([roots[np.argmin(np.abs(roots - x))] for x in w])
    out = v @ np.diag(snapped) @ np.linalg.inv(v)
    return np.real(out)


def _invariants(u: RepresentationPoint, length: int) -> np.ndarray:
    """Characteristic polynomial coefficients (per factor) of all words up to ``length``."""
    G = u.target
    en = u.group().enumerate_words(length)
    vals = []
    for w in en.words:
        blocks = _blocks(G, w.matrix) if G.is_product else [w.matrix]
        for b in blocks:
            vals.extend(np.real(np.poly(b)))
    return np.array(vals), [w.word for w in en.words]


@dataclass
class RigidityReport:
    verdict: str
    radius: float
    samples: int
    accepted: int
    max_invariant_change: float
    details: list

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "radius": self.radius, "samples": self.samples,
                "accepted": self.accepted, "max_invariant_change": self.max_invariant_change,
                "details": self.details}


def local_rigidity_probe(u: RepresentationPoint, G, H: SubgroupSpec, radius: float, samples: int,
                         rng: np.random.Generator | None = None, max_len: int = 6,
                         invariant_length: int = 3) -> RigidityReport:
    """Sample nearby representations and compare conjugacy invariants with ``u``.

    Perturbations multiply each generator image by ``exp(X)`` with ``X`` a
    random Lie algebra element of norm ``radius``, so they stay in the
    group; generators of finite order are snapped back to that order.
    Samples failing the R-membership evidence are discarded.
    """
    G = parse_group(G)
    if radius < 0:
        raise ContractViolation("radius must be nonnegative")
    if radius == 0 or samples <= 0:
        return RigidityReport(ALL_CONJUGATE, float(radius), int(samples), 0, 0.0,
                              [{"note": "no perturbation: every sample equals u"}])
    rng = rng or np.random.default_rng(0)
    base, _ = _invariants(u, invariant_length)
    basis = G.lie_algebra
    details = []
    accepted = 0
    worst = 0.0
    for _ in range(samples):
        imgs = []
        for m, k in zip(u.images, u.orders):
            x = np.tensordot(rng.normal(size=basis.shape[0]), basis, axes=1)
            x *= radius / max(float(np.linalg.norm(x)), 1e-300)
            p = m @ expm(x)
            if k is not None:
                p = _snap_finite_order(p, k)
            imgs.append(retract(G, p))
        v = RepresentationPoint(G, imgs, u.orders)
        rep = is_in_R(v, G, H, max_len)
        if not rep.in_R:
            details.append({"accepted": False, "reasons": rep.reasons})
            continue
        accepted += 1
        inv, _ = _invariants(v, invariant_length)
        change = float(np.max(np.abs(inv - base)) / max(1.0, float(np.max(np.abs(base)))))
        worst = max(worst, change)
        details.append({"accepted": True, "invariant_change": change})
    verdict = NEARBY_NONCONJUGATE if worst > INVARIANT_TOL else ALL_CONJUGATE
    return RigidityReport(verdict, float(radius), int(samples), accepted, worst, details)
