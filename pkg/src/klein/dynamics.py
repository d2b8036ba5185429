"""Discrete groups at desk scale.

Two kinds of objects live here:

* :class:`FinitelyGeneratedGroup`: generator matrices inside a catalog group,
  with an enumerator of reduced words.  Its Cartan projections feed the
  empirical properness test.
* planar affine actions of Z or Z^2 (:class:`PlanarAction`), with exact
  return-set computations for analytic compact sets, orbit accumulation
  scans and separation tests for the quotient topology.  The hyperbolic
  action ``n.(x, y) = (2^n x, 2^-n y)`` on the punctured plane is the main
  example: it is free and has no accumulation points, yet the segment from
  (1,0) to (0,1) meets infinitely many of its translates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
from mpmath import iv, mp, mpf

from .cartan import nu_many
from .catalog import SubgroupSpec, nu_image
from .cones import PROPER_EVIDENCE, PointCloud, subset_proper_evidence
from .errors import ContractViolation, SameOrbitError, UnsupportedSet
from .groups import parse_group

DEDUP_TOL = 1e-9
CLUSTER_RESOLUTION = 1e-9


# ---------------------------------------------------------------------------
# finitely generated matrix groups


def _letters(k: int) -> list:
    out = []
    for i in range(k):
        c = chr(ord("a") + i)
        out += [c, c.upper()]
    return out


@dataclass
class Word:
    word: str
    matrix: np.ndarray
    inverse: np.ndarray
    nu: np.ndarray

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass
class Enumeration:
    words: list
    collisions: list            # (word, earlier word with the same matrix)
    exhausted: bool             # no new element appeared at the last length
    max_len: int

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return len(self.words)


class FinitelyGeneratedGroup:
    """Subgroup of a catalog group given by generator matrices.

    Letters are ``a, A, b, B, ...`` with the capital letter standing for the
    inverse.  Without ``orders`` the enumeration is of reduced words in the
    free group; a finite order ``k`` for a generator caps its runs, giving
    reduced words of a free product of cyclic groups.  Either way matrices
    equal to an earlier one (relative tolerance 1e-9) are dropped and
    recorded as collisions.
    """

    def __init__(self, ambient, generators, inverses=None, orders=None, check: bool = True):
        self.ambient = parse_group(ambient)
        gens = [np.asarray(g, dtype=float) for g in generators]
        if not gens:
            raise ContractViolation("a finitely generated group needs at least one generator")
        if len(gens) > 13:
            raise ContractViolation("at most 13 generators are supported")
        if check:
            for g in gens:
                self.ambient.check_member(g)
        if inverses is None:
            inverses = [self.ambient.inverse(g) for g in gens]
        self.generators = gens
        self.inverses = [np.asarray(g, dtype=float) for g in inverses]
        self.orders = list(orders) if orders is not None else [None] * len(gens)
        if len(self.orders) != len(gens):
            raise ContractViolation("orders must match the generators")
        self.letters = _letters(len(gens))
        self._mat = {}
        self._inv = {}
        for i, (g, h) in enumerate(zip(self.generators, self.inverses)):
            lo, up = self.letters[2 * i], self.letters[2 * i + 1]
            self._mat[lo], self._inv[lo] = g, h
            self._mat[up], self._inv[up] = h, g

    def _run_limit(self, letter: str) -> float:
        k = self.orders[(ord(letter.lower()) - ord("a"))]
        if k is None:
            return math.inf
        return k // 2 if letter.islower() else (k - 1) // 2

    def _extends(self, word: str, letter: str) -> bool:
        if word and word[-1] == letter.swapcase():
            return False
        run = 1
        for ch in reversed(word):
            if ch != letter:
                break
            run += 1
        return run <= self._run_limit(letter)

    def evaluate(self, word: str) -> np.ndarray:
        m = np.eye(self.ambient.ambient_size)
        for ch in word:
            m = m @ self._mat[ch]
        return m

    def enumerate_words(self, max_len: int, max_words: int = 250_000) -> Enumeration:
        """Reduced words of length 1..max_len ordered by (length, word), deduplicated."""
        if max_len < 1:
            raise ContractViolation("max_len must be at least 1")
        N = self.ambient.ambient_size
        buckets: dict = {}

        # buckets keyed by (log-norm level, quantized generic functional); a match
        # within tolerance can only sit in a neighbouring bucket
        probe = np.sqrt(np.arange(2, N * N + 2, dtype=float))  # fixed generic functional
        pnorm = float(np.linalg.norm(probe))

        def cell(k):
            return DEDUP_TOL * pnorm * math.exp(0.5 * (k + 1))

        def level(m):
            return int(math.floor(2.0 * math.log(max(1.0, float(np.linalg.norm(m))))))

        def key(m):
            k = level(m)
            return k, int(math.floor(float(probe @ m.ravel()) / cell(k)))

        def find(m):
            scale = max(1.0, float(np.linalg.norm(m)))
            k = level(m)
            val = float(probe @ m.ravel())
            for kk in (k - 1, k, k + 1):
                j = int(math.floor(val / cell(kk)))
                for jj in range(j - 2, j + 3):
                    for other, w in buckets.get((kk, jj), ()):
                        if np.linalg.norm(other - m) <= DEDUP_TOL * scale:
                            return w
            return None

        eye = np.eye(N)
        buckets.setdefault(key(eye), []).append((eye, ""))
        words: list = []
        collisions: list = []
        layer = [("", eye, eye)]
        exhausted = False
        for length in range(1, max_len + 1):
            nxt = []
            for w, m, minv in layer:
                for ch in self.letters:
                    if not self._extends(w, ch):
                        continue
                    nm = m @ self._mat[ch]
                    ninv = self._inv[ch] @ minv
                    other = find(nm)
                    if other is not None:
                        collisions.append((w + ch, other))
                        continue
                    buckets.setdefault(key(nm), []).append((nm, w + ch))
                    nxt.append((w + ch, nm, ninv))
            if nxt:
                nus = nu_many(self.ambient, np.array([x[1] for x in nxt]), np.array([x[2] for x in nxt]))
                for (w, m, minv), v in zip(nxt, nus):
                    words.append(Word(w, m, minv, v))
            if len(words) > max_words:
                raise ContractViolation(f"word enumeration exceeded {max_words} elements")
            layer = nxt
            if not nxt:
                exhausted = True
                break
        return Enumeration(words, collisions, exhausted, max_len)

    def point_cloud(self, max_len: int) -> tuple:
        en = self.enumerate_words(max_len)
        r = self.ambient.real_rank
        pts = np.array([w.nu for w in en.words]).reshape(-1, r)
        cloud = PointCloud(pts, [w.word for w in en.words], [w.length for w in en.words])
        return cloud, en


DEFAULT_RADII = (0.5, 1.0, 2.0, 4.0)


@dataclass
class EmpiricalProperness:
    verdict: str
    report: object              # EvidenceReport, or None for finite groups
    words: int
    max_len: int
    finite_group: bool
    collisions: int

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "words": self.words, "max_len": self.max_len,
               "finite_group": self.finite_group, "collisions": self.collisions}
        if self.report is not None:
            out["evidence"] = self.report.to_json()
        return out


def empirical_properly_discontinuous(gamma: FinitelyGeneratedGroup, H: SubgroupSpec, max_len: int,
                                     radii: Sequence[float] = DEFAULT_RADII) -> EmpiricalProperness:
    """Sample ``nu`` of Gamma's words and compare them with ``nu(H)``."""
    if H.ambient != gamma.ambient:
        raise ContractViolation(f"Gamma lives in {gamma.ambient.name} but H in {H.ambient.name}")
    cloud, en = gamma.point_cloud(max_len)
    cone = nu_image(H)
    if en.exhausted:
        # finite group: every return set is finite, so the action is properly discontinuous
        rep = subset_proper_evidence(cloud, cone, radii) if len(cloud) else None
        return EmpiricalProperness(PROPER_EVIDENCE, rep, len(en), max_len, True, len(en.collisions))
    rep = subset_proper_evidence(cloud, cone, radii)
    return EmpiricalProperness(rep.verdict, rep, len(en), max_len, False, len(en.collisions))


# ---------------------------------------------------------------------------
# planar affine actions


Point = tuple  # (Fraction, Fraction)


def to_point(p) -> Point:
    x, y = p
    return (Fraction(x), Fraction(y))


@dataclass(frozen=True)
class PlanarAction:
    """Affine action of Z^rank on a plane domain, with diagonal linear parts.

    ``kind`` is one of ``"hyperbolic"`` (``n.(x,y) = (2^n x, 2^-n y)``),
    ``"contracting"`` (``n.p = 2^-n p``) or ``"translation"``
    (``(m,n).p = p + (m,n)``).
    """

    kind: str

    @property
    def rank(self) -> int:
        return 2 if self.kind == "translation" else 1

    @property
    def punctured(self) -> bool:
        """Whether the domain is the plane minus the origin."""
        return self.kind != "translation"

    @property
    def invariant(self):
        """A continuous invariant function, when one is known in closed form."""
        return "xy" if self.kind == "hyperbolic" else None

    def affine(self, g) -> tuple:
        """``(a, b, t)`` with ``g.(x, y) = (a x + t0, b y + t1)`` in exact arithmetic."""
        if self.kind == "hyperbolic":
            (n,) = g
            s = Fraction(2) ** n
            return s, 1 / s, (Fraction(0), Fraction(0))
        if self.kind == "contracting":
            (n,) = g
            s = Fraction(1, 2) ** n
            return s, s, (Fraction(0), Fraction(0))
        if self.kind == "translation":
            m, n = g
            return Fraction(1), Fraction(1), (Fraction(m), Fraction(n))
        raise ContractViolation(f"unknown action {self.kind!r}")

    def apply(self, g, p) -> Point:
        a, b, t = self.affine(g)
        x, y = to_point(p)
        return (a * x + t[0], b * y + t[1])

    def apply_float(self, g, p) -> np.ndarray:
        a, b, t = self.affine(g)
        return np.array([float(a) * float(p[0]) + float(t[0]), float(b) * float(p[1]) + float(t[1])])

    def elements(self, n_bound: int) -> list:
        rng = range(-n_bound, n_bound + 1)
        if self.rank == 1:
            return [(n,) for n in rng]
        return sorted(itertools.product(rng, rng), key=lambda g: (max(map(abs, g)), g))


ACTIONS = {"hyperbolic": PlanarAction("hyperbolic"), "contracting": PlanarAction("contracting"),
           "translation": PlanarAction("translation")}
HYPERBOLIC = ACTIONS["hyperbolic"]


def get_action(name: str) -> PlanarAction:
    aliases = {"example9": "hyperbolic", "hyperbolic-z": "hyperbolic", "z2-translation": "translation"}
    key = aliases.get(name, name)
    if key not in ACTIONS:
        raise ContractViolation(f"unknown action {name!r}; choose from {', '.join(sorted(ACTIONS))}")
    return ACTIONS[key]


# -- compact sets -------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    start: tuple
    end: tuple


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float


@dataclass(frozen=True)
class Sector:
    """``{(r cos t, r sin t) : r_min <= r <= r_max, t_min <= t <= t_max}``."""
    r_min: float
    r_max: float
    t_min: float
    t_max: float


@dataclass(frozen=True)
class EmptySet:
    pass


def parse_set(spec: dict):
    """Build a compact set from ``{"type": "segment", "start": [..], "end": [..]}`` and friends."""
    kind = spec.get("type")
    if kind == "segment":
        return Segment(tuple(spec["start"]), tuple(spec["end"]))
    if kind == "ball":
        return Ball(tuple(spec["center"]), float(spec["radius"]))
    if kind == "sector":
        return Sector(float(spec["r_min"]), float(spec["r_max"]), float(spec["t_min"]), float(spec["t_max"]))
    if kind == "empty":
        return EmptySet()
    raise UnsupportedSet(f"unsupported set descriptor {kind!r}; use segment, ball, sector or empty")


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, q, r):
    return min(p[0], r[0]) <= q[0] <= max(p[0], r[0]) and min(p[1], r[1]) <= q[1] <= max(p[1], r[1])


def segments_intersect(p1, p2, q1, q2) -> bool:
    """Exact closed-segment intersection (inputs are Fraction points)."""
    d1 = _cross(q1, q2, p1)
    d2 = _cross(q1, q2, p2)
    d3 = _cross(p1, p2, q1)
    d4 = _cross(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return ((d1 == 0 and _on_segment(q1, p1, q2)) or (d2 == 0 and _on_segment(q1, p2, q2))
            or (d3 == 0 and _on_segment(p1, q1, p2)) or (d4 == 0 and _on_segment(p1, q2, p2)))


def min_norm_over_disc(a: float, b: float, c: np.ndarray) -> float:
    """``min |diag(a, b) u + c|`` over the closed unit disc.

    If the unconstrained minimizer lies outside the disc, the minimizer is
    ``u_i = -s_i c_i / (s_i^2 + mu)`` on the unit circle, with ``mu`` the root
    of the (monotone) secular equation, located by bisection.
    """
    s = np.array([a, b], dtype=float)
    c = np.asarray(c, dtype=float)

    def u_of(mu):
        return -s * c / (s * s + mu)

    # unconstrained minimizer (pseudo-inverse for zero scalings)
    u0 = np.where(s != 0, -c / np.where(s != 0, s, 1.0), 0.0)
    if float(np.dot(u0, u0)) <= 1.0:
        return float(np.linalg.norm(s * u0 + c))
    lo, hi = 0.0, 1.0
    while float(np.dot(u_of(hi), u_of(hi))) > 1.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(np.dot(u_of(mid), u_of(mid))) > 1.0:
            lo = mid
        else:
            hi = mid
    u = u_of(hi)
    u = u / max(1.0, float(np.linalg.norm(u)))
    return float(np.linalg.norm(s * u + c))


def _ball_meets_image(action: PlanarAction, g, ball: Ball, target: Ball | None = None) -> bool:
    """Whether ``g.ball`` meets ``target`` (default: the ball itself)."""
    target = target or ball
    a, b, t = action.affine(g)
    r = float(ball.radius)
    c = np.array([float(x) for x in ball.center])
    c2 = np.array([float(x) for x in target.center])
    # g(c + r u) - c2 = diag(a, b) r u + (g(c) - c2)
    gc = np.array([float(a) * c[0] + float(t[0]), float(b) * c[1] + float(t[1])])
    d = min_norm_over_disc(float(a) * r, float(b) * r, gc - c2)
    return d <= float(target.radius) * (1.0 + 1e-12)


def _sector_contains(sec: Sector, x, y) -> bool:
    rho = mp.sqrt(x * x + y * y)
    if not (sec.r_min <= rho <= sec.r_max):
        return False
    th = mp.atan2(y, x)
    two_pi = 2 * mp.pi
    while th < sec.t_min:
        th += two_pi
    return th <= sec.t_max


def _mpq(v: Fraction):
    return mpf(v.numerator) / v.denominator


def _sector_meets_image(action: PlanarAction, g, sec: Sector, max_boxes: int = 4000):
    """Branch and bound over polar boxes of the sector with interval arithmetic.

    Returns True (witness found), False (every box excluded) or None (undecided).
    """
    a, b, t = action.affine(g)
    a_i, b_i, t0, t1 = (iv.mpf(v.numerator) / v.denominator for v in (a, b, t[0], t[1]))
    stack = [(sec.r_min, sec.r_max, sec.t_min, sec.t_max)]
    seen = 0
    while stack:
        r0, r1, s0, s1 = stack.pop()
        seen += 1
        if seen > max_boxes:
            return None
        rho = iv.mpf([r0, r1])
        th = iv.mpf([s0, s1])
        x = a_i * rho * iv.cos(th) + t0
        y = b_i * rho * iv.sin(th) + t1
        rr = x * x + y * y
        if rr.b < sec.r_min ** 2 or rr.a > sec.r_max ** 2:
            continue
        if not (x.a <= 0 <= x.b and y.a <= 0 <= y.b) and not (x.a < 0 and y.a <= 0 <= y.b):
            ang = iv.atan2(y, x)
            lo, hi = float(ang.a), float(ang.b)
            shifts = [k * 2 * math.pi for k in (-1, 0, 1, 2)]
            if all(hi + s < sec.t_min or lo + s > sec.t_max for s in shifts):
                continue
        with mp.workdps(30):
            rm, sm = mpf((r0 + r1) / 2), mpf((s0 + s1) / 2)
            px = _mpq(a) * rm * mp.cos(sm) + _mpq(t[0])
            py = _mpq(b) * rm * mp.sin(sm) + _mpq(t[1])
            if _sector_contains(sec, px, py):
                return True
        if r1 - r0 >= (s1 - s0) * max(r1, 1e-12):
            rm = (r0 + r1) / 2
            stack += [(r0, rm, s0, s1), (rm, r1, s0, s1)]
        else:
            sm = (s0 + s1) / 2
            stack += [(r0, r1, s0, sm), (r0, r1, sm, s1)]
    return False


def meets_image(action: PlanarAction, g, S):
    """Exact test of ``g.S ∩ S ≠ ∅`` (None when the interval search is undecided)."""
    if isinstance(S, EmptySet):
        return False
    if isinstance(S, Segment):
        p, q = to_point(S.start), to_point(S.end)
        return segments_intersect(action.apply(g, p), action.apply(g, q), p, q)
    if isinstance(S, Ball):
        return _ball_meets_image(action, g, S)
    if isinstance(S, Sector):
        return _sector_meets_image(action, g, S)
    raise UnsupportedSet(f"unsupported set {type(S).__name__}")


@dataclass
class ReturnSet:
    members: list
    truncated: bool
    n_bound: int
    undecided: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"members": [list(g) for g in self.members], "truncated": self.truncated,
                "n_bound": self.n_bound, "undecided": [list(g) for g in self.undecided],
                "count": len(self.members)}


def gamma_S(action: PlanarAction, S, n_bound: int) -> ReturnSet:
    """``{g : |g| <= n_bound, g.S ∩ S ≠ ∅}``; ``truncated`` if membership persists at the bound."""
    if n_bound < 0:
        raise ContractViolation("n_bound must be nonnegative")
    if not isinstance(S, (Segment, Ball, Sector, EmptySet)):
        raise UnsupportedSet(f"unsupported set {type(S).__name__}")
    members, undecided = [], []
    for g in action.elements(n_bound):
        hit = meets_image(action, g, S)
        if hit is None:
            undecided.append(g)
        elif hit:
            members.append(g)
    truncated = any(max(map(abs, g)) == n_bound for g in members) and n_bound > 0
    return ReturnSet(members, truncated, n_bound, undecided)


# -- orbits -------------------------------------------------------------------


@dataclass
class AccumulationResult:
    found: bool
    pairs: list
    points_in_window: int
    note: str = ""

    def to_json(self) -> dict:
        return {"accumulation_found": self.found, "close_pairs": [list(p) for p in self.pairs[:20]],
                "points_in_window": self.points_in_window, "note": self.note}


def orbit(action: PlanarAction, p, n_bound: int) -> list:
    return [(g, action.apply_float(g, p)) for g in action.elements(n_bound)]


def accumulation_scan(action: PlanarAction, p, n_bound: int, window=(-10.0, 10.0, -10.0, 10.0),
                      origin_radius: float | None = 1e-3) -> AccumulationResult:
    """Look for a Cauchy cluster (two orbit points within 1e-9) inside a window.

    ``origin_radius`` removes a ball around the origin from the window; pass
    ``None`` to keep it, in which case a cluster converging to the origin is
    reported with a note that the origin is not part of the domain.
    """
    from scipy.spatial import cKDTree

    x0, x1, y0, y1 = window
    pts, elems = [], []
    for g, q in orbit(action, p, n_bound):
        if not (x0 <= q[0] <= x1 and y0 <= q[1] <= y1):
            continue
        if origin_radius is not None and float(np.hypot(*q)) <= origin_radius:
            continue
        pts.append(q)
        elems.append(g)
    notes = []
    if origin_radius is not None:
        notes.append(f"ball of radius {origin_radius:g} around the origin excluded from the window")
    if len(pts) < 2:
        return AccumulationResult(False, [], len(pts), "; ".join(notes))
    tree = cKDTree(np.array(pts))
    pairs = sorted(tree.query_pairs(CLUSTER_RESOLUTION))
    pairs = [(elems[i], elems[j]) for i, j in pairs if elems[i] != elems[j]]
    found = bool(pairs)
    if found and action.punctured:
        near = [float(np.hypot(*pts[elems.index(a)])) for a, _ in pairs]
        if origin_radius is None and max(near) < 1e-6:
            notes.append("cluster converges to the origin, which is excluded from the domain")
    return AccumulationResult(found, pairs, len(pts), "; ".join(notes))


def stabilizer(action: PlanarAction, p, n_bound: int) -> list:
    """Group elements (up to the bound) fixing ``p`` exactly."""
    q = to_point(p)
    return [g for g in action.elements(n_bound) if action.apply(g, q) == q]


def same_orbit(action: PlanarAction, p, q, n_bound: int):
    qq = to_point(q)
    return next((g for g in action.elements(n_bound) if action.apply(g, p) == qq), None)


def _xy_range(c, eps) -> tuple:
    """Enclosure of ``x*y`` over the closed disc of radius eps around c."""
    x = iv.mpf([c[0] - eps, c[0] + eps])
    y = iv.mpf([c[1] - eps, c[1] + eps])
    r = x * y
    return float(r.a), float(r.b)


@dataclass
class SeparationResult:
    separable: bool
    per_epsilon: list          # dicts: eps, saturations_meet, witness, certified
    gap: tuple | None = None

    @property
    def status(self) -> str:
        return "Separable" if self.separable else "NonSeparableEvidence"

    def to_json(self) -> dict:
        return {"status": self.status, "per_epsilon": self.per_epsilon,
                "gap": None if self.gap is None else list(self.gap)}


def separation_test(action: PlanarAction, p, q, epsilons: Sequence[float], n_bound: int = 64) -> SeparationResult:
    """Do the orbits of ``p`` and ``q`` have disjoint saturated neighbourhoods?

    For each ``eps`` the saturations of the eps-balls meet iff some group
    element carries one ball onto a set meeting the other.  Witnesses are
    found by an exact ellipse-disc test per element.  Disjointness is
    certified either by a gap between the ranges of a continuous invariant
    (``xy`` for the hyperbolic action) or, for translations, by the distance
    from ``q - p`` to the lattice.
    """
    eps_list = [float(e) for e in epsilons]
    if not eps_list or any(e <= 0 for e in eps_list):
        raise ContractViolation("epsilons must be positive")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ContractViolation("epsilons must be strictly decreasing")
    g = same_orbit(action, p, q, n_bound)
    if g is not None:
        raise SameOrbitError(f"{tuple(q)} = {list(g)} . {tuple(p)}: the points lie on the same orbit")
    pf = tuple(float(x) for x in p)
    qf = tuple(float(x) for x in q)
    rows = []
    gap = None
    for eps in eps_list:
        bp, bq = Ball(pf, eps), Ball(qf, eps)
        certified_disjoint = False
        if action.invariant == "xy":
            lo_p, hi_p = _xy_range(pf, eps)
            lo_q, hi_q = _xy_range(qf, eps)
            if hi_p < lo_q or hi_q < lo_p:
                certified_disjoint = True
                gap = (min(hi_p, hi_q), max(lo_p, lo_q))
        elif action.kind == "translation":
            d = np.array(qf) - np.array(pf)
            dist = float(np.linalg.norm(d - np.round(d)))
            if dist > 2 * eps:
                certified_disjoint = True
                gap = (2 * eps, dist)
        witness = None
        if not certified_disjoint:
            for h in action.elements(n_bound):
                if _ball_meets_image(action, h, bp, bq):
                    witness = list(h)
                    break
        rows.append({"eps": eps, "saturations_meet": witness is not None, "witness": witness,
                     "certified_disjoint": certified_disjoint})
    separable = any(r["certified_disjoint"] for r in rows)
    return SeparationResult(separable, rows, gap if separable else None)


# -- the equivalence "properly discontinuous = proper and discrete" ----------


@dataclass
class ActionVerdicts:
    properly_discontinuous: bool
    proper: bool
    discrete: bool
    free: bool
    details: dict

    def to_json(self) -> dict:
        return {"properly_discontinuous": self.properly_discontinuous, "proper": self.proper,
                "discrete": self.discrete, "free": self.free, "details": self.details}


def action_verdicts(action: PlanarAction, test_sets: Sequence, points: Sequence, n_bound: int = 40) -> ActionVerdicts:
    """Evaluate both sides of the equivalence on the same sampled data.

    * properly discontinuous: every return set ``Gamma_S`` is finite, i.e.
      not truncated at the bound;
    * proper: every ``Gamma_S`` is relatively compact in Gamma.  Gamma is Z or
      Z^2 with the discrete topology, so this means bounded in the word norm,
      read off the same return sets;
    * discrete: Gamma is a discrete group (always true here) and the sampled
      orbits have no accumulation points in the domain.
    """
    rets = [gamma_S(action, S, n_bound) for S in test_sets]
    finite = all(not r.truncated for r in rets)
    bounded = all(not r.members or max(max(map(abs, g)) for g in r.members) < n_bound for r in rets)
    acc = [accumulation_scan(action, p, n_bound) for p in points]
    discrete = not any(a.found for a in acc)
    free = all(stabilizer(action, p, n_bound) == [tuple([0] * action.rank)] for p in points)
    return ActionVerdicts(finite, bounded, discrete, free,
                          {"return_set_sizes": [len(r.members) for r in rets],
                           "truncated": [r.truncated for r in rets]})


# -- pictures -------------------------------------------------------------------


def orbit_svg(action: PlanarAction, points: Sequence, n_bound: int, window=(-4.0, 4.0, -4.0, 4.0),
              size: int = 480) -> str:
    """SVG drawing of orbits, one small cross per orbit point."""
    x0, x1, y0, y1 = window
    sx = size / (x1 - x0)
    sy = size / (y1 - y0)
    colors = ["#1f4e79", "#a12b2b", "#2b7a3d", "#7a5a1f", "#5a2b7a"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    ox, oy = -x0 * sx, y1 * sy
    parts.append(f'<line x1="0" y1="{oy:.2f}" x2="{size}" y2="{oy:.2f}" stroke="#bbb"/>')
    parts.append(f'<line x1="{ox:.2f}" y1="0" x2="{ox:.2f}" y2="{size}" stroke="#bbb"/>')
    for k, p in enumerate(points):
        col = colors[k % len(colors)]
        for _, q in orbit(action, p, n_bound):
            if not (x0 <= q[0] <= x1 and y0 <= q[1] <= y1):
                continue
            u, v = (q[0] - x0) * sx, (y1 - q[1]) * sy
            parts.append(f'<path d="M{u - 3:.2f},{v - 3:.2f}L{u + 3:.2f},{v + 3:.2f}'
                         f'M{u - 3:.2f},{v + 3:.2f}L{u + 3:.2f},{v - 3:.2f}" stroke="{col}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def word_stream(gamma: FinitelyGeneratedGroup, max_len: int) -> Iterator[tuple]:
    """``(word, matrix, nu)`` triples in (length, word) order."""
    for w in gamma.enumerate_words(max_len):
        yield w.word, w.matrix, w.nu
