"""Classical reductive matrix groups, realized as real matrix groups.

Every group is stored as a closed subgroup of some GL(N, R) stable under
transpose, so that ``K = G ∩ O(N)`` is a maximal compact subgroup and the
Cartan projection can be read off the singular values of the realization.

* ``GL(n)``, ``SL(n)``: the defining representation.
* ``O(p,q)``, ``SO(p,q)``: preserve ``J = diag(I_p, -I_q)``.
* ``U(p,q)``: complex matrices ``A + iB`` as ``[[A, -B], [B, A]]`` (size 2(p+q)).
* ``Sp(p,q)``: right H-linear maps of H^(p+q) = R^(4(p+q)) preserving the real
  part of the quaternionic hermitian form (size 4(p+q)).
* ``Spin(8,1)``: the 16-dimensional real spin representation; it preserves
  ``diag(I_8, -I_8)`` and so sits inside ``O(8,8)``.
* ``R(n)``: the vector group R^n, realized as positive diagonal matrices.
* products: block diagonal.

Each group also carries the data of its restricted Weyl chamber in a fixed
coordinate system of length ``real_rank`` (the "rank frame").
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import MembershipError, SingularInput, UnsupportedGroup
from .linalg import SINGULAR_DET, block_diag, nullspace

FAMILIES = ("GL", "SL", "O", "SO", "U", "Sp", "Spin", "R")
MAX_SIZE = 32
_CANON = {f.lower(): f for f in FAMILIES}


@dataclass(frozen=True)
class GroupDescriptor:
    family: str
    params: tuple = ()
    factors: tuple = ()

    # -- naming ----------------------------------------------------------
    @property
    def name(self) -> str:
        if self.family == "Product":
            return "x".join(f.name for f in self.factors)
        if self.family in ("GL", "SL", "R"):
            return f"{self.family}({self.params[0]})"
        p, q = self.params
        if q == 0 and self.family != "Spin":
            return f"{self.family}({p})"
        return f"{self.family}({p},{q})"

    def __str__(self):
        return self.name

    @property
    def is_product(self) -> bool:
        return self.family == "Product"

    @property
    def n(self) -> int:
        """Number of (complex, quaternionic) coordinates of the natural representation."""
        if self.family in ("GL", "SL", "R"):
            return self.params[0]
        return sum(self.params)

    # -- sizes and invariants --------------------------------------------
    @property
    def ambient_size(self) -> int:
        f = self.family
        if f == "Product":
            return sum(x.ambient_size for x in self.factors)
        if f in ("GL", "SL", "R", "O", "SO"):
            return self.n
        if f == "U":
            return 2 * self.n
        if f == "Sp":
            return 4 * self.n
        return 16

    @property
    def real_rank(self) -> int:
        f = self.family
        if f == "Product":
            return sum(x.real_rank for x in self.factors)
        if f in ("GL", "R"):
            return self.n
        if f == "SL":
            return self.n - 1
        return min(self.params)

    @property
    def d_dim(self) -> int:
        f = self.family
        if f == "Product":
            return sum(x.d_dim for x in self.factors)
        n = self.n
        if f == "GL":
            return n * (n + 1) // 2
        if f == "SL":
            return n * (n + 1) // 2 - 1
        if f == "R":
            return n
        p, q = self.params
        return {"O": 1, "SO": 1, "U": 2, "Sp": 4, "Spin": 1}[f] * p * q

    @property
    def is_compact(self) -> bool:
        return self.d_dim == 0

    @property
    def chamber_type(self) -> str:
        """"A" (GL), "A0" (SL, trace-zero), "BC" (signed), "flat" (R) or "product"."""
        f = self.family
        if f == "Product":
            return "product"
        return {"GL": "A", "SL": "A0", "R": "flat"}.get(f, "BC")

    # -- defining equations ------------------------------------------------
    @cached_property
    def form(self) -> np.ndarray | None:
        """Symmetric matrix F with g^T F g = F, for the form-preserving families."""
        f = self.family
        if f in ("O", "SO"):
            p, q = self.params
            return np.diag([1.0] * p + [-1.0] * q)
        if f in ("U", "Sp"):
            p, q = self.params
            j = [1.0] * p + [-1.0] * q
            return np.diag(j * (2 if f == "U" else 4))
        if f == "Spin":
            return np.diag([1.0] * 8 + [-1.0] * 8)
        return None

    @cached_property
    def commutant(self) -> list:
        """Matrices every group element must commute with."""
        n = self.n
        if self.family == "U":
            return [complex_structure(n)]
        if self.family == "Sp":
            return list(quaternion_structures(n))
        return []

    def membership_residual(self, g) -> float:
        """Size of the failure of ``g`` to satisfy the defining equations.

        Residuals are relative to ``max(1, ||g||^2)`` so that long words with
        large entries are judged on the same footing as short ones.
        """
        g = np.asarray(g, dtype=float)
        N = self.ambient_size
        if g.shape != (N, N):
            return float("inf")
        if not np.all(np.isfinite(g)):
            return float("inf")
        scale = max(1.0, float(np.linalg.norm(g)) ** 2)
        f = self.family
        if f == "Product":
            res = 0.0
            i = 0
            mask = np.ones((N, N), dtype=bool)
            for fac in self.factors:
                k = fac.ambient_size
                res = max(res, fac.membership_residual(g[i:i + k, i:i + k]))
                mask[i:i + k, i:i + k] = False
                i += k
            return max(res, float(np.linalg.norm(g[mask])) / max(1.0, float(np.linalg.norm(g))))
        if f == "GL":
            return 0.0
        if f == "SL":
            return abs(float(np.linalg.det(g)) - 1.0)
        if f == "R":
            off = g - np.diag(np.diag(g))
            neg = np.sum(np.maximum(0.0, -np.diag(g)))
            return float(np.linalg.norm(off)) / max(1.0, float(np.linalg.norm(g))) + (
                float("inf") if np.any(np.diag(g) <= 0) else 0.0) + float(neg)
        F = self.form
        res = float(np.linalg.norm(g.T @ F @ g - F)) / scale
        for c in self.commutant:
            res = max(res, float(np.linalg.norm(g @ c - c @ g)) / max(1.0, float(np.linalg.norm(g))))
        if f == "SO":
            res = max(res, abs(float(np.linalg.det(g)) - 1.0))
        if f == "Spin":
            cl = clifford_vectors()
            ginv = F @ g.T @ F
            for c in cl:
                y = g @ c @ ginv
                coef = np.array([np.sum(y * b) / 16.0 for b in cl])
                r = y - np.tensordot(coef, cl, axes=1)
                res = max(res, float(np.linalg.norm(r)) / scale)
        return res

    def check_member(self, g, tol: float = 1e-9):
        r = self.membership_residual(g)
        if not r < tol:
            raise MembershipError(f"matrix is not an element of {self.name}", r)

    def inverse(self, g) -> np.ndarray:
        """Inverse of a group element, using the defining form when there is one."""
        g = np.asarray(g, dtype=float)
        f = self.family
        if f == "Product":
            blocks = []
            i = 0
            for fac in self.factors:
                k = fac.ambient_size
                blocks.append(fac.inverse(g[i:i + k, i:i + k]))
                i += k
            return block_diag(*blocks)
        if self.form is not None:
            F = self.form
            return F @ g.T @ F
        if f == "R":
            return np.diag(1.0 / np.diag(g))
        if g.shape == (2, 2):
            det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
            if abs(det) <= SINGULAR_DET:
                raise SingularInput("matrix is singular (|det| <= 1e-14)")
            return np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]]) / det
        if abs(np.linalg.det(g)) <= SINGULAR_DET:
            raise SingularInput("matrix is singular (|det| <= 1e-14)")
        return np.linalg.inv(g)

    # -- Lie algebra -------------------------------------------------------
    @cached_property
    def lie_algebra(self) -> np.ndarray:
        """Orthonormal (Frobenius) basis of the Lie algebra, shape (dim, N, N)."""
        return _lie_algebra(self, None)

    @cached_property
    def p_part(self) -> np.ndarray:
        """Basis of the symmetric part of the Lie algebra (the -1 eigenspace of X -> -X^T)."""
        return _lie_algebra(self, "sym")

    @cached_property
    def k_part(self) -> np.ndarray:
        return _lie_algebra(self, "skew")

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        """``exp`` of a random Lie algebra element; Gaussian coefficients with std ``scale``."""
        basis = self.lie_algebra
        if basis.shape[0] == 0:
            return np.eye(self.ambient_size)
        x = np.tensordot(rng.normal(scale=scale, size=basis.shape[0]), basis, axes=1)
        return _clean(self, expm(x))

    def random_compact(self, rng: np.random.Generator) -> np.ndarray:
        """Random element of the maximal compact subgroup ``K = G ∩ O(N)``."""
        basis = self.k_part
        if basis.shape[0] == 0:
            return np.eye(self.ambient_size)
        x = np.tensordot(rng.normal(scale=2.0, size=basis.shape[0]), basis, axes=1)
        return expm(x)

    # -- rank frame: chamber and Weyl group -------------------------------
    def split_frame(self, x):
        """Split a rank-frame vector of a product into per-factor pieces."""
        out = []
        i = 0
        for fac in self.factors:
            out.append(x[i:i + fac.real_rank])
            i += fac.real_rank
        return out

    def chamber_inequalities(self) -> list:
        """Rows ``a`` (rational) with ``a . x >= 0`` cutting out the dominant chamber."""
        r = self.real_rank
        t = self.chamber_type
        if t == "product":
            rows = []
            off = 0
            for fac in self.factors:
                for a in fac.chamber_inequalities():
                    rows.append([Fraction(0)] * off + list(a) + [Fraction(0)] * (r - off - fac.real_rank))
                off += fac.real_rank
            return rows
        if r == 0 or t == "flat":
            return []
        rows = []
        for i in range(r - 1):
            rows.append([Fraction(int(j == i) - int(j == i + 1)) for j in range(r)])
        if t == "BC":
            rows.append([Fraction(int(j == r - 1)) for j in range(r)])
        elif t == "A0":
            last = [Fraction(1)] * r
            last[r - 1] += 1
            rows.append(last)
        return rows

    def weyl_generators(self) -> list:
        """Simple reflections of the Weyl group as rational matrices on the rank frame."""
        r = self.real_rank
        t = self.chamber_type
        if t == "product":
            gens = []
            off = 0
            for fac in self.factors:
                for m in fac.weyl_generators():
                    full = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
                    k = fac.real_rank
                    for i in range(k):
                        for j in range(k):
                            full[off + i][off + j] = m[i][j]
                    gens.append(full)
                off += fac.real_rank
            return gens
        if r == 0 or t == "flat":
            return []

        def eye():
            return [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]

        gens = []
        for i in range(r - 1):
            m = eye()
            m[i][i] = m[i + 1][i + 1] = Fraction(0)
            m[i][i + 1] = m[i + 1][i] = Fraction(1)
            gens.append(m)
        m = eye()
        if t == "BC":
            m[r - 1][r - 1] = Fraction(-1)
            gens.append(m)
        elif t == "A0":
            m[r - 1] = [Fraction(-1)] * r
            gens.append(m)
        return gens

    def canonicalize(self, x) -> np.ndarray:
        """Move a rank-frame vector into the closed dominant chamber."""
        x = np.asarray(x, dtype=float)
        t = self.chamber_type
        if t == "product":
            return np.concatenate([f.canonicalize(p) for f, p in zip(self.factors, self.split_frame(x))]
                                  or [np.zeros(0)])
        if t == "flat" or x.size == 0:
            return x.copy()
        if t == "A":
            return np.sort(x)[::-1].copy()
        if t == "A0":
            full = np.append(x, -np.sum(x))
            return np.sort(full)[::-1][:-1].copy()
        return np.sort(np.abs(x))[::-1].copy()

    def opposition(self, x) -> np.ndarray:
        """The map ``nu(g) -> nu(g^-1)`` on dominant vectors."""
        x = np.asarray(x, dtype=float)
        t = self.chamber_type
        if t == "product":
            return np.concatenate([f.opposition(p) for f, p in zip(self.factors, self.split_frame(x))]
                                  or [np.zeros(0)])
        if t == "flat":
            return -x
        if t == "A":
            return -x[::-1]
        if t == "A0":
            full = np.append(x, -np.sum(x))
            return (-full[::-1])[:-1]
        return x.copy()

    def frame_from_singular(self, s: np.ndarray) -> np.ndarray:
        """Rank-frame vector from the descending half-log singular values of the realization."""
        f = self.family
        r = self.real_rank
        if f in ("GL",):
            return s.copy()
        if f == "SL":
            return s[: r].copy()
        if f in ("O", "SO"):
            return s[:r].copy()
        if f == "U":
            return s[0:2 * r:2].copy()
        if f == "Sp":
            return s[0:4 * r:4].copy()
        if f == "Spin":
            return 2.0 * s[:1]
        raise UnsupportedGroup(f"no singular-value frame for {self.name}")

    @property
    def needs_full_spectrum(self) -> bool:
        return self.family in ("GL", "SL")


def _clean(g: GroupDescriptor, m: np.ndarray) -> np.ndarray:
    if g.family == "SL":
        d = np.linalg.det(m)
        return m / abs(d) ** (1.0 / m.shape[0])
    return m


# ---------------------------------------------------------------------------
# special structures


@lru_cache(maxsize=None)
def complex_structure(n: int) -> np.ndarray:
    z = np.zeros((n, n))
    i = np.eye(n)
    return np.block([[z, -i], [i, z]])


@lru_cache(maxsize=None)
def quaternion_structures(n: int):
    """Right multiplication by i and by j on H^n = R^(4n), coordinates (a | b | c | d)."""
    z = np.zeros((n, n))
    e = np.eye(n)
    # x = a + b i + c j + d k;  x i = -b + a i + d j - c k;  x j = -c - d i + a j + b k
    ri = np.block([[z, -e, z, z], [e, z, z, z], [z, z, z, e], [z, z, -e, z]])
    rj = np.block([[z, z, -e, z], [z, z, z, -e], [e, z, z, z], [z, e, z, z]])
    return ri, rj


_PAULI = {
    "I": np.eye(2),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]]),
    "E": np.array([[0.0, 1.0], [-1.0, 0.0]]),
}
_ANTI = {("X", "Z"), ("Z", "X"), ("X", "E"), ("E", "X"), ("Z", "E"), ("E", "Z")}


def _kron(word: str) -> np.ndarray:
    out = np.eye(1)
    for ch in word:
        out = np.kron(out, _PAULI[ch])
    return out


def _anticommute(u: str, v: str) -> bool:
    return sum((a, b) in _ANTI for a, b in zip(u, v)) % 2 == 1


@lru_cache(maxsize=None)
def spin_gammas() -> tuple:
    """Nine mutually anticommuting symmetric involutions of R^16.

    The ninth is ``diag(I_8, -I_8)``; the first eight are found by a
    deterministic search among fourfold tensor products of 2x2 blocks.
    """
    import itertools

    last = "ZIII"
    cands = ["".join(w) for w in itertools.product("IXZE", repeat=4)
             if w.count("E") % 2 == 0 and "".join(w) != "IIII" and _anticommute("".join(w), last)]

    def search(chosen, start):
        if len(chosen) == 8:
            return chosen
        for i in range(start, len(cands)):
            c = cands[i]
            if all(_anticommute(c, d) for d in chosen):
                out = search(chosen + [c], i + 1)
                if out:
                    return out
        return None

    words = search([], 0)
    if words is None:  # pragma: no cover - the search space is fixed
        raise RuntimeError("no spin representation found")
    return tuple(_kron(w) for w in words) + (_kron(last),)


@lru_cache(maxsize=None)
def clifford_vectors() -> np.ndarray:
    """Images of an orthonormal basis of R^(8,1) inside End(R^16)."""
    g = spin_gammas()
    g9 = g[8]
    return np.array([gi @ g9 for gi in g[:8]] + [g9])


# ---------------------------------------------------------------------------
# Lie algebras


def _constraint_columns(N: int, maps, support=None) -> np.ndarray:
    """Matrix of the linear map ``X -> (m(X) for m in maps)`` on the given matrix units."""
    if support is None:
        support = [(i, j) for i in range(N) for j in range(N)]
    cols = []
    for i, j in support:
        e = np.zeros((N, N))
        e[i, j] = 1.0
        cols.append(np.concatenate([m(e).ravel() for m in maps]) if maps else np.zeros(0))
    return np.array(cols).T, support


def _lie_algebra(g: GroupDescriptor, part: str | None) -> np.ndarray:
    N = g.ambient_size
    f = g.family
    if f == "Product":
        blocks = []
        off = 0
        for fac in g.factors:
            sub = _lie_algebra(fac, part)
            k = fac.ambient_size
            for b in sub:
                m = np.zeros((N, N))
                m[off:off + k, off:off + k] = b
                blocks.append(m)
            off += k
        return np.array(blocks).reshape(-1, N, N)
    if f == "Spin":
        gam = spin_gammas()
        mats = []
        if part in (None, "skew"):
            mats += [gam[i] @ gam[j] for i in range(8) for j in range(i + 1, 8)]
        if part in (None, "sym"):
            mats += list(gam[:8])
        mats = [m / np.linalg.norm(m) for m in mats]
        return np.array(mats)

    maps = []
    support = None
    if f == "R":
        support = [(i, i) for i in range(N)]
    if f == "SL":
        maps.append(lambda x: np.array([np.trace(x)]))
    F = g.form
    if F is not None:
        maps.append(lambda x, F=F: x.T @ F + F @ x)
    for c in g.commutant:
        maps.append(lambda x, c=c: x @ c - c @ x)
    if part == "sym":
        maps.append(lambda x: x - x.T)
    elif part == "skew":
        maps.append(lambda x: x + x.T)
    a, support = _constraint_columns(N, maps, support)
    if a.size == 0:
        ker = np.eye(len(support))
    else:
        ker = nullspace(a)
    basis = []
    for col in ker.T:
        m = np.zeros((N, N))
        for c, (i, j) in zip(col, support):
            m[i, j] = c
        basis.append(m)
    return np.array(basis).reshape(-1, N, N)


# ---------------------------------------------------------------------------
# parsing


_SINGLE = re.compile(r"^([A-Za-z]+)\(([^()]*)\)$")


def _bad(text: str, why: str):
    sugg = difflib.get_close_matches(text, example_names(), n=3, cutoff=0.4)
    hint = f"; nearest catalog entries: {', '.join(sugg)}" if sugg else ""
    raise UnsupportedGroup(f"cannot parse group {text!r}: {why}{hint}")


def example_names() -> list:
    names = [f"GL({n})" for n in range(1, 7)] + [f"SL({n})" for n in range(2, 9)]
    names += [f"O({p},{q})" for p in range(0, 9) for q in range(0, 9) if p + q >= 1]
    names += [f"U({p},{q})" for p in range(0, 5) for q in range(0, 5) if p + q >= 1]
    names += ["Sp(1,1)", "Sp(2,1)", "Spin(8,1)", "R(1)", "R(2)", "SL(2)xSL(2)"]
    return names


def _make_single(text: str) -> GroupDescriptor:
    m = _SINGLE.match(text)
    if not m:
        _bad(text, "expected FAMILY(p,q)")
    fam_raw, args = m.group(1), m.group(2)
    fam = _CANON.get(fam_raw.lower())
    if fam is None:
        _bad(text, f"unknown family {fam_raw!r}")
    parts = [a for a in args.split(",") if a != ""]
    if parts and parts[-1].upper() in ("R", "ℝ"):
        if fam not in ("GL", "SL"):
            _bad(text, "field suffix only applies to GL and SL")
        parts = parts[:-1]
    try:
        nums = tuple(int(a) for a in parts)
    except ValueError:
        _bad(text, "parameters must be integers")
    if any(x < 0 for x in nums):
        _bad(text, "parameters must be nonnegative")
    if fam in ("GL", "SL", "R"):
        if len(nums) != 1:
            _bad(text, f"{fam} takes one parameter")
        n = nums[0]
        if n < (2 if fam == "SL" else 1):
            _bad(text, "size too small")
        desc = GroupDescriptor(fam, (n,))
    else:
        if len(nums) == 1:
            nums = (nums[0], 0)
        if len(nums) != 2:
            _bad(text, f"{fam} takes one or two parameters")
        if sum(nums) < 1:
            _bad(text, "p + q must be positive")
        if fam == "Spin" and nums != (8, 1):
            _bad(text, "only Spin(8,1) is available")
        desc = GroupDescriptor(fam, nums)
    if desc.ambient_size > MAX_SIZE:
        _bad(text, f"realization of size {desc.ambient_size} exceeds {MAX_SIZE}")
    return desc


def parse_group(text) -> GroupDescriptor:
    """Parse ``"O(3,2)"``, ``"SL(3,R)"``, ``"SO(2)"``, ``"SL(2)xSL(2)"`` and the like."""
    if isinstance(text, GroupDescriptor):
        return text
    s = re.sub(r"\s+", "", str(text)).replace("×", "x")
    if not s:
        _bad(str(text), "empty name")
    parts = re.split(r"x(?=[A-Za-z])", s)
    if len(parts) == 1:
        return _make_single(parts[0])
    return product(*[_make_single(p) for p in parts])


def product(*factors: GroupDescriptor) -> GroupDescriptor:
    flat = []
    for f in factors:
        flat.extend(f.factors if f.is_product else [f])
    if len(flat) == 1:
        return flat[0]
    desc = GroupDescriptor("Product", (), tuple(flat))
    if desc.ambient_size > MAX_SIZE:
        raise UnsupportedGroup(f"product realization of size {desc.ambient_size} exceeds {MAX_SIZE}")
    return desc


def real_rank(g) -> int:
    return parse_group(g).real_rank


def d_dim(g) -> int:
    return parse_group(g).d_dim
