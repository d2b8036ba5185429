"""Exact rational vectors, exact Gaussian elimination and an exact LP oracle.

Cone predicates must not round, so every vector that reaches the cone engine
is a tuple of :class:`fractions.Fraction`.  Floating inputs are snapped with a
continued-fraction approximation (denominator bound 10**6) and the snap error
is reported back to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch

MAX_DENOMINATOR = 10**6


def to_fraction(x, max_denominator: int = MAX_DENOMINATOR) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(float(x)).limit_denominator(max_denominator)


@dataclass(frozen=True)
class RationalVector:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(to_fraction(c) for c in self.coords))

    @classmethod
    def of(cls, *values) -> "RationalVector":
        return cls(tuple(values))

    @classmethod
    def snap(cls, values: Iterable[float], max_denominator: int = MAX_DENOMINATOR):
        """Rationalize floats; returns ``(vector, max_abs_snap_error)``."""
        values = list(values)
        coords = tuple(to_fraction(v, max_denominator) for v in values)
        err = max((abs(float(c) - float(v)) for c, v in zip(coords, values)), default=0.0)
        return cls(coords), err

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other: "RationalVector"):
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RationalVector":
        return RationalVector(tuple(-a for a in self.coords))

    def scale(self, c) -> "RationalVector":
        c = to_fraction(c)
        return RationalVector(tuple(c * a for a in self.coords))

    def dot(self, other: "RationalVector") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def primitive(self) -> "RationalVector":
        return RationalVector(primitive(self.coords))

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coords]


def primitive(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Positive multiple of ``v`` with coprime integer entries (zero stays zero)."""
    v = [to_fraction(c) for c in v]
    if all(c == 0 for c in v):
        return tuple(Fraction(0) for _ in v)
    den = 1
    for c in v:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in v]
    g = 0
    for k in ints:
        g = gcd(g, abs(k))
    return tuple(Fraction(k // g) for k in ints)


def fraction_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    m = [[to_fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """Exact basis of ``{x : row . x = 0 for every row}`` (primitive integer vectors)."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(primitive(v))
    return basis


def span_key(vectors: Sequence[Sequence[Fraction]], dim: int) -> tuple:
    """Canonical hashable key of the linear span of ``vectors``."""
    vs = [v for v in vectors if any(c != 0 for c in v)]
    if not vs:
        return ()
    red, _ = rref(vs, dim)
    return tuple(red)


def mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(dot(row, v) for row in m)


def transpose(m: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    return [tuple(col) for col in zip(*m)]


def feasible_nonnegative(a_eq: Sequence[Sequence[Fraction]], b_eq: Sequence[Fraction], nvars: int):
    """Exact phase-one simplex: find ``x >= 0`` with ``A x = b`` or return ``None``.

    Bland's rule guarantees termination; all arithmetic is in ``Fraction``.
    """
    m = len(a_eq)
    if m == 0:
        return tuple(Fraction(0) for _ in range(nvars))
    rows = []
    for r, b in zip(a_eq, b_eq):
        r = [to_fraction(x) for x in r]
        b = to_fraction(b)
        if b < 0:
            r = [-x for x in r]
            b = -b
        rows.append(r + [Fraction(int(i == len(rows))) for i in range(m)] + [b])
    width = nvars + m
    basis = [nvars + i for i in range(m)]
    obj = [Fraction(0)] * (width + 1)
    for row in rows:
        for j in range(nvars):
            obj[j] -= row[j]
        obj[width] -= row[width]

    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[width] / row[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # cannot happen in phase one (objective bounded below)
            break
        pr = best[1]
        piv = rows[pr][enter]
        rows[pr] = [x / piv for x in rows[pr]]
        for i in range(m):
            if i != pr and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[pr])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [a - f * b for a, b in zip(obj, rows[pr])]
        basis[pr] = enter

    if obj[width] != 0:
        return None
    x = [Fraction(0)] * nvars
    for i, bvar in enumerate(basis):
        if bvar < nvars:
            x[bvar] = rows[i][width]
    return tuple(x)
