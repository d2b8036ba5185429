"""Cartan projection ``nu: G -> a`` for the catalog groups.

For ``g`` in ``GL(n)`` the projection is half the logarithm of the
eigenvalues of ``g^T g`` in descending order.  Every other family is read off
the same singular-value data of its real realization and then folded to the
group's own rank frame (see :meth:`GroupDescriptor.frame_from_singular`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, SingularInput
from .groups import GroupDescriptor, parse_group
from .linalg import as_matrix, gram, sym_eigen, sym_eigvals_batch

EIGEN_FLOOR = 1e-14


@dataclass(frozen=True)
class CartanVector:
    coords: tuple
    chamber_canonical: bool = True
    full: tuple | None = None  # trace-zero n-vector for SL(n)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(x) for x in self.coords))
        if self.full is not None:
            object.__setattr__(self, "full", tuple(float(x) for x in self.full))

    def as_array(self) -> np.ndarray:
        return np.array(self.coords)

    def __len__(self):
        return len(self.coords)

    def to_json(self) -> dict:
        out = {"coords": list(self.coords), "chamber_canonical": self.chamber_canonical}
        if self.full is not None:
            out["full"] = list(self.full)
        return out


def _half_logs(sym: np.ndarray, count: int) -> np.ndarray:
    """Half-logs of the ``count`` largest eigenvalues of a Gram matrix."""
    w, _ = sym_eigen(sym)
    w = w[:count]
    if w[-1] < EIGEN_FLOOR:
        raise SingularInput("Gram matrix has an eigenvalue below 1e-14")
    return 0.5 * np.log(w)


def singular_half_logs(g: np.ndarray, g_inv: np.ndarray | None = None, full: bool = True) -> np.ndarray:
    """Descending ``log`` of the singular values of ``g``.

    The upper half comes from ``g^T g``; the lower half from ``g^-T g^-1``
    so that tiny singular values keep their relative accuracy.
    """
    N = g.shape[0]
    if not full:
        return _half_logs(gram(g), (N + 1) // 2)
    k = (N + 1) // 2
    top = _half_logs(gram(g), k)
    if g_inv is None:
        g_inv = np.linalg.inv(g)
    bottom = -_half_logs(gram(g_inv), N - k)[::-1] if N > k else np.zeros(0)
    return np.concatenate([top, bottom])


def _raw_frame(G: GroupDescriptor, g: np.ndarray, g_inv) -> np.ndarray:
    if G.is_product:
        parts = []
        i = 0
        for fac in G.factors:
            k = fac.ambient_size
            sub_inv = None if g_inv is None else g_inv[i:i + k, i:i + k]
            parts.append(_raw_frame(fac, g[i:i + k, i:i + k], sub_inv))
            i += k
        return np.concatenate(parts) if parts else np.zeros(0)
    if G.real_rank == 0:
        return np.zeros(0)
    if G.family == "R":
        d = np.diag(g)
        if np.any(d <= 0):
            raise SingularInput("vector-group element must have a positive diagonal")
        return np.log(d)
    if G.needs_full_spectrum and g_inv is None:
        g_inv = G.inverse(g)
    s = singular_half_logs(g, g_inv, full=G.needs_full_spectrum)
    return G.frame_from_singular(s)


def nu(G, g, *, g_inv=None, check: bool = True) -> CartanVector:
    """Cartan projection of ``g`` in the dominant chamber of ``G``.

    ``check`` verifies the defining equations (raising a membership error
    carrying the residual); ``g_inv`` may be supplied when an exact inverse
    is at hand.
    """
    G = parse_group(G)
    g = as_matrix(g, square=True)
    if check:
        G.check_member(g)
    x = G.canonicalize(_raw_frame(G, g, g_inv))
    full = None
    if G.family == "SL":
        full = tuple(list(x) + [-float(np.sum(x))])
    return CartanVector(tuple(x), True, full)


def nu_array(G, g, *, g_inv=None, check: bool = False) -> np.ndarray:
    return nu(G, g, g_inv=g_inv, check=check).as_array()


def _batch_half_logs(mats: np.ndarray, count: int) -> np.ndarray:
    grams = np.swapaxes(mats, 1, 2) @ mats
    w = sym_eigvals_batch(grams)[:, :count]
    if w.size and w[:, -1].min() < EIGEN_FLOOR:
        raise SingularInput("Gram matrix has an eigenvalue below 1e-14")
    return 0.5 * np.log(w)


def _raw_frames(G: GroupDescriptor, mats: np.ndarray, invs: np.ndarray | None) -> np.ndarray:
    k = mats.shape[0]
    if G.is_product:
        parts = []
        i = 0
        for fac in G.factors:
            s = fac.ambient_size
            sub_inv = None if invs is None else invs[:, i:i + s, i:i + s]
            parts.append(_raw_frames(fac, mats[:, i:i + s, i:i + s], sub_inv))
            i += s
        return np.concatenate(parts, axis=1) if parts else np.zeros((k, 0))
    if G.real_rank == 0:
        return np.zeros((k, 0))
    if G.family == "R":
        d = np.diagonal(mats, axis1=1, axis2=2)
        if np.any(d <= 0):
            raise SingularInput("vector-group element must have a positive diagonal")
        return np.log(d)
    N = G.ambient_size
    if not G.needs_full_spectrum:
        s = _batch_half_logs(mats, (N + 1) // 2)
    else:
        if invs is None:
            invs = np.array([G.inverse(m) for m in mats])
        h = (N + 1) // 2
        top = _batch_half_logs(mats, h)
        bottom = -_batch_half_logs(invs, N - h)[:, ::-1] if N > h else np.zeros((k, 0))
        s = np.concatenate([top, bottom], axis=1)
    return np.array([G.frame_from_singular(row) for row in s]).reshape(k, -1)


def nu_many(G, mats, invs=None) -> np.ndarray:
    """Cartan projections of a stack of group elements, shape ``(k, real_rank)``.

    Same recipe as :func:`nu` with the eigenproblems solved as one batch;
    membership is not checked.
    """
    G = parse_group(G)
    mats = np.asarray(mats, dtype=float)
    if mats.ndim != 3:
        raise ContractViolation("expected a stack of matrices")
    if mats.shape[0] == 0:
        return np.zeros((0, G.real_rank))
    if invs is not None:
        invs = np.asarray(invs, dtype=float)
    raw = _raw_frames(G, mats, invs)
    return np.array([G.canonicalize(x) for x in raw]).reshape(mats.shape[0], G.real_rank)


def chamber_involution(G, v) -> CartanVector:
    """``nu(g) -> nu(g^-1)``: minus the longest Weyl element, on dominant vectors."""
    G = parse_group(G)
    coords = v.coords if isinstance(v, CartanVector) else v
    x = G.canonicalize(G.opposition(np.asarray(coords, dtype=float)))
    full = None
    if G.family == "SL":
        full = tuple(list(x) + [-float(np.sum(x))])
    return CartanVector(tuple(x), True, full)
