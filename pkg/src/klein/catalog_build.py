"""Generate ``data/catalog.json``.

Run ``python -m klein.catalog_build [--output PATH] [--samples N]``.

For each named embedding ``H ⊂ G`` the rank-frame map ``M`` sends the
Cartan projection of ``h`` to a (not necessarily dominant) representative of
the Cartan projection of its image, so the dominant part of ``nu(H)`` is

    C ∩ W·M(a_H) = union over the Weyl orbit of the subspace V = M(a_H) of C ∩ wV,

with ``C`` the closed dominant chamber of ``G`` and ``W`` its Weyl group.
Each ``C ∩ wV`` is a polyhedral cone computed exactly by double description.

Before writing, every entry is checked numerically: images of random
subgroup elements satisfy the ambient defining equations, and the Cartan
projection of the image agrees with ``canonicalize(M nu_H(h))`` and lies on
the computed cone.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import rational as Q
from .cartan import nu_array
from .catalog import VERSION, DEFAULT_PATH, Embedding, content_digest
from .cones import ConeUnion, ConvexCone, distances_to_cone, double_description
from .groups import GroupDescriptor, parse_group, product

ORBIT_LIMIT = 5000
F0, F1 = Fraction(0), Fraction(1)


def _zeros(r, c):
    return [[F0] * c for _ in range(r)]


def dominant_image(G: GroupDescriptor, cartan_map) -> ConeUnion:
    """Dominant part of the Weyl saturation of the column span of ``cartan_map``."""
    r = G.real_rank
    cols = Q.transpose(cartan_map) if cartan_map and cartan_map[0] else []
    start = Q.span_key(cols, r)
    if not start:
        return ConeUnion.zero(r)
    gens = G.weyl_generators()
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for key in frontier:
            for w in gens:
                img = Q.span_key([Q.mat_vec(w, v) for v in key], r)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
                    if len(seen) > ORBIT_LIMIT:
                        raise RuntimeError(f"Weyl orbit in {G.name} exceeds {ORBIT_LIMIT} subspaces")
        frontier = nxt
    ineqs = G.chamber_inequalities()
    pieces = []
    for key in sorted(seen):
        basis = list(key)
        k = len(basis)
        pulled = [[Q.dot(a, b) for b in basis] for a in ineqs]
        lin, rays = double_description(pulled, k)
        ys = list(rays) + list(lin) + [tuple(-x for x in l) for l in lin]
        vecs = [tuple(sum((y[j] * basis[j][i] for j in range(k)), F0) for i in range(r)) for y in ys]
        pieces.append(ConvexCone(r, vecs))
    return ConeUnion(r, tuple(pieces), weyl_saturated=False).simplified()


# ---------------------------------------------------------------------------
# rank-frame maps


def pad_map(rg: int, rh: int):
    m = _zeros(rg, rh)
    for i in range(min(rg, rh)):
        m[i][i] = F1
    return m


def repeat_map(rg: int, rh: int, times: int, scale=F1):
    m = _zeros(rg, rh)
    for i in range(rh):
        for t in range(times):
            m[times * i + t][i] = scale
    return m


def sl_block_map(n: int, m: int):
    out = _zeros(n - 1, m - 1)
    for i in range(m - 1):
        out[i][i] = F1
    if m - 1 < n - 1:
        for j in range(m - 1):
            out[m - 1][j] = -F1
    return out


# ---------------------------------------------------------------------------
# entries


def _entry(G, H, name, kind, cmap, order=(), torus=(), note=""):
    G, H = parse_group(G), parse_group(H)
    cmap = [list(map(Q.to_fraction, row)) for row in cmap]
    cone = dominant_image(G, cmap)
    return Embedding(G, H, name, kind, tuple(tuple(r) for r in cmap), cone,
                     tuple(order), tuple(tuple(map(Q.to_fraction, r)) for r in torus), note)


def orthogonal_entries(max_size: int):
    out = []
    for N in range(2, max_size + 1):
        for P in range(0, N + 1):
            Qn = N - P
            G = GroupDescriptor("O", (P, Qn))
            rg = G.real_rank
            if Qn >= 1 and N - 1 >= 1:
                H = GroupDescriptor("O", (P, Qn - 1))
                out.append(_entry(G, H, "standard", "block", pad_map(rg, H.real_rank), list(range(N)),
                                  note="stabilizer of a negative vector"))
            if P >= 1 and N - 1 >= 1:
                H = GroupDescriptor("O", (P - 1, Qn))
                order = list(range(P - 1)) + [N - 1] + list(range(P - 1, N - 1))
                out.append(_entry(G, H, "standard", "block", pad_map(rg, H.real_rank), order,
                                  note="stabilizer of a positive vector"))
            if P >= 1 and Qn >= 1:
                H = product(GroupDescriptor("O", (P, 0)), GroupDescriptor("O", (Qn, 0)))
                out.append(_entry(G, H, "maximal-compact", "block", _zeros(rg, 0), list(range(N)),
                                  note="maximal compact subgroup"))
            if P % 2 == 0 and Qn % 2 == 0 and min(P, Qn) // 2 <= 2:
                a, b = P // 2, Qn // 2
                H = GroupDescriptor("U", (a, b))
                n = a + b
                order = (list(range(a)) + list(range(n, n + a))
                         + list(range(a, n)) + list(range(n + a, 2 * n)))
                out.append(_entry(G, H, "realification", "block", repeat_map(rg, H.real_rank, 2), order,
                                  note="complex structure forgotten"))
            if P % 4 == 0 and Qn % 4 == 0:
                a, b = P // 4, Qn // 4
                H = GroupDescriptor("Sp", (a, b))
                n = a + b
                order = [blk * n + i for blk in range(4) for i in range(a)]
                order += [blk * n + i for blk in range(4) for i in range(a, n)]
                out.append(_entry(G, H, "realification", "block", repeat_map(rg, H.real_rank, 4), order,
                                  note="quaternionic structure forgotten"))
    G = GroupDescriptor("O", (8, 8))
    out.append(_entry(G, GroupDescriptor("Spin", (8, 1)), "spin", "block",
                      repeat_map(8, 1, 8, Fraction(1, 2)), list(range(16)),
                      note="16-dimensional real spin representation"))
    return out


def linear_entries(max_n: int):
    out = []
    for n in range(1, max_n + 1):
        G = GroupDescriptor("GL", (n,))
        out.append(_entry(G, GroupDescriptor("O", (n, 0)), "standard", "block", _zeros(n, 0),
                          list(range(n)), note="maximal compact subgroup"))
        eye = [[F1 if i == j else F0 for j in range(n)] for i in range(n)]
        out.append(_entry(G, GroupDescriptor("R", (n,)), "split-torus", "torus", eye, torus=eye,
                          note="positive diagonal matrices"))
    for n in range(2, max_n + 1):
        G = GroupDescriptor("SL", (n,))
        out.append(_entry(G, GroupDescriptor("SO", (n, 0)), "standard", "block", _zeros(n - 1, 0),
                          list(range(n)), note="maximal compact subgroup"))
        eye = [[F1 if i == j else F0 for j in range(n - 1)] for i in range(n - 1)]
        torus = eye + [[-F1] * (n - 1)]
        out.append(_entry(G, GroupDescriptor("R", (n - 1,)), "split-torus", "torus", eye, torus=torus,
                          note="positive diagonal matrices of determinant one"))
        for m in range(2, n):
            out.append(_entry(G, GroupDescriptor("SL", (m,)), "block", "block", sl_block_map(n, m),
                              list(range(n)), note="upper-left block"))
    return out


DIAGONAL_FACTORS = ("GL(2)", "SL(2)", "SL(3)", "O(2,1)", "O(3,1)", "O(2,2)", "U(1,1)", "Sp(1,1)")


def diagonal_entries():
    out = []
    for name in DIAGONAL_FACTORS:
        H = parse_group(name)
        G = product(H, H)
        r = H.real_rank
        cmap = [[F1 if i % r == j else F0 for j in range(r)] for i in range(2 * r)]
        out.append(_entry(G, H, "diagonal", "diagonal", cmap, note="h -> (h, h)"))
    return out


def vector_group_entries():
    out = []
    G = GroupDescriptor("R", (2,))
    H = GroupDescriptor("R", (1,))
    for name, col in (("x-axis", (1, 0)), ("y-axis", (0, 1)), ("diagonal-line", (1, 1)),
                      ("antidiagonal-line", (1, -1))):
        c = [[Fraction(col[0])], [Fraction(col[1])]]
        out.append(_entry(G, H, name, "torus", c, torus=c, note="one-parameter subgroup of R^2"))
    return out


def build_entries(max_orthogonal: int = 17, max_linear: int = 8):
    return (orthogonal_entries(max_orthogonal) + linear_entries(max_linear)
            + diagonal_entries() + vector_group_entries())


# ---------------------------------------------------------------------------
# numerical validation


def validate_entry(e: Embedding, rng: np.random.Generator, samples: int = 3, tol: float = 1e-7):
    """Raise ``AssertionError`` if the entry fails its numerical checks."""
    G, H = e.ambient, e.subgroup
    for _ in range(samples):
        h = H.random_element(rng, scale=0.7)
        g = e.matrix(h)
        res = G.membership_residual(g)
        assert res < 1e-9, f"{e.key}: image not in {G.name} (residual {res:.2e})"
        if G.real_rank == 0:
            continue
        x_g = nu_array(G, g)
        x_h = nu_array(H, h) if H.real_rank else np.zeros(0)
        pred = e.fold(x_h)
        assert np.allclose(pred, x_g, atol=tol), f"{e.key}: folded {pred} vs direct {x_g}"
        d = distances_to_cone(x_g[None, :], e.cone)[0]
        assert d <= tol * max(1.0, float(np.linalg.norm(x_g))), f"{e.key}: nu(h) off the cone by {d}"


def build(samples: int = 3, seed: int = 20240917, verbose: bool = False) -> dict:
    rng = np.random.default_rng(seed)
    entries = build_entries()
    groups = {}
    for e in entries:
        t0 = time.time()
        validate_entry(e, rng, samples)
        if verbose:
            print(f"{e.ambient.name:>14} > {e.label:<28} pieces={len(e.cone.pieces):<3} "
                  f"{time.time() - t0:.2f}s", file=sys.stderr)
        for g in (e.ambient, e.subgroup):
            groups[g.name] = {"name": g.name, "real_rank": g.real_rank, "d_dim": g.d_dim,
                              "ambient_size": g.ambient_size}
    data = {
        "version": VERSION,
        "validated": True,
        "groups": [groups[k] for k in sorted(groups)],
        "embeddings": [e.to_json() for e in entries],
    }
    data["digest"] = content_digest(data)
    return data


def main(argv=None):
    ap = argparse.ArgumentParser(description="Build and validate the subgroup catalog.")
    ap.add_argument("--output", default=str(DEFAULT_PATH))
    ap.add_argument("--samples", type=int, default=3)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args(argv)
    data = build(args.samples, verbose=args.verbose)
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print(f"wrote {len(data['embeddings'])} embeddings to {args.output}")


if __name__ == "__main__":
    main()
