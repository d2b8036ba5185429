"""Catalog of named subgroup embeddings and their Cartan-projection cones.

The catalog is a versioned JSON file (``data/catalog.json``, generated by
``python -m klein.catalog_build``).  Each entry records how a subgroup sits
in an ambient group as matrices, the rational linear map between their rank
frames, and the exact cone ``nu(H)`` (its part in the dominant chamber).

Schema (``klein-catalog/1``)::

    {
      "version": "klein-catalog/1",
      "validated": true,              # set by the builder after deep checks
      "digest": "<sha256 of the rest>",
      "groups": [{"name", "real_rank", "d_dim", "ambient_size"}, ...],
      "embeddings": [{
          "ambient": "O(4,2)", "subgroup": "U(2,1)", "name": "realification",
          "kind": "block" | "diagonal" | "torus",
          "order": [int, ...],          # block: ambient coordinate j reads padded coordinate order[j]
          "torus": [[rational, ...]],   # torus: diag(exp(C t)), C is ambient_size x rank
          "cartan_map": [[rational, ...]],  # rank(G) x rank(H)
          "cone": {"ambient_dim", "provenance", "weyl_saturated", "pieces": [[[rational]]]},
          "note": str
      }, ...]
    }

Rationals are strings such as ``"1/2"``.  The loader refuses files whose
version, digest or structure do not check out.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import rational as Q
from .cones import ConeUnion
from .errors import CatalogValidationError, KleinInputError, UnknownEmbedding
from .groups import GroupDescriptor, parse_group
from .linalg import block_diag

VERSION = "klein-catalog/1"
DEFAULT_PATH = Path(__file__).parent / "data" / "catalog.json"
SAMPLED_WORD_LENGTH = 8


@dataclass(frozen=True)
class Embedding:
    ambient: GroupDescriptor
    subgroup: GroupDescriptor
    name: str
    kind: str
    cartan_map: tuple
    cone_spec: object  # ConeUnion, or its JSON form until first use
    order: tuple = ()
    torus: tuple = ()
    note: str = ""

    @property
    def cone(self) -> ConeUnion:
        c = self.cone_spec
        if not isinstance(c, ConeUnion):
            c = ConeUnion.from_json(c)
            _check_cone(self, c)
            object.__setattr__(self, "cone_spec", c)
        return c

    @property
    def key(self) -> tuple:
        return (self.ambient.name, self.subgroup.name, self.name)

    @property
    def label(self) -> str:
        return f"{self.subgroup.name}:{self.name}"

    def matrix(self, h) -> np.ndarray:
        """Image of a subgroup element in the ambient realization."""
        h = np.asarray(h, dtype=float)
        G, H = self.ambient, self.subgroup
        if self.kind == "block":
            N = G.ambient_size
            pad = np.eye(N)
            k = H.ambient_size
            pad[:k, :k] = h
            idx = np.asarray(self.order)
            return pad[np.ix_(idx, idx)]
        if self.kind == "diagonal":
            copies = G.ambient_size // H.ambient_size
            return block_diag(*([h] * copies))
        if self.kind == "torus":
            t = np.log(np.diag(h))
            c = np.array([[float(x) for x in row] for row in self.torus])
            return np.diag(np.exp(c @ t))
        raise CatalogValidationError(f"unknown embedding kind {self.kind!r}")

    def float_map(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.cartan_map]).reshape(
            self.ambient.real_rank, self.subgroup.real_rank)

    def fold(self, x_h) -> np.ndarray:
        """Ambient Cartan projection predicted from the subgroup's."""
        return self.ambient.canonicalize(self.float_map() @ np.asarray(x_h, dtype=float))

    def to_json(self) -> dict:
        out = {
            "ambient": self.ambient.name,
            "subgroup": self.subgroup.name,
            "name": self.name,
            "kind": self.kind,
            "cartan_map": [[Q.fraction_str(x) for x in row] for row in self.cartan_map],
            "cone": self.cone.to_json(),
            "note": self.note,
        }
        if self.kind == "block":
            out["order"] = list(self.order)
        if self.kind == "torus":
            out["torus"] = [[Q.fraction_str(x) for x in row] for row in self.torus]
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Embedding":
        def rat(rows):
            return tuple(tuple(Fraction(x) for x in row) for row in rows)

        return cls(
            ambient=parse_group(d["ambient"]),
            subgroup=parse_group(d["subgroup"]),
            name=d["name"],
            kind=d["kind"],
            cartan_map=rat(d["cartan_map"]),
            cone_spec=d["cone"],
            order=tuple(int(i) for i in d.get("order", ())),
            torus=rat(d.get("torus", ())),
            note=d.get("note", ""),
        )


def content_digest(data: dict) -> str:
    body = {k: v for k, v in data.items() if k not in ("digest",)}
    return hashlib.sha256(json.dumps(body, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


@dataclass
class Catalog:
    version: str
    embeddings: list = field(default_factory=list)
    path: str = ""

    def __post_init__(self):
        self._by_ambient: dict = {}
        for e in self.embeddings:
            self._by_ambient.setdefault(e.ambient.name, []).append(e)

    def named_embeddings(self) -> list:
        return [(e.ambient.name, e.subgroup.name, e.name) for e in self.embeddings]

    def subgroups_of(self, ambient) -> list:
        G = parse_group(ambient)
        return list(self._by_ambient.get(G.name, []))

    def find(self, ambient, subgroup, name: str | None = None) -> Embedding:
        """Look up an embedding.

        A missing name, or the name ``"standard"`` when no entry is literally
        called that, resolves to the unique embedding of ``subgroup`` in
        ``ambient`` if there is exactly one.
        """
        G = parse_group(ambient)
        H = parse_group(subgroup)
        cands = [e for e in self._by_ambient.get(G.name, []) if e.subgroup == H]
        if name:
            exact = [e for e in cands if e.name == name]
            if exact:
                return exact[0]
            if name != "standard":
                known = ", ".join(sorted(e.name for e in cands)) or "none"
                raise UnknownEmbedding(
                    f"no embedding {name!r} of {H.name} in {G.name} (known: {known})")
        if len(cands) == 1:
            return cands[0]
        if not cands:
            near = ", ".join(e.label for e in self._by_ambient.get(G.name, [])[:8]) or "none"
            raise UnknownEmbedding(f"{H.name} is not a catalog subgroup of {G.name} (catalog subgroups: {near})")
        raise UnknownEmbedding(
            f"{H.name} sits in {G.name} in several ways; name one of "
            + ", ".join(sorted(e.name for e in cands)))

    def has_pair(self, ambient, subgroup) -> bool:
        try:
            self.find(ambient, subgroup)
            return True
        except UnknownEmbedding:
            return False


def _validate_structure(data: dict):
    if data.get("version") != VERSION:
        raise CatalogValidationError(f"unsupported catalog version {data.get('version')!r}")
    if data.get("validated") is not True:
        raise CatalogValidationError("catalog was not marked validated by the builder")
    if data.get("digest") != content_digest(data):
        raise CatalogValidationError("catalog digest mismatch; the file was modified after validation")
    for g in data.get("groups", []):
        G = parse_group(g["name"])
        if (G.real_rank, G.d_dim, G.ambient_size) != (g["real_rank"], g["d_dim"], g["ambient_size"]):
            raise CatalogValidationError(f"invariants of {g['name']} disagree with the formulas")


def _check_embedding(e: Embedding):
    G, H = e.ambient, e.subgroup
    if len(e.cartan_map) != G.real_rank or any(len(r) != H.real_rank for r in e.cartan_map):
        raise CatalogValidationError(f"{e.key}: cartan_map has the wrong shape")
    if e.kind == "block":
        if sorted(e.order) != list(range(G.ambient_size)) or H.ambient_size > G.ambient_size:
            raise CatalogValidationError(f"{e.key}: block order is not a permutation")
    elif e.kind == "diagonal":
        if not G.is_product or any(f != H for f in G.factors):
            raise CatalogValidationError(f"{e.key}: diagonal embedding needs G' x ... x G'")
    elif e.kind == "torus":
        if H.family != "R" or len(e.torus) != G.ambient_size:
            raise CatalogValidationError(f"{e.key}: torus data malformed")
    else:
        raise CatalogValidationError(f"{e.key}: unknown kind {e.kind!r}")


def _check_cone(e: Embedding, cone: ConeUnion):
    G = e.ambient
    if cone.dim != G.real_rank:
        raise CatalogValidationError(f"{e.key}: cone lives in the wrong dimension")
    ineqs = G.chamber_inequalities()
    for piece in cone.pieces:
        for gen in piece.generators:
            if any(Q.dot(a, gen) < 0 for a in ineqs):
                raise CatalogValidationError(f"{e.key}: cone generator outside the dominant chamber")


def load_catalog(path: str | os.PathLike | None = None) -> Catalog:
    """Load and validate a catalog file (default: ``$KLEIN_CATALOG`` or the bundled one)."""
    if path is None:
        path = os.environ.get("KLEIN_CATALOG") or DEFAULT_PATH
    return _load(str(path))


@lru_cache(maxsize=8)
def _load(path: str) -> Catalog:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogValidationError(f"cannot read catalog {path}: {exc}") from exc
    try:
        _validate_structure(data)
        embs = [Embedding.from_json(d) for d in data["embeddings"]]
        for e in embs:
            _check_embedding(e)
    except CatalogValidationError:
        raise
    except (KeyError, TypeError, ValueError, KleinInputError) as exc:
        raise CatalogValidationError(f"malformed catalog {path}: {exc}") from exc
    return Catalog(data["version"], embs, path)


def named_embeddings() -> list:
    return load_catalog().named_embeddings()


# ---------------------------------------------------------------------------
# subgroup specifications


@dataclass
class SubgroupSpec:
    """A subgroup of ``ambient``: either a catalog embedding or a sampled set of generators."""

    ambient: GroupDescriptor
    embedding: Embedding | None = None
    generators: list | None = None
    word_length: int = SAMPLED_WORD_LENGTH

    @property
    def is_catalog(self) -> bool:
        return self.embedding is not None

    @property
    def label(self) -> str:
        if self.embedding is not None:
            return self.embedding.label
        return f"sampled<{len(self.generators or [])} generators>"

    @property
    def d_dim(self) -> int | None:
        return self.embedding.subgroup.d_dim if self.embedding else None

    @property
    def group(self) -> GroupDescriptor | None:
        return self.embedding.subgroup if self.embedding else None


def parse_subgroup(text: str, ambient, catalog: Catalog | None = None) -> SubgroupSpec:
    """``"U(2,1):realification"`` (or without the suffix when unambiguous)."""
    G = parse_group(ambient)
    catalog = catalog or load_catalog()
    text = "".join(str(text).split())
    name = None
    if ":" in text:
        text, name = text.split(":", 1)
    H = parse_group(text)
    return SubgroupSpec(G, catalog.find(G, H, name or None))


def sampled_subgroup(ambient, generators, word_length: int = SAMPLED_WORD_LENGTH) -> SubgroupSpec:
    G = parse_group(ambient)
    gens = [np.asarray(g, dtype=float) for g in generators]
    if not gens:
        raise KleinInputError("a sampled subgroup needs at least one generator")
    for g in gens:
        G.check_member(g)
    return SubgroupSpec(G, None, gens, word_length)


def nu_image(spec: SubgroupSpec) -> ConeUnion:
    """``nu(H)``: exact catalog cone, or the empirical hull of sampled words."""
    if spec.embedding is not None:
        return spec.embedding.cone
    from .cones import empirical_hull
    from .dynamics import FinitelyGeneratedGroup

    gamma = FinitelyGeneratedGroup(spec.ambient, spec.generators)
    pts = [w.nu for w in gamma.enumerate_words(spec.word_length)]
    return empirical_hull(np.array(pts).reshape(-1, spec.ambient.real_rank))
