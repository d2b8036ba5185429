"""Theorem checkers: properness of pairs, Calabi-Markus, compact forms.

Citations use the tags listed in THEOREMS.md ("Thm 14", "Conj 8", ...).
Certified answers (Proper, NotProper, ExistsByThm15, ...) come only from
exact catalog cones and integer invariants; anything built from sampled
subgroups is reported with an Evidence status and its sampling statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import Catalog, SubgroupSpec, load_catalog, nu_image
from .cones import NONPROPER_EVIDENCE, PointCloud, cones_equiv, proper_witness, subset_proper_evidence
from .errors import CatalogInconsistency, ContractViolation, DimensionMismatch, UnknownEmbedding
from .groups import GroupDescriptor, parse_group
from . import rational as Q

PROPER = "Proper"
NOT_PROPER = "NotProper"
PROPER_EVIDENCE = "ProperEvidence"
NONPROPER_EVIDENCE_STATUS = "NonProperEvidence"

ONLY_FINITE = "OnlyFiniteDiscontinuousGroups"
ADMITS_INFINITE = "AdmitsInfiniteDiscontinuousGroup"

EXISTS_PROVEN = "ExistsProven"
NONEXISTENCE_PROVEN = "NonexistenceProven"
OPEN_CONJECTURED = "OpenConjecturedNonexistent"

EXISTS_THM15 = "ExistsByThm15"
NONEXISTENCE_THM16 = "NonexistenceByThm16"
NONEXISTENCE_SL = "NonexistenceBySLTable"
OPEN = "Open"

DEFAULT_RADII = (0.5, 1.0, 2.0, 4.0)


# ---------------------------------------------------------------------------
# properness of pairs


@dataclass
class PropernessVerdict:
    status: str
    certificate: dict | None = None
    stats: dict | None = None
    citations: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status in (PROPER, NOT_PROPER)

    def to_json(self) -> dict:
        return {"status": self.status, "certificate": self.certificate, "stats": self.stats,
                "citations": list(self.citations)}


def _cloud(spec: SubgroupSpec, max_len: int | None) -> PointCloud:
    from .dynamics import FinitelyGeneratedGroup

    gamma = FinitelyGeneratedGroup(spec.ambient, spec.generators, check=False)
    cloud, _ = gamma.point_cloud(max_len or spec.word_length)
    return cloud


def check_proper_pair(G, H: SubgroupSpec, L: SubgroupSpec, *, max_len: int | None = None,
                      radii=DEFAULT_RADII) -> PropernessVerdict:
    """Is ``L ⋔ H`` in ``G``?  Decided on the cones ``nu(L)``, ``nu(H)``.

    Two catalog subgroups give a certified answer; a ``NotProper`` answer
    carries a common nonzero direction of the two cones.  If either side is
    sampled, the sampled side's point cloud is compared with the other
    side's cone and the answer is evidence only.
    """
    G = parse_group(G)
    for s in (H, L):
        if s.ambient != G:
            raise DimensionMismatch(f"{s.label} is a subgroup of {s.ambient.name}, not of {G.name}")
    cites = ["Thm 14"]
    if H.is_catalog and L.is_catalog:
        w = proper_witness(nu_image(L), nu_image(H))
        if w is None:
            return PropernessVerdict(PROPER, {"theorem": "Thm 14", "reason": "nu(L) ∩ nu(H) = {0}"},
                                     None, cites)
        return PropernessVerdict(NOT_PROPER, {"direction": [Q.fraction_str(x) for x in w]}, None, cites)
    # evidence: compare a sampled side against the other side's cone
    sampled, other = (L, H) if not L.is_catalog else (H, L)
    cloud = _cloud(sampled, max_len)
    rep = subset_proper_evidence(cloud, nu_image(other), radii)
    status = NONPROPER_EVIDENCE_STATUS if rep.verdict == NONPROPER_EVIDENCE else PROPER_EVIDENCE
    stats = rep.to_json()
    stats["sampled_side"] = "L" if sampled is L else "H"
    stats["words"] = len(cloud)
    stats["empirical"] = True
    return PropernessVerdict(status, None, stats, cites)


# ---------------------------------------------------------------------------
# Calabi-Markus


@dataclass
class CalabiMarkusVerdict:
    status: str
    rank_G: int
    rank_H: int
    citations: list = field(default_factory=lambda: ["Thm 3"])

    def to_json(self) -> dict:
        return {"status": self.status, "rank_G": self.rank_G, "rank_H": self.rank_H,
                "citations": list(self.citations)}


def calabi_markus(G, H, catalog: Catalog | None = None) -> CalabiMarkusVerdict:
    """Only finite groups act properly discontinuously on G/H iff the real ranks agree."""
    G, H = parse_group(G), parse_group(H)
    catalog = catalog or load_catalog()
    if G != H and not catalog.has_pair(G, H):
        raise UnknownEmbedding(f"({G.name}, {H.name}) is not a catalog pair")
    status = ADMITS_INFINITE if G.real_rank > H.real_rank else ONLY_FINITE
    cites = ["Thm 3"]
    if G.family == "O" and H.family == "O" and G.params[0] == H.params[0] and G.params[1] == H.params[1] + 1:
        cites.append("Thm 9")
    return CalabiMarkusVerdict(status, G.real_rank, H.real_rank, cites)


# ---------------------------------------------------------------------------
# space forms


SPACEFORM_ROWS = (
    ("(N,0)", lambda p, q: q == 0 and p >= 1, lambda p, q: f"cocompact lattice of O({p},1)"),
    ("(0,N)", lambda p, q: p == 0 and q >= 1, lambda p, q: f"trivial group (O(0,{q + 1})/O(0,{q}) is a sphere)"),
    ("(2N,1)", lambda p, q: q == 1 and p >= 2 and p % 2 == 0, lambda p, q: f"U({p // 2},1)"),
    ("(4N,3)", lambda p, q: q == 3 and p >= 4 and p % 4 == 0, lambda p, q: f"Sp({p // 4},1)"),
    ("(8,7)", lambda p, q: (p, q) == (8, 7), lambda p, q: "Spin(8,1)"),
)


@dataclass
class SpaceformVerdict:
    status: str
    p: int
    q: int
    witnesses: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    reasons: list = field(default_factory=list)
    citations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"status": self.status, "p": self.p, "q": self.q, "witnesses": list(self.witnesses),
                "table_rows": list(self.rows), "reasons": list(self.reasons),
                "citations": list(self.citations)}


def spaceform_table_rows(p: int, q: int) -> list:
    return [name for name, pred, _ in SPACEFORM_ROWS if pred(p, q)]


def spaceform_status(p: int, q: int) -> SpaceformVerdict:
    """Compact space forms of signature (p, q) with negative curvature.

    The existence side is the proven table; nonexistence is reported when
    one of the proved conditions (q = 1, p <= q, pq odd) applies and the
    signature is not in the table.  Everything else is open.
    """
    if not (isinstance(p, (int, np.integer)) and isinstance(q, (int, np.integer))):
        raise ContractViolation("p and q must be integers")
    if p < 0 or q < 0 or p + q < 2:
        raise ContractViolation("need p, q >= 0 and p + q >= 2")
    p, q = int(p), int(q)
    rows = spaceform_table_rows(p, q)
    if rows:
        wit = [w(p, q) for name, pred, w in SPACEFORM_ROWS if pred(p, q)]
        return SpaceformVerdict(EXISTS_PROVEN, p, q, wit, rows, [], ["Conj 8", "Thm 15"] if (p, q) == (8, 7)
                                else ["Conj 8"])
    reasons = []
    if q == 1:
        reasons.append("q=1-analysis")
    if p <= q:
        reasons.append("p≤q")
    if (p * q) % 2 == 1:
        reasons.append("pq-odd")
    if reasons:
        cites = ["Conj 8"] + (["Thm 9"] if "p≤q" in reasons else [])
        return SpaceformVerdict(NONEXISTENCE_PROVEN, p, q, [], [], reasons, cites)
    return SpaceformVerdict(OPEN_CONJECTURED, p, q, [], [], [], ["Conj 8"])


# ---------------------------------------------------------------------------
# SL(n)/SL(m)


@dataclass(frozen=True)
class SLTheorem:
    tag: str
    condition: str
    embedding: str = "block"
    note: str = ""

    def to_json(self) -> dict:
        out = {"theorem": self.tag, "condition": self.condition, "embedding": self.embedding}
        if self.note:
            out["note"] = self.note
        return out


def sl_nonexistence(n: int, m: int, embedding: str = "block") -> list:
    """Nonexistence theorems for compact forms of SL(n,R)/SL(m,R) whose hypotheses hold.

    ``embedding="irreducible"`` asks about SL(2,R) embedded irreducibly, the
    only setting of Thm 25; those results are kept apart from the block
    embedding.
    """
    if not (n > m >= 2):
        raise ContractViolation("need n > m >= 2")
    if embedding not in ("block", "irreducible"):
        raise ContractViolation("embedding must be 'block' or 'irreducible'")
    out = []
    if embedding == "irreducible":
        if m == 2 and n >= 5:
            out.append(SLTheorem("Thm 25", "n >= 5, m = 2", "irreducible",
                                 "applies to the irreducible embedding of SL(2,R), not the block one"))
        return out
    if 3 * ((m + 1) // 2) < n:
        out.append(SLTheorem("Thm 20", "n/3 > [(m+1)/2]"))
    if n > 2 * m:
        out.append(SLTheorem("Thm 21", "n > 2m"))
    if n >= 2 * m:
        out.append(SLTheorem("Thm 22", "n >= 2m"))
    if m == n - 1 and n % 2 == 1:
        out.append(SLTheorem("Thm 24", "m = n-1, n odd"))
    if m == 2 and n >= 4:
        out.append(SLTheorem("Thm 26", "n >= 4, m = 2"))
    return out


# ---------------------------------------------------------------------------
# compact Clifford-Klein forms


@dataclass
class ExistenceVerdict:
    status: str
    witness: str | None = None
    details: dict = field(default_factory=dict)
    citations: list = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {"status": self.status, "witness": self.witness, "details": self.details,
                "citations": list(self.citations), "note": self.note}


def compact_form_search(G, H, catalog: Catalog | None = None) -> ExistenceVerdict:
    """Search the catalog subgroups L of G for Thm 15 or Thm 16 certificates.

    Thm 15 needs ``L ⋔ H`` and ``d(L) + d(H) = d(G)``; Thm 16 needs
    ``L ∼ H`` and ``d(L) > d(H)``.  Without either, SL(n)/SL(m) pairs fall
    back to the table of known nonexistence results.
    """
    catalog = catalog or load_catalog()
    G = parse_group(G)
    if isinstance(H, SubgroupSpec):
        h_spec = H
    else:
        text = "".join(str(H).split())
        name = None
        if ":" in text:
            text, name = text.split(":", 1)
        h_spec = SubgroupSpec(G, catalog.find(G, parse_group(text), name or None))
    if not h_spec.is_catalog:
        raise ContractViolation("compact_form_search needs a catalog subgroup H")
    Hg = h_spec.group
    cone_h = nu_image(h_spec)
    dG, dH = G.d_dim, Hg.d_dim
    thm15, thm16 = [], []
    for e in catalog.subgroups_of(G):
        dL = e.subgroup.d_dim
        if dL + dH == dG and proper_witness(e.cone, cone_h) is None:
            thm15.append((e, dL))
        if dL > dH and cones_equiv(e.cone, cone_h):
            thm16.append((e, dL))
    if thm15 and thm16:
        raise CatalogInconsistency(
            f"both Thm 15 ({thm15[0][0].label}) and Thm 16 ({thm16[0][0].label}) apply to "
            f"{G.name}/{Hg.name}; the catalog data is corrupted")
    if thm15:
        e, dL = thm15[0]
        return ExistenceVerdict(EXISTS_THM15, e.subgroup.name,
                                {"L": e.label, "d(L)": dL, "d(H)": dH, "d(G)": dG,
                                 "all_L": [x.label for x, _ in thm15]},
                                ["Thm 15", "Thm 14"])
    if thm16:
        e, dL = thm16[0]
        return ExistenceVerdict(NONEXISTENCE_THM16, e.subgroup.name,
                                {"L": e.label, "d(L)": dL, "d(H)": dH,
                                 "all_L": [x.label for x, _ in thm16]},
                                ["Thm 16", "Thm 14"])
    if G.family == "SL" and Hg.family == "SL" and not G.is_product:
        n, m = G.params[0], Hg.params[0]
        hits = sl_nonexistence(n, m) if n > m >= 2 else []
        if hits:
            return ExistenceVerdict(NONEXISTENCE_SL, None, {"theorems": [t.to_json() for t in hits]},
                                    [t.tag for t in hits])
    return ExistenceVerdict(OPEN, None, {"subgroups_scanned": len(catalog.subgroups_of(G))},
                            ["Thm 15", "Thm 16"], "open relative to this catalog")
