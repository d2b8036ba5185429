from fractions import Fraction

import numpy as np
import pytest

import oracles
from klein.catalog import load_catalog, parse_subgroup, sampled_subgroup
from klein.criteria import (
    ADMITS_INFINITE,
    EXISTS_PROVEN,
    EXISTS_THM15,
    NONEXISTENCE_PROVEN,
    NONEXISTENCE_SL,
    NONPROPER_EVIDENCE_STATUS,
    NOT_PROPER,
    ONLY_FINITE,
    OPEN,
    OPEN_CONJECTURED,
    PROPER,
    PROPER_EVIDENCE,
    calabi_markus,
    check_proper_pair,
    compact_form_search,
    sl_nonexistence,
    spaceform_status,
)
from klein.errors import ContractViolation, DimensionMismatch, UnknownEmbedding
from klein.groups import parse_group


@pytest.fixture(scope="module")
def catalog():
    return load_catalog()


# -- properness of pairs ---------------------------------------------------------


def test_unitary_subgroup_is_proper_on_orthogonal_quotient(catalog):
    G = parse_group("O(4,2)")
    H = parse_subgroup("O(4,1)", G, catalog)
    L = parse_subgroup("U(2,1)", G, catalog)
    v = check_proper_pair(G, H, L)
    assert v.status == PROPER and v.certified
    assert "Thm 14" in v.citations


def test_not_proper_carries_common_direction(catalog):
    G = parse_group("O(4,2)")
    H = parse_subgroup("O(3,2)", G, catalog)
    L = parse_subgroup("U(2,1)", G, catalog)
    v = check_proper_pair(G, H, L)
    assert v.status == NOT_PROPER
    w = [Fraction(x) for x in v.certificate["direction"]]
    assert H.embedding.cone.contains(w) and L.embedding.cone.contains(w)


def test_sampled_side_is_evidence(catalog):
    G = parse_group("SL(2)")
    H = parse_subgroup("R(1)", G, catalog)
    L = sampled_subgroup(G, [np.diag([2.0, 0.5])], word_length=10)
    v = check_proper_pair(G, H, L)
    assert v.status == NONPROPER_EVIDENCE_STATUS and not v.certified
    assert v.stats["empirical"] and v.stats["sampled_side"] == "L"
    K = parse_subgroup("SO(2)", G, catalog)
    assert check_proper_pair(G, K, L).status == PROPER_EVIDENCE


def test_pair_in_other_group(catalog):
    H = parse_subgroup("R(1)", "SL(2)", catalog)
    with pytest.raises(DimensionMismatch):
        check_proper_pair("SL(3)", H, H)


# -- Calabi-Markus -------------------------------------------------------------------


@pytest.mark.parametrize("p", range(1, 9))
def test_calabi_markus_orthogonal(catalog, p):
    for q in range(1, 9):
        v = calabi_markus(f"O({p},{q + 1})", f"O({p},{q})", catalog)
        # real ranks min(p, q+1) and min(p, q) agree exactly when p <= q
        assert (v.status == ONLY_FINITE) == (p <= q)
        assert "Thm 9" in v.citations and "Thm 3" in v.citations


def test_calabi_markus_other_pairs(catalog):
    assert calabi_markus("SL(3)", "SL(3)").status == ONLY_FINITE
    assert calabi_markus("O(4,2)", "U(2,1)", catalog).status == ADMITS_INFINITE
    with pytest.raises(UnknownEmbedding):
        calabi_markus("O(4,2)", "Sp(1,1)", catalog)


# -- space forms -----------------------------------------------------------------


def _in_table(p, q):
    return ((q == 0 and p >= 1) or (p == 0 and q >= 1) or (q == 1 and p >= 2 and p % 2 == 0)
            or (q == 3 and p >= 4 and p % 4 == 0) or (p, q) == (8, 7))


def test_spaceform_existence_set():
    for p in range(0, 17):
        for q in range(0, 17):
            if p + q < 2:
                continue
            v = spaceform_status(p, q)
            assert (v.status == EXISTS_PROVEN) == _in_table(p, q), (p, q)


def test_spaceform_nonexistence_and_open():
    for p in range(0, 9):
        for q in range(0, 9):
            if p + q < 2 or _in_table(p, q):
                continue
            v = spaceform_status(p, q)
            if p <= q or (p * q) % 2 == 1 or q == 1:
                assert v.status == NONEXISTENCE_PROVEN, (p, q)
            else:
                assert v.status == OPEN_CONJECTURED, (p, q)


def test_spaceform_witnesses():
    assert spaceform_status(4, 3).witnesses == ["Sp(1,1)"]
    assert spaceform_status(6, 1).witnesses == ["U(3,1)"]
    assert spaceform_status(8, 7).witnesses == ["Spin(8,1)"]
    assert spaceform_status(2, 2).reasons == ["p≤q"]
    assert spaceform_status(3, 1).reasons == ["q=1-analysis", "pq-odd"]
    assert spaceform_status(6, 3).status == OPEN_CONJECTURED


@pytest.mark.parametrize("args", [(1, 0), (-1, 3), (2.0, 1), ("2", 1)])
def test_spaceform_contract(args):
    with pytest.raises(ContractViolation):
        spaceform_status(*args)


# -- SL(n)/SL(m) --------------------------------------------------------------------


def _hand(n, m):
    tags = []
    if Fraction(n, 3) > (m + 1) // 2:
        tags.append(20)
    if n > 2 * m:
        tags.append(21)
    if n >= 2 * m:
        tags.append(22)
    if m == n - 1 and n % 2 == 1:
        tags.append(24)
    if m == 2 and n >= 4:
        tags.append(26)
    return tags


def _tags(n, m, embedding="block"):
    return [int(t.tag.split()[1]) for t in sl_nonexistence(n, m, embedding)]


@pytest.mark.parametrize("n", range(3, 14))
def test_sl_table_against_hand_evaluation(n):
    for m in range(2, n):
        assert _tags(n, m) == _hand(n, m)


def test_sl_named_cases():
    assert _tags(4, 3) == []
    assert 24 in _tags(3, 2)
    assert _tags(5, 2) == [20, 21, 22, 26]


def test_sl_irreducible_annotation():
    assert _tags(5, 2, "irreducible") == [25]
    assert _tags(4, 2, "irreducible") == []
    assert 25 not in _tags(7, 2)
    with pytest.raises(ContractViolation):
        sl_nonexistence(3, 3)
    with pytest.raises(ContractViolation):
        sl_nonexistence(5, 2, "twisted")


# -- compact forms -------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unitary_compact_forms(catalog, n):
    v = compact_form_search(f"O({2 * n},2)", f"O({2 * n},1)", catalog)
    assert v.status == EXISTS_THM15
    assert v.witness == f"U({n},1)"
    d = v.details
    assert d["d(L)"] + d["d(H)"] == d["d(G)"]
    assert (d["d(L)"], d["d(H)"], d["d(G)"]) == (
        oracles.d_oracle("U", n, 1), oracles.d_oracle("O", 2 * n, 1), oracles.d_oracle("O", 2 * n, 2))


def test_spin_compact_form(catalog):
    v = compact_form_search("O(8,8)", "O(8,7)", catalog)
    assert v.status == EXISTS_THM15 and v.witness == "Spin(8,1)"
    assert (v.details["d(L)"], v.details["d(H)"], v.details["d(G)"]) == (8, 56, 64)
    assert oracles.d_oracle("Spin", 8, 1) + oracles.d_oracle("O", 8, 7) == oracles.d_oracle("O", 8, 8)


def test_sl_fallback_and_open(catalog):
    v = compact_form_search("SL(3)", "SL(2)", catalog)
    assert v.status == NONEXISTENCE_SL
    assert "Thm 24" in v.citations
    v = compact_form_search("SL(4)", "SL(3)", catalog)
    assert v.status == OPEN
    assert v.note == "open relative to this catalog"


def test_no_catalog_pair_is_inconsistent(catalog):
    # compact_form_search raises CatalogInconsistency when both certificates fire
    for e in catalog.embeddings:
        compact_form_search(e.ambient, f"{e.subgroup.name}:{e.name}", catalog)


def test_search_needs_catalog_h(catalog):
    H = sampled_subgroup("SL(2)", [np.diag([2.0, 0.5])])
    with pytest.raises(ContractViolation):
        compact_form_search("SL(2)", H, catalog)
