from fractions import Fraction
import math

import numpy as np
import pytest

from klein.catalog import parse_subgroup, sampled_subgroup
from klein.cones import NONPROPER_EVIDENCE, PROPER_EVIDENCE
from klein.dynamics import (
    HYPERBOLIC,
    Ball,
    EmptySet,
    FinitelyGeneratedGroup,
    Sector,
    Segment,
    accumulation_scan,
    action_verdicts,
    empirical_properly_discontinuous,
    gamma_S,
    get_action,
    min_norm_over_disc,
    orbit_svg,
    parse_set,
    same_orbit,
    segments_intersect,
    separation_test,
    stabilizer,
    word_stream,
)
from klein.errors import ContractViolation, SameOrbitError, UnsupportedSet

A = np.diag([2.0, 0.5])


def rotation(theta):
    return np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])


def pingpong():
    b = np.array([[1.0, 2.0], [0.0, 1.0]])
    c = np.array([[1.0, 0.0], [2.0, 1.0]])
    return FinitelyGeneratedGroup("SL(2)", [b, c])


def test_cyclic_words():
    words = [w.word for w in FinitelyGeneratedGroup("SL(2)", [A]).enumerate_words(3)]
    assert words == ["a", "A", "aa", "AA", "aaa", "AAA"]


@pytest.mark.parametrize("max_len", [1, 2, 3, 4])
def test_free_group_counts(max_len):
    en = pingpong().enumerate_words(max_len)
    # reduced words of length l in F_2: 4 * 3^(l-1)
    assert len(en) == sum(4 * 3 ** (l - 1) for l in range(1, max_len + 1))
    assert not en.collisions


def test_words_evaluate_to_their_matrices():
    gamma = pingpong()
    for w in gamma.enumerate_words(3):
        assert np.allclose(gamma.evaluate(w.word), w.matrix)
        assert np.allclose(w.matrix @ w.inverse, np.eye(2), atol=1e-10)


def test_duplicate_generators_collide():
    en = FinitelyGeneratedGroup("SL(2)", [A, np.linalg.inv(A)]).enumerate_words(2)
    assert en.collisions
    assert ("b", "A") in en.collisions


def test_finite_order_generator_is_exhausted():
    r = rotation(2 * math.pi / 3)
    en = FinitelyGeneratedGroup("SL(2)", [r], orders=[3]).enumerate_words(5)
    assert en.exhausted
    assert [w.word for w in en] == ["a", "A"]


def test_finite_group_detected_by_dedup_alone():
    r = rotation(math.pi / 2)
    en = FinitelyGeneratedGroup("SL(2)", [r]).enumerate_words(6)
    assert en.exhausted
    assert len(en) == 3


def test_generator_limits():
    with pytest.raises(ContractViolation):
        FinitelyGeneratedGroup("SL(2)", [])
    with pytest.raises(ContractViolation):
        FinitelyGeneratedGroup("SL(2)", [A] * 14)
    with pytest.raises(ContractViolation):
        FinitelyGeneratedGroup("SL(2)", [A]).enumerate_words(0)


def test_word_stream_order():
    rows = list(word_stream(FinitelyGeneratedGroup("SL(2)", [A]), 2))
    assert [r[0] for r in rows] == ["a", "A", "aa", "AA"]
    assert rows[2][2][0] == pytest.approx(2 * math.log(2))


def test_cyclic_diagonal_vs_compact_and_split():
    gamma = FinitelyGeneratedGroup("SL(2)", [A])
    so2 = parse_subgroup("SO(2)", "SL(2)")
    res = empirical_properly_discontinuous(gamma, so2, 20)
    assert res.verdict == PROPER_EVIDENCE
    split = parse_subgroup("R(1)", "SL(2)")
    res = empirical_properly_discontinuous(gamma, split, 20)
    assert res.verdict == NONPROPER_EVIDENCE
    assert [w[0] for w in res.report.witnesses] == list(range(1, 21))
    assert all(w[2] == 0.0 for w in res.report.witnesses)


def test_finite_group_is_properly_discontinuous():
    gamma = FinitelyGeneratedGroup("SL(2)", [rotation(2 * math.pi / 3)], orders=[3])
    res = empirical_properly_discontinuous(gamma, parse_subgroup("R(1)", "SL(2)"), 8)
    assert res.finite_group and res.verdict == PROPER_EVIDENCE


def test_sampled_h_against_other_ambient():
    gamma = FinitelyGeneratedGroup("SL(2)", [A])
    H = sampled_subgroup("SL(3)", [np.diag([2.0, 0.5, 1.0])])
    with pytest.raises(ContractViolation):
        empirical_properly_discontinuous(gamma, H, 4)


# -- planar actions -------------------------------------------------------------


def test_affine_action_is_exact():
    p = HYPERBOLIC.apply((3,), (1, Fraction(1, 3)))
    assert p == (Fraction(8), Fraction(1, 24))
    tr = get_action("z2-translation")
    assert tr.apply((2, -1), (0, 0)) == (2, -1)
    assert get_action("example9") is HYPERBOLIC
    with pytest.raises(ContractViolation):
        get_action("rotation")


def test_segments():
    P = [(Fraction(a), Fraction(b)) for a, b in [(0, 0), (2, 2), (0, 2), (2, 0), (3, 3), (4, 4)]]
    assert segments_intersect(P[0], P[1], P[2], P[3])
    assert not segments_intersect(P[0], P[1], P[4], P[5])  # collinear, disjoint
    assert segments_intersect(P[0], P[4], P[1], P[5])  # collinear overlap
    assert not segments_intersect(P[0], P[2], P[3], P[1])


def test_min_norm_over_disc():
    # the disc around the origin scaled by (2, 1/2), shifted by (3, 0): closest point (2, 0)
    assert min_norm_over_disc(2.0, 0.5, np.array([3.0, 0.0])) == pytest.approx(1.0)
    assert min_norm_over_disc(2.0, 0.5, np.array([1.0, 0.2])) == 0.0
    assert min_norm_over_disc(1.0, 1.0, np.array([0.0, 5.0])) == pytest.approx(4.0)


def _segment_oracle(n):
    # image segment lies on x / 2^n + 2^n y = 1; it meets x + y = 1 at y = 1 / (2^n + 1)
    y = 1 / (2.0 ** n + 1)
    return 0 <= y <= 1


def test_segment_return_set():
    S = Segment((1, 0), (0, 1))
    ret = gamma_S(HYPERBOLIC, S, 40)
    assert [g[0] for g in ret.members] == [n for n in range(-40, 41) if _segment_oracle(n)]
    assert len(ret.members) == 81
    assert ret.truncated


def test_ball_return_set():
    ret = gamma_S(HYPERBOLIC, Ball((1, 1), 0.1), 30)
    assert ret.members == [(0,)]
    assert not ret.truncated
    assert gamma_S(HYPERBOLIC, EmptySet(), 5).members == []


def _sector_oracle(sec, n, samples=400):
    r = np.linspace(sec.r_min, sec.r_max, samples)
    t = np.linspace(sec.t_min, sec.t_max, samples)
    rr, tt = np.meshgrid(r, t)
    x = 2.0 ** n * rr * np.cos(tt)
    y = 2.0 ** -n * rr * np.sin(tt)
    rho = np.hypot(x, y)
    th = np.arctan2(y, x)
    inside = (rho >= sec.r_min) & (rho <= sec.r_max) & (th >= sec.t_min) & (th <= sec.t_max)
    return bool(inside.any())


def test_sector_return_set_against_sampling():
    sec = Sector(0.5, 2.0, 0.1, 1.4)
    ret = gamma_S(HYPERBOLIC, sec, 6)
    assert not ret.undecided
    assert [g[0] for g in ret.members] == [n for n in range(-6, 7) if _sector_oracle(sec, n)]
    assert [g[0] for g in ret.members] == [-2, -1, 0, 1, 2]


def test_parse_set():
    assert parse_set({"type": "segment", "start": [1, 0], "end": [0, 1]}) == Segment((1, 0), (0, 1))
    assert parse_set({"type": "ball", "center": [1, 1], "radius": 0.5}) == Ball((1, 1), 0.5)
    assert isinstance(parse_set({"type": "empty"}), EmptySet)
    with pytest.raises(UnsupportedSet):
        parse_set({"type": "polygon"})
    with pytest.raises(UnsupportedSet):
        gamma_S(HYPERBOLIC, "segment", 3)


def test_no_accumulation_in_domain():
    rng = np.random.default_rng(9)
    for _ in range(20):
        p = (Fraction(int(rng.integers(1, 200)), 50), Fraction(int(rng.integers(-200, 200)), 50))
        assert not accumulation_scan(HYPERBOLIC, p, 40).found


def test_contracting_orbit_clusters_at_origin():
    res = accumulation_scan(get_action("contracting"), (1, 1), 60, origin_radius=None)
    assert res.found
    assert "excluded from the domain" in res.note
    assert not accumulation_scan(get_action("contracting"), (1, 1), 60).found


def test_stabilizer_and_orbits():
    assert stabilizer(HYPERBOLIC, (1, 1), 10) == [(0,)]
    assert same_orbit(HYPERBOLIC, (1, 0), (8, 0), 10) == (3,)
    assert same_orbit(HYPERBOLIC, (1, 0), (0, 1), 10) is None


def test_separation_axis_points():
    res = separation_test(HYPERBOLIC, (1, 0), (0, 1), [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    assert res.status == "NonSeparableEvidence"
    assert all(r["saturations_meet"] for r in res.per_epsilon)
    # (0, 1) is near n.(1, 0) only for large n with 2^-n <= eps
    eps, n = res.per_epsilon[-1]["eps"], res.per_epsilon[-1]["witness"][0]
    assert abs(n) >= math.log2(1 / eps) - 1


def test_separation_generic_points():
    res = separation_test(HYPERBOLIC, (1, 1), (2, 2), [0.1, 0.01])
    assert res.status == "Separable"
    lo, hi = res.gap
    assert lo < hi and lo < 2 < hi


def test_separation_errors():
    with pytest.raises(SameOrbitError):
        separation_test(HYPERBOLIC, (1, 0), (2, 0), [0.1])
    with pytest.raises(ContractViolation):
        separation_test(HYPERBOLIC, (1, 1), (2, 2), [0.1, 0.2])
    with pytest.raises(ContractViolation):
        separation_test(HYPERBOLIC, (1, 1), (2, 2), [0.0])


def test_translation_action():
    tr = get_action("translation")
    assert separation_test(tr, (0, 0), (Fraction(1, 2), 0), [0.1]).separable
    v = action_verdicts(tr, [Ball((0, 0), 0.4), Segment((0, 0), (2, 1))], [(0, 0), (Fraction(1, 3), 1)], 10)
    assert v.properly_discontinuous and v.proper and v.discrete and v.free


def test_hyperbolic_verdicts_agree_with_equivalence():
    sets = [Segment((1, 0), (0, 1)), Ball((1, 1), 0.2)]
    v = action_verdicts(HYPERBOLIC, sets, [(1, 1), (3, -2)], 40)
    assert not v.properly_discontinuous
    assert not v.proper
    assert v.discrete and v.free
    assert v.properly_discontinuous == (v.proper and v.discrete)


def test_orbit_svg():
    svg = orbit_svg(HYPERBOLIC, [(1, 1)], 3)
    assert svg.startswith("<svg")
    assert svg.count("<path") == 5  # n = -2..2 fall in the default window
