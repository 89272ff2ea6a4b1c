import math

import numpy as np
import pytest

import htgroups as hg
from htgroups.moebius import PAIRING_LABELS, defects_xt


def _e(alg, x, t=None):
    return hg.GroupElement(x, np.zeros(alg.n) if t is None else t)


def test_cross_ratio_infinity_normalization():
    # with p1 = inf and p4 = 0 the value reduces to d(p2, 0) / d(p2, p3)
    alg = hg.heisenberg(1)
    rng = np.random.default_rng(0)
    for _ in range(100):
        p2 = _e(alg, rng.standard_normal(2), rng.standard_normal(1))
        p3 = _e(alg, rng.standard_normal(2), rng.standard_normal(1))
        zero = hg.identity(alg)
        value = hg.cross_ratio(alg, hg.INFINITY, p2, p3, zero).sqrt_value
        expected = hg.distance(alg, p2, zero) / hg.distance(alg, p2, p3)
        assert value == pytest.approx(expected, rel=1e-14)


def test_cross_ratio_collinear_example():
    alg = hg.heisenberg(1)
    pts = [_e(alg, [float(k), 0.0]) for k in (1, 2, 3, 4)]
    assert hg.cross_ratio(alg, *pts).sqrt_value == pytest.approx(4.0 / 3.0, rel=1e-14)


def test_cross_ratio_similarity_invariance():
    alg = hg.quaternionic(1)
    rng = np.random.default_rng(1)
    for _ in range(300):
        pts = [_e(alg, rng.standard_normal(4), rng.standard_normal(3)) for _ in range(4)]
        word = []
        for _ in range(rng.integers(1, 7)):
            kind = rng.integers(0, 3)
            if kind == 0:
                word.append(hg.LeftTranslate(_e(alg, rng.standard_normal(4), rng.standard_normal(3))))
            elif kind == 1:
                word.append(hg.Dilate(float(np.exp(rng.uniform(-0.7, 0.7)))))
            else:
                word.append(hg.Invert())
        before = hg.cross_ratio(alg, *pts).sqrt_value
        moved = [hg.apply_similarity(alg, word, p) for p in pts]
        after = hg.cross_ratio(alg, *moved).sqrt_value
        assert after == pytest.approx(before, rel=1e-9)


def test_cross_ratio_permutation_identities():
    alg = hg.heisenberg(2)
    rng = np.random.default_rng(2)
    for _ in range(200):
        p1, p2, p3, p4 = (
            _e(alg, rng.standard_normal(4), rng.standard_normal(1)) for _ in range(4)
        )
        base = hg.cross_ratio(alg, p1, p2, p3, p4).sqrt_value
        swapped_pairs = hg.cross_ratio(alg, p2, p1, p4, p3).sqrt_value
        assert swapped_pairs == pytest.approx(base, rel=1e-12)
        inverted = hg.cross_ratio(alg, p1, p2, p4, p3).sqrt_value
        assert inverted == pytest.approx(1.0 / base, rel=1e-12)


def test_cross_ratio_degenerate_inputs():
    alg = hg.heisenberg(1)
    p = _e(alg, [1.0, 0.0])
    q = _e(alg, [2.0, 0.0])
    r = _e(alg, [3.0, 0.0])
    with pytest.raises(hg.DegenerateQuadrupleError):
        hg.cross_ratio(alg, p, p, q, r)
    with pytest.raises(hg.DegenerateQuadrupleError):
        hg.cross_ratio(alg, hg.INFINITY, p, hg.INFINITY, q)


def test_defects_equality_example():
    # 0 and inf diagonal against (-1, 0) and (2, 0): distances 1, 2, 3
    alg = hg.heisenberg(1)
    report = hg.ptolemaean_defects(
        alg, hg.identity(alg), _e(alg, [-1.0, 0.0]), hg.INFINITY, _e(alg, [2.0, 0.0])
    )
    by_label = {p.pairing: p for p in report.pairings}
    assert by_label["13|24"].defect == pytest.approx(0.0, abs=1e-12)
    assert by_label["13|24"].x1_sqrt == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert by_label["13|24"].x2_sqrt == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert by_label["12|34"].defect == pytest.approx(4.0, rel=1e-14)
    assert by_label["14|23"].defect == pytest.approx(1.0, rel=1e-14)
    assert report.min_defect == by_label["13|24"].defect
    assert report.argmin_pairing == "13|24"


def test_defects_random_min_nonnegative():
    alg = hg.heisenberg(1)
    rng = np.random.default_rng(3)
    X = rng.standard_normal((4, 20000, alg.m))
    T = rng.standard_normal((4, 20000, alg.n))
    defects = defects_xt(alg, X, T)
    assert defects.min() >= -1e-9


def test_defect_report_ordering_and_records():
    alg = hg.quaternionic(1)
    rng = np.random.default_rng(4)
    pts = [_e(alg, rng.standard_normal(4), rng.standard_normal(3)) for _ in range(4)]
    report = hg.ptolemaean_defects(alg, *pts)
    values = sorted(p.defect for p in report.pairings)
    assert report.min_defect == values[0] <= values[1] <= values[2]
    for record in report.to_records():
        assert set(record) == {"pairing", "X1_sqrt", "X2_sqrt", "defect"}
        assert record["defect"] == pytest.approx(
            record["X1_sqrt"] + record["X2_sqrt"] - 1.0, rel=1e-14
        )


def test_defects_xt_matches_scalar():
    alg = hg.heisenberg(2)
    rng = np.random.default_rng(5)
    X = rng.standard_normal((4, 8, alg.m))
    T = rng.standard_normal((4, 8, alg.n))
    infinite = np.zeros((4, 8), dtype=bool)
    infinite[2, 3] = True
    X[2, 3] = 0.0
    T[2, 3] = 0.0
    batched = defects_xt(alg, X, T, infinite)
    for col in range(8):
        pts = [
            hg.INFINITY if infinite[i, col] else hg.GroupElement(X[i, col], T[i, col])
            for i in range(4)
        ]
        report = hg.ptolemaean_defects(alg, *pts)
        for row, label in enumerate(PAIRING_LABELS):
            expected = next(p.defect for p in report.pairings if p.pairing == label)
            assert batched[row, col] == pytest.approx(expected, rel=1e-12)


def test_standard_rcircle_examples():
    alg = hg.heisenberg(1)
    pts = hg.standard_rcircle(alg, [1.0, 0.0], [0.0, 1.0, math.inf])
    assert pts[0] == hg.identity(alg)
    assert pts[1] == _e(alg, [1.0, 0.0])
    assert hg.is_infinity(pts[2])
    with pytest.raises(ValueError):
        hg.standard_rcircle(alg, [0.0, 0.0], [1.0])


def test_rcircle_point_mapping():
    alg = hg.quaternionic(1)
    point = hg.RCirclePoint(2.0, [0.0, 1.0, 0.0, 0.0]).to_point(alg)
    assert point == hg.GroupElement([0.0, 2.0, 0.0, 0.0], np.zeros(3))
    assert hg.is_infinity(hg.RCirclePoint(math.inf, [1.0, 0.0, 0.0, 0.0]).to_point(alg))


def test_separates_examples():
    inf = math.inf
    assert hg.separates(0.0, inf, -1.0, 2.0) is True
    assert hg.separates(0.0, inf, 1.0, 2.0) is False
    assert hg.separates(1.0, 3.0, 2.0, 4.0) is True


def test_separates_symmetries_and_errors():
    rng = np.random.default_rng(6)
    for _ in range(200):
        vals = rng.standard_normal(4) * 3
        if rng.random() < 0.3:
            vals[rng.integers(0, 4)] = math.inf
        a, b, c, d = vals
        try:
            base = hg.separates(a, b, c, d)
        except ValueError:
            continue
        assert hg.separates(b, a, c, d) is base
        assert hg.separates(a, b, d, c) is base
        assert hg.separates(c, d, a, b) is base
    with pytest.raises(ValueError):
        hg.separates(1.0, 1.0, 2.0, 3.0)
    with pytest.raises(ValueError):
        hg.separates(math.inf, -math.inf, 2.0, 3.0)


def test_separates_is_exclusive_on_pairings():
    # exactly one of the three pairings of four distinct reals separates
    rng = np.random.default_rng(7)
    for _ in range(200):
        a, b, c, d = np.sort(rng.standard_normal(4) * 3)
        flags = [
            hg.separates(a, b, c, d),
            hg.separates(a, c, b, d),
            hg.separates(a, d, b, c),
        ]
        assert sum(flags) == 1
        assert flags[1]  # {a, c} separates {b, d} when a < b < c < d


def test_rcircle_equality_check_examples():
    alg = hg.heisenberg(1)
    x = [1.0, 0.0]
    sep = hg.rcircle_equality_check(alg, x, (0.0, math.inf, -1.0, 2.0), tol=1e-9)
    assert sep.separated and sep.passed
    assert abs(sep.defect) <= 1e-9

    nonsep = hg.rcircle_equality_check(alg, x, (0.0, math.inf, 1.0, 2.0), tol=1e-9)
    assert not nonsep.separated
    assert nonsep.passed
    assert nonsep.defect == pytest.approx(2.0, rel=1e-12)

    rng = np.random.default_rng(8)
    word = (
        hg.LeftTranslate(_e(alg, rng.standard_normal(2), rng.standard_normal(1))),
        hg.Dilate(3.0),
        hg.Invert(),
    )
    moved = hg.rcircle_equality_check(alg, x, (0.0, math.inf, -1.0, 2.0), word, tol=1e-8)
    assert moved.separated and moved.passed
    assert abs(moved.defect) <= 1e-8


def test_rcircle_equality_check_report_dict():
    alg = hg.heisenberg(1)
    report = hg.rcircle_equality_check(alg, [1.0, 0.0], (0.0, math.inf, -1.0, 2.0))
    data = report.to_dict()
    assert data["parameters"] == [0.0, "inf", -1.0, 2.0]
    assert data["pairing"] == "12|34"
    assert data["separated"] is True and data["passed"] is True


def test_reduction_identity_normalized_quadruples():
    # with p1 = inf and p4 = 0, X1 + X2 equals (d(pj, 0) + d(0, pk)) / d(pj, pk)
    alg = hg.quaternionic(1)
    rng = np.random.default_rng(9)
    zero = hg.identity(alg)
    for _ in range(10000):
        pj = _e(alg, rng.standard_normal(4), rng.standard_normal(3))
        pk = _e(alg, rng.standard_normal(4), rng.standard_normal(3))
        x1 = hg.cross_ratio(alg, hg.INFINITY, pj, pk, zero).sqrt_value
        x2 = hg.cross_ratio(alg, hg.INFINITY, pk, pj, zero).sqrt_value
        expected = (
            hg.distance(alg, pj, zero) + hg.distance(alg, zero, pk)
        ) / hg.distance(alg, pj, pk)
        assert x1 + x2 == pytest.approx(expected, rel=1e-12)


def test_equality_transport_under_words():
    alg = hg.heisenberg(1)
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(100):
        word = []
        for _ in range(rng.integers(1, 7)):
            kind = rng.integers(0, 3)
            if kind == 0:
                word.append(hg.LeftTranslate(_e(alg, rng.standard_normal(2), rng.standard_normal(1))))
            elif kind == 1:
                word.append(hg.Dilate(float(np.exp(rng.uniform(-0.7, 0.7)))))
            else:
                word.append(hg.Invert())
        lam = np.sort(rng.uniform(-3.0, 3.0, 4)) + np.arange(4) * 0.2
        a, b, c, d = lam
        report = hg.rcircle_equality_check(
            alg, [1.0, 0.0], (a, c, b, d), tuple(word), tol=1e-8
        )
        assert report.separated and report.passed
        worst = max(worst, abs(report.defect))
    assert worst <= 1e-8


def test_converse_probe_off_circle_defect_positive():
    # collinear quadruples with one point pushed off by |tau| >= 0.1 stay
    # at least 1e-6 away from equality; evidence for the converse
    alg = hg.heisenberg(1)
    rng = np.random.default_rng(11)
    n = 20000
    xdir = rng.standard_normal((n, 2))
    xdir /= np.linalg.norm(xdir, axis=-1, keepdims=True)
    lam = np.sort(rng.uniform(-3.0, 3.0, (n, 4)), axis=1) + np.arange(4) * 0.2
    X = np.stack([lam[:, i][:, None] * xdir for i in range(4)])
    T = np.zeros((4, n, 1))
    T[1, :, 0] = rng.uniform(0.1, 1.0, n) * rng.choice([-1.0, 1.0], n)
    defects = defects_xt(alg, X, T)
    assert defects.min(axis=0).min() >= 1e-6
