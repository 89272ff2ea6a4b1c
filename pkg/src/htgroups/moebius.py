"""Cross-ratios, Ptolemaean defects, R-circles, and separation.

For four pairwise distinct extended points the square-root cross-ratio
is

    ``X^(1/2)(p1, p2, p3, p4) = d(p1,p3) d(p2,p4) / (d(p1,p4) d(p2,p3))``.

When one point is INFINITY every distance factor containing it is
replaced by 1; the point occurs exactly once in the numerator and once
in the denominator, so this is the limit value of the ratio.  The
cross-ratio is invariant under similarity words (translations,
dilations, inversion).

A quadruple admits three pairings, labelled by which partition into two
pairs plays the diagonal role.  Writing A = d12 d34, B = d13 d24,
C = d14 d23 for the three pair products, the defect of the pairing with
diagonal product P is

    ``defect = (Q + R) / P - 1``    (Q, R the other two products),

equivalently X1^(1/2) + X2^(1/2) - 1 for the two cross-ratios attached
to that pairing.  The metric is Ptolemaean exactly when every defect is
nonnegative; on an R-circle the defect of the separated pairing
vanishes.

Standard R-circles are the horizontal lines {(lambda x, 0)} together
with INFINITY; general R-circles are their images under similarity
words.  Separation of parameter pairs is decided on the circle
``R u {inf}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import HTypeAlgebra
from .group import (
    INFINITY,
    ExtendedPoint,
    GroupElement,
    SimilarityWord,
    apply_similarity,
    distance,
    distance_xt,
    is_infinity,
    point_to_json,
)

__all__ = [
    "DegenerateQuadrupleError",
    "CrossRatioValue",
    "cross_ratio",
    "PairingDefect",
    "DefectReport",
    "ptolemaean_defects",
    "PAIRING_LABELS",
    "defects_xt",
    "RCirclePoint",
    "standard_rcircle",
    "separates",
    "RCircleEqualityReport",
    "rcircle_equality_check",
]


class DegenerateQuadrupleError(ValueError):
    """Raised when a quadruple has repeated points."""


@dataclass(frozen=True)
class CrossRatioValue:
    """The square root X^(1/2) of a cross-ratio; finite and positive."""

    sqrt_value: float


# The three pair partitions of {p1, p2, p3, p4}, keyed by diagonal label.
PAIRING_LABELS = ("12|34", "13|24", "14|23")
_PARTITIONS = {
    "12|34": ((0, 1), (2, 3)),
    "13|24": ((0, 2), (1, 3)),
    "14|23": ((0, 3), (1, 2)),
}


def _points_equal(a: ExtendedPoint, b: ExtendedPoint) -> bool:
    if is_infinity(a) or is_infinity(b):
        return is_infinity(a) and is_infinity(b)
    return a == b


def _check_quadruple(points) -> None:
    for i in range(4):
        for j in range(i + 1, 4):
            if _points_equal(points[i], points[j]):
                raise DegenerateQuadrupleError(
                    f"points {i + 1} and {j + 1} coincide; the four points must be distinct"
                )


def _factor(alg: HTypeAlgebra, a: ExtendedPoint, b: ExtendedPoint) -> float:
    # distance factor with the infinity-cancellation rule
    if is_infinity(a) or is_infinity(b):
        return 1.0
    return distance(alg, a, b)


def cross_ratio(
    alg: HTypeAlgebra,
    p1: ExtendedPoint,
    p2: ExtendedPoint,
    p3: ExtendedPoint,
    p4: ExtendedPoint,
) -> CrossRatioValue:
    """X^(1/2) of an ordered quadruple of pairwise distinct points."""
    points = (p1, p2, p3, p4)
    _check_quadruple(points)
    num = _factor(alg, p1, p3) * _factor(alg, p2, p4)
    den = _factor(alg, p1, p4) * _factor(alg, p2, p3)
    return CrossRatioValue(num / den)


@dataclass(frozen=True)
class PairingDefect:
    """Defect data for one pairing; `pairing` names the diagonal partition."""

    pairing: str
    x1_sqrt: float
    x2_sqrt: float
    defect: float

    def to_dict(self) -> dict:
        return {
            "pairing": self.pairing,
            "X1_sqrt": self.x1_sqrt,
            "X2_sqrt": self.x2_sqrt,
            "defect": self.defect,
        }


@dataclass(frozen=True)
class DefectReport:
    """All three pairing defects of a quadruple and their minimum."""

    points: tuple
    pairings: tuple
    min_defect: float
    argmin_pairing: str

    def to_records(self) -> list[dict]:
        return [p.to_dict() for p in self.pairings]


def ptolemaean_defects(
    alg: HTypeAlgebra,
    p1: ExtendedPoint,
    p2: ExtendedPoint,
    p3: ExtendedPoint,
    p4: ExtendedPoint,
) -> DefectReport:
    """Defects of the three pairings; min >= 0 characterizes the inequality."""
    points = (p1, p2, p3, p4)
    _check_quadruple(points)
    products = {}
    for label, (pair_a, pair_b) in _PARTITIONS.items():
        products[label] = _factor(alg, points[pair_a[0]], points[pair_a[1]]) * _factor(
            alg, points[pair_b[0]], points[pair_b[1]]
        )
    pairings = []
    for label in PAIRING_LABELS:
        others = [l for l in PAIRING_LABELS if l != label]
        x1 = products[others[0]] / products[label]
        x2 = products[others[1]] / products[label]
        pairings.append(PairingDefect(label, x1, x2, x1 + x2 - 1.0))
    best = min(pairings, key=lambda p: p.defect)
    return DefectReport(
        points=points,
        pairings=tuple(pairings),
        min_defect=best.defect,
        argmin_pairing=best.pairing,
    )


def defects_xt(alg, X, T, infinite=None) -> np.ndarray:
    """Batched pairing defects.

    X: (4, ..., m), T: (4, ..., n), infinite: (4, ...) boolean or None.
    Returns shape (3, ...) ordered as PAIRING_LABELS.  Distance factors
    involving an infinite point are replaced by 1; at most one point per
    quadruple may be infinite.
    """

    def pd(i, j):
        d = distance_xt(alg, X[i], T[i], X[j], T[j])
        if infinite is None:
            return d
        return np.where(infinite[i] | infinite[j], 1.0, d)

    prod_a = pd(0, 1) * pd(2, 3)
    prod_b = pd(0, 2) * pd(1, 3)
    prod_c = pd(0, 3) * pd(1, 2)
    return np.stack(
        [
            (prod_b + prod_c) / prod_a - 1.0,
            (prod_a + prod_c) / prod_b - 1.0,
            (prod_a + prod_b) / prod_c - 1.0,
        ]
    )


# ---------------------------------------------------------------------------
# R-circles


@dataclass(frozen=True)
class RCirclePoint:
    """Parameter on a standard R-circle: lambda paired with the direction x."""

    parameter: float
    direction: np.ndarray

    def __post_init__(self):
        direction = np.atleast_1d(np.asarray(self.direction, dtype=float))
        if not np.linalg.norm(direction) > 0:
            raise ValueError("direction must be a nonzero vector")
        object.__setattr__(self, "direction", direction)

    def to_point(self, alg: HTypeAlgebra) -> ExtendedPoint:
        if math.isinf(self.parameter):
            return INFINITY
        return GroupElement(self.parameter * self.direction, np.zeros(alg.n))


def standard_rcircle(alg: HTypeAlgebra, x, parameters) -> list[ExtendedPoint]:
    """Points (lambda x, 0) of the horizontal line through 0; inf maps to INFINITY."""
    return [RCirclePoint(float(lam), x).to_point(alg) for lam in parameters]


def separates(lam1, lam3, lam2, lam4) -> bool:
    """True when the pair {lam1, lam3} interleaves {lam2, lam4} on R u {inf}.

    Both signed infinities denote the single point at infinity.  Decided
    by the sign of the real cross-ratio
    (lam1-lam2)(lam3-lam4) / ((lam1-lam4)(lam3-lam2)), with the two
    factors containing an infinite parameter cancelled.
    """
    params = [float(v) for v in (lam1, lam3, lam2, lam4)]
    for i in range(4):
        for j in range(i + 1, 4):
            same_inf = math.isinf(params[i]) and math.isinf(params[j])
            if same_inf or params[i] == params[j]:
                raise ValueError("the four circle parameters must be distinct")
    a, b, c, d = params
    sign = 1.0
    for u, v in ((a, c), (b, d), (a, d), (b, c)):
        if math.isinf(u) or math.isinf(v):
            continue  # cancels against the matching factor
        sign *= math.copysign(1.0, u - v)
    return sign < 0


@dataclass(frozen=True)
class RCircleEqualityReport:
    """Outcome of one pairing test on a (transported) R-circle quadruple."""

    parameters: tuple
    separated: bool
    pairing: str
    x1_sqrt: float
    x2_sqrt: float
    defect: float
    tol: float
    passed: bool
    points: tuple

    def to_dict(self) -> dict:
        return {
            "parameters": ["inf" if math.isinf(v) else v for v in self.parameters],
            "separated": self.separated,
            "pairing": self.pairing,
            "X1_sqrt": self.x1_sqrt,
            "X2_sqrt": self.x2_sqrt,
            "defect": self.defect,
            "tol": self.tol,
            "passed": self.passed,
            "points": [point_to_json(p) for p in self.points],
        }


def rcircle_equality_check(
    alg: HTypeAlgebra,
    x,
    parameters,
    word: SimilarityWord = (),
    tol: float = 1e-8,
) -> RCircleEqualityReport:
    """Test the diagonal pairing of an R-circle quadruple after a word.

    The first two parameters name the candidate diagonal pair, the last
    two the opposite pair.  The four circle points are mapped through
    ``word`` and the pairing "12|34" of the resulting quadruple is
    evaluated: when {lam_a, lam_b} separates {lam_c, lam_d} the defect
    must vanish to within tol, otherwise it must only be >= -tol.
    """
    parameters = tuple(float(v) for v in parameters)
    if len(parameters) != 4:
        raise ValueError(f"expected four circle parameters, got {len(parameters)}")
    points = standard_rcircle(alg, x, parameters)
    points = tuple(apply_similarity(alg, word, p) for p in points)
    separated = separates(*parameters)
    report = ptolemaean_defects(alg, *points)
    pairing = report.pairings[0]
    assert pairing.pairing == "12|34"
    if separated:
        passed = abs(pairing.defect) <= tol
    else:
        passed = pairing.defect >= -tol
    return RCircleEqualityReport(
        parameters=parameters,
        separated=separated,
        pairing=pairing.pairing,
        x1_sqrt=pairing.x1_sqrt,
        x2_sqrt=pairing.x2_sqrt,
        defect=pairing.defect,
        tol=tol,
        passed=passed,
        points=points,
    )
