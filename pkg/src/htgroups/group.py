"""Group elements, gauge metric, inversion, and similarity words.

Points are written in exponential coordinates ``(x, t)`` with ``x`` in
``R^m`` and ``t`` in ``R^n``.  The group law is

    ``(x, t) (x', t') = (x + x', t + t' + u_form(x, x') / 2)``

and the homogeneous gauge is ``(|x|^4 + 16 |t|^2)^(1/4)``; the pairing
of the 1/2 coefficient with the constant 16 is what makes the induced
left-invariant distance an actual metric (the calibration suite in
:mod:`htgroups.verify` demonstrates that doubling the central term
breaks the triangle inequality).

The space is compactified with a single point at infinity, available as
the module constant :data:`INFINITY`.  The inversion

    ``sigma(x, t) = ((-|x|^2 x + 4 sum_k t_k U^k x) / D, -t / D)``,
    ``D = |x|^4 + 16 |t|^2``

swaps 0 and infinity, is an involution on every H-type group, and
satisfies ``d(sigma p, 0) d(p, 0) = 1``.  The stronger pair identity
``d(sigma p, sigma q) = d(p, q) / (d(p, 0) d(0, q))`` holds exactly when
the algebra is Iwasawa.

Functions with an ``_xt`` suffix are batched kernels over raw arrays of
shape (..., m) and (..., n); the object API wraps them for single
points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .algebra import HTypeAlgebra, u_form

__all__ = [
    "GroupElement",
    "INFINITY",
    "ExtendedPoint",
    "is_infinity",
    "identity",
    "multiply",
    "inverse",
    "dilate",
    "gauge",
    "distance",
    "inversion",
    "LeftTranslate",
    "Dilate",
    "Invert",
    "SimilarityWord",
    "apply_similarity",
    "multiply_xt",
    "gauge4_xt",
    "distance_xt",
    "inversion_xt",
    "apply_similarity_xt",
    "point_to_json",
    "point_from_json",
    "word_to_json",
    "word_from_json",
]


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A finite point (x, t); x is the horizontal part, t the central part."""

    x: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.atleast_1d(np.asarray(self.x, dtype=float)))
        object.__setattr__(self, "t", np.atleast_1d(np.asarray(self.t, dtype=float)))

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.t, other.t)

    def __repr__(self):
        return f"GroupElement(x={self.x.tolist()}, t={self.t.tolist()})"


class _Infinity:
    """The point at infinity of the one-point compactification."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

ExtendedPoint = Union[GroupElement, _Infinity]


def is_infinity(p: ExtendedPoint) -> bool:
    return isinstance(p, _Infinity)


def _check_point(alg: HTypeAlgebra, p: GroupElement, name: str) -> GroupElement:
    if p.x.shape != (alg.m,) or p.t.shape != (alg.n,):
        raise ValueError(
            f"{name} has shape ({p.x.shape}, {p.t.shape}), "
            f"expected (({alg.m},), ({alg.n},))"
        )
    return p


# ---------------------------------------------------------------------------
# batched kernels


def multiply_xt(alg, x1, t1, x2, t2):
    """Group product on raw coordinate arrays."""
    return x1 + x2, t1 + t2 + 0.5 * u_form(alg, x1, x2)


def gauge4_xt(x, t):
    """Fourth power of the gauge: |x|^4 + 16 |t|^2 (no root taken)."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    xx = np.einsum("...i,...i->...", x, x)
    return xx * xx + 16.0 * np.einsum("...k,...k->...", t, t)


def distance_xt(alg, x1, t1, x2, t2):
    """Gauge of p^-1 q for finite points, batched."""
    dx = np.asarray(x2, dtype=float) - np.asarray(x1, dtype=float)
    dt = np.asarray(t2, dtype=float) - np.asarray(t1, dtype=float) - 0.5 * u_form(alg, x1, x2)
    return gauge4_xt(dx, dt) ** 0.25


def inversion_xt(alg, x, t):
    """Inversion of finite nonzero points, batched.

    The central coordinates t_k weight the U^k x terms in the numerator;
    with that weighting the map squares to the identity on any H-type
    group (the mixed terms cancel by anticommutation).
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    d4 = gauge4_xt(x, t)[..., None]
    xx = np.einsum("...i,...i->...", x, x)[..., None]
    jt = np.einsum("kij,...k,...j->...i", alg.U, t, x)
    return (-xx * x + 4.0 * jt) / d4, -t / d4


# ---------------------------------------------------------------------------
# object API


def identity(alg: HTypeAlgebra) -> GroupElement:
    return GroupElement(np.zeros(alg.m), np.zeros(alg.n))


def multiply(alg: HTypeAlgebra, p: GroupElement, q: GroupElement) -> GroupElement:
    _check_point(alg, p, "p")
    _check_point(alg, q, "q")
    x, t = multiply_xt(alg, p.x, p.t, q.x, q.t)
    return GroupElement(x, t)


def inverse(p: GroupElement) -> GroupElement:
    """Group inverse: (x, t)^-1 = (-x, -t)."""
    return GroupElement(-p.x, -p.t)


def dilate(lam: float, p: GroupElement) -> GroupElement:
    """Dilation (x, t) -> (lam x, lam^2 t); a group automorphism for lam > 0."""
    if not lam > 0:
        raise ValueError(f"dilation factor must be positive, got {lam}")
    return GroupElement(lam * p.x, lam * lam * p.t)


def gauge(p: GroupElement) -> float:
    """Homogeneous norm (|x|^4 + 16 |t|^2)^(1/4)."""
    return float(gauge4_xt(p.x, p.t) ** 0.25)


def distance(alg: HTypeAlgebra, p: ExtendedPoint, q: ExtendedPoint) -> float:
    """Left-invariant gauge distance, extended by d(p, inf) = inf, d(inf, inf) = 0."""
    p_inf = is_infinity(p)
    q_inf = is_infinity(q)
    if p_inf and q_inf:
        return 0.0
    if p_inf or q_inf:
        return math.inf
    _check_point(alg, p, "p")
    _check_point(alg, q, "q")
    return float(distance_xt(alg, p.x, p.t, q.x, q.t))


def inversion(alg: HTypeAlgebra, p: ExtendedPoint) -> ExtendedPoint:
    """The metric inversion; swaps 0 and INFINITY and squares to the identity."""
    if is_infinity(p):
        return identity(alg)
    _check_point(alg, p, "p")
    if not gauge4_xt(p.x, p.t) > 0:
        return INFINITY
    x, t = inversion_xt(alg, p.x, p.t)
    return GroupElement(x, t)


# ---------------------------------------------------------------------------
# similarity words


@dataclass(frozen=True)
class LeftTranslate:
    element: GroupElement


@dataclass(frozen=True)
class Dilate:
    factor: float

    def __post_init__(self):
        if not self.factor > 0:
            raise ValueError(f"dilation factor must be positive, got {self.factor}")


@dataclass(frozen=True)
class Invert:
    pass


SimilarityWord = Sequence[Union[LeftTranslate, Dilate, Invert]]


def apply_similarity(alg: HTypeAlgebra, word: SimilarityWord, p: ExtendedPoint) -> ExtendedPoint:
    """Apply the atoms left to right.

    Translations and dilations fix INFINITY; inversion swaps 0 and
    INFINITY.
    """
    for atom in word:
        if isinstance(atom, LeftTranslate):
            if not is_infinity(p):
                p = multiply(alg, atom.element, p)
        elif isinstance(atom, Dilate):
            if not is_infinity(p):
                p = dilate(atom.factor, p)
        elif isinstance(atom, Invert):
            p = inversion(alg, p)
        else:
            raise TypeError(f"unknown similarity atom: {atom!r}")
    return p


def apply_similarity_xt(alg, word, x, t, infinite):
    """Batched word application with an infinity mask.

    x: (..., m), t: (..., n), infinite: (...) boolean.  Coordinates of
    points flagged infinite are kept at zero.  Returns the transformed
    (x, t, infinite).
    """
    x = np.array(x, dtype=float)
    t = np.array(t, dtype=float)
    infinite = np.array(infinite, dtype=bool)
    x[infinite] = 0.0
    t[infinite] = 0.0
    for atom in word:
        if isinstance(atom, LeftTranslate):
            g = atom.element
            nx, nt = multiply_xt(alg, g.x, g.t, x, t)
            x = np.where(infinite[..., None], 0.0, nx)
            t = np.where(infinite[..., None], 0.0, nt)
        elif isinstance(atom, Dilate):
            x = np.where(infinite[..., None], 0.0, atom.factor * x)
            t = np.where(infinite[..., None], 0.0, atom.factor * atom.factor * t)
        elif isinstance(atom, Invert):
            d4 = gauge4_xt(x, t)
            to_inf = ~infinite & (d4 == 0.0)
            safe = np.where(d4 == 0.0, 1.0, d4)[..., None]
            xx = np.einsum("...i,...i->...", x, x)[..., None]
            jt = np.einsum("kij,...k,...j->...i", alg.U, t, x)
            sx = (-xx * x + 4.0 * jt) / safe
            st = -t / safe
            dead = (infinite | to_inf)[..., None]
            x = np.where(dead, 0.0, sx)
            t = np.where(dead, 0.0, st)
            infinite = to_inf
        else:
            raise TypeError(f"unknown similarity atom: {atom!r}")
    return x, t, infinite


# ---------------------------------------------------------------------------
# JSON interchange


def point_to_json(p: ExtendedPoint):
    """A point as {"x": [...], "t": [...]}; INFINITY encodes as "inf"."""
    if is_infinity(p):
        return "inf"
    return {"x": p.x.tolist(), "t": p.t.tolist()}


def point_from_json(obj) -> ExtendedPoint:
    if obj == "inf":
        return INFINITY
    if not isinstance(obj, dict) or "x" not in obj or "t" not in obj:
        raise ValueError(f'point JSON must be "inf" or {{"x": [...], "t": [...]}}, got {obj!r}')
    return GroupElement(np.asarray(obj["x"], dtype=float), np.asarray(obj["t"], dtype=float))


def word_to_json(word: SimilarityWord) -> list:
    out = []
    for atom in word:
        if isinstance(atom, LeftTranslate):
            out.append({"op": "translate", "arg": point_to_json(atom.element)})
        elif isinstance(atom, Dilate):
            out.append({"op": "dilate", "arg": atom.factor})
        elif isinstance(atom, Invert):
            out.append({"op": "invert", "arg": None})
        else:
            raise TypeError(f"unknown similarity atom: {atom!r}")
    return out


def word_from_json(obj) -> tuple:
    atoms = []
    for entry in obj:
        op = entry.get("op") if isinstance(entry, dict) else None
        if op == "translate":
            p = point_from_json(entry["arg"])
            if is_infinity(p):
                raise ValueError("cannot translate by the point at infinity")
            atoms.append(LeftTranslate(p))
        elif op == "dilate":
            atoms.append(Dilate(float(entry["arg"])))
        elif op == "invert":
            atoms.append(Invert())
        else:
            raise ValueError(f"unknown word entry: {entry!r}")
    return tuple(atoms)
