"""Randomized verification suites for the gauge metric.

Each suite draws reproducible samples, evaluates a scale-free violation
measure, and reports the worst case together with a witness.  The five
public suites:

* ``expansion_identity``: gauge^4 of a product against its six-term
  bilinear expansion; violation is |direct - expanded| normalized by
  (gauge(p) + gauge(q))^4.
* ``inequality_chain``: the four bounds that force the triangle
  inequality (two mixed-term bounds, the product bound, and the Bessel
  bound on the horizontal form, split into its two halves); violation is
  the negative part of the relative slack.
* ``calibration``: the convention checks that pin the group law and
  gauge constant against each other: triangle inequality, inversion
  involutivity, and the unit-gauge identity d(sigma p, 0) d(p, 0) = 1.
* ``iwasawa``: the pair identity
  d(sigma p, sigma q) d(p, 0) d(0, q) / d(p, q) = 1, which holds exactly
  on Iwasawa algebras and fails with order-one deviation otherwise.
* ``ptolemaean``: minimum pairing defect over random quadruples, plus
  equality transport along R-circle images under random similarity
  words (separated pairings must have vanishing defect).

Sampling is standard normal per coordinate by default, with targeted
near-equality strata where the equality locus would otherwise be
missed.  Chunks of at most ``20000`` samples get independent generators
seeded by (seed, suite id, chunk index), so results are bit-identical
for a given config regardless of worker count; chunk results merge by
maximum violation.

On failure a witness is shrunk by binary-searching the smallest
dilation scale at which it still violates the tolerance; for
scale-invariant violations this bottoms out at a small floor, which is
itself diagnostic (the failure is structural, not a conditioning
artifact).

Mutated operation sets (doubled central term, unit gauge constant,
inversion without the central weights, scaled U matrices) are provided
so the suites can demonstrate sensitivity; see :func:`mutated_model`.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Mapping

import numpy as np

from .algebra import HTypeAlgebra, custom, u_form
from .group import (
    Dilate,
    GroupElement,
    Invert,
    LeftTranslate,
    apply_similarity_xt,
    distance_xt,
    gauge4_xt,
    inversion_xt,
    multiply_xt,
    word_to_json,
)
from .moebius import defects_xt

__all__ = [
    "SuiteConfig",
    "SuiteResult",
    "GroupModel",
    "standard_model",
    "mutated_model",
    "MUTATIONS",
    "SUITE_NAMES",
    "DEFAULT_TOLERANCES",
    "expansion_identity_suite",
    "inequality_chain_suite",
    "normalization_calibration",
    "iwasawa_discriminator",
    "ptolemaean_campaign",
    "run_suites",
    "inequality_slacks",
    "INEQUALITY_NAMES",
]

SUITE_NAMES = (
    "expansion_identity",
    "inequality_chain",
    "calibration",
    "iwasawa",
    "ptolemaean",
)

DEFAULT_TOLERANCES = {
    "expansion_identity": 1e-10,
    "inequality_chain": 1e-10,
    "triangle": 1e-9,
    "involution": 1e-9,
    "inversion_gauge": 1e-9,
    "iwasawa": 1e-9,
    "ptolemaean_random": 1e-9,
    "rcircle_transport": 1e-8,
}

_SUITE_IDS = {
    "expansion_identity": 1,
    "inequality_chain": 2,
    "triangle": 3,
    "involution": 4,
    "inversion_gauge": 5,
    "iwasawa": 6,
    "ptolemaean_random": 7,
    "rcircle_transport": 8,
}

_CHUNK = 20000
_TINY = 1e-300


@dataclass(frozen=True)
class SuiteConfig:
    """Reproducible campaign parameters shared by all suites."""

    algebra: HTypeAlgebra
    samples: int = 10000
    seed: int = 0
    tolerances: Mapping[str, float] = field(default_factory=dict)
    sampler: str = "normal"
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.sampler not in ("normal", "uniform"):
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        for name, value in dict(self.tolerances).items():
            if name not in DEFAULT_TOLERANCES:
                raise ValueError(f"unknown tolerance key {name!r}")
            if not value > 0:
                raise ValueError(f"tolerance {name!r} must be positive, got {value}")

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    passed: bool
    worst: float
    tol: float
    samples: int
    duration: float
    witness: dict | None = None
    subresults: tuple = ()

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "passed": self.passed,
            "worst": self.worst,
            "tol": self.tol,
            "samples": self.samples,
            "duration": self.duration,
            "witness": self.witness,
        }
        if self.subresults:
            out["subresults"] = [r.to_dict() for r in self.subresults]
        return out


# ---------------------------------------------------------------------------
# operation models and mutations

MUTATIONS = (
    "doubled_central",
    "unit_gauge_constant",
    "inversion_drops_center",
    "scaled_u",
)


@dataclass(frozen=True)
class GroupModel:
    """The operation kernels a suite drives.

    The standard model delegates to :mod:`htgroups.group`, so the suites
    exercise the production code path.  Mutated models swap single
    kernels to prove the suites would catch the corresponding defect.
    """

    alg: HTypeAlgebra
    label: str
    mul: Callable
    gauge4: Callable
    dist: Callable
    invert: Callable


def standard_model(alg: HTypeAlgebra) -> GroupModel:
    return GroupModel(
        alg=alg,
        label="standard",
        mul=partial(multiply_xt, alg),
        gauge4=gauge4_xt,
        dist=partial(distance_xt, alg),
        invert=partial(inversion_xt, alg),
    )


def _composed_dist(mul, gauge4):
    def dist(x1, t1, x2, t2):
        mx, mt = mul(-np.asarray(x1, dtype=float), -np.asarray(t1, dtype=float), x2, t2)
        return gauge4(mx, mt) ** 0.25

    return dist


def mutated_model(alg: HTypeAlgebra, mutation: str) -> GroupModel:
    """A deliberately broken variant of the standard operations."""
    if mutation == "doubled_central":
        def mul(x1, t1, x2, t2):
            return x1 + x2, t1 + t2 + u_form(alg, x1, x2)

        return GroupModel(
            alg=alg,
            label=mutation,
            mul=mul,
            gauge4=gauge4_xt,
            dist=_composed_dist(mul, gauge4_xt),
            invert=partial(inversion_xt, alg),
        )
    if mutation == "unit_gauge_constant":
        def gauge4(x, t):
            x = np.asarray(x, dtype=float)
            t = np.asarray(t, dtype=float)
            xx = np.einsum("...i,...i->...", x, x)
            return xx * xx + np.einsum("...k,...k->...", t, t)

        mul = partial(multiply_xt, alg)
        return GroupModel(
            alg=alg,
            label=mutation,
            mul=mul,
            gauge4=gauge4,
            dist=_composed_dist(mul, gauge4),
            invert=partial(inversion_xt, alg),
        )
    if mutation == "inversion_drops_center":
        def invert(x, t):
            x = np.asarray(x, dtype=float)
            t = np.asarray(t, dtype=float)
            d4 = gauge4_xt(x, t)[..., None]
            xx = np.einsum("...i,...i->...", x, x)[..., None]
            js = np.einsum("kij,...j->...i", alg.U, x)  # central weights dropped
            return (-xx * x + 4.0 * js) / d4, -t / d4

        return GroupModel(
            alg=alg,
            label=mutation,
            mul=partial(multiply_xt, alg),
            gauge4=gauge4_xt,
            dist=partial(distance_xt, alg),
            invert=invert,
        )
    if mutation == "scaled_u":
        bad = custom(alg.m, alg.n, 2.0 * alg.U)
        model = standard_model(bad)
        return GroupModel(
            alg=bad,
            label=mutation,
            mul=model.mul,
            gauge4=model.gauge4,
            dist=model.dist,
            invert=model.invert,
        )
    raise ValueError(f"unknown mutation {mutation!r}; expected one of {MUTATIONS}")


# ---------------------------------------------------------------------------
# sampling and chunking


def _coords(rng, shape, law):
    if law == "uniform":
        return rng.uniform(-2.0, 2.0, shape)
    return rng.standard_normal(shape)


def _unit_rows(rng, count, dim):
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _chunk_sizes(total):
    sizes = [_CHUNK] * (total // _CHUNK)
    if total % _CHUNK:
        sizes.append(total % _CHUNK)
    return sizes or [1]


def _run_chunks(cfg: SuiteConfig, suite: str, worker):
    """worker(chunk_index, size, rng) -> (worst, witness).

    Merged by maximum violation with ties to the lowest chunk index, so
    the outcome is independent of execution order and worker count.
    """
    sizes = _chunk_sizes(cfg.samples)
    suite_id = _SUITE_IDS[suite]

    def job(i):
        rng = np.random.default_rng([cfg.seed % (2 ** 63), suite_id, i])
        worst, witness = worker(i, sizes[i], rng)
        return i, worst, witness

    if cfg.workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(job, range(len(sizes))))
    else:
        results = [job(i) for i in range(len(sizes))]
    results.sort(key=lambda r: (-r[1], r[0]))
    _, worst, witness = results[0]
    return float(worst), witness


def _shrink_scale(violation_at, tol, floor=2.0 ** -20):
    """Smallest dilation scale in [floor, 1] still violating tol.

    Assumes violation_at(1.0) > tol.  Geometric bisection, 48 steps.
    """
    if violation_at(floor) > tol:
        return floor
    lo, hi = floor, 1.0
    for _ in range(48):
        mid = math.sqrt(lo * hi)
        if violation_at(mid) > tol:
            hi = mid
        else:
            lo = mid
    return hi


def _point_json(x, t):
    return {"x": np.asarray(x).tolist(), "t": np.asarray(t).tolist()}


# ---------------------------------------------------------------------------
# violation measures (shared by the campaign path and witness shrinking)


def _expansion_violation(model: GroupModel, x, t, xp, tp):
    lhs = model.gauge4(*model.mul(x, t, xp, tp))
    g1 = model.gauge4(x, t)
    g2 = model.gauge4(xp, tp)
    a = np.einsum("...i,...i->...", x, x)
    b = np.einsum("...i,...i->...", xp, xp)
    c = np.einsum("...i,...i->...", x, xp)
    w = u_form(model.alg, x, xp)
    ww = np.einsum("...k,...k->...", w, w)
    tw = np.einsum("...k,...k->...", t, w)
    tpw = np.einsum("...k,...k->...", tp, w)
    ttp = np.einsum("...k,...k->...", t, tp)
    rhs = (
        g1
        + g2
        + 4.0 * (c * c + ww)
        + 4.0 * (a * c + 4.0 * tw)
        + 4.0 * (b * c + 4.0 * tpw)
        + 2.0 * (a * b + 16.0 * ttp)
    )
    scale = (g1 ** 0.25 + g2 ** 0.25) ** 4
    return np.abs(lhs - rhs) / np.maximum(scale, _TINY)


INEQUALITY_NAMES = (
    "product_vs_gauges",
    "mixed_p",
    "mixed_q",
    "cauchy_schwarz",
    "norms_vs_gauges",
)


def inequality_slacks(model_or_alg, x, t, xp, tp) -> np.ndarray:
    """Signed relative slacks of the four triangle-proof bounds.

    Rows follow INEQUALITY_NAMES (the Bessel bound is split in two):
    (1) |x|^2 |x'|^2 + 16 <t,t'>        <= gauge(p)^2 gauge(q)^2
    (2) |x|^2 <x,x'> + 4 <t, w>         <= gauge(p)^2 M
    (3) |x'|^2 <x,x'> + 4 <t', w>       <= gauge(q)^2 M
    (4) <x,x'>^2 + |w|^2 = M^2          <= |x|^2 |x'|^2
    (5) |x|^2 |x'|^2                    <= gauge(p)^2 gauge(q)^2
    with w = u_form(x, x') and M = sqrt(<x,x'>^2 + |w|^2).  Each slack is
    (rhs - lhs) / max(|lhs|, |rhs|); negative values are violations.
    """
    model = model_or_alg
    if isinstance(model_or_alg, HTypeAlgebra):
        model = standard_model(model_or_alg)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    xp = np.asarray(xp, dtype=float)
    tp = np.asarray(tp, dtype=float)
    g1sq = np.sqrt(model.gauge4(x, t))
    g2sq = np.sqrt(model.gauge4(xp, tp))
    a = np.einsum("...i,...i->...", x, x)
    b = np.einsum("...i,...i->...", xp, xp)
    c = np.einsum("...i,...i->...", x, xp)
    w = u_form(model.alg, x, xp)
    msq = c * c + np.einsum("...k,...k->...", w, w)
    m = np.sqrt(msq)
    pairs = (
        (a * b + 16.0 * np.einsum("...k,...k->...", t, tp), g1sq * g2sq),
        (a * c + 4.0 * np.einsum("...k,...k->...", t, w), g1sq * m),
        (b * c + 4.0 * np.einsum("...k,...k->...", tp, w), g2sq * m),
        (msq, a * b),
        (a * b, g1sq * g2sq),
    )
    slacks = []
    for lhs, rhs in pairs:
        scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), _TINY)
        slacks.append((rhs - lhs) / scale)
    return np.stack(slacks)


def _triangle_violation(model: GroupModel, x1, t1, x2, t2, x3, t3):
    # violation of d(p, q) <= d(p, r) + d(r, q), relative to d(p, q)
    dpq = model.dist(x1, t1, x3, t3)
    dpr = model.dist(x1, t1, x2, t2)
    drq = model.dist(x2, t2, x3, t3)
    return (dpq - dpr - drq) / np.maximum(dpq, _TINY)


def _involution_violation(model: GroupModel, x, t):
    # coordinate-wise comparison: the gauge distance would inflate a
    # central roundoff eps to ~2 sqrt(eps) and mask the actual precision
    sx, st = model.invert(x, t)
    ssx, sst = model.invert(sx, st)
    err = np.linalg.norm(ssx - x, axis=-1) + np.linalg.norm(sst - t, axis=-1)
    size = np.linalg.norm(x, axis=-1) + np.linalg.norm(t, axis=-1)
    return err / np.maximum(size, _TINY)


def _inversion_gauge_violation(model: GroupModel, x, t):
    sx, st = model.invert(x, t)
    return np.abs(
        model.gauge4(sx, st) ** 0.25 * model.gauge4(x, t) ** 0.25 - 1.0
    )


def _iwasawa_violation(model: GroupModel, x1, t1, x2, t2):
    sx1, st1 = model.invert(x1, t1)
    sx2, st2 = model.invert(x2, t2)
    num = model.dist(sx1, st1, sx2, st2) * model.gauge4(x1, t1) ** 0.25 * model.gauge4(x2, t2) ** 0.25
    den = np.maximum(model.dist(x1, t1, x2, t2), _TINY)
    return np.abs(num / den - 1.0)


# ---------------------------------------------------------------------------
# suites


def expansion_identity_suite(cfg: SuiteConfig, model: GroupModel | None = None) -> SuiteResult:
    """Direct gauge^4 of a product versus its grouped six-term expansion."""
    model = model or standard_model(cfg.algebra)
    alg = model.alg
    tol = cfg.tol("expansion_identity")
    start = time.perf_counter()

    def worker(idx, size, rng):
        x = _coords(rng, (size, alg.m), cfg.sampler)
        t = _coords(rng, (size, alg.n), cfg.sampler)
        xp = _coords(rng, (size, alg.m), cfg.sampler)
        tp = _coords(rng, (size, alg.n), cfg.sampler)
        viol = _expansion_violation(model, x, t, xp, tp)
        k = int(np.argmax(viol))
        witness = {
            "p": _point_json(x[k], t[k]),
            "q": _point_json(xp[k], tp[k]),
            "violation": float(viol[k]),
        }
        return float(viol[k]), witness

    worst, witness = _run_chunks(cfg, "expansion_identity", worker)
    passed = worst <= tol
    if not passed and witness is not None:
        x = np.asarray(witness["p"]["x"])
        t = np.asarray(witness["p"]["t"])
        xp = np.asarray(witness["q"]["x"])
        tp = np.asarray(witness["q"]["t"])
        scale = _shrink_scale(
            lambda s: float(_expansion_violation(model, s * x, s * s * t, s * xp, s * s * tp)),
            tol,
        )
        witness["shrink_scale"] = scale
    return SuiteResult(
        suite="expansion_identity",
        passed=passed,
        worst=worst,
        tol=tol,
        samples=cfg.samples,
        duration=time.perf_counter() - start,
        witness=witness,
    )


def _sample_pairs_stratified(rng, m, n, size, law):
    """Base pairs plus near-equality and exact-equality strata (15% each)."""
    n_eq = size * 15 // 100
    n_near = size * 15 // 100
    n_base = size - n_eq - n_near
    x = _coords(rng, (size, m), law)
    t = _coords(rng, (size, n), law)
    xp = _coords(rng, (size, m), law)
    tp = _coords(rng, (size, n), law)
    if n_near:
        sl = slice(n_base, n_base + n_near)
        lam = rng.uniform(0.0, 2.0, (n_near, 1))
        xp[sl] = lam * x[sl] + 1e-3 * rng.standard_normal((n_near, m))
        t[sl] *= 1e-3
        tp[sl] *= 1e-3
    if n_eq:
        sl = slice(size - n_eq, size)
        lam = rng.uniform(0.0, 2.0, (n_eq, 1))
        xp[sl] = lam * x[sl]
        t[sl] = 0.0
        tp[sl] = 0.0
    return x, t, xp, tp


def inequality_chain_suite(cfg: SuiteConfig, model: GroupModel | None = None) -> SuiteResult:
    """Negative slack anywhere in the four-bound chain is a violation."""
    model = model or standard_model(cfg.algebra)
    alg = model.alg
    tol = cfg.tol("inequality_chain")
    start = time.perf_counter()

    def worker(idx, size, rng):
        x, t, xp, tp = _sample_pairs_stratified(rng, alg.m, alg.n, size, cfg.sampler)
        slacks = inequality_slacks(model, x, t, xp, tp)
        viol = -slacks.min(axis=0)
        k = int(np.argmax(viol))
        which = int(np.argmin(slacks[:, k]))
        witness = {
            "p": _point_json(x[k], t[k]),
            "q": _point_json(xp[k], tp[k]),
            "inequality": INEQUALITY_NAMES[which],
            "violation": float(viol[k]),
        }
        return float(viol[k]), witness

    worst, witness = _run_chunks(cfg, "inequality_chain", worker)
    passed = worst <= tol
    if not passed and witness is not None:
        x = np.asarray(witness["p"]["x"])
        t = np.asarray(witness["p"]["t"])
        xp = np.asarray(witness["q"]["x"])
        tp = np.asarray(witness["q"]["t"])
        scale = _shrink_scale(
            lambda s: float(-inequality_slacks(model, s * x, s * s * t, s * xp, s * s * tp).min()),
            tol,
        )
        witness["shrink_scale"] = scale
    return SuiteResult(
        suite="inequality_chain",
        passed=passed,
        worst=worst,
        tol=tol,
        samples=cfg.samples,
        duration=time.perf_counter() - start,
        witness=witness,
    )


def _pair_witness_suite(cfg, suite, model, violation, arity):
    """Shared driver for the point-sampled identity suites."""
    alg = model.alg
    tol = cfg.tol(suite)
    start = time.perf_counter()

    def worker(idx, size, rng):
        pts = []
        for _ in range(arity):
            pts.append(_coords(rng, (size, alg.m), cfg.sampler))
            pts.append(_coords(rng, (size, alg.n), cfg.sampler))
        viol = violation(model, *pts)
        k = int(np.argmax(viol))
        witness = {"violation": float(viol[k])}
        for idx_pt in range(arity):
            witness[f"p{idx_pt + 1}"] = _point_json(pts[2 * idx_pt][k], pts[2 * idx_pt + 1][k])
        return float(viol[k]), witness

    worst, witness = _run_chunks(cfg, suite, worker)
    passed = worst <= tol
    if not passed and witness is not None:
        pts = []
        for idx_pt in range(arity):
            pts.append(np.asarray(witness[f"p{idx_pt + 1}"]["x"]))
            pts.append(np.asarray(witness[f"p{idx_pt + 1}"]["t"]))

        def viol_at(s):
            scaled = []
            for i, arr in enumerate(pts):
                scaled.append((s if i % 2 == 0 else s * s) * arr)
            return float(violation(model, *scaled))

        witness["shrink_scale"] = _shrink_scale(viol_at, tol)
    return SuiteResult(
        suite=suite,
        passed=passed,
        worst=worst,
        tol=tol,
        samples=cfg.samples,
        duration=time.perf_counter() - start,
        witness=witness,
    )


def _triangle_suite(cfg: SuiteConfig, model: GroupModel) -> SuiteResult:
    alg = model.alg
    tol = cfg.tol("triangle")
    start = time.perf_counter()

    def worker(idx, size, rng):
        n_eq = size * 2 // 10
        n_base = size - n_eq
        xs = [_coords(rng, (size, alg.m), cfg.sampler) for _ in range(3)]
        ts = [_coords(rng, (size, alg.n), cfg.sampler) for _ in range(3)]
        if n_eq:
            # translated collinear equality configurations: p = g(-x, 0),
            # r = g, q = g(lam x, 0) with lam >= 0
            sl = slice(n_base, size)
            xdir = _unit_rows(rng, n_eq, alg.m)
            lam = rng.uniform(0.0, 2.0, (n_eq, 1))
            gx = _coords(rng, (n_eq, alg.m), cfg.sampler)
            gt = _coords(rng, (n_eq, alg.n), cfg.sampler)
            zero = np.zeros((n_eq, alg.n))
            xs[0][sl], ts[0][sl] = multiply_xt(alg, gx, gt, -xdir, zero)
            xs[1][sl], ts[1][sl] = gx, gt
            xs[2][sl], ts[2][sl] = multiply_xt(alg, gx, gt, lam * xdir, zero)
        viol = _triangle_violation(model, xs[0], ts[0], xs[1], ts[1], xs[2], ts[2])
        k = int(np.argmax(viol))
        witness = {
            "p": _point_json(xs[0][k], ts[0][k]),
            "r": _point_json(xs[1][k], ts[1][k]),
            "q": _point_json(xs[2][k], ts[2][k]),
            "violation": float(viol[k]),
        }
        return float(viol[k]), witness

    worst, witness = _run_chunks(cfg, "triangle", worker)
    passed = worst <= tol
    if not passed and witness is not None:
        arrs = [
            (np.asarray(witness[key]["x"]), np.asarray(witness[key]["t"]))
            for key in ("p", "r", "q")
        ]

        def viol_at(s):
            flat = []
            for x, t in arrs:
                flat.extend((s * x, s * s * t))
            return float(_triangle_violation(model, *flat))

        witness["shrink_scale"] = _shrink_scale(viol_at, tol)
    return SuiteResult(
        suite="triangle",
        passed=passed,
        worst=worst,
        tol=tol,
        samples=cfg.samples,
        duration=time.perf_counter() - start,
        witness=witness,
    )


def normalization_calibration(cfg: SuiteConfig, model: GroupModel | None = None) -> SuiteResult:
    """Certify the adopted group-law/gauge pairing.

    Aggregates the triangle, involution (sigma^2 = id), and unit-gauge
    (d(sigma p, 0) d(p, 0) = 1) sub-suites; the aggregate worst value is
    max(sub worst / sub tol), so values above 1 mean failure, and the
    witness names the identities that broke.
    """
    model = model or standard_model(cfg.algebra)
    subs = (
        _triangle_suite(cfg, model),
        _pair_witness_suite(cfg, "involution", model, _involution_violation, 1),
        _pair_witness_suite(cfg, "inversion_gauge", model, _inversion_gauge_violation, 1),
    )
    passed = all(r.passed for r in subs)
    worst = max(r.worst / r.tol for r in subs)
    failed = [r.suite for r in subs if not r.passed]
    witness = None
    if failed:
        first = next(r for r in subs if not r.passed)
        witness = {"failed": failed, "first_witness": first.witness}
    return SuiteResult(
        suite="calibration",
        passed=passed,
        worst=worst,
        tol=1.0,
        samples=cfg.samples,
        duration=sum(r.duration for r in subs),
        witness=witness,
        subresults=subs,
    )


def iwasawa_discriminator(cfg: SuiteConfig, model: GroupModel | None = None) -> SuiteResult:
    """Deviation of d(sigma p, sigma q) d(p, 0) d(0, q) / d(p, q) from 1.

    Passes (Iwasawa-consistent) when the worst deviation stays below the
    tolerance; on non-Iwasawa algebras an order-one witness is expected
    within a few thousand samples.
    """
    model = model or standard_model(cfg.algebra)
    return _pair_witness_suite(cfg, "iwasawa", model, _iwasawa_violation, 2)


def _random_quadruple_suite(cfg: SuiteConfig) -> SuiteResult:
    alg = cfg.algebra
    tol = cfg.tol("ptolemaean_random")
    start = time.perf_counter()

    def worker(idx, size, rng):
        X = _coords(rng, (4, size, alg.m), cfg.sampler)
        T = _coords(rng, (4, size, alg.n), cfg.sampler)
        n_low = size * 15 // 100
        n_circ = size * 15 // 100
        n_base = size - n_low - n_circ
        if n_low:
            T[:, n_base:n_base + n_low] *= 1e-3
        if n_circ:
            # nearly on a standard R-circle: collinear horizontal parts,
            # tiny central parts
            sl = slice(size - n_circ, size)
            xdir = _unit_rows(rng, n_circ, alg.m)
            lam = rng.uniform(-3.0, 3.0, (4, n_circ, 1))
            X[:, sl] = lam * xdir + 1e-3 * rng.standard_normal((4, n_circ, alg.m))
            T[:, sl] = 1e-3 * rng.standard_normal((4, n_circ, alg.n))
        viol = -defects_xt(alg, X, T).min(axis=0)
        k = int(np.argmax(viol))
        witness = {
            "points": [_point_json(X[i, k], T[i, k]) for i in range(4)],
            "min_defect": float(-viol[k]),
        }
        return float(viol[k]), witness

    worst, witness = _run_chunks(cfg, "ptolemaean_random", worker)
    return SuiteResult(
        suite="ptolemaean_random",
        passed=worst <= tol,
        worst=worst,
        tol=tol,
        samples=cfg.samples,
        duration=time.perf_counter() - start,
        witness=witness,
    )


def _random_word(rng, alg, law, max_len=6):
    atoms = []
    for _ in range(int(rng.integers(1, max_len + 1))):
        kind = int(rng.integers(0, 3))
        if kind == 0:
            atoms.append(
                LeftTranslate(
                    GroupElement(_coords(rng, alg.m, law), _coords(rng, alg.n, law))
                )
            )
        elif kind == 1:
            atoms.append(Dilate(float(np.exp(rng.uniform(-0.7, 0.7)))))
        else:
            atoms.append(Invert())
    return tuple(atoms)


def _separated_lambda_batch(rng, count):
    """Sorted parameters a < b < c < d with gaps >= 0.2.

    Arranged as (a, c, b, d): the diagonal pair {a, c} separates {b, d}.
    A quarter of the rows put the fourth point at infinity, which keeps
    the separation since b lies between a and c.
    """
    lam = np.sort(rng.uniform(-3.0, 3.0, (count, 4)), axis=1) + np.arange(4) * 0.2
    use_inf = rng.random(count) < 0.25
    return lam, use_inf


def _rcircle_transport_suite(cfg: SuiteConfig) -> SuiteResult:
    alg = cfg.algebra
    tol = cfg.tol("rcircle_transport")
    start = time.perf_counter()
    per_word = 25

    def worker(idx, size, rng):
        worst = 0.0
        witness = None
        remaining = size
        while remaining > 0:
            count = min(per_word, remaining)
            remaining -= count
            word = _random_word(rng, alg, cfg.sampler)
            xdir = _unit_rows(rng, count, alg.m)
            lam, use_inf = _separated_lambda_batch(rng, count)
            a, b, c, d = (lam[:, i] for i in range(4))
            zeros_t = np.zeros((4, count, alg.n))
            inf = np.zeros((4, count), dtype=bool)
            inf[3] = use_inf
            # separated arrangement: diagonal pair (a, c), opposite (b, d)
            X = np.stack(
                [
                    a[:, None] * xdir,
                    c[:, None] * xdir,
                    b[:, None] * xdir,
                    np.where(use_inf[:, None], 0.0, d[:, None] * xdir),
                ]
            )
            tx, tt, tinf = apply_similarity_xt(alg, word, X, zeros_t, inf)
            defect_sep = defects_xt(alg, tx, tt, tinf)[0]
            # non-separated arrangement: diagonal pair (a, b) against (c, d)
            Xn = np.stack(
                [
                    a[:, None] * xdir,
                    b[:, None] * xdir,
                    c[:, None] * xdir,
                    np.where(use_inf[:, None], 0.0, d[:, None] * xdir),
                ]
            )
            nx, nt, ninf = apply_similarity_xt(alg, word, Xn, zeros_t, inf)
            defect_nonsep = defects_xt(alg, nx, nt, ninf)[0]
            viol = np.maximum(np.abs(defect_sep), -defect_nonsep)
            k = int(np.argmax(viol))
            if witness is None or viol[k] > worst:
                worst = float(viol[k])
                witness = {
                    "word": word_to_json(word),
                    "direction": xdir[k].tolist(),
                    "parameters": [
                        float(a[k]),
                        float(c[k]),
                        float(b[k]),
                        "inf" if use_inf[k] else float(d[k]),
                    ],
                    "separated_defect": float(defect_sep[k]),
                    "nonseparated_defect": float(defect_nonsep[k]),
                    "violation": float(viol[k]),
                }
        return worst, witness

    worst, witness = _run_chunks(cfg, "rcircle_transport", worker)
    return SuiteResult(
        suite="rcircle_transport",
        passed=worst <= tol,
        worst=worst,
        tol=tol,
        samples=cfg.samples,
        duration=time.perf_counter() - start,
        witness=witness,
    )


def ptolemaean_campaign(cfg: SuiteConfig) -> SuiteResult:
    """Random-quadruple defects plus equality transport on R-circles."""
    subs = (_random_quadruple_suite(cfg), _rcircle_transport_suite(cfg))
    passed = all(r.passed for r in subs)
    worst = max(r.worst / r.tol for r in subs)
    failed = [r.suite for r in subs if not r.passed]
    witness = None
    if failed:
        first = next(r for r in subs if not r.passed)
        witness = {"failed": failed, "first_witness": first.witness}
    return SuiteResult(
        suite="ptolemaean",
        passed=passed,
        worst=worst,
        tol=1.0,
        samples=cfg.samples,
        duration=sum(r.duration for r in subs),
        witness=witness,
        subresults=subs,
    )


_SUITE_FUNCTIONS = {
    "expansion_identity": expansion_identity_suite,
    "inequality_chain": inequality_chain_suite,
    "calibration": normalization_calibration,
    "iwasawa": iwasawa_discriminator,
    "ptolemaean": ptolemaean_campaign,
}


def run_suites(cfg: SuiteConfig, suites=("all",)) -> list[SuiteResult]:
    """Run the named suites (or all of them) in canonical order."""
    requested = set(suites)
    if "all" in requested:
        names = SUITE_NAMES
    else:
        unknown = requested - set(SUITE_NAMES)
        if unknown:
            raise ValueError(
                f"unknown suites {sorted(unknown)}; valid names: {('all',) + SUITE_NAMES}"
            )
        names = tuple(n for n in SUITE_NAMES if n in requested)
    return [_SUITE_FUNCTIONS[name](cfg) for name in names]
