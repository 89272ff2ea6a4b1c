"""H-type algebra data: the U-matrix systems and their validation.

An H-type algebra on ``R^m x R^n`` (horizontal layer times centre) is
encoded here by ``n`` real ``m x m`` matrices ``U^1 .. U^n`` that are

* skew-symmetric:      ``U^k + (U^k)^T = 0``,
* orthogonal:          ``(U^k)^T U^k = I``,
* pairwise anticommuting: ``U^i U^j + U^j U^i = 0`` for ``i != j``.

The matrices determine the group law of the associated step-2 group
(see :mod:`htgroups.group`) through the bilinear form

    ``u_form(x, x')_k = <U^k x, x'>``,

which is half the Lie bracket exposed by :func:`bracket`.  An algebra is
additionally *Iwasawa* when, for every pair ``i < j`` and every
horizontal vector ``x``, the vector ``U^i U^j x`` lies in the span of
``{U^1 x, ..., U^n x}``.  That is the condition under which the
inversion of the associated group is a metric involution in the strong
sense checked by :mod:`htgroups.verify`.

Three families are built in: ``heisenberg(k)`` (m=2k, n=1),
``quaternionic(k)`` (m=4k, n=3) and ``octonionic()`` (m=8, n=7).  The
octonionic system uses left multiplication by the seven imaginary units
of the Cayley-Dickson doubling of the quaternions; the resulting
multiplication table is documented in the README and certified by
:func:`validate_htype`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "HTypeAlgebra",
    "ValidationReport",
    "IwasawaWitness",
    "heisenberg",
    "quaternionic",
    "octonionic",
    "custom",
    "validate_htype",
    "u_form",
    "bracket",
    "j_map",
    "horizontal_form",
]


@dataclass(frozen=True, eq=False)
class HTypeAlgebra:
    """Dimensions (m, n) plus the stacked matrices U, shape (n, m, m).

    Construction only checks shapes; run :func:`validate_htype` to
    certify the H-type and Iwasawa axioms.  Instances are immutable and
    safe to share across threads.
    """

    m: int
    n: int
    U: np.ndarray

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"dimensions must be positive, got m={self.m}, n={self.n}")
        U = np.array(self.U, dtype=float)
        if U.shape != (self.n, self.m, self.m):
            raise ValueError(
                f"U must have shape ({self.n}, {self.m}, {self.m}), got {U.shape}"
            )
        U.flags.writeable = False
        object.__setattr__(self, "U", U)

    def __eq__(self, other):
        if not isinstance(other, HTypeAlgebra):
            return NotImplemented
        return self.m == other.m and self.n == other.n and np.array_equal(self.U, other.U)

    def to_dict(self) -> dict:
        """JSON-ready form: {"m": int, "n": int, "U": nested row-major lists}."""
        return {"m": self.m, "n": self.n, "U": self.U.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "HTypeAlgebra":
        try:
            return cls(int(data["m"]), int(data["n"]), np.asarray(data["U"], dtype=float))
        except KeyError as exc:
            raise ValueError(f"algebra JSON is missing field {exc.args[0]!r}") from exc


@dataclass(frozen=True)
class IwasawaWitness:
    """Worst sample of the span test: indices (i, j) into U and the unit vector."""

    pair: tuple[int, int]
    x: np.ndarray
    residual: float

    def to_dict(self) -> dict:
        return {"pair": list(self.pair), "x": self.x.tolist(), "residual": self.residual}


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_htype` with per-axiom worst residuals."""

    htype_ok: bool
    iwasawa_ok: bool
    skew_residual: float
    orthogonality_residual: float
    anticommutation_residual: float
    iwasawa_residual: float
    tol: float
    witness: IwasawaWitness | None = None

    @property
    def worst_residual(self) -> float:
        return max(
            self.skew_residual,
            self.orthogonality_residual,
            self.anticommutation_residual,
            self.iwasawa_residual,
        )

    def to_dict(self) -> dict:
        return {
            "htype_ok": self.htype_ok,
            "iwasawa_ok": self.iwasawa_ok,
            "skew_residual": self.skew_residual,
            "orthogonality_residual": self.orthogonality_residual,
            "anticommutation_residual": self.anticommutation_residual,
            "iwasawa_residual": self.iwasawa_residual,
            "tol": self.tol,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


# 2x2 rotation generator; the Heisenberg U^1 is k copies of this block.
_SPIN = np.array([[0.0, 1.0], [-1.0, 0.0]])

# Left multiplication by the quaternion units i, j, k on R^4 = span{1, i, j, k}.
_QUAT_LEFT = np.array(
    [
        [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
        [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
        [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    ],
    dtype=float,
)


def heisenberg(k: int) -> HTypeAlgebra:
    """Heisenberg algebra of k complex coordinates: m = 2k, n = 1.

    U^1 is block-diagonal with k copies of [[0, 1], [-1, 0]].
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    u1 = np.kron(np.eye(k), _SPIN)
    return HTypeAlgebra(2 * k, 1, u1[None])


def quaternionic(k: int) -> HTypeAlgebra:
    """Quaternionic algebra of k quaternion coordinates: m = 4k, n = 3."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    U = np.stack([np.kron(np.eye(k), L) for L in _QUAT_LEFT])
    return HTypeAlgebra(4 * k, 3, U)


def _quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ]
    )


def _quat_conj(a: np.ndarray) -> np.ndarray:
    return np.array([a[0], -a[1], -a[2], -a[3]])


def _oct_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Cayley-Dickson doubling: (p, q)(r, s) = (pr - conj(s) q, s p + q conj(r)).
    p, q = a[:4], a[4:]
    r, s = b[:4], b[4:]
    return np.concatenate(
        [
            _quat_mul(p, r) - _quat_mul(_quat_conj(s), q),
            _quat_mul(s, p) + _quat_mul(q, _quat_conj(r)),
        ]
    )


def octonionic() -> HTypeAlgebra:
    """Octonionic algebra: m = 8, n = 7.

    U^k is left multiplication by the k-th imaginary octonion unit under
    the Cayley-Dickson product above.  All entries are 0 or +-1, so the
    axioms hold exactly in floating point.
    """
    basis = np.eye(8)
    U = np.stack(
        [
            np.stack([_oct_mul(basis[k], basis[j]) for j in range(8)], axis=1)
            for k in range(1, 8)
        ]
    )
    return HTypeAlgebra(8, 7, U)


def custom(m: int, n: int, U: Sequence) -> HTypeAlgebra:
    """Wrap user-supplied matrices without validating the axioms."""
    return HTypeAlgebra(m, n, np.asarray(U, dtype=float))


def validate_htype(
    alg: HTypeAlgebra,
    sample_count: int = 100,
    tol: float = 1e-9,
    seed: int = 0,
) -> ValidationReport:
    """Check the three matrix axioms and the sampled Iwasawa span condition.

    The matrix axioms are evaluated in the max-entry norm.  The Iwasawa
    condition is checked per sample: for each pair i < j and each of
    ``sample_count`` random unit vectors x, the least-squares residual of
    ``U^i U^j x`` against the column span of ``[U^1 x ... U^n x]`` must not
    exceed ``tol``.  The span coefficients may depend on x.
    """
    if sample_count < 1:
        raise ValueError(f"sample_count must be >= 1, got {sample_count}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    U = alg.U
    eye = np.eye(alg.m)
    skew = max(np.abs(Uk + Uk.T).max() for Uk in U)
    orth = max(np.abs(Uk.T @ Uk - eye).max() for Uk in U)
    anti = 0.0
    for i in range(alg.n):
        for j in range(i + 1, alg.n):
            anti = max(anti, np.abs(U[i] @ U[j] + U[j] @ U[i]).max())
    htype_ok = max(skew, orth, anti) <= tol

    worst = 0.0
    witness = None
    if alg.n > 1:
        rng = np.random.default_rng(seed)
        for _ in range(sample_count):
            x = rng.standard_normal(alg.m)
            x /= np.linalg.norm(x)
            span = (U @ x).T  # columns U^k x
            for i in range(alg.n):
                for j in range(i + 1, alg.n):
                    v = U[i] @ (U[j] @ x)
                    coef, *_ = np.linalg.lstsq(span, v, rcond=None)
                    res = float(np.linalg.norm(span @ coef - v))
                    if res > worst:
                        worst = res
                        witness = IwasawaWitness((i, j), x.copy(), res)

    return ValidationReport(
        htype_ok=bool(htype_ok),
        iwasawa_ok=bool(worst <= tol),
        skew_residual=float(skew),
        orthogonality_residual=float(orth),
        anticommutation_residual=float(anti),
        iwasawa_residual=float(worst),
        tol=tol,
        witness=witness,
    )


def _check_horizontal(alg: HTypeAlgebra, v: np.ndarray, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape[-1:] != (alg.m,):
        raise ValueError(f"{name} must have last dimension {alg.m}, got shape {v.shape}")
    return v


def _check_central(alg: HTypeAlgebra, v: np.ndarray, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape[-1:] != (alg.n,):
        raise ValueError(f"{name} must have last dimension {alg.n}, got shape {v.shape}")
    return v


def u_form(alg: HTypeAlgebra, x, xp) -> np.ndarray:
    """The R^n-valued form ``u_form(x, x')_k = <U^k x, x'>``.

    This is the bilinear form entering the group law (with coefficient
    one half) and the horizontal hermitian form; it equals half of
    :func:`bracket`.  Accepts batched input of shape (..., m).
    """
    x = _check_horizontal(alg, x, "x")
    xp = _check_horizontal(alg, xp, "x'")
    return np.einsum("kij,...j,...i->...k", alg.U, x, xp)


def bracket(alg: HTypeAlgebra, x, xp) -> np.ndarray:
    """Lie bracket [x, x'], normalized so <j_map(t, x), y> = <t, bracket(x, y)>."""
    return 2.0 * u_form(alg, x, xp)


def j_map(alg: HTypeAlgebra, t, x) -> np.ndarray:
    """J_t x = 2 sum_k t_k U^k x, the map dual to :func:`bracket`.

    For unit t it scales lengths by exactly 2: |J_t x| = 2 |x|.
    """
    t = _check_central(alg, t, "t")
    x = _check_horizontal(alg, x, "x")
    return 2.0 * np.einsum("kij,...k,...j->...i", alg.U, t, x)


def horizontal_form(alg: HTypeAlgebra, x, xp) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian-type pairing: the pair (<x, x'>, u_form(x, x')).

    Its squared magnitude <x,x'>^2 + |u_form(x,x')|^2 is at most
    |x|^2 |x'|^2 (Bessel bound, since x, U^1 x, ..., U^n x are pairwise
    orthogonal with common norm |x|).
    """
    x = _check_horizontal(alg, x, "x")
    xp = _check_horizontal(alg, xp, "x'")
    dot = np.einsum("...i,...i->...", x, xp)
    return dot, np.einsum("kij,...j,...i->...k", alg.U, x, xp)
