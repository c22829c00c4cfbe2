"""Problem instances: diffusion coefficient fields, confining potentials,
and the drift correction that makes the Gaussian velocity marginal invariant.

A model couples a symmetric, uniformly elliptic matrix field ``Sigma(v)``
(with declared derivative-growth constants) to a potential ``Phi(x)`` whose
Gibbs density ``exp(-Phi)`` is a probability measure.  The velocity drift

    b_i(v) = sum_j  d_j a_ij(v) - a_ij(v) v_j

is derived from the field; the analytic test families used throughout the
test-suite and the CLI are registered in :func:`builtin_models`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .errors import EllipticityError, EvaluationError

__all__ = [
    "DiffusionField",
    "Potential",
    "ModelSpec",
    "drift_correction",
    "cholesky_sigma",
    "builtin_models",
    "builtin_model",
]

# Growth regimes for the derivative bounds of the coefficient field:
# REGIME_BOUNDED  : |d_k a_ij(v)| <= M (1+|v|)^beta with beta <= 0
# REGIME_SUBLINEAR: |d_k a_ij(v)| <= M (1_{B1}(v) + |v|^beta), 0 < beta < 1
REGIME_BOUNDED = "bounded"
REGIME_SUBLINEAR = "sublinear"

_FD_BASE_STEP = 1e-5  # central-difference step, scaled by 1 + |point|


def _fd_step(z):
    return _FD_BASE_STEP * (1.0 + float(np.linalg.norm(z)))


@dataclass(frozen=True)
class DiffusionField:
    """Symmetric matrix field v -> Sigma(v) with declared growth constants.

    ``func`` maps a point in R^d to a (d, d) array.  ``grad_func``, when
    given, maps a point to all partials as a (d, d, d) array indexed
    ``[k, i, j] = d_k a_ij``; otherwise central finite differences with step
    ``1e-5 * (1 + |v|)`` are used.
    """

    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    grad_func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    beta: float = 0.0
    m_growth: float = 0.0
    regime: str = REGIME_BOUNDED
    # set for constant fields; enables exact constants and fast SDE paths
    const_matrix: Optional[np.ndarray] = None
    # (a, a', ) plain scalar callables for d=1 fields, njit-able
    scalar_funcs: Optional[tuple] = None

    def matrix(self, v) -> np.ndarray:
        v = np.atleast_1d(np.asarray(v, dtype=float))
        sig = np.asarray(self.func(v), dtype=float).reshape(self.dim, self.dim)
        if not np.all(np.isfinite(sig)):
            bad = np.argwhere(~np.isfinite(sig))[0]
            raise EvaluationError(
                f"Sigma({v}) entry a[{bad[0]},{bad[1]}] is not finite"
            )
        scale = max(np.abs(sig).max(), 1e-300)
        if np.abs(sig - sig.T).max() > 1e-12 * scale:
            raise EvaluationError(f"Sigma({v}) is not symmetric to 1e-12 relative")
        return sig

    def grad_matrix(self, v) -> np.ndarray:
        """All partials d_k a_ij at v, shape (d, d, d)."""
        v = np.atleast_1d(np.asarray(v, dtype=float))
        if self.grad_func is not None:
            g = np.asarray(self.grad_func(v), dtype=float).reshape(
                self.dim, self.dim, self.dim
            )
        else:
            h = _fd_step(v)
            g = np.empty((self.dim, self.dim, self.dim))
            for k in range(self.dim):
                e = np.zeros(self.dim)
                e[k] = h
                g[k] = (self.matrix(v + e) - self.matrix(v - e)) / (2.0 * h)
        if not np.all(np.isfinite(g)):
            bad = np.argwhere(~np.isfinite(g))[0]
            raise EvaluationError(
                f"grad Sigma({v}) entry d_{bad[0]} a[{bad[1]},{bad[2]}] is not finite"
            )
        return g


@dataclass(frozen=True)
class Potential:
    """Confining potential with gradient/Hessian and its Gibbs normalization.

    ``log_norm`` is log of the raw mass ``int exp(-Phi_raw) dx`` for the
    *unnormalized* callable; :meth:`value` returns the normalized potential
    ``Phi_raw + log_norm`` so that ``exp(-Phi)`` integrates to one.  When the
    normalization is unknown it is computed once by adaptive quadrature on
    the truncation interval (d = 1).
    """

    dim: int
    func: Callable[[np.ndarray], float]
    grad_func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess_func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    log_norm: float = 0.0
    norm_is_numeric: bool = False
    # declared gradient growth |grad Phi| <= N (1 + |x|^gamma)
    grad_growth: Optional[tuple] = None
    # analytic Poincare constant of exp(-Phi) dx when known
    poincare: Optional[float] = None
    lower_bound: Optional[float] = None

    def value(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        val = float(self.func(x)) + self.log_norm
        if not math.isfinite(val):
            raise EvaluationError(f"Phi({x}) is not finite")
        return val

    def grad(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.grad_func is not None:
            g = np.atleast_1d(np.asarray(self.grad_func(x), dtype=float))
        else:
            h = _fd_step(x)
            g = np.empty(self.dim)
            for k in range(self.dim):
                e = np.zeros(self.dim)
                e[k] = h
                g[k] = (self.func(x + e) - self.func(x - e)) / (2.0 * h)
        if not np.all(np.isfinite(g)):
            raise EvaluationError(f"grad Phi({x}) is not finite")
        return g

    def hess(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.hess_func is not None:
            return np.asarray(self.hess_func(x), dtype=float).reshape(
                self.dim, self.dim
            )
        h = _fd_step(x)
        out = np.empty((self.dim, self.dim))
        for k in range(self.dim):
            e = np.zeros(self.dim)
            e[k] = h
            out[k] = (self.grad(x + e) - self.grad(x - e)) / (2.0 * h)
        return 0.5 * (out + out.T)


@dataclass(frozen=True)
class ModelSpec:
    """A full problem instance together with grid/simulation defaults."""

    name: str
    diffusion: DiffusionField
    potential: Potential
    dim: int
    # recommended truncation box ((x_lo, x_hi), (v_lo, v_hi)) for d = 1 grids
    box: tuple = ((-8.0, 8.0), (-8.0, 8.0))
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.diffusion.dim == self.potential.dim == self.dim):
            raise EvaluationError(
                f"dimension mismatch: diffusion d={self.diffusion.dim}, "
                f"potential d={self.potential.dim}, model d={self.dim}"
            )


def drift_correction(field: DiffusionField, v) -> np.ndarray:
    """Velocity drift b(v) with b_i = sum_j (d_j a_ij(v) - a_ij(v) v_j)."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if not np.all(np.isfinite(v)):
        raise EvaluationError(f"non-finite evaluation point {v}")
    sig = field.matrix(v)
    if field.const_matrix is not None:
        return -sig @ v
    grad = field.grad_matrix(v)
    # d_j a_ij = grad[j, i, j]
    dj_aij = np.einsum("jij->ij", grad)
    return dj_aij.sum(axis=1) - sig @ v


def cholesky_sigma(field: DiffusionField, v) -> np.ndarray:
    """Lower-triangular sigma(v) with sigma sigma^T = Sigma(v).

    Raises :class:`EllipticityError` carrying the point and pivot index if a
    pivot is not strictly positive.
    """
    v = np.atleast_1d(np.asarray(v, dtype=float))
    sig = field.matrix(v)
    d = field.dim
    chol = np.zeros((d, d))
    for i in range(d):
        pivot = sig[i, i] - np.dot(chol[i, :i], chol[i, :i])
        if pivot <= 0.0 or not math.isfinite(pivot):
            raise EllipticityError(
                f"Sigma({v}) has non-positive Cholesky pivot {pivot:.3e} at index {i}",
                point=v.copy(),
                pivot=i,
            )
        chol[i, i] = math.sqrt(pivot)
        for j in range(i + 1, d):
            chol[j, i] = (sig[j, i] - np.dot(chol[j, :i], chol[i, :i])) / chol[i, i]
    return chol


# ---------------------------------------------------------------------------
# built-in analytic families
# ---------------------------------------------------------------------------


def _constant_field(matrix) -> DiffusionField:
    matrix = np.asarray(matrix, dtype=float)
    d = matrix.shape[0]
    a00 = float(matrix[0, 0])
    return DiffusionField(
        dim=d,
        func=lambda v, m=matrix: m,
        grad_func=lambda v, d=d: np.zeros((d, d, d)),
        beta=-1.0,
        m_growth=0.0,
        regime=REGIME_BOUNDED,
        const_matrix=matrix,
        scalar_funcs=(
            (lambda vv: a00, lambda vv: 0.0) if d == 1 else None
        ),
    )


def _bump_a(v):
    return 2.0 + 1.0 / (1.0 + v * v)


def _bump_ap(v):
    return -2.0 * v / (1.0 + v * v) ** 2


def _bump_field() -> DiffusionField:
    # sup |a'| = 9/(8 sqrt 3), attained at |v| = 1/sqrt(3); declare the
    # bounded regime with beta = 0 and M = sup |a'|.
    m_sup = 9.0 / (8.0 * math.sqrt(3.0))
    return DiffusionField(
        dim=1,
        func=lambda v: np.array([[_bump_a(v[0])]]),
        grad_func=lambda v: np.array([[[_bump_ap(v[0])]]]),
        beta=0.0,
        m_growth=m_sup,
        regime=REGIME_BOUNDED,
        scalar_funcs=(_bump_a, _bump_ap),
    )


def _gaussian_potential(dim=1) -> Potential:
    # Phi(x) = |x|^2/2 + (d/2) log(2 pi): exp(-Phi) is the standard normal density
    half_log = 0.5 * dim * math.log(2.0 * math.pi)
    return Potential(
        dim=dim,
        func=lambda x: 0.5 * float(np.dot(x, x)) + half_log,
        grad_func=lambda x: np.asarray(x, dtype=float),
        hess_func=lambda x, d=dim: np.eye(d),
        log_norm=0.0,
        grad_growth=(1.0, 1.0),
        poincare=1.0,
        lower_bound=half_log,
    )


def _scaled_gaussian_potential(s: float) -> Potential:
    # density ~ exp(-x^2 / (2 s^2)); Poincare constant 1/s^2
    log_z = math.log(s * math.sqrt(2.0 * math.pi))
    return Potential(
        dim=1,
        func=lambda x, s2=s * s: 0.5 * float(x[0]) ** 2 / s2,
        grad_func=lambda x, s2=s * s: np.array([x[0] / s2]),
        hess_func=lambda x, s2=s * s: np.array([[1.0 / s2]]),
        log_norm=log_z,
        grad_growth=(1.0 / s**2, 1.0),
        poincare=1.0 / s**2,
        lower_bound=log_z,
    )


def _double_well_potential(s: float) -> Potential:
    mass, _ = quad(lambda x: math.exp(-s * (x * x - 1.0) ** 2), -np.inf, np.inf)
    log_z = math.log(mass)
    # |Phi'| = 4 s |x^3 - x| <= 4 s (1 + |x|^3)
    return Potential(
        dim=1,
        func=lambda x, s=s: s * (x[0] * x[0] - 1.0) ** 2,
        grad_func=lambda x, s=s: np.array([4.0 * s * x[0] * (x[0] * x[0] - 1.0)]),
        hess_func=lambda x, s=s: np.array([[s * (12.0 * x[0] * x[0] - 4.0)]]),
        log_norm=log_z,
        norm_is_numeric=True,
        grad_growth=(4.0 * s, 3.0),
        poincare=None,
        lower_bound=log_z,
    )


def double_well_model(s: float = 0.05, name: str = "double-well") -> ModelSpec:
    """Quartic double well with barrier scale s (unit diffusion).

    The phase-grid default keeps max Phi on the recommended box small enough
    that density ratios between neighboring nodes stay far from overflow;
    larger barriers are fine for the 1-d Poincare eigensolver, which uses its
    own interval.
    """
    pot = _double_well_potential(s)
    return ModelSpec(
        name=name,
        diffusion=_constant_field(np.eye(1)),
        potential=pot,
        dim=1,
        box=((-6.0, 6.0), (-8.0, 8.0)),
        metadata={"barrier_scale": s},
    )


def builtin_models() -> list[ModelSpec]:
    """The analytic families used by the tests and the CLI.

    classic       d=1, Sigma = 1, standard Gaussian potential
    bounded-bump  d=1, a(v) = 2 + 1/(1+v^2), same potential
    double-well   d=1, Sigma = 1, Phi = s (x^2-1)^2 + const
    aniso-2d      d=2, constant non-diagonal Sigma, quadratic potential
    """
    classic = ModelSpec(
        name="classic",
        diffusion=_constant_field(np.eye(1)),
        potential=_gaussian_potential(1),
        dim=1,
    )
    bump = ModelSpec(
        name="bounded-bump",
        diffusion=_bump_field(),
        potential=_gaussian_potential(1),
        dim=1,
    )
    aniso = ModelSpec(
        name="aniso-2d",
        diffusion=_constant_field(np.array([[2.0, 1.0], [1.0, 2.0]])),
        potential=_gaussian_potential(2),
        dim=2,
    )
    return [classic, bump, double_well_model(), aniso]


def builtin_model(name: str, **params) -> ModelSpec:
    """Look up a builtin by name; double-well accepts a barrier scale s."""
    if name == "double-well" and params:
        return double_well_model(**params)
    if name == "gaussian-scale":
        return ModelSpec(
            name="gaussian-scale",
            diffusion=_constant_field(np.eye(1)),
            potential=_scaled_gaussian_potential(params.get("s", 1.0)),
            dim=1,
        )
    for m in builtin_models():
        if m.name == name:
            return m
    raise KeyError(f"unknown model {name!r}")


def scaled_gaussian_potential(s: float) -> Potential:
    """Gaussian family with density ~ exp(-x^2/(2 s^2)); gap 1/s^2."""
    return _scaled_gaussian_potential(s)
