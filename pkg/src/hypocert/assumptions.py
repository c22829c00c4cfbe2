"""Numerical extraction of the coercivity constants and hypothesis checks.

Everything here is evidence, not proof: supremum-type constants are sampled
on a finite probe box (recorded in the report, so the certificate is
conditional on probe coverage), the velocity-space bound on the drift
correction is checked by Gauss-Hermite quadrature, and the Poincare constant
of ``exp(-Phi) dx`` is either taken from the analytic family or computed as
the spectral gap of the weighted Laplacian ``f -> -f'' + Phi' f'``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy.linalg import eigh_tridiagonal
from scipy.stats import qmc

from .errors import AssumptionError, EllipticityError, NumericsError
from .model import (
    REGIME_BOUNDED,
    REGIME_SUBLINEAR,
    DiffusionField,
    ModelSpec,
    Potential,
)

__all__ = [
    "AssumptionReport",
    "probe_points",
    "estimate_ellipticity",
    "extract_sigma_constants",
    "compute_N_sigma",
    "verify_b_bound",
    "estimate_poincare",
    "verify_potential_conditions",
    "build_report",
]

DEFAULT_N_PROBES = 10_000


def probe_points(box, n_probes: int, dim: int, seed: int = 0) -> np.ndarray:
    """Probe set on a box: tensor grid plus Halton points, deterministic.

    ``box`` is (lo, hi) applied per axis, or a (dim, 2) array.
    """
    box = np.asarray(box, dtype=float)
    if box.ndim == 1:
        box = np.tile(box, (dim, 1))
    n_grid = max(2, int(round((n_probes // 2) ** (1.0 / dim))))
    axes = [np.linspace(box[k, 0], box[k, 1], n_grid) for k in range(dim)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    n_low = max(0, n_probes - mesh.shape[0])
    if n_low:
        sampler = qmc.Halton(d=dim, scramble=False, seed=seed)
        low = qmc.scale(sampler.random(n_low), box[:, 0], box[:, 1])
        mesh = np.vstack([mesh, low])
    return mesh


def estimate_ellipticity(field: DiffusionField, probe_box, n_probes: int = DEFAULT_N_PROBES):
    """Min over probes of the smallest eigenvalue of Sigma(v).

    This is an upper estimate of the true ellipticity constant; the probe box
    is recorded alongside so the certificate is conditional on its coverage.
    """
    if n_probes < 1:
        raise ValueError("n_probes must be >= 1")
    if field.const_matrix is not None:
        val = float(np.linalg.eigvalsh(field.const_matrix).min())
        if val <= 0.0:
            raise EllipticityError(
                f"constant Sigma has smallest eigenvalue {val:.3e} <= 0",
                point=np.zeros(field.dim),
            )
        return val
    pts = probe_points(probe_box, n_probes, field.dim)
    worst = math.inf
    for v in pts:
        lam = float(np.linalg.eigvalsh(field.matrix(v)).min())
        if lam <= 0.0:
            raise EllipticityError(
                f"Sigma({v}) has smallest eigenvalue {lam:.3e} <= 0", point=v
            )
        worst = min(worst, lam)
    return worst


def extract_sigma_constants(field: DiffusionField, probe_box, n_probes: int = DEFAULT_N_PROBES):
    """(M_sigma, B_sigma, beta, M): sup |a_ij| over the box, sup |d_j a_ij|
    over the closed unit ball, and the declared growth pair verified against
    every probe.  Raises :class:`AssumptionError` with a witness on violation.
    """
    if field.const_matrix is not None:
        m_sigma = float(np.abs(field.const_matrix).max())
        return m_sigma, 0.0, field.beta, field.m_growth
    d = field.dim
    pts = probe_points(probe_box, n_probes, d)
    ball = probe_points((-1.0, 1.0), n_probes, d)
    ball = ball[np.linalg.norm(ball, axis=1) <= 1.0]
    m_sigma = 0.0
    for v in pts:
        m_sigma = max(m_sigma, float(np.abs(field.matrix(v)).max()))
    b_sigma = 0.0
    for v in ball:
        grad = field.grad_matrix(v)
        # B_Sigma only involves the contracted partials d_j a_ij
        dj_aij = np.einsum("jij->ij", grad)
        b_sigma = max(b_sigma, float(np.abs(dj_aij).max()))
    beta, m_growth = field.beta, field.m_growth
    for v in pts:
        bound = _growth_bound(v, beta, m_growth, field.regime)
        worst = float(np.abs(field.grad_matrix(v)).max())
        if worst > bound + 1e-9 * (1.0 + bound):
            raise AssumptionError(
                f"declared growth |grad a| <= {bound:.6g} violated at v={v} "
                f"(observed {worst:.6g})",
                witness=v,
            )
    return m_sigma, b_sigma, beta, m_growth


def _growth_bound(v, beta, m_growth, regime):
    r = float(np.linalg.norm(v))
    if regime == REGIME_BOUNDED:
        return m_growth * (1.0 + r) ** beta
    return m_growth * ((1.0 if r <= 1.0 else 0.0) + r**beta)


def compute_N_sigma(m_sigma, b_sigma, m_growth, regime, dim):
    """The combined coefficient bound, by growth regime:

    bounded   : sqrt(M_Sigma^2 + max(B_Sigma, M)^2)
    sublinear : sqrt(M_Sigma^2 + B_Sigma^2 + d M^2)
    """
    if regime == REGIME_BOUNDED:
        return math.sqrt(m_sigma**2 + max(b_sigma, m_growth) ** 2)
    if regime == REGIME_SUBLINEAR:
        return math.sqrt(m_sigma**2 + b_sigma**2 + dim * m_growth**2)
    raise ValueError(f"unknown growth regime {regime!r}")


def gauss_hermite(order: int, dim: int = 1):
    """Nodes and weights for the standard Gaussian measure on R^dim."""
    x, w = hermegauss(order)
    w = w / math.sqrt(2.0 * math.pi)
    if dim == 1:
        return x.reshape(-1, 1), w
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.ones(nodes.shape[0])
    for wg in wgrids:
        weights *= wg.ravel()
    return nodes, weights


def verify_b_bound(field: DiffusionField, n_sigma: float, order: int = 64, tol: float = 1e-8):
    """Per-(i, j) quadrature values ||d_j a_ij - a_ij v_j||_{L2(nu)}.

    Each value must not exceed ``n_sigma`` beyond the quadrature tolerance;
    a violation signals inconsistent declared growth.  Returns the (d, d)
    array of values (slack is ``n_sigma - value``).
    """
    if order < 40:
        raise ValueError("Gauss-Hermite order must be >= 40")
    d = field.dim
    nodes, weights = gauss_hermite(order, d)
    vals_sq = np.zeros((d, d))
    for v, w in zip(nodes, weights):
        sig = field.matrix(v)
        grad = field.grad_matrix(v)
        for i in range(d):
            for j in range(d):
                term = grad[j, i, j] - sig[i, j] * v[j]
                vals_sq[i, j] += w * term * term
    vals = np.sqrt(vals_sq)
    worst = float(vals.max())
    if worst > n_sigma + tol:
        i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
        raise AssumptionError(
            f"||d_j a_ij - a_ij v_j|| = {worst:.10g} exceeds N_Sigma = {n_sigma:.10g} "
            f"at (i,j)=({i},{j}); declared growth constants are inconsistent",
            witness=(i, j),
        )
    return vals


def _sl_gap(potential: Potential, n_nodes: int, box) -> float:
    """Spectral gap of -f'' + Phi' f' on L2(exp(-Phi) dx), flux-form FD.

    The operator is symmetrized by the similarity with sqrt(rho), giving a
    symmetric tridiagonal eigenproblem; the smallest eigenvalue is zero
    (constants) and the next one is the Poincare constant of the truncated
    measure.
    """
    lo, hi = box
    x = np.linspace(lo, hi, n_nodes)
    h = x[1] - x[0]
    phi = np.array([potential.value(np.array([xi])) for xi in x])
    phi_mid = np.array(
        [potential.value(np.array([xm])) for xm in 0.5 * (x[:-1] + x[1:])]
    )
    # K f = (1/rho) D(rho D f); symmetrized B = R^{1/2} (-K) R^{-1/2}:
    # off-diagonal -rho_{j+1/2} / (h^2 sqrt(rho_j rho_{j+1}))
    off = -np.exp(-(phi_mid - 0.5 * (phi[:-1] + phi[1:]))) / h**2
    diag = np.zeros(n_nodes)
    ratio_r = np.exp(-(phi_mid - phi[:-1]))  # rho_{j+1/2} / rho_j
    ratio_l = np.exp(-(phi_mid - phi[1:]))  # rho_{j+1/2} / rho_{j+1}
    diag[:-1] += ratio_r / h**2
    diag[1:] += ratio_l / h**2
    try:
        vals = eigh_tridiagonal(diag, off, select="i", select_range=(0, 1))[0]
    except Exception as exc:  # pragma: no cover - LAPACK failure path
        raise NumericsError(f"tridiagonal eigensolve failed: {exc}") from exc
    gap = float(vals[1] - max(vals[0], 0.0))
    if not math.isfinite(gap) or gap <= 0.0:
        raise NumericsError(f"non-positive spectral gap {gap}")
    return gap


def estimate_poincare(
    potential: Potential,
    n_nodes: int = 2049,
    box=(-8.0, 8.0),
    richardson: bool = True,
) -> float:
    """Poincare constant of exp(-Phi) dx in d = 1 by Sturm-Liouville
    eigensolve; the discretization is second order, so one Richardson step
    against the half-resolution grid removes the leading error term.

    For d > 1 an analytic value must be supplied on the potential.
    """
    if potential.dim != 1:
        if potential.poincare is not None:
            return potential.poincare
        raise NumericsError(
            "Poincare eigensolve only implemented for d=1; supply an analytic value"
        )
    fine = _sl_gap(potential, n_nodes, box)
    if not richardson:
        return fine
    coarse = _sl_gap(potential, (n_nodes - 1) // 2 + 1, box)
    return fine + (fine - coarse) / 3.0


def verify_potential_conditions(potential: Potential, probe_box, n_probes: int = DEFAULT_N_PROBES):
    """(c_hess, N, gamma, flags): the Hessian-to-gradient ratio constant, the
    declared gradient growth checked at probes, and boundedness from below.
    """
    d = potential.dim
    pts = probe_points(probe_box, n_probes, d)
    c_hess = 0.0
    min_val = math.inf
    flags = {"hess_ratio_finite": True, "grad_growth": True, "bounded_below": True}
    witness = None
    declared = potential.grad_growth
    for x in pts:
        g = potential.grad(x)
        gn = float(np.linalg.norm(g))
        hn = float(np.linalg.norm(potential.hess(x)))  # Frobenius
        c_hess = max(c_hess, hn / (1.0 + gn))
        min_val = min(min_val, potential.value(x))
        if declared is not None:
            n_decl, gamma = declared
            bound = n_decl * (1.0 + float(np.linalg.norm(x)) ** gamma)
            if gn > bound + 1e-9 * (1.0 + bound):
                flags["grad_growth"] = False
                witness = x
    if not math.isfinite(min_val):
        flags["bounded_below"] = False
    if not flags["grad_growth"]:
        raise AssumptionError(
            f"declared gradient growth violated at x={witness}", witness=witness
        )
    n_decl, gamma = declared if declared is not None else (math.nan, math.nan)
    return c_hess, n_decl, gamma, flags


@dataclass
class AssumptionReport:
    """Estimated constants plus per-condition pass/fail flags.

    The probe box is part of the report: every supremum-type constant is a
    sampled estimate, conditional on probe coverage.
    """

    model: str
    dim: int
    c_sigma: float
    m_sigma: float
    b_sigma: float
    n_sigma: float
    regime: str
    beta: float
    m_growth: float
    lambda_poincare: float
    lambda_method: str  # "analytic" | "eigensolve"
    c_hess: float
    n_gradgrowth: float
    gamma: float
    probe_box: list
    n_probes: int
    b_bound_values: list = field(default_factory=list)
    b_bound_slack: float = math.nan
    flags: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        expected = compute_N_sigma(
            self.m_sigma, self.b_sigma, self.m_growth, self.regime, self.dim
        )
        if abs(expected - self.n_sigma) > 1e-12 * max(1.0, abs(expected)):
            raise AssumptionError(
                f"N_sigma = {self.n_sigma!r} inconsistent with constants "
                f"(expected {expected!r})"
            )
        if self.regime == REGIME_BOUNDED and self.beta > 0.0:
            raise AssumptionError("bounded regime requires beta <= 0")
        if self.regime == REGIME_SUBLINEAR and not (0.0 < self.beta < 1.0):
            raise AssumptionError("sublinear regime requires 0 < beta < 1")
        if self.beta > -1.0 and math.isfinite(self.gamma):
            if not self.gamma < 2.0 / (1.0 + self.beta):
                raise AssumptionError(
                    f"gamma = {self.gamma} must be < 2/(1+beta) = "
                    f"{2.0 / (1.0 + self.beta)}"
                )

    @property
    def all_passed(self) -> bool:
        return all(bool(v) for v in self.flags.values())

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def build_report(
    model: ModelSpec,
    probe_box=None,
    n_probes: int = DEFAULT_N_PROBES,
    gh_order: int = 64,
    lambda_override: Optional[float] = None,
) -> AssumptionReport:
    """Run every hypothesis check for a model and collect the constants."""
    if probe_box is None:
        probe_box = (-10.0, 10.0)
    field_ = model.diffusion
    c_sigma = estimate_ellipticity(field_, probe_box, n_probes)
    m_sigma, b_sigma, beta, m_growth = extract_sigma_constants(
        field_, probe_box, n_probes
    )
    n_sigma = compute_N_sigma(m_sigma, b_sigma, m_growth, field_.regime, model.dim)
    flags = {"ellipticity": True, "sigma_growth": True}
    try:
        vals = verify_b_bound(field_, n_sigma, order=gh_order)
        slack = float(n_sigma - vals.max())
        flags["b_bound"] = True
    except AssumptionError:
        vals = np.full((model.dim, model.dim), math.nan)
        slack = -math.inf
        flags["b_bound"] = False
    notes = ["local Sobolev regularity of a_ij assumed (analytic family)"]
    if lambda_override is not None:
        lam, method = lambda_override, "analytic"
    elif model.potential.poincare is not None:
        lam, method = model.potential.poincare, "analytic"
    else:
        x_box = model.box[0] if model.dim == 1 else (-8.0, 8.0)
        lam, method = estimate_poincare(model.potential, box=x_box), "eigensolve"
    c_hess, n_decl, gamma, pot_flags = verify_potential_conditions(
        model.potential, probe_box if model.dim > 1 else model.box[0], n_probes
    )
    flags.update(pot_flags)
    return AssumptionReport(
        model=model.name,
        dim=model.dim,
        c_sigma=c_sigma,
        m_sigma=m_sigma,
        b_sigma=b_sigma,
        n_sigma=n_sigma,
        regime=field_.regime,
        beta=beta,
        m_growth=m_growth,
        lambda_poincare=lam,
        lambda_method=method,
        c_hess=c_hess,
        n_gradgrowth=n_decl,
        gamma=gamma,
        probe_box=list(np.atleast_1d(np.asarray(probe_box, dtype=float)).ravel()),
        n_probes=n_probes,
        b_bound_values=np.asarray(vals).tolist(),
        b_bound_slack=slack,
        flags=flags,
        notes=notes,
    )
