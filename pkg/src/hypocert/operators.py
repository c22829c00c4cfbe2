"""Phase-space discretization of the kinetic generator and its pieces.

The grid lives on a truncated box in (x, v) with trapezoid-against-density
quadrature weights, so the discrete inner product approximates the weighted
L2 product with measure exp(-Phi(x)) dx x standard Gaussian dv.

Stencil choices are structural, not generic:

* the velocity part S = a d_vv + (a' - a v) d_v is assembled in weighted
  flux form (1/rho) D(rho a D .) over finite-volume cells, which makes the
  matrix exactly symmetric in the weighted inner product, exactly
  mass-conserving (no-flux ends) and second-order accurate;
* the transport part A = Phi' d_v - v d_x averages the advective and the
  weighted-divergence forms, with the coefficient vectors taken from the
  discrete log-density differences rather than the analytic derivative.
  That choice makes A annihilate constants exactly in every row and keeps
  the weighted mean of A f at the boundary-weight scale (~1e-13), a
  discrete image of the integration-by-parts cancellation that makes the
  measure invariant.

The Fokker-Planck generator is assembled independently (conservative flux
form in v, centered transport), so the conjugation identity with the
adjoint generator is a genuine two-route check, not a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NumericsError
from .model import ModelSpec, drift_correction

__all__ = [
    "PhaseGrid",
    "DiscreteOperator",
    "build_grid",
    "assemble",
    "random_test_functions",
    "check_dissipativity",
    "check_microscopic_coercivity",
    "check_macroscopic_coercivity",
    "check_bs_bound",
    "invariance_defect",
    "symmetry_defect",
    "antisymmetry_defect",
    "conjugation_defect",
    "spectral_gap",
    "ou_spectral_gap",
    "export_triplets",
]

RATIO_CAP = 30.0  # cap on log-density differences inside one stencil
WEIGHT_FLOOR = 1e-300


# ---------------------------------------------------------------------------
# grid
# ---------------------------------------------------------------------------


@dataclass
class PhaseGrid:
    """Tensor grid over the truncation box with weighted quadrature.

    Flat index convention: node (i, j) -> i * nv + j (x-major).
    """

    model: ModelSpec
    x: np.ndarray
    v: np.ndarray
    hx: float
    hv: float
    box: tuple
    logrho_x: np.ndarray  # -Phi(x_i), normalized potential
    logrho_v: np.ndarray  # -v_j^2 / 2
    wx: np.ndarray  # normalized probability weights on x nodes
    wv: np.ndarray  # normalized probability weights on v nodes
    tau_x: np.ndarray = field(repr=False, default=None)
    tau_v: np.ndarray = field(repr=False, default=None)

    @property
    def nx(self) -> int:
        return self.x.size

    @property
    def nv(self) -> int:
        return self.v.size

    @property
    def n(self) -> int:
        return self.x.size * self.v.size

    def mesh(self):
        return np.meshgrid(self.x, self.v, indexing="ij")

    @property
    def w(self) -> np.ndarray:
        """Flat weighted-measure quadrature weights (sums to one)."""
        return np.outer(self.wx, self.wv).ravel()

    def inner(self, f, g) -> float:
        return float(np.sum(self.w * np.ravel(f) * np.ravel(g)))

    def norm(self, f) -> float:
        return math.sqrt(max(self.inner(f, f), 0.0))

    def mean(self, f) -> float:
        return float(np.sum(self.w * np.ravel(f)))

    @property
    def lebesgue_w(self) -> np.ndarray:
        """Flat trapezoid weights for the flat (Lebesgue) integral."""
        return np.outer(self.tau_x, self.tau_v).ravel()

    @property
    def rho(self) -> np.ndarray:
        """Stationary density exp(-Phi(x) - v^2/2) on flat nodes."""
        return np.exp(
            self.logrho_x[:, None] + self.logrho_v[None, :]
        ).ravel()

    def htilde_w(self) -> np.ndarray:
        """Quadrature weights of the density-side inner product, i.e.
        trapezoid against exp(+Phi + v^2/2) / sqrt(2 pi)."""
        expo = -(self.logrho_x[:, None] + self.logrho_v[None, :])
        expo = np.minimum(expo, 700.0)
        return (
            np.exp(expo) * np.outer(self.tau_x, self.tau_v)
        ).ravel() / math.sqrt(2.0 * math.pi) ** self.model.dim

    def htilde_inner(self, f, g) -> float:
        return float(np.sum(self.htilde_w() * np.ravel(f) * np.ravel(g)))

    def htilde_norm(self, f) -> float:
        return math.sqrt(max(self.htilde_inner(f, f), 0.0))


def _trapezoid_factors(n, h):
    tau = np.full(n, h)
    tau[0] = tau[-1] = 0.5 * h
    return tau


def build_grid(model: ModelSpec, nx: int, nv: int, box=None) -> PhaseGrid:
    """Weighted tensor grid on the truncation box (d = 1 models only)."""
    if model.dim != 1:
        raise NumericsError("phase grids are implemented for d = 1 models only")
    if nx < 16 or nv < 16:
        raise NumericsError("nx and nv must be at least 16")
    if box is None:
        box = model.box
    (x0, x1), (v0, v1) = box
    if not (x0 <= -6.0 and x1 >= 6.0 and v0 <= -6.0 and v1 >= 6.0):
        raise NumericsError(f"box {box} must contain [-6, 6]^2")
    if not (x1 > x0 and v1 > v0):
        raise NumericsError(f"degenerate box {box}")
    x = np.linspace(x0, x1, nx)
    v = np.linspace(v0, v1, nv)
    hx = x[1] - x[0]
    hv = v[1] - v[0]
    logrho_x = np.array([-model.potential.value(np.array([xi])) for xi in x])
    if not np.all(np.isfinite(logrho_x)):
        raise NumericsError("potential produced non-finite log-density on the box")
    logrho_v = -0.5 * v**2
    tau_x = _trapezoid_factors(nx, hx)
    tau_v = _trapezoid_factors(nv, hv)
    wx = np.maximum(np.exp(logrho_x - logrho_x.max()), WEIGHT_FLOOR) * tau_x
    wv = np.maximum(np.exp(logrho_v), WEIGHT_FLOOR) * tau_v
    wx /= wx.sum()
    wv /= wv.sum()
    return PhaseGrid(
        model=model,
        x=x,
        v=v,
        hx=hx,
        hv=hv,
        box=box,
        logrho_x=logrho_x,
        logrho_v=logrho_v,
        wx=wx,
        wv=wv,
        tau_x=tau_x,
        tau_v=tau_v,
    )


# ---------------------------------------------------------------------------
# one-dimensional building blocks
# ---------------------------------------------------------------------------


def _centered_diff(n, h) -> sp.csr_matrix:
    """First derivative: centered interior, second-order one-sided ends."""
    rows, cols, data = [], [], []
    inv = 1.0 / (2.0 * h)
    for j in range(1, n - 1):
        rows += [j, j]
        cols += [j - 1, j + 1]
        data += [-inv, inv]
    rows += [0, 0, 0]
    cols += [0, 1, 2]
    data += [-3.0 * inv, 4.0 * inv, -inv]
    rows += [n - 1, n - 1, n - 1]
    cols += [n - 1, n - 2, n - 3]
    data += [3.0 * inv, -4.0 * inv, inv]
    return sp.csr_matrix((data, (rows, cols)), shape=(n, n))


def _ratio(ell_from, ell_to, cap=RATIO_CAP):
    return math.exp(min(max(ell_to - ell_from, -cap), cap))


def _weighted_flux(n, h, ell, ell_mid, a_mid) -> sp.csr_matrix:
    """(1/rho tau) D(rho a D .) over finite-volume cells with no-flux ends.

    ``ell`` are log-densities at nodes, ``ell_mid``/``a_mid`` log-densities
    and diffusion values at cell midpoints.  Exactly symmetric with respect
    to the trapezoid-against-density weights and annihilates constants.
    """
    rows, cols, data = [], [], []
    cell = np.full(n, h)
    cell[0] = cell[-1] = 0.5 * h
    for j in range(n):
        diag = 0.0
        if j < n - 1:  # flux through edge j+1/2
            c = a_mid[j] * _ratio(ell[j], ell_mid[j]) / (h * cell[j])
            rows += [j]
            cols += [j + 1]
            data += [c]
            diag -= c
        if j > 0:  # flux through edge j-1/2
            c = a_mid[j - 1] * _ratio(ell[j], ell_mid[j - 1]) / (h * cell[j])
            rows += [j]
            cols += [j - 1]
            data += [c]
            diag -= c
        rows += [j]
        cols += [j]
        data += [diag]
    return sp.csr_matrix((data, (rows, cols)), shape=(n, n))


def _weighted_div(diff: sp.csr_matrix, ell) -> sp.csr_matrix:
    """(1/rho) D (rho .): entries of D scaled by density ratios."""
    coo = diff.tocoo()
    scale = np.clip(ell[coo.col] - ell[coo.row], -RATIO_CAP, RATIO_CAP)
    return sp.csr_matrix(
        (coo.data * np.exp(scale), (coo.row, coo.col)), shape=diff.shape
    )


def _discrete_drift(diff: sp.csr_matrix, ell) -> np.ndarray:
    """Coefficient vector -(1/rho) D rho, taken from the scaled matrix row
    sums so that the advective and divergence halves cancel exactly on
    constants."""
    return -np.asarray(_weighted_div(diff, ell).sum(axis=1)).ravel()


# ---------------------------------------------------------------------------
# operator assembly
# ---------------------------------------------------------------------------


@dataclass
class DiscreteOperator:
    """Sparse operator over grid nodes, with an optional rank-one part.

    ``apply`` computes mat @ f + u (w . f); the rank-one term only appears
    for the centered projection P = P_S - mean.
    """

    kind: str
    mat: sp.csr_matrix
    grid: PhaseGrid
    stencil_order: int = 2
    rank1: Optional[tuple] = None

    @property
    def shape(self):
        return self.mat.shape

    def apply(self, f):
        out = self.mat @ np.ravel(f)
        if self.rank1 is not None:
            u, w = self.rank1
            out = out + u * float(np.dot(w, np.ravel(f)))
        return out

    def __matmul__(self, f):
        return self.apply(f)


def _sigma_values(model: ModelSpec, pts):
    return np.array([model.diffusion.matrix(np.array([p]))[0, 0] for p in pts])


def _assemble_S(model, grid) -> sp.csr_matrix:
    v, hv = grid.v, grid.hv
    v_mid = 0.5 * (v[:-1] + v[1:])
    a_mid = _sigma_values(model, v_mid)
    ell = grid.logrho_v
    ell_mid = -0.5 * v_mid**2
    s_v = _weighted_flux(grid.nv, hv, ell, ell_mid, a_mid)
    return sp.kron(sp.identity(grid.nx, format="csr"), s_v, format="csr")


def _assemble_A(model, grid) -> sp.csr_matrix:
    dx = _centered_diff(grid.nx, grid.hx)
    dv = _centered_diff(grid.nv, grid.hv)
    div_x = _weighted_div(dx, grid.logrho_x)
    div_v = _weighted_div(dv, grid.logrho_v)
    phi_h = -np.asarray(div_x.sum(axis=1)).ravel()  # discrete Phi'
    v_h = -np.asarray(div_v.sum(axis=1)).ravel()  # discrete v
    dphi = sp.diags(phi_h)
    dvel = sp.diags(v_h)
    adv = sp.kron(dphi, dv) - sp.kron(dx, dvel)
    div = sp.kron(dphi, div_v) - sp.kron(div_x, dvel)
    return (0.5 * (adv + div)).tocsr()


def _assemble_Gx(model, grid) -> sp.csr_matrix:
    """Weighted x-Laplacian d_xx - Phi' d_x in symmetric flux form."""
    x, hx = grid.x, grid.hx
    x_mid = 0.5 * (x[:-1] + x[1:])
    ell_mid = np.array([-model.potential.value(np.array([xi])) for xi in x_mid])
    ones = np.ones(grid.nx - 1)
    return _weighted_flux(grid.nx, hx, grid.logrho_x, ell_mid, ones)


def _assemble_PS(grid) -> sp.csr_matrix:
    """Velocity average: (P_S f)(x_i, .) = sum_j wv_j f(x_i, v_j)."""
    ones = np.ones((grid.nv, 1))
    avg = sp.csr_matrix(ones @ grid.wv.reshape(1, -1))
    return sp.kron(sp.identity(grid.nx, format="csr"), avg, format="csr")


def _assemble_LFP(model, grid) -> sp.csr_matrix:
    """Density-evolution generator d_v(a d_v u + v a u) - v d_x u + Phi' d_v u.

    The a-dependent part is written as the conservative flux
    a rho_v d_v (u / rho_v), so the flat-measure mass of u is conserved to
    the boundary-flux scale; transport terms use centered stencils with
    analytic coefficients.
    """
    v, hv = grid.v, grid.hv
    v_mid = 0.5 * (v[:-1] + v[1:])
    a_mid = _sigma_values(model, v_mid)
    ell = grid.logrho_v
    ell_mid = -0.5 * v_mid**2
    n = grid.nv
    rows, cols, data = [], [], []
    cell = np.full(n, hv)
    cell[0] = cell[-1] = 0.5 * hv
    for j in range(n):
        # flux G_{j+1/2} = a rho_mid [ (u/rho)_{j+1} - (u/rho)_j ] / h;
        # row j gets (G_{j+1/2} - G_{j-1/2}) / cell_j, no flux through ends
        if j < n - 1:
            cp = a_mid[j] / (hv * cell[j])
            rows += [j, j]
            cols += [j + 1, j]
            data += [
                cp * _ratio(ell[j + 1], ell_mid[j]),
                -cp * _ratio(ell[j], ell_mid[j]),
            ]
        if j > 0:
            cm = a_mid[j - 1] / (hv * cell[j])
            rows += [j, j]
            cols += [j - 1, j]
            data += [
                cm * _ratio(ell[j - 1], ell_mid[j - 1]),
                -cm * _ratio(ell[j], ell_mid[j - 1]),
            ]
    fp_v = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    dx = _centered_diff(grid.nx, grid.hx)
    dv = _centered_diff(grid.nv, grid.hv)
    phi_p = np.array(
        [model.potential.grad(np.array([xi]))[0] for xi in grid.x]
    )
    transport = sp.kron(sp.diags(phi_p), dv) - sp.kron(dx, sp.diags(grid.v))
    return (sp.kron(sp.identity(grid.nx, format="csr"), fp_v) + transport).tocsr()


def assemble(model: ModelSpec, grid: PhaseGrid, kind: str) -> DiscreteOperator:
    """Assemble one of the grid operators.

    kinds: S, A, L (= S - A), L_star (= S + A), L_FP, P_S, P, G.
    """
    if kind == "S":
        mat = _assemble_S(model, grid)
    elif kind == "A":
        mat = _assemble_A(model, grid)
    elif kind == "L":
        mat = (_assemble_S(model, grid) - _assemble_A(model, grid)).tocsr()
    elif kind == "L_star":
        mat = (_assemble_S(model, grid) + _assemble_A(model, grid)).tocsr()
    elif kind == "L_FP":
        mat = _assemble_LFP(model, grid)
    elif kind == "P_S":
        mat = _assemble_PS(grid)
    elif kind == "P":
        mat = _assemble_PS(grid)
        return DiscreteOperator(
            kind="P",
            mat=mat,
            grid=grid,
            rank1=(-np.ones(grid.n), grid.w.copy()),
        )
    elif kind == "G":
        gx = _assemble_Gx(model, grid)
        ps = _assemble_PS(grid)
        ones_v = sp.csr_matrix(np.ones((grid.nv, 1)))
        wv_row = sp.csr_matrix(grid.wv.reshape(1, -1))
        # lift Gx back to the phase grid: G = (Gx on x-profiles) after P_S
        lift = sp.kron(gx, ones_v @ wv_row, format="csr")
        mat = lift
        _ = ps
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    if not np.all(np.isfinite(mat.data)):
        raise NumericsError(f"operator {kind} has non-finite entries")
    return DiscreteOperator(kind=kind, mat=mat, grid=grid)


# ---------------------------------------------------------------------------
# random test functions and inequality checks
# ---------------------------------------------------------------------------


def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s))


def _window_1d(z, lo, hi, margin=0.15):
    width = hi - lo
    left = _smoothstep((z - lo) / (margin * width))
    right = _smoothstep((hi - z) / (margin * width))
    return left * right


def random_test_functions(
    grid: PhaseGrid, n_funcs: int, seed: int = 0, compact: bool = True, kmax: int = 4
):
    """Random smooth phase-space functions: Fourier modes in x times
    Hermite polynomials in v with geometrically decaying coefficients,
    optionally windowed to vanish near the truncation boundary."""
    from numpy.polynomial.hermite_e import hermeval

    rng = np.random.default_rng(seed)
    X, V = grid.mesh()
    (x0, x1), (v0, v1) = grid.box
    lx = x1 - x0
    wview = (
        _window_1d(X, x0, x1) * _window_1d(V, v0, v1)
        if compact
        else np.ones_like(X)
    )
    funcs = []
    for _ in range(n_funcs):
        f = np.zeros_like(X)
        for k in range(kmax + 1):
            phase = rng.uniform(0.0, 2.0 * math.pi)
            fx = np.cos(math.pi * k * (X - x0) / lx + phase)
            for m in range(kmax + 1):
                coeff = np.zeros(m + 1)
                coeff[m] = 1.0
                hv = hermeval(V, coeff) * np.exp(-(V**2) / 8.0)
                f += rng.standard_normal() * 2.5 ** (-(k + m)) * fx * hv
        funcs.append((f * wview).ravel())
    return funcs


def check_dissipativity(op_l: DiscreteOperator, n_random: int = 50, seed: int = 0):
    """Max over random compactly supported f of (L f, f) / (f, f)."""
    grid = op_l.grid
    worst = -math.inf
    for f in random_test_functions(grid, n_random, seed=seed):
        nrm2 = grid.inner(f, f)
        if nrm2 < 1e-12:
            continue
        worst = max(worst, grid.inner(op_l.apply(f), f) / nrm2)
    return worst


def check_microscopic_coercivity(
    op_s: DiscreteOperator, op_ps: DiscreteOperator, n_random: int = 50, seed: int = 0
):
    """Min over random f of -(S f, f) / ||(I - P_S) f||^2."""
    grid = op_s.grid
    best = math.inf
    for f in random_test_functions(grid, n_random, seed=seed):
        resid = f - op_ps.apply(f)
        denom = grid.inner(resid, resid)
        if denom < 1e-10:
            continue
        best = min(best, -grid.inner(op_s.apply(f), f) / denom)
    return best


def check_macroscopic_coercivity(
    op_a: DiscreteOperator, op_p: DiscreteOperator, n_random: int = 50, seed: int = 0
):
    """Min over random f of ||A P f||^2 / ||P f||^2."""
    grid = op_a.grid
    best = math.inf
    for f in random_test_functions(grid, n_random, seed=seed, compact=True):
        pf = op_p.apply(f)
        denom = grid.inner(pf, pf)
        if denom < 1e-10:
            continue
        apf = op_a.apply(pf)
        best = min(best, grid.inner(apf, apf) / denom)
    return best


def check_bs_bound(
    model: ModelSpec,
    grid: PhaseGrid,
    op_g: DiscreteOperator,
    op_ps: DiscreteOperator,
    n_random: int = 50,
    seed: int = 0,
):
    """Max over random f of ||T f|| / ||(I - G) f|| with
    T f = b(v) d_x (P_S f); bounded by sqrt(2 d^3) N_sigma."""
    dx = _centered_diff(grid.nx, grid.hx)
    b_vals = np.array(
        [drift_correction(model.diffusion, np.array([vj]))[0] for vj in grid.v]
    )
    worst = 0.0
    for f in random_test_functions(grid, n_random, seed=seed):
        fs_x = (op_ps.apply(f)).reshape(grid.nx, grid.nv)[:, 0]
        tf = (dx @ fs_x)[:, None] * b_vals[None, :]
        resid = f - op_g.apply(f)
        denom = grid.norm(resid)
        if denom < 1e-10:
            continue
        worst = max(worst, grid.norm(tf) / denom)
    return worst


def invariance_defect(op_l: DiscreteOperator, n_random: int = 50, seed: int = 0):
    """Max |(L f, 1)| over normalized random compactly supported f."""
    grid = op_l.grid
    worst = 0.0
    for f in random_test_functions(grid, n_random, seed=seed):
        nrm = grid.norm(f)
        if nrm < 1e-12:
            continue
        worst = max(worst, abs(grid.mean(op_l.apply(f))) / nrm)
    return worst


def symmetry_defect(op: DiscreteOperator, n_random: int = 20, seed: int = 1):
    """Max |(S f, g) - (f, S g)| / (||f|| ||g||) over random smooth pairs."""
    grid = op.grid
    funcs = random_test_functions(grid, 2 * n_random, seed=seed)
    worst = 0.0
    for f, g in zip(funcs[:n_random], funcs[n_random:]):
        denom = grid.norm(f) * grid.norm(g)
        if denom < 1e-12:
            continue
        worst = max(
            worst,
            abs(grid.inner(op.apply(f), g) - grid.inner(f, op.apply(g))) / denom,
        )
    return worst


def antisymmetry_defect(op: DiscreteOperator, n_random: int = 20, seed: int = 1):
    """Max |(A f, g) + (f, A g)| / (||f|| ||g||) over random smooth pairs."""
    grid = op.grid
    funcs = random_test_functions(grid, 2 * n_random, seed=seed)
    worst = 0.0
    for f, g in zip(funcs[:n_random], funcs[n_random:]):
        denom = grid.norm(f) * grid.norm(g)
        if denom < 1e-12:
            continue
        worst = max(
            worst,
            abs(grid.inner(op.apply(f), g) + grid.inner(f, op.apply(g))) / denom,
        )
    return worst


def conjugation_defect(model: ModelSpec, grid: PhaseGrid, n_funcs: int = 5, seed: int = 3):
    """Relative defects || (T L* T^{-1} - L_FP) (rho g) ||~ / || rho g ||~
    for smooth g, T = multiplication by the stationary density rho.

    Computed as || L* g - rho^{-1} L_FP (rho g) || in the weighted norm,
    which equals the density-side norm of the raw defect.
    """
    lstar = assemble(model, grid, "L_star")
    lfp = assemble(model, grid, "L_FP")
    ell = grid.logrho_x[:, None] + grid.logrho_v[None, :]
    ell = ell.ravel()
    coo = lfp.mat.tocoo()
    scale = np.clip(ell[coo.col] - ell[coo.row], -RATIO_CAP, RATIO_CAP)
    lfp_conj = sp.csr_matrix(
        (coo.data * np.exp(scale), (coo.row, coo.col)), shape=lfp.mat.shape
    )
    out = []
    for g in random_test_functions(grid, n_funcs, seed=seed):
        defect = lstar.apply(g) - lfp_conj @ g
        out.append(grid.norm(defect) / max(grid.norm(g), 1e-300))
    return out


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


def spectral_gap(op_l: DiscreteOperator, zero_tol: float = 1e-8, k: int = 16):
    """Smallest real part among the nonzero eigenvalues of -L, i.e. the
    decay rate of the slowest non-constant mode."""
    n = op_l.shape[0]
    if n > 10_000:
        raise NumericsError("spectral gap requires nx * nv <= 1e4")
    mat = op_l.mat
    try:
        if n <= 2000:
            vals = np.linalg.eigvals(mat.toarray())
        else:
            vals = spla.eigs(
                mat, k=k, sigma=0.15, which="LM", return_eigenvectors=False
            )
    except Exception as exc:
        raise NumericsError(f"eigensolve failed: {exc}") from exc
    rates = -vals.real
    keep = np.abs(vals) > zero_tol
    rates = rates[keep]
    rates = rates[rates > zero_tol]
    if rates.size == 0:
        raise NumericsError("no nonzero decaying eigenvalues found")
    return float(rates.min())


def ou_spectral_gap(model: ModelSpec):
    """Drift-matrix oracle for constant-diffusion, quadratic-potential
    models: the gap of the kinetic generator is the smallest -Re over the
    eigenvalues of [[0, I], [-Hess Phi, -Sigma]]."""
    d = model.dim
    if model.diffusion.const_matrix is None:
        raise NumericsError("OU oracle needs a constant diffusion matrix")
    hess = model.potential.hess(np.zeros(d))
    drift = np.block(
        [
            [np.zeros((d, d)), np.eye(d)],
            [-hess, -model.diffusion.const_matrix],
        ]
    )
    evs = np.linalg.eigvals(drift)
    return float((-evs.real).min())


def export_triplets(op: DiscreteOperator, path):
    """Write the sparse matrix as MatrixMarket coordinate text."""
    from scipy.io import mmwrite

    mmwrite(str(path), op.mat.tocoo())
