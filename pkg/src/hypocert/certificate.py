"""Explicit decay-rate certificates.

Given the ellipticity constant ``c_sigma``, the coefficient bound
``n_sigma``, the Poincare constant ``lam`` and the auxiliary-operator
constant ``c_phi``, the certified rate is

    theta2 = (theta1 - 1)/theta1 * c_sigma / (n1 + n2 N + n3 N^2),

where the n_i come from expanding r(N) + s in powers of N = n_sigma with

    r(N) = (1 + c_phi + q N) (1 + k (1 + c_phi + q N)),
    s    = lam / (2 (1 + lam)),   q = sqrt(2 d^3),   k = (1 + lam)/(2 lam).

The quadratic split is a1 = s + u(1 + k u), a2 = q (1 + 2 k u), a3 = k q^2
with u = 1 + c_phi; it is asserted against direct evaluation of r(N) + s at
random N, so the expansion can never silently drift from the product form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import CertificateError

__all__ = ["RateCertificate", "certify", "check_rate_condition"]


@dataclass(frozen=True)
class RateCertificate:
    """Full constant chain of a certified exponential decay rate."""

    # inputs
    c_sigma: float
    n_sigma: float
    lam: float
    c_phi: float
    dim: int
    theta1: float
    # derived
    d_sigma: float
    delta: float
    s_phi: float
    a1: float
    a2: float
    a3: float
    n1: float
    n2: float
    n3: float
    eps_tilde: float
    eps: float
    kappa: float
    kappa1: float
    kappa2: float
    theta2: float
    provenance: dict | None = None

    def envelope(self, t, initial_norm=1.0):
        """theta1 * exp(-theta2 t) * initial_norm, vectorized in t."""
        return self.theta1 * np.exp(-self.theta2 * np.asarray(t, dtype=float)) * initial_norm

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _r_plus_s(n, u, k, q, s_phi):
    w = u + q * n
    return w * (1.0 + k * w) + s_phi


def certify(c_sigma, n_sigma, lam, c_phi, dim, theta1, provenance=None) -> RateCertificate:
    """Build the full certificate chain for one set of constants."""
    if c_sigma <= 0.0 or n_sigma <= 0.0 or lam <= 0.0:
        raise CertificateError("c_sigma, n_sigma and lam must be positive")
    if c_phi < 0.0:
        raise CertificateError("c_phi must be nonnegative")
    if theta1 <= 1.0:
        raise CertificateError("theta1 must exceed 1")
    q = math.sqrt(2.0 * dim**3)
    k = (1.0 + lam) / (2.0 * lam)
    u = 1.0 + c_phi
    s_phi = lam / (2.0 * (1.0 + lam))
    a1 = s_phi + u * (1.0 + k * u)
    a2 = q * (1.0 + 2.0 * k * u)
    a3 = k * q * q
    # the expansion must reproduce r(N) + s exactly
    rng = np.random.default_rng(0)
    for n in rng.uniform(0.1, 10.0, size=10):
        direct = _r_plus_s(n, u, k, q, s_phi)
        expanded = a1 + a2 * n + a3 * n * n
        if abs(direct - expanded) > 1e-12 * abs(direct):
            raise CertificateError(
                f"quadratic expansion of r(N)+s broke at N={n}: "
                f"{expanded!r} vs {direct!r}"
            )
    d_sigma = q * n_sigma
    delta = lam / (1.0 + lam) / (1.0 + c_phi + d_sigma)
    denom = a1 + a2 * n_sigma + a3 * n_sigma**2
    eps_tilde = n_sigma / denom
    if not 0.0 < eps_tilde < 1.0:
        raise CertificateError(f"eps_tilde = {eps_tilde!r} outside (0, 1)")
    v = theta1 - 1.0
    eps = (v / (1.0 + v)) * (c_sigma / n_sigma) * eps_tilde
    if not 0.0 < eps < 1.0:
        raise CertificateError(f"eps = {eps!r} outside (0, 1)")
    kappa = eps * s_phi
    kappa1 = math.sqrt((1.0 + eps) / (1.0 - eps))
    kappa2 = kappa / (1.0 + eps)
    theta2 = 0.5 * kappa
    n1, n2, n3 = (2.0 * a / s_phi for a in (a1, a2, a3))
    theta2_alt = (v / theta1) * c_sigma / (n1 + n2 * n_sigma + n3 * n_sigma**2)
    if abs(theta2 - theta2_alt) > 1e-12 * theta2:
        raise CertificateError(
            f"theta2 expressions disagree: {theta2!r} vs {theta2_alt!r}"
        )
    if kappa1 > theta1 + 1e-12:
        raise CertificateError(f"kappa1 = {kappa1!r} exceeds theta1 = {theta1!r}")
    return RateCertificate(
        c_sigma=c_sigma,
        n_sigma=n_sigma,
        lam=lam,
        c_phi=c_phi,
        dim=dim,
        theta1=theta1,
        d_sigma=d_sigma,
        delta=delta,
        s_phi=s_phi,
        a1=a1,
        a2=a2,
        a3=a3,
        n1=n1,
        n2=n2,
        n3=n3,
        eps_tilde=eps_tilde,
        eps=eps,
        kappa=kappa,
        kappa1=kappa1,
        kappa2=kappa2,
        theta2=theta2,
        provenance=provenance,
    )


def check_rate_condition(cert: RateCertificate, lambda_m=None, lambda_M=None, tol=1e-12):
    """Check kappa against both coefficients of the differential inequality.

    With the certificate's eps and delta the two right-hand coefficients are

        coeff_orth = lambda_m - eps (1 + c1 + c2)(1 + 1/(2 delta))
        coeff_proj = eps (lambda_M/(1 + lambda_M) - (1 + c1 + c2) delta / 2)

    where c1 = d_sigma, c2 = c_phi, lambda_m = c_sigma, lambda_M = lam.
    kappa must not exceed either.  The projected-part margin is zero by
    construction of eps (up to roundoff), the orthogonal-part margin equals
    c_sigma / theta1.  Returns ``(ok, margins, coefficients)``.
    """
    lm = cert.c_sigma if lambda_m is None else lambda_m
    lM = cert.lam if lambda_M is None else lambda_M
    c12 = 1.0 + cert.d_sigma + cert.c_phi
    coeff_orth = lm - cert.eps * c12 * (1.0 + 1.0 / (2.0 * cert.delta))
    coeff_proj = cert.eps * (lM / (1.0 + lM) - c12 * cert.delta / 2.0)
    margins = (coeff_orth - cert.kappa, coeff_proj - cert.kappa)
    scale = max(cert.kappa, abs(coeff_orth), abs(coeff_proj), 1.0)
    ok = margins[0] > 0.0 and margins[1] >= -tol * scale
    if not ok:
        raise CertificateError(
            f"rate condition violated: margins {margins} (algebra bug)"
        )
    return ok, margins, (coeff_orth, coeff_proj)
