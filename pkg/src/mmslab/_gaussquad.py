"""Low-level gaussian ball/lens integrals, log-domain and large-d safe.

A standard gaussian mass of a ball centered on the first axis reduces, after
integrating out the (d-1) spherical directions, to a 1-D integral in the
axial coordinate x1 whose radial factor is an incomplete gamma:

    gamma^d(B(u e1, R)) = C_d * int e^{-x1^2/2} P((d-1)/2, s_max(x1)^2/2) dx1

with s_max the section radius and P the regularized lower incomplete gamma.
The same form with the section radius clipped by a second, origin-centered
ball gives lens (intersection) masses.  Everything is evaluated in the log
domain so dimensions up to 10^6 stay finite; the x1 nodes are placed on the
window where the log-integrand is within 60 of its peak, found by scan.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammainc, gammaln, roots_legendre

__all__ = [
    "log_gammainc_lower",
    "lens_mass_log",
    "axis_ball_mass_log",
    "origin_ball_mass_log",
]

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}

# direct gammainc is preferred while it carries >= this much headroom
_DIRECT_FLOOR = 1e-290


def _gl(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = roots_legendre(n)
    return _GL_CACHE[n]


def log_gammainc_lower(a: float, x) -> np.ndarray:
    """log P(a, x) for the regularized lower incomplete gamma, elementwise.

    Uses scipy's gammainc when it does not underflow and otherwise the
    ascending series P(a,x) = x^a e^-x / Gamma(a+1) * sum_k prod_j x/(a+j),
    which converges geometrically for x < a.  All callers here have
    x/a <= 3/4 in the underflow regime.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.full(x.shape, -np.inf)
    pos = x > 0
    if np.any(pos):
        xs = x[pos]
        direct = gammainc(a, xs)
        res = np.empty_like(xs)
        small = direct < _DIRECT_FLOOR
        if np.any(~small):
            res[~small] = np.log(direct[~small])
        if np.any(small):
            xv = xs[small]
            if np.any(xv / a > 0.95):
                raise FloatingPointError("log gammainc series needs x/a bounded away from 1")
            term = np.ones_like(xv)
            total = np.ones_like(xv)
            for k in range(1, 200000):
                term = term * xv / (a + k)
                total += term
                if np.all(term < 1e-18 * total):
                    break
            res[small] = a * np.log(xv) - xv - gammaln(a + 1.0) + np.log(total)
        out[pos] = res
    return out[0] if scalar else out


def _log_prefactor(d: int) -> float:
    # sigma_{d-2}(S^{d-2}) / (2 pi)^{d/2} * 2^{(d-3)/2} Gamma((d-1)/2), in logs
    return (np.log(2.0) + 0.5 * (d - 1) * np.log(np.pi)
            - 0.5 * d * np.log(2.0 * np.pi) + 0.5 * (d - 3) * np.log(2.0))


def lens_mass_log(d: int, rho, u: float, rp: float, nodes: int = 512) -> float:
    """log gamma^d( B(0, rho) ∩ B(u e1, rp) ); ``rho=None`` drops the
    centered-ball constraint (plain ball mass at distance u from the origin).

    Open versus closed makes no difference (boundaries are null sets).
    """
    if d < 2:
        raise ValueError("the 2-D reduction needs d >= 2; use erf formulas for d=1")
    if rho is None:
        lo, hi = u - rp, u + rp
    else:
        lo, hi = max(-rho, u - rp), min(rho, u + rp)
    if hi <= lo:
        return -np.inf
    a = 0.5 * (d - 1)

    def log_integrand(x1):
        s2 = rp * rp - (x1 - u) ** 2
        if rho is not None:
            s2 = np.minimum(s2, rho * rho - x1 * x1)
        s2 = np.maximum(s2, 0.0)
        return -0.5 * x1 * x1 + log_gammainc_lower(a, 0.5 * s2)

    scan = np.linspace(lo, hi, 4097)
    h = log_integrand(scan)
    hmax = float(np.max(h))
    if not np.isfinite(hmax):
        return -np.inf
    sig = scan[h > hmax - 60.0]
    step = scan[1] - scan[0]
    wlo, whi = max(lo, sig[0] - step), min(hi, sig[-1] + step)
    # the section radius switches between the two balls at the chord plane;
    # split there so each Gauss-Legendre panel sees an analytic integrand
    cuts = [wlo, whi]
    if rho is not None and u != 0.0:
        kink = (u * u + rho * rho - rp * rp) / (2.0 * u)
        if wlo < kink < whi:
            cuts = [wlo, kink, whi]
    gx, gw = _gl(nodes)
    m = -np.inf
    pieces = []
    for plo, phi in zip(cuts[:-1], cuts[1:]):
        x1 = 0.5 * (phi + plo) + 0.5 * (phi - plo) * gx
        hv = log_integrand(x1)
        pieces.append((hv, 0.5 * (phi - plo)))
        m = max(m, float(np.max(hv)))
    total = sum(scale * float(np.sum(np.exp(hv - m) * gw)) for hv, scale in pieces)
    return _log_prefactor(d) + m + np.log(total)


def axis_ball_mass_log(d: int, u: float, r: float, nodes: int = 512) -> float:
    """log gamma^d( B(u e1, r) ) for d >= 2."""
    if u == 0.0:
        return origin_ball_mass_log(d, r)
    return lens_mass_log(d, None, u, r, nodes=nodes)


def origin_ball_mass_log(d: int, r: float) -> float:
    """log gamma^d( B(0, r) ), the chi-square radial closed form."""
    return float(log_gammainc_lower(0.5 * d, 0.5 * r * r))
