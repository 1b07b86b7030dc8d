"""Fock-space norms: exact coefficient formula on F_2, Gaussian-weighted
polar quadrature for general p, closed-form norms of exponentials of
polynomials, and the pointwise growth estimate.

Norm conventions (1 <= p < inf, and the weighted sup norm at p = inf):

    ||f||_p^p = (p / 2 pi) * integral |f(z)|^p exp(-p |z|^2 / 2) dA(z)
    ||f||_inf = sup |f(z)| exp(-|z|^2 / 2)

On F_2 the monomials z^n have ||z^n||_2^2 = n!, so coefficient sums give the
norm exactly; that route is the oracle for the quadrature route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AffineSymbol, TaylorSeries, Weight
from .iterates import REGIME_P, weight_iterate_closed

_LOG_HUGE = 709.0  # exp overflows past this


def _exp_or_inf(x: float) -> float:
    return math.exp(x) if x < _LOG_HUGE else math.inf


def norm2_coeff(f: TaylorSeries) -> float:
    """sqrt(sum |c_n|^2 n!), accumulated in log space per term.

    Dropping the top coefficient changes the squared value by exactly that
    term's contribution |c_D|^2 D!.
    """
    logs = []
    for n, c in enumerate(f.coeffs):
        if c == 0:
            continue
        logs.append(2.0 * math.log(abs(c)) + math.lgamma(n + 1))
    if not logs:
        return 0.0
    peak = max(logs)
    if peak > _LOG_HUGE:
        return math.inf
    total = math.fsum(math.exp(x) for x in logs)
    return math.sqrt(total)


@dataclass(frozen=True)
class PolarGrid:
    """Gauss-Legendre radial nodes on [0, R] crossed with uniform angles."""

    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    angular_nodes: np.ndarray
    radius: float

    @staticmethod
    def build(radius: float, n_radial: int = 400, n_angular: int = 256) -> "PolarGrid":
        x, w = np.polynomial.legendre.leggauss(n_radial)
        r = radius * (x + 1.0) / 2.0
        wr = radius / 2.0 * w
        th = np.linspace(0.0, 2.0 * np.pi, n_angular, endpoint=False)
        return PolarGrid(r, wr, th, radius)

    def points(self) -> np.ndarray:
        return np.outer(self.radial_nodes, np.exp(1j * self.angular_nodes))

    def gaussian_mass(self, p: float) -> float:
        """Quadrature of integral exp(-p r^2/2) r dr dtheta; closed form 2 pi/p
        up to the e^{-p R^2/2} cutoff."""
        vals = np.exp(-p * self.radial_nodes**2 / 2.0) * self.radial_nodes
        return float(np.sum(self.radial_weights * vals)) * 2.0 * np.pi


def default_radius(degree: int, p: float) -> float:
    """Cutoff past which a degree-bounded integrand is Gaussian-negligible."""
    p_eff = min(p, 2.0) if math.isfinite(p) else 1.0
    return 2.0 * math.sqrt(max(degree, 1) / p_eff) + 6.0


def _check_reliable(f: TaylorSeries, radius: float) -> None:
    """Reject truncated series whose tail visibly matters at |z| = radius."""
    if not f.truncated or f.degree < 3:
        return
    logs = [
        (math.log(abs(c)) + n * math.log(radius) if c != 0 else -math.inf)
        for n, c in enumerate(f.coeffs)
    ]
    top = max(logs[-3:])
    peak = max(logs)
    if top > peak + math.log(1e-8):
        raise ValueError(
            f"series truncation unreliable at radius {radius:.3g}: "
            "increase the degree or reduce the radius"
        )


def _log_abs_on(f: TaylorSeries, z: np.ndarray) -> np.ndarray:
    vals = np.polynomial.polynomial.polyval(z, np.asarray(f.coeffs))
    with np.errstate(divide="ignore"):
        return np.log(np.abs(vals))


def _refine_sup(fn_log, center: complex, h: float, rounds: int = 14) -> float:
    best = float(fn_log(np.array([center]))[0])
    for _ in range(rounds):
        xs = np.linspace(-h, h, 15)
        local = center + (xs[:, None] + 1j * xs[None, :]).ravel()
        lv = fn_log(local)
        i = int(np.nanargmax(lv))
        if lv[i] > best:
            best = float(lv[i])
            center = local[i]
        h *= 0.35
    return best


def norm_p(
    f: TaylorSeries, p: float, grid: PolarGrid | None = None, radius: float | None = None
) -> float:
    """||f||_p by polar quadrature (p < inf) or polished grid supremum (p = inf)."""
    if math.isinf(p):
        if radius is None:
            radius = grid.radius if grid is not None else default_radius(f.degree, p)
        _check_reliable(f, radius)

        def g(z):
            return _log_abs_on(f, z) - np.abs(z) ** 2 / 2.0

        r = np.linspace(0.0, radius, 240)
        th = np.linspace(0.0, 2 * np.pi, 180, endpoint=False)
        z = np.concatenate(([0j], np.outer(r[1:], np.exp(1j * th)).ravel()))
        vals = g(z)
        i = int(np.nanargmax(vals))
        best = _refine_sup(g, complex(z[i]), max(radius / 240, abs(z[i]) * 2 * np.pi / 180) * 2)
        return _exp_or_inf(best)
    if grid is None:
        grid = PolarGrid.build(radius if radius is not None else default_radius(f.degree, p))
    _check_reliable(f, grid.radius)
    z = grid.points()
    log_f = _log_abs_on(f, z)
    expo = p * (log_f - grid.radial_nodes[:, None] ** 2 / 2.0)
    with np.errstate(over="ignore"):
        integrand = np.exp(expo) * grid.radial_nodes[:, None]
    dtheta = 2.0 * np.pi / len(grid.angular_nodes)
    total = float(np.sum(grid.radial_weights @ integrand) * dtheta)
    return (p / (2.0 * np.pi) * total) ** (1.0 / p)


def exp_poly_norm(scalar_log: complex, lin: complex, quad: complex, p: float) -> float:
    """||exp(scalar_log) * e^{lin z + quad z^2}||_p in closed form.

    log|integrand-core| = k + l.v + v^T M v with M the quadratic form of
    Re(quad z^2) - |z|^2/2; integrable iff |quad| < 1/2, and then the 2D
    Gaussian integral gives

        log||.||_p = k - l^T M^{-1} l / 4 - log(2 sqrt(1/4 - |quad|^2)) / p

    (the last term drops at p = inf, where the value is the supremum).
    """
    k = scalar_log.real
    det = 0.25 - abs(quad) ** 2
    if det <= 0.0:
        return math.inf
    l = np.array([lin.real, -lin.imag])
    m = np.array([[quad.real - 0.5, -quad.imag], [-quad.imag, -quad.real - 0.5]])
    peak = k - float(l @ np.linalg.solve(m, l)) / 4.0
    if math.isinf(p):
        return _exp_or_inf(peak)
    return _exp_or_inf(peak - math.log(2.0 * math.sqrt(det)) / p)


@dataclass(frozen=True)
class UnNormSequence:
    """The sequence ||u_n||_p with a bounded/unbounded trend read off its tail."""

    values: tuple
    log_values: tuple
    trend: str  # "bounded" | "unbounded" | "inconclusive"


def un_norm_sequence(weight: Weight, symbol: AffineSymbol, p: float, nmax: int) -> UnNormSequence:
    """(||u_n||_p)_{n=1..nmax} from the closed iterate forms.

    Requires a closed-form regime (the iterate weight is an exponential of a
    polynomial); kernel weights against |a| < 1 are rewritten in exponential
    form first, which is branch-safe there.  The trend flag is a ratio test on
    the tail of the log values.
    """
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    from .core import KernelWeight

    if isinstance(weight, KernelWeight) and abs(symbol.a) < 1.0 - 1e-12:
        weight = weight.as_exp_quadratic()
    values = []
    logs = []
    for n in range(1, nmax + 1):
        form = weight_iterate_closed(weight, symbol, n)
        if form.regime == REGIME_P:
            raise ValueError("||u_n||_p needs a closed-form regime (A1, U or C)")
        scalar = form.scalar_log + form.const
        v = exp_poly_norm(scalar, form.linear, form.quadratic, p)
        values.append(v)
        logs.append(math.log(v) if 0.0 < v < math.inf else (math.inf if v == math.inf else -math.inf))
    if any(math.isinf(x) and x > 0 for x in logs):
        trend = "unbounded"
    elif nmax < 4:
        trend = "inconclusive"
    else:
        tail = logs[nmax // 2 :]
        slope = (tail[-1] - tail[0]) / max(len(tail) - 1, 1)
        trend = "unbounded" if slope > 1e-6 else "bounded"
    return UnNormSequence(tuple(values), tuple(logs), trend)


def pointwise_bound_check(
    f: TaylorSeries, p: float, z: complex, norm: float | None = None
) -> tuple[bool, float]:
    """Growth estimate |f(z)| <= (2 pi/p)^{1/p} e^{|z|^2/2} ||f||_p.

    Returns (holds, slack).  For p < inf the slack is reported in the p-th
    power scale, slack = (2 pi/p) e^{p|z|^2/2} ||f||_p^p - |f(z)|^p; at p = inf
    it is e^{|z|^2/2} ||f||_inf - |f(z)|.
    """
    if norm is None:
        norm = norm_p(f, p)
    fz = abs(f(z))
    if math.isinf(p):
        rhs = math.exp(abs(z) ** 2 / 2.0) * norm
        return fz <= rhs * (1.0 + 1e-12), rhs - fz
    rhs = (2.0 * math.pi / p) * math.exp(p * abs(z) ** 2 / 2.0) * norm**p
    return fz**p <= rhs * (1.0 + 1e-12), rhs - fz**p
