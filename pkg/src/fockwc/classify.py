"""Decision engine: boundedness, compactness, power boundedness, norms,
spectra and mean-ergodicity verdicts for W f = u * (f o psi) on F_p.

Every verdict carries a human-readable reason and a stable ``anchor`` string
naming the rule that fired, so reports can be audited mechanically.

The quantity everything revolves around is

    M(u, psi) = sup_z |u(z)| * exp((|psi(z)|^2 - |z|^2) / 2)

finite iff the operator is bounded (and then psi(z) = a z + b with |a| <= 1);
decaying at infinity iff it is compact.  For kernel and exp-quadratic weights
the log of the integrand is an explicit real quadratic form, so the supremum
is computed analytically; generic Taylor weights get a grid probe flagged
"numeric only".
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    TOL_EQ,
    AffineSymbol,
    ExpQuadWeight,
    KernelWeight,
    TaylorWeight,
    Weight,
    close,
    unimodular,
)
from .iterates import (
    REGIME_P,
    IterateForm,
    u_infinity,
    weight_iterate_closed,
    weight_iterate_product,
)

YES = "yes"
NO = "no"
UNDETERMINED = "undetermined"

#: Default search bound and tolerance for root-of-unity detection.
MAX_ROOT_ORDER = 1024
ROOT_TOL = 1e-9


@dataclass(frozen=True)
class Verdict:
    value: str
    reason: str
    anchor: str

    @property
    def is_yes(self) -> bool:
        return self.value == YES

    @property
    def is_no(self) -> bool:
        return self.value == NO


@dataclass(frozen=True)
class GrowthExponent:
    """log(|u(z)| e^{(|psi z|^2-|z|^2)/2}) = k + Re(t z) + Re(p z^2) - q |z|^2."""

    k: float
    t: complex
    p: complex
    q: float

    @staticmethod
    def from_parts(k_weight: float, lin: complex, quad: complex, symbol: AffineSymbol) -> "GrowthExponent":
        a, b = symbol.a, symbol.b
        return GrowthExponent(
            k=k_weight + abs(b) ** 2 / 2.0,
            t=lin + a * b.conjugate(),
            p=quad,
            q=(1.0 - abs(a) ** 2) / 2.0,
        )

    @staticmethod
    def from_pair(weight: Weight, symbol: AffineSymbol) -> "GrowthExponent":
        if isinstance(weight, KernelWeight):
            k = math.log(abs(weight.u0)) if weight.u0 != 0 else -math.inf
            return GrowthExponent.from_parts(k, weight.w.conjugate(), 0j, symbol)
        if isinstance(weight, ExpQuadWeight):
            return GrowthExponent.from_parts(weight.a0.real, weight.a1, weight.a2, symbol)
        raise ValueError("no analytic growth exponent for generic Taylor weights")

    @staticmethod
    def from_iterate(form: IterateForm) -> "GrowthExponent":
        if form.regime == REGIME_P:
            raise ValueError("no analytic growth exponent for regime P iterates")
        k = (form.scalar_log + form.const).real
        return GrowthExponent.from_parts(k, form.linear, form.quadratic, form.symbol_n)

    def value_log(self, z: complex) -> float:
        return (
            self.k
            + (self.t * z).real
            + (self.p * z * z).real
            - self.q * (z.real**2 + z.imag**2)
        )

    def sup_log(self) -> float:
        """Exact supremum of the quadratic form, +inf when unbounded above.

        In real coordinates v = (x, y) the form is k + l.v + v^T M v with
        Hessian eigenvalues -2(q -+ |p|): bounded above iff q > |p|, or
        q = |p| with no linear component along the degenerate direction.
        """
        if math.isinf(self.k) and self.k < 0:
            return -math.inf
        l = np.array([self.t.real, -self.t.imag])
        rp, ip = self.p.real, self.p.imag
        q, ap = self.q, abs(self.p)
        gap = q - ap
        scale = 1.0 + q + ap
        if gap < -1e-14 * scale:
            return math.inf
        if gap <= 1e-14 * scale:
            # degenerate ridge: flat along v0, curved along v1
            if ap <= 1e-14 * scale:
                # the form vanishes identically; bounded iff no linear term
                if np.linalg.norm(l) <= 1e-12 * (1.0 + np.linalg.norm(l)):
                    return self.k
                return math.inf
            v0 = np.array([ip, rp - ap])
            if np.linalg.norm(v0) < 1e-14 * scale:
                v0 = np.array([ap + rp, -ip])
            v0 = v0 / np.linalg.norm(v0)
            if abs(float(l @ v0)) > 1e-12 * (1.0 + np.linalg.norm(l)):
                return math.inf
            v1 = np.array([-v0[1], v0[0]])
            return self.k + float(l @ v1) ** 2 / (8.0 * q)
        m = np.array([[rp - q, -ip], [-ip, -rp - q]])
        v_star = np.linalg.solve(m, -l / 2.0)
        return self.k + float(l @ v_star) / 2.0

    def argmax(self) -> complex:
        """Maximizer when the supremum is finite and attained (q > |p|)."""
        l = np.array([self.t.real, -self.t.imag])
        m = np.array([[self.p.real - self.q, -self.p.imag], [-self.p.imag, -self.p.real - self.q]])
        v = np.linalg.solve(m, -l / 2.0)
        return complex(v[0], v[1])


def _pointwise_log(weight: Weight, symbol: AffineSymbol, z: np.ndarray) -> np.ndarray:
    """log |u(z)| + (|psi(z)|^2 - |z|^2)/2 on an array of points."""
    if isinstance(weight, KernelWeight):
        if weight.u0 == 0:
            logu = np.full(z.shape, -np.inf)
        else:
            logu = math.log(abs(weight.u0)) + (np.conj(weight.w) * z).real
    elif isinstance(weight, ExpQuadWeight):
        logu = (weight.a0 + weight.a1 * z + weight.a2 * z * z).real
    else:
        vals = np.polynomial.polynomial.polyval(z, np.asarray(weight.coeffs))
        with np.errstate(divide="ignore"):
            logu = np.log(np.abs(vals))
    psi_z = symbol.a * z + symbol.b
    return logu + (np.abs(psi_z) ** 2 - np.abs(z) ** 2) / 2.0


def grid_growth_sup_log(
    weight: Weight,
    symbol: AffineSymbol,
    radius: float = 40.0,
    n_radial: int = 400,
    n_angular: int = 250,
    refine: bool = True,
) -> float:
    """Brute-force log-supremum of the M-integrand on a polar grid.

    Independent of the analytic quadratic-form route: only pointwise
    evaluations.  With ``refine`` the argmax cell is polished by shrinking
    local grids, enough for 1e-6 relative agreement on bounded inputs.
    """
    r = np.linspace(0.0, radius, n_radial + 1)[1:]
    th = np.linspace(0.0, 2 * np.pi, n_angular, endpoint=False)
    z = np.outer(r, np.exp(1j * th)).ravel()
    z = np.concatenate(([0j], z))
    vals = _pointwise_log(weight, symbol, z)
    best = int(np.nanargmax(vals))
    best_val = float(vals[best])
    if not refine:
        return best_val
    center = z[best]
    h = max(radius / n_radial, abs(center) * 2 * np.pi / n_angular) * 2.0
    for _ in range(14):
        xs = np.linspace(-h, h, 15)
        local = center + (xs[:, None] + 1j * xs[None, :]).ravel()
        lv = _pointwise_log(weight, symbol, local)
        i = int(np.nanargmax(lv))
        if lv[i] > best_val:
            best_val = float(lv[i])
            center = local[i]
        h *= 0.35
    return best_val


def _shell_profile(weight: Weight, symbol: AffineSymbol, radii, n_angular=720):
    th = np.exp(1j * np.linspace(0.0, 2 * np.pi, n_angular, endpoint=False))
    out = []
    for r in radii:
        out.append(float(np.max(_pointwise_log(weight, symbol, r * th))))
    return out


def growth_sup(weight: Weight, symbol: AffineSymbol) -> float:
    """M(u, psi); +inf is a legal return.

    Kernel and exp-quadratic weights are evaluated analytically.  Taylor
    weights fall back to a shell-growth probe: exponential growth of the
    shell maxima reads as divergence, anything slower as "finite (numeric
    only)" -- a probe, not a proof.
    """
    if isinstance(weight, (KernelWeight, ExpQuadWeight)):
        s = GrowthExponent.from_pair(weight, symbol).sup_log()
        if s == -math.inf:
            return 0.0
        return math.exp(s) if s < 709.0 else math.inf
    radii = np.linspace(5.0, 40.0, 8)
    prof = _shell_profile(weight, symbol, radii)
    slope = (prof[-1] - prof[-2]) / (radii[-1] - radii[-2])
    if slope > 0.05:
        return math.inf
    s = max(prof + [grid_growth_sup_log(weight, symbol)])
    return math.exp(s) if s < 709.0 else math.inf


def _weight_at(weight: Weight, z: complex) -> complex:
    return weight(z)


def is_bounded(weight: Weight, symbol: AffineSymbol, p: float, tol: float = TOL_EQ) -> Verdict:
    """Bounded iff |a| <= 1 and M(u, psi) < inf."""
    a = symbol.a
    if abs(a) > 1.0 + tol:
        return Verdict(NO, f"|a| = {abs(a):.6g} > 1: no affine symbol with |a| > 1 is admissible", "bounded:dilation-exceeds-one")
    numeric = isinstance(weight, TaylorWeight)
    m = growth_sup(weight, symbol)
    if math.isinf(m):
        return Verdict(NO, "sup |u(z)| e^{(|psi z|^2-|z|^2)/2} = inf", "bounded:growth-sup-infinite")
    note = " (numeric probe only)" if numeric else ""
    return Verdict(YES, f"M(u, psi) = {m:.6g} is finite and |a| <= 1{note}", "bounded:growth-sup-finite")


def is_compact(weight: Weight, symbol: AffineSymbol, p: float, tol: float = TOL_EQ) -> Verdict:
    """Compact iff the M-integrand decays at infinity; closed test per weight kind.

    Non-vanishing exponential weights: compact iff |a| < 1 and
    |a2| < (1 - |a|^2)/2 (kernel weights are the a2 = 0 case).
    """
    a = symbol.a
    if unimodular(a, tol) or abs(a) > 1.0:
        return Verdict(NO, f"|a| = {abs(a):.6g}: decay of the growth integrand forces |a| < 1", "compact:needs-contractive-dilation")
    if isinstance(weight, KernelWeight):
        return Verdict(YES, "|a| < 1 with an exp-affine weight (quadratic coefficient 0 < (1-|a|^2)/2)", "compact:exp-quadratic-margin")
    if isinstance(weight, ExpQuadWeight):
        cap = (1.0 - abs(a) ** 2) / 2.0
        if abs(weight.a2) < cap:
            return Verdict(YES, f"|a2| = {abs(weight.a2):.6g} < (1-|a|^2)/2 = {cap:.6g}", "compact:exp-quadratic-margin")
        return Verdict(NO, f"|a2| = {abs(weight.a2):.6g} >= (1-|a|^2)/2 = {cap:.6g} (boundary excluded)", "compact:exp-quadratic-margin-violated")
    radii = np.linspace(5.0, 40.0, 8)
    prof = _shell_profile(weight, symbol, radii)
    decaying = all(y < x for x, y in zip(prof, prof[1:])) and prof[-1] < -9.2
    if decaying:
        return Verdict(YES, "growth integrand decays along growing shells (numeric probe only)", "compact:numeric-decay")
    return Verdict(NO, "no decay of the growth integrand detected (numeric probe only)", "compact:numeric-decay-absent")


def power_bounded(weight: Weight, symbol: AffineSymbol, p: float, tol: float = TOL_EQ) -> Verdict:
    """sup_n ||W^n|| < inf, decided from |u(0)| or |u(z0)|.

    * |a| = 1:  power bounded iff |u(0)| <= exp(-|b|^2/2) (then ||W^n|| =
      (|u(0)| e^{|b|^2/2})^n, so the threshold is exactly contraction);
    * |a| < 1 compact with non-vanishing weight: iff |u(z0)| <= 1;
    * |a| < 1 otherwise: |u(z0)| <= |a|^{2/p} suffices (p < inf),
      |u(z0)| > 1 rules it out, the gap stays undetermined;
    * |a| < 1, p = inf: iff |u(z0)| <= 1.
    """
    a, b = symbol.a, symbol.b
    if unimodular(a, tol):
        u0 = abs(_weight_at(weight, 0j))
        thresh = math.exp(-abs(b) ** 2 / 2.0)
        if u0 <= thresh * (1.0 + tol):
            return Verdict(
                YES,
                f"|u(0)| = {u0:.12g} <= e^(-|b|^2/2) = {thresh:.12g}: every ||W^n|| = (|u(0)|e^(|b|^2/2))^n <= 1",
                "power-bounded:unimodular-threshold",
            )
        return Verdict(
            NO,
            f"|u(0)| = {u0:.12g} > e^(-|b|^2/2) = {thresh:.12g}: ||W^n|| grows geometrically",
            "power-bounded:unimodular-threshold-exceeded",
        )
    z0 = symbol.fixed_point(tol)
    uz0 = abs(_weight_at(weight, z0))
    compact = is_compact(weight, symbol, p, tol)
    non_vanishing = isinstance(weight, (KernelWeight, ExpQuadWeight)) and _weight_at(weight, 0j) != 0
    if compact.is_yes and non_vanishing:
        if uz0 <= 1.0 + tol:
            return Verdict(YES, f"compact with |u(z0)| = {uz0:.12g} <= 1", "power-bounded:fixed-point-value")
        return Verdict(NO, f"compact with |u(z0)| = {uz0:.12g} > 1", "power-bounded:fixed-point-value-exceeded")
    if uz0 > 1.0 + tol:
        return Verdict(NO, f"|u(z0)| = {uz0:.12g} > 1 violates the necessary fixed-point bound", "power-bounded:fixed-point-necessary")
    if math.isinf(p):
        return Verdict(YES, f"|u(z0)| = {uz0:.12g} <= 1 is sufficient on F_inf", "power-bounded:fixed-point-value")
    if abs(a) == 0.0:
        return Verdict(
            UNDETERMINED,
            "a = 0 with p < inf on the non-compact path: the sufficient bound |a|^(2/p) = 0 is vacuous",
            "power-bounded:constant-symbol-gap",
        )
    suff = abs(a) ** (2.0 / p)
    if uz0 <= suff * (1.0 + tol):
        return Verdict(YES, f"|u(z0)| = {uz0:.12g} <= |a|^(2/p) = {suff:.12g}", "power-bounded:sufficient-margin")
    return Verdict(
        UNDETERMINED,
        f"|a|^(2/p) = {suff:.12g} < |u(z0)| = {uz0:.12g} <= 1: gap between the sufficient and necessary bounds",
        "power-bounded:gap",
    )


@dataclass(frozen=True)
class NormEstimate:
    """Either the exact value of ||W^n|| (lo == hi) or the sandwich
    M(u_n, psi^n) <= ||W^n|| <= |a^n|^{-2/p} M(u_n, psi^n)."""

    lo: float
    hi: float
    exact: bool
    note: str = ""

    @property
    def value(self) -> float:
        return self.lo


def _iterate_growth_sup(weight: Weight, symbol: AffineSymbol, n: int) -> float:
    form = weight_iterate_closed(weight, symbol, n)
    if form.regime != REGIME_P:
        s = GrowthExponent.from_iterate(form).sup_log()
        if s == -math.inf:
            return 0.0
        return math.exp(s) if s < 709.0 else math.inf
    # oracle-only pair: probe the product on a refined grid
    psi_n = symbol.iterate(n)

    def log_mag(z: np.ndarray) -> np.ndarray:
        vals = np.empty(z.shape, dtype=float)
        for i, point in enumerate(z.ravel()):
            try:
                prod = weight_iterate_product(weight, symbol, n, complex(point))
                vals.ravel()[i] = math.log(abs(prod)) if prod != 0 else -math.inf
            except OverflowError:
                vals.ravel()[i] = math.inf
        psi_z = psi_n.a * z + psi_n.b
        return vals + (np.abs(psi_z) ** 2 - np.abs(z) ** 2) / 2.0

    r = np.linspace(0.0, 40.0, 201)[1:]
    th = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    z = np.concatenate(([0j], np.outer(r, np.exp(1j * th)).ravel()))
    return float(np.exp(np.max(log_mag(z))))


def norm_closed(weight: Weight, symbol: AffineSymbol, n: int, p: float, tol: float = TOL_EQ) -> NormEstimate:
    """||W^n||: exact for |a| = 1 and for p = inf, a sandwich otherwise."""
    if n < 1:
        raise ValueError("norm estimates need n >= 1")
    a = symbol.a
    if unimodular(a, tol):
        u0 = abs(_weight_at(weight, 0j))
        if u0 == 0:
            return NormEstimate(0.0, 0.0, True, "zero weight")
        log_v = n * (math.log(u0) + abs(symbol.b) ** 2 / 2.0)
        v = math.exp(log_v) if log_v < 709.0 else math.inf
        return NormEstimate(v, v, True, "unimodular dilation: ||W^n|| = (|u(0)| e^(|b|^2/2))^n on every F_p")
    m_n = _iterate_growth_sup(weight, symbol, n)
    if math.isinf(p):
        return NormEstimate(m_n, m_n, True, "p = inf: ||W^n|| = M(u_n, psi^n)")
    if abs(a) == 0.0:
        return NormEstimate(m_n, math.inf, False, "a = 0: upper bound |a^n|^{-2/p} M is vacuous")
    hi = abs(a) ** (-2.0 * n / p) * m_n
    return NormEstimate(m_n, hi, False, "sandwich M(u_n, psi^n) <= ||W^n|| <= |a^n|^{-2/p} M(u_n, psi^n)")


@dataclass(frozen=True)
class FiniteSpectrum:
    points: tuple

    kind = "finite"


@dataclass(frozen=True)
class GeometricWithZero:
    """{0} united with {base * ratio^m : m >= 0}; needs |ratio| < 1."""

    base: complex
    ratio: complex

    kind = "geometric-with-zero"

    def __post_init__(self):
        if abs(self.ratio) >= 1.0:
            raise ValueError("geometric spectra need |ratio| < 1")

    def leading(self, count: int) -> tuple:
        return tuple(self.base * self.ratio**m for m in range(count))


@dataclass(frozen=True)
class CircleSpectrum:
    radius: float

    kind = "circle"

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("circle radius must be >= 0")


SpectrumDescriptor = object  # union of the three dataclasses above


def root_of_unity_order(a: complex, max_order: int = MAX_ROOT_ORDER, tol: float = ROOT_TOL) -> Optional[int]:
    """Smallest N <= max_order with |a^N - 1| <= tol, or None."""
    if not unimodular(a, 1e-9):
        raise ValueError(f"root-of-unity search needs |a| = 1, got |a| = {abs(a)}")
    power = 1.0 + 0j
    for k in range(1, max_order + 1):
        power *= a
        if abs(power - 1.0) <= tol:
            return k
    return None


def spectrum(weight: Weight, symbol: AffineSymbol, max_order: int = MAX_ROOT_ORDER, tol: float = TOL_EQ):
    """Spectrum descriptor for a bounded W; compact, unimodular and
    multiplication cases are covered, the |a| < 1 non-compact case is not."""
    a, b = symbol.a, symbol.b
    if close(a, 1.0, tol):
        u0 = _weight_at(weight, 0j)
        if abs(b) <= tol:
            return FiniteSpectrum((u0,))
        return CircleSpectrum(abs(u0) * math.exp(abs(b) ** 2 / 2.0))
    if unimodular(a, tol):
        u0 = _weight_at(weight, 0j)
        lead = u0 * cmath.exp(a * abs(b) ** 2 / (a - 1.0))
        order = root_of_unity_order(a, max_order)
        if order is not None:
            return FiniteSpectrum(tuple(lead * a**m for m in range(order)))
        return CircleSpectrum(abs(u0) * math.exp(abs(b) ** 2 / 2.0))
    if not is_compact(weight, symbol, 2.0, tol).is_yes:
        raise ValueError("spectrum for |a| < 1 is only described in the compact case")
    z0 = symbol.fixed_point(tol)
    uz0 = _weight_at(weight, z0)
    if abs(a) <= tol:
        return FiniteSpectrum((0j, _weight_at(weight, b)))
    return GeometricWithZero(base=uz0, ratio=a)


def spectrum_points(desc, count: int = 8) -> tuple:
    """Explicit points for a report: all of a finite spectrum (capped), the
    leading geometric points, nothing for a circle."""
    if isinstance(desc, FiniteSpectrum):
        return tuple(desc.points[:count])
    if isinstance(desc, GeometricWithZero):
        return desc.leading(count)
    return ()


@dataclass(frozen=True)
class LimitForm:
    """Limit of the averages (1/n) sum W^k when one exists and is identified."""

    kind: str  # zero | identity | rank-one | periodic-average | eval-at-zero | unknown
    weight: Optional[ExpQuadWeight] = None
    z0: Optional[complex] = None
    period: Optional[int] = None
    note: str = ""


@dataclass(frozen=True)
class ErgodicVerdict:
    mean: Verdict
    uniform: Verdict
    limit: LimitForm


def _lcm(x: int, y: int) -> int:
    return x * y // math.gcd(x, y)


def ergodicity(
    weight: Weight,
    symbol: AffineSymbol,
    p: float,
    max_order: int = MAX_ROOT_ORDER,
    tol: float = TOL_EQ,
) -> ErgodicVerdict:
    """Mean / uniform-mean ergodicity decision table (first matching rule wins).

    1. multiplication operator (a = 1, b = 0);
    2. compact + power bounded + non-vanishing weight: uniformly mean ergodic,
       rank-one limit when u(z0) = 1;
    3. |a| = 1 strictly below the power-bounded threshold: averages -> 0 in norm;
    4. rotation with both u(0) and a roots of unity: periodic averages;
    5. rotation, power bounded, u(0) a^m never 1: mean ergodic with zero
       (or eval-at-zero) limit for p < inf, never uniformly, not mean ergodic
       on F_inf;
    6. unimodular equality case with u(z0) = 1, a not a root of unity: spectrum
       accumulates at 1, so never uniformly mean ergodic; mean ergodicity from
       reflexivity for 1 < p < inf;
    7. anything else: undetermined.
    """
    a, b = symbol.a, symbol.b
    u0 = _weight_at(weight, 0j)
    pb = power_bounded(weight, symbol, p, tol)

    # rule 1: multiplication by the constant u(0)
    if close(a, 1.0, tol) and abs(b) <= tol:
        if abs(u0) <= 1.0 + tol:
            if close(u0, 1.0, tol):
                limit = LimitForm("identity", note="u(0) = 1: the operator is the identity")
            else:
                limit = LimitForm("zero", note="averages of u(0)^k vanish")
            v = Verdict(YES, f"multiplication by u(0) = {u0:.12g} with |u(0)| <= 1", "ergodic:multiplication")
            return ErgodicVerdict(mean=v, uniform=v, limit=limit)
        v = Verdict(NO, f"multiplication by u(0) with |u(0)| = {abs(u0):.12g} > 1", "ergodic:multiplication-unbounded")
        return ErgodicVerdict(mean=v, uniform=v, limit=LimitForm("unknown", note="||W^n||/n diverges"))

    # rule 2: compact + power bounded
    compact = is_compact(weight, symbol, p, tol)
    non_vanishing = isinstance(weight, (KernelWeight, ExpQuadWeight)) and u0 != 0
    if compact.is_yes and pb.is_yes and non_vanishing:
        v = Verdict(YES, "compact and power bounded: the averages converge in operator norm", "ergodic:compact-uniform")
        z0 = symbol.fixed_point()
        uz0 = _weight_at(weight, z0)
        limit = LimitForm("unknown", note=f"u(z0) = {uz0:.12g} != 1: limit not identified")
        if abs(uz0 - 1.0) <= 1e-10:
            try:
                u_inf = u_infinity(weight, symbol)
                limit = LimitForm("rank-one", weight=u_inf, z0=z0, note="averages -> f(z0) * u_inf")
            except ValueError as exc:
                limit = LimitForm("unknown", note=f"u(z0) = 1 but no closed limit: {exc}")
        return ErgodicVerdict(mean=v, uniform=v, limit=limit)

    if unimodular(a, tol):
        thresh = math.exp(-abs(b) ** 2 / 2.0)
        mod_u0 = abs(u0)

        # rule 3: strictly inside the power-bounded region
        if mod_u0 < thresh * (1.0 - tol):
            v = Verdict(
                YES,
                f"|u(0)| e^(|b|^2/2) = {mod_u0 / thresh:.12g} < 1: ||averages|| <= geometric tail / n -> 0",
                "ergodic:subthreshold-decay",
            )
            return ErgodicVerdict(mean=v, uniform=v, limit=LimitForm("zero"))

        ord_a = root_of_unity_order(a, max_order)

        # rules 4 and 5 concern rotations (b = 0)
        if abs(b) <= tol and pb.is_yes:
            ord_u0 = root_of_unity_order(u0, max_order) if abs(mod_u0 - 1.0) <= 1e-9 else None
            if ord_a is not None and ord_u0 is not None:
                period = _lcm(ord_a, ord_u0)
                v = Verdict(
                    YES,
                    f"u(0) and a are roots of unity: W^n is periodic with period {period}",
                    "ergodic:periodic-rotation",
                )
                return ErgodicVerdict(mean=v, uniform=v, limit=LimitForm("periodic-average", period=period))
            hits_one = False
            power = u0
            for _ in range(max_order):
                power *= a
                if abs(power - 1.0) <= ROOT_TOL:
                    hits_one = True
                    break
            if not hits_one:
                u0_is_one = close(u0, 1.0, tol)
                uniform = Verdict(
                    NO,
                    f"rotation with u(0) a^m != 1 for all m <= {max_order}: monomial averages decay only like 1/(n |1 - a^m u(0)|)",
                    "ergodic:rotation-no-uniform",
                )
                if math.isinf(p):
                    mean = Verdict(
                        NO,
                        "power bounded but not uniformly mean ergodic on a Grothendieck space with the Dunford-Pettis property",
                        "ergodic:sup-space-obstruction",
                    )
                    return ErgodicVerdict(mean=mean, uniform=uniform, limit=LimitForm("unknown", note="no limit on F_inf"))
                if u0_is_one and ord_a is None:
                    mean = Verdict(
                        YES,
                        "u(0) = 1, a not a root of unity: averages converge pointwise to f(0)",
                        "ergodic:rotation-eval-at-zero",
                    )
                    return ErgodicVerdict(mean=mean, uniform=uniform, limit=LimitForm("eval-at-zero"))
                mean = Verdict(
                    YES,
                    "monomial averages vanish and polynomials are dense: averages -> 0 pointwise",
                    "ergodic:rotation-monomial-decay",
                )
                return ErgodicVerdict(mean=mean, uniform=uniform, limit=LimitForm("zero"))

        # rule 6: equality case with u(z0) = 1 and dense rotation orbit
        if (
            ord_a is None
            and abs(mod_u0 - thresh) <= tol * (1.0 + thresh)
            and not close(a, 1.0, tol)
        ):
            z0 = symbol.fixed_point(tol)
            uz0 = _weight_at(weight, z0)
            if abs(uz0 - 1.0) <= 1e-10:
                uniform = Verdict(
                    NO,
                    "the spectrum lies on the unit circle and accumulates at 1: the averages cannot converge in norm",
                    "ergodic:spectral-accumulation",
                )
                if 1.0 < p < math.inf:
                    mean = Verdict(YES, "power bounded on a reflexive space", "ergodic:reflexive-mean")
                else:
                    mean = Verdict(UNDETERMINED, "p in {1, inf}: no reflexivity argument available", "ergodic:uncovered")
                return ErgodicVerdict(mean=mean, uniform=uniform, limit=LimitForm("unknown"))

    # rule 7
    v = Verdict(UNDETERMINED, "configuration not covered by the decision table", "ergodic:uncovered")
    return ErgodicVerdict(mean=v, uniform=v, limit=LimitForm("unknown"))
