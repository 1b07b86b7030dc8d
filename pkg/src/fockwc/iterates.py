"""Closed forms for the operator iterates W^n f = u_n * (f o psi^n).

The iterate weight u_n(z) = prod_{j=0}^{n-1} u(psi^j(z)) collapses to an
exponential of a polynomial in three parameter regimes:

* ``A1``  -- a = 1 with the forced kernel weight:
             u_n = u(0)**n * exp(-|b|^2 n(n-1)/2) * exp(-n*conj(b)*z);
* ``U``   -- |a| = 1, a != 1 with the forced kernel weight:
             u_n = u(0)**n * exp(h_n(z)) with h_n affine in z;
* ``C``   -- |a| < 1 with an exp-quadratic weight:
             u_n = exp(S_n(z)) with S_n quadratic in z.

Everything else is regime ``P``: no closed form, evaluation falls back to the
literal product, and downstream consumers treat the pair as oracle-only.

The literal product :func:`weight_iterate_product` is the oracle all closed
forms are cross-checked against.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import (
    TOL_EQ,
    AffineSymbol,
    ExpQuadWeight,
    KernelWeight,
    TaylorSeries,
    Weight,
    close,
    exp_checked,
    forced_kernel_index,
    unimodular,
)

REGIME_A1 = "A1"
REGIME_U = "U"
REGIME_C = "C"
REGIME_P = "P"


def regime_of(weight: Weight, symbol: AffineSymbol, tol: float = TOL_EQ) -> str:
    """Closed-form regime of the pair (weight, symbol); see module docstring."""
    if isinstance(weight, KernelWeight) and unimodular(symbol.a, tol):
        return REGIME_A1 if close(symbol.a, 1.0, tol) else REGIME_U
    if isinstance(weight, ExpQuadWeight) and abs(symbol.a) < 1.0 - tol:
        return REGIME_C
    return REGIME_P


@dataclass(frozen=True)
class IterateForm:
    """Closed form of (u_n, psi^n).

    For regimes A1/U/C the weight iterate is
        u_n(z) = exp(scalar_log + const + linear*z + quadratic*z**2)
    where ``scalar_log`` is the polar logarithm n*(log|u(0)| + i*arg u(0)) of
    the scalar factor u(0)**n (kept in log form so huge/tiny magnitudes do not
    overflow before they recombine) and ``const`` is the remaining constant of
    the exponent.  ``kernel_index`` is the w of the kernel factor K_w when the
    exponent is affine.  Regime P stores no payload; evaluation delegates to
    the product oracle.
    """

    n: int
    regime: str
    weight: Weight
    symbol: AffineSymbol
    symbol_n: AffineSymbol
    scalar_log: complex = 0j
    const: complex = 0j
    linear: complex = 0j
    quadratic: complex = 0j
    kernel_index: complex | None = None

    @property
    def scalar(self) -> complex:
        """The factor u(0)**n (may overflow for extreme inputs; see scalar_log)."""
        return cmath.exp(self.scalar_log)

    def exponent(self, z: complex) -> complex:
        return self.scalar_log + self.const + (self.linear + self.quadratic * z) * z

    def __call__(self, z: complex) -> complex:
        if self.regime == REGIME_P:
            return weight_iterate_product(self.weight, self.symbol, self.n, z)
        return exp_checked(self.exponent(z), f"iterate exponent at z = {z}")

    def taylor(self, degree: int) -> TaylorSeries:
        if self.regime == REGIME_P:
            raise ValueError("regime P has no closed form")
        return TaylorSeries.exp_quadratic(
            self.scalar_log + self.const, self.linear, self.quadratic, degree
        )


def weight_iterate_product(weight: Weight, symbol: AffineSymbol, n: int, z: complex) -> complex:
    """Literal n-factor product u(z) u(psi(z)) ... u(psi^{n-1}(z)).

    This is the oracle the closed forms are tested against.  Overflow is
    reported (OverflowError), never masked.
    """
    if n < 0:
        raise ValueError("iterate count must be >= 0")
    out = 1.0 + 0j
    point = complex(z)
    for _ in range(n):
        out *= weight(point)  # may raise OverflowError from cmath.exp
        point = symbol(point)
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise OverflowError(f"iterate product overflowed at n={n}, z={z}")
    return out


def weight_iterate_closed(
    weight: Weight, symbol: AffineSymbol, n: int, tol: float = TOL_EQ
) -> IterateForm:
    """Closed form of the n-th iterate weight; regime chosen from (|a|, weight kind).

    For |a| = 1 a KernelWeight must carry the forced index w = -conj(a)*b;
    anything else cannot come from a bounded operator and is rejected.
    """
    if n < 1:
        raise ValueError("closed iterate forms need n >= 1")
    a, b = symbol.a, symbol.b
    reg = regime_of(weight, symbol, tol)
    psi_n = symbol.iterate(n)

    if reg in (REGIME_A1, REGIME_U):
        forced = forced_kernel_index(symbol)
        if not close(weight.w, forced, max(tol, 1e-9)):
            raise ValueError(
                "for |a| = 1 boundedness forces u(z) = u(0)*exp(conj(w)*z) "
                f"with w = -conj(a)*b = {forced}; got w = {weight.w}"
            )
        u0 = weight.u0
        if u0 == 0:
            scalar_log = complex(-math.inf, 0.0)
        else:
            scalar_log = n * complex(math.log(abs(u0)), cmath.phase(u0))

    if reg == REGIME_A1:
        return IterateForm(
            n=n,
            regime=reg,
            weight=weight,
            symbol=symbol,
            symbol_n=psi_n,
            scalar_log=scalar_log,
            const=complex(-abs(b) ** 2 * n * (n - 1) / 2.0, 0.0),
            linear=-n * b.conjugate(),
            kernel_index=-n * b,
        )

    if reg == REGIME_U:
        an = a**n
        geo = (1.0 - an) / (1.0 - a)
        const = -a * abs(b) ** 2 * n / (1.0 - a) + a * abs(b) ** 2 * (1.0 - an) / (1.0 - a) ** 2
        linear = -a * b.conjugate() * geo
        return IterateForm(
            n=n,
            regime=reg,
            weight=weight,
            symbol=symbol,
            symbol_n=psi_n,
            scalar_log=scalar_log,
            const=const,
            linear=linear,
            kernel_index=linear.conjugate(),
        )

    if reg == REGIME_C:
        const, linear, quadratic = _exp_quad_sum(weight, a, b, n)
        return IterateForm(
            n=n,
            regime=reg,
            weight=weight,
            symbol=symbol,
            symbol_n=psi_n,
            const=const,
            linear=linear,
            quadratic=quadratic,
        )

    return IterateForm(n=n, regime=REGIME_P, weight=weight, symbol=symbol, symbol_n=psi_n)


def _exp_quad_sum(weight: ExpQuadWeight, a: complex, b: complex, n: int):
    """Coefficients of S_n(z) = sum_{j<n} (a0 + a1 psi^j(z) + a2 psi^j(z)^2)."""
    a0, a1, a2 = weight.a0, weight.a1, weight.a2
    an = a**n
    a2n = a**(2 * n)
    g1 = (1.0 - an) / (1.0 - a)            # sum a^j
    g2 = (1.0 - a2n) / (1.0 - a * a)       # sum a^(2j)
    const = (
        n * a0
        + a1 * b * n / (1.0 - a)
        - a1 * b * g1 / (1.0 - a)
        + a2 * b * b / (1.0 - a) ** 2 * (n - 2.0 * g1 + g2)
    )
    linear = a1 * g1 + 2.0 * a2 * b / (1.0 - a) * (g1 - g2)
    quadratic = a2 * g2
    return const, linear, quadratic


@dataclass(frozen=True)
class IterateCoefficients:
    """Growth data of M(u_n, psi^n) = e^c * sup exp(Re(t z) + Re(p z^2) - q |z|^2)."""

    c: float
    t: complex
    p: complex
    q: float


def iterate_coefficients(
    weight: Weight, symbol: AffineSymbol, n: int, tol: float = TOL_EQ
) -> IterateCoefficients:
    """The (c_n, t_n, p_n, q_n) quadruple for regime C.

    q_n = (1 - |a|^{2n})/2 and p_n = a2 (1 - a^{2n})/(1 - a^2) exactly; t_n and
    c_n combine the exponent of u_n with the expansion of |psi^n(z)|^2 - |z|^2,
    so that the displayed identity for M(u_n, psi^n) holds pointwise.
    """
    if regime_of(weight, symbol, tol) != REGIME_C:
        raise ValueError("iterate coefficients are defined for |a| < 1 with an exp-quadratic weight")
    a, b = symbol.a, symbol.b
    const, linear, quadratic = _exp_quad_sum(weight, a, b, n)
    an = a**n
    b_n = b * (1.0 - an) / (1.0 - a)
    c = (const).real + abs(b_n) ** 2 / 2.0
    t = linear + an * b_n.conjugate()
    q = (1.0 - abs(a) ** (2 * n)) / 2.0
    return IterateCoefficients(c=c, t=t, p=quadratic, q=q)


def u_infinity(weight: Weight, symbol: AffineSymbol, tol: float = 1e-10) -> ExpQuadWeight:
    """Limit weight u_inf(z) = prod_{j>=0} u(psi^j(z)) for |a| < 1.

    Requires u(z0) = 1 at the fixed point z0 AND the exponent branch
    a0 + a1 z0 + a2 z0^2 = 0 (not a nonzero multiple of 2*pi*i): the n-linear
    terms of the iterate exponent then cancel and the limit is read off by
    substituting a^n -> 0 in the remaining terms.
    """
    a, b = symbol.a, symbol.b
    if abs(a) >= 1.0 - TOL_EQ:
        raise ValueError("the infinite product needs |a| < 1")
    if isinstance(weight, KernelWeight):
        weight = weight.as_exp_quadratic()
    if not isinstance(weight, ExpQuadWeight):
        raise ValueError("the limit weight has a closed form only for exp-quadratic weights")
    z0 = symbol.fixed_point()
    s0 = weight.exponent(z0)
    if abs(cmath.exp(s0) - 1.0) > tol:
        raise ValueError(f"infinite product diverges: u(z0) = {cmath.exp(s0)} != 1")
    if abs(s0) > tol:
        raise ValueError(
            "branch mismatch: the exponent at the fixed point is a nonzero "
            f"multiple of 2*pi*i ({s0}); the closed form needs exactly 0"
        )
    a0, a1, a2 = weight.a0, weight.a1, weight.a2
    g1 = 1.0 / (1.0 - a)
    g2 = 1.0 / (1.0 - a * a)
    const = -a1 * b * g1 / (1.0 - a) + a2 * b * b / (1.0 - a) ** 2 * (g2 - 2.0 * g1)
    linear = a1 * g1 + 2.0 * a2 * b / (1.0 - a) * (g1 - g2)
    quadratic = a2 * g2
    return ExpQuadWeight(const, linear, quadratic)


def ratio_bound_margin(a: complex, n: int) -> float:
    """Margin |1-a^2|/(1-|a|^2) - |1-a^{2n}|/(1-|a|^{2n}); nonnegative for |a| < 1.

    This is the geometric-sum inequality that keeps |p_n| < q_n for every n
    once |a2| < (1-|a|^2)/2 holds at n = 1.
    """
    a = complex(a)
    if abs(a) >= 1.0:
        raise ValueError("the ratio bound needs |a| < 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    lhs = abs(1.0 - a * a) / (1.0 - abs(a) ** 2)
    rhs = abs(1.0 - a ** (2 * n)) / (1.0 - abs(a) ** (2 * n))
    return lhs - rhs
