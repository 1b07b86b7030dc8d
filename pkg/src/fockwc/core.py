"""Value types for weighted composition operators W f = u * (f o psi) on Fock spaces.

The Fock space F_p consists of entire functions with finite Gaussian-weighted
p-norm.  A bounded weighted composition operator forces the symbol to be affine,
psi(z) = a*z + b with |a| <= 1, and forces the weight u into one of two closed
shapes depending on |a|:

* |a| = 1:  u(z) = u(0) * exp(conj(w) * z) with kernel index w = -conj(a)*b
  (represented here by :class:`KernelWeight`, kept as its own variant so the
  unimodular-dilation logic never needs a complex logarithm of u(0));
* |a| < 1, compact case:  u(z) = exp(a0 + a1*z + a2*z**2)
  (represented by :class:`ExpQuadWeight`).

Generic weights are carried as truncated Taylor series (:class:`TaylorWeight`)
and only admit numeric treatment downstream.

All types are immutable value objects; parameters are validated to be finite at
construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

#: Tolerance for the parameter dichotomies ("a = 1", "|a| = 1", ...).  The
#: classification splits on exact conditions while user input is
#: finite-precision; callers may override (0.0 restores exact comparisons).
TOL_EQ = 1e-12

#: Saturation degree for Taylor arithmetic; operations that would exceed it
#: truncate and record the fact in the ``truncated`` flag.
DEFAULT_DEGREE = 128


def _as_complex(value) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex parameter: {value!r}")
    return z


def close(x: complex, y: complex, tol: float = TOL_EQ) -> bool:
    """Tolerant equality for complex parameters."""
    return abs(x - y) <= tol * (1.0 + abs(x) + abs(y))


def exp_checked(exponent: complex, what: str = "exponent") -> complex:
    """exp() that reports overflow as a range error instead of returning inf.

    A -inf real part is a legitimate underflow to 0 (and then the phase is
    irrelevant); +inf or nan means the computation genuinely overflowed.
    """
    if math.isnan(exponent.real) or exponent.real == math.inf:
        raise OverflowError(f"math range error: {what} overflowed")
    if exponent.real == -math.inf:
        return 0j
    if not math.isfinite(exponent.imag):
        raise OverflowError(f"math range error: {what} phase overflowed")
    return cmath.exp(exponent)


def unimodular(a: complex, tol: float = TOL_EQ) -> bool:
    return abs(abs(a) - 1.0) <= tol


@dataclass(frozen=True)
class AffineSymbol:
    """The affine map z -> a*z + b."""

    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", _as_complex(self.a))
        object.__setattr__(self, "b", _as_complex(self.b))

    def __call__(self, z: complex) -> complex:
        return self.a * z + self.b

    def iterate(self, n: int) -> "AffineSymbol":
        """n-fold composition: (a**n, b*(1-a**n)/(1-a)); n = 0 is the identity."""
        if n < 0:
            raise ValueError("iterate count must be >= 0")
        if n == 0:
            return AffineSymbol(1.0, 0.0)
        if close(self.a, 1.0):
            return AffineSymbol(self.a, n * self.b)
        an = self.a**n
        return AffineSymbol(an, self.b * (1.0 - an) / (1.0 - self.a))

    def fixed_point(self, tol: float = TOL_EQ) -> complex:
        """Solve psi(z0) = z0.

        For a = 1, b != 0 there is no finite fixed point and a ValueError is
        raised.  For a = 1, b = 0 every point is fixed; the distinguished value
        0 is returned (see :meth:`every_point_fixed`).
        """
        if close(self.a, 1.0, tol):
            if abs(self.b) <= tol:
                return 0j
            raise ValueError("a = 1 with b != 0: no finite fixed point")
        return self.b / (1.0 - self.a)

    def every_point_fixed(self, tol: float = TOL_EQ) -> bool:
        return close(self.a, 1.0, tol) and abs(self.b) <= tol


@dataclass(frozen=True)
class TaylorSeries:
    """Truncated power series sum(coeffs[k] * z**k).

    ``truncated`` records that the series is a cut-off of something longer, so
    radius-reliability checks downstream know the tail is not exactly zero.
    """

    coeffs: tuple
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_as_complex(c) for c in self.coeffs))
        if not self.coeffs:
            object.__setattr__(self, "coeffs", (0j,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "TaylorSeries") -> "TaylorSeries":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return TaylorSeries(
            tuple(x + y for x, y in zip(a, b)),
            truncated=self.truncated or other.truncated,
        )

    def scale(self, c: complex) -> "TaylorSeries":
        c = _as_complex(c)
        return TaylorSeries(tuple(c * x for x in self.coeffs), truncated=self.truncated)

    def mul(self, other: "TaylorSeries", degree: int | None = None) -> "TaylorSeries":
        """Cauchy product, exact on all retained degrees.

        The result keeps degrees up to min(degree, deg(self) + deg(other));
        saturating at the cap sets the truncated flag.
        """
        cap = DEFAULT_DEGREE if degree is None else degree
        full = self.degree + other.degree
        out_deg = min(cap, full)
        out = [0j] * (out_deg + 1)
        for i, ci in enumerate(self.coeffs):
            if i > out_deg or ci == 0:
                continue
            for j, cj in enumerate(other.coeffs):
                if i + j > out_deg:
                    break
                out[i + j] += ci * cj
        return TaylorSeries(
            tuple(out),
            truncated=self.truncated or other.truncated or full > cap,
        )

    def __mul__(self, other: "TaylorSeries") -> "TaylorSeries":
        return self.mul(other)

    def compose_affine(self, a: complex, b: complex) -> "TaylorSeries":
        """Coefficients of f(a*z + b); degree is preserved exactly.

        Horner in polynomial space: the binomial combinatorics of
        (a*z + b)**n are produced implicitly and exactly.
        """
        a = _as_complex(a)
        b = _as_complex(b)
        acc = [self.coeffs[-1]]
        for c in reversed(self.coeffs[:-1]):
            nxt = [0j] * (len(acc) + 1)
            for k, x in enumerate(acc):  # acc * (a z + b)
                nxt[k] += x * b
                nxt[k + 1] += x * a
            nxt[0] += c
            acc = nxt
        return TaylorSeries(tuple(acc), truncated=self.truncated)

    def drop_top(self) -> "TaylorSeries":
        if len(self.coeffs) == 1:
            return TaylorSeries((0j,), truncated=self.truncated)
        return TaylorSeries(self.coeffs[:-1], truncated=True)

    @staticmethod
    def kernel(w: complex, degree: int) -> "TaylorSeries":
        """Truncation of exp(conj(w) * z)."""
        w = _as_complex(w)
        coeffs = [1.0 + 0j]
        for n in range(1, degree + 1):
            coeffs.append(coeffs[-1] * w.conjugate() / n)
        return TaylorSeries(tuple(coeffs), truncated=True)

    @staticmethod
    def exp_quadratic(a0: complex, a1: complex, a2: complex, degree: int) -> "TaylorSeries":
        """Truncation of exp(a0 + a1*z + a2*z**2).

        Uses the derivative recurrence (m+1) c_{m+1} = a1 c_m + 2 a2 c_{m-1};
        coefficients of an entire function never overflow in it.
        """
        a0, a1, a2 = _as_complex(a0), _as_complex(a1), _as_complex(a2)
        coeffs = [cmath.exp(a0)]
        if degree >= 1:
            coeffs.append(a1 * coeffs[0])
        for m in range(1, degree):
            coeffs.append((a1 * coeffs[m] + 2.0 * a2 * coeffs[m - 1]) / (m + 1))
        return TaylorSeries(tuple(coeffs), truncated=True)


@dataclass(frozen=True)
class KernelWeight:
    """u(z) = u0 * exp(conj(w) * z): a scalar multiple of the reproducing kernel K_w."""

    u0: complex
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "u0", _as_complex(self.u0))
        object.__setattr__(self, "w", _as_complex(self.w))

    def __call__(self, z: complex) -> complex:
        return self.u0 * cmath.exp(self.w.conjugate() * z)

    def taylor(self, degree: int) -> TaylorSeries:
        return TaylorSeries.kernel(self.w, degree).scale(self.u0)

    def as_exp_quadratic(self) -> "ExpQuadWeight":
        """Rewrite as exp(a0 + a1 z) using the principal branch of log u0."""
        if self.u0 == 0:
            raise ValueError("zero weight has no exponential form")
        return ExpQuadWeight(cmath.log(self.u0), self.w.conjugate(), 0.0)


@dataclass(frozen=True)
class ExpQuadWeight:
    """u(z) = exp(a0 + a1*z + a2*z**2); non-vanishing everywhere."""

    a0: complex
    a1: complex
    a2: complex

    def __post_init__(self):
        for name in ("a0", "a1", "a2"):
            object.__setattr__(self, name, _as_complex(getattr(self, name)))

    def exponent(self, z: complex) -> complex:
        return self.a0 + self.a1 * z + self.a2 * z * z

    def __call__(self, z: complex) -> complex:
        return exp_checked(self.exponent(z), f"weight exponent at z = {z}")

    def taylor(self, degree: int) -> TaylorSeries:
        return TaylorSeries.exp_quadratic(self.a0, self.a1, self.a2, degree)


@dataclass(frozen=True)
class TaylorWeight:
    """Generic weight given by Taylor coefficients at 0 (numeric-only paths)."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_as_complex(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("TaylorWeight needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        if not (math.isfinite(acc.real) and math.isfinite(acc.imag)):
            raise OverflowError(f"math range error: weight value overflowed at z = {z}")
        return acc

    def taylor(self, degree: int) -> TaylorSeries:
        coeffs = self.coeffs[: degree + 1]
        coeffs = coeffs + (0j,) * (degree + 1 - len(coeffs))
        return TaylorSeries(coeffs, truncated=degree < self.degree)


Weight = Union[KernelWeight, ExpQuadWeight, TaylorWeight]


def parse_p(p) -> float:
    """Fock exponent: a float in [1, inf]; the string "inf" denotes infinity."""
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity"):
            return math.inf
        p = float(p)
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"Fock exponent must satisfy p >= 1, got {p}")
    return p


def forced_kernel_index(symbol: AffineSymbol) -> complex:
    """Kernel index -conj(a)*b that boundedness forces on u when |a| = 1."""
    return -symbol.a.conjugate() * symbol.b
