"""Truncated matrix oracle on F_2.

The operator W f = u * (f o psi) is compressed onto span{e_n : n < N} with the
orthonormal monomial basis e_n(z) = z^n / sqrt(n!).  Column n holds the basis
coefficients of W e_n: with u * (a z + b)^n = sum_m d_m z^m,

    M[m][n] = d_m * sqrt(m!) / sqrt(n!).

All factorial rescaling happens in log-gamma space: sqrt(m!) alone overflows
doubles past m = 170 while the matrix entries themselves stay moderate.

The compression is evidence, not proof: operator norms computed here are
norms of an N-dimensional compression (never larger than the true norm) and
eigenvalues are those of the compression.
"""

from __future__ import annotations

import math
from math import lgamma

import numpy as np

from .core import AffineSymbol
from .iterates import IterateForm, u_infinity

_PHASE_SAFE = 1e-300


class PowerIterationError(RuntimeError):
    """Raised when the norm iteration stalls; carries the last iterate."""

    def __init__(self, message: str, last_estimate: float, last_vector: np.ndarray):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.last_vector = last_vector


def _log_abs_phase(values: np.ndarray):
    mag = np.abs(values)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log(mag)
        safe = np.where(mag > _PHASE_SAFE, mag, 1.0)
        phases = np.where(mag > _PHASE_SAFE, values / safe, 0.0)
    return logs, phases


def _composition_block(symbol: AffineSymbol, n_dim: int) -> np.ndarray:
    """G[k, n] = coefficient of e_k in (a z + b)^n / sqrt(n!)."""
    a, b = symbol.a, symbol.b
    lg = np.array([lgamma(m + 1) for m in range(n_dim)])
    k = np.arange(n_dim)[:, None]
    n = np.arange(n_dim)[None, :]
    keep = k <= n
    if a == 0:
        g = np.zeros((n_dim, n_dim), dtype=complex)
        if b == 0:
            g[0, 0] = 1.0
        else:
            log_b, ph_b = math.log(abs(b)), b / abs(b)
            col = np.arange(n_dim)
            g[0, :] = np.exp(col * log_b - 0.5 * lg) * ph_b**col
            g[0, 0] = 1.0
        return g
    log_a = math.log(abs(a))
    ph_a = a / abs(a)
    if b == 0:
        g = np.zeros((n_dim, n_dim), dtype=complex)
        diag = np.exp(np.arange(n_dim) * log_a) * ph_a ** np.arange(n_dim)
        np.fill_diagonal(g, diag)
        return g
    log_b, ph_b = math.log(abs(b)), b / abs(b)
    with np.errstate(invalid="ignore"):
        log_mag = (
            0.5 * lg[n] - 0.5 * lg[k] - np.vectorize(lgamma)(np.where(keep, n - k, 0) + 1.0)
            + k * log_a
            + (n - k) * log_b
        )
    phase = ph_a**k * ph_b ** np.where(keep, n - k, 0)
    g = np.where(keep, np.exp(log_mag) * phase, 0.0)
    return g.astype(complex)


def _weight_block(weight, n_dim: int) -> np.ndarray:
    """U[m, j] = u_{m-j} * sqrt(m!/j!) for the multiplication by u."""
    coeffs = np.asarray(weight.taylor(n_dim - 1).coeffs, dtype=complex)
    logs, phases = _log_abs_phase(coeffs)
    lg = np.array([lgamma(m + 1) for m in range(n_dim)])
    m = np.arange(n_dim)[:, None]
    j = np.arange(n_dim)[None, :]
    d = m - j
    keep = d >= 0
    d_safe = np.where(keep, d, 0)
    log_mag = logs[d_safe] + 0.5 * (lg[m] - lg[j])
    with np.errstate(over="ignore"):
        block = np.where(keep, np.exp(log_mag) * phases[d_safe], 0.0)
    return block.astype(complex)


def build_matrix(weight, symbol: AffineSymbol, n_dim: int) -> np.ndarray:
    """N x N compression of W on the normalized monomial basis.

    ``weight`` is anything with a ``taylor(degree)`` method (the weight
    variants and closed iterate forms all qualify).
    """
    if n_dim < 1 or n_dim > 512:
        raise ValueError("truncation dimension must be in 1..512")
    if isinstance(weight, IterateForm):
        symbol = weight.symbol_n
    g = _composition_block(symbol, n_dim)
    u = _weight_block(weight, n_dim)
    mat = u @ g
    if not np.all(np.isfinite(mat)):
        raise OverflowError("matrix entries overflowed; reduce N or the weight scale")
    return mat


def taylor_to_basis(coeffs, n_dim: int) -> np.ndarray:
    """Taylor coefficients -> normalized-basis coefficients c_m sqrt(m!)."""
    out = np.zeros(n_dim, dtype=complex)
    for m, c in enumerate(coeffs[:n_dim]):
        if c != 0:
            out[m] = c * math.exp(0.5 * lgamma(m + 1))
    return out


def basis_eval(vec: np.ndarray, z: complex) -> complex:
    """Evaluate sum vec[m] e_m(z) = sum vec[m] z^m / sqrt(m!)."""
    total = 0j
    for m, c in enumerate(vec):
        if c != 0:
            total += c * z**m * math.exp(-0.5 * lgamma(m + 1))
    return total


def op_norm2(mat: np.ndarray, tol: float = 1e-9, max_iter: int = 10_000) -> float:
    """Largest singular value by power iteration on M* M.

    Deterministic all-ones start; converges when the estimate moves by less
    than ``tol`` relatively.  Raises PowerIterationError with the last
    iterate if the loop fails to settle.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = mat.shape[0]
    v = np.ones(n, dtype=complex) / math.sqrt(n)
    ah = mat.conj().T
    sigma = 0.0
    for _ in range(max_iter):
        w = mat @ v
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            return 0.0
        y = ah @ w
        norm_y = float(np.linalg.norm(y))
        # ||A* A v||^{1/2} estimates sigma once v aligns with the top space
        sigma_new = norm_w if norm_y == 0 else math.sqrt(norm_y)
        if abs(sigma_new - sigma) <= tol * max(sigma_new, 1e-30):
            return sigma_new
        sigma = sigma_new
        v = y / norm_y
    raise PowerIterationError(
        f"power iteration did not converge in {max_iter} steps", sigma, v
    )


def eigenvalues(mat: np.ndarray) -> np.ndarray:
    """All eigenvalues of the dense compression, descending modulus.

    Ties broken by real then imaginary part so reports are reproducible.
    """
    vals = np.linalg.eigvals(mat)
    order = np.lexsort((-vals.imag, -vals.real, -np.abs(vals)))
    return vals[order]


def cesaro_checkpoints(mat: np.ndarray, checkpoints, cap: float = 1e12):
    """Averages T_n = (1/n) sum_{k<=n} M^k at the requested n.

    Runs the stable recurrence T_n = ((n-1) T_{n-1} + M^n)/n.  If a power
    exceeds ``cap`` in magnitude the run stops with the divergence step
    recorded and the checkpoints reached so far retained.

    Returns (dict n -> T_n, diverged_at or None).
    """
    wanted = sorted(set(int(n) for n in checkpoints))
    if not wanted or wanted[0] < 1:
        raise ValueError("checkpoints must be positive")
    out = {}
    power = mat.copy()
    t = mat.copy()
    if 1 in wanted:
        out[1] = t.copy()
    for k in range(2, wanted[-1] + 1):
        power = power @ mat
        if float(np.max(np.abs(power))) > cap:
            return out, k
        num = (k - 1) * t + power
        # divide the real planes separately: numpy's complex SIMD division is
        # not correctly rounded (k/k can land 1 ulp off), float division is
        t = num.real / k + 1j * (num.imag / k)
        if k in wanted:
            out[k] = t.copy()
    return out, None


def cesaro(mat: np.ndarray, n: int, cap: float = 1e12) -> np.ndarray:
    out, diverged = cesaro_checkpoints(mat, [n], cap)
    if n not in out:
        raise OverflowError(f"power grew past {cap:g} at step {diverged}; averages diverge")
    return out[n]


def ergodic_limit_matrix(weight, symbol: AffineSymbol, n_dim: int) -> np.ndarray:
    """Rank-one limit P f = f(z0) * u_inf compressed to N dimensions.

    Column n is the basis expansion of u_inf scaled by e_n(z0) = z0^n/sqrt(n!).
    """
    u_inf = u_infinity(weight, symbol)
    z0 = symbol.fixed_point()
    coeffs = np.asarray(u_inf.taylor(n_dim - 1).coeffs, dtype=complex)
    logs, phases = _log_abs_phase(coeffs)
    lg = np.array([lgamma(m + 1) for m in range(n_dim)])
    rows = np.exp(logs + 0.5 * lg) * phases
    if z0 == 0:
        cols = np.zeros(n_dim, dtype=complex)
        cols[0] = 1.0
    else:
        log_z0 = math.log(abs(z0))
        ph = z0 / abs(z0)
        ns = np.arange(n_dim)
        cols = np.exp(ns * log_z0 - 0.5 * lg) * ph**ns
    return np.outer(rows, cols)


def isometry_defect(mat: np.ndarray, k: int) -> float:
    """Operator norm of the leading k x k block of M* M - I.

    Small values certify approximate isometry on low-degree polynomials;
    meaningful when k is well below the truncation dimension.
    """
    n = mat.shape[0]
    if k < 1 or k > n:
        raise ValueError("block size must be in 1..N")
    gram = mat.conj().T @ mat
    block = gram[:k, :k] - np.eye(k, dtype=complex)
    return op_norm2(block, tol=1e-12)


def matrix_csv(mat: np.ndarray) -> str:
    """Row-major CSV with cells as re,im pairs.

    The header row records the dimension and the basis convention.
    """
    n = mat.shape[0]
    lines = [f"N,{n},basis,z^n/sqrt(n!)"]
    for row in mat:
        cells = []
        for z in row:
            cells.append(repr(float(z.real)))
            cells.append(repr(float(z.imag)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str) -> np.ndarray:
    """Inverse of :func:`matrix_csv`."""
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0].split(",")
    if header[0] != "N":
        raise ValueError("missing matrix CSV header")
    n = int(header[1])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} data rows, found {len(lines) - 1}")
    out = np.zeros((n, n), dtype=complex)
    for i, ln in enumerate(lines[1:]):
        parts = [float(x) for x in ln.split(",")]
        if len(parts) != 2 * n:
            raise ValueError(f"row {i} has {len(parts)} cells, expected {2 * n}")
        out[i] = np.array(parts[0::2]) + 1j * np.array(parts[1::2])
    return out
