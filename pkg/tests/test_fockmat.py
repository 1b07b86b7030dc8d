import cmath
import math

import numpy as np
import pytest

from fockwc.core import AffineSymbol, ExpQuadWeight, KernelWeight, TaylorWeight
from fockwc.fockmat import (
    PowerIterationError,
    basis_eval,
    build_matrix,
    cesaro,
    cesaro_checkpoints,
    eigenvalues,
    ergodic_limit_matrix,
    isometry_defect,
    matrix_csv,
    matrix_from_csv,
    op_norm2,
    taylor_to_basis,
)
from fockwc.iterates import weight_iterate_closed

UNIT = KernelWeight(1.0, 0.0)


def lemma_weight(symbol, u0=1.0):
    return KernelWeight(u0, -symbol.a.conjugate() * symbol.b)


class TestBuildMatrix:
    def test_pure_contraction_is_diagonal(self):
        m = build_matrix(UNIT, AffineSymbol(0.5, 0.0), 4)
        assert np.allclose(m, np.diag([1.0, 0.5, 0.25, 0.125]))

    def test_affine_column_one(self):
        a, b = 0.3 - 0.4j, 1.2 + 0.1j
        m = build_matrix(UNIT, AffineSymbol(a, b), 6)
        assert abs(m[0, 1] - b) < 1e-14
        assert abs(m[1, 1] - a) < 1e-14

    def test_kernel_column_zero(self):
        w = 0.8 - 0.6j
        m = build_matrix(KernelWeight(1.0, w), AffineSymbol(1.0, 0.0), 64)
        for row in range(8):
            want = w.conjugate() ** row * math.exp(-0.5 * math.lgamma(row + 1))
            assert abs(m[row, 0] - want) < 1e-12
        col_sq = float(np.sum(np.abs(m[:, 0]) ** 2))
        assert abs(col_sq - math.exp(abs(w) ** 2)) <= 1e-10 * math.exp(abs(w) ** 2)

    def test_constant_symbol_rank_structure(self):
        # psi == b: W f = f(b) u, so every column is proportional to column 0
        u = ExpQuadWeight(-0.1, 0.2, 0.0)
        m = build_matrix(u, AffineSymbol(0.0, 0.7), 12)
        for n in range(1, 12):
            scale = 0.7**n * math.exp(-0.5 * math.lgamma(n + 1))
            assert np.allclose(m[:, n], m[:, 0] * scale, atol=1e-13)

    def test_matrix_function_consistency(self):
        # (matrix @ basis coeffs) evaluated as a series reproduces u(z) f(psi z)
        rng = np.random.default_rng(41)
        n_dim = 64
        weights = [
            KernelWeight(0.9, -0.5),
            ExpQuadWeight(-0.4, 0.1j, 0.1),
            TaylorWeight((1.0, 0.3, -0.2, 0.05)),
        ]
        symbols = [AffineSymbol(0.5, 1.0), AffineSymbol(1.0, 0.5), AffineSymbol(0.6j, -0.3)]
        for weight in weights:
            for symbol in symbols:
                mat = build_matrix(weight, symbol, n_dim)
                deg = n_dim // 2
                taylor = rng.normal(size=deg + 1) / np.exp(
                    0.5 * np.vectorize(math.lgamma)(np.arange(deg + 1) + 1)
                )
                vec = taylor_to_basis(tuple(taylor), n_dim)
                out = mat @ vec
                f = np.polynomial.polynomial.Polynomial(taylor)
                for _ in range(10):
                    z = 2 * rng.uniform() * cmath.exp(2j * math.pi * rng.uniform())
                    want = weight(z) * f(symbol(z))
                    got = basis_eval(out, z)
                    assert abs(got - want) <= 1e-8 * (1 + abs(want))

    def test_power_consistency_compact(self):
        # compression of W^n from the closed iterate matches M^n on the leading
        # N/2 block to machine precision when the operator is compact
        n_dim = 48
        weight, symbol = ExpQuadWeight(-0.4, 0.0, 0.1), AffineSymbol(0.5, 1.0)
        mat = build_matrix(weight, symbol, n_dim)
        power = mat.copy()
        for n in (2, 3, 4, 5):
            power = power @ mat
            form = weight_iterate_closed(weight, symbol, n)
            direct = build_matrix(form, symbol, n_dim)
            half = n_dim // 2
            delta = np.linalg.norm(direct[:half, :half] - power[:half, :half])
            scale = np.linalg.norm(direct[:half, :half])
            assert delta <= 1e-6 * max(scale, 1.0)

    def test_power_consistency_translation(self):
        # for |a| = 1 the binomial-kernel convolutions cancel catastrophically
        # past degree ~20 (both routes), so the check lives on a 16-block
        n_dim = 64
        weight, symbol = KernelWeight(math.exp(-0.5), -1.0), AffineSymbol(1.0, 1.0)
        mat = build_matrix(weight, symbol, n_dim)
        power = mat.copy()
        for n in (2, 3, 4, 5):
            power = power @ mat
            form = weight_iterate_closed(weight, symbol, n)
            direct = build_matrix(form, symbol, n_dim)
            delta = np.linalg.norm(direct[:16, :16] - power[:16, :16])
            scale = np.linalg.norm(direct[:16, :16])
            assert delta <= 1e-6 * max(scale, 1.0)

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            build_matrix(UNIT, AffineSymbol(0.5, 0.0), 0)
        with pytest.raises(ValueError):
            build_matrix(UNIT, AffineSymbol(0.5, 0.0), 1000)


class TestOpNorm:
    def test_diagonal(self):
        assert abs(op_norm2(np.diag([1.0, 0.5, 0.25]).astype(complex)) - 1.0) < 1e-9

    def test_zero_matrix(self):
        assert op_norm2(np.zeros((5, 5), dtype=complex)) == 0.0

    def test_against_lapack_svd(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            n = int(rng.integers(2, 30))
            m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            want = float(np.linalg.svd(m, compute_uv=False)[0])
            got = op_norm2(m, tol=1e-12)
            assert abs(got - want) <= 1e-7 * want

    def test_translation_norm_approaches_closed_value(self):
        psi = AffineSymbol(1.0, 1.0)
        u = lemma_weight(psi, 1.0)
        want = math.exp(0.5)
        prev = 0.0
        for n_dim in (16, 32, 64):
            got = op_norm2(build_matrix(u, psi, n_dim))
            assert got <= want * (1 + 1e-9)
            assert got >= prev - 1e-10  # nondecreasing in N
            prev = got
        assert got >= 0.98 * want

    def test_norm_monotone_in_dimension(self):
        u = ExpQuadWeight(-0.4, 0.0, 0.1)
        psi = AffineSymbol(0.5, 1.0)
        prev = 0.0
        for n_dim in (8, 16, 32, 64):
            got = op_norm2(build_matrix(u, psi, n_dim))
            assert got >= prev - 1e-10
            prev = got

    def test_nonconvergence_carries_iterate(self):
        mat = np.diag([1.0, 0.99]).astype(complex)
        with pytest.raises(PowerIterationError) as info:
            op_norm2(mat, tol=1e-16, max_iter=3)
        assert info.value.last_estimate > 0.9
        assert info.value.last_vector.shape == (2,)


class TestEigenvalues:
    def test_diagonal_exact(self):
        vals = eigenvalues(np.diag([1.0, 0.5, 0.25, 0.125]).astype(complex))
        assert np.allclose(vals, [1.0, 0.5, 0.25, 0.125])

    def test_scalar_matrix(self):
        c = 0.3 + 0.4j
        m = build_matrix(KernelWeight(c, 0.0), AffineSymbol(1.0, 0.0), 12)
        vals = eigenvalues(m)
        assert np.allclose(vals, c)

    def test_compact_spectrum_leading(self):
        m = build_matrix(ExpQuadWeight(-0.4, 0.0, 0.1), AffineSymbol(0.5, 1.0), 64)
        vals = eigenvalues(m)
        for k in range(6):
            want = 0.5**k
            assert abs(vals[k] - want) <= 1e-3 * want

    def test_descending_modulus(self):
        rng = np.random.default_rng(43)
        m = rng.normal(size=(20, 20)) + 1j * rng.normal(size=(20, 20))
        vals = eigenvalues(m)
        mods = np.abs(vals)
        assert np.all(mods[:-1] >= mods[1:] - 1e-12)


class TestCesaro:
    def test_identity(self):
        eye = np.eye(6, dtype=complex)
        for n in (1, 5, 40):
            assert np.allclose(cesaro(eye, n), eye)

    def test_rotation_diagonal_bound(self):
        a = cmath.exp(1j * math.pi * math.sqrt(2))
        mat = build_matrix(KernelWeight(1.0, 0.0), AffineSymbol(a, 0.0), 16)
        out, diverged = cesaro_checkpoints(mat, [50, 200, 1000])
        assert diverged is None
        for n, t in out.items():
            assert abs(t[0, 0] - 1.0) == 0.0
            for m in range(1, 16):
                bound = 2.0 / (n * abs(1 - a**m))
                assert abs(t[m, m]) <= bound + 1e-12

    def test_divergence_flagged(self):
        mat = np.diag([3.0, 0.5]).astype(complex)
        out, diverged = cesaro_checkpoints(mat, [5, 100], cap=1e6)
        assert diverged is not None
        assert diverged <= 14  # 3^13 > 1e6 / entry scale
        assert 5 in out  # partial results retained

    def test_checkpoint_validation(self):
        with pytest.raises(ValueError):
            cesaro_checkpoints(np.eye(2, dtype=complex), [0, 5])


class TestErgodicLimit:
    def test_pure_contraction_projects_on_constants(self):
        p = ergodic_limit_matrix(KernelWeight(1.0, 0.0), AffineSymbol(0.5, 0.0), 8)
        want = np.zeros((8, 8))
        want[0, 0] = 1.0
        assert np.allclose(p, want)

    def test_rank_one(self):
        p = ergodic_limit_matrix(ExpQuadWeight(-0.4, 0.0, 0.1), AffineSymbol(0.5, 1.0), 32)
        s = np.linalg.svd(p, compute_uv=False)
        assert s[0] > 1e-3
        assert s[1] <= 1e-12 * s[0]

    def test_projection_identity(self):
        # P is idempotent: P^2 = P (u_inf(z0) = 1 makes the rank-one factors dual)
        p = ergodic_limit_matrix(ExpQuadWeight(-0.4, 0.0, 0.1), AffineSymbol(0.5, 1.0), 32)
        assert np.allclose(p @ p, p, atol=1e-10)

    def test_cesaro_converges_to_limit(self):
        u = ExpQuadWeight(-0.4, 0.0, 0.1)
        psi = AffineSymbol(0.5, 1.0)
        n_dim = 32
        mat = build_matrix(u, psi, n_dim)
        p = ergodic_limit_matrix(u, psi, n_dim)
        out, _ = cesaro_checkpoints(mat, [50, 200])
        d50 = op_norm2(out[50] - p)
        d200 = op_norm2(out[200] - p)
        assert d200 < d50
        assert d200 < 0.1


class TestIsometryDefect:
    def test_unitary_rotation(self):
        m = build_matrix(KernelWeight(1.0, 0.0), AffineSymbol(1j, 0.0), 24)
        assert isometry_defect(m, 24) <= 1e-12

    def test_translation_isometry_on_low_degrees(self):
        psi = AffineSymbol(1.0, 1.0)
        u = lemma_weight(psi, math.exp(-0.5) * cmath.exp(0.3j))
        m = build_matrix(u, psi, 64)
        assert isometry_defect(m, 16) <= 1e-6

    def test_unbounded_powers_fail_isometry(self):
        psi = AffineSymbol(1.0, 1.0)
        m = build_matrix(lemma_weight(psi, 1.0), psi, 64)
        assert isometry_defect(m, 16) >= 0.5

    def test_block_guard(self):
        m = np.eye(4, dtype=complex)
        with pytest.raises(ValueError):
            isometry_defect(m, 5)


class TestCsv:
    def test_round_trip(self):
        m = build_matrix(KernelWeight(0.9, -0.5), AffineSymbol(0.5, 1.0), 6)
        text = matrix_csv(m)
        assert text.splitlines()[0] == "N,6,basis,z^n/sqrt(n!)"
        back = matrix_from_csv(text)
        assert np.array_equal(back, m)

    def test_expected_layout(self):
        m = build_matrix(UNIT, AffineSymbol(0.5, 0.0), 4)
        rows = matrix_csv(m).splitlines()
        assert rows[1].split(",")[0] == "1.0"
        assert rows[2].split(",")[2] == "0.5"
