"""Job execution: run the classification pipeline and the numeric
verification battery for one operator description, or sweep many.

Reports serialize deterministically (sorted keys, no volatile fields unless
timing is explicitly requested), so identical configs produce byte-identical
report files.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import classify, fockmat
from .classify import (
    UNDETERMINED,
    YES,
    CircleSpectrum,
    FiniteSpectrum,
    GeometricWithZero,
    GrowthExponent,
    grid_growth_sup_log,
)
from .core import ExpQuadWeight, KernelWeight
from .iterates import REGIME_P, regime_of, weight_iterate_closed, weight_iterate_product
from .quadrature import un_norm_sequence
from .schemas import (
    ErgodicModel,
    JobConfig,
    LimitModel,
    NormEntry,
    Report,
    SpectrumModel,
    SweepRow,
    SweepSummary,
    VerdictModel,
    VerificationEntry,
    json_float,
    weight_spec_from,
)

#: Norm entries are reported for n = 1..min(nmax, NORM_COUNT).
NORM_COUNT = 8
#: Matrix powers checked against closed norms in the verify battery.
VERIFY_NORM_POWERS = 5


def _verdict_model(v: classify.Verdict) -> VerdictModel:
    return VerdictModel(value=v.value, reason=v.reason, anchor=v.anchor)


def _spectrum_model(desc) -> SpectrumModel:
    pts = [(float(z.real), float(z.imag)) for z in classify.spectrum_points(desc, 8)]
    if isinstance(desc, FiniteSpectrum):
        return SpectrumModel(kind="finite", points=pts)
    if isinstance(desc, GeometricWithZero):
        return SpectrumModel(
            kind="geometric-with-zero",
            points=pts,
            base=(desc.base.real, desc.base.imag),
            ratio=(desc.ratio.real, desc.ratio.imag),
        )
    return SpectrumModel(kind="circle", radius=desc.radius)


def _limit_model(limit: classify.LimitForm) -> LimitModel:
    weight = None
    if limit.weight is not None:
        weight = weight_spec_from(limit.weight)
    z0 = None
    if limit.z0 is not None:
        z0 = (float(limit.z0.real), float(limit.z0.imag))
    return LimitModel(kind=limit.kind, weight=weight, z0=z0, period=limit.period, note=limit.note)


def run(config: JobConfig, with_timing: bool = False) -> Report:
    """Execute the requested tasks in dependency order and assemble the report."""
    weight = config.weight.build()
    symbol = config.symbol.build()
    p = config.p_value()
    opts = config.numeric
    report = Report(config=config)
    timing: dict = {}
    matrix_cache: dict = {}

    def matrix(n_dim: int) -> np.ndarray:
        if n_dim not in matrix_cache:
            matrix_cache[n_dim] = fockmat.build_matrix(weight, symbol, n_dim)
        return matrix_cache[n_dim]

    eq_tol = 0.0 if opts.exact else classify.TOL_EQ
    bounded = classify.is_bounded(weight, symbol, p, eq_tol)
    compact = classify.is_compact(weight, symbol, p, eq_tol)
    report.verdicts["bounded"] = _verdict_model(bounded)
    report.verdicts["compact"] = _verdict_model(compact)

    tasks = config.ordered_tasks()
    if "verify" in tasks and "classify" not in tasks:
        tasks.insert(0, "classify")  # verification cross-checks the verdicts

    for task in tasks:
        started = time.perf_counter()
        try:
            if task == "classify":
                _run_classify(report, weight, symbol, p, bounded, opts, eq_tol)
            elif task == "spectrum":
                _run_spectrum(report, weight, symbol, bounded, eq_tol)
            elif task == "ergodic":
                _run_ergodic(report, weight, symbol, p, bounded, eq_tol)
            elif task == "matrix":
                report.matrix_csv = fockmat.matrix_csv(matrix(opts.N))
            elif task == "verify":
                _run_verify(report, weight, symbol, p, bounded, compact, opts, matrix)
        except (ValueError, OverflowError) as exc:
            report.failures.append(f"{task}: {exc}")
        timing[task] = time.perf_counter() - started
    if with_timing:
        report.timing = timing
    return report


def _run_classify(report, weight, symbol, p, bounded, opts, eq_tol):
    report.verdicts["power_bounded"] = _verdict_model(
        classify.power_bounded(weight, symbol, p, eq_tol)
    )
    if not bounded.is_yes:
        return
    for n in range(1, min(opts.nmax, NORM_COUNT) + 1):
        est = classify.norm_closed(weight, symbol, n, p, eq_tol)
        report.norms.append(
            NormEntry(n=n, lo=json_float(est.lo), hi=json_float(est.hi), exact=est.exact, note=est.note)
        )


def _run_spectrum(report, weight, symbol, bounded, eq_tol):
    if not bounded.is_yes:
        report.failures.append("spectrum: operator is not bounded")
        return
    report.spectrum = _spectrum_model(classify.spectrum(weight, symbol, tol=eq_tol))


def _run_ergodic(report, weight, symbol, p, bounded, eq_tol):
    if not bounded.is_yes:
        report.failures.append("ergodic: operator is not bounded")
        return
    verdict = classify.ergodicity(weight, symbol, p, tol=eq_tol)
    report.ergodic = ErgodicModel(
        mean=_verdict_model(verdict.mean),
        uniform=_verdict_model(verdict.uniform),
        limit=_limit_model(verdict.limit),
    )


def _entry(name: str, passed, delta=None, tol=None, note: str = "") -> VerificationEntry:
    """Build an entry, squeezing numpy scalars back into plain Python types."""
    if delta is not None and not isinstance(delta, str):
        delta = json_float(float(delta))
    if tol is not None:
        tol = float(tol)
    return VerificationEntry(name=name, passed=bool(passed), delta=delta, tol=tol, note=note)


def _run_verify(report, weight, symbol, p, bounded, compact, opts, matrix):
    """Numeric oracle battery; every entry records the tolerance it used."""
    entries = report.verification
    rng = np.random.default_rng(opts.seed)
    a = symbol.a

    # fixed point residual
    if not classify.close(a, 1.0):
        z0 = symbol.fixed_point()
        eps = float(np.finfo(float).eps)
        delta = abs(symbol(z0) - z0)
        tol = 8 * eps * (1 + abs(z0))
        entries.append(_entry("fixed-point-residual", delta <= tol, delta, tol))

    # closed iterate vs literal product
    regime = regime_of(weight, symbol)
    if regime != REGIME_P:
        radii = 3.0 * np.sqrt(rng.uniform(0, 1, 25))
        angles = rng.uniform(0, 2 * np.pi, 25)
        points = radii * np.exp(1j * angles)
        worst = 0.0
        for n in range(1, min(opts.nmax, 20) + 1):
            form = weight_iterate_closed(weight, symbol, n)
            for z in points:
                want = weight_iterate_product(weight, symbol, n, complex(z))
                got = form(complex(z))
                worst = max(worst, abs(got - want) / (1.0 + abs(want)))
        entries.append(_entry("iterate-closed-vs-product", worst <= 1e-9, worst, 1e-9))

    # analytic growth supremum vs grid oracle
    if isinstance(weight, (KernelWeight, ExpQuadWeight)):
        analytic = classify.growth_sup(weight, symbol)
        grid_log = grid_growth_sup_log(weight, symbol)
        if math.isfinite(analytic) and analytic > 0:
            delta = abs(analytic - math.exp(min(grid_log, 709.0))) / analytic
            entries.append(_entry("growth-sup-analytic-vs-grid", delta <= 1e-6, delta, 1e-6))
        elif math.isinf(analytic):
            k = GrowthExponent.from_pair(weight, symbol).k
            confirmed = grid_log - k >= math.log(1e6)
            entries.append(
                _entry(
                    "growth-sup-divergence-confirmed",
                    confirmed,
                    grid_log - k,
                    math.log(1e6),
                    note="grid running max exceeds 1e6 x the constant scale",
                )
            )

    # matrix action vs pointwise evaluation
    if bounded.is_yes:
        n_dim = opts.N
        mat = matrix(n_dim)
        deg = n_dim // 2
        taylor = rng.normal(size=deg + 1) / np.exp(
            0.5 * np.array([math.lgamma(m + 1) for m in range(deg + 1)])
        )
        vec = fockmat.taylor_to_basis(tuple(taylor), n_dim)
        out = mat @ vec
        poly = np.polynomial.polynomial.Polynomial(taylor)
        worst = 0.0
        for _ in range(20):
            z = 2.0 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            want = weight(complex(z)) * poly(symbol(complex(z)))
            got = fockmat.basis_eval(out, complex(z))
            worst = max(worst, abs(got - want) / (1.0 + abs(want)))
        entries.append(_entry("matrix-apply-vs-pointwise", worst <= 1e-8, worst, 1e-8))

        # closed norms vs compression norms
        power = None
        for entry in report.norms[:VERIFY_NORM_POWERS]:
            power = mat if power is None else power @ mat
            numeric = fockmat.op_norm2(power, tol=min(opts.tol, 1e-8))
            entry.numeric = numeric
            hi = math.inf if entry.hi == "inf" else float(entry.hi)
            ok = numeric <= hi * (1.0 + 1e-6) + 1e-12
            note = "compression norm below the closed value (truncation approaches from below)"
            if entry.exact:
                ok = ok and numeric >= 0.5 * float(entry.lo)
            entries.append(
                _entry(
                    f"norm-matrix-vs-closed-n{entry.n}",
                    ok,
                    numeric / hi if math.isfinite(hi) and hi > 0 else None,
                    1e-6,
                    note=note,
                )
            )

        # eigenvalues of the compression vs the spectrum descriptor
        if report.spectrum is not None:
            desc = classify.spectrum(weight, symbol)
            vals = fockmat.eigenvalues(mat)
            if isinstance(desc, GeometricWithZero):
                worst = 0.0
                for m in range(6):
                    want = desc.base * desc.ratio**m
                    worst = max(worst, abs(vals[m] - want) / max(abs(want), 1e-12))
                entries.append(_entry("spectrum-eigenvalues-geometric", worst <= 1e-3, worst, 1e-3))
            elif isinstance(desc, CircleSpectrum):
                excess = float(np.max(np.abs(vals))) - desc.radius
                entries.append(
                    _entry(
                        "spectrum-eigenvalues-inside-circle",
                        excess <= 1e-6 * max(desc.radius, 1.0),
                        excess,
                        1e-6,
                        note="compression eigenvalues stay inside the spectral circle",
                    )
                )
            elif isinstance(desc, FiniteSpectrum):
                cap = max(abs(z) for z in desc.points)
                excess = float(np.max(np.abs(vals))) - cap
                entries.append(
                    _entry("spectrum-eigenvalues-inside-hull", excess <= 1e-6 * max(cap, 1.0), excess, 1e-6)
                )

    # iterate norm trend vs the power-bounded verdict
    pb = report.verdicts.get("power_bounded")
    if regime != REGIME_P and pb is not None and pb.value != UNDETERMINED:
        seq = un_norm_sequence(weight, symbol, p, max(opts.nmax, 8))
        expected = "bounded" if pb.value == YES else "unbounded"
        entries.append(
            _entry(
                "iterate-norm-trend-vs-power-bounded",
                seq.trend == expected,
                note=f"trend {seq.trend}, verdict {pb.value}",
            )
        )

    # averages converge to the rank-one limit in the normalized compact case
    if compact.is_yes and pb is not None and pb.value == YES:
        try:
            z0 = symbol.fixed_point()
            if abs(weight(z0) - 1.0) <= 1e-10:
                n_dim = opts.cesaro_N
                small = matrix(n_dim) if n_dim == opts.N else fockmat.build_matrix(weight, symbol, n_dim)
                limit = fockmat.ergodic_limit_matrix(weight, symbol, n_dim)
                out, diverged = fockmat.cesaro_checkpoints(small, [50, 200])
                if diverged is not None:
                    entries.append(
                        _entry(
                            "cesaro-vs-rank-one-limit", False,
                            note=f"averages diverged at step {diverged}",
                        )
                    )
                else:
                    d50 = fockmat.op_norm2(out[50] - limit)
                    d200 = fockmat.op_norm2(out[200] - limit)
                    entries.append(
                        _entry(
                            "cesaro-vs-rank-one-limit",
                            d200 < d50 and d200 <= 0.1,
                            d200,
                            0.1,
                            note=f"||T_50 - P|| = {d50:.3e}, ||T_200 - P|| = {d200:.3e}",
                        )
                    )
        except ValueError:
            pass


def report_json(report: Report) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    payload = report.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _summary_row(index: int, report: Report) -> SweepRow:
    verdict = lambda key: report.verdicts[key].value if key in report.verdicts else ""
    deltas = [
        float(e.delta)
        for e in report.verification
        if e.delta is not None and not isinstance(e.delta, str)
    ]
    return SweepRow(
        index=index,
        ok=report.all_passed(),
        bounded=verdict("bounded"),
        compact=verdict("compact"),
        power_bounded=verdict("power_bounded"),
        mean_ergodic=report.ergodic.mean.value if report.ergodic else "",
        uniformly_mean_ergodic=report.ergodic.uniform.value if report.ergodic else "",
        spectrum_kind=report.spectrum.kind if report.spectrum else "",
        max_delta=max(deltas) if deltas else None,
    )


def summary_csv(rows) -> str:
    header = (
        "index,ok,bounded,compact,power_bounded,mean_ergodic,"
        "uniformly_mean_ergodic,spectrum_kind,max_delta,error"
    )
    lines = [header]
    for row in rows:
        delta = "" if row.max_delta is None else str(row.max_delta)
        error = row.error.replace(",", ";").replace("\n", " ")
        lines.append(
            f"{row.index},{str(row.ok).lower()},{row.bounded},{row.compact},"
            f"{row.power_bounded},{row.mean_ergodic},{row.uniformly_mean_ergodic},"
            f"{row.spectrum_kind},{delta},{error}"
        )
    return "\n".join(lines) + "\n"


def sweep(configs, out_dir=None, max_workers: int = 4) -> SweepSummary:
    """Run jobs (thread pool), optionally writing one report per job plus a
    summary CSV.  Jobs may be raw dicts; per-job validation or execution
    failures are isolated into their summary rows."""
    configs = list(configs)
    if not configs:
        raise ValueError("sweep needs at least one job")

    def one(item):
        index, config = item
        try:
            if not isinstance(config, JobConfig):
                config = JobConfig.model_validate(config)
            report = run(config)
            return index, report, None
        except Exception as exc:  # noqa: BLE001 - isolate job failures
            return index, None, str(exc)

    workers = max(1, min(max_workers, len(configs)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(one, enumerate(configs)))

    rows = []
    reports = []
    for index, report, error in sorted(results, key=lambda r: r[0]):
        if report is None:
            rows.append(SweepRow(index=index, ok=False, error=error or "failed"))
        else:
            rows.append(_summary_row(index, report))
            reports.append(report)
        if out_dir is not None and report is not None:
            path = Path(out_dir) / f"report_{index:03d}.json"
            path.write_text(report_json(report))
    summary = SweepSummary(rows=rows, reports=reports)
    if out_dir is not None:
        (Path(out_dir) / "summary.csv").write_text(summary_csv(rows))
    return summary
