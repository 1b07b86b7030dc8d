import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from fockwc import pipeline
from fockwc.fockmat import matrix_from_csv
from fockwc.schemas import JobConfig

E_HALF = math.exp(-0.5)


def kernel_config(u0, b=1.0, a=1.0, tasks=("classify",), p=2.0, **numeric):
    w = -complex(a).conjugate() * complex(b)
    cfg = {
        "weight": {"kind": "kernel", "u0": [complex(u0).real, complex(u0).imag], "w": [w.real, w.imag]},
        "symbol": {"a": [complex(a).real, complex(a).imag], "b": [complex(b).real, complex(b).imag]},
        "p": p,
        "tasks": list(tasks),
    }
    if numeric:
        cfg["numeric"] = numeric
    return JobConfig.model_validate(cfg)


COMPACT = {
    "weight": {"kind": "expquad", "a0": [-0.4, 0.0], "a1": [0.0, 0.0], "a2": [0.1, 0.0]},
    "symbol": {"a": [0.5, 0.0], "b": [1.0, 0.0]},
    "p": 2,
    "tasks": ["classify", "spectrum", "ergodic"],
}


class TestConfigValidation:
    def test_unknown_fields_rejected(self):
        bad = dict(COMPACT)
        bad["surprise"] = 1
        with pytest.raises(ValidationError):
            JobConfig.model_validate(bad)

    def test_empty_tasks_rejected(self):
        bad = dict(COMPACT)
        bad["tasks"] = []
        with pytest.raises(ValidationError):
            JobConfig.model_validate(bad)

    def test_p_inf_tag(self):
        cfg = dict(COMPACT)
        cfg["p"] = "inf"
        job = JobConfig.model_validate(cfg)
        assert job.p_value() == math.inf

    def test_p_below_one_rejected(self):
        cfg = dict(COMPACT)
        cfg["p"] = 0.5
        with pytest.raises(ValidationError):
            JobConfig.model_validate(cfg)

    def test_complex_pairs_must_be_finite(self):
        cfg = json.loads(json.dumps(COMPACT))
        cfg["symbol"]["a"] = [float("nan"), 0.0]
        with pytest.raises(ValidationError):
            JobConfig.model_validate(cfg)


class TestRun:
    def test_classify_equality_case(self):
        report = pipeline.run(kernel_config(E_HALF))
        assert report.verdicts["power_bounded"].value == "yes"
        assert report.verdicts["bounded"].value == "yes"
        assert report.verdicts["compact"].value == "no"
        assert all(entry.exact for entry in report.norms)
        assert all(abs(float(entry.lo) - 1.0) < 1e-12 for entry in report.norms)

    def test_spectrum_compact_example(self):
        report = pipeline.run(JobConfig.model_validate(COMPACT))
        assert report.spectrum is not None
        assert report.spectrum.kind == "geometric-with-zero"
        assert abs(report.spectrum.base[0] - 1.0) < 1e-9
        assert abs(report.spectrum.ratio[0] - 0.5) < 1e-12
        assert len(report.spectrum.points) == 8
        assert report.ergodic is not None
        assert report.ergodic.uniform.value == "yes"
        assert report.ergodic.limit.kind == "rank-one"

    def test_matrix_task_csv(self):
        cfg = {
            "weight": {"kind": "kernel", "u0": [1.0, 0.0], "w": [0.0, 0.0]},
            "symbol": {"a": [0.5, 0.0], "b": [0.0, 0.0]},
            "p": 2,
            "tasks": ["matrix"],
            "numeric": {"N": 4},
        }
        report = pipeline.run(JobConfig.model_validate(cfg))
        mat = matrix_from_csv(report.matrix_csv)
        assert np.allclose(mat, np.diag([1.0, 0.5, 0.25, 0.125]))

    def test_verify_battery_passes_for_equality_case(self):
        report = pipeline.run(kernel_config(E_HALF, tasks=("classify", "spectrum", "verify"), N=64, nmax=10))
        assert report.verification, "battery must produce entries"
        failed = [e.name for e in report.verification if not e.passed]
        assert not failed, failed
        assert report.all_passed()

    def test_verify_battery_compact_example(self):
        cfg = dict(COMPACT)
        cfg["tasks"] = ["classify", "spectrum", "ergodic", "verify"]
        report = pipeline.run(JobConfig.model_validate(cfg))
        names = {e.name for e in report.verification}
        assert "iterate-closed-vs-product" in names
        assert "growth-sup-analytic-vs-grid" in names
        assert "spectrum-eigenvalues-geometric" in names
        assert "cesaro-vs-rank-one-limit" in names
        failed = [e.name for e in report.verification if not e.passed]
        assert not failed, failed

    def test_verify_confirms_divergence_for_unbounded(self):
        cfg = {
            "weight": {"kind": "expquad", "a0": [0.0, 0.0], "a1": [0.0, 0.0], "a2": [0.4, 0.0]},
            "symbol": {"a": [0.5, 0.0], "b": [0.0, 0.0]},
            "p": 2,
            "tasks": ["classify", "verify"],
        }
        report = pipeline.run(JobConfig.model_validate(cfg))
        assert report.verdicts["bounded"].value == "no"
        entry = next(e for e in report.verification if e.name == "growth-sup-divergence-confirmed")
        assert entry.passed

    def test_spectrum_unbounded_fails_gracefully(self):
        report = pipeline.run(kernel_config(1.0, a=2.0, b=0.0, tasks=("spectrum",)))
        assert report.spectrum is None
        assert report.failures
        assert not report.all_passed()

    def test_norm_entries_bounds_for_contraction(self):
        cfg = {
            "weight": {"kind": "kernel", "u0": [1.0, 0.0], "w": [0.0, 0.0]},
            "symbol": {"a": [0.5, 0.0], "b": [0.0, 0.0]},
            "p": 2,
            "tasks": ["classify"],
            "numeric": {"nmax": 1},
        }
        report = pipeline.run(JobConfig.model_validate(cfg))
        entry = report.norms[0]
        assert not entry.exact
        assert abs(float(entry.lo) - 1.0) < 1e-12
        assert abs(float(entry.hi) - 2.0) < 1e-12

    def test_timing_excluded_by_default(self):
        report = pipeline.run(JobConfig.model_validate(COMPACT))
        assert report.timing is None
        report = pipeline.run(JobConfig.model_validate(COMPACT), with_timing=True)
        assert report.timing is not None and "classify" in report.timing

    def test_exact_flag_uses_exact_dichotomies(self):
        # u0 one ulp-cluster above the power-bounded threshold: the default
        # 1e-12 tolerance forgives it, exact mode does not
        u0 = math.exp(-0.5) * (1 + 1e-13)
        base = {
            "weight": {"kind": "kernel", "u0": [u0, 0.0], "w": [-1.0, 0.0]},
            "symbol": {"a": [1.0, 0.0], "b": [1.0, 0.0]},
            "p": 2,
            "tasks": ["classify"],
        }
        tolerant = pipeline.run(JobConfig.model_validate(base))
        assert tolerant.verdicts["power_bounded"].value == "yes"
        strict = dict(base)
        strict["numeric"] = {"exact": True}
        exact = pipeline.run(JobConfig.model_validate(strict))
        assert exact.verdicts["power_bounded"].value == "no"


class TestDeterminism:
    def test_byte_identical_reports(self):
        cfg = dict(COMPACT)
        cfg["tasks"] = ["classify", "spectrum", "ergodic", "verify"]
        job = JobConfig.model_validate(cfg)
        first = pipeline.report_json(pipeline.run(job))
        second = pipeline.report_json(pipeline.run(job))
        assert first == second

    def test_seed_changes_are_echoed(self):
        cfg = json.loads(json.dumps(COMPACT))
        cfg["numeric"] = {"seed": 77}
        job = JobConfig.model_validate(cfg)
        report = pipeline.run(job)
        assert report.config.numeric.seed == 77

    def test_round_trip_config_echo(self):
        job = JobConfig.model_validate(COMPACT)
        report = pipeline.run(job)
        assert report.config == job
        # serialized echo parses back to the same model
        payload = json.loads(pipeline.report_json(report))
        assert JobConfig.model_validate(payload["config"]) == job


class TestSweep:
    def test_threshold_sweep(self, tmp_path):
        jobs = [
            kernel_config(s * E_HALF, tasks=("classify",)).model_dump(mode="json")
            for s in (0.9, 1.0, 1.1)
        ]
        summary = pipeline.sweep(jobs, out_dir=tmp_path)
        got = [row.power_bounded for row in summary.rows]
        assert got == ["yes", "yes", "no"]
        assert (tmp_path / "summary.csv").exists()
        assert (tmp_path / "report_002.json").exists()

    def test_compact_fixed_point_sweep(self):
        jobs = []
        for s in (0.5, 1.0, 1.5):
            jobs.append(
                {
                    "weight": {
                        "kind": "expquad",
                        "a0": [-0.4 + math.log(s), 0.0],
                        "a1": [0.0, 0.0],
                        "a2": [0.1, 0.0],
                    },
                    "symbol": {"a": [0.5, 0.0], "b": [1.0, 0.0]},
                    "p": 2,
                    "tasks": ["classify"],
                }
            )
        summary = pipeline.sweep(jobs)
        assert [row.power_bounded for row in summary.rows] == ["yes", "yes", "no"]

    def test_bad_job_isolated(self, tmp_path):
        jobs = [
            JobConfig.model_validate(COMPACT).model_dump(mode="json"),
            {"weight": {"kind": "kernel", "u0": [1, 0], "w": [0, 0]},
             "symbol": {"a": [0.5, 0], "b": [0, 0]},
             "tasks": []},  # usage error: empty tasks
        ]
        summary = pipeline.sweep(jobs, out_dir=tmp_path)
        assert summary.rows[0].ok
        assert not summary.rows[1].ok
        assert summary.rows[1].error
        assert (tmp_path / "report_000.json").exists()
        assert not (tmp_path / "report_001.json").exists()
