import json
import math

import numpy as np
import pytest

from naqsim.bench import (
    BenchError,
    clops_metric,
    ghz_sweep,
    heavy_output_fraction,
    heavy_set,
    qv_heavy_output,
    random_native_circuit,
)
from naqsim.simulator import NoiseFlags

from conftest import grid_profile


class TestGhzSweep:
    def test_noiseless_metric_is_one(self, default_profile):
        report = ghz_sweep(default_profile, [2, 3, 4], shots=400, seed=1, noise="off")
        for record in report.records:
            assert record.metric == pytest.approx(1.0, abs=0.01)

    def test_metric_declines_with_width_under_noise(self, default_profile):
        report = ghz_sweep(default_profile, [2, 8], shots=1500, seed=2, noise="full")
        wide, narrow = report.records[1].metric, report.records[0].metric
        assert wide < narrow

    def test_readout_only_two_qubits(self):
        profile = grid_profile(10, 10, f_readout=0.95)
        flags = NoiseFlags(gates=False, idle=False, t2_star=False, loss=False, readout=True)
        report = ghz_sweep(profile, [2], shots=20_000, seed=3, noise=flags)
        expected = 0.95**2 + 0.05**2
        assert report.records[0].metric == pytest.approx(expected, abs=0.01)

    def test_records_embed_reproducible_seeds(self, default_profile):
        a = ghz_sweep(default_profile, [2, 3], shots=100, seed=5, noise="off")
        b = ghz_sweep(default_profile, [2, 3], shots=100, seed=5, noise="off")
        assert a.records == b.records
        assert a.profile_fingerprint == b.profile_fingerprint

    def test_single_record_tuple_reproduces_metric(self, default_profile):
        from naqsim.circuit import ghz_circuit
        from naqsim.simulator import run

        report = ghz_sweep(default_profile, [3], shots=200, seed=13, noise="full")
        record = report.records[0]
        rerun = run(
            ghz_circuit(record.width), default_profile, record.shots, record.seed,
            noise="full",
        )
        metric = (
            rerun.histogram.get("0" * record.width, 0)
            + rerun.histogram.get("1" * record.width, 0)
        ) / record.shots
        assert metric == record.metric


class TestHeavyOutput:
    def test_heavy_set_uses_strict_median_split(self):
        probs = np.array([0.4, 0.3, 0.2, 0.1])
        heavy = heavy_set(probs)
        assert heavy == {"00", "01"}

    def test_uniform_sampler_scores_half(self, rng):
        # a fully depolarized backend hits the heavy set half the time
        probs = rng.dirichlet(np.ones(16))
        heavy = heavy_set(probs)
        n_shots = 40_000
        samples = rng.integers(0, 16, size=n_shots)
        hist: dict[str, int] = {}
        for s in samples:
            key = format(s, "04b")
            hist[key] = hist.get(key, 0) + 1
        hop = heavy_output_fraction(heavy, hist)
        assert hop == pytest.approx(len(heavy) / 16, abs=0.01)
        assert len(heavy) == 8  # continuous probabilities: strict split is exact

    def test_noiseless_heavy_output_beats_two_thirds(self, default_profile):
        report = qv_heavy_output(
            default_profile, width=3, depth=3, n_circuits=8, shots=600, seed=7, noise="off"
        )
        assert report.summary["mean_heavy_output_probability"] > 2.0 / 3.0
        assert report.summary["passed"]

    def test_square_circuits_enforced(self, default_profile):
        with pytest.raises(BenchError, match="square"):
            qv_heavy_output(default_profile, 3, 4, 1, 10, seed=0)

    def test_deterministic_reports(self, default_profile):
        a = qv_heavy_output(default_profile, 2, 2, 3, 50, seed=11)
        b = qv_heavy_output(default_profile, 2, 2, 3, 50, seed=11)
        assert a.records == b.records
        assert a.to_jsonl() == b.to_jsonl()

    def test_random_circuit_is_native_and_measured(self, rng):
        c = random_native_circuit(4, 4, rng)
        from naqsim.circuit import NATIVE_KINDS

        assert all(g.kind in NATIVE_KINDS for g in c.gates)
        assert c.measured


class TestClops:
    def test_documented_arithmetic(self, default_profile):
        # 100 rotation layers, t_circuit = 200 us << t_prep: ~244 layers/s
        result = clops_metric(default_profile, template_width=4, template_layers=100, n_shots=1)
        assert result.timing.t_circuit_us == pytest.approx(200.0)
        assert result.layers_per_second == pytest.approx(100 / 0.4102, rel=1e-9)
        assert round(result.layers_per_second) == 244

    def test_shots_cancel_out(self, default_profile):
        one = clops_metric(default_profile, 4, 50, n_shots=1)
        many = clops_metric(default_profile, 4, 50, n_shots=64)
        assert one.layers_per_second == pytest.approx(many.layers_per_second, rel=1e-12)

    def test_faster_preparation_raises_clops(self, default_profile):
        fast = grid_profile(10, 10, t_prep=40.0)
        slow = clops_metric(default_profile, 4, 100, 1).layers_per_second
        quick = clops_metric(fast, 4, 100, 1).layers_per_second
        assert quick > slow

    def test_parameter_validation(self, default_profile):
        with pytest.raises(BenchError):
            clops_metric(default_profile, 0, 10, 1)


class TestReportFormats:
    def test_jsonl_has_records_then_summary(self, default_profile):
        report = ghz_sweep(default_profile, [2, 3], shots=50, seed=9, noise="off")
        lines = report.to_jsonl().strip().split("\n")
        assert len(lines) == 3
        for line in lines[:-1]:
            record = json.loads(line)
            assert record["suite"] == "ghz"
            assert {"width", "depth", "metric", "shots", "seed"} <= set(record)
        summary = json.loads(lines[-1])["summary"]
        assert summary["n_records"] == 2
        assert summary["master_seed"] == 9

    def test_csv_mirrors_records(self, default_profile):
        report = ghz_sweep(default_profile, [2, 3], shots=50, seed=9, noise="off")
        csv_lines = report.plot_csv().strip().split("\n")
        assert csv_lines[0] == "width,depth,metric"
        assert len(csv_lines) == 3
        assert csv_lines[1].startswith("2,")
