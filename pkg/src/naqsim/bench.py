"""Benchmark suites over the simulated backend.

Three probes of machine quality and speed:

- ``ghz_sweep``: GHZ state survival P(0^n) + P(1^n) versus width.
- ``qv_heavy_output``: quantum-volume-style square random circuits built from
  native gates; reports the fraction of noisy shots landing in the heavy set
  of the noiseless distribution (pass threshold 2/3).
- ``clops_metric``: circuit layers per second from the wall-clock timing
  model (model-CLOPS; host compute time is reported separately).

Reports embed the profile fingerprint and master seed, so every record is
reproducible from its (suite, width, depth, seed, profile) tuple.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind, ghz_circuit
from .profile import HardwareProfile, profile_fingerprint
from .simulator import (
    NoiseFlags,
    noiseless_probabilities,
    run,
)
from .transpile import TimingReport


class BenchError(ValueError):
    pass


@dataclass(frozen=True)
class BenchRecord:
    width: int
    depth: int
    metric: float
    shots: int
    seed: int
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "depth": self.depth,
            "metric": self.metric,
            "shots": self.shots,
            "seed": self.seed,
            **self.extra,
        }


@dataclass(frozen=True)
class BenchReport:
    suite: str
    profile_fingerprint: str
    master_seed: int
    records: tuple[BenchRecord, ...]
    summary: dict = field(default_factory=dict)

    def to_jsonl(self) -> str:
        """Line-delimited JSON records followed by one summary object."""
        lines = [
            json.dumps({"suite": self.suite, **r.to_dict()}, sort_keys=True)
            for r in self.records
        ]
        lines.append(
            json.dumps(
                {
                    "summary": {
                        "suite": self.suite,
                        "profile_fingerprint": self.profile_fingerprint,
                        "master_seed": self.master_seed,
                        "n_records": len(self.records),
                        **self.summary,
                    }
                },
                sort_keys=True,
            )
        )
        return "\n".join(lines) + "\n"

    def plot_csv(self) -> str:
        """Width-vs-metric CSV mirror of the records (pure function of them)."""
        rows = ["width,depth,metric"]
        rows.extend(f"{r.width},{r.depth},{r.metric!r}" for r in self.records)
        return "\n".join(rows) + "\n"


def _record_seed(master_seed: int, index: int) -> int:
    """Stable per-record seed derived from the master seed."""
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1)[0])


def ghz_sweep(
    profile: HardwareProfile,
    widths: Sequence[int],
    shots: int,
    seed: int,
    noise: NoiseFlags | str = "full",
) -> BenchReport:
    """GHZ fidelity proxy P(0^n)+P(1^n) for each width, full noise by default."""
    records = []
    for index, width in enumerate(widths):
        record_seed = _record_seed(seed, index)
        result = run(ghz_circuit(width), profile, shots, record_seed, noise=noise)
        metric = (
            result.histogram.get("0" * width, 0) + result.histogram.get("1" * width, 0)
        ) / shots
        records.append(
            BenchRecord(
                width=width,
                depth=width,  # H + (n-1) CNOTs
                metric=metric,
                shots=shots,
                seed=record_seed,
                extra={"metric_name": "ghz_survival"},
            )
        )
    metrics = [r.metric for r in records]
    return BenchReport(
        suite="ghz",
        profile_fingerprint=profile_fingerprint(profile),
        master_seed=seed,
        records=tuple(records),
        summary={"min_metric": min(metrics), "max_metric": max(metrics)},
    )


def random_native_circuit(width: int, depth: int, rng: np.random.Generator) -> Circuit:
    """Square-ish model circuit from native gates: per layer, one random
    rotation per qubit followed by a random disjoint CZ pairing."""
    kinds = (GateKind.RX, GateKind.RY, GateKind.RZ)
    gates: list[Gate] = []
    for _ in range(depth):
        for q in range(width):
            kind = kinds[int(rng.integers(len(kinds)))]
            gates.append(Gate(kind, (q,), float(rng.uniform(0.0, 2.0 * math.pi))))
        order = rng.permutation(width)
        for k in range(0, width - 1, 2):
            a, b = int(order[k]), int(order[k + 1])
            gates.append(Gate(GateKind.CZ, (min(a, b), max(a, b))))
    gates.append(Gate(GateKind.MEASURE_ALL, ()))
    return Circuit(n_qubits=width, gates=tuple(gates))


def heavy_set(ideal_probs: np.ndarray) -> set[str]:
    """Bitstrings whose noiseless probability strictly exceeds the median of
    the noiseless distribution."""
    n = int(math.log2(len(ideal_probs)))
    median = float(np.median(ideal_probs))
    return {
        format(i, f"0{n}b") for i, p in enumerate(ideal_probs) if p > median
    }


def heavy_output_fraction(heavy: set[str], histogram: dict[str, int]) -> float:
    total = sum(histogram.values())
    if total == 0:
        return 0.0
    return sum(c for b, c in histogram.items() if b in heavy) / total


def qv_heavy_output(
    profile: HardwareProfile,
    width: int,
    depth: int,
    n_circuits: int,
    shots: int,
    seed: int,
    noise: NoiseFlags | str = "full",
) -> BenchReport:
    """Heavy-output probability over random square circuits.

    The heavy set always comes from the noiseless oracle distribution, never
    from the noisy samples. Passing means the mean heavy-output probability
    exceeds 2/3 by more than two binomial standard errors.
    """
    if width != depth:
        raise BenchError(f"quantum-volume circuits are square; got {width}x{depth}")
    records = []
    heavy_counts = 0
    for index in range(n_circuits):
        record_seed = _record_seed(seed, index)
        circuit_rng = np.random.default_rng(record_seed)
        circuit = random_native_circuit(width, depth, circuit_rng)
        ideal = noiseless_probabilities(circuit)
        heavy = heavy_set(ideal)
        result = run(circuit, profile, shots, record_seed, noise=noise)
        hop = heavy_output_fraction(heavy, result.histogram)
        heavy_counts += round(hop * shots)
        records.append(
            BenchRecord(
                width=width,
                depth=depth,
                metric=hop,
                shots=shots,
                seed=record_seed,
                extra={
                    "metric_name": "heavy_output_probability",
                    "heavy_set_size": len(heavy),
                },
            )
        )
    total_shots = n_circuits * shots
    mean_hop = heavy_counts / total_shots
    # Conventional pass rule: mean HOP above 2/3 with a 2-sigma binomial margin.
    sigma = math.sqrt(max(mean_hop * (1.0 - mean_hop), 1e-12) / total_shots)
    passed = mean_hop - 2.0 * sigma > 2.0 / 3.0
    return BenchReport(
        suite="qv",
        profile_fingerprint=profile_fingerprint(profile),
        master_seed=seed,
        records=tuple(records),
        summary={
            "mean_heavy_output_probability": mean_hop,
            "threshold": 2.0 / 3.0,
            "two_sigma": 2.0 * sigma,
            "passed": bool(passed),
        },
    )


def clops_template(width: int, n_layers: int, seed: int) -> Circuit:
    """Parameterised model circuit: ``n_layers`` rotation layers, one shared
    (axis, angle) per layer so each maps to exactly one schedule layer."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xC10B5]))
    kinds = (GateKind.RX, GateKind.RY, GateKind.RZ)
    gates: list[Gate] = []
    for layer in range(n_layers):
        kind = kinds[layer % len(kinds)]
        angle = float(rng.uniform(0.0, 2.0 * math.pi))
        for q in range(width):
            gates.append(Gate(kind, (q,), angle))
    gates.append(Gate(GateKind.MEASURE_ALL, ()))
    return Circuit(n_qubits=width, gates=tuple(gates))


@dataclass(frozen=True)
class ClopsResult:
    layers_per_second: float
    template_layers: int
    n_shots: int
    timing: TimingReport
    host_seconds: float

    def to_dict(self) -> dict:
        return {
            "layers_per_second": self.layers_per_second,
            "template_layers": self.template_layers,
            "n_shots": self.n_shots,
            "host_seconds": self.host_seconds,
            "timing": self.timing.to_dict(),
        }


def clops_metric(
    profile: HardwareProfile,
    template_width: int,
    template_layers: int,
    n_shots: int,
    seed: int = 0,
) -> ClopsResult:
    """Model-CLOPS: (template_layers · n_shots) / t_total from the wall-clock
    model. Host compute time (transpile + model evaluation) is reported
    separately and does not enter the metric."""
    if template_width < 1 or template_layers < 1 or n_shots < 1:
        raise BenchError("template width, layers and shots must all be >= 1")
    from .prep import target_block
    from .profile import build_connectivity
    from .transpile import transpile
    from .circuit import lower_to_native

    host_start = time.perf_counter()
    circuit = lower_to_native(clops_template(template_width, template_layers, seed))
    graph = build_connectivity(profile, target_block(profile.lattice, template_width))
    result = transpile(circuit, profile, graph, n_shots=n_shots)
    host_seconds = time.perf_counter() - host_start
    report = result.report
    layers_per_second = template_layers * n_shots / report.t_total_s
    return ClopsResult(
        layers_per_second=layers_per_second,
        template_layers=template_layers,
        n_shots=n_shots,
        timing=report,
        host_seconds=host_seconds,
    )
