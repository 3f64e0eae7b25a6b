"""Monte-Carlo trajectory state-vector execution of transpiled schedules.

Each shot prepares a register, then walks the schedule layer by layer: layer
participants receive the exact gate unitary followed by depolarizing noise
derived from the profile fidelities; idle qubits accumulate T1/T2/T2* damage
for the layer's duration; every surviving atom can be lost to the finite trap
lifetime. Readout flips each bit independently, and a lost atom always reads
as 1 (a dark spot is indistinguishable from |1⟩).

Shots draw independent RNG streams from ``SeedSequence(seed).spawn(n_shots)``,
so histograms are bit-identical regardless of the number of workers.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, CircuitError, Gate, GateKind, lower_to_native
from .prep import prepare_register, target_block
from .profile import (
    ConnectivityGraph,
    HardwareProfile,
    build_connectivity,
    profile_fingerprint,
)
from .transpile import Schedule, TimingReport, transpile

STATEVECTOR_QUBIT_CAP = 20


class SimulationError(RuntimeError):
    pass


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex
    )


_PAULIS = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}


class StateVector:
    """2^n complex amplitudes over atom wires plus per-wire loss flags.

    Bit convention: wire 0 is the most significant bit of the amplitude
    index, so ``format(index, f"0{n}b")`` reads as the wire bitstring.
    """

    def __init__(self, n: int):
        if n > STATEVECTOR_QUBIT_CAP:
            raise SimulationError(
                f"{n} qubits exceeds the state-vector cap of {STATEVECTOR_QUBIT_CAP}"
            )
        self.n = n
        self.amps = np.zeros(2**n, dtype=complex)
        self.amps[0] = 1.0
        self.lost = np.zeros(n, dtype=bool)

    def copy(self) -> "StateVector":
        out = StateVector.__new__(StateVector)
        out.n = self.n
        out.amps = self.amps.copy()
        out.lost = self.lost.copy()
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def renormalize(self) -> None:
        self.amps /= np.linalg.norm(self.amps)

    def apply_1q(self, matrix: np.ndarray, wire: int) -> None:
        n = self.n
        shaped = self.amps.reshape(2**wire, 2, 2 ** (n - wire - 1))
        self.amps = np.einsum("ab,ibj->iaj", matrix, shaped).reshape(-1)

    def apply_phase_all_ones(self, wires: tuple[int, ...], phase: complex = -1.0) -> None:
        """Multiply amplitudes where every listed wire is |1⟩ (CZ/CCZ/CkZ)."""
        idx = np.arange(2**self.n)
        mask = np.ones(2**self.n, dtype=bool)
        for w in wires:
            mask &= (idx >> (self.n - 1 - w)) & 1 == 1
        self.amps[mask] *= phase

    def apply_swap(self, a: int, b: int) -> None:
        shaped = self.amps.reshape((2,) * self.n)
        self.amps = np.swapaxes(shaped, a, b).reshape(-1).copy()

    def probability_one(self, wire: int) -> float:
        idx = np.arange(2**self.n)
        mask = (idx >> (self.n - 1 - wire)) & 1 == 1
        return float(np.sum(np.abs(self.amps[mask]) ** 2))

    def project(self, wire: int, value: int) -> None:
        """Collapse one wire (used by the amplitude-damping jump branch)."""
        idx = np.arange(2**self.n)
        bit = (idx >> (self.n - 1 - wire)) & 1
        if value == 0:
            # decay |1⟩ -> |0⟩: move population, zero the |1⟩ block
            shaped = self.amps.reshape(2**wire, 2, 2 ** (self.n - wire - 1))
            shaped[:, 0, :] = shaped[:, 1, :]
            shaped[:, 1, :] = 0.0
            self.amps = shaped.reshape(-1)
        else:
            self.amps[bit == 0] = 0.0
        self.renormalize()

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True)
class NoiseFlags:
    gates: bool = True
    idle: bool = True
    t2_star: bool = True
    loss: bool = True
    readout: bool = True

    @staticmethod
    def off() -> "NoiseFlags":
        return NoiseFlags(False, False, False, False, False)

    @staticmethod
    def gates_only() -> "NoiseFlags":
        return NoiseFlags(True, False, False, False, False)

    @staticmethod
    def full() -> "NoiseFlags":
        return NoiseFlags()

    @staticmethod
    def from_level(level: str) -> "NoiseFlags":
        presets = {"off": NoiseFlags.off(), "gates": NoiseFlags.gates_only(), "full": NoiseFlags.full()}
        try:
            return presets[level]
        except KeyError:
            raise SimulationError(f"unknown noise level {level!r}; use off|gates|full") from None


def fidelity_to_depolarizing(fidelity: float, n_targets: int) -> float:
    """Depolarizing probability reproducing a given average gate fidelity:
    p = (1 - F)·(d + 1)/d with d = 2^n_targets."""
    if not (0.0 < fidelity <= 1.0):
        raise SimulationError(f"fidelity must be in (0, 1], got {fidelity}")
    if n_targets not in (1, 2, 3):
        raise SimulationError(f"n_targets must be 1, 2 or 3, got {n_targets}")
    d = 2.0**n_targets
    p = (1.0 - fidelity) * (d + 1.0) / d
    if p > 1.0:
        warnings.warn(
            f"depolarizing probability {p:.4f} > 1 for F={fidelity}; clamping", stacklevel=2
        )
        p = 1.0
    return p


@dataclass(frozen=True)
class NoiseModel:
    """Channel parameters derived from a profile, with per-channel switches."""

    p_1q: float
    p_2q: float
    t1_s: float
    t2_s: float
    t2_star_s: float
    trap_lifetime_s: float
    f_readout: float
    flags: NoiseFlags = field(default_factory=NoiseFlags)
    t2_star_model: str = "gaussian"  # or "exponential"

    def __post_init__(self):
        if not (0.0 <= self.p_1q <= 1.0 and 0.0 <= self.p_2q <= 1.0):
            raise SimulationError("depolarizing probabilities must be in [0, 1]")
        if self.dephasing_rate() < -1e-15:
            raise SimulationError(
                f"1/Tφ = 1/t2 - 1/(2·t1) must be >= 0 (t1={self.t1_s}, t2={self.t2_s})"
            )
        if self.t2_star_model not in ("gaussian", "exponential"):
            raise SimulationError(f"unknown t2_star_model {self.t2_star_model!r}")

    def dephasing_rate(self) -> float:
        return 1.0 / self.t2_s - 1.0 / (2.0 * self.t1_s)

    @staticmethod
    def from_profile(profile: HardwareProfile, flags: NoiseFlags | None = None) -> "NoiseModel":
        return NoiseModel(
            p_1q=fidelity_to_depolarizing(profile.f_1q, 1),
            p_2q=fidelity_to_depolarizing(profile.f_2q, 2),
            t1_s=profile.t1,
            t2_s=profile.t2,
            t2_star_s=profile.t2_star,
            trap_lifetime_s=profile.trap_lifetime,
            f_readout=profile.f_readout,
            flags=flags if flags is not None else NoiseFlags(),
        )


@dataclass
class NoiseEventCounts:
    pauli_errors: int = 0
    damping_jumps: int = 0
    dephasing_flips: int = 0
    loss_events: int = 0
    readout_flips: int = 0
    skipped_gates: int = 0

    def merge(self, other: "NoiseEventCounts") -> None:
        self.pauli_errors += other.pauli_errors
        self.damping_jumps += other.damping_jumps
        self.dephasing_flips += other.dephasing_flips
        self.loss_events += other.loss_events
        self.readout_flips += other.readout_flips
        self.skipped_gates += other.skipped_gates

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def apply_gate(state: StateVector, gate: Gate, events: NoiseEventCounts | None = None) -> StateVector:
    """Exact unitary of one native gate on the designated wires. Gates touching
    a lost atom are skipped (identity) and recorded as loss shadows."""
    if gate.kind is GateKind.MEASURE_ALL:
        return state
    if any(state.lost[w] for w in gate.qubits):
        if events is not None:
            events.skipped_gates += 1
        return state
    if gate.kind is GateKind.RX:
        state.apply_1q(rx_matrix(gate.angle), gate.qubits[0])
    elif gate.kind is GateKind.RY:
        state.apply_1q(ry_matrix(gate.angle), gate.qubits[0])
    elif gate.kind is GateKind.RZ:
        state.apply_1q(rz_matrix(gate.angle), gate.qubits[0])
    elif gate.kind in (GateKind.CZ, GateKind.CCZ, GateKind.CKZ):
        state.apply_phase_all_ones(gate.qubits)
    elif gate.kind is GateKind.SWAP:
        state.apply_swap(*gate.qubits)
    else:
        raise SimulationError(f"non-native gate {gate.kind.value} reached the simulator")
    return state


def _apply_random_pauli(
    state: StateVector, wires: tuple[int, ...], rng: np.random.Generator
) -> None:
    """Uniformly random non-identity Pauli on the support."""
    m = len(wires)
    k = int(rng.integers(1, 4**m))
    for w in wires:
        k, digit = divmod(k, 4)
        if digit:
            state.apply_1q(_PAULIS[digit], w)


def apply_gate_noise(
    state: StateVector,
    wires: tuple[int, ...],
    model: NoiseModel,
    rng: np.random.Generator,
    events: NoiseEventCounts,
) -> None:
    """Depolarizing draw after a gate. Any multi-qubit gate uses the two-qubit
    error rate (no separate CCZ/CkZ fidelity is available); the random Pauli
    acts on the gate's full live support."""
    live = tuple(w for w in wires if not state.lost[w])
    if not live:
        return
    p = model.p_1q if len(wires) == 1 else model.p_2q
    if rng.random() < p:
        _apply_random_pauli(state, live, rng)
        events.pauli_errors += 1


def idle_decoherence(
    state: StateVector,
    wire: int,
    duration_us: float,
    model: NoiseModel,
    rng: np.random.Generator,
    events: NoiseEventCounts | None = None,
    detuning_rad_per_s: float = 0.0,
) -> StateVector:
    """Quantum-jump idle noise on one wire for ``duration_us``.

    T1: amplitude-damping jump with probability (1 - e^{-t/T1})·P(|1⟩), with
    renormalized no-jump Kraus evolution otherwise. T2: pure-dephasing phase
    flip with probability (1 - e^{-t/Tφ})/2. T2*: deterministic phase from the
    shot's static frequency offset.
    """
    if duration_us < 0:
        raise SimulationError(f"duration must be >= 0, got {duration_us}")
    if duration_us == 0.0 or state.lost[wire]:
        return state
    t_s = duration_us * 1e-6
    events = events if events is not None else NoiseEventCounts()

    gamma = 1.0 - math.exp(-t_s / model.t1_s)
    p1 = state.probability_one(wire)
    if rng.random() < gamma * p1:
        state.project(wire, 0)
        events.damping_jumps += 1
    else:
        no_jump = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
        state.apply_1q(no_jump, wire)
        state.renormalize()

    phi_rate = model.dephasing_rate()
    if phi_rate > 0.0:
        p_flip = (1.0 - math.exp(-t_s * phi_rate)) / 2.0
        if rng.random() < p_flip:
            state.apply_1q(_PAULIS[3], wire)
            events.dephasing_flips += 1

    if detuning_rad_per_s != 0.0:
        phase = np.exp(-1j * detuning_rad_per_s * t_s)
        state.apply_1q(np.array([[1.0, 0.0], [0.0, phase]], dtype=complex), wire)
    return state


def atom_loss(
    state: StateVector,
    elapsed_us: float,
    trap_lifetime_s: float,
    rng: np.random.Generator,
    events: NoiseEventCounts | None = None,
) -> StateVector:
    """Mark each surviving atom lost with probability 1 - e^{-t/τ}. Lost atoms
    receive no further gates and read out as bit 1."""
    if elapsed_us < 0:
        raise SimulationError(f"elapsed must be >= 0, got {elapsed_us}")
    if elapsed_us == 0.0 or not math.isfinite(trap_lifetime_s):
        return state
    p_loss = 1.0 - math.exp(-(elapsed_us * 1e-6) / trap_lifetime_s)
    if p_loss <= 0.0:
        return state
    for w in range(state.n):
        if not state.lost[w] and rng.random() < p_loss:
            state.lost[w] = True
            if events is not None:
                events.loss_events += 1
    return state


def sample_detunings(n: int, model: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """Per-shot static frequency offsets (rad/s). Gaussian with σ = √2/T2*
    gives the e^{-(t/T2*)²} ensemble decay; the exponential alternative draws
    a Lorentzian (Cauchy) offset instead."""
    if not model.flags.t2_star:
        return np.zeros(n)
    if model.t2_star_model == "gaussian":
        sigma = math.sqrt(2.0) / model.t2_star_s
        return rng.normal(0.0, sigma, size=n)
    return rng.standard_cauchy(n) / model.t2_star_s


@dataclass(frozen=True)
class ShotResult:
    bitstring: str
    elapsed_ms: float
    lost_qubits: tuple[int, ...]
    events: NoiseEventCounts


@dataclass(frozen=True)
class RunResult:
    histogram: dict[str, int]
    timing: TimingReport
    diagnostics: dict
    profile_fingerprint: str
    seed: int
    shots: tuple[ShotResult, ...] = ()

    def probability(self, bitstring: str) -> float:
        total = sum(self.histogram.values())
        return self.histogram.get(bitstring, 0) / total if total else 0.0


def _execute_layers(
    state: StateVector,
    sched: Schedule,
    model: NoiseModel,
    rng: np.random.Generator,
    detunings: np.ndarray,
    events: NoiseEventCounts,
) -> None:
    for layer in sched.layers:
        if layer.kind == "measure":
            continue
        if model.flags.loss:
            atom_loss(state, layer.duration_us, model.trap_lifetime_s, rng, events)
        # Gate-layer participants get gate noise instead of idle channels; a
        # shuttled atom has no gate, so it idles through its own transport.
        participants = set(layer.wires()) if layer.kind != "shuttle" else set()
        if layer.kind == "sq":
            matrix = {
                GateKind.RX: rx_matrix,
                GateKind.RY: ry_matrix,
                GateKind.RZ: rz_matrix,
            }[layer.gate](layer.angle)
            for group in layer.groups:
                for w in group:
                    if state.lost[w]:
                        events.skipped_gates += 1
                        continue
                    state.apply_1q(matrix, w)
                    if model.flags.gates:
                        apply_gate_noise(state, (w,), model, rng, events)
        elif layer.kind in ("cz", "swap", "ckz"):
            # CZ/CCZ/CkZ share the all-ones phase-flip unitary; SWAP differs.
            kind = GateKind.SWAP if layer.kind == "swap" else GateKind.CKZ
            for group in layer.groups:
                apply_gate(state, Gate(kind, group), events)
                if model.flags.gates and not any(state.lost[w] for w in group):
                    apply_gate_noise(state, group, model, rng, events)
        elif layer.kind == "shuttle":
            pass  # relocation is timing/geometry only; the state is untouched
        else:
            raise SimulationError(f"unknown layer kind {layer.kind!r}")
        if model.flags.idle or model.flags.t2_star:
            for w in range(state.n):
                if w in participants or state.lost[w]:
                    continue
                if model.flags.idle:
                    idle_decoherence(
                        state, w, layer.duration_us, model, rng, events,
                        detuning_rad_per_s=detunings[w] if model.flags.t2_star else 0.0,
                    )
                elif detunings[w] != 0.0:
                    phase = np.exp(-1j * detunings[w] * layer.duration_us * 1e-6)
                    state.apply_1q(np.array([[1, 0], [0, phase]], dtype=complex), w)


def _readout(
    state: StateVector,
    sched: Schedule,
    model: NoiseModel,
    rng: np.random.Generator,
    events: NoiseEventCounts,
) -> str:
    probs = state.probabilities()
    probs = probs / probs.sum()
    index = int(rng.choice(len(probs), p=probs))
    bits = [(index >> (state.n - 1 - w)) & 1 for w in range(state.n)]
    if model.flags.readout:
        flip_p = 1.0 - model.f_readout
        for w in range(state.n):
            if rng.random() < flip_p:
                bits[w] ^= 1
                events.readout_flips += 1
    for w in range(state.n):
        if state.lost[w]:
            bits[w] = 1  # dark spot, indistinguishable from |1⟩
    # Undo the routing permutation: logical qubit l was carried by wire fw[l].
    fw = sched.logical_to_wire_final
    return "".join(str(bits[fw[l]]) for l in range(state.n))


def run_shot(
    sched: Schedule,
    profile: HardwareProfile,
    model: NoiseModel,
    rng: np.random.Generator,
    max_prep_retries: int = 100,
) -> ShotResult:
    """One full machine cycle: prepare, execute layers, read out."""
    prep = prepare_register(profile, sched.n_wires, rng, max_retries=max_prep_retries)
    events = NoiseEventCounts()
    state = StateVector(sched.n_wires)
    detunings = sample_detunings(sched.n_wires, model, rng)
    _execute_layers(state, sched, model, rng, detunings, events)
    bitstring = _readout(state, sched, model, rng, events)
    gate_time_us = math.fsum(l.duration_us for l in sched.layers if l.kind != "measure")
    elapsed_ms = prep.elapsed_ms + gate_time_us / 1000.0 + profile.t_readout
    return ShotResult(
        bitstring=bitstring,
        elapsed_ms=elapsed_ms,
        lost_qubits=tuple(int(w) for w in np.nonzero(state.lost)[0]),
        events=events,
    )


def run(
    circuit: Circuit,
    profile: HardwareProfile,
    n_shots: int,
    seed: int,
    noise: NoiseFlags | str = "full",
    mode: str = "swap",
    n_workers: int = 1,
    max_prep_retries: int = 100,
    keep_shots: bool = False,
    graph: ConnectivityGraph | None = None,
) -> RunResult:
    """Full pipeline: lower → transpile once → per-shot prepare/execute/readout.

    Deterministic for a fixed seed, independent of ``n_workers``: shot i draws
    its RNG from the i-th spawn of ``SeedSequence(seed)`` and results merge in
    shot order.
    """
    flags = NoiseFlags.from_level(noise) if isinstance(noise, str) else noise
    if circuit.n_qubits > STATEVECTOR_QUBIT_CAP:
        raise SimulationError(
            f"{circuit.n_qubits} qubits exceeds the state-vector cap "
            f"of {STATEVECTOR_QUBIT_CAP}"
        )
    if circuit.n_qubits > profile.qubit_capacity:
        raise SimulationError(
            f"circuit needs {circuit.n_qubits} qubits, capacity is {profile.qubit_capacity}"
        )
    lowered = lower_to_native(circuit)
    measure_idx = [i for i, g in enumerate(lowered.gates) if g.kind is GateKind.MEASURE_ALL]
    if measure_idx and (len(measure_idx) > 1 or measure_idx[0] != len(lowered.gates) - 1):
        raise CircuitError("terminal measurement only")

    if graph is None:
        graph = build_connectivity(profile, target_block(profile.lattice, circuit.n_qubits))
    result = transpile(lowered, profile, graph, mode=mode, n_shots=n_shots)
    sched = result.schedule
    model = NoiseModel.from_profile(profile, flags)

    children = np.random.SeedSequence(seed).spawn(n_shots)

    def one(i: int) -> ShotResult:
        rng = np.random.default_rng(children[i])
        return run_shot(sched, profile, model, rng, max_prep_retries=max_prep_retries)

    if n_workers <= 1:
        shots = [one(i) for i in range(n_shots)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            shots = list(pool.map(one, range(n_shots)))

    histogram: dict[str, int] = {}
    events = NoiseEventCounts()
    prep_ms = 0.0
    for s in shots:
        histogram[s.bitstring] = histogram.get(s.bitstring, 0) + 1
        events.merge(s.events)
    prep_ms = math.fsum(s.elapsed_ms for s in shots)
    diagnostics = {
        "noise_events": events.to_dict(),
        "mean_shot_elapsed_ms": prep_ms / n_shots if n_shots else 0.0,
        "inserted_swaps": result.routed.n_inserted_swaps,
        "shuttles": result.routed.n_shuttles,
        "routing_mode": mode,
    }
    return RunResult(
        histogram=dict(sorted(histogram.items())),
        timing=result.report,
        diagnostics=diagnostics,
        profile_fingerprint=profile_fingerprint(profile),
        seed=seed,
        shots=tuple(shots) if keep_shots else (),
    )


def statevector(circuit: Circuit) -> np.ndarray:
    """Exact noiseless amplitudes of a circuit (lowered first; no placement or
    routing). Wire i is logical qubit i; bit order as in :class:`StateVector`."""
    lowered = lower_to_native(circuit)
    state = StateVector(lowered.n_qubits)
    for gate in lowered.gates:
        apply_gate(state, gate)
    return state.amps


def noiseless_probabilities(circuit: Circuit) -> np.ndarray:
    return np.abs(statevector(circuit)) ** 2
