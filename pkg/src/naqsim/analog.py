"""Analog-mode Rydberg evolution on 2D atom layouts and adiabatic MIS sweeps.

Atoms are two-level systems (ground |0⟩, Rydberg |r⟩) driven by a global pulse

    H(t) = Σ_i Ω(t)/2 (|0⟩⟨r| + |r⟩⟨0|)_i  -  Δ(t) Σ_i n_i  +  Σ_{i<j} C/r_ij^a n_i n_j

with n = |r⟩⟨r| and a van-der-Waals tail (exponent a, default 6). The
interaction constant is fixed by C = Ω_max · R_b^a, which makes the blockade
radius the distance where the pair interaction equals the peak drive.

Time evolution uses a fixed-step 4th-order commutator-free Magnus integrator;
each substep exponential is applied by a Taylor series run to machine
precision, so the propagation is unitary to rounding error. Vertex sets
sampled from the final state are repaired into independent sets by greedy
removal, so every reported MIS candidate is feasible by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

ANALOG_QUBIT_CAP = 16
BRUTE_FORCE_CAP = 20

# 4th-order commutator-free Magnus coefficients (Gauss-Legendre nodes).
_CF4_NODE_1 = 0.5 - math.sqrt(3.0) / 6.0
_CF4_NODE_2 = 0.5 + math.sqrt(3.0) / 6.0
_CF4_A1 = 0.25 + math.sqrt(3.0) / 6.0
_CF4_A2 = 0.25 - math.sqrt(3.0) / 6.0


class AnalogError(ValueError):
    pass


class StepSizeError(AnalogError):
    """Requested integration step violates the stability precondition."""


@dataclass(frozen=True)
class AtomLayout:
    """Atom positions (µm) with the drive/interaction scales of the machine."""

    positions: tuple[tuple[float, float], ...]
    blockade_radius_um: float
    rabi_max: float  # rad/µs
    interaction_exponent: int = 6

    def __post_init__(self):
        if self.blockade_radius_um <= 0:
            raise AnalogError(f"blockade radius must be > 0, got {self.blockade_radius_um}")
        if self.rabi_max <= 0:
            raise AnalogError(f"rabi_max must be > 0, got {self.rabi_max}")
        if self.interaction_exponent < 1:
            raise AnalogError("interaction exponent must be >= 1")
        n = len(self.positions)
        for i in range(n):
            for j in range(i + 1, n):
                if math.dist(self.positions[i], self.positions[j]) < 1e-9:
                    raise AnalogError(f"atoms {i} and {j} share a position")

    @property
    def n_atoms(self) -> int:
        return len(self.positions)

    @property
    def c6(self) -> float:
        """Interaction constant: pair energy at the blockade radius equals Ω_max."""
        return self.rabi_max * self.blockade_radius_um**self.interaction_exponent

    def pair_distance(self, i: int, j: int) -> float:
        return math.dist(self.positions[i], self.positions[j])

    def interaction(self, i: int, j: int) -> float:
        return self.c6 / self.pair_distance(i, j) ** self.interaction_exponent


def layout_from_positions(
    positions: Sequence[Sequence[float]],
    blockade_radius_um: float,
    rabi_max: float = 1.0,
    interaction_exponent: int = 6,
) -> AtomLayout:
    return AtomLayout(
        positions=tuple((float(x), float(y)) for x, y in positions),
        blockade_radius_um=blockade_radius_um,
        rabi_max=rabi_max,
        interaction_exponent=interaction_exponent,
    )


@dataclass(frozen=True)
class UnitDiskGraph:
    """Edges exactly between atoms within the blockade radius."""

    n_nodes: int
    edges: frozenset[tuple[int, int]]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(b if a == v else a for a, b in self.edges if v in (a, b)))

    def is_independent(self, vertices: Sequence[int]) -> bool:
        vs = set(vertices)
        return not any(a in vs and b in vs for a, b in self.edges)


def unit_disk_graph(layout: AtomLayout) -> UnitDiskGraph:
    edges = set()
    n = layout.n_atoms
    for i in range(n):
        for j in range(i + 1, n):
            if layout.pair_distance(i, j) <= layout.blockade_radius_um + 1e-12:
                edges.add((i, j))
    return UnitDiskGraph(n_nodes=n, edges=frozenset(edges))


@dataclass(frozen=True)
class SweepSchedule:
    """Piecewise-linear Ω(t) and Δ(t) over [0, total_time] (µs, rad/µs)."""

    total_time: float
    omega_points: tuple[tuple[float, float], ...]
    delta_points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.total_time <= 0:
            raise AnalogError(f"total_time must be > 0, got {self.total_time}")
        for pts in (self.omega_points, self.delta_points):
            if len(pts) < 1 or any(not math.isfinite(t) or not math.isfinite(v) for t, v in pts):
                raise AnalogError("sweep breakpoints must be finite and non-empty")
            if list(pts) != sorted(pts, key=lambda p: p[0]):
                raise AnalogError("sweep breakpoints must be time-sorted")

    def omega(self, t: float) -> float:
        ts, vs = zip(*self.omega_points)
        return float(np.interp(t, ts, vs))

    def delta(self, t: float) -> float:
        ts, vs = zip(*self.delta_points)
        return float(np.interp(t, ts, vs))

    @property
    def max_omega(self) -> float:
        return max(abs(v) for _, v in self.omega_points)

    @property
    def max_delta(self) -> float:
        return max(abs(v) for _, v in self.delta_points)


def constant_drive(omega: float, delta: float, total_time: float) -> SweepSchedule:
    return SweepSchedule(
        total_time=total_time,
        omega_points=((0.0, omega), (total_time, omega)),
        delta_points=((0.0, delta), (total_time, delta)),
    )


def mis_sweep(rabi_max: float, total_time: float) -> SweepSchedule:
    """Default adiabatic MIS sweep: Ω ramps 0 → Ω_max → 0 over the first and
    last 10% of the window; Δ runs linearly from -Ω_max to +2·Ω_max. Desk-scale
    defaults, not hardware numbers."""
    t_ramp = 0.1 * total_time
    return SweepSchedule(
        total_time=total_time,
        omega_points=(
            (0.0, 0.0),
            (t_ramp, rabi_max),
            (total_time - t_ramp, rabi_max),
            (total_time, 0.0),
        ),
        delta_points=((0.0, -rabi_max), (total_time, 2.0 * rabi_max)),
    )


def _interaction_diagonal(layout: AtomLayout) -> np.ndarray:
    """Σ_{i<j} V_ij n_i n_j evaluated on every basis state (r ↦ bit 1; atom 0
    is the most significant bit)."""
    n = layout.n_atoms
    dim = 2**n
    diag = np.zeros(dim)
    idx = np.arange(dim)
    bits = [(idx >> (n - 1 - i)) & 1 for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            diag += layout.interaction(i, j) * (bits[i] & bits[j])
    return diag


def _excitation_count(n: int) -> np.ndarray:
    idx = np.arange(2**n)
    counts = np.zeros(2**n)
    for i in range(n):
        counts += (idx >> i) & 1
    return counts


def build_hamiltonian(layout: AtomLayout, omega: float, delta: float):
    """Sparse Hermitian H for fixed (Ω, Δ); 2^n dimensional, n ≤ 16."""
    from scipy.sparse import csr_matrix, diags, identity, kron

    n = layout.n_atoms
    if n > ANALOG_QUBIT_CAP:
        raise AnalogError(f"{n} atoms exceeds the analog cap of {ANALOG_QUBIT_CAP}")
    sx = csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    h = csr_matrix((2**n, 2**n))
    for i in range(n):
        op = identity(2**i, format="csr")
        op = kron(op, sx, format="csr")
        op = kron(op, identity(2 ** (n - i - 1), format="csr"), format="csr")
        h = h + (omega / 2.0) * op
    diag = _interaction_diagonal(layout) - delta * _excitation_count(n)
    return h + diags(diag)


def max_rate(layout: AtomLayout, sweep: SweepSchedule) -> float:
    """Fastest frequency scale of the problem: max(Ω, |Δ|, nearest-pair V)."""
    n = layout.n_atoms
    v_nearest = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            v_nearest = max(v_nearest, layout.interaction(i, j))
    return max(sweep.max_omega, sweep.max_delta, v_nearest)


def stable_timestep(layout: AtomLayout, sweep: SweepSchedule) -> float:
    return 0.01 / max_rate(layout, sweep)


@dataclass(frozen=True)
class EvolutionResult:
    amplitudes: np.ndarray
    norm_drift: float
    n_steps: int

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


from numba import njit


@njit(cache=True)
def _taylor_exp_kernel(psi, cx, cdiag, n_atoms):
    """ψ ← exp(A)ψ with A·v = cx·(Σ_i flip_i v) + cdiag∘v, Taylor to machine
    precision. The σx sum is evaluated through the XOR structure of the basis
    (neighbour j ^ 2^i), which keeps the kernel allocation-free."""
    dim = psi.size
    result = psi.copy()
    term = psi.copy()
    flipped = np.empty_like(psi)
    for k in range(1, 60):
        for j in range(dim):
            acc = 0.0 + 0.0j
            for i in range(n_atoms):
                acc += term[j ^ (1 << i)]
            flipped[j] = acc
        inv_k = 1.0 / k
        term_norm_sq = 0.0
        result_norm_sq = 0.0
        for j in range(dim):
            value = (cx * flipped[j] + cdiag[j] * term[j]) * inv_k
            term[j] = value
            result[j] += value
            term_norm_sq += value.real * value.real + value.imag * value.imag
            result_norm_sq += (
                result[j].real * result[j].real + result[j].imag * result[j].imag
            )
        if term_norm_sq < 1e-30 * result_norm_sq:
            break
    return result


class _Propagator:
    """Applies exp(cx·Hx + diag) · ψ, where Hx is the global σx sum and diag
    collects detuning plus interactions. All coefficients are pre-multiplied
    by -i·dt by the caller."""

    def __init__(self, layout: AtomLayout):
        self.n = layout.n_atoms
        self.vdiag = _interaction_diagonal(layout)
        self.counts = _excitation_count(self.n)

    def apply_exp(self, psi: np.ndarray, cx: complex, cdiag: np.ndarray) -> np.ndarray:
        return _taylor_exp_kernel(
            np.ascontiguousarray(psi, dtype=np.complex128),
            complex(cx),
            np.ascontiguousarray(cdiag, dtype=np.complex128),
            self.n,
        )


def evolve(
    layout: AtomLayout,
    sweep: SweepSchedule,
    dt: float,
    initial_state: np.ndarray | None = None,
) -> EvolutionResult:
    """Integrate the Schrödinger equation across the sweep with fixed step ``dt``.

    Precondition: ``dt ≤ 0.01 / max(Ω_max, |Δ|_max, V_nearest)`` (raises
    :class:`StepSizeError` otherwise). The final state is renormalized and the
    accumulated norm drift reported.
    """
    n = layout.n_atoms
    if n > ANALOG_QUBIT_CAP:
        raise AnalogError(f"{n} atoms exceeds the analog cap of {ANALOG_QUBIT_CAP}")
    limit = stable_timestep(layout, sweep)
    if dt > limit * (1.0 + 1e-12):
        raise StepSizeError(f"dt={dt:g} exceeds the stability bound {limit:g}")

    prop = _Propagator(layout)
    if initial_state is None:
        psi = np.zeros(2**n, dtype=complex)
        psi[0] = 1.0
    else:
        psi = np.asarray(initial_state, dtype=complex).copy()
        if psi.shape != (2**n,):
            raise AnalogError(f"initial state must have length {2**n}")

    # Integrate each linear sweep segment separately so no step straddles a
    # breakpoint kink; within a segment H(t) is smooth and CF4 is 4th order.
    breakpoints = sorted(
        {0.0, sweep.total_time}
        | {t for t, _ in sweep.omega_points if 0.0 < t < sweep.total_time}
        | {t for t, _ in sweep.delta_points if 0.0 < t < sweep.total_time}
    )
    total_steps = 0
    for seg_start, seg_end in zip(breakpoints, breakpoints[1:]):
        seg_len = seg_end - seg_start
        n_steps = max(1, math.ceil(seg_len / dt - 1e-12))
        step = seg_len / n_steps
        total_steps += n_steps
        starts = seg_start + step * np.arange(n_steps)
        om_ts, om_vs = zip(*sweep.omega_points)
        de_ts, de_vs = zip(*sweep.delta_points)
        o1s = np.interp(starts + _CF4_NODE_1 * step, om_ts, om_vs)
        o2s = np.interp(starts + _CF4_NODE_2 * step, om_ts, om_vs)
        d1s = np.interp(starts + _CF4_NODE_1 * step, de_ts, de_vs)
        d2s = np.interp(starts + _CF4_NODE_2 * step, de_ts, de_vs)
        half_step = -1j * step / 2.0
        for k in range(n_steps):
            o1, o2, d1, d2 = o1s[k], o2s[k], d1s[k], d2s[k]
            for a_first, a_second in ((_CF4_A1, _CF4_A2), (_CF4_A2, _CF4_A1)):
                omega_eff = a_first * o1 + a_second * o2
                delta_eff = a_first * d1 + a_second * d2
                cx = half_step * omega_eff
                cdiag = (-1j * step) * (
                    (a_first + a_second) * prop.vdiag - delta_eff * prop.counts
                )
                psi = prop.apply_exp(psi, cx, cdiag)

    norm = float(np.linalg.norm(psi))
    drift = abs(norm - 1.0)
    psi = psi / norm
    return EvolutionResult(amplitudes=psi, norm_drift=drift, n_steps=total_steps)


def repair_independent(vertices: Sequence[int], graph: UnitDiskGraph) -> tuple[int, ...]:
    """Greedily remove a vertex from every violated edge until the set is
    independent (highest violation count first; ties to the lower index)."""
    current = set(vertices)
    while True:
        violations: dict[int, int] = {}
        for a, b in graph.edges:
            if a in current and b in current:
                violations[a] = violations.get(a, 0) + 1
                violations[b] = violations.get(b, 0) + 1
        if not violations:
            return tuple(sorted(current))
        worst = min(violations, key=lambda v: (-violations[v], v))
        current.discard(worst)


@dataclass(frozen=True)
class MisResult:
    graph: UnitDiskGraph
    sets: tuple[tuple[int, ...], ...]
    best_set: tuple[int, ...]
    best_size: int
    mean_size: float
    norm_drift: float


def sample_mis(
    layout: AtomLayout,
    sweep: SweepSchedule,
    n_shots: int,
    rng: np.random.Generator,
    dt: float | None = None,
) -> MisResult:
    """Anneal once, sample ``n_shots`` bitstrings from the final state, map
    Rydberg excitations to vertex sets and repair them into independent sets."""
    if n_shots < 1:
        raise AnalogError(f"n_shots must be >= 1, got {n_shots}")
    graph = unit_disk_graph(layout)
    if dt is None:
        dt = stable_timestep(layout, sweep)
    result = evolve(layout, sweep, dt)
    probs = result.probabilities()
    probs = probs / probs.sum()
    n = layout.n_atoms
    indices = rng.choice(len(probs), size=n_shots, p=probs)
    sets = []
    for index in indices:
        excited = [i for i in range(n) if (index >> (n - 1 - i)) & 1]
        sets.append(repair_independent(excited, graph))
    sizes = [len(s) for s in sets]
    best_idx = max(range(len(sets)), key=lambda i: sizes[i])
    return MisResult(
        graph=graph,
        sets=tuple(sets),
        best_set=sets[best_idx],
        best_size=sizes[best_idx],
        mean_size=float(np.mean(sizes)),
        norm_drift=result.norm_drift,
    )


def brute_force_mis(graph: UnitDiskGraph) -> tuple[int, tuple[int, ...]]:
    """Exact maximum independent set by branch and bound (n ≤ 20)."""
    n = graph.n_nodes
    if n > BRUTE_FORCE_CAP:
        raise AnalogError(f"{n} nodes exceeds the brute-force cap of {BRUTE_FORCE_CAP}")
    neighbor_mask = [0] * n
    for a, b in graph.edges:
        neighbor_mask[a] |= 1 << b
        neighbor_mask[b] |= 1 << a

    best_size = 0
    best_set = 0

    def search(candidates: int, chosen: int, size: int) -> None:
        nonlocal best_size, best_set
        if size + candidates.bit_count() <= best_size:
            return
        if candidates == 0:
            if size > best_size:
                best_size = size
                best_set = chosen
            return
        # branch on the candidate with the most candidate neighbors
        v = max(
            (i for i in range(n) if candidates >> i & 1),
            key=lambda i: (neighbor_mask[i] & candidates).bit_count(),
        )
        search(candidates & ~(1 << v) & ~neighbor_mask[v], chosen | 1 << v, size + 1)
        search(candidates & ~(1 << v), chosen, size)

    search((1 << n) - 1, 0, 0)
    witness = tuple(i for i in range(n) if best_set >> i & 1)
    return best_size, witness
