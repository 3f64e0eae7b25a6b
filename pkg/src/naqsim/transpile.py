"""Mapping logical circuits onto the physical register.

Pipeline: ``place`` (greedy placement maximizing adjacent interacting pairs)
→ ``route`` (SWAP insertion along shortest connectivity paths, or physical
shuttling) → ``schedule`` (greedy as-soon-as-possible layering under the
platform's parallelism rules) → ``estimate_wall_clock``.

Wire convention: routed circuits act on *atoms*. Atom ``w`` initially holds
logical qubit ``w`` and sits on the site chosen by the placement. Inserted
SWAPs exchange the logical contents of two atoms; shuttles relocate an atom
without touching the logical binding. ``logical_to_wire_final`` records where
each logical qubit ends up, and readout undoes that permutation.

Layer rules (one layer at a time, sequential):
  - single-qubit layer: one (rotation kind, angle) applied to a qubit subset;
  - CZ/SWAP layer: disjoint pairs, each pair within the blockade radius, any
    two atoms of *different* pairs strictly farther apart than the radius;
  - CkZ layer: a single qubit tuple, pairwise within the blockade radius;
  - shuttle layer: one move, and a global barrier (gates never cross it);
  - measure layer: terminal.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .circuit import Circuit, CircuitError, Gate, GateKind, NATIVE_KINDS, interaction_pairs
from .profile import ConnectivityGraph, HardwareProfile


class TranspileError(ValueError):
    """Placement, routing or scheduling failure."""


@dataclass(frozen=True)
class Placement:
    """Injective logical-qubit → lattice-site map."""

    logical_to_site: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.logical_to_site)) != len(self.logical_to_site):
            raise TranspileError("placement must be injective")

    def __len__(self) -> int:
        return len(self.logical_to_site)


def place(circuit: Circuit, graph: ConnectivityGraph) -> Placement:
    """Greedy placement: grow outward from the best-connected site, putting
    each next qubit where it satisfies the most interaction edges. Ties break
    on site index, so output is deterministic for a given input."""
    n = circuit.n_qubits
    if n > len(graph.nodes):
        raise TranspileError(
            f"register too small: {len(graph.nodes)} sites for {n} logical qubits"
        )
    weight: dict[tuple[int, int], int] = {}
    for gate in circuit.gates:
        qs = gate.qubits
        for i in range(len(qs)):
            for j in range(i + 1, len(qs)):
                key = (min(qs[i], qs[j]), max(qs[i], qs[j]))
                weight[key] = weight.get(key, 0) + 1
    adj: dict[int, dict[int, int]] = {q: {} for q in range(n)}
    for (a, b), w in weight.items():
        adj[a][b] = w
        adj[b][a] = w

    degrees = {s: graph.degree(s) for s in graph.nodes}
    free_sites = sorted(graph.nodes, key=lambda s: (-degrees[s], s))
    site_of: dict[int, int] = {}
    unplaced = set(range(n))

    while unplaced:
        # Prefer qubits with the most already-placed interaction weight, then
        # overall interaction degree; seeds are the heaviest unplaced qubits.
        def placed_pull(q: int) -> int:
            return sum(w for nb, w in adj[q].items() if nb in site_of)

        qubit = min(
            unplaced,
            key=lambda q: (-placed_pull(q), -sum(adj[q].values()), q),
        )
        best_site = None
        best_score = None
        for s in free_sites:
            score = sum(
                w for nb, w in adj[qubit].items() if nb in site_of and graph.has_edge(s, site_of[nb])
            )
            key = (-score, -degrees[s], s)
            if best_score is None or key < best_score:
                best_score = key
                best_site = s
        site_of[qubit] = best_site
        free_sites.remove(best_site)
        unplaced.discard(qubit)

    return Placement(tuple(site_of[q] for q in range(n)))


def unsatisfied_pairs(circuit: Circuit, placement: Placement, graph: ConnectivityGraph) -> int:
    """Count interacting logical pairs whose placed sites are not adjacent."""
    return sum(
        0 if graph.has_edge(placement.logical_to_site[a], placement.logical_to_site[b]) else 1
        for a, b in interaction_pairs(circuit)
    )


@dataclass(frozen=True)
class ShuttleMove:
    """Physical relocation of one atom to new coordinates (micrometers)."""

    wire: int
    destination: tuple[float, float]
    distance_um: float


@dataclass(frozen=True)
class RoutedCircuit:
    """Circuit over atoms, interleaved with shuttle moves, plus the bookkeeping
    needed to undo the routing permutation at readout."""

    n_wires: int
    ops: tuple[Gate | ShuttleMove, ...]
    initial_positions: tuple[tuple[float, float], ...]
    logical_to_wire_final: tuple[int, ...]
    blockade_radius_um: float
    n_inserted_swaps: int = 0
    n_shuttles: int = 0


def _bfs_path(
    graph: ConnectivityGraph, start: int, goal: int, allowed: set[int] | None = None
) -> list[int]:
    """Shortest path, optionally restricted to a node subset. SWAP routing
    passes the occupied sites: swapping needs an atom on both sides."""
    if start == goal:
        return [start]
    prev: dict[int, int] = {start: start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nb in graph.neighbors(node):
            if allowed is not None and nb not in allowed:
                continue
            if nb not in prev:
                prev[nb] = node
                if nb == goal:
                    path = [goal]
                    while path[-1] != start:
                        path.append(prev[path[-1]])
                    return path[::-1]
                queue.append(nb)
    raise TranspileError(
        f"no connectivity path between sites {start} and {goal}"
        + (" through occupied sites (consider shuttle mode)" if allowed is not None else "")
    )


def route(
    circuit: Circuit,
    placement: Placement,
    graph: ConnectivityGraph,
    mode: str = "swap",
) -> RoutedCircuit:
    """Make every multi-qubit gate act on mutually blockade-adjacent atoms.

    ``swap`` mode inserts native SWAPs along shortest connectivity paths and
    permutes the logical↔atom binding; ``shuttle`` mode physically relocates
    atoms (one mobile tweezer, one move at a time) and leaves the binding
    alone. The result is unitarily equivalent to the input modulo the final
    permutation recorded in ``logical_to_wire_final``.

    Shuttle destinations are timing/blockade bookkeeping for the single
    mobile tweezer; they are not collision-checked against trap coordinates.
    """
    if mode not in ("swap", "shuttle"):
        raise TranspileError(f"unknown routing mode {mode!r}")
    non_native = [g.kind.value for g in circuit.gates if g.kind not in NATIVE_KINDS]
    if non_native:
        raise TranspileError(f"route requires a lowered circuit; found {non_native[0]}")
    n = circuit.n_qubits
    if len(placement) != n:
        raise TranspileError("placement size does not match circuit width")
    for s in placement.logical_to_site:
        if s not in graph.nodes:
            raise TranspileError(f"placement site {s} not in register")

    measure_idx = [i for i, g in enumerate(circuit.gates) if g.kind is GateKind.MEASURE_ALL]
    if measure_idx and (len(measure_idx) > 1 or measure_idx[0] != len(circuit.gates) - 1):
        raise CircuitError("terminal measurement only")

    radius = graph.blockade_radius_um
    # Atom w starts on the site assigned to logical w.
    pos = [list(graph.coords[placement.logical_to_site[w]]) for w in range(n)]
    site_of_atom: dict[int, int | None] = {w: placement.logical_to_site[w] for w in range(n)}
    atom_on_site: dict[int, int] = {placement.logical_to_site[w]: w for w in range(n)}
    atom_of_logical = list(range(n))
    logical_of_atom = list(range(n))

    ops: list[Gate | ShuttleMove] = []
    n_swaps = 0
    n_shuttles = 0

    def dist(w1: int, w2: int) -> float:
        return math.hypot(pos[w1][0] - pos[w2][0], pos[w1][1] - pos[w2][1])

    def within(w1: int, w2: int) -> bool:
        return dist(w1, w2) <= radius + 1e-9

    def swap_atoms(w1: int, w2: int) -> None:
        nonlocal n_swaps
        ops.append(Gate(GateKind.SWAP, (w1, w2)))
        n_swaps += 1
        l1, l2 = logical_of_atom[w1], logical_of_atom[w2]
        logical_of_atom[w1], logical_of_atom[w2] = l2, l1
        atom_of_logical[l1], atom_of_logical[l2] = w2, w1

    def shuttle_atom(w: int, destination: tuple[float, float]) -> None:
        nonlocal n_shuttles
        d = math.hypot(pos[w][0] - destination[0], pos[w][1] - destination[1])
        ops.append(ShuttleMove(w, destination, d))
        n_shuttles += 1
        old_site = site_of_atom[w]
        if old_site is not None:
            atom_on_site.pop(old_site, None)
        site_of_atom[w] = None
        pos[w][0], pos[w][1] = destination

    def bring_adjacent_swap(wa: int, wb: int) -> None:
        sa, sb = site_of_atom[wa], site_of_atom[wb]
        path = _bfs_path(graph, sa, sb, allowed=set(atom_on_site))
        # Walk atom wa's logical content down the path until adjacent to wb.
        for k in range(len(path) - 2):
            u, v = path[k], path[k + 1]
            swap_atoms(atom_on_site[u], atom_on_site[v])

    def routed_operands(gate: Gate) -> tuple[int, ...]:
        return tuple(atom_of_logical[q] for q in gate.qubits)

    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE_ALL or len(gate.qubits) < 2:
            wires = routed_operands(gate)
            ops.append(Gate(gate.kind, wires, gate.angle))
            continue

        if mode == "swap":
            wires = routed_operands(gate)
            if len(wires) == 2:
                wa, wb = wires
                if not within(wa, wb):
                    bring_adjacent_swap(wa, wb)
            else:
                _cluster_by_swaps(
                    [atom_of_logical[q] for q in gate.qubits],
                    atom_of_logical,
                    logical_of_atom,
                    atom_on_site,
                    site_of_atom,
                    graph,
                    swap_atoms,
                    within,
                )
            wires = routed_operands(gate)
            if not all(within(a, b) for i, a in enumerate(wires) for b in wires[i + 1 :]):
                raise TranspileError(
                    f"could not bring {gate.kind.value} operands within the blockade radius"
                )
            ops.append(Gate(gate.kind, wires, gate.angle))
        else:
            wires = routed_operands(gate)
            if len(wires) == 2:
                wa, wb = wires
                d = dist(wa, wb)
                if d > radius + 1e-9:
                    # Minimal straight-line move: stop exactly at the radius.
                    frac = radius / d
                    dest = (
                        pos[wb][0] + (pos[wa][0] - pos[wb][0]) * frac,
                        pos[wb][1] + (pos[wa][1] - pos[wb][1]) * frac,
                    )
                    shuttle_atom(wa, dest)
            else:
                already_clique = all(
                    within(a, b) for i, a in enumerate(wires) for b in wires[i + 1 :]
                )
                if not already_clique:
                    # Park every mover on a half-radius circle around the
                    # anchor: pairwise distances are then at most the radius.
                    anchor = wires[0]
                    ax, ay = pos[anchor]
                    movers = wires[1:]
                    for k, w in enumerate(movers):
                        angle = 2.0 * math.pi * k / len(movers)
                        dest = (
                            ax + 0.5 * radius * math.cos(angle),
                            ay + 0.5 * radius * math.sin(angle),
                        )
                        shuttle_atom(w, dest)
            if not all(within(a, b) for i, a in enumerate(wires) for b in wires[i + 1 :]):
                raise TranspileError(
                    f"shuttle routing failed for {gate.kind.value} operands"
                )
            ops.append(Gate(gate.kind, wires, gate.angle))

    return RoutedCircuit(
        n_wires=n,
        ops=tuple(ops),
        initial_positions=tuple(
            tuple(graph.coords[placement.logical_to_site[w]]) for w in range(n)
        ),
        logical_to_wire_final=tuple(atom_of_logical),
        blockade_radius_um=radius,
        n_inserted_swaps=n_swaps,
        n_shuttles=n_shuttles,
    )


def _find_clique_sites(
    graph: ConnectivityGraph, occupied: set[int], k: int, centroid: tuple[float, float]
) -> list[int]:
    """k occupied sites that are pairwise within the blockade radius, grown
    greedily around the centroid of the operands."""
    by_distance = sorted(
        occupied, key=lambda s: (math.dist(graph.coords[s], centroid), s)
    )
    for seed in by_distance:
        clique = [seed]
        for candidate in by_distance:
            if candidate in clique:
                continue
            if all(graph.has_edge(candidate, member) for member in clique):
                clique.append(candidate)
                if len(clique) == k:
                    return clique
    raise TranspileError(
        f"no {k} occupied sites are mutually within one blockade radius"
    )


def _cluster_by_swaps(
    operand_atoms, atom_of_logical, logical_of_atom, atom_on_site, site_of_atom,
    graph, swap_atoms, within,
) -> None:
    """Route a CkZ operand set onto a mutual-blockade clique of sites, one
    operand at a time; settled operands are excluded from later paths so the
    procedure terminates."""
    logicals = [logical_of_atom[w] for w in operand_atoms]
    if all(
        within(atom_of_logical[a], atom_of_logical[b])
        for i, a in enumerate(logicals)
        for b in logicals[i + 1 :]
    ):
        return
    occupied = set(atom_on_site)
    xs = [graph.coords[site_of_atom[atom_of_logical[l]]] for l in logicals]
    centroid = (
        sum(x for x, _ in xs) / len(xs),
        sum(y for _, y in xs) / len(xs),
    )
    clique = _find_clique_sites(graph, occupied, len(logicals), centroid)
    # Match operands to clique sites by proximity (greedy, deterministic).
    remaining = list(clique)
    assignment: dict[int, int] = {}
    for logical in logicals:
        here = graph.coords[site_of_atom[atom_of_logical[logical]]]
        target = min(remaining, key=lambda s: (math.dist(graph.coords[s], here), s))
        remaining.remove(target)
        assignment[logical] = target
    def travel(logical: int) -> float:
        here = graph.coords[site_of_atom[atom_of_logical[logical]]]
        return math.dist(graph.coords[assignment[logical]], here)

    settled: set[int] = set()
    # Farthest operands first: they may need paths through sites that closer
    # operands would otherwise settle on.
    for logical in sorted(logicals, key=lambda l: (-travel(l), l)):
        target = assignment[logical]
        start = site_of_atom[atom_of_logical[logical]]
        path = _bfs_path(graph, start, target, allowed=occupied - settled)
        for u, v in zip(path, path[1:]):
            swap_atoms(atom_on_site[u], atom_on_site[v])
        settled.add(target)


@dataclass(frozen=True)
class Layer:
    """One schedule step. ``groups`` are wire tuples; ``coords`` mirror them
    with the atom coordinates in effect when the layer runs."""

    kind: str  # sq | cz | swap | ckz | shuttle | measure
    duration_us: float
    groups: tuple[tuple[int, ...], ...] = ()
    coords: tuple[tuple[tuple[float, float], ...], ...] = ()
    gate: GateKind | None = None
    angle: float | None = None
    shuttle: ShuttleMove | None = None

    def wires(self) -> tuple[int, ...]:
        out: list[int] = []
        for g in self.groups:
            out.extend(g)
        return tuple(out)


@dataclass(frozen=True)
class Schedule:
    layers: tuple[Layer, ...]
    n_wires: int
    logical_to_wire_final: tuple[int, ...]
    blockade_radius_um: float


def schedule(
    routed: RoutedCircuit,
    profile: HardwareProfile,
    swap_as_three_cz: bool = False,
) -> Schedule:
    """Pack a routed circuit into layers, greedy as-soon-as-possible.

    Durations: single-qubit layer ``t_1q``; CZ/CkZ layer ``t_2q``; SWAP layer
    ``t_2q`` as a single native pulse (pass ``swap_as_three_cz`` to charge the
    three-CZ decomposition instead); shuttle ``distance/shuttle_speed``;
    measurement ``t_readout``. A terminal measure layer is always present:
    readout is global and unconditional.
    """
    radius = routed.blockade_radius_um
    swap_duration = 3.0 * profile.t_2q if swap_as_three_cz else profile.t_2q
    pos = [tuple(p) for p in routed.initial_positions]

    layers: list[dict] = []
    frontier = [0] * routed.n_wires  # first layer index each wire may still join
    barrier = 0  # layers before this are frozen (shuttle barriers)

    def group_coords(wires: Iterable[int]) -> tuple[tuple[float, float], ...]:
        return tuple(pos[w] for w in wires)

    def pair_separation_ok(layer: dict, new_pair: tuple[int, ...]) -> bool:
        for existing in layer["groups"]:
            for w1 in existing:
                for w2 in new_pair:
                    x1, y1 = pos[w1]
                    x2, y2 = pos[w2]
                    if math.hypot(x1 - x2, y1 - y2) <= radius + 1e-9:
                        return False
        return True

    def place_in_layer(idx: int, wires: tuple[int, ...]) -> None:
        layers[idx]["groups"].append(wires)
        layers[idx]["coords"].append(group_coords(wires))
        for w in wires:
            frontier[w] = idx + 1

    def new_layer(kind: str, duration: float, **extra) -> int:
        layers.append({"kind": kind, "duration": duration, "groups": [], "coords": [], **extra})
        return len(layers) - 1

    for op in routed.ops:
        if isinstance(op, ShuttleMove):
            idx = new_layer("shuttle", op.distance_um / profile.shuttle_speed, shuttle=op)
            place_in_layer(idx, (op.wire,))
            pos[op.wire] = op.destination
            barrier = len(layers)  # global barrier: geometry changed
            for w in range(routed.n_wires):
                frontier[w] = max(frontier[w], barrier)
            continue
        if op.kind is GateKind.MEASURE_ALL:
            continue  # the terminal measure layer is appended below

        wires = op.qubits
        earliest = max([barrier] + [frontier[w] for w in wires])
        if op.kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
            idx = _find_sq_layer(layers, earliest, op)
            if idx is None:
                idx = new_layer("sq", profile.t_1q, gate=op.kind, angle=op.angle)
            place_in_layer(idx, wires)
        elif op.kind in (GateKind.CZ, GateKind.SWAP):
            kind = "cz" if op.kind is GateKind.CZ else "swap"
            duration = profile.t_2q if kind == "cz" else swap_duration
            idx = None
            for i in range(earliest, len(layers)):
                if layers[i]["kind"] == kind and pair_separation_ok(layers[i], wires):
                    idx = i
                    break
            if idx is None:
                idx = new_layer(kind, duration)
            place_in_layer(idx, wires)
        elif op.kind in (GateKind.CCZ, GateKind.CKZ):
            idx = new_layer("ckz", profile.t_2q)
            place_in_layer(idx, wires)
        else:
            raise TranspileError(f"cannot schedule non-native gate {op.kind.value}")

    built = [
        Layer(
            kind=l["kind"],
            duration_us=l["duration"],
            groups=tuple(tuple(g) for g in l["groups"]),
            coords=tuple(tuple(c) for c in l["coords"]),
            gate=l.get("gate"),
            angle=l.get("angle"),
            shuttle=l.get("shuttle"),
        )
        for l in layers
    ]
    all_wires = tuple(range(routed.n_wires))
    built.append(
        Layer(
            kind="measure",
            duration_us=profile.t_readout * 1000.0,
            groups=(all_wires,),
            coords=(tuple(pos[w] for w in all_wires),),
        )
    )
    return Schedule(
        layers=tuple(built),
        n_wires=routed.n_wires,
        logical_to_wire_final=routed.logical_to_wire_final,
        blockade_radius_um=radius,
    )


def _find_sq_layer(layers: list[dict], earliest: int, op: Gate) -> int | None:
    for i in range(earliest, len(layers)):
        l = layers[i]
        if l["kind"] == "sq" and l["gate"] is op.kind and l["angle"] == op.angle:
            return i
    return None


@dataclass(frozen=True)
class TimingReport:
    """End-user wall-clock model: every shot pays preparation, circuit and
    readout time; compilation is host time, measured rather than modeled."""

    t_compile_ms: float
    t_circuit_us: float
    t_prep_ms: float
    t_readout_ms: float
    n_shots: int
    gate_layer_count: int

    @property
    def t_shot_us(self) -> float:
        return self.t_prep_ms * 1000.0 + self.t_circuit_us + self.t_readout_ms * 1000.0

    @property
    def t_shot_ms(self) -> float:
        return self.t_shot_us / 1000.0

    @property
    def t_total_s(self) -> float:
        return self.n_shots * self.t_shot_us / 1e6

    @property
    def t_total_with_compile_s(self) -> float:
        return self.t_total_s + self.t_compile_ms / 1000.0

    @property
    def layers_per_second(self) -> float:
        return self.gate_layer_count / (self.t_shot_us / 1e6)

    def to_dict(self) -> dict:
        return {
            "t_compile_ms": self.t_compile_ms,
            "t_circuit_us": self.t_circuit_us,
            "t_prep_ms": self.t_prep_ms,
            "t_readout_ms": self.t_readout_ms,
            "t_shot_ms": self.t_shot_ms,
            "n_shots": self.n_shots,
            "t_total_s": self.t_total_s,
            "t_total_with_compile_s": self.t_total_with_compile_s,
            "gate_layer_count": self.gate_layer_count,
            "layers_per_second": self.layers_per_second,
        }


def estimate_wall_clock(
    sched: Schedule,
    profile: HardwareProfile,
    n_shots: int,
    t_compile_ms: float = 0.0,
) -> TimingReport:
    """Timing model over a schedule: ``t_shot = t_prep + Σ gate layers + t_readout``.

    The measure layer's duration is reported through the readout term, not
    double-counted into the circuit time.
    """
    if n_shots < 0:
        raise TranspileError(f"n_shots must be >= 0, got {n_shots}")
    gate_layers = [l for l in sched.layers if l.kind != "measure"]
    t_circuit_us = float(math.fsum(l.duration_us for l in gate_layers))
    return TimingReport(
        t_compile_ms=t_compile_ms,
        t_circuit_us=t_circuit_us,
        t_prep_ms=profile.t_prep,
        t_readout_ms=profile.t_readout,
        n_shots=n_shots,
        gate_layer_count=len(gate_layers),
    )


def check_layer_invariants(sched: Schedule) -> list[str]:
    """Audit every layer against its geometric/parallelism invariant. Returns
    human-readable violations (empty list = clean)."""
    problems: list[str] = []
    radius = sched.blockade_radius_um
    for i, layer in enumerate(sched.layers):
        wires = layer.wires()
        if len(set(wires)) != len(wires):
            problems.append(f"layer {i}: wire appears twice")
        flat = [(w, xy) for group, cs in zip(layer.groups, layer.coords) for w, xy in zip(group, cs)]
        if layer.kind in ("cz", "swap"):
            for g, cs in zip(layer.groups, layer.coords):
                if len(g) != 2:
                    problems.append(f"layer {i}: {layer.kind} group of size {len(g)}")
                elif math.dist(cs[0], cs[1]) > radius + 1e-9:
                    problems.append(f"layer {i}: pair {g} outside blockade radius")
            for gi in range(len(layer.groups)):
                for gj in range(gi + 1, len(layer.groups)):
                    for xy1 in layer.coords[gi]:
                        for xy2 in layer.coords[gj]:
                            if math.dist(xy1, xy2) <= radius + 1e-9:
                                problems.append(
                                    f"layer {i}: cross-pair atoms within blockade radius"
                                )
        elif layer.kind == "ckz":
            if len(layer.groups) != 1:
                problems.append(f"layer {i}: ckz layer must hold one tuple")
            for g, cs in zip(layer.groups, layer.coords):
                for a in range(len(g)):
                    for b in range(a + 1, len(g)):
                        if math.dist(cs[a], cs[b]) > radius + 1e-9:
                            problems.append(f"layer {i}: ckz operands not mutually adjacent")
        elif layer.kind == "sq":
            if layer.gate not in (GateKind.RX, GateKind.RY, GateKind.RZ):
                problems.append(f"layer {i}: sq layer with non-rotation gate")
        elif layer.kind == "shuttle":
            if len(flat) != 1:
                problems.append(f"layer {i}: shuttle layer must hold one move")
    return problems


@dataclass(frozen=True)
class TranspileResult:
    placement: Placement
    routed: RoutedCircuit
    schedule: Schedule
    report: TimingReport


def transpile(
    circuit: Circuit,
    profile: HardwareProfile,
    graph: ConnectivityGraph,
    mode: str = "swap",
    n_shots: int = 1,
    swap_as_three_cz: bool = False,
) -> TranspileResult:
    """Full place → route → schedule pipeline with measured compile time."""
    t0 = time.perf_counter()
    placement = place(circuit, graph)
    routed = route(circuit, placement, graph, mode=mode)
    sched = schedule(routed, profile, swap_as_three_cz=swap_as_three_cz)
    t_compile_ms = (time.perf_counter() - t0) * 1000.0
    report = estimate_wall_clock(sched, profile, n_shots, t_compile_ms=t_compile_ms)
    return TranspileResult(placement=placement, routed=routed, schedule=sched, report=report)


def schedule_to_dict(sched: Schedule) -> dict:
    """JSON-friendly schedule document: layers with kind, operand coordinates
    and duration in microseconds."""
    layers = []
    for layer in sched.layers:
        entry: dict = {
            "kind": layer.kind,
            "duration_us": layer.duration_us,
            "operands": [[list(xy) for xy in group] for group in layer.coords],
            "wires": [list(g) for g in layer.groups],
        }
        if layer.gate is not None:
            entry["gate"] = layer.gate.value
        if layer.angle is not None:
            entry["angle"] = layer.angle
        layers.append(entry)
    return {
        "n_wires": sched.n_wires,
        "logical_to_wire_final": list(sched.logical_to_wire_final),
        "layers": layers,
    }
