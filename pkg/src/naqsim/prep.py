"""Register preparation: stochastic loading, rearrangement planning, transfer loss.

Models the load → image → rearrange → verify cycle. Traps fill independently
with the profile's loading probability; occupied sites are then matched to a
compact target block by minimum-cost assignment on Euclidean distance, and
each targeted atom survives placement with probability ``transfer_success``.
A failed (non-defect-free) attempt repeats the whole cycle from cooling, so
every attempt is charged the full preparation time.

All randomness flows through explicit ``numpy.random.Generator`` streams, so
independent preparations can run concurrently with independent seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .profile import HardwareProfile, LatticeGeometry


class PreparationError(RuntimeError):
    """Register preparation could not finish (bad inputs or retries exhausted)."""


class InsufficientAtomsError(PreparationError):
    """Fewer loaded atoms than target sites; the caller should retry loading."""


@dataclass(frozen=True)
class Occupancy:
    """Per-site occupation state of a trap array (at most one atom per site)."""

    sites: tuple[int, ...]
    coords: tuple[tuple[float, float], ...]
    occupied: tuple[bool, ...]

    def __post_init__(self):
        if not (len(self.sites) == len(self.coords) == len(self.occupied)):
            raise PreparationError("sites, coords and occupied must have equal length")

    @property
    def n_occupied(self) -> int:
        return sum(self.occupied)

    def occupied_sites(self) -> tuple[int, ...]:
        return tuple(s for s, o in zip(self.sites, self.occupied) if o)

    def coords_of(self, site: int) -> tuple[float, float]:
        return self.coords[self.sites.index(site)]

    def with_occupation(self, occupied: Sequence[bool]) -> "Occupancy":
        return Occupancy(self.sites, self.coords, tuple(bool(o) for o in occupied))


@dataclass(frozen=True)
class Move:
    source: int
    destination: int
    distance_um: float


@dataclass(frozen=True)
class MovePlan:
    """Ordered tweezer moves; safe to replay one at a time."""

    moves: tuple[Move, ...]
    total_distance_um: float

    def __len__(self) -> int:
        return len(self.moves)


@dataclass(frozen=True)
class PrepOutcome:
    occupancy: Occupancy
    target_sites: tuple[int, ...]
    defect_free: bool
    elapsed_ms: float
    moves_executed: int
    atoms_lost_in_transfer: int
    attempts: int = 1


def empty_occupancy(lattice: LatticeGeometry, sites: Sequence[int] | None = None) -> Occupancy:
    site_list = tuple(range(lattice.n_sites)) if sites is None else tuple(sites)
    coords = tuple(lattice.site_coords(s) for s in site_list)
    return Occupancy(site_list, coords, (False,) * len(site_list))


def sample_loading(array: Occupancy, p: float, rng: np.random.Generator) -> Occupancy:
    """Fill each trap independently with probability ``p`` (reproducible per seed)."""
    if not (0.0 < p <= 1.0):
        raise PreparationError(f"loading probability must be in (0, 1], got {p}")
    occupied = rng.random(len(array.sites)) < p
    return array.with_occupation(occupied)


def target_block(lattice: LatticeGeometry, n_qubits: int) -> tuple[int, ...]:
    """Centered, near-square block of ``n_qubits`` sites (compact targets keep
    rearrangement distances short)."""
    if n_qubits < 1:
        raise PreparationError(f"n_qubits must be >= 1, got {n_qubits}")
    if n_qubits > lattice.n_sites:
        raise PreparationError(
            f"n_qubits={n_qubits} exceeds lattice size {lattice.n_sites}"
        )
    side = math.ceil(math.sqrt(n_qubits))
    rows_needed = math.ceil(n_qubits / side)
    side = min(side, lattice.cols)
    rows_needed = math.ceil(n_qubits / side)
    if rows_needed > lattice.rows:
        raise PreparationError(
            f"cannot fit {n_qubits} sites as a block on {lattice.rows}x{lattice.cols}"
        )
    row0 = (lattice.rows - rows_needed) // 2
    col0 = (lattice.cols - side) // 2
    sites = []
    for k in range(n_qubits):
        r, c = divmod(k, side)
        sites.append(lattice.site_index(row0 + r, col0 + c))
    return tuple(sites)


def plan_rearrangement(occ: Occupancy, target: Sequence[int]) -> MovePlan:
    """Minimum-total-distance assignment of loaded atoms onto the target sites.

    Atoms already sitting on a target site keep it (zero cost; with Euclidean
    costs this never hurts optimality). The remaining targets are matched to
    the remaining atoms by minimum-cost bipartite assignment. Moves are then
    ordered so no move ever starts from an empty site or lands on an occupied
    one; a free holding site breaks cyclic dependencies should they arise.
    """
    target_set = set(target)
    unknown = target_set - set(occ.sites)
    if unknown:
        raise PreparationError(f"target sites not in array: {sorted(unknown)}")
    occupied = set(occ.occupied_sites())
    if len(occupied) < len(target_set):
        raise InsufficientAtomsError(
            f"{len(occupied)} atoms loaded but {len(target_set)} targets; retry loading"
        )

    free_targets = sorted(target_set - occupied)
    spare_atoms = sorted(occupied - target_set)
    if not free_targets:
        return MovePlan((), 0.0)

    coords = {s: occ.coords_of(s) for s in spare_atoms + free_targets}
    cost = np.empty((len(free_targets), len(spare_atoms)))
    for i, t in enumerate(free_targets):
        tx, ty = coords[t]
        for j, a in enumerate(spare_atoms):
            ax, ay = coords[a]
            cost[i, j] = math.hypot(tx - ax, ty - ay)
    rows, cols = linear_sum_assignment(cost)
    raw_moves = [
        Move(spare_atoms[j], free_targets[i], cost[i, j]) for i, j in zip(rows, cols)
    ]
    ordered = _sequence_moves(raw_moves, occ)
    return MovePlan(tuple(ordered), float(sum(m.distance_um for m in ordered)))


def _sequence_moves(moves: list[Move], occ: Occupancy) -> list[Move]:
    """Order moves so each source is occupied and each destination empty at its
    turn. Destinations that are also pending sources must be vacated first;
    genuine cycles detour through a free holding site."""
    pending = {m.source: m for m in moves}
    occupied = set(occ.occupied_sites())
    ordered: list[Move] = []
    free_sites = [s for s in occ.sites if s not in occupied and all(m.destination != s for m in moves)]

    def execute(move: Move) -> None:
        occupied.discard(move.source)
        occupied.add(move.destination)
        ordered.append(move)

    while pending:
        progressed = False
        for src in sorted(pending):
            move = pending[src]
            if move.destination not in occupied:
                del pending[src]
                execute(move)
                progressed = True
        if progressed:
            continue
        # Every pending destination is occupied by another pending source: a
        # cycle. Park one atom on a holding site, finish the chain, come back.
        if not free_sites:
            raise PreparationError("cannot sequence rearrangement: no free holding site")
        hold = free_sites.pop(0)
        src = min(pending)
        move = pending.pop(src)
        sx, sy = occ.coords_of(src)
        hx, hy = occ.coords_of(hold)
        dx, dy = occ.coords_of(move.destination)
        execute(Move(src, hold, math.hypot(sx - hx, sy - hy)))
        pending[hold] = Move(hold, move.destination, math.hypot(hx - dx, hy - dy))
    return ordered


def execute_plan(
    occ: Occupancy,
    plan: MovePlan,
    target: Sequence[int],
    profile: HardwareProfile,
    rng: np.random.Generator,
) -> PrepOutcome:
    """Replay a move plan with per-atom transfer losses and model the elapsed time.

    Every atom that ends on a target site independently survives with
    probability ``transfer_success``; elapsed time is the full preparation
    time plus tweezer travel at ``shuttle_speed``.
    """
    occupied = set(occ.occupied_sites())
    for move in plan.moves:
        if move.source not in occupied:
            raise PreparationError(f"move from empty site {move.source}")
        if move.destination in occupied:
            raise PreparationError(f"move into occupied site {move.destination}")
        occupied.discard(move.source)
        occupied.add(move.destination)

    lost = 0
    for site in sorted(set(target)):
        if site in occupied and rng.random() > profile.transfer_success:
            occupied.discard(site)
            lost += 1

    final = occ.with_occupation([s in occupied for s in occ.sites])
    defect_free = all(s in occupied for s in target)
    travel_us = plan.total_distance_um / profile.shuttle_speed
    elapsed_ms = profile.t_prep + travel_us / 1000.0
    return PrepOutcome(
        occupancy=final,
        target_sites=tuple(target),
        defect_free=defect_free,
        elapsed_ms=elapsed_ms,
        moves_executed=len(plan.moves),
        atoms_lost_in_transfer=lost,
    )


def prepare_register(
    profile: HardwareProfile,
    n_qubits: int,
    rng: np.random.Generator,
    max_retries: int = 100,
) -> PrepOutcome:
    """Loop load → plan → execute until a defect-free register or retries run out.

    Elapsed time accumulates across attempts since each retry restarts from
    cooling. Raises :class:`PreparationError` carrying attempt statistics on
    failure.
    """
    if n_qubits > profile.qubit_capacity:
        raise PreparationError(
            f"n_qubits={n_qubits} exceeds capacity {profile.qubit_capacity}"
        )
    target = target_block(profile.lattice, n_qubits)
    array = empty_occupancy(profile.lattice)
    total_elapsed = 0.0
    total_moves = 0
    total_lost = 0
    for attempt in range(1, max_retries + 1):
        loaded = sample_loading(array, profile.loading_prob, rng)
        try:
            plan = plan_rearrangement(loaded, target)
        except InsufficientAtomsError:
            total_elapsed += profile.t_prep
            continue
        outcome = execute_plan(loaded, plan, target, profile, rng)
        total_elapsed += outcome.elapsed_ms
        total_moves += outcome.moves_executed
        total_lost += outcome.atoms_lost_in_transfer
        if outcome.defect_free:
            return PrepOutcome(
                occupancy=outcome.occupancy,
                target_sites=target,
                defect_free=True,
                elapsed_ms=total_elapsed,
                moves_executed=total_moves,
                atoms_lost_in_transfer=total_lost,
                attempts=attempt,
            )
    raise PreparationError(
        f"no defect-free register after {max_retries} attempts "
        f"({total_moves} moves, {total_lost} transfer losses, {total_elapsed:.1f} ms)"
    )


def plan_to_dict(plan: MovePlan, lattice: LatticeGeometry) -> dict:
    """JSON-friendly plan document: moves as row/col pairs plus summary stats."""
    moves = []
    for m in plan.moves:
        fr, fc = divmod(m.source, lattice.cols)
        tr, tc = divmod(m.destination, lattice.cols)
        moves.append({"from": [fr, fc], "to": [tr, tc], "distance_um": m.distance_um})
    return {
        "moves": moves,
        "summary": {
            "n_moves": len(plan.moves),
            "total_distance_um": plan.total_distance_um,
        },
    }
