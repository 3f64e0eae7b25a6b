"""Machine model: platform parameters, lattice geometry, blockade connectivity.

A :class:`HardwareProfile` is the single source of truth for timing, fidelity
and connectivity numbers. Two profiles ship with the package:

- ``rb87-2023``: electronic-spin rubidium parameters (the default).
- ``nuclear-spin``: same machine with nuclear-spin coherence times, mainly to
  demonstrate profile swapping.

Profiles are immutable after construction and safe to share across workers.

Unit conventions (fixed across the package):
  trap_lifetime / t1 / t2 / t2_star  seconds
  t_1q / t_2q                        microseconds
  t_prep / t_readout                 milliseconds
  lattice spacing                    micrometers
  shuttle_speed                      micrometers per microsecond
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Iterable, Mapping


class ProfileError(ValueError):
    """Malformed or physically inconsistent profile document."""


@dataclass(frozen=True)
class LatticeGeometry:
    """Square grid of trap sites. Site i sits at row i // cols, col i % cols."""

    kind: str = "square"
    spacing: float = 3.0
    rows: int = 10
    cols: int = 10

    def __post_init__(self):
        if self.kind != "square":
            raise ProfileError(f"lattice.kind: only 'square' is supported, got {self.kind!r}")
        if not self.spacing > 0:
            raise ProfileError(f"lattice.spacing: must be > 0, got {self.spacing}")
        if self.rows < 1 or self.cols < 1:
            raise ProfileError(f"lattice rows/cols must be >= 1, got {self.rows}x{self.cols}")

    @property
    def n_sites(self) -> int:
        return self.rows * self.cols

    def site_index(self, row: int, col: int) -> int:
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise ProfileError(f"site ({row},{col}) outside {self.rows}x{self.cols} lattice")
        return row * self.cols + col

    def site_coords(self, site: int) -> tuple[float, float]:
        """Physical (x, y) position of a site in micrometers."""
        if not (0 <= site < self.n_sites):
            raise ProfileError(f"site index {site} outside lattice with {self.n_sites} sites")
        row, col = divmod(site, self.cols)
        return (col * self.spacing, row * self.spacing)


@dataclass(frozen=True)
class HardwareProfile:
    """All platform parameters consumed by the preparation/transpile/noise stack."""

    name: str = "rb87-2023"
    qubit_capacity: int = 100
    lattice: LatticeGeometry = field(default_factory=LatticeGeometry)
    loading_prob: float = 0.55
    blockade_radius_sites: float = 2.0
    trap_lifetime: float = 10.0
    t1: float = 4.0
    t2: float = 1.0
    t2_star: float = 0.004
    f_1q: float = 0.999
    f_2q: float = 0.975
    f_readout: float = 0.95
    transfer_success: float = 0.988
    t_1q: float = 2.0
    t_2q: float = 0.4
    t_prep: float = 400.0
    t_readout: float = 10.0
    # Not quantified in the literature this model is built on; configurable.
    shuttle_speed: float = 0.55

    def __post_init__(self):
        probs = {
            "loading_prob": self.loading_prob,
            "f_1q": self.f_1q,
            "f_2q": self.f_2q,
            "f_readout": self.f_readout,
            "transfer_success": self.transfer_success,
        }
        for name, value in probs.items():
            if not (0.0 < value <= 1.0):
                raise ProfileError(f"{name}: must be in (0, 1], got {value}")
        times = {
            "trap_lifetime": self.trap_lifetime,
            "t1": self.t1,
            "t2": self.t2,
            "t2_star": self.t2_star,
            "t_1q": self.t_1q,
            "t_2q": self.t_2q,
            "t_prep": self.t_prep,
            "t_readout": self.t_readout,
            "shuttle_speed": self.shuttle_speed,
        }
        for name, value in times.items():
            if not value > 0:
                raise ProfileError(f"{name}: must be > 0, got {value}")
        if self.qubit_capacity < 1:
            raise ProfileError(f"qubit_capacity: must be >= 1, got {self.qubit_capacity}")
        if self.t2 > 2.0 * self.t1:
            raise ProfileError(f"t2 ≤ 2·t1 violated: t2={self.t2}, t1={self.t1}")
        if self.t2_star > self.t2:
            raise ProfileError(f"t2_star ≤ t2 violated: t2_star={self.t2_star}, t2={self.t2}")
        if self.blockade_radius_sites < 1.0:
            raise ProfileError(
                f"blockade_radius_sites: must be >= 1, got {self.blockade_radius_sites}"
            )
        if self.lattice.n_sites < self.qubit_capacity:
            raise ProfileError(
                f"lattice has {self.lattice.n_sites} sites, fewer than "
                f"qubit_capacity={self.qubit_capacity}"
            )

    @property
    def blockade_radius_um(self) -> float:
        return self.blockade_radius_sites * self.lattice.spacing


_PROFILE_FIELDS = {f.name for f in fields(HardwareProfile)}
_LATTICE_FIELDS = {f.name for f in fields(LatticeGeometry)}

BUILTIN_PROFILES: dict[str, dict[str, Any]] = {
    "rb87-2023": {},
    # Nuclear-spin encoding (Sr-style): much longer coherence, same gate stack.
    "nuclear-spin": {
        "name": "nuclear-spin",
        "t1": 100.0,
        "t2": 40.0,
        "t2_star": 3.0,
    },
}


def builtin_profile(name: str) -> HardwareProfile:
    """One of the bundled profiles, by name."""
    try:
        overrides = BUILTIN_PROFILES[name]
    except KeyError:
        raise ProfileError(
            f"unknown builtin profile {name!r}; available: {sorted(BUILTIN_PROFILES)}"
        ) from None
    return HardwareProfile(**_with_lattice(overrides))


def _with_lattice(doc: Mapping[str, Any]) -> dict[str, Any]:
    kwargs = dict(doc)
    if "lattice" in kwargs and isinstance(kwargs["lattice"], Mapping):
        lat = dict(kwargs["lattice"])
        unknown = set(lat) - _LATTICE_FIELDS
        if unknown:
            raise ProfileError(f"unknown lattice keys: {sorted(unknown)}")
        kwargs["lattice"] = LatticeGeometry(**lat)
    return kwargs


def load_profile(source: str | Path | Mapping[str, Any]) -> HardwareProfile:
    """Load and validate a profile document.

    ``source`` may be an already-parsed mapping, a JSON string, or a path to a
    UTF-8 JSON file. Keys are exactly the snake_case field names; unknown keys
    are rejected; any missing field falls back to the ``rb87-2023`` default.
    """
    if isinstance(source, Mapping):
        doc = dict(source)
    elif isinstance(source, Path):
        doc = _parse_json(source.read_text(encoding="utf-8"))
    elif isinstance(source, str):
        text = source if source.lstrip().startswith("{") else Path(source).read_text(encoding="utf-8")
        doc = _parse_json(text)
    else:
        raise ProfileError(f"unsupported profile source type: {type(source).__name__}")

    unknown = set(doc) - _PROFILE_FIELDS
    if unknown:
        raise ProfileError(f"unknown profile keys: {sorted(unknown)}")
    return HardwareProfile(**_with_lattice(doc))


def _parse_json(text: str) -> dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"malformed profile document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProfileError("profile document must be a JSON object")
    return doc


def profile_to_dict(profile: HardwareProfile) -> dict[str, Any]:
    """Serializable form; ``load_profile`` of the result round-trips."""
    doc: dict[str, Any] = {}
    for f in fields(HardwareProfile):
        value = getattr(profile, f.name)
        if isinstance(value, LatticeGeometry):
            value = {g.name: getattr(value, g.name) for g in fields(LatticeGeometry)}
        doc[f.name] = value
    return doc


def profile_to_json(profile: HardwareProfile) -> str:
    return json.dumps(profile_to_dict(profile), indent=2, sort_keys=True)


@dataclass(frozen=True)
class ConnectivityGraph:
    """Blockade-derived interaction graph over a set of lattice sites.

    Edge (i, j) present iff the Euclidean distance between the sites is at
    most the blockade radius. Nodes are lattice site indices.
    """

    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    coords: dict[int, tuple[float, float]]
    blockade_radius_um: float

    def neighbors(self, node: int) -> tuple[int, ...]:
        return tuple(sorted(b if a == node else a for a, b in self.edges if node in (a, b)))

    def degree(self, node: int) -> int:
        return sum(1 for a, b in self.edges if node in (a, b))

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges


def build_connectivity(profile: HardwareProfile, region: Iterable[int]) -> ConnectivityGraph:
    """Connectivity graph for the given lattice sites under the profile's blockade radius."""
    nodes = tuple(sorted(set(region)))
    if not nodes:
        raise ProfileError("empty region")
    lattice = profile.lattice
    coords = {s: lattice.site_coords(s) for s in nodes}
    radius = profile.blockade_radius_um
    r_sq = radius * radius
    edges = set()
    for idx, a in enumerate(nodes):
        xa, ya = coords[a]
        for b in nodes[idx + 1 :]:
            xb, yb = coords[b]
            if (xa - xb) ** 2 + (ya - yb) ** 2 <= r_sq:
                edges.add((a, b))
    return ConnectivityGraph(
        nodes=nodes,
        edges=frozenset(edges),
        coords=coords,
        blockade_radius_um=radius,
    )


@dataclass(frozen=True)
class DegreeStats:
    min_degree: int
    mean_degree: float
    max_degree: int


def connectivity_stats(graph: ConnectivityGraph) -> DegreeStats:
    """Exact degree statistics of a connectivity graph."""
    if not graph.nodes:
        raise ProfileError("empty graph")
    counts = {n: 0 for n in graph.nodes}
    for a, b in graph.edges:
        counts[a] += 1
        counts[b] += 1
    degrees = list(counts.values())
    return DegreeStats(
        min_degree=min(degrees),
        mean_degree=sum(degrees) / len(degrees),
        max_degree=max(degrees),
    )


def profile_fingerprint(profile: HardwareProfile) -> str:
    """Short stable hash of the full parameter set, for report provenance."""
    import hashlib

    canonical = json.dumps(profile_to_dict(profile), sort_keys=True).encode()
    return hashlib.sha256(canonical).hexdigest()[:16]
