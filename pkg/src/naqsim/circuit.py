"""Circuit data model, text-format parser, and lowering to the native gate set.

The text format is deliberately tiny (one instruction per line, ``#`` comments,
``.naq`` extension):

    qubits 3
    h 0
    cnot 0 1        # convenience gate, lowered to H·CZ·H
    rx(1.5707963) 2
    measure all

Gate names are case-insensitive; qubit indices are 0-based. The native set is
{RX, RY, RZ, CZ, CCZ, CKZ, SWAP, MEASURE_ALL}; everything else is lowered by
:func:`lower_to_native` preserving the unitary up to global phase.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from .profile import HardwareProfile


class GateKind(Enum):
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    CZ = "cz"
    CNOT = "cnot"
    CPHASE = "cphase"
    SWAP = "swap"
    CCZ = "ccz"
    CKZ = "ckz"
    MEASURE_ALL = "measure"


NATIVE_KINDS = frozenset(
    {
        GateKind.RX,
        GateKind.RY,
        GateKind.RZ,
        GateKind.CZ,
        GateKind.CCZ,
        GateKind.CKZ,
        GateKind.SWAP,
        GateKind.MEASURE_ALL,
    }
)

# kind -> (number of angle parameters, arity; arity None = variadic (>= 2))
_GATE_SIGNATURES: dict[GateKind, tuple[int, int | None]] = {
    GateKind.RX: (1, 1),
    GateKind.RY: (1, 1),
    GateKind.RZ: (1, 1),
    GateKind.H: (0, 1),
    GateKind.X: (0, 1),
    GateKind.Y: (0, 1),
    GateKind.Z: (0, 1),
    GateKind.CZ: (0, 2),
    GateKind.CNOT: (0, 2),
    GateKind.CPHASE: (1, 2),
    GateKind.SWAP: (0, 2),
    GateKind.CCZ: (0, 3),
    GateKind.CKZ: (0, None),
    GateKind.MEASURE_ALL: (0, 0),
}


class CircuitError(ValueError):
    """Structurally invalid gate or circuit."""


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        n_params, arity = _GATE_SIGNATURES[self.kind]
        if arity is None:
            if len(self.qubits) < 2:
                raise CircuitError(f"{self.kind.value} needs at least 2 operands")
        elif len(self.qubits) != arity:
            raise CircuitError(
                f"{self.kind.value} takes {arity} operand(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"duplicate operand in {self.kind.value} {self.qubits}")
        if n_params == 0 and self.angle is not None:
            raise CircuitError(f"{self.kind.value} takes no angle")
        if n_params == 1:
            if self.angle is None:
                raise CircuitError(f"{self.kind.value} requires an angle")
            if not math.isfinite(self.angle):
                raise CircuitError(f"{self.kind.value} angle must be finite, got {self.angle}")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise CircuitError(f"n_qubits must be >= 1, got {self.n_qubits}")
        for gate in self.gates:
            for q in gate.qubits:
                if not (0 <= q < self.n_qubits):
                    raise CircuitError(
                        f"operand {q} out of range for {self.n_qubits}-qubit circuit"
                    )

    @property
    def measured(self) -> bool:
        return any(g.kind is GateKind.MEASURE_ALL for g in self.gates)


@dataclass
class ParseError(Exception):
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, col {self.column}: {self.message}"


_TOKEN_RE = re.compile(
    r"(?P<num>-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<punct>[(),])"
    r"|(?P<junk>\S)"
)

_GATE_BY_NAME = {k.value: k for k in GateKind if k is not GateKind.MEASURE_ALL}


def _tokenize(line: str, lineno: int) -> list[tuple[str, str, int]]:
    tokens = []
    for m in _TOKEN_RE.finditer(line):
        kind = m.lastgroup
        if kind == "junk":
            raise ParseError(lineno, m.start() + 1, f"unexpected character {m.group()!r}")
        tokens.append((kind, m.group(), m.start() + 1))
    return tokens


def parse_circuit(text: str) -> Circuit:
    """Parse circuit source into a :class:`Circuit`, or raise :class:`ParseError`.

    The error points at the first offending token (1-based line and column).
    """
    n_qubits: int | None = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip("\r")
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        kind, value, col = tokens[0]
        if kind != "name":
            raise ParseError(lineno, col, f"expected statement, got {value!r}")
        word = value.lower()
        if word == "qubits":
            if n_qubits is not None:
                raise ParseError(lineno, col, "duplicate 'qubits' header")
            if gates:
                raise ParseError(lineno, col, "'qubits' header must precede gates")
            n_qubits = _parse_count(tokens, lineno)
        elif word == "measure":
            _parse_measure(tokens, lineno)
            gates.append(Gate(GateKind.MEASURE_ALL, ()))
        else:
            if n_qubits is None:
                raise ParseError(lineno, col, "missing 'qubits' header before first gate")
            gates.append(_parse_gate(word, tokens, lineno, n_qubits))
    if n_qubits is None:
        raise ParseError(1, 1, "missing 'qubits' header")
    return Circuit(n_qubits=n_qubits, gates=tuple(gates))


def _parse_count(tokens, lineno) -> int:
    if len(tokens) != 2 or tokens[1][0] != "num":
        col = tokens[1][2] if len(tokens) > 1 else tokens[0][2] + len(tokens[0][1])
        raise ParseError(lineno, col, "'qubits' takes a single integer")
    _, value, col = tokens[1]
    if not value.isdigit() or int(value) < 1:
        raise ParseError(lineno, col, f"qubit count must be a positive integer, got {value!r}")
    return int(value)


def _parse_measure(tokens, lineno) -> None:
    if len(tokens) != 2 or tokens[1][0] != "name" or tokens[1][1].lower() != "all":
        col = tokens[1][2] if len(tokens) > 1 else tokens[0][2] + len(tokens[0][1])
        raise ParseError(lineno, col, "expected 'measure all'")


def _parse_gate(word: str, tokens, lineno: int, n_qubits: int) -> Gate:
    gate_kind = _GATE_BY_NAME.get(word)
    if gate_kind is None:
        raise ParseError(lineno, tokens[0][2], f"unknown gate {word!r}")
    n_params, arity = _GATE_SIGNATURES[gate_kind]

    pos = 1
    angle: float | None = None
    if pos < len(tokens) and tokens[pos][1] == "(":
        if n_params == 0:
            raise ParseError(lineno, tokens[pos][2], f"{word} takes no parameters")
        if pos + 2 >= len(tokens) or tokens[pos + 1][0] != "num" or tokens[pos + 2][1] != ")":
            raise ParseError(lineno, tokens[pos][2], f"malformed parameter list for {word}")
        angle = float(tokens[pos + 1][1])
        if not math.isfinite(angle):
            raise ParseError(lineno, tokens[pos + 1][2], "angle must be finite")
        pos += 3
    elif n_params == 1:
        col = tokens[pos][2] if pos < len(tokens) else tokens[0][2] + len(word)
        raise ParseError(lineno, col, f"{word} requires an angle parameter")

    operands: list[int] = []
    for tok_kind, tok_value, tok_col in tokens[pos:]:
        if tok_kind != "num" or not tok_value.isdigit():
            raise ParseError(lineno, tok_col, f"expected qubit index, got {tok_value!r}")
        q = int(tok_value)
        if q >= n_qubits:
            raise ParseError(
                lineno, tok_col, f"qubit index {q} >= declared count {n_qubits}"
            )
        if q in operands:
            raise ParseError(lineno, tok_col, f"duplicate operand {q}")
        operands.append(q)

    expected = "at least 2" if arity is None else str(arity)
    if (arity is None and len(operands) < 2) or (arity is not None and len(operands) != arity):
        raise ParseError(
            lineno, tokens[0][2], f"{word} takes {expected} operand(s), got {len(operands)}"
        )
    return Gate(gate_kind, tuple(operands), angle)


def format_circuit(circuit: Circuit) -> str:
    """Canonical text form; ``parse_circuit`` of the result round-trips."""
    lines = [f"qubits {circuit.n_qubits}"]
    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE_ALL:
            lines.append("measure all")
            continue
        name = gate.kind.value
        if gate.angle is not None:
            name += f"({gate.angle!r})"
        lines.append(" ".join([name] + [str(q) for q in gate.qubits]))
    return "\n".join(lines) + "\n"


def _h_expansion(q: int) -> list[Gate]:
    half_pi = math.pi / 2
    return [
        Gate(GateKind.RZ, (q,), half_pi),
        Gate(GateKind.RX, (q,), half_pi),
        Gate(GateKind.RZ, (q,), half_pi),
    ]


def _lower_gate(gate: Gate) -> list[Gate]:
    kind = gate.kind
    if kind in NATIVE_KINDS:
        return [gate]
    if kind is GateKind.H:
        return _h_expansion(gate.qubits[0])
    if kind is GateKind.X:
        return [Gate(GateKind.RX, gate.qubits, math.pi)]
    if kind is GateKind.Y:
        return [Gate(GateKind.RY, gate.qubits, math.pi)]
    if kind is GateKind.Z:
        return [Gate(GateKind.RZ, gate.qubits, math.pi)]
    if kind is GateKind.CNOT:
        ctl, tgt = gate.qubits
        return [*_h_expansion(tgt), Gate(GateKind.CZ, (ctl, tgt)), *_h_expansion(tgt)]
    if kind is GateKind.CPHASE:
        # diag(1,1,1,e^{iθ}) up to global phase: RZ(θ/2) on both wires around a
        # CZ-conjugated RZ(-θ/2) (the CNOT pair is itself lowered to H·CZ·H).
        ctl, tgt = gate.qubits
        theta = gate.angle
        cnot = [*_h_expansion(tgt), Gate(GateKind.CZ, (ctl, tgt)), *_h_expansion(tgt)]
        return [
            Gate(GateKind.RZ, (ctl,), theta / 2),
            Gate(GateKind.RZ, (tgt,), theta / 2),
            *cnot,
            Gate(GateKind.RZ, (tgt,), -theta / 2),
            *cnot,
        ]
    raise CircuitError(f"no lowering rule for {kind.value}")


def lower_to_native(circuit: Circuit) -> Circuit:
    """Rewrite convenience gates into the native set, preserving the unitary
    up to global phase. Idempotent: already-native circuits pass through."""
    lowered: list[Gate] = []
    for gate in circuit.gates:
        lowered.extend(_lower_gate(gate))
    return Circuit(n_qubits=circuit.n_qubits, gates=tuple(lowered))


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str


def _blockade_site_bound(profile: HardwareProfile) -> int:
    """Upper bound on how many lattice sites fit pairwise within one blockade
    radius (1 + sites within the radius of a fixed center)."""
    r = profile.blockade_radius_sites
    reach = int(math.floor(r))
    count = 0
    for dx in range(-reach, reach + 1):
        for dy in range(-reach, reach + 1):
            if (dx, dy) != (0, 0) and dx * dx + dy * dy <= r * r:
                count += 1
    return count + 1


def validate(circuit: Circuit, profile: HardwareProfile) -> list[Diagnostic]:
    """Structural diagnostics against a profile. Never raises; placement-level
    blockade feasibility is re-checked by the transpiler."""
    diags: list[Diagnostic] = []
    if circuit.n_qubits > profile.qubit_capacity:
        diags.append(
            Diagnostic(
                "capacity",
                f"circuit uses {circuit.n_qubits} qubits but the machine holds "
                f"{profile.qubit_capacity}",
            )
        )
    measure_positions = [
        i for i, g in enumerate(circuit.gates) if g.kind is GateKind.MEASURE_ALL
    ]
    if measure_positions and (
        len(measure_positions) > 1 or measure_positions[0] != len(circuit.gates) - 1
    ):
        diags.append(
            Diagnostic(
                "mid-circuit-measurement",
                "terminal measurement only: readout is global and ends the shot",
            )
        )
    clique_bound = _blockade_site_bound(profile)
    for i, gate in enumerate(circuit.gates):
        if gate.kind in (GateKind.CKZ, GateKind.CCZ) and len(gate.qubits) > clique_bound:
            diags.append(
                Diagnostic(
                    "multiqubit-span",
                    f"gate {i} ({gate.kind.value}) spans {len(gate.qubits)} qubits; at most "
                    f"{clique_bound} lattice sites can sit pairwise within one blockade radius",
                )
            )
    return diags


def interaction_pairs(circuit: Circuit) -> set[tuple[int, int]]:
    """Unordered logical-qubit pairs coupled by any multi-qubit gate."""
    pairs: set[tuple[int, int]] = set()
    for gate in circuit.gates:
        qs = gate.qubits
        if len(qs) >= 2:
            for i in range(len(qs)):
                for j in range(i + 1, len(qs)):
                    pairs.add((min(qs[i], qs[j]), max(qs[i], qs[j])))
    return pairs


def ghz_circuit(n_qubits: int) -> Circuit:
    """H + CNOT-chain GHZ preparation with terminal measurement."""
    gates: list[Gate] = [Gate(GateKind.H, (0,))]
    for q in range(n_qubits - 1):
        gates.append(Gate(GateKind.CNOT, (q, q + 1)))
    gates.append(Gate(GateKind.MEASURE_ALL, ()))
    return Circuit(n_qubits=n_qubits, gates=tuple(gates))


def bell_circuit() -> Circuit:
    return ghz_circuit(2)


__all__ = [
    "Circuit",
    "CircuitError",
    "Diagnostic",
    "Gate",
    "GateKind",
    "NATIVE_KINDS",
    "ParseError",
    "bell_circuit",
    "format_circuit",
    "ghz_circuit",
    "interaction_pairs",
    "lower_to_native",
    "parse_circuit",
    "validate",
]
