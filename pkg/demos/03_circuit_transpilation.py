"""Parsing, lowering, routing and the end-user wall-clock model.

A circuit written in the tiny text format is lowered to the native gate set
(rotations, CZ, CCZ/CkZ, SWAP), placed on the register, routed under the
blockade connectivity, and packed into layers. The timing report shows why
the wall clock is dominated by preparation, not by gates.
"""

from naqsim import build_connectivity, builtin_profile, lower_to_native, parse_circuit
from naqsim.circuit import format_circuit
from naqsim.prep import target_block
from naqsim.transpile import transpile

SOURCE = """\
qubits 4
h 0
cnot 0 1        # convenience gates are fine; they lower to natives
cnot 1 2
cnot 2 3
rz(0.785398) 3
cz 0 3
cz 0 2          # chord: the interaction graph no longer fits a radius-1 block
measure all
"""

profile = builtin_profile("rb87-2023")
circuit = parse_circuit(SOURCE)
lowered = lower_to_native(circuit)
print(f"parsed {len(circuit.gates)} gates -> {len(lowered.gates)} native gates")
print("native form:")
print(format_circuit(lowered))

graph = build_connectivity(profile, target_block(profile.lattice, circuit.n_qubits))
result = transpile(lowered, profile, graph, n_shots=1000)
report = result.report
print(f"at blockade radius {profile.blockade_radius_sites} sites the 2x2 block is "
      f"fully connected: {result.routed.n_inserted_swaps} swaps needed")
print(f"  schedule: {report.gate_layer_count} gate layers, "
      f"t_circuit = {report.t_circuit_us:.2f} us")
print(f"  t_shot = {report.t_shot_ms:.3f} ms "
      f"(prep {report.t_prep_ms} ms + circuit + readout {report.t_readout_ms} ms)")
print(f"  1000 shots -> {report.t_total_s:.2f} s of machine time; "
      f"{report.layers_per_second:.0f} layers/s")

# Shrink the blockade radius to one lattice site and the router has to work:
# distant CZ operands are either swapped together or physically shuttled.
import dataclasses

tight = dataclasses.replace(profile, blockade_radius_sites=1.0)
tight_graph = build_connectivity(tight, target_block(tight.lattice, circuit.n_qubits))
print("\nsame circuit at blockade radius 1 site:")
for mode in ("swap", "shuttle"):
    result = transpile(lowered, tight, tight_graph, mode=mode, n_shots=1000)
    print(f"  {mode:>7} routing: {result.routed.n_inserted_swaps} swaps, "
          f"{result.routed.n_shuttles} shuttles, "
          f"{result.report.gate_layer_count} gate layers, "
          f"t_circuit = {result.report.t_circuit_us:.2f} us")
