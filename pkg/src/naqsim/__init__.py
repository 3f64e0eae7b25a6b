"""naqsim: desk-scale digital twin of a neutral-atom quantum computer.

The package mirrors the machine's pipeline: profiles and blockade
connectivity (:mod:`naqsim.profile`), stochastic register preparation
(:mod:`naqsim.prep`), circuit parsing and lowering (:mod:`naqsim.circuit`),
placement/routing/scheduling with the wall-clock model
(:mod:`naqsim.transpile`), Monte-Carlo noisy execution
(:mod:`naqsim.simulator`), analog Rydberg evolution and MIS
(:mod:`naqsim.analog`), and benchmark suites (:mod:`naqsim.bench`).
"""

from .analog import (
    AtomLayout,
    MisResult,
    SweepSchedule,
    brute_force_mis,
    build_hamiltonian,
    evolve,
    mis_sweep,
    sample_mis,
    unit_disk_graph,
)
from .bench import clops_metric, ghz_sweep, qv_heavy_output
from .circuit import (
    Circuit,
    Gate,
    GateKind,
    ParseError,
    bell_circuit,
    format_circuit,
    ghz_circuit,
    lower_to_native,
    parse_circuit,
    validate,
)
from .prep import (
    MovePlan,
    Occupancy,
    PrepOutcome,
    execute_plan,
    plan_rearrangement,
    prepare_register,
    sample_loading,
    target_block,
)
from .profile import (
    ConnectivityGraph,
    HardwareProfile,
    LatticeGeometry,
    ProfileError,
    build_connectivity,
    builtin_profile,
    connectivity_stats,
    load_profile,
    profile_to_dict,
    profile_to_json,
)
from .simulator import (
    NoiseFlags,
    NoiseModel,
    RunResult,
    StateVector,
    apply_gate,
    atom_loss,
    fidelity_to_depolarizing,
    idle_decoherence,
    noiseless_probabilities,
    run,
    statevector,
)
from .transpile import (
    Placement,
    Schedule,
    TimingReport,
    check_layer_invariants,
    estimate_wall_clock,
    place,
    route,
    schedule,
    transpile,
)

__version__ = "0.1.0"
