import math

import numpy as np
import pytest

from naqsim.analog import (
    AnalogError,
    StepSizeError,
    brute_force_mis,
    build_hamiltonian,
    constant_drive,
    evolve,
    layout_from_positions,
    mis_sweep,
    repair_independent,
    sample_mis,
    stable_timestep,
    unit_disk_graph,
    UnitDiskGraph,
)

from oracles import enumerate_mis, exact_evolution, pair_hamiltonian

RB = 8.7  # blockade radius in micrometers, desk-scale default


def _pair_layout(separation_fraction: float, rabi=1.0):
    return layout_from_positions(
        [[0.0, 0.0], [separation_fraction * RB, 0.0]], RB, rabi_max=rabi
    )


class TestBuildHamiltonian:
    def test_single_atom_matrix(self):
        layout = layout_from_positions([[0, 0]], RB, rabi_max=1.0)
        h = build_hamiltonian(layout, omega=0.8, delta=0.3).toarray()
        assert np.allclose(h, [[0.0, 0.4], [0.4, -0.3]])

    def test_interaction_at_blockade_radius_equals_rabi(self):
        layout = _pair_layout(1.0, rabi=1.3)
        h = build_hamiltonian(layout, omega=0.0, delta=0.0).toarray()
        assert h[3, 3] == pytest.approx(1.3)

    def test_hermitian_on_random_layouts(self, rng):
        for _ in range(5):
            n = int(rng.integers(2, 6))
            positions = rng.uniform(0, 4 * RB, size=(n, 2))
            layout = layout_from_positions(positions, RB)
            h = build_hamiltonian(layout, omega=0.7, delta=-0.2).toarray()
            assert np.max(np.abs(h - h.conj().T)) < 1e-12

    def test_atom_cap(self):
        positions = [[3.0 * i, 0.0] for i in range(17)]
        layout = layout_from_positions(positions, RB)
        with pytest.raises(AnalogError, match="cap"):
            build_hamiltonian(layout, 1.0, 0.0)

    def test_coincident_positions_rejected(self):
        with pytest.raises(AnalogError, match="share a position"):
            layout_from_positions([[0, 0], [0, 0]], RB)


class TestEvolve:
    def test_resonant_rabi_formula(self):
        layout = layout_from_positions([[0, 0]], RB, rabi_max=1.0)
        for t in (0.7, 1.9, 3.3):
            sweep = constant_drive(1.0, 0.0, t)
            res = evolve(layout, sweep, stable_timestep(layout, sweep))
            assert res.probabilities()[1] == pytest.approx(math.sin(t / 2) ** 2, abs=1e-6)

    def test_zero_drive_keeps_populations(self, rng):
        layout = _pair_layout(0.8)
        sweep = constant_drive(0.0, 0.7, 5.0)
        psi0 = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi0 /= np.linalg.norm(psi0)
        res = evolve(layout, sweep, 0.002, initial_state=psi0)
        assert np.allclose(np.abs(res.amplitudes) ** 2, np.abs(psi0) ** 2, atol=1e-10)

    def test_blockaded_pair_matches_exact_diagonalization(self):
        layout = _pair_layout(0.5)
        t_pi = math.pi / math.sqrt(2.0)
        sweep = constant_drive(1.0, 0.0, t_pi)
        res = evolve(layout, sweep, stable_timestep(layout, sweep))

        v = layout.interaction(0, 1)
        h = pair_hamiltonian(1.0, 0.0, v)
        psi0 = np.array([1, 0, 0, 0], dtype=complex)
        expected = exact_evolution(h, psi0, t_pi)
        assert np.max(np.abs(res.amplitudes - expected)) < 1e-6

    def test_blockade_suppression_and_pi_pulse(self):
        layout = _pair_layout(0.5)
        v = layout.interaction(0, 1)
        h = pair_hamiltonian(1.0, 0.0, v)
        psi0 = np.array([1, 0, 0, 0], dtype=complex)
        t_pi = math.pi / math.sqrt(2.0)
        max_prr = 0.0
        for t in np.linspace(0.0, 2 * t_pi, 200):
            psi = exact_evolution(h, psi0, float(t))
            max_prr = max(max_prr, abs(psi[3]) ** 2)
        assert max_prr < 0.05
        at_pi = exact_evolution(h, psi0, t_pi)
        assert abs(at_pi[1]) ** 2 + abs(at_pi[2]) ** 2 > 0.9

    def test_step_size_precondition_enforced(self):
        layout = _pair_layout(0.5)
        sweep = constant_drive(1.0, 0.0, 1.0)
        with pytest.raises(StepSizeError):
            evolve(layout, sweep, dt=1.0)

    def test_norm_conserved_through_mis_sweep(self):
        layout = layout_from_positions(
            [[0, 0], [0.8 * RB, 0], [1.6 * RB, 0], [0.8 * RB, 0.8 * RB]], RB
        )
        sweep = mis_sweep(1.0, 16.0)
        res = evolve(layout, sweep, stable_timestep(layout, sweep))
        assert res.norm_drift < 1e-8

    def test_energy_conserved_for_constant_hamiltonian(self):
        layout = _pair_layout(0.9)
        sweep = constant_drive(0.9, 0.4, 6.0)
        dt = stable_timestep(layout, sweep)
        h = build_hamiltonian(layout, 0.9, 0.4).toarray()
        psi0 = np.array([0.5, 0.5, 0.5, 0.5], dtype=complex)
        res = evolve(layout, sweep, dt, initial_state=psi0)
        e0 = np.vdot(psi0, h @ psi0).real
        e1 = np.vdot(res.amplitudes, h @ res.amplitudes).real
        assert abs(e1 - e0) < 1e-6

    def test_sweep_accuracy_against_refined_reference(self):
        # at the stability bound the integrator should already be converged
        layout = _pair_layout(0.8)
        sweep = mis_sweep(1.0, 4.0)
        reference = evolve(layout, sweep, stable_timestep(layout, sweep) / 16)
        res = evolve(layout, sweep, stable_timestep(layout, sweep))
        assert np.max(np.abs(res.amplitudes - reference.amplitudes)) < 1e-10


class TestUnitDiskGraph:
    def test_edges_follow_distance(self):
        layout = layout_from_positions([[0, 0], [0.8 * RB, 0], [2.5 * RB, 0]], RB)
        graph = unit_disk_graph(layout)
        assert graph.edges == frozenset({(0, 1)})

    def test_path_graph_mis(self):
        layout = layout_from_positions(
            [[0, 0], [0.8 * RB, 0], [1.6 * RB, 0]], RB
        )
        graph = unit_disk_graph(layout)
        size, witness = brute_force_mis(graph)
        assert size == 2
        assert set(witness) == {0, 2}


class TestSampleMis:
    def test_path_graph_endpoints_found(self, rng):
        layout = layout_from_positions(
            [[0, 0], [0.8 * RB, 0], [1.6 * RB, 0]], RB
        )
        result = sample_mis(layout, mis_sweep(1.0, 20.0), 100, rng)
        assert result.best_size == 2
        assert set(result.best_set) == {0, 2}

    def test_single_atom_slow_sweep_excites(self, rng):
        layout = layout_from_positions([[0, 0]], RB)
        result = sample_mis(layout, mis_sweep(1.0, 60.0), 200, rng)
        fraction = sum(len(s) for s in result.sets) / 200
        assert fraction > 0.9
        assert result.best_set == (0,)

    def test_all_sampled_sets_are_independent(self, rng):
        layout = layout_from_positions(
            [[0, 0], [0.7 * RB, 0], [1.4 * RB, 0], [0.7 * RB, 0.7 * RB], [0, 1.4 * RB]],
            RB,
        )
        result = sample_mis(layout, mis_sweep(1.0, 10.0), 200, rng)
        for s in result.sets:
            assert result.graph.is_independent(s)

    def test_longer_sweeps_do_not_hurt_mean_quality(self):
        layout = layout_from_positions(
            [[0, 0], [0.8 * RB, 0], [1.6 * RB, 0], [0.8 * RB, 0.8 * RB]], RB
        )
        means = []
        for total_time in (2.0, 25.0):
            acc = [
                sample_mis(layout, mis_sweep(1.0, total_time), 100,
                           np.random.default_rng(seed)).mean_size
                for seed in range(3)
            ]
            means.append(np.mean(acc))
        assert means[1] >= means[0]


class TestRepair:
    def test_violations_removed_deterministically(self):
        graph = UnitDiskGraph(4, frozenset({(0, 1), (1, 2), (2, 3)}))
        repaired = repair_independent([0, 1, 2, 3], graph)
        assert graph.is_independent(repaired)
        assert repaired == repair_independent([0, 1, 2, 3], graph)

    def test_already_independent_untouched(self):
        graph = UnitDiskGraph(4, frozenset({(0, 1)}))
        assert repair_independent([0, 2], graph) == (0, 2)


class TestBruteForce:
    def test_empty_graph(self):
        size, witness = brute_force_mis(UnitDiskGraph(5, frozenset()))
        assert size == 5
        assert witness == (0, 1, 2, 3, 4)

    def test_complete_graph(self):
        edges = frozenset((i, j) for i in range(4) for j in range(i + 1, 4))
        size, _ = brute_force_mis(UnitDiskGraph(4, edges))
        assert size == 1

    def test_cap_enforced(self):
        with pytest.raises(AnalogError, match="cap"):
            brute_force_mis(UnitDiskGraph(21, frozenset()))

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_enumeration_oracle_on_random_unit_disks(self, seed):
        rng = np.random.default_rng(seed)
        n = 10
        positions = []
        while len(positions) < n:
            candidate = rng.uniform(0, 3.0 * RB, size=2)
            if all(np.linalg.norm(candidate - p) > 0.4 * RB for p in positions):
                positions.append(candidate)
        layout = layout_from_positions(positions, RB)
        graph = unit_disk_graph(layout)
        size, witness = brute_force_mis(graph)
        assert graph.is_independent(witness)
        assert len(witness) == size
        assert size == enumerate_mis(n, graph.edges)
