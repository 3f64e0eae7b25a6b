import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from naqsim.profile import (
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

from conftest import grid_profile
from oracles import lattice_disk_degree


class TestLoadProfile:
    def test_default_profile_matches_documented_values(self):
        p = load_profile({})
        assert p.f_1q == 0.999
        assert p.f_2q == 0.975
        assert p.t_2q == 0.4
        assert p.t_prep == 400.0
        assert p.t_readout == 10.0
        assert p.loading_prob == 0.55
        assert p.transfer_success == 0.988

    def test_builtin_nuclear_spin_swaps_coherence_values(self):
        p = builtin_profile("nuclear-spin")
        assert p.t2 == 40.0
        assert p.t2 > builtin_profile("rb87-2023").t2
        assert p.f_2q == 0.975  # gate stack unchanged

    def test_partial_document_fills_defaults(self):
        p = load_profile({"f_2q": 0.96, "name": "custom"})
        assert p.f_2q == 0.96
        assert p.t_1q == 2.0

    def test_t2_bound_violation_reports_fields(self):
        with pytest.raises(ProfileError, match=r"t2 ≤ 2·t1"):
            load_profile({"t1": 4.0, "t2": 10.0})

    def test_zero_fidelity_rejected(self):
        with pytest.raises(ProfileError, match="f_2q"):
            load_profile({"f_2q": 0.0})

    def test_unknown_keys_rejected(self):
        with pytest.raises(ProfileError, match="unknown profile keys"):
            load_profile({"t_gate": 1.0})

    def test_malformed_json_rejected(self):
        with pytest.raises(ProfileError, match="malformed"):
            load_profile("{not json")

    def test_t2_star_bound(self):
        with pytest.raises(ProfileError, match="t2_star"):
            load_profile({"t2_star": 2.0, "t2": 1.0})

    def test_blockade_radius_lower_bound(self):
        with pytest.raises(ProfileError, match="blockade_radius_sites"):
            load_profile({"blockade_radius_sites": 0.5})

    def test_capacity_must_fit_lattice(self):
        with pytest.raises(ProfileError, match="fewer than"):
            load_profile({"lattice": {"rows": 3, "cols": 3}, "qubit_capacity": 10})

    def test_file_round_trip(self, tmp_path, default_profile):
        path = tmp_path / "p.json"
        path.write_text(profile_to_json(default_profile))
        assert load_profile(path) == default_profile

    def test_json_string_round_trip(self, default_profile):
        assert load_profile(profile_to_json(default_profile)) == default_profile


_PROFILE_OVERRIDES = st.fixed_dictionaries(
    {},
    optional={
        "loading_prob": st.floats(0.05, 1.0),
        "f_2q": st.floats(0.5, 1.0),
        "blockade_radius_sites": st.floats(1.0, 4.0),
        "t_prep": st.floats(1.0, 1000.0),
        "shuttle_speed": st.floats(0.01, 10.0),
    },
)


@given(_PROFILE_OVERRIDES)
@settings(max_examples=40, deadline=None)
def test_profile_round_trip_property(overrides):
    profile = load_profile(overrides)
    again = load_profile(json.loads(profile_to_json(profile)))
    assert again == profile
    assert profile_to_dict(again) == profile_to_dict(profile)


class TestConnectivity:
    def test_radius_one_interior_degree_four(self):
        p = grid_profile(9, 9, radius_sites=1.0)
        g = build_connectivity(p, range(81))
        center = p.lattice.site_index(4, 4)
        assert g.degree(center) == 4

    def test_radius_two_interior_degree_twelve(self):
        p = grid_profile(9, 9, radius_sites=2.0)
        g = build_connectivity(p, range(81))
        assert g.degree(p.lattice.site_index(4, 4)) == 12

    def test_radius_two_and_three_bracket_reported_connectivity(self):
        # Machine data sheets quote 10:1 to 20:1 neighbour counts.
        for radius, expected in [(2.0, 12), (3.0, 28)]:
            p = grid_profile(9, 9, radius_sites=radius)
            g = build_connectivity(p, range(81))
            degree = g.degree(p.lattice.site_index(4, 4))
            assert degree == expected
            assert degree == lattice_disk_degree(radius)
        assert 10 <= 12 <= 20

    def test_deterministic_for_given_input(self, default_profile):
        g1 = build_connectivity(default_profile, range(30))
        g2 = build_connectivity(default_profile, range(30))
        assert g1 == g2

    def test_empty_region_rejected(self, default_profile):
        with pytest.raises(ProfileError, match="empty region"):
            build_connectivity(default_profile, [])

    def test_site_off_lattice_rejected(self, default_profile):
        with pytest.raises(ProfileError, match="outside lattice"):
            build_connectivity(default_profile, [0, 100])

    def test_single_site_degree_zero(self, default_profile):
        g = build_connectivity(default_profile, [0])
        stats = connectivity_stats(g)
        assert (stats.min_degree, stats.mean_degree, stats.max_degree) == (0, 0.0, 0)

    def test_three_by_three_radius_one_stats(self):
        p = grid_profile(3, 3, radius_sites=1.0)
        stats = connectivity_stats(build_connectivity(p, range(9)))
        assert stats.min_degree == 2
        assert stats.max_degree == 4
        assert stats.mean_degree == pytest.approx(24 / 9)

    def test_ten_by_ten_radius_two_max_degree(self, default_profile):
        stats = connectivity_stats(build_connectivity(default_profile, range(100)))
        assert stats.max_degree == 12


@given(
    rows=st.integers(2, 6),
    cols=st.integers(2, 6),
    radius=st.floats(1.0, 3.5),
    subset_seed=st.integers(0, 2**16),
)
@settings(max_examples=60, deadline=None)
def test_edge_membership_equals_distance_predicate(rows, cols, radius, subset_seed):
    import numpy as np

    p = grid_profile(rows, cols, radius_sites=radius)
    sampler = np.random.default_rng(subset_seed)
    sites = sorted(
        sampler.choice(rows * cols, size=sampler.integers(1, rows * cols + 1), replace=False)
    )
    g = build_connectivity(p, sites)
    limit = radius * p.lattice.spacing
    for i, a in enumerate(sites):
        for b in sites[i + 1 :]:
            expected = math.dist(p.lattice.site_coords(a), p.lattice.site_coords(b)) <= limit
            assert g.has_edge(a, b) == expected


@given(r1=st.floats(1.0, 3.0), r2=st.floats(1.0, 3.0))
@settings(max_examples=30, deadline=None)
def test_interior_degree_monotone_in_radius(r1, r2):
    lo, hi = sorted((r1, r2))
    p_lo = grid_profile(9, 9, radius_sites=lo)
    p_hi = grid_profile(9, 9, radius_sites=hi)
    center = p_lo.lattice.site_index(4, 4)
    d_lo = build_connectivity(p_lo, range(81)).degree(center)
    d_hi = build_connectivity(p_hi, range(81)).degree(center)
    assert d_lo <= d_hi
