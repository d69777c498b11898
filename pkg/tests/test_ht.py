import random
from fractions import Fraction

import pytest

from isingloops.ht_expansion import (
    BudgetExceeded,
    WindowLattice,
    build_product_terms,
    expand_and_reduce,
    full_partition_polynomial,
    series_rows,
    stabilization_table,
    sum_over_configurations,
    window_series,
)
from isingloops.oracle import (
    LatticeSpec,
    connected_counts,
    even_subgraph_counts,
    exhaustive_partition,
)


class TestWindow:
    def test_radius_zero_has_no_bonds(self):
        assert WindowLattice("sq", 0).bonds() == []
        assert window_series(WindowLattice("sq", 0), 2) == [1, 0, 0]

    def test_factor_counts(self):
        # radius-1 square window: 3x3 sites, 12 interior bonds
        w = WindowLattice("sq", 1)
        assert len(build_product_terms(w)) == 12
        assert len(build_product_terms(w, dedup=False)) == 24
        # radius-1 cubic window: 3x3x3 sites, 54 bonds from all six families
        w3 = WindowLattice("sc", 1)
        assert len(build_product_terms(w3)) == 54

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            WindowLattice("pt", 1)


class TestExpandAndReduce:
    def test_doubled_factor_squares(self):
        bond = ((0, 0), (0, 1))
        mono = expand_and_reduce([bond, bond], 2)
        by_key = {(tuple(sorted(m.odd_sites)), m.power): m.coefficient for m in mono}
        assert by_key[((), 0)] == 1
        assert by_key[(((0, 0), (0, 1)), 1)] == 2
        assert by_key[((), 2)] == 1

    def test_unit_square_all_even(self):
        square = [((0, 0), (1, 0)), ((1, 0), (1, 1)), ((0, 1), (1, 1)), ((0, 0), (0, 1))]
        mono = expand_and_reduce(square, 4)
        survivors = [m for m in mono if not m.odd_sites]
        assert {(m.power, m.coefficient) for m in survivors} == {(0, 1), (4, 1)}

    def test_require_center_drops_constant_branch(self):
        bond = ((3, 3), (3, 4))
        mono = expand_and_reduce([bond], 2, require_center=True, center=(0, 0))
        assert mono == []

    def test_parity_reduction_is_order_independent(self):
        w = WindowLattice("sq", 1)
        factors = build_product_terms(w)
        base = sum_over_configurations(expand_and_reduce(factors, 4))
        rng = random.Random(11)
        for _ in range(3):
            shuffled = factors[:]
            rng.shuffle(shuffled)
            assert sum_over_configurations(expand_and_reduce(shuffled, 4)) == base


class TestSumOverConfigurations:
    def test_odd_site_vanishes(self):
        mono = expand_and_reduce([((0, 0), (0, 1))], 1)
        counts = sum_over_configurations(mono)
        assert counts[1] == 0

    def test_survivor_weight_one(self):
        square = [((0, 0), (1, 0)), ((1, 0), (1, 1)), ((0, 1), (1, 1)), ((0, 0), (0, 1))]
        counts = sum_over_configurations(expand_and_reduce(square, 4))
        assert counts[4] == 1


class TestWindowSeries:
    def test_matches_literal_fold(self):
        w = WindowLattice("sq", 2)
        literal = sum_over_configurations(
            expand_and_reduce(build_product_terms(w), 6,
                              require_center=True, center=w.center))
        literal += [0] * (7 - len(literal))
        literal[0] = 1
        assert window_series(w, 6) == literal

    def test_matches_cycle_space_oracle(self):
        # radius-2 window == open 5x5 lattice; compare against the full
        # cycle-space enumeration restricted to subgraphs through the centre
        w = WindowLattice("sq", 2)
        counts = window_series(w, 8)
        spec = LatticeSpec("sq", (5, 5), periodic=False)
        center = spec.site_index((2, 2))
        oracle = even_subgraph_counts(spec, r_max=8, through=center)
        oracle[0] = 1
        assert counts == oracle[:9]

    def test_through_center_g4(self):
        assert window_series(WindowLattice("sq", 3), 4)[4] == 4

    def test_unrestricted_counts_all_subgraphs(self):
        w = WindowLattice("sq", 2)
        counts = window_series(w, 4, through_center=False)
        spec = LatticeSpec("sq", (5, 5), periodic=False)
        oracle = even_subgraph_counts(spec, r_max=4)
        assert counts[4] == oracle[4]

    def test_sc_matches_through_site_counts(self):
        counts = window_series(WindowLattice("sc", 3), 6)
        _, through = connected_counts("sc", 6)
        assert counts[4] == through[4] == 12
        assert counts[6] == through[6] == 132

    def test_literal_bond_mode_differs(self):
        w = WindowLattice("sq", 1)
        doubled = window_series(w, 4, dedup=False)
        plain = window_series(w, 4)
        assert doubled[2] != plain[2]  # squared factors add two-bond terms
        assert doubled[0] == 1

    def test_budget_error(self):
        with pytest.raises(BudgetExceeded):
            window_series(WindowLattice("sq", 4), 8, node_budget=100)


class TestStabilization:
    def test_sq_stable_through_order_seven(self):
        table = stabilization_table("sq", 8, (4, 5))
        for r in range(8):
            assert table[4][r] == table[5][r]

    def test_sq_order_eight_grows_with_window(self):
        # two disjoint four-cycles, one through the centre and one anywhere,
        # are a single term of the expansion: the order-8 count picks up a
        # window-volume piece and cannot stabilise
        table = stabilization_table("sq", 8, (4, 5))
        assert table[5][8] > table[4][8]

    def test_sc_stable_through_order_six(self):
        table = stabilization_table("sc", 6, (3, 4))
        assert table[3] == table[4]


class TestFullPartition:
    @pytest.mark.parametrize("spec", [
        LatticeSpec("ring", (4,)),
        LatticeSpec("ring", (6,)),
        LatticeSpec("ring", (8,)),
        LatticeSpec("sq", (2, 2)),
        LatticeSpec("sq", (3, 3)),
        LatticeSpec("sq", (4, 4)),
        LatticeSpec("sc", (2, 2, 2)),
        LatticeSpec("sq", (3, 3), periodic=False),
    ])
    def test_equals_exhaustive(self, spec):
        assert full_partition_polynomial(spec) == exhaustive_partition(spec)

    def test_ring_of_four(self):
        assert full_partition_polynomial(LatticeSpec("ring", (4,))) == [1, 0, 0, 0, 1]

    def test_at_x_zero(self):
        assert full_partition_polynomial(LatticeSpec("sq", (2, 2)))[0] == 1

    def test_size_cap(self):
        with pytest.raises(ValueError):
            full_partition_polynomial(LatticeSpec("sq", (5, 5)))


class TestSeriesRows:
    def test_rows_carry_flags(self):
        rows = series_rows("sq", 4, radius=2)
        assert rows[4].value == Fraction(4)
        assert rows[4].flags["through_center"] is True
        assert rows[4].flags["window_radius"] == 2
        assert all(row.source == "ht-expansion" for row in rows)
