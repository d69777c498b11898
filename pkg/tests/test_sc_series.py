from fractions import Fraction

import pytest

from isingloops import fixtures
from isingloops.report import Row
from isingloops.ring import (
    MONO_ONE,
    CycloNum,
    TagMonomial,
    TaggedPoly,
    XSeries,
    series_exp,
)
from isingloops.sc_series import (
    apply_actions,
    compare_with_oracle,
    expand_log,
    expand_sqrt,
    extract_gr,
    naive_reduce,
    numeric_determinant_check,
    project_and_strip,
    run_pipelines,
    symbolic_psi_sc,
)


@pytest.fixture(scope="module")
def psi():
    return symbolic_psi_sc()


class TestDeterminant:
    def test_matches_golden_display(self, psi):
        assert psi.series == fixtures.sc_determinant_fixture()

    def test_x2_coefficient(self, psi):
        expect = TaggedPoly({TagMonomial(du=4): CycloNum(1),
                             TagMonomial(dv=4): CycloNum(1),
                             TagMonomial(dw=4): CycloNum(1)})
        assert psi.series.coeffs[2] == expect

    def test_winding_cubic_terms(self, psi):
        c3 = psi.series.coeffs[3]
        plus = TagMonomial(du=2, dv=2, dw=2, el=-2, em=-2, en=-2, ep=1, eq=1, er=1)
        minus = TagMonomial(du=2, dv=2, dw=2, el=2, em=2, en=2, ep=-1, eq=-1, er=-1)
        assert c3.coefficient(plus) == CycloNum(4)
        assert c3.coefficient(minus) == CycloNum(4)

    def test_x6_coefficient(self, psi):
        assert psi.series.coeffs[6] == TaggedPoly.term(
            TagMonomial(du=4, dv=4, dw=4), 1)

    def test_degree_pairing_invariant(self, psi):
        psi.validate()

    def test_numeric_cross_check(self, psi):
        assert numeric_determinant_check(psi, samples=20) < 1e-10


class TestNaiveReduction:
    def test_matches_golden_display(self, psi):
        assert naive_reduce(psi).series == fixtures.sc_naive_fixture()

    def test_x1_coefficient(self, psi):
        naive = naive_reduce(psi)
        syms = [dict(ep=1), dict(ep=-1), dict(eq=1), dict(eq=-1),
                dict(er=1), dict(er=-1)]
        expect = TaggedPoly({TagMonomial(**s): CycloNum(-1) for s in syms})
        assert naive.series.coeffs[1] == expect

    def test_triangular_root_reproduced(self, psi):
        naive = naive_reduce(psi)
        assert abs(naive.zero_angle_eval(2 - 3**0.5)) < 1e-12
        assert naive.zero_angle_eval(0.0) == 1.0
        assert naive.naive is True

    def test_substitution_commutes_with_determinant(self, psi):
        # tags-to-one of the tagged determinant equals the determinant of
        # the tags-to-one matrix
        from isingloops.walker import build_sc_propagator, char_series, fourier_matrix

        prop = fourier_matrix(build_sc_propagator())
        reduced_entries = [[prop.entries[i][j].substitute_all_tags_one()
                            for j in range(6)] for i in range(6)]
        from isingloops.walker import PropagatorMatrix

        reduced = PropagatorMatrix(entries=reduced_entries, shifts=prop.shifts,
                                   mode="sc", fourier=True)
        assert char_series(reduced) == naive_reduce(psi).series


class TestExpansions:
    def test_sqrt_order2_equals_golden_series(self, psi):
        got = expand_sqrt(psi, 2)
        expect = fixtures.sqrt_order2_fixture()
        assert got.coeffs[0] == expect.coeffs[0]
        assert got.coeffs[1] == expect.coeffs[1]
        assert got.coeffs[2] == expect.coeffs[2]

    def test_sqrt_squares_back(self, psi):
        s = expand_sqrt(psi, 6)
        assert s * s == psi.padded(6)

    def test_log_exp_round_trip(self, psi):
        s = expand_log(psi, 6)
        assert series_exp(s) == psi.padded(6)

    def test_degree_pairing_in_expansions(self, psi):
        for series in (expand_sqrt(psi, 5), expand_log(psi, 5)):
            for r, poly in enumerate(series.coeffs):
                for mono in poly.terms:
                    assert mono.du + mono.dv + mono.dw == 2 * r

    def test_log_x1_projects_away(self, psi):
        series = project_and_strip(expand_log(psi, 3))
        assert not series.coeffs[1]

    def test_order_cap(self, psi):
        with pytest.raises(ValueError):
            run_pipelines(order=12)


class TestActions:
    def test_example_group_counts_plus_one(self):
        # the x^6 group built from the worked hexagon example: members at
        # (0,0,0) and (+-4,+-4,+-4) with the orientation-averaged weights
        from isingloops.walker import graph_loop_sum, sc_walk_edges

        g = graph_loop_sum(sc_walk_edges([1, 2, 3, 4, 5, 6]))
        series = XSeries(6)
        series.coeffs[6] = g.tagged_sum
        filtered, diag = apply_actions(series)
        assert filtered.coeffs[6].rational_value() == 1
        assert diag.kept_groups.get(6) == 1

    def test_group_without_balanced_member_dropped(self, psi):
        # the x^3 coefficient groups all carry winding tags: every group
        # must be dropped
        series = XSeries(3)
        series.coeffs[3] = psi.series.coeffs[3]
        filtered, diag = apply_actions(series)
        assert not filtered.coeffs[3]
        assert diag.kept_groups.get(3) is None
        assert diag.dropped_groups.get(3) == 7

    def test_empty_series(self):
        filtered, diag = apply_actions(XSeries(4))
        assert all(not c for c in filtered.coeffs)
        assert diag.totals() == {"kept": 0, "dropped": 0}

    def test_odd_degree_integrity_error(self):
        series = XSeries(2)
        series.coeffs[1] = TaggedPoly.term(TagMonomial(du=1), 1)
        with pytest.raises(AssertionError):
            apply_actions(series)

    def test_sqrt_route_kills_two_bond_artifact(self, psi):
        # without the actions the square-root series would report 3/4 at
        # order 2; the winding members of each group cancel it exactly
        sqrt_series = expand_sqrt(psi, 2)
        filtered, _ = apply_actions(sqrt_series)
        assert not filtered.coeffs[2]
        projected = project_and_strip(sqrt_series)
        assert projected.coeffs[2].rational_value() == Fraction(3, 4)


class TestExtractAndCompare:
    def test_extract_flags_odd_anomaly(self):
        series = XSeries(3)
        series.coeffs[3] = TaggedPoly.scalar(5)
        rows = extract_gr(series, "test")
        assert rows[3].flags.get("odd_order_anomaly") is True
        assert rows[2].flags == {}

    def test_extract_rejects_tagged_series(self):
        series = XSeries(2)
        series.coeffs[2] = TaggedPoly.term(TagMonomial(du=2), 1)
        with pytest.raises(ValueError):
            extract_gr(series, "test")

    def test_compare_identical_inputs_agree(self):
        rows = [Row(r=4, value=Fraction(3), source="test")]
        out = compare_with_oracle(rows, {4: Fraction(3)}, "oracle")
        assert out[0].flags["agree"] is True

    def test_compare_flags_mismatch(self):
        rows = [Row(r=4, value=Fraction(3), source="test")]
        out = compare_with_oracle(rows, {4: Fraction(5)}, "oracle")
        assert out[0].flags["agree"] is False
        assert out[0].flags["oracle"] == Fraction(5)


@pytest.fixture(scope="module")
def report():
    return run_pipelines(order=8)


class TestPipelines:

    def test_rows_cover_both_routes(self, report):
        sources = {row.source for row in report.rows}
        assert {"sqrt-actions", "log-actions", "log-projected"} <= sources

    def test_all_odd_orders_vanish(self, report):
        for row in report.rows:
            if row.r % 2:
                assert row.value == 0

    def test_projected_log_route_values(self, report):
        # frozen measurement: the projected route reproduces the plaquette
        # order exactly and then undercounts
        vals = {row.r: row.value for row in report.rows
                if row.source == "log-projected"}
        assert vals[4] == 3
        assert vals[6] == 10
        assert vals[8] == Fraction(87, 2)

    def test_agreement_flags(self, report):
        flags = {(row.source, row.r): row.flags.get("agree")
                 for row in report.rows if "agree" in row.flags}
        assert flags[("log-projected", 4)] is True
        assert flags[("log-projected", 6)] is False
        assert flags[("log-projected", 8)] is False

    def test_group_action_rows_are_scalars(self, report):
        for row in report.rows:
            assert isinstance(row.value, Fraction)

    def test_checks_pass(self, report):
        assert report.checks["determinant_fixture"] is True
        assert report.checks["numeric_determinant_1e-10"] is True
        assert report.checks["naive_root_is_triangular"] is True

    def test_mismatch_reported_not_suppressed(self, report):
        assert report.mismatch is True
        disagreements = [row for row in report.rows
                         if row.flags.get("agree") is False]
        assert disagreements
