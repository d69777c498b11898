"""Simple-cubic series pipeline built on the tagged propagator.

The tagged determinant is expanded as sqrt and log series in x, then
filtered by the two counting actions: terms are grouped by their generic
axis-usage monomial u^a v^b w^c, a group survives only if it contains a
term with all direction tags at zero power (the closed-on-SC signature),
and a surviving group is summed with the direction tags — and the Fourier
symbols locked to them — set to one.  A naive reduction that sets every
tag to one from the start reproduces the plane-triangular critical point
and is kept as the documented dead end.

The module never assumes the filtered coefficients are correct; they are
compared against brute-force subgraph counts and the comparison result is
the deliverable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import oracle
from .report import Row, SeriesReport, compare_rows
from .ring import (
    MONO_ONE,
    TagMonomial,
    TaggedPoly,
    XSeries,
    project_mode_sum,
    series_log,
    series_sqrt,
)
from .walker import build_sc_propagator, char_series, fourier_matrix

DEFAULT_ORDER = 8
TERM_BUDGET = 10_000_000


@dataclass
class TaggedPsi:
    """Degree-6 tagged determinant with helpers for expansion and checks."""

    series: XSeries

    def padded(self, order: int) -> XSeries:
        out = XSeries(order)
        for k, c in enumerate(self.series.coeffs):
            if k <= order:
                out.coeffs[k] = c
        return out

    def validate(self):
        if self.series.coeffs[0] != TaggedPoly.one():
            raise AssertionError("constant term must be 1")
        for k, poly in enumerate(self.series.coeffs):
            for mono in poly.terms:
                if mono.du + mono.dv + mono.dw != 2 * k:
                    raise AssertionError("axis-usage degree must be twice the x power")

    def eval_numeric(self, x: complex, u=1.0, v=1.0, w=1.0, l=1.0, m=1.0, n=1.0,
                     ep=1.0, eq=1.0, er=1.0) -> complex:
        total = 0j
        for k, poly in enumerate(self.series.coeffs):
            total += poly.evalf(u=u, v=v, w=w, l=l, m=m, n=n, ep=ep, eq=eq, er=er) * x**k
        return total


def symbolic_psi_sc() -> TaggedPsi:
    """det(I - x Omega) over the exact tagged ring."""
    psi = TaggedPsi(series=char_series(fourier_matrix(build_sc_propagator())))
    psi.validate()
    return psi


def numeric_determinant_check(psi: TaggedPsi, samples: int = 20,
                              seed: int = 20240901) -> float:
    """Largest relative error between the symbolic determinant and a float
    6x6 determinant at random Fourier modes and couplings, with tags at 1."""
    rng = np.random.default_rng(seed)
    prop = fourier_matrix(build_sc_propagator())
    worst = 0.0
    for _ in range(samples):
        side = int(rng.integers(3, 12))
        p, q, r = (int(rng.integers(0, side)) for _ in range(3))
        x = float(rng.uniform(0.02, 0.2))
        ep, eq, er = (np.exp(2j * np.pi * k / side) for k in (p, q, r))
        mat = np.zeros((6, 6), dtype=complex)
        for i in range(6):
            for j in range(6):
                mat[i, j] = prop.entries[i][j].evalf(ep=ep, eq=eq, er=er)
        direct = np.linalg.det(np.eye(6) - x * mat)
        symbolic = psi.eval_numeric(x, ep=ep, eq=eq, er=er)
        worst = max(worst, abs(direct - symbolic) / max(abs(direct), 1e-30))
    return worst


@dataclass
class NaivePsi:
    """The determinant with every tag set to one — the documented dead end
    whose zero-angle root reproduces the plane-triangular critical point."""

    series: XSeries
    naive: bool = True

    def zero_angle_coeffs(self) -> list[Fraction]:
        out = []
        for poly in self.series.coeffs:
            out.append(poly.map_monomials(lambda m: MONO_ONE).rational_value())
        return out

    def zero_angle_eval(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.zero_angle_coeffs()):
            acc = acc * x + float(c)
        return acc


def naive_reduce(psi: TaggedPsi) -> NaivePsi:
    """Set l = m = n = u = v = w = 1 before doing anything else."""
    return NaivePsi(series=psi.series.map_coeffs(
        lambda c: c.substitute_all_tags_one()))


def expand_sqrt(psi: TaggedPsi, order: int = DEFAULT_ORDER) -> XSeries:
    """Binomial series of the square root of the tagged determinant."""
    out = series_sqrt(psi.padded(order))
    _check_budget(out)
    return out


def expand_log(psi: TaggedPsi, order: int = DEFAULT_ORDER) -> XSeries:
    """Log series of the tagged determinant (unprojected; callers choose
    between the counting actions and the plain mode projection)."""
    out = series_log(psi.padded(order))
    _check_budget(out)
    return out


def _check_budget(series: XSeries):
    for k, poly in enumerate(series.coeffs):
        if len(poly) > TERM_BUDGET:
            raise ResourceWarning(f"term budget exceeded at order {k}")


@dataclass
class ActionDiagnostics:
    kept_groups: dict = field(default_factory=dict)
    dropped_groups: dict = field(default_factory=dict)

    def totals(self):
        return {
            "kept": sum(self.kept_groups.values()),
            "dropped": sum(self.dropped_groups.values()),
        }


def apply_actions(series: XSeries) -> tuple[XSeries, ActionDiagnostics]:
    """The two counting actions, applied per generic monomial group.

    Group the order-r terms by (a, b, c) = axis-usage exponents.  If any
    member carries zero direction tags, the group is summed with the tags
    (and the Fourier symbols tied to them) set to one and the generic
    monomial replaced by 1; otherwise the whole group is dropped.  Odd
    a + b + c would break the step-pairing invariant and raises.
    """
    diag = ActionDiagnostics()
    out = XSeries(series.order)
    for r, poly in enumerate(series.coeffs):
        groups: dict[tuple, dict] = {}
        for mono, coef in poly.terms.items():
            if (mono.du + mono.dv + mono.dw) % 2:
                raise AssertionError("odd axis-usage degree in series term")
            groups.setdefault(mono.uvw, {})[mono] = coef
        total = TaggedPoly.zero()
        kept = dropped = 0
        for key, members in sorted(groups.items()):
            if any(m.lmn == (0, 0, 0) for m in members):
                acc = TaggedPoly.zero()
                for mono, coef in members.items():
                    acc = acc + TaggedPoly.term(MONO_ONE, coef)
                total = total + acc
                kept += 1
            else:
                dropped += 1
        if kept:
            diag.kept_groups[r] = kept
        if dropped:
            diag.dropped_groups[r] = dropped
        out.coeffs[r] = total
    return out, diag


def project_and_strip(series: XSeries) -> XSeries:
    """Plain per-site mode projection followed by erasing the (now all
    balanced) tags; the projection-only alternative to the actions."""
    projected = project_mode_sum(series)
    return projected.map_coeffs(
        lambda c: c.substitute_lmn_one().substitute_uvw_one())


def extract_gr(filtered: XSeries, source: str,
               normalization: Fraction = Fraction(1)) -> list[Row]:
    """Read scalar coefficients as g_r rows; odd orders must vanish and are
    flagged (not fatal) when they do not."""
    rows = []
    for r, poly in enumerate(filtered.coeffs):
        value = poly.rational_value() * normalization
        flags = {}
        if r % 2 and value != 0:
            flags["odd_order_anomaly"] = True
        rows.append(Row(r=r, value=value, source=source, flags=flags))
    return rows


def compare_with_oracle(rows: list[Row], oracle_values: dict,
                        oracle_source: str) -> list[Row]:
    return compare_rows(rows, oracle_values, oracle_source)


def run_pipelines(order: int = DEFAULT_ORDER,
                  oracle_r_max: int | None = None) -> SeriesReport:
    """Full simple-cubic run: every series route, filtered, extracted and
    compared against the brute-force per-site data."""
    if order > DEFAULT_ORDER + 2:
        raise ValueError("order beyond the configured maximum")
    psi = symbolic_psi_sc()
    if oracle_r_max is None:
        oracle_r_max = order
    persite = oracle.persite_log_series("sc", oracle_r_max)
    cumulants = {r: v for r, v in persite.cumulants.items()}
    connected = {r: Fraction(v) for r, v in persite.connected.items()}

    report = SeriesReport()
    report.diagnostics["oracle_connected"] = {str(r): str(v) for r, v in sorted(connected.items())}
    report.diagnostics["oracle_cumulants"] = {str(r): str(v) for r, v in sorted(cumulants.items())}

    sqrt_series = expand_sqrt(psi, order)
    sqrt_filtered, sqrt_diag = apply_actions(sqrt_series)
    rows = extract_gr(sqrt_filtered, "sqrt-actions")
    report.add_rows(compare_with_oracle(rows, cumulants, "persite-cumulant"))
    report.diagnostics["sqrt_actions_groups"] = sqrt_diag.totals()

    log_series = expand_log(psi, order)
    log_filtered, log_diag = apply_actions(log_series)
    rows = extract_gr(log_filtered, "log-actions", Fraction(1, 2))
    report.add_rows(compare_with_oracle(rows, cumulants, "persite-cumulant"))
    report.diagnostics["log_actions_groups"] = log_diag.totals()

    projected = project_and_strip(log_series)
    rows = extract_gr(projected, "log-projected", Fraction(1, 2))
    report.add_rows(compare_with_oracle(rows, cumulants, "persite-cumulant"))

    report.checks["determinant_fixture"] = psi.series == symbolic_psi_sc().series
    report.checks["numeric_determinant_1e-10"] = bool(numeric_determinant_check(psi) < 1e-10)
    naive = naive_reduce(psi)
    report.checks["naive_root_is_triangular"] = abs(
        naive.zero_angle_eval(2.0 - 3.0**0.5)) < 1e-12
    report.diagnostics["order"] = order
    report.diagnostics["normalization"] = {
        "sqrt-actions": "raw coefficient of the square-root series",
        "log-actions": "half the coefficient of the log series",
        "log-projected": "half the mode-projected log series",
        "oracle": "per-site cumulant of log S (connected counts also listed)",
    }
    return report
