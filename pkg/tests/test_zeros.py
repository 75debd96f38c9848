"""
Tests for section roots, real classification, disk counts and the census.
"""

import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy

from lp_certify import zeros
from lp_certify.config import RunConfig
from lp_certify.criteria import FAIL, PASS, mthm1_criterion
from lp_certify.errors import (
    ContourError,
    DegreeError,
    DomainError,
    FamilyRangeError,
    HypothesesNotMetError,
)
from lp_certify.series import explicit, quotient_family, quotient_rule_family, quotients, section, truncate
from lp_certify.truncation import Evaluation
from lp_certify.zeros import (
    NONREAL,
    REAL_NEGATIVE,
    UNRESOLVED,
    ContourPolicy,
    Root,
    ZeroReport,
    classify_real,
    count_zeros_disk,
    disk_radius,
    nonreal_census,
    quartic_grid,
    quartic_unit_disk_count,
    rho,
    roots_of_truncation,
    sign_alternation_check,
)

QUARTIC_GRID = ["2.5199", "3", "3.5", "4", "9"]


def classified(poly):
    return classify_real(roots_of_truncation(poly))


class TestRadii:
    """rho_j from the quotient profile."""

    def test_constant_four(self):
        profile = quotients(quotient_family([4]), 4)
        assert abs(rho(profile, 2) - 8) < 1e-25
        assert abs(rho(profile, 3) - 32) < 1e-25

    def test_constant_five(self):
        profile = quotients(quotient_family([5]), 3)
        assert abs(rho(profile, 2) - 5 * mpmath.sqrt(5)) < 1e-12

    def test_needs_next_quotient(self):
        profile = quotients(quotient_family([4]), 4)
        with pytest.raises(FamilyRangeError):
            rho(profile, 4)
        with pytest.raises(DomainError):
            rho(profile, 1)

    def test_disk_radius_uses_first_ratio(self):
        # a_0 / a_1 = 2 scales every radius
        seq = quotient_family([4], a0=2, a1=1)
        assert abs(disk_radius(seq, 2) - 16) < 1e-25


class TestRoots:
    """Aberth iteration and classification."""

    def test_double_root(self):
        report = classified(truncate(explicit([16, 8, 1]), 2))
        assert report.count_real == 2
        assert all(r.kind == REAL_NEGATIVE for r in report.roots)
        assert all(r.multiplicity == 2 for r in report.roots)
        assert all(abs(r.value + 4) < 1e-12 for r in report.roots)

    def test_linear(self):
        report = classified(truncate(explicit([6, 2]), 1))
        assert report.degree == 1
        assert abs(report.roots[0].value + 3) < 1e-25

    def test_constant_four_section_is_real_rooted(self):
        report = classified(truncate(quotient_family([4]), 8))
        assert report.degree == 8
        assert report.all_real
        assert report.all_negative
        assert report.all_simple
        assert max(r.residual for r in report.roots) < 1e-25

    @pytest.mark.slow
    @pytest.mark.parametrize("degree", [16, 32, 64])
    def test_high_degree_sections_of_constant_four(self, degree):
        report = classified(truncate(quotient_family([4]), degree))
        assert report.all_real
        assert report.count_real == degree

    @pytest.mark.slow
    @pytest.mark.parametrize("m, n", [(2, 9), (3, 12), (5, 20)])
    def test_middle_sections_of_constant_four(self, m, n):
        report = classified(section(quotient_family([4]), m, n))
        assert report.zero_multiplicity == m
        assert report.all_real

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [8, 16, 32, 64])
    def test_random_sections_of_constant_four(self, n):
        rng = random.Random(7919 + n)
        seq = quotient_family([4])
        for _ in range(5):
            m = rng.randint(0, n - 2)
            report = classified(section(seq, m, n))
            assert report.zero_multiplicity == m
            assert report.degree == n - m
            assert report.all_real, (m, n)

    @pytest.mark.slow
    @pytest.mark.parametrize("q", ["3.3", "3.5", "4", "9"])
    def test_passing_quotients_have_real_degree_64_sections(self, q):
        seq = quotient_family([q])
        assert mthm1_criterion(seq, n_check=40).outcome == PASS
        report = classified(truncate(seq, 64))
        assert report.all_real
        assert report.count_nonreal == 0

    @pytest.mark.slow
    @pytest.mark.parametrize("q", ["3.0", "3.1", "3.2"])
    def test_failing_quotients_have_nonreal_degree_64_roots(self, q):
        seq = quotient_family([q])
        assert mthm1_criterion(seq, n_check=40).outcome == FAIL
        report = classified(truncate(seq, 64))
        assert report.count_nonreal >= 2

    def test_section_keeps_zero_at_origin(self):
        report = roots_of_truncation(section(quotient_family([4]), 2, 6))
        assert report.zero_multiplicity == 2
        assert report.degree == 4

    def test_sorted_by_modulus(self):
        report = roots_of_truncation(truncate(quotient_family([3.5]), 12))
        moduli = [abs(r.value) for r in report.roots]
        assert moduli == sorted(moduli)

    @pytest.mark.slow
    def test_real_count_matches_sturm(self):
        q = Fraction(31, 10)
        degree = 32
        report = classified(truncate(quotient_family([q]), degree))
        x = sympy.Symbol("x")
        exact = [(1 / q) ** (k * (k - 1) // 2) for k in range(degree + 1)]
        coeffs = [sympy.Rational(c.numerator, c.denominator) for c in exact]
        oracle = sympy.Poly(list(reversed(coeffs)), x).count_roots()
        assert report.count_real <= oracle <= report.count_real + report.count_unresolved
        assert report.count_nonreal % 2 == 0
        assert report.count_nonreal >= 2

    def test_synthetic_classification(self):
        roots = (
            Root(mpmath.mpc(-2, "0.3"), 0, mpmath.mpf("1e-20")),
            Root(mpmath.mpc(-2, "-0.3"), 0, mpmath.mpf("1e-20")),
            Root(mpmath.mpc(-3, "1e-15"), 0, mpmath.mpf("1e-13")),
            Root(mpmath.mpc(-5, "1e-3"), 0, mpmath.mpf("1e-2")),
        )
        report = classify_real(ZeroReport(roots=roots, degree=4))
        kinds = [r.kind for r in report.roots]
        assert kinds == [NONREAL, NONREAL, REAL_NEGATIVE, UNRESOLVED]
        assert report.count_unresolved == 1
        assert report.all_simple
        assert report.classified

    def test_lonely_nonreal_root_is_unresolved(self):
        roots = (Root(mpmath.mpc(-1, 1), 0, mpmath.mpf("1e-20")), Root(mpmath.mpc(-7, 0), 0, mpmath.mpf("1e-20")))
        report = classify_real(ZeroReport(roots=roots, degree=2))
        assert report.roots[0].kind == UNRESOLVED

    def test_classify_needs_roots(self):
        with pytest.raises(DomainError):
            classify_real(ZeroReport(roots=(), degree=0))


class TestDiskCounts:
    """Argument principle on |z| = R."""

    def test_cubic_section_inside_large_disk(self):
        assert count_zeros_disk(truncate(quotient_family([4]), 3), 1000).count == 3

    def test_degree_is_conserved(self):
        poly = truncate(quotient_family([3.1]), 8)
        report = roots_of_truncation(poly)
        outer = 10 * max(abs(r.value) for r in report.roots)
        result = count_zeros_disk(poly, outer)
        assert result.count == 8
        assert result.residual < 1e-6

    def test_entire_function_at_rho_j(self):
        seq = quotient_family([4])
        result = count_zeros_disk(seq, disk_radius(seq, 6), j_hint=6)
        assert result.count == 6

    def test_root_on_contour(self):
        with pytest.raises(ContourError):
            count_zeros_disk(truncate(explicit([16, 8, 1]), 2), 4, ContourPolicy(max_points=256))

    @pytest.mark.slow
    @pytest.mark.parametrize("q", ["3.3", "4", "9"])
    def test_one_zero_per_annulus(self, q):
        seq = quotient_family([q])
        for j in range(4, 13):
            assert count_zeros_disk(seq, disk_radius(seq, j), j_hint=j).count == j

    def test_radius_domain(self):
        with pytest.raises(DomainError):
            count_zeros_disk(truncate(quotient_family([4]), 3), 0)

    @pytest.mark.parametrize(
        "q_j, q_j1",
        [(a, b) for i, a in enumerate(QUARTIC_GRID) for b in QUARTIC_GRID[i:]] + [("4", "3")],
    )
    def test_quartic_against_companion_roots(self, q_j, q_j1):
        result = quartic_unit_disk_count(q_j, q_j1)
        a, b = float(Fraction(q_j)), float(Fraction(q_j1))
        c = a * np.sqrt(b)
        oracle = int(np.sum(np.abs(np.roots([1, -c, a * b, -c, 1])) < 1))
        assert result.count == oracle == 2
        assert result.details["psi"]["holds"]

    def test_quartic_floor(self):
        with pytest.raises(DomainError):
            quartic_unit_disk_count("2.5", 3)

    def test_quartic_grid(self):
        rows = quartic_grid()
        assert len(rows) == 15
        assert all(row["q_j"] <= row["q_j1"] for row in rows)
        assert all(row["count"] == 2 and row["holds"] for row in rows)
        assert quartic_grid(list(reversed(QUARTIC_GRID))) == rows


class TestSignAlternation:
    """(-1)^k phi(rho_k) >= 0."""

    @pytest.mark.parametrize("q", ["3.5", "4"])
    def test_constant_quotients(self, q):
        checks = sign_alternation_check(quotient_family([q]), 25)
        assert [c.k for c in checks] == list(range(2, 26))
        assert all(c.status == "certified" for c in checks)
        assert all(c.mu > 0 for c in checks)

    def test_gate(self):
        with pytest.raises(HypothesesNotMetError):
            sign_alternation_check(quotient_family([2]), 10)

    def test_k_max_domain(self):
        with pytest.raises(DomainError):
            sign_alternation_check(quotient_family([4]), 1)

    def test_certified_checks_report_the_starting_precision(self):
        config = RunConfig(dps=40, max_escalations=2)
        checks = sign_alternation_check(quotient_family([4]), 6, config)
        assert all(c.status == "certified" for c in checks)
        assert all(c.dps == 40 for c in checks)

    def test_unresolved_checks_report_the_last_precision(self, monkeypatch):
        def straddling(seq, z, rel_tol=1e-25, **kwargs):
            return Evaluation(
                z=z,
                value=mpmath.mpf(0),
                tail_bound=mpmath.mpf(0),
                rounding_bound=mpmath.mpf(1),
                degree=0,
                largest_term=mpmath.mpf(1),
                dps=kwargs.get("dps") or 34,
            )

        monkeypatch.setattr(zeros, "evaluate", straddling)
        config = RunConfig(dps=20, max_escalations=2)
        checks = sign_alternation_check(quotient_family([4]), 4, config)
        assert [c.status for c in checks] == ["unresolved"] * 3
        assert all(c.dps == 80 for c in checks)


class TestCensus:
    """Nonreal zeros inside rho_j."""

    def test_gate(self):
        with pytest.raises(HypothesesNotMetError):
            nonreal_census(quotient_family([2]), (4, 6), 40)

    def test_degree_too_small(self):
        with pytest.raises(DegreeError) as info:
            nonreal_census(quotient_family([4]), (4, 10), 10)
        assert info.value.recommended_degree > 10

    def test_j_range_domain(self):
        with pytest.raises(DomainError):
            nonreal_census(quotient_family([4]), (6, 4), 40)

    @pytest.mark.slow
    def test_constant_four_has_no_nonreal_zeros(self):
        census = nonreal_census(quotient_family([4]), (4, 10), 60)
        assert [row.j for row in census.rows] == list(range(4, 11))
        assert all(row.winding == row.j for row in census.rows)
        assert all(row.nonreal_bound == 0 for row in census.rows)
        assert census.empirical_j0 == 4
        assert census.stabilized
        assert census.stable_nonreal == 0
        assert census.estqq_j0 == 4
        assert not census.conjecture_regime

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "seq",
        [
            quotient_family(["2.6"]),
            quotient_rule_family(
                lambda n: min(Fraction("2.52") + Fraction("0.05") * n, Fraction(6)), monotone=True, limit=6
            ),
        ],
        ids=["constant", "rule"],
    )
    def test_nonreal_count_settles(self, seq):
        try:
            census = nonreal_census(seq, (6, 14), 48)
        except DegreeError as exc:
            census = nonreal_census(seq, (6, 14), exc.recommended_degree + 4)
        assert census.stabilized
        assert census.stable_nonreal is not None
        assert not census.conjecture_regime
