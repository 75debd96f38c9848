"""
Tests for coefficient families, quotient profiles, certified evaluation
and Taylor sections.

Exact-rational partial sums (fractions.Fraction) serve as the oracle for
evaluation.
"""

from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from lp_certify.errors import ConvergenceError, DomainError, FamilyRangeError
from lp_certify.series import (
    evaluate,
    evaluate_phi,
    explicit,
    make_family,
    partial_theta,
    q_kummer,
    quotient_family,
    quotient_rule_family,
    quotients,
    section,
    to_mpf,
    truncate,
    truncation_degree,
)


def exact_partial_sum(coeff, z, n):
    """sum_{k<=n} coeff(k) z^k for a rational z."""
    z = Fraction(z)
    return sum(coeff(k) * z**k for k in range(n + 1))


def exact_complex_partial_sum(coeff, x, y, n):
    """(re, im) of sum_{k<=n} coeff(k) (x + iy)^k in exact rationals."""
    re, im = Fraction(0), Fraction(0)
    pr, pi = Fraction(1), Fraction(0)
    for k in range(n + 1):
        c = coeff(k)
        re += c * pr
        im += c * pi
        pr, pi = pr * x - pi * y, pr * y + pi * x
    return re, im


def theta_coeff(a):
    a = Fraction(a)
    return lambda k: (1 / a) ** (k * k)


def constant_q_coeff(q):
    q = Fraction(q)
    return lambda k: (1 / q) ** (k * (k - 1) // 2)


def close(x, y, rel=1e-12):
    return abs(x - y) <= rel * max(abs(x), abs(y), 1e-300)


class TestMakeFamily:
    """Family construction and descriptor validation."""

    def test_partial_theta_constant_quotients(self):
        seq = make_family({"family": "partial-theta", "a2": 4})
        assert all(seq.exact_q(n) == 4 for n in range(2, 30))

    def test_partial_theta_from_a(self):
        assert partial_theta(a=2).exact_q(5) == 4

    def test_q_kummer_quotients(self):
        seq = make_family({"family": "q-kummer", "a": 2})
        assert seq.exact_q(2) == Fraction(5, 3)
        assert seq.exact_q(3) == Fraction(9, 5)
        with mp.workdps(34):
            assert close(mpmath.exp(seq.log_p(3)), mpmath.mpf(9))

    def test_quotient_reconstruction(self):
        seq = make_family({"family": "quotients", "a0": 1, "a1": 1, "q": [3.5]})
        with mp.workdps(34):
            assert close(seq.coeff(2), 1 / mpmath.mpf("3.5"))
            assert close(seq.coeff(3), 1 / mpmath.mpf("3.5") ** 3)

    def test_quotient_list_reproduces_supplied_values(self):
        seq = quotient_family([3, "3.5", 4], a0=2, a1=5)
        assert [seq.exact_q(n) for n in range(2, 7)] == [3, Fraction(7, 2), 4, 4, 4]
        with mp.workdps(34):
            for n in range(2, 7):
                lc = seq.log_coeff
                value = mpmath.exp(2 * lc(n - 1) - lc(n - 2) - lc(n))
                assert close(value, to_mpf(seq.exact_q(n)), 1e-25)

    def test_decimal_literals_are_exact(self):
        seq = partial_theta(a2=3.24)
        assert seq.params["a2"] == Fraction(81, 25)

    @pytest.mark.parametrize(
        "spec",
        [
            {"family": "partial-theta", "a2": 1},
            {"family": "partial-theta", "a2": -4},
            {"family": "partial-theta"},
            {"family": "q-kummer", "a": 1},
            {"family": "q-kummer"},
            {"family": "quotients", "q": [3, -1, 4]},
            {"family": "quotients", "q": [0.5]},
            {"family": "quotients", "q": [4], "a0": 0},
            {"family": "quotients"},
            {"family": "explicit", "coeffs": [1, 0, 1]},
            {"family": "explicit", "coeffs": [1]},
            {"family": "bessel"},
        ],
    )
    def test_invalid_descriptors(self, spec):
        with pytest.raises(DomainError):
            make_family(spec)

    def test_error_names_the_field(self):
        with pytest.raises(DomainError, match="q\\[1\\]"):
            make_family({"family": "quotients", "q": [3, -1]})

    def test_descriptor_round_trip(self):
        seq = quotient_family([3, 3.5], a0=2, a1=3)
        again = make_family(seq.to_dict())
        with mp.workdps(34):
            assert all(seq.log_coeff(k) == again.log_coeff(k) for k in range(10))

    def test_explicit_index_beyond_list(self):
        seq = explicit([1, 1, Fraction(1, 4)])
        with pytest.raises(FamilyRangeError):
            seq.log_coeff(3)


class TestQuotients:
    """p_n, q_n and the profile flags."""

    def test_partial_theta_profile(self):
        profile = quotients(partial_theta(a2=3.24), 10)
        assert len(profile.q) == 9
        assert all(abs(q - mpmath.mpf("3.24")) < 1e-12 for q in profile.q)
        assert profile.monotone_nondecreasing
        assert profile.thresholds["ge_3"]
        assert profile.thresholds["ge_2cbrt2"]
        assert not profile.thresholds["ge_4"]

    def test_q_kummer_profile(self):
        profile = quotients(q_kummer(2), 4)
        expected = [Fraction(5, 3), Fraction(9, 5), Fraction(17, 9)]
        with mp.workdps(34):
            for got, want in zip(profile.q, expected):
                assert close(got, to_mpf(want), 1e-30)
        assert profile.monotone_nondecreasing

    def test_explicit_profile(self):
        profile = quotients(explicit([1, 1, Fraction(1, 4), Fraction(1, 48)]), 3)
        assert close(profile.q_at(2), 4, 1e-30)
        assert close(profile.q_at(3), 3, 1e-30)
        assert not profile.monotone_nondecreasing
        assert profile.argmin_q == 3

    def test_q_times_previous_p_is_p(self):
        profile = quotients(q_kummer(3), 20, dps=40)
        with mp.workdps(40):
            for n in range(2, 21):
                assert close(profile.q_at(n) * profile.p_at(n - 1), profile.p_at(n), 1e-35)

    def test_reconstruction_identity(self):
        seq = q_kummer(2)

        def exact_coeff(k):
            product = Fraction(1)
            for j in range(1, k + 1):
                product *= 2**j + 1
            return 1 / product

        with mp.workdps(34):
            for k in range(0, 25):
                assert close(seq.coeff(k), to_mpf(exact_coeff(k)), 1e-12)

    def test_n_max_too_small(self):
        with pytest.raises(DomainError):
            quotients(q_kummer(2), 1)

    def test_profile_window_out_of_range(self):
        profile = quotients(q_kummer(2), 5)
        with pytest.raises(FamilyRangeError):
            profile.q_at(6)


class TestTransformations:
    """Rescaling and normalization keep every q_n."""

    @pytest.mark.parametrize("c, d", [(3, Fraction(1, 7)), (Fraction(1, 10), 5), (2, 2)])
    def test_rescaled_keeps_quotients(self, c, d):
        seq = q_kummer(2)
        scaled = seq.rescaled(c, d)
        with mp.workdps(34):
            for n in range(2, 16):
                lc = scaled.log_coeff
                value = mpmath.exp(2 * lc(n - 1) - lc(n - 2) - lc(n))
                assert close(value, seq.q(n), 1e-13)

    def test_normalized_has_unit_first_coefficients(self):
        seq = quotient_family([3.5, 4], a0=3, a1=7).normalized()
        with mp.workdps(34):
            assert abs(seq.log_coeff(0)) < 1e-30
            assert abs(seq.log_coeff(1)) < 1e-30
            assert close(seq.coeff(2), 1 / mpmath.mpf("3.5"), 1e-25)

    def test_round_trip_through_quotients(self):
        seq = q_kummer(2)
        profile = quotients(seq, 51)
        with mp.workdps(34):
            rebuilt = quotient_family(list(profile.q), a0=1, a1=seq.coeff(1))
            for k in range(0, 51):
                assert close(rebuilt.log_coeff(k), seq.log_coeff(k), 1e-12)

    def test_rule_family(self):
        seq = quotient_rule_family(lambda n: min(Fraction("2.52") + Fraction("0.05") * n, 6), monotone=True, limit=6)
        assert seq.tail_behaviour() == "non-decreasing"
        assert seq.quotient_limit() == 6
        with mp.workdps(34):
            assert close(seq.q(2), mpmath.mpf("2.62"), 1e-25)


class TestEvaluate:
    """Certified evaluation against exact rational partial sums."""

    def test_constant_term(self):
        ev = evaluate(partial_theta(a2=4), 0)
        assert ev.value == 1
        assert ev.error_bound == 0

    def test_constant_quotient_four_at_minus_two(self):
        seq = quotient_family([4])
        oracle = exact_partial_sum(constant_q_coeff(4), -2, 40)
        ev = evaluate(seq, -2)
        with mp.workdps(34):
            assert abs(ev.value - to_mpf(oracle)) <= ev.error_bound + mpmath.mpf("1e-32")
            assert ev.tail_bound <= mpmath.mpf("2e-25") * max(abs(ev.value), ev.largest_term)

    @pytest.mark.parametrize("a", [Fraction(9, 5), 2, 3])
    @pytest.mark.parametrize("z", [-7, -30, Fraction(5, 2)])
    def test_tail_bound_covers_true_tail(self, a, z):
        seq = partial_theta(a=a)
        coeff = theta_coeff(a)
        oracle = exact_partial_sum(coeff, z, 80)
        ev = evaluate(seq, mpmath.mpf(z.numerator) / z.denominator if isinstance(z, Fraction) else z, 1e-12)
        true_tail = oracle - exact_partial_sum(coeff, z, ev.degree)
        with mp.workdps(34):
            assert abs(to_mpf(true_tail)) <= ev.tail_bound
            assert abs(ev.value - to_mpf(oracle)) <= ev.error_bound + mpmath.mpf("1e-30") * ev.largest_term

    def test_complex_argument(self):
        seq = partial_theta(a=2)
        re, im = exact_complex_partial_sum(theta_coeff(2), 3, 4, 60)
        with mp.workdps(34):
            ev = evaluate(seq, mpmath.mpc(3, 4))
            assert abs(ev.value.real - to_mpf(re)) <= ev.error_bound + mpmath.mpf("1e-30")
            assert abs(ev.value.imag - to_mpf(im)) <= ev.error_bound + mpmath.mpf("1e-30")

    def test_interval_endpoint_has_small_tail(self):
        for seq in (partial_theta(a2=3.24), q_kummer(2), quotient_family([3, 3.5])):
            with mp.workdps(34):
                left = -mpmath.exp(seq.log_p(2))
            ev = evaluate(seq, left)
            assert ev.tail_bound <= mpmath.mpf("2e-25") * max(abs(ev.value), ev.largest_term)

    def test_phi_is_reflection(self):
        seq = q_kummer(2)
        with mp.workdps(34):
            assert evaluate_phi(seq, 3).value == evaluate(seq, -3).value

    def test_polynomial_is_summed_exactly_to_its_degree(self):
        seq = explicit([1, 3, 3, 1])
        ev = evaluate(seq, -2)
        assert ev.degree == 3
        assert ev.tail_bound == 0
        assert abs(ev.value - (-1)) <= ev.error_bound

    def test_rel_tol_domain(self):
        with pytest.raises(DomainError):
            evaluate(q_kummer(2), 1, rel_tol=0)

    def test_degree_cap(self):
        with pytest.raises(ConvergenceError):
            evaluate(quotient_family([4]), 1e6, degree_cap=3)

    def test_truncation_degree_grows_with_radius(self):
        seq = quotient_family([4])
        with mp.workdps(34):
            small = truncation_degree(seq, 10)
            large = truncation_degree(seq, 2**19)
        assert small < large


class TestSections:
    """Taylor sections and consecutive-term sections."""

    def test_truncate_partial_theta(self):
        poly = truncate(partial_theta(a2=4), 2)
        coeffs = poly.coefficients()
        for got, want in zip(coeffs, [1, Fraction(1, 2), Fraction(1, 16)]):
            assert close(got, to_mpf(want), 1e-30)
        assert poly.degree == 2
        assert poly.zero_multiplicity == 0

    def test_truncate_constant_quotient(self):
        coeffs = truncate(quotient_family([3.5]), 3).coefficients()
        with mp.workdps(34):
            q = mpmath.mpf("3.5")
            for got, want in zip(coeffs, [1, 1, 1 / q, 1 / q**3]):
                assert close(got, want, 1e-30)

    def test_explicit_list_is_not_padded(self):
        with pytest.raises(FamilyRangeError):
            truncate(explicit([1, 1, Fraction(1, 4), Fraction(1, 48)]), 5)

    def test_section_matches_truncate(self):
        seq = q_kummer(2)
        assert section(seq, 0, 6).log_coeffs == truncate(seq, 6).log_coeffs

    def test_section_extracts_common_factor(self):
        poly = section(partial_theta(a2=4), 1, 3)
        assert poly.zero_multiplicity == 1
        assert poly.degree == 2
        for got, want in zip(poly.coefficients(), [Fraction(1, 2), Fraction(1, 16), Fraction(1, 512)]):
            assert close(got, to_mpf(want), 1e-30)

    def test_section_quotients_match_parent(self):
        seq = quotient_family([3, 3.5, 4, 5])
        poly = section(seq, 2, 5)
        with mp.workdps(34):
            assert close(poly.quotient(2), seq.q(4), 1e-25)
            assert close(poly.quotient(3), seq.q(5), 1e-25)

    @pytest.mark.parametrize("m, n", [(3, 3), (4, 2), (-1, 3)])
    def test_section_bounds(self, m, n):
        with pytest.raises(DomainError):
            section(q_kummer(2), m, n)

    def test_balanced_form_has_unit_maximum(self):
        poly = truncate(partial_theta(a2=3.24), 30)
        balanced = poly.balanced_coefficients()
        with mp.workdps(poly.dps):
            assert abs(max(balanced) - 1) < 1e-30
            assert all(b > 0 for b in balanced)
