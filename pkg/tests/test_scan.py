"""
Tests for node placement, golden-section refinement and escalating scans.
"""

import mpmath
import pytest
from mpmath import mp

from lp_certify.errors import DomainError, UnresolvedError
from lp_certify.scan import (
    SPACING_GEOMETRIC,
    ScanPolicy,
    _local_minima,
    certified_minimum,
    chebyshev_nodes,
    geometric_nodes,
    golden_section,
    scan_minimum,
)
from lp_certify.truncation import Evaluation


def exact_eval(fn, bound=0):
    """Wrap a plain function as an evaluator with a fixed error bound."""

    def evaluator(x):
        return Evaluation(
            z=x,
            value=fn(x),
            tail_bound=mpmath.mpf(0),
            rounding_bound=mpmath.mpf(bound),
            degree=0,
            largest_term=mpmath.mpf(1),
            dps=mp.dps,
        )

    return evaluator


class TestNodes:
    """Chebyshev and geometric node sets."""

    def test_chebyshev_endpoints(self):
        nodes = chebyshev_nodes(mpmath.mpf(-3), mpmath.mpf(0), 9)
        assert nodes[0] == -3
        assert nodes[-1] == 0
        assert nodes == sorted(nodes)

    def test_chebyshev_open(self):
        nodes = chebyshev_nodes(mpmath.mpf(-3), mpmath.mpf(0), 8, include_endpoints=False)
        assert all(-3 < x < 0 for x in nodes)

    def test_geometric_open_interval(self):
        nodes = geometric_nodes(mpmath.mpf(-8), mpmath.mpf(-2), 5)
        assert len(nodes) == 5
        assert all(-8 < x < -2 for x in nodes)
        ratios = [nodes[i] / nodes[i + 1] for i in range(4)]
        assert all(abs(r - ratios[0]) < 1e-12 for r in ratios)

    def test_geometric_rejects_origin(self):
        with pytest.raises(ValueError):
            geometric_nodes(mpmath.mpf(-1), mpmath.mpf(1), 5)

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            ScanPolicy(nodes=2)
        with pytest.raises(DomainError):
            ScanPolicy(nodes=0)
        with pytest.raises(ValueError):
            ScanPolicy(spacing="uniform")


class TestMinimum:
    """Scan plus refinement."""

    def test_golden_section_parabola(self):
        fn = exact_eval(lambda x: (x - mpmath.mpf("0.3")) ** 2)
        best, used = golden_section(fn, mpmath.mpf(0), mpmath.mpf(1), 48)
        assert abs(best.z - mpmath.mpf("0.3")) < 1e-8
        assert used == 50

    def test_scan_finds_interior_minimum(self):
        fn = exact_eval(lambda x: (x + mpmath.mpf("1.7")) ** 2 + mpmath.mpf("0.25"))
        result = scan_minimum(fn, -3, 0, ScanPolicy(nodes=64))
        assert abs(result.location + mpmath.mpf("1.7")) < 1e-6
        assert abs(result.best.value - mpmath.mpf("0.25")) < 1e-10
        assert result.all_positive

    def test_scan_not_fooled_by_two_wells(self):
        # shallow well near -2.5, deep narrow well near -0.4
        fn = exact_eval(
            lambda x: 1 - mpmath.exp(-((x + mpmath.mpf("2.5")) ** 2))
            - 2 * mpmath.exp(-50 * (x + mpmath.mpf("0.4")) ** 2)
        )
        result = scan_minimum(fn, -3, 0, ScanPolicy(nodes=128))
        assert abs(result.location + mpmath.mpf("0.4")) < 1e-3
        assert result.witness_found

    def test_geometric_scan(self):
        fn = exact_eval(lambda x: (x + 4) ** 2 + 1)
        result = scan_minimum(fn, -16, -1, ScanPolicy(nodes=64, spacing=SPACING_GEOMETRIC, open_interval=True))
        assert abs(result.location + 4) < 1e-6

    def test_stop_on_witness(self):
        fn = exact_eval(lambda x: x + 1)
        result = scan_minimum(fn, -3, 0, ScanPolicy(nodes=32), stop_on_witness=True)
        assert result.stopped_early
        assert result.witness_found

    def test_local_minima(self):
        fn = exact_eval(mpmath.mpf)
        values = [fn(v) for v in (3, 1, 2, 0, 5)]
        assert _local_minima(values) == [3, 1]
        assert _local_minima([fn(v) for v in (0, 1, 2)]) == [0]
        assert _local_minima([fn(v) for v in (2, 1, 1, 3)]) == [1]
        assert _local_minima([fn(v) for v in (4, 3, 2)]) == [2]

    def test_dip_between_end_and_first_open_node(self):
        # open geometric nodes on [-16, -1] stop near -11.76; the dip at -14 lies outside them
        fn = exact_eval(lambda x: 1 - 2 * mpmath.exp(-((x + 14) ** 2)))
        policy = ScanPolicy(nodes=8, spacing=SPACING_GEOMETRIC, open_interval=True)
        result = scan_minimum(fn, -16, -1, policy)
        assert result.witness_found
        assert abs(result.location + 14) < 1e-6

    def test_narrow_well_that_is_not_the_node_minimum(self):
        # the broad well near -2.5 holds the smallest node value; the narrow
        # well sits halfway between two nodes and is deeper
        nodes = chebyshev_nodes(mpmath.mpf(-3), mpmath.mpf(0), 16)
        centre = (nodes[9] + nodes[10]) / 2
        fn = exact_eval(
            lambda x: 1 - mpmath.exp(-((x + mpmath.mpf("2.5")) ** 2))
            - mpmath.mpf("1.5") * mpmath.exp(-(((x - centre) / mpmath.mpf("0.1")) ** 2))
        )
        values = [fn(x) for x in nodes]
        assert min(range(16), key=lambda i: values[i].value) == 4
        result = scan_minimum(fn, -3, 0, ScanPolicy(nodes=16))
        assert result.witness_found
        assert abs(result.location - centre) < 1e-2


class TestCertifiedMinimum:
    """Precision escalation and the unresolved outcome."""

    def test_resolved_without_escalation(self):
        result = certified_minimum(
            lambda dps: exact_eval(lambda x: x * x + 1),
            lambda dps: (mpmath.mpf(-1), mpmath.mpf(1)),
            ScanPolicy(nodes=16),
            dps=20,
            max_escalations=2,
        )
        assert result.all_positive
        assert result.escalations == 0
        assert result.dps == 20

    def test_escalates_until_bound_shrinks(self):
        # error bound 10^(-dps/2): the minimum 1e-12 is certified at 40 digits
        def make_fn(dps):
            return exact_eval(lambda x: x * x + mpmath.mpf("1e-12"), mpmath.mpf(10) ** (-dps // 2))

        result = certified_minimum(
            make_fn, lambda dps: (mpmath.mpf(-1), mpmath.mpf(1)), ScanPolicy(nodes=17), dps=20, max_escalations=3
        )
        assert result.all_positive
        assert result.dps == 40
        assert result.escalations == 1

    def test_straddle_raises_unresolved(self):
        with pytest.raises(UnresolvedError) as info:
            certified_minimum(
                lambda dps: exact_eval(lambda x: x * x, 1),
                lambda dps: (mpmath.mpf(-1), mpmath.mpf(1)),
                ScanPolicy(nodes=9),
                dps=20,
                max_escalations=1,
            )
        assert info.value.bound == 1
