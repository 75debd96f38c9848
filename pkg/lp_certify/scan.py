"""
Minimum search of a real function on a closed interval.

A dense scan finds candidate minima, then golden-section refinement runs
around every local minimum of the node values. The function is never
assumed unimodal on the whole interval.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import mpmath
from mpmath import mp

from lp_certify.errors import DomainError, UnresolvedError
from lp_certify.truncation import Evaluation

logger = logging.getLogger(__name__)

SPACING_CHEBYSHEV = "chebyshev"
SPACING_GEOMETRIC = "geometric"

DEFAULT_NODES = 512
GOLDEN_ITERATIONS = 48


@dataclass(frozen=True)
class ScanPolicy:
    nodes: int = DEFAULT_NODES
    spacing: str = SPACING_CHEBYSHEV
    golden_iterations: int = GOLDEN_ITERATIONS
    # open interval: endpoints are not sampled
    open_interval: bool = False

    def __post_init__(self):
        if self.nodes < 3:
            raise DomainError(f"a scan needs at least 3 nodes, got {self.nodes}")
        if self.spacing not in (SPACING_CHEBYSHEV, SPACING_GEOMETRIC):
            raise DomainError(f"unknown spacing {self.spacing!r}")


@dataclass(frozen=True)
class ScanResult:
    """Smallest evaluation found on an interval."""

    best: Evaluation
    interval: tuple
    evaluations: int
    dps: int
    escalations: int = 0
    stopped_early: bool = False

    @property
    def location(self):
        return self.best.z

    @property
    def witness_found(self) -> bool:
        return self.best.certified_nonpositive()

    @property
    def all_positive(self) -> bool:
        return self.best.certified_positive()

    @property
    def resolved(self) -> bool:
        return self.witness_found or self.all_positive


def chebyshev_nodes(lo, hi, count: int, include_endpoints: bool = True) -> list:
    """Chebyshev-Lobatto points on [lo, hi], ordered from lo to hi."""
    mid = (lo + hi) / 2
    half = (hi - lo) / 2
    if include_endpoints:
        nodes = [mid - half * mpmath.cospi(mpmath.mpf(i) / (count - 1)) for i in range(count)]
        nodes[0], nodes[-1] = lo, hi
    else:
        nodes = [
            mid - half * mpmath.cospi((2 * mpmath.mpf(i) + 1) / (2 * count))
            for i in range(count)
        ]
    return nodes


def geometric_nodes(lo, hi, count: int, include_endpoints: bool = False) -> list:
    """Points with geometric spacing of |x| on an interval of one sign."""
    if lo * hi <= 0:
        raise ValueError("geometric spacing needs an interval not containing 0")
    sign = 1 if lo > 0 else -1
    small, large = sorted((abs(lo), abs(hi)))
    ratio = large / small
    if include_endpoints:
        exps = [mpmath.mpf(i) / (count - 1) for i in range(count)]
    else:
        exps = [mpmath.mpf(i + 1) / (count + 1) for i in range(count)]
    nodes = [sign * small * ratio**e for e in exps]
    return sorted(nodes)


def _key(ev: Evaluation):
    # ties go to the point closer to the origin
    return (ev.value, abs(ev.z))


def golden_section(fn: Callable[[object], Evaluation], lo, hi, iterations: int):
    """Local minimum of fn on [lo, hi]; returns (best evaluation, evaluations used)."""
    invphi = (mpmath.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    best = min(fc, fd, key=_key)
    used = 2
    for _ in range(iterations):
        if fc.value <= fd.value:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
            cand = fc
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
            cand = fd
        used += 1
        if _key(cand) < _key(best):
            best = cand
    return best, used


def _local_minima(values) -> list:
    """Indices of discrete local minima of the node values, smallest first."""
    last = len(values) - 1
    found = []
    for i, ev in enumerate(values):
        left_ok = i == 0 or ev.value < values[i - 1].value
        right_ok = i == last or ev.value <= values[i + 1].value
        if left_ok and right_ok:
            found.append(i)
    return sorted(found, key=lambda i: _key(values[i]))


def scan_minimum(
    fn: Callable[[object], Evaluation],
    lo,
    hi,
    policy: ScanPolicy = ScanPolicy(),
    stop_on_witness: bool = False,
) -> ScanResult:
    """Scan [lo, hi] at the current working precision.

    Every discrete local minimum of the node values is refined between its
    neighbours; the first and last nodes reach out to the interval ends.
    """
    lo, hi = mpmath.mpmathify(lo), mpmath.mpmathify(hi)
    if policy.spacing == SPACING_GEOMETRIC:
        nodes = geometric_nodes(lo, hi, policy.nodes, not policy.open_interval)
    else:
        nodes = chebyshev_nodes(lo, hi, policy.nodes, not policy.open_interval)

    values = []
    for x in nodes:
        ev = fn(x)
        values.append(ev)
        if stop_on_witness and ev.certified_nonpositive():
            return ScanResult(ev, (lo, hi), len(values), mp.dps, stopped_early=True)

    best = min(values, key=_key)
    used = len(values)
    for i in _local_minima(values):
        left = nodes[i - 1] if i > 0 else lo
        right = nodes[i + 1] if i + 1 < len(nodes) else hi
        if left == right:
            continue
        local, count = golden_section(fn, left, right, policy.golden_iterations)
        used += count
        if _key(local) < _key(best):
            best = local
        if stop_on_witness and best.certified_nonpositive():
            return ScanResult(best, (lo, hi), used, mp.dps, stopped_early=True)
    return ScanResult(best, (lo, hi), used, mp.dps)


def certified_minimum(
    make_fn: Callable[[int], Callable[[object], Evaluation]],
    interval: Callable[[int], tuple],
    policy: ScanPolicy,
    dps: int,
    max_escalations: int,
    stop_on_witness: bool = False,
) -> ScanResult:
    """Scan with precision escalation until the sign of the minimum is certain.

    ``make_fn(dps)`` and ``interval(dps)`` build the evaluator and the
    interval at a given working precision.
    """
    for escalation in range(max_escalations + 1):
        with mp.workdps(dps):
            lo, hi = interval(dps)
            result = scan_minimum(make_fn(dps), lo, hi, policy, stop_on_witness)
        if result.resolved:
            if escalation:
                logger.info(f"Scan resolved after {escalation} escalation(s) at {dps} digits")
            return ScanResult(
                result.best,
                result.interval,
                result.evaluations,
                dps,
                escalation,
                result.stopped_early,
            )
        logger.info(
            f"Minimum {mpmath.nstr(result.best.value, 8)} straddles zero "
            f"(bound {mpmath.nstr(result.best.error_bound, 3)}); escalating"
        )
        dps *= 2
    logger.warning("Minimum sign unresolved after precision escalation")
    raise UnresolvedError(
        "sign of the scan minimum could not be certified",
        value=result.best.value,
        bound=result.best.error_bound,
    )
