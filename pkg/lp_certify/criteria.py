"""
Membership tests for the Laguerre-Polya class of type I.

Each test returns a Verdict. PASS and FAIL are only issued when every
hypothesis of the underlying theorem holds; otherwise the outcome is
HYPOTHESES_NOT_MET and the first failing hypothesis is named.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp

from lp_certify.config import DEFAULT_CONFIG, RunConfig
from lp_certify.constants import Q_BRANCH_MIN, RATIO_BRANCH_MIN, q_infinity
from lp_certify.errors import DomainError
from lp_certify.scan import ScanPolicy, certified_minimum
from lp_certify.series import EXPLICIT, CoefficientSequence, evaluate, meets, quotients, to_mpf

logger = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"
HYPOTHESES_NOT_MET = "HYPOTHESES_NOT_MET"

CRITERIA = ("hutchinson", "lemma12", "theoremD", "mthm1", "limit")

DEFAULT_N_CHECK = 200
# how far past n_check a proven non-decreasing rule is followed to find j0
_J0_SEARCH_FACTOR = 10


@dataclass(frozen=True)
class Hypothesis:
    name: str
    satisfied: bool
    measured: object = None

    def to_dict(self) -> dict:
        return {"name": self.name, "satisfied": self.satisfied, "measured": self.measured}


@dataclass(frozen=True)
class Verdict:
    criterion: str
    outcome: str
    witness: dict | None = None
    hypotheses: tuple = ()
    measurements: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.outcome == PASS

    @property
    def first_failed(self) -> Hypothesis | None:
        return next((h for h in self.hypotheses if not h.satisfied), None)

    def to_dict(self) -> dict:
        failed = self.first_failed
        return {
            "criterion": self.criterion,
            "outcome": self.outcome,
            "witness": dict(self.witness) if self.witness else None,
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "failed_hypothesis": failed.name if failed else None,
            "measurements": dict(self.measurements),
        }


def _not_met(criterion, hypotheses, measurements=None) -> Verdict:
    failed = next(h for h in hypotheses if not h.satisfied)
    logger.info(f"{criterion}: hypothesis '{failed.name}' not met")
    return Verdict(
        criterion=criterion,
        outcome=HYPOTHESES_NOT_MET,
        hypotheses=tuple(hypotheses),
        measurements=measurements or {},
    )


def _checked_range(seq: CoefficientSequence, n_max: int) -> int:
    """Largest quotient index to inspect: n_max, widened to cover a finite list."""
    top = seq.max_index
    if top is not None:
        return min(n_max, top)
    return max(n_max, seq.tail_start() + 1)


def _non_decreasing(values, rel: float) -> tuple:
    """(holds, first index i with values[i+1] < values[i])."""
    for i in range(len(values) - 1):
        if values[i + 1] < values[i] * (1 - rel):
            return False, i
    return True, None


def _witness(result, lo, seq) -> dict:
    """Describe a sign witness z_0 on [-a_1/a_2, 0]."""
    z0 = result.location
    if z0 == lo:
        location = "left-endpoint"
    elif z0 == 0:
        location = "origin"
    else:
        location = "interior"
    # (-a_1/a_2, -a_0/a_1) is where the normalized argument uses it
    inner_left = lo
    inner_right = -mpmath.exp(seq.log_p(1))
    return {
        "z0": z0,
        "x0": -z0,
        "value": result.best.value,
        "error_bound": result.best.error_bound,
        "location": location,
        "in_open_subinterval": bool(inner_left < z0 < inner_right),
        "dps": result.dps,
    }


def _sign_scan(seq, policy, config):
    """Certified minimum of f on [-a_1/a_2, 0]; stops at the first witness."""
    rel_tol = config.tol("evaluate_rel")

    def make_fn(dps):
        return lambda x: evaluate(seq, x, rel_tol, dps=dps, max_escalations=0)

    def interval(dps):
        return -mpmath.exp(seq.log_p(2)), mpmath.mpf(0)

    return certified_minimum(
        make_fn, interval, policy, config.dps, config.max_escalations, stop_on_witness=True
    )


def _scan_verdict(criterion, seq, hypotheses, measurements, policy, config) -> Verdict:
    result = _sign_scan(seq, policy, config)
    with mp.workdps(result.dps):
        lo = result.interval[0]
        measurements = dict(measurements)
        measurements.update(
            {
                "interval": [lo, mpmath.mpf(0)],
                "scan_minimum": result.best.value,
                "scan_minimum_at": result.location,
                "scan_error_bound": result.best.error_bound,
                "evaluations": result.evaluations,
                "escalations": result.escalations,
            }
        )
        if result.witness_found:
            return Verdict(criterion, PASS, _witness(result, lo, seq), tuple(hypotheses), measurements)
        return Verdict(
            criterion,
            FAIL,
            {"min_value": result.best.value, "at": result.location, "error_bound": result.best.error_bound},
            tuple(hypotheses),
            measurements,
        )


# ------------------------------------------------------------------------ criteria


def hutchinson_test(
    seq: CoefficientSequence, n_max: int = DEFAULT_N_CHECK, config: RunConfig = DEFAULT_CONFIG
) -> Verdict:
    """q_n >= 4 for every n: all sections and the function itself are real-rooted."""
    if n_max < 2:
        raise DomainError(f"n_max must be at least 2, got {n_max}")
    n_eff = _checked_range(seq, n_max)
    if n_eff < 2:
        # a linear polynomial has no quotients to check
        hypotheses = (Hypothesis("positive_coefficients", True), Hypothesis("tail_rule_known", True, "finite"))
        return Verdict("hutchinson", PASS, None, hypotheses, {"min_q": None, "argmin_q": None, "n_checked": 0})
    tol = config.tol("hypothesis_rel")
    profile = quotients(seq, n_eff, dps=config.dps)
    measurements = {
        "min_q": profile.min_q,
        "argmin_q": profile.argmin_q,
        "n_checked": n_eff,
    }
    with mp.workdps(config.dps):
        for n, q in enumerate(profile.q, start=2):
            if not meets(q, 4, tol):
                return Verdict(
                    "hutchinson",
                    FAIL,
                    {"index": n, "q": q},
                    (Hypothesis("positive_coefficients", True),),
                    measurements,
                )
    tail = seq.tail_behaviour()
    hypotheses = [
        Hypothesis("positive_coefficients", True),
        Hypothesis("tail_rule_known", tail is not None, tail),
    ]
    if tail is None:
        return _not_met("hutchinson", hypotheses, measurements)
    return Verdict("hutchinson", PASS, None, tuple(hypotheses), measurements)


def necessary_q2q3_test(seq: CoefficientSequence, config: RunConfig = DEFAULT_CONFIG) -> Verdict:
    """q_3 (q_2 - 4) + 3 >= 0 holds for every member of the class."""
    with mp.workdps(config.dps):
        q2, q3 = seq.q(2), seq.q(3)
        value = q3 * (q2 - 4) + 3
        measurements = {"q2": q2, "q3": q3, "value": value}
        hypotheses = (Hypothesis("q2_q3_computable", True, [q2, q3]),)
        if value >= -config.tol("hypothesis_rel"):
            return Verdict("lemma12", PASS, None, hypotheses, measurements)
        return Verdict("lemma12", FAIL, {"value": value}, hypotheses, measurements)


def necessary_sign_test(
    seq: CoefficientSequence,
    policy: ScanPolicy = ScanPolicy(),
    config: RunConfig = DEFAULT_CONFIG,
) -> Verdict:
    """With q_2 <= q_3 a member of the class is non-positive somewhere on [-a_1/a_2, 0]."""
    with mp.workdps(config.dps):
        q2, q3 = seq.q(2), seq.q(3)
        gate = Hypothesis("q2_le_q3", bool(q2 <= q3 * (1 + config.tol("hypothesis_rel"))), [q2, q3])
    if not gate.satisfied:
        return _not_met("theoremD", [gate], {"q2": q2, "q3": q3})
    return _scan_verdict("theoremD", seq, [gate], {"q2": q2, "q3": q3}, policy, config)


def mthm1_hypotheses(
    seq: CoefficientSequence, n_check: int = DEFAULT_N_CHECK, config: RunConfig = DEFAULT_CONFIG
) -> tuple:
    """Hypotheses of the main criterion, in the order they are checked.

    Returns (hypotheses, measurements).
    """
    tol = config.tol("hypothesis_rel")
    hypotheses = []
    entire = seq.family != EXPLICIT
    hypotheses.append(Hypothesis("entire_positive_coefficients", entire, seq.family))
    if not entire:
        return hypotheses, {}

    n_eff = _checked_range(seq, n_check)
    profile = quotients(seq, n_eff, dps=config.dps)
    qs = list(profile.q)
    measurements = {"n_checked": n_eff, "min_q": profile.min_q, "argmin_q": profile.argmin_q}

    with mp.workdps(config.dps):
        hypotheses.append(Hypothesis("q2_ge_3", meets(qs[0], 3, tol), qs[0]))
        monotone, bad = _non_decreasing(qs, tol)
        hypotheses.append(
            Hypothesis("q_non_decreasing", monotone, None if monotone else {"n": bad + 2, "q_n": qs[bad], "q_n+1": qs[bad + 1]})
        )
        tail = seq.tail_behaviour()
        hypotheses.append(
            Hypothesis("tail_rule_proven", tail in ("constant", "non-decreasing"), tail)
        )
        if not all(h.satisfied for h in hypotheses):
            return hypotheses, measurements

        j0 = next((n for n in range(2, n_eff) if qs[n - 2] < 4 <= qs[n - 1]), None)
        if j0 is None and qs[-1] < 4 and tail == "non-decreasing":
            limit = seq.quotient_limit()
            if limit is not None and limit <= 4:
                measurements["j0_search"] = "limit <= 4, no crossing"
            else:
                previous = qs[-1]
                for n in range(n_eff + 1, _J0_SEARCH_FACTOR * n_eff):
                    current = seq.q(n)
                    if previous < 4 <= current:
                        j0 = n - 1
                        break
                    previous = current
                else:
                    hypotheses.append(
                        Hypothesis("j0_located", False, f"no crossing of 4 before n={_J0_SEARCH_FACTOR * n_eff}")
                    )
                    return hypotheses, measurements
        measurements["j0"] = j0
        if j0 is None:
            hypotheses.append(Hypothesis("j0_side_condition", True, "no j0"))
            return hypotheses, measurements

        q_j0 = seq.q(j0)
        q_branch = bool(q_j0 >= to_mpf(Q_BRANCH_MIN) * (1 - tol))
        if j0 >= 3:
            ratio = seq.q(j0 - 1) / seq.q(j0 + 1)
            ratio_branch = bool(ratio >= to_mpf(RATIO_BRANCH_MIN) * (1 - tol))
        else:
            # q_1 does not exist; only the q_{j0} branch can apply
            ratio, ratio_branch = None, False
        hypotheses.append(
            Hypothesis(
                "j0_side_condition",
                ratio_branch or q_branch,
                {"j0": j0, "ratio": ratio, "ratio_branch": ratio_branch, "q_j0": q_j0, "q_branch": q_branch},
            )
        )
    return hypotheses, measurements


def mthm1_criterion(
    seq: CoefficientSequence,
    n_check: int = DEFAULT_N_CHECK,
    policy: ScanPolicy = ScanPolicy(),
    config: RunConfig = DEFAULT_CONFIG,
) -> Verdict:
    """Under 3 <= q_2 <= q_3 <= ... membership is the existence of a sign witness."""
    hypotheses, measurements = mthm1_hypotheses(seq, n_check, config)
    if not all(h.satisfied for h in hypotheses):
        return _not_met("mthm1", hypotheses, measurements)
    return _scan_verdict("mthm1", seq, hypotheses, measurements, policy, config)


def limit_criterion(
    seq: CoefficientSequence,
    n_check: int = DEFAULT_N_CHECK,
    q_inf=None,
    config: RunConfig = DEFAULT_CONFIG,
) -> Verdict:
    """Monotone quotients compared with q_infinity through their limit.

    Non-increasing with limit >= q_inf: PASS. Non-decreasing with limit
    < q_inf: FAIL. ``q_inf`` is a BisectionResult; computed when omitted.
    """
    limit = seq.quotient_limit()
    hypotheses = [
        Hypothesis("entire_positive_coefficients", seq.family != EXPLICIT, seq.family),
        Hypothesis("limit_known", limit is not None, limit),
    ]
    if not all(h.satisfied for h in hypotheses):
        return _not_met("limit", hypotheses)

    tol = config.tol("hypothesis_rel")
    n_eff = _checked_range(seq, n_check)
    profile = quotients(seq, n_eff, dps=config.dps)
    qs = list(profile.q)
    tail = seq.tail_behaviour()
    if q_inf is None:
        q_inf = q_infinity(1e-8, config)
    lo, hi = q_inf.bracket
    measurements = {"limit": limit, "q_inf_bracket": [lo, hi], "n_checked": n_eff}

    with mp.workdps(config.dps):
        rising, _ = _non_decreasing(qs, tol)
        falling, _ = _non_decreasing(list(reversed(qs)), tol)
    rising = rising and tail in ("constant", "non-decreasing")
    falling = falling and tail == "constant"

    if falling and limit >= hi:
        hypotheses += [Hypothesis("q_non_increasing", True), Hypothesis("limit_ge_q_inf", True, limit)]
        return Verdict("limit", PASS, None, tuple(hypotheses), measurements)
    if rising and limit < lo:
        hypotheses += [Hypothesis("q_non_decreasing", True), Hypothesis("limit_lt_q_inf", True, limit)]
        return Verdict("limit", FAIL, {"limit": limit}, tuple(hypotheses), measurements)
    hypotheses.append(
        Hypothesis(
            "monotone_limit_separated_from_q_inf",
            False,
            {"non_increasing": falling, "non_decreasing": rising, "limit": limit},
        )
    )
    return _not_met("limit", hypotheses, measurements)


def run_criterion(name: str, seq: CoefficientSequence, n_max: int = DEFAULT_N_CHECK, scan_nodes: int | None = None, config: RunConfig = DEFAULT_CONFIG) -> Verdict:
    """Dispatch by the command-line criterion name."""
    policy = ScanPolicy(nodes=scan_nodes) if scan_nodes is not None else ScanPolicy()
    if name == "hutchinson":
        return hutchinson_test(seq, n_max, config)
    if name == "lemma12":
        return necessary_q2q3_test(seq, config)
    if name == "theoremD":
        return necessary_sign_test(seq, policy, config)
    if name == "mthm1":
        return mthm1_criterion(seq, n_max, policy, config)
    if name == "limit":
        return limit_criterion(seq, n_max, config=config)
    raise DomainError(f"unknown criterion {name!r}; choose from {', '.join(CRITERIA)}")
