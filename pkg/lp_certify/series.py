"""
Positive-coefficient entire series and their quotient sequences.

Every family stores its coefficients as natural logarithms at the working
precision of the caller, so partial theta coefficients ``a^{-k^2}`` stay
representable at any index. Quotients are exact rationals whenever the
family allows it.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mp

from lp_certify.config import DEFAULT_CONFIG
from lp_certify.errors import ConvergenceError, DomainError, FamilyRangeError
from lp_certify.truncation import Evaluation, TruncationPolynomial

logger = logging.getLogger(__name__)

PARTIAL_THETA = "partial-theta"
Q_KUMMER = "q-kummer"
QUOTIENTS = "quotient-specified"
EXPLICIT = "explicit-list"

# JSON descriptor name -> family tag
_DESCRIPTOR_FAMILIES = {
    "partial-theta": PARTIAL_THETA,
    "q-kummer": Q_KUMMER,
    "quotients": QUOTIENTS,
    "quotient-specified": QUOTIENTS,
    "explicit": EXPLICIT,
    "explicit-list": EXPLICIT,
}

TAIL_REPEAT_LAST = "repeat-last"
TAIL_RULE = "rule"


# How far ahead a closed-form rule is checked for q_n >= 1 before trusting it
_RULE_LOOKAHEAD = 64


def exact(value, name: str = "value") -> Fraction:
    """Convert a parameter into an exact rational (decimal literals stay exact)."""
    if isinstance(value, bool):
        raise DomainError(f"field '{name}' must be a number, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            raise DomainError(f"field '{name}' is not a number: {value!r}") from None
    if isinstance(value, mpmath.mpf):
        return Fraction(mpmath.nstr(value, mp.dps + 5, strip_zeros=False))
    raise DomainError(f"field '{name}' must be a number, got {type(value).__name__}")


def to_mpf(value):
    """Exact rational -> mpf at the current working precision."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def _positive(value, name: str) -> Fraction:
    v = exact(value, name)
    if v <= 0:
        raise DomainError(f"field '{name}' must be positive, got {v}")
    return v


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """A positive coefficient sequence a_k, kept in the log domain.

    The represented function is ``scale * f(dilation * z)`` where ``f`` is
    the family member described by ``params``; when ``normalized_form`` is
    set, ``f`` is first replaced by ``a_0^{-1} f(a_0 a_1^{-1} z)``.
    """

    family: str
    params: dict
    scale: Fraction = Fraction(1)
    dilation: Fraction = Fraction(1)
    normalized_form: bool = False
    quotient_rule: Callable[[int], object] | None = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    # ------------------------------------------------------------------ family rules

    @property
    def max_index(self) -> int | None:
        """Largest available coefficient index (None for entire functions)."""
        if self.family == EXPLICIT:
            return len(self.params["coeffs"]) - 1
        return None

    def _check_index(self, k: int):
        if k < 0:
            raise FamilyRangeError(f"negative coefficient index {k}")
        top = self.max_index
        if top is not None and k > top:
            raise FamilyRangeError(
                f"explicit list has coefficients up to k={top}, requested k={k}"
            )

    def exact_q(self, n: int) -> Fraction | None:
        """q_n as an exact rational, or None when only a float rule is known."""
        if n < 2:
            raise FamilyRangeError(f"q_n is defined for n >= 2, requested n={n}")
        self._check_index(n)
        if self.family == PARTIAL_THETA:
            return self.params["a2"]
        if self.family == Q_KUMMER:
            a = self.params["a"]
            return (a**n + 1) / (a ** (n - 1) + 1)
        if self.family == QUOTIENTS:
            if self.params["tail"] == TAIL_RULE:
                return None
            qs = self.params["q"]
            return qs[n - 2] if n - 2 < len(qs) else qs[-1]
        coeffs = self.params["coeffs"]
        return coeffs[n - 1] ** 2 / (coeffs[n - 2] * coeffs[n])

    def _rule_q(self, n: int):
        raw = self.quotient_rule(n)
        value = to_mpf(exact(raw, f"q_{n}")) if not isinstance(raw, mpmath.mpf) else raw
        if value <= 0:
            raise DomainError(f"quotient rule returned non-positive q_{n} = {raw}")
        return value

    def q(self, n: int):
        """q_n at the current working precision (rescaling leaves it unchanged)."""
        ex = self.exact_q(n)
        if ex is not None:
            return to_mpf(ex)
        return self._rule_q(n)

    def _base_log_p(self, n: int):
        """log p_n = log(a_{n-1}/a_n) of the unscaled family member."""
        cache = self._cache.setdefault(("log_p", mp.prec), {})
        if n in cache:
            return cache[n]
        if self.family == PARTIAL_THETA:
            value = (2 * n - 1) * mpmath.log(to_mpf(self.params["a2"])) / 2
        elif self.family == Q_KUMMER:
            a = to_mpf(self.params["a"])
            value = mpmath.log(a**n + 1)
        elif self.family == QUOTIENTS:
            if n == 1:
                value = mpmath.log(to_mpf(self.params["a0"])) - mpmath.log(
                    to_mpf(self.params["a1"])
                )
            else:
                # iterative to keep recursion depth flat for large n
                start = max((m for m in cache if m < n), default=None)
                if start is None:
                    start = 1
                    cache[1] = self._base_log_p(1)
                value = cache[start]
                for m in range(start + 1, n + 1):
                    value = value + mpmath.log(self.q(m))
                    cache[m] = value
        else:
            coeffs = self.params["coeffs"]
            value = mpmath.log(to_mpf(coeffs[n - 1])) - mpmath.log(to_mpf(coeffs[n]))
        cache[n] = value
        return value

    def _base_log_coeff(self, k: int):
        cache = self._cache.setdefault(("log_a", mp.prec), {})
        if k in cache:
            return cache[k]
        if self.family == PARTIAL_THETA:
            value = -mpmath.mpf(k * k) * mpmath.log(to_mpf(self.params["a2"])) / 2
        elif self.family == EXPLICIT:
            value = mpmath.log(to_mpf(self.params["coeffs"][k]))
        else:
            if self.family == Q_KUMMER:
                value0 = mpmath.mpf(0)
            else:
                value0 = mpmath.log(to_mpf(self.params["a0"]))
            start = max((m for m in cache if m < k), default=None)
            if start is None:
                start, value = 0, value0
                cache[0] = value0
            else:
                value = cache[start]
            for m in range(start + 1, k + 1):
                value = value - self._base_log_p(m)
                cache[m] = value
        cache[k] = value
        return value

    def _log_adjustments(self):
        """(log of the overall factor, log of the dilation) at working precision."""
        key = ("adjust", mp.prec)
        if key in self._cache:
            return self._cache[key]
        log_c = mpmath.log(to_mpf(self.scale))
        log_d = mpmath.log(to_mpf(self.dilation))
        if self.normalized_form:
            log_a0 = self._base_log_coeff(0)
            log_a1 = self._base_log_coeff(1)
            log_c -= log_a0
            log_d += log_a0 - log_a1
        self._cache[key] = (log_c, log_d)
        return log_c, log_d

    def log_coeff(self, k: int):
        """Natural log of a_k at the current working precision."""
        self._check_index(k)
        log_c, log_d = self._log_adjustments()
        return self._base_log_coeff(k) + log_c + k * log_d

    def log_p(self, n: int):
        """log p_n = log(a_{n-1} / a_n)."""
        if n < 1:
            raise FamilyRangeError(f"p_n is defined for n >= 1, requested n={n}")
        self._check_index(n)
        _, log_d = self._log_adjustments()
        return self._base_log_p(n) - log_d

    def coeff(self, k: int):
        return mpmath.exp(self.log_coeff(k))

    # ---------------------------------------------------------- structural facts

    def tail_behaviour(self) -> str | None:
        """What is known about q_n beyond any finite check.

        "constant", "non-decreasing", "finite" (a polynomial) or None.
        """
        if self.family == PARTIAL_THETA:
            return "constant"
        if self.family == Q_KUMMER:
            return "non-decreasing"
        if self.family == EXPLICIT:
            return "finite"
        if self.params["tail"] == TAIL_REPEAT_LAST:
            return "constant"
        return "non-decreasing" if self.params.get("monotone") else None

    def tail_start(self) -> int:
        """First index n from which tail_behaviour() holds for q_n."""
        if self.family == QUOTIENTS and self.params["tail"] == TAIL_REPEAT_LAST:
            return len(self.params["q"]) + 1
        return 2

    def quotient_limit(self):
        """lim q_n when the family determines it exactly, else None."""
        if self.family == PARTIAL_THETA:
            return self.params["a2"]
        if self.family == Q_KUMMER:
            return self.params["a"]
        if self.family == QUOTIENTS:
            if self.params["tail"] == TAIL_REPEAT_LAST:
                return self.params["q"][-1]
            return self.params.get("limit")
        return None

    def _quotients_at_least_one_from(self, n: int) -> bool:
        """True when q_m >= 1 for every m >= n, so p_m never decreases after n."""
        if self.family in (PARTIAL_THETA, Q_KUMMER):
            return True
        if self.family == QUOTIENTS and self.params["tail"] == TAIL_REPEAT_LAST:
            qs = self.params["q"]
            return all(v >= 1 for v in qs[max(n - 2, 0):]) and qs[-1] >= 1
        if self.family == QUOTIENTS:
            return all(self._rule_q(m) >= 1 for m in range(max(n, 2), n + _RULE_LOOKAHEAD))
        return True

    # ------------------------------------------------------------ transformations

    def rescaled(self, c, d) -> "CoefficientSequence":
        """The sequence of c * f(d * z); all q_n are unchanged."""
        c = _positive(c, "c")
        d = _positive(d, "d")
        return CoefficientSequence(
            family=self.family,
            params=self.params,
            scale=self.scale * c,
            dilation=self.dilation * d,
            normalized_form=self.normalized_form,
            quotient_rule=self.quotient_rule,
        )

    def normalized(self) -> "CoefficientSequence":
        """a_0^{-1} f(a_0 a_1^{-1} z): same quotients, a_0 = a_1 = 1."""
        return CoefficientSequence(
            family=self.family,
            params=self.params,
            normalized_form=True,
            quotient_rule=self.quotient_rule,
        )

    # --------------------------------------------------------------- serialization

    def to_dict(self) -> dict:
        """JSON family descriptor (plus scale/dilation when not trivial)."""
        if self.family == PARTIAL_THETA:
            data = {"family": "partial-theta", "a2": self.params["a2"]}
        elif self.family == Q_KUMMER:
            data = {"family": "q-kummer", "a": self.params["a"]}
        elif self.family == EXPLICIT:
            data = {"family": "explicit", "coeffs": list(self.params["coeffs"])}
        else:
            data = {
                "family": "quotients",
                "a0": self.params["a0"],
                "a1": self.params["a1"],
                "tail": self.params["tail"],
            }
            if self.params["tail"] == TAIL_RULE:
                data["rule"] = getattr(self.quotient_rule, "__name__", "rule")
                data["monotone"] = bool(self.params.get("monotone"))
            else:
                data["q"] = list(self.params["q"])
        if self.scale != 1 or self.dilation != 1:
            data["scale"] = self.scale
            data["dilation"] = self.dilation
        if self.normalized_form:
            data["normalized"] = True
        return data

    def __repr__(self):
        return f"CoefficientSequence({self.to_dict()})"


# --------------------------------------------------------------------- constructors


def partial_theta(a2=None, a=None) -> CoefficientSequence:
    """g_a(z) = sum z^k a^{-k^2}; give either a^2 (``a2``) or ``a``."""
    if (a2 is None) == (a is None):
        raise DomainError("partial-theta needs exactly one of 'a2' or 'a'")
    if a is not None:
        a_exact = _positive(a, "a")
        if a_exact <= 1:
            raise DomainError(f"partial-theta needs a > 1, got {a_exact}")
        a2_exact = a_exact * a_exact
    else:
        a2_exact = _positive(a2, "a2")
        if a2_exact <= 1:
            raise DomainError(f"partial-theta needs a^2 > 1, got {a2_exact}")
    return CoefficientSequence(family=PARTIAL_THETA, params={"a2": a2_exact})


def q_kummer(a) -> CoefficientSequence:
    """sum z^k / ((a^k + 1)(a^{k-1} + 1)...(a + 1)), a > 1."""
    a_exact = _positive(a, "a")
    if a_exact <= 1:
        raise DomainError(f"q-kummer needs a > 1, got {a_exact}")
    return CoefficientSequence(family=Q_KUMMER, params={"a": a_exact})


def quotient_family(q, a0=1, a1=1, tail: str = TAIL_REPEAT_LAST) -> CoefficientSequence:
    """Coefficients rebuilt from a_0, a_1 and the list q_2, q_3, ...

    The list extends by repeating its last value.
    """
    if tail != TAIL_REPEAT_LAST:
        raise DomainError(f"field 'tail' must be '{TAIL_REPEAT_LAST}', got {tail!r}")
    if isinstance(q, (int, float, str, Fraction)):
        q = [q]
    if not q:
        raise DomainError("field 'q' must list at least one quotient")
    qs = tuple(_positive(v, f"q[{i}]") for i, v in enumerate(q))
    if qs[-1] <= 1:
        raise DomainError(
            f"field 'q': the repeated last quotient must exceed 1 for an entire "
            f"function, got {qs[-1]}"
        )
    return CoefficientSequence(
        family=QUOTIENTS,
        params={
            "a0": _positive(a0, "a0"),
            "a1": _positive(a1, "a1"),
            "q": qs,
            "tail": TAIL_REPEAT_LAST,
        },
    )


def quotient_rule_family(
    rule: Callable[[int], object], a0=1, a1=1, monotone: bool = False, limit=None
) -> CoefficientSequence:
    """Coefficients from a closed-form rule n -> q_n (n >= 2).

    ``monotone`` declares that the rule is proven non-decreasing, which
    lets the criteria extrapolate beyond their finite check.
    """
    if not callable(rule):
        raise DomainError("quotient rule must be callable")
    params = {
        "a0": _positive(a0, "a0"),
        "a1": _positive(a1, "a1"),
        "tail": TAIL_RULE,
        "monotone": bool(monotone),
    }
    if limit is not None:
        params["limit"] = _positive(limit, "limit")
    return CoefficientSequence(family=QUOTIENTS, params=params, quotient_rule=rule)


def explicit(coeffs) -> CoefficientSequence:
    """A polynomial given by its (positive) coefficient list."""
    if len(coeffs) < 2:
        raise DomainError("field 'coeffs' needs at least two coefficients")
    values = tuple(_positive(c, f"coeffs[{i}]") for i, c in enumerate(coeffs))
    return CoefficientSequence(family=EXPLICIT, params={"coeffs": values})


def make_family(spec: dict) -> CoefficientSequence:
    """Build a sequence from a JSON family descriptor.

    {"family":"partial-theta","a2":3.24} | {"family":"q-kummer","a":2.0} |
    {"family":"quotients","a0":1,"a1":1,"q":[3.5],"tail":"repeat-last"} |
    {"family":"explicit","coeffs":[...]}
    """
    if not isinstance(spec, dict):
        raise DomainError("family descriptor must be a JSON object")
    name = spec.get("family")
    family = _DESCRIPTOR_FAMILIES.get(name)
    if family is None:
        raise DomainError(f"field 'family' must be one of {sorted(_DESCRIPTOR_FAMILIES)}")

    if family == PARTIAL_THETA:
        seq = partial_theta(a2=spec.get("a2"), a=spec.get("a"))
    elif family == Q_KUMMER:
        if "a" not in spec:
            raise DomainError("field 'a' is required for q-kummer")
        seq = q_kummer(spec["a"])
    elif family == QUOTIENTS:
        if "q" not in spec:
            raise DomainError("field 'q' is required for quotients")
        seq = quotient_family(
            spec["q"],
            a0=spec.get("a0", 1),
            a1=spec.get("a1", 1),
            tail=spec.get("tail", TAIL_REPEAT_LAST),
        )
    else:
        if "coeffs" not in spec or not isinstance(spec["coeffs"], list):
            raise DomainError("field 'coeffs' must be a list for explicit")
        seq = explicit(spec["coeffs"])

    if spec.get("normalized"):
        seq = seq.normalized()
    if "scale" in spec or "dilation" in spec:
        seq = seq.rescaled(spec.get("scale", 1), spec.get("dilation", 1))
    return seq


# ------------------------------------------------------------------ quotient profile

def two_cbrt_two():
    """2 * 2^(1/3) at the working precision."""
    return 2 * mpmath.cbrt(2)


def meets(value, threshold, rel_tol: float = 1e-12) -> bool:
    """value >= threshold with relative slack (boundary values count)."""
    threshold = to_mpf(threshold)
    return value >= threshold - rel_tol * abs(threshold)


@dataclass(frozen=True)
class QuotientProfile:
    """p_1..p_{n_max} and q_2..q_{n_max} with summary flags."""

    n_max: int
    p: tuple
    q: tuple
    monotone_nondecreasing: bool
    min_q: object
    max_q: object
    argmin_q: int
    thresholds: dict
    dps: int

    def p_at(self, n: int):
        if not 1 <= n <= self.n_max:
            raise FamilyRangeError(f"p_{n} outside computed range 1..{self.n_max}")
        return self.p[n - 1]

    def q_at(self, n: int):
        if not 2 <= n <= self.n_max:
            raise FamilyRangeError(f"q_{n} outside computed range 2..{self.n_max}")
        return self.q[n - 2]

    def window(self, first: int, last: int) -> list:
        return [self.q_at(n) for n in range(first, last + 1)]

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "p": list(self.p),
            "q": list(self.q),
            "monotone_nondecreasing": self.monotone_nondecreasing,
            "min_q": self.min_q,
            "max_q": self.max_q,
            "argmin_q": self.argmin_q,
            "thresholds": dict(self.thresholds),
        }


def quotients(seq: CoefficientSequence, n_max: int, dps: int | None = None) -> QuotientProfile:
    """Compute p_n (n >= 1) and q_n (n >= 2) through n_max."""
    if n_max < 2:
        raise DomainError(f"n_max must be at least 2, got {n_max}")
    dps = dps or DEFAULT_CONFIG.dps
    with mp.workdps(dps):
        p = tuple(mpmath.exp(seq.log_p(n)) for n in range(1, n_max + 1))
        q = tuple(seq.q(n) for n in range(2, n_max + 1))
        rel = mpmath.mpf("1e-14")
        monotone = all(q[i + 1] >= q[i] * (1 - rel) for i in range(len(q) - 1))
        argmin = min(range(len(q)), key=lambda i: (q[i], i))
        bounds = {"ge_3": 3, "ge_2cbrt2": two_cbrt_two(), "ge_4": 4}
        thresholds = {
            name: all(meets(v, bound) for v in q) for name, bound in bounds.items()
        }
        return QuotientProfile(
            n_max=n_max,
            p=p,
            q=q,
            monotone_nondecreasing=monotone,
            min_q=q[argmin],
            max_q=max(q),
            argmin_q=argmin + 2,
            thresholds=thresholds,
            dps=dps,
        )


# ---------------------------------------------------------------------- evaluation


def _scaled_partial_sum(seq: CoefficientSequence, z, degree: int):
    """sum_{k<=degree} a_k z^k with the largest term factored out.

    Returns (value, log of the largest term magnitude, rounding bound).
    """
    absz = abs(z)
    log_abs_z = mpmath.log(absz)
    logs = [seq.log_coeff(k) + k * log_abs_z for k in range(degree + 1)]
    top_index = max(range(degree + 1), key=lambda k: (logs[k], -k))
    top = logs[top_index]
    unit = z / absz
    is_real = isinstance(z, mpmath.mpf)
    power = mpmath.mpf(1)
    residuals = []
    error_weight = mpmath.mpf(0)
    for k, lt in enumerate(logs):
        r = mpmath.exp(lt - top)
        if is_real:
            residuals.append(r if power > 0 else -r)
        else:
            residuals.append(r * power)
        error_weight += r * (4 * k + 8 + 2 * (abs(lt) + abs(top)))
        power *= unit
    partial = mpmath.fsum(residuals)
    eps = mpmath.ldexp(1, -mp.prec + 1)
    scale = mpmath.exp(top)
    return partial * scale, top, error_weight * eps * scale, abs(partial)


def _truncation_degree(seq: CoefficientSequence, log_abs_z, degree_cap: int) -> int:
    """Smallest N with |z| / p_{N+1} <= 1/2 and p non-decreasing afterwards."""
    half = mpmath.log(2)
    for n in range(0, degree_cap + 1):
        if log_abs_z - seq.log_p(n + 1) <= -half and seq._quotients_at_least_one_from(n + 2):
            return n
    raise ConvergenceError(
        f"no truncation point with |z|/p_(N+1) <= 1/2 below degree cap {degree_cap}"
    )


def evaluate(
    seq: CoefficientSequence,
    z,
    rel_tol: float = 1e-25,
    *,
    dps: int | None = None,
    degree_cap: int = 10_000,
    max_escalations: int | None = None,
) -> Evaluation:
    """f(z) with a certified bound on the discarded tail and on rounding."""
    if not 0 < rel_tol < 1:
        raise DomainError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    dps = dps or DEFAULT_CONFIG.dps
    if max_escalations is None:
        max_escalations = DEFAULT_CONFIG.max_escalations

    escalations = 0
    while True:
        with mp.workdps(dps):
            result = _evaluate_at_precision(seq, z, rel_tol, degree_cap)
            cancelled = result[-1]
        if not cancelled or escalations >= max_escalations:
            value, tail, rounding, degree, largest = result[:-1]
            return Evaluation(
                z=_as_mp(z, dps),
                value=value,
                tail_bound=tail,
                rounding_bound=rounding,
                degree=degree,
                largest_term=largest,
                dps=dps,
                escalations=escalations,
            )
        logger.debug(f"Cancellation at z={z}; escalating to {2 * dps} digits")
        dps *= 2
        escalations += 1


def _as_mp(z, dps):
    with mp.workdps(dps):
        return mpmath.mpmathify(z)


def _evaluate_at_precision(seq, z, rel_tol, degree_cap):
    z = mpmath.mpmathify(z)
    if z == 0:
        a0 = seq.coeff(0)
        zero = mpmath.mpf(0)
        return (a0 if isinstance(z, mpmath.mpf) else mpmath.mpc(a0)), zero, zero, 0, a0, False

    top = seq.max_index
    if top is not None:
        value, log_top, rounding, residual = _scaled_partial_sum(seq, z, top)
        zero = mpmath.mpf(0)
        return value, zero, rounding, top, mpmath.exp(log_top), residual < mpmath.mpf("1e-6")

    log_abs_z = mpmath.log(abs(z))
    degree = _truncation_degree(seq, log_abs_z, degree_cap)
    value, log_top, rounding, residual = _scaled_partial_sum(seq, z, degree)
    largest = mpmath.exp(log_top)
    target = rel_tol * max(abs(value), largest)
    log_two = mpmath.log(2)
    while True:
        log_tail = log_two + seq.log_coeff(degree + 1) + (degree + 1) * log_abs_z
        tail = mpmath.exp(log_tail)
        if tail <= target:
            break
        degree += 1
        if degree > degree_cap:
            raise ConvergenceError(
                f"tail bound {mpmath.nstr(tail, 5)} above tolerance at degree cap {degree_cap}"
            )
    value, log_top, rounding, residual = _scaled_partial_sum(seq, z, degree)
    return value, tail, rounding, degree, mpmath.exp(log_top), residual < mpmath.mpf("1e-6")


def truncation_degree(
    seq: CoefficientSequence, radius, rel_tol: float = 1e-25, degree_cap: int = 10_000
) -> int:
    """Smallest degree whose tail bound on |z| = radius is below rel_tol times the largest term."""
    log_r = mpmath.log(mpmath.mpf(radius))
    degree = _truncation_degree(seq, log_r, degree_cap)
    log_top = max(seq.log_coeff(k) + k * log_r for k in range(degree + 1))
    log_limit = mpmath.log(rel_tol) - mpmath.log(2)
    while seq.log_coeff(degree + 1) + (degree + 1) * log_r - log_top > log_limit:
        degree += 1
        log_top = max(log_top, seq.log_coeff(degree) + degree * log_r)
        if degree > degree_cap:
            raise ConvergenceError(f"tail on |z| = {mpmath.nstr(radius, 8)} not small below degree {degree_cap}")
    return degree


def evaluate_phi(seq: CoefficientSequence, x, rel_tol: float = 1e-25, **kwargs) -> Evaluation:
    """phi(x) = f(-x), the reflected function whose zeros are positive."""
    with mp.workdps(kwargs.get("dps") or DEFAULT_CONFIG.dps):
        z = -mpmath.mpmathify(x)
    return evaluate(seq, z, rel_tol, **kwargs)


# ----------------------------------------------------------------------- sections


def truncate(seq: CoefficientSequence, n: int, dps: int | None = None) -> TruncationPolynomial:
    """The degree-n Taylor section sum_{k<=n} a_k z^k."""
    if n < 1:
        raise DomainError(f"truncation degree must be at least 1, got {n}")
    return section(seq, 0, n, dps=dps)


def section(seq: CoefficientSequence, m: int, n: int, dps: int | None = None) -> TruncationPolynomial:
    """sum_{k=m}^{n} a_k z^k with the factor z^m recorded as a zero of order m."""
    if not 0 <= m < n:
        raise DomainError(f"section needs 0 <= m < n, got m={m}, n={n}")
    top = seq.max_index
    if top is not None and n > top:
        raise FamilyRangeError(
            f"explicit list has coefficients up to k={top}; refusing to zero-pad to {n}"
        )
    dps = dps or DEFAULT_CONFIG.dps
    with mp.workdps(dps):
        logs = [seq.log_coeff(k) for k in range(m, n + 1)]
    return TruncationPolynomial.from_logs(logs, start=m, source=seq, dps=dps)
