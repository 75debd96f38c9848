"""
Partial theta constants and the explicit inequalities behind the zero counts.

q_infinity and c_n are found by bisection on a^2 with a sign predicate:
the partial theta function (or its degree-n section) attains a
non-positive value somewhere on (-a^3, -a). The function itself is
scanned with certified evaluation; sections are decided exactly.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy
from mpmath import mp

from lp_certify.config import DEFAULT_CONFIG, RunConfig
from lp_certify.errors import BracketError, DomainError, UnresolvedError
from lp_certify.parallel import parallel_map
from lp_certify.scan import SPACING_GEOMETRIC, ScanPolicy, certified_minimum
from lp_certify.series import (
    evaluate,
    exact,
    meets,
    partial_theta,
    quotients,
    to_mpf,
    two_cbrt_two,
)

logger = logging.getLogger(__name__)

THETA_POLICY = ScanPolicy(nodes=1024, spacing=SPACING_GEOMETRIC, open_interval=True)

Q_INFINITY_BRACKET = (Fraction(3), Fraction(4))
C_N_BRACKET = (Fraction(5, 2), Fraction(9, 2))

RATIO_BRANCH_MIN = Fraction("0.525")
Q_BRANCH_MIN = Fraction("3.4303")


# --------------------------------------------------------------------------- records


@dataclass(frozen=True)
class BisectionResult:
    """Boundary value of a monotone predicate; predicate(lo) != predicate(hi)."""

    name: str
    value: object
    bracket: tuple
    tolerance: Fraction
    evaluations: int
    boundary_hit: bool = False
    dps: int = DEFAULT_CONFIG.dps

    @property
    def width(self) -> Fraction:
        return self.bracket[1] - self.bracket[0]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "±": self.tolerance,
            "bracket": list(self.bracket),
            "tolerance": self.tolerance,
            "evaluations": self.evaluations,
            "boundary_hit": self.boundary_hit,
            "dps": self.dps,
        }


@dataclass(frozen=True)
class InequalityReport:
    """lhs >= rhs, with margin = lhs - rhs."""

    name: str
    point: dict
    lhs: object
    rhs: object
    margin: object
    holds: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "point": dict(self.point),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "holds": self.holds,
            "details": dict(self.details),
        }


def inequality(
    name: str, point: dict, lhs, rhs, rel: float = DEFAULT_CONFIG.tol("inequality_rel"), **details
) -> InequalityReport:
    margin = lhs - rhs
    floor = rel * max(abs(lhs), abs(rhs), 1)
    return InequalityReport(
        name=name,
        point=point,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        holds=bool(margin >= -floor),
        details=details,
    )


def _mp(value, name="q"):
    if isinstance(value, mpmath.mpf):
        return value
    return to_mpf(exact(value, name))


# ------------------------------------------------------------------------ bisection


def theta_sign_scan(a2, config: RunConfig = DEFAULT_CONFIG, policy=THETA_POLICY):
    """Smallest certified value of g_a on (-a^3, -a)."""
    a2 = exact(a2, "a2")
    seq = partial_theta(a2=a2)
    rel_tol = config.tol("evaluate_rel")

    def make_fn(dps):
        return lambda x: evaluate(seq, x, rel_tol, dps=dps, max_escalations=0)

    def interval(dps):
        a = mpmath.sqrt(to_mpf(a2))
        return -(a**3), -a

    return certified_minimum(
        make_fn, interval, policy, config.dps, config.max_escalations, stop_on_witness=True
    )


def theta_section_poly(a2, n: int) -> sympy.Poly:
    """Degree-n section of g_a in x = z / a: sum of a2^(-k(k-1)/2) x^k, exact rationals."""
    a2 = exact(a2, "a2")
    x = sympy.Symbol("x")
    base = sympy.Rational(a2.numerator, a2.denominator)
    coeffs = [base ** (-(k * (k - 1) // 2)) for k in range(n + 1)]
    return sympy.Poly(list(reversed(coeffs)), x)


def theta_section_witness(a2, n: int) -> bool:
    """Exact form of the sign predicate for the degree-n section.

    z in (-a^3, -a) is x in (-a^2, -1). A non-positive value there means a
    real root strictly inside, or a negative sign throughout.
    """
    a2 = exact(a2, "a2")
    if a2 <= 1:
        raise DomainError(f"the section interval needs a^2 > 1, got {float(a2)}")
    poly = theta_section_poly(a2, n)
    lo = -sympy.Rational(a2.numerator, a2.denominator)
    hi = sympy.Integer(-1)
    inside = poly.sqf_part().count_roots(lo, hi)
    inside -= sum(1 for end in (lo, hi) if poly.eval(end) == 0)
    if inside > 0:
        return True
    return bool(poly.eval((lo + hi) / 2) < 0)


def theta_has_sign_witness(a2, n: int | None = None, config: RunConfig = DEFAULT_CONFIG) -> bool:
    if n is not None:
        return theta_section_witness(a2, n)
    return theta_sign_scan(a2, config).witness_found


def bisect_boundary(predicate, lo: Fraction, hi: Fraction, tol: Fraction, name: str, dps: int) -> BisectionResult:
    """Shrink [lo, hi] around the point where predicate changes value.

    The returned bracket ends are always points where predicate was
    decided. An unresolved midpoint stops the search there; its
    neighbours at distance tol/4 are tried to tighten the bracket.
    """
    evaluations = 0

    def check(x):
        nonlocal evaluations
        evaluations += 1
        return predicate(x)

    at_lo, at_hi = check(lo), check(hi)
    if at_lo == at_hi:
        raise BracketError(
            f"{name}: predicate is {at_lo} at both ends of [{float(lo)}, {float(hi)}]"
        )
    boundary_hit = False
    centre = None
    while hi - lo > tol:
        mid = (lo + hi) / 2
        try:
            at_mid = check(mid)
        except UnresolvedError:
            logger.info(f"{name}: sign unresolved at a^2={float(mid)}, taking it as the boundary")
            boundary_hit = True
            centre = mid
            for near in (mid - tol / 4, mid + tol / 4):
                if not lo < near < hi:
                    continue
                try:
                    at_near = check(near)
                except UnresolvedError:
                    continue
                if at_near == at_lo:
                    lo = near
                else:
                    hi = near
            break
        logger.debug(f"{name}: a^2={float(mid):.12f} -> {at_mid}")
        if at_mid == at_hi:
            hi = mid
        else:
            lo = mid
    with mp.workdps(dps):
        value = to_mpf(centre if centre is not None else (lo + hi) / 2)
    return BisectionResult(
        name=name,
        value=value,
        bracket=(lo, hi),
        tolerance=tol,
        evaluations=evaluations,
        boundary_hit=boundary_hit,
        dps=dps,
    )


@lru_cache(maxsize=16)
def _q_infinity(tol: Fraction, dps: int, max_escalations: int) -> BisectionResult:
    config = RunConfig(dps=dps, max_escalations=max_escalations)
    lo, hi = Q_INFINITY_BRACKET
    return bisect_boundary(
        lambda a2: theta_has_sign_witness(a2, None, config), lo, hi, tol, "q_infinity", dps
    )


def q_infinity(tol=1e-6, config: RunConfig = DEFAULT_CONFIG) -> BisectionResult:
    """The smallest a^2 for which the partial theta function is in the class."""
    tol = exact(tol, "tol")
    if not 0 < tol <= Fraction(1, 1000):
        raise DomainError(f"tol must lie in (0, 1e-3], got {float(tol)}")
    logger.info(f"Bisecting for q_infinity to tolerance {float(tol)}")
    return _q_infinity(tol, config.dps, config.max_escalations)


@lru_cache(maxsize=256)
def _c_n(n: int, tol: Fraction, dps: int, max_escalations: int) -> BisectionResult:
    config = RunConfig(dps=dps, max_escalations=max_escalations)
    lo, hi = C_N_BRACKET
    return bisect_boundary(
        lambda a2: theta_has_sign_witness(a2, n, config), lo, hi, tol, f"c_{n}", dps
    )


def c_n(n: int, tol=1e-8, config: RunConfig = DEFAULT_CONFIG) -> BisectionResult:
    """The smallest a^2 for which the degree-n section of g_a is real-rooted."""
    if n < 2:
        raise DomainError(f"c_n needs n >= 2, got {n}")
    tol = exact(tol, "tol")
    if tol <= 0:
        raise DomainError("tol must be positive")
    return _c_n(n, tol, config.dps, config.max_escalations)


def _c_n_task(args):
    n, tol, dps, max_escalations = args
    return _c_n(n, tol, dps, max_escalations)


@dataclass(frozen=True)
class CNTable:
    rows: list
    q_infinity: BisectionResult

    def to_dict(self) -> dict:
        return {
            "q_infinity": self.q_infinity.to_dict(),
            "rows": [dict(row) for row in self.rows],
        }


def c_n_table(
    n_values, tol=1e-8, config: RunConfig = DEFAULT_CONFIG, q_inf_tol=1e-8
) -> CNTable:
    """c_n for each n plus its distance to q_infinity."""
    tol = exact(tol, "tol")
    n_values = sorted(set(n_values))
    if not n_values or n_values[0] < 2:
        raise DomainError("c_n table needs indices n >= 2")
    tasks = [(n, tol, config.dps, config.max_escalations) for n in n_values]
    results = parallel_map(_c_n_task, tasks, config.workers)
    q_inf = q_infinity(q_inf_tol, config)
    with mp.workdps(config.dps):
        rows = [
            {"n": n, "c_n": res.value, "gap_to_qinf": res.value - q_inf.value}
            for n, res in zip(n_values, results)
        ]
    return CNTable(rows=rows, q_infinity=q_inf)


def verify_c_interleaving(n_max: int = 9, tol=1e-8, config: RunConfig = DEFAULT_CONFIG) -> list:
    """c_2 > c_4 > ... > q_inf > ... > c_5 > c_3 and shrinking gaps."""
    if n_max < 5:
        raise DomainError(f"interleaving needs n_max >= 5, got {n_max}")
    table = c_n_table(range(2, n_max + 1), tol, config)
    q_inf = table.q_infinity.value
    values = {row["n"]: row["c_n"] for row in table.rows}
    reports = []
    with mp.workdps(config.dps):
        for parity in (0, 1):
            indices = [n for n in sorted(values) if n % 2 == parity]
            for n, m in zip(indices, indices[1:]):
                if parity == 0:
                    reports.append(inequality(f"c_{n} > c_{m}", {"n": n, "m": m}, values[n], values[m]))
                else:
                    reports.append(inequality(f"c_{m} > c_{n}", {"n": n, "m": m}, values[m], values[n]))
                reports.append(
                    inequality(
                        f"|c_{n} - q_inf| > |c_{m} - q_inf|",
                        {"n": n, "m": m},
                        abs(values[n] - q_inf),
                        abs(values[m] - q_inf),
                    )
                )
            last = indices[-1]
            if parity == 0:
                reports.append(inequality(f"c_{last} > q_inf", {"n": last}, values[last], q_inf))
            else:
                reports.append(inequality(f"q_inf > c_{last}", {"n": last}, q_inf, values[last]))
    return reports


# ------------------------------------------------------------- named polynomials

# ascending coefficients
NAMED_POLYNOMIALS = {
    "deg11": {
        "coeffs": [-2, 0, -2, 2, -1, 0, 0, 2, 0, 0, -2, 1],
        "variable": "b",
        "bound": Fraction("1.47"),
        "threshold_name": "a",
        "threshold_bound": Fraction("2.17"),
    },
    "quintic_A": {
        "coeffs": [Fraction(-2, 9), Fraction("1.525"), 0, 0, -2, 1],
        "variable": "t",
        "bound": Fraction("1.73051"),
        "threshold_name": "q",
        "threshold_bound": Fraction("2.99466"),
    },
    "quintic_B": {
        "coeffs": [Fraction(-1, 9), 1, 0, 0, -2, 1],
        "variable": "t",
        "bound": Fraction("1.8521"),
        "threshold_name": "q",
        "threshold_bound": Fraction("3.4303"),
    },
    "quartic_g": {
        "coeffs": [2, 0, 0, -2, 1],
        "variable": "y",
        "bound": None,
        "threshold_name": None,
        "threshold_bound": None,
    },
}


def _polyval(coeffs, x):
    # coefficients are stored ascending, mpmath.polyval wants them descending
    return mpmath.polyval(coeffs[::-1], x)


def _derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _bisect_root(coeffs, lo, hi):
    flo = _polyval(coeffs, lo)
    eps = mpmath.mpf(10) ** (-mp.dps + 5)
    for _ in range(4 * mp.prec):
        if hi - lo <= eps * max(1, abs(lo)):
            break
        mid = (lo + hi) / 2
        fmid = _polyval(coeffs, mid)
        if fmid == 0:
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return (lo + hi) / 2


def real_roots(coeffs, bound) -> list:
    """Real roots with a sign change, isolated between roots of the derivative."""
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if len(coeffs) < 2:
        return []
    if len(coeffs) == 2:
        return [-coeffs[0] / coeffs[1]]
    critical = real_roots(_derivative(coeffs), bound)
    points = [-bound] + [c for c in critical if -bound < c < bound] + [bound]
    roots = []
    for lo, hi in zip(points, points[1:]):
        flo, fhi = _polyval(coeffs, lo), _polyval(coeffs, hi)
        if flo == 0:
            if not roots or roots[-1] != lo:
                roots.append(lo)
        elif flo * fhi < 0:
            roots.append(_bisect_root(coeffs, lo, hi))
    return roots


def _sign_changes(values) -> int:
    nonzero = [v for v in values if v != 0]
    return sum(1 for u, v in zip(nonzero, nonzero[1:]) if (u > 0) != (v > 0))


def sturm_count(coeffs, lo, hi) -> int:
    """Distinct real roots in (lo, hi] by Sturm's theorem, in exact arithmetic."""
    x = sympy.Symbol("x")
    rational = [sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in coeffs]
    poly = sympy.Poly(list(reversed(rational)), x)
    chain = sympy.sturm(poly)
    lo_r = sympy.Rational(str(lo)) if not isinstance(lo, Fraction) else sympy.Rational(lo.numerator, lo.denominator)
    hi_r = sympy.Rational(str(hi)) if not isinstance(hi, Fraction) else sympy.Rational(hi.numerator, hi.denominator)
    at_lo = _sign_changes([p.eval(lo_r) for p in chain])
    at_hi = _sign_changes([p.eval(hi_r) for p in chain])
    return at_lo - at_hi


@dataclass(frozen=True)
class RootReport:
    poly_id: str
    expression: str
    largest_root: object
    real_roots: list
    residual: object
    sturm_real_roots: int
    sturm_roots_above: int
    published_bound: object
    below_bound: bool | None
    threshold: object = None
    threshold_bound: object = None
    minimum: dict | None = None

    def to_dict(self) -> dict:
        return {
            "poly_id": self.poly_id,
            "expression": self.expression,
            "largest_root": self.largest_root,
            "real_roots": list(self.real_roots),
            "residual": self.residual,
            "sturm_real_roots": self.sturm_real_roots,
            "sturm_roots_above": self.sturm_roots_above,
            "bound": self.published_bound,
            "below_bound": self.below_bound,
            "threshold": self.threshold,
            "threshold_bound": self.threshold_bound,
            "minimum": dict(self.minimum) if self.minimum else None,
        }


def _expression(coeffs, var):
    x = sympy.Symbol(var)
    return str(sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * x**i for i, c in enumerate(coeffs)))


def largest_real_root(poly_id: str, dps: int = 40) -> RootReport:
    """Largest real root of one of the proof polynomials, cross-checked by Sturm."""
    if poly_id not in NAMED_POLYNOMIALS:
        raise DomainError(f"unknown polynomial {poly_id!r}; choose from {sorted(NAMED_POLYNOMIALS)}")
    entry = NAMED_POLYNOMIALS[poly_id]
    exact_coeffs = [Fraction(c) for c in entry["coeffs"]]
    cauchy = 1 + max(abs(c / exact_coeffs[-1]) for c in exact_coeffs[:-1])

    with mp.workdps(dps):
        coeffs = [to_mpf(c) for c in exact_coeffs]
        bound = to_mpf(cauchy)
        roots = real_roots(coeffs, bound)
        sturm_total = sturm_count(exact_coeffs, -cauchy, cauchy)
        if len(roots) != sturm_total:
            logger.warning(
                f"{poly_id}: isolation found {len(roots)} real roots, Sturm counts {sturm_total}"
            )

        minimum = None
        if poly_id == "quartic_g":
            critical = [c for c in real_roots(_derivative(coeffs), bound) if c >= 0]
            candidates = [mpmath.mpf(0)] + critical
            location = min(candidates, key=lambda y: _polyval(coeffs, y))
            minimum = {"value": _polyval(coeffs, location), "location": location, "domain": "y >= 0"}

        if not roots:
            return RootReport(
                poly_id=poly_id,
                expression=_expression(exact_coeffs, entry["variable"]),
                largest_root=None,
                real_roots=[],
                residual=None,
                sturm_real_roots=sturm_total,
                sturm_roots_above=0,
                published_bound=entry["bound"],
                below_bound=None,
                minimum=minimum,
            )

        top = roots[-1]
        above = sturm_count(exact_coeffs, Fraction(mpmath.nstr(top + mpmath.mpf("1e-20"), 30)), cauchy)
        threshold = top**2 if entry["threshold_name"] else None
        return RootReport(
            poly_id=poly_id,
            expression=_expression(exact_coeffs, entry["variable"]),
            largest_root=top,
            real_roots=roots,
            residual=abs(_polyval(coeffs, top)),
            sturm_real_roots=sturm_total,
            sturm_roots_above=above,
            published_bound=entry["bound"],
            below_bound=bool(top < to_mpf(entry["bound"])) if entry["bound"] else None,
            threshold=threshold,
            threshold_bound=entry["threshold_bound"],
            minimum=minimum,
        )


# ------------------------------------------------------------ proof inequalities


def check_estqq(window, dps: int = DEFAULT_CONFIG.dps, j: int | None = None) -> InequalityReport:
    """The comparison inequality that makes the disk count at rho_j equal to j.

    ``window`` is (q_{j-2}, ..., q_{j+4}).
    """
    if len(window) != 7:
        raise DomainError(f"estqq needs 7 quotients q_(j-2)..q_(j+4), got {len(window)}")
    with mp.workdps(dps):
        qm2, qm1, q0, q1, q2, q3, q4 = (_mp(v) for v in window)
        s1 = mpmath.sqrt(q1)
        inner = 1 - 1 / (qm2 * qm1 * q0 * s1)
        outer = 1 - 1 / (s1 * q2 * q3 * q4)
        if inner <= 0 or outer <= 0:
            raise DomainError("estqq geometric-series denominator is not positive")
        lhs = qm1 * q0 * s1 * (2 - 2 * q0 * s1 + q0 * q1)
        rhs = 1 / inner + (qm1 * q0**2) / (q2**2 * q3) / outer + qm1 * q0 * s1 * (1 - q0 / q2)
        floor = two_cbrt_two()
        in_regime = all(meets(v, floor) for v in (qm2, qm1, q0, q1, q2, q3, q4))
        values = [qm2, qm1, q0, q1, q2, q3, q4]
        monotone = all(b >= a for a, b in zip(values, values[1:]))
        point = {"window": values}
        if j is not None:
            point["j"] = j
        return inequality("estqq", point, lhs, rhs, in_regime=in_regime, monotone=monotone)


def check_esta(a, dps: int = DEFAULT_CONFIG.dps) -> InequalityReport:
    """Limiting form of estqq for q_n -> a: 2 - 2a*sqrt(a) + a^2 > 2a / (a^3 sqrt(a) - 1)."""
    with mp.workdps(dps):
        a = _mp(a, "a")
        denominator = a**3 * mpmath.sqrt(a) - 1
        if denominator <= 0:
            raise DomainError("esta needs a^3 sqrt(a) > 1")
        lhs = 2 - 2 * a * mpmath.sqrt(a) + a**2
        rhs = 2 * a / denominator
        return inequality("esta", {"a": a}, lhs, rhs)


def nu_k_branches(window) -> list:
    """Which case analyses of the nu_k bound apply; all of them are listed."""
    _, qk, qk1, qk2, _ = window
    branches = []
    if qk1 >= 4:
        branches.append(1)
    else:
        if qk2 < 4 or qk / qk2 >= to_mpf(RATIO_BRANCH_MIN):
            branches.append(2)
        if qk2 >= 4 and qk1 >= to_mpf(Q_BRANCH_MIN):
            branches.append(3)
    return branches


def check_nu_k(window, dps: int = DEFAULT_CONFIG.dps, k: int | None = None) -> InequalityReport:
    """nu_k >= 0 for the window (q_{k-1}, ..., q_{k+3})."""
    if len(window) != 5:
        raise DomainError(f"nu_k needs 5 quotients q_(k-1)..q_(k+3), got {len(window)}")
    with mp.workdps(dps):
        qm1, q0, q1, q2, q3 = (_mp(v) for v in window)
        s1 = mpmath.sqrt(q1)
        nu = (
            -1
            + qm1 * q0 * s1
            - 2 * qm1 * q0**2 * q1
            + qm1 * q0**2 * q1 * s1
            + qm1 * q0**2 * s1 / q2
            - qm1 * q0**2 / (q2**2 * q3)
        )
        values = (qm1, q0, q1, q2, q3)
        point = {"window": list(values)}
        if k is not None:
            point["k"] = k
        return inequality(
            "nu_k",
            point,
            nu,
            mpmath.mpf(0),
            branches=nu_k_branches(values),
            monotone=all(b >= a for a, b in zip(values, values[1:])),
        )


def check_psi_positive(q_j, q_j1, dps: int = DEFAULT_CONFIG.dps) -> InequalityReport:
    """psi(t) = 4t^2 - 2c t + (q_j q_{j+1} - 2), c = q_j sqrt(q_{j+1}), is positive on [-1, 1].

    Holds when the vertex t_j = c / 4 lies at or right of 1 and psi(1) > 0.
    """
    with mp.workdps(dps):
        qa, qb = _mp(q_j, "q_j"), _mp(q_j1, "q_j1")
        c = qa * mpmath.sqrt(qb)
        vertex = c / 4
        at_one = 2 - 2 * c + qa * qb
        vertex_ok = bool(vertex >= 1 - mpmath.mpf(10) ** (-dps + 6))
        report = inequality(
            "psi_positive",
            {"q_j": qa, "q_j1": qb},
            at_one,
            mpmath.mpf(0),
            vertex=vertex,
            vertex_at_or_right_of_one=vertex_ok,
        )
        if not vertex_ok:
            # the minimum over [-1, 1] sits at the vertex instead
            vertex_min = 4 * vertex**2 - 2 * c * vertex + (qa * qb - 2)
            return inequality(
                "psi_positive",
                report.point,
                vertex_min,
                mpmath.mpf(0),
                vertex=vertex,
                vertex_at_or_right_of_one=False,
            )
        return report


def mu_k(seq, k: int, dps: int = DEFAULT_CONFIG.dps):
    """Seven-term lower bound for (-1)^k phi(rho_k) in normalized coordinates."""
    if k < 2:
        raise DomainError(f"mu_k needs k >= 2, got {k}")
    normalized = seq.normalized()
    with mp.workdps(dps):
        log_rho = mpmath.fsum(mpmath.log(seq.q(n)) for n in range(2, k + 1)) + mpmath.log(seq.q(k + 1)) / 2
        logs = [(j, normalized.log_coeff(j) + j * log_rho) for j in range(max(k - 3, 0), k + 4)]
        top = max(lt for _, lt in logs)
        total = mpmath.fsum((-1) ** (j + k) * mpmath.exp(lt - top) for j, lt in logs)
        return total * mpmath.exp(top)


@dataclass(frozen=True)
class EstqqScan:
    reports: list
    j0: int | None

    def to_dict(self) -> dict:
        return {"j0": self.j0, "reports": [r.to_dict() for r in self.reports]}


def estqq_threshold(seq, j_range, dps: int = DEFAULT_CONFIG.dps) -> EstqqScan:
    """Check estqq for every j in the range; j0 is where it starts holding for good."""
    lo, hi = j_range
    lo = max(lo, 4)
    if hi < lo:
        raise DomainError(f"estqq needs j >= 4, got range {j_range}")
    profile = quotients(seq, hi + 4, dps=dps)
    reports = [
        check_estqq(profile.window(j - 2, j + 4), dps=dps, j=j) for j in range(lo, hi + 1)
    ]
    j0 = None
    for report in reversed(reports):
        if not report.holds:
            break
        j0 = report.point["j"]
    return EstqqScan(reports=reports, j0=j0)
