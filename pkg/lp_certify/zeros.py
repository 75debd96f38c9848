"""
Zeros of sections and of entire functions.

Roots of a section come from Aberth-Ehrlich iteration on its balanced
form. Zeros of the entire function inside |z| < R are counted with the
argument principle on the upper half circle (coefficients are real, so
the lower half mirrors it).
"""

import logging
from dataclasses import dataclass, field, replace

import mpmath
import numpy as np
from mpmath import mp

from lp_certify.config import DEFAULT_CONFIG, RunConfig
from lp_certify.constants import check_psi_positive, estqq_threshold, mu_k
from lp_certify.criteria import mthm1_hypotheses
from lp_certify.errors import (
    ContourError,
    DegreeError,
    DomainError,
    FamilyRangeError,
    HypothesesNotMetError,
    SolverError,
)
from lp_certify.parallel import parallel_map
from lp_certify.series import (
    CoefficientSequence,
    QuotientProfile,
    evaluate,
    exact,
    meets,
    quotients,
    to_mpf,
    truncate,
    truncation_degree,
    two_cbrt_two,
)
from lp_certify.truncation import TruncationPolynomial

logger = logging.getLogger(__name__)

REAL_NEGATIVE = "real-negative"
REAL_POSITIVE = "real-positive"
NONREAL = "nonreal-pair"
UNRESOLVED = "unresolved"
REAL_KINDS = (REAL_NEGATIVE, REAL_POSITIVE)

DEFAULT_MAX_ITER = 1_000
DEFAULT_REAL_TOL = 1e-8
CLASSIFY_ROUNDS = 4
# extra rotation (radians, divided by n) of the starting points
_START_TWIST = "0.3"


# --------------------------------------------------------------------------- radii


def rho(profile: QuotientProfile, j: int):
    """rho_j = q_2 ... q_j sqrt(q_{j+1}) in normalized coordinates."""
    if j < 2:
        raise DomainError(f"rho_j needs j >= 2, got {j}")
    if j + 1 > profile.n_max:
        raise FamilyRangeError(f"rho_{j} needs q_{j + 1}; profile stops at n={profile.n_max}")
    with mp.workdps(profile.dps):
        log_rho = mpmath.fsum(mpmath.log(profile.q_at(n)) for n in range(2, j + 1))
        log_rho += mpmath.log(profile.q_at(j + 1)) / 2
        return mpmath.exp(log_rho)


def disk_radius(seq: CoefficientSequence, j: int, dps: int = DEFAULT_CONFIG.dps):
    """rho_j in the coordinates of seq itself: (a_0 / a_1) * rho_j."""
    profile = quotients(seq, j + 1, dps=dps)
    with mp.workdps(dps):
        return profile.p_at(1) * rho(profile, j)


# ---------------------------------------------------------------------- root finding


@dataclass(frozen=True)
class Root:
    value: object
    residual: object
    radius: object
    kind: str = UNRESOLVED
    multiplicity: int = 1

    @property
    def is_real(self) -> bool:
        return self.kind in REAL_KINDS

    @property
    def simple(self) -> bool:
        return self.multiplicity == 1

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "residual": self.residual,
            "radius": self.radius,
            "kind": self.kind,
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class ZeroReport:
    roots: tuple
    degree: int
    zero_multiplicity: int = 0
    iterations: int = 0
    dps: int = DEFAULT_CONFIG.dps
    classified: bool = False
    tol_rel: float | None = None
    escalations: int = 0
    disk_counts: tuple = ()
    poly: TruncationPolynomial | None = field(default=None, repr=False, compare=False)

    def _count(self, kinds, radius=None) -> int:
        return sum(
            1
            for r in self.roots
            if r.kind in kinds and (radius is None or abs(r.value) < radius)
        )

    @property
    def count_real(self) -> int:
        return self._count(REAL_KINDS)

    @property
    def count_nonreal(self) -> int:
        return self._count((NONREAL,))

    @property
    def count_unresolved(self) -> int:
        return self._count((UNRESOLVED,))

    @property
    def all_real(self) -> bool:
        return self.count_real == self.degree

    @property
    def all_negative(self) -> bool:
        return all(r.kind == REAL_NEGATIVE for r in self.roots)

    @property
    def all_simple(self) -> bool:
        return all(r.simple for r in self.roots)

    def inside(self, radius) -> dict:
        return {
            "real": self._count(REAL_KINDS, radius),
            "nonreal": self._count((NONREAL,), radius),
            "unresolved": self._count((UNRESOLVED,), radius),
        }

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "zero_multiplicity": self.zero_multiplicity,
            "iterations": self.iterations,
            "dps": self.dps,
            "classified": self.classified,
            "tol_rel": self.tol_rel,
            "escalations": self.escalations,
            "count_real": self.count_real,
            "count_nonreal": self.count_nonreal,
            "count_unresolved": self.count_unresolved,
            "all_real": self.all_real,
            "all_simple": self.all_simple,
            "roots": [r.to_dict() for r in self.roots],
            "disk_counts": [dict(d) for d in self.disk_counts],
        }


def _upper_hull(log_b: list) -> list:
    """Vertices of the upper convex hull of the points (k, log|b_k|)."""
    hull = []
    for k, y in enumerate(log_b):
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            if (log_b[j] - log_b[i]) * (k - i) <= (y - log_b[i]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    return hull


def initial_approximations(log_b: list) -> list:
    """Starting points on circles from the Newton polygon, angles spread evenly."""
    n = len(log_b) - 1
    hull = _upper_hull(log_b)
    radii = []
    for i, j in zip(hull, hull[1:]):
        r = mpmath.exp((log_b[i] - log_b[j]) / (j - i))
        radii.extend([r] * (j - i))
    twist = mpmath.mpf(_START_TWIST) / n
    return [
        radii[t] * mpmath.expj(2 * mpmath.pi * (t + mpmath.mpf("0.5")) / n + twist)
        for t in range(n)
    ]


def roots_of_truncation(poly: TruncationPolynomial, max_iter: int = DEFAULT_MAX_ITER) -> ZeroReport:
    """All roots of the reduced section via Gauss-Seidel Aberth-Ehrlich iteration."""
    n = poly.degree
    if n < 1:
        raise DomainError("roots_of_truncation needs degree >= 1")
    with mp.workdps(poly.dps):
        log_rho = poly.log_balancing_radius
        scale = mpmath.exp(log_rho)
        coeffs = poly.balanced_coefficients()
        horner = poly.horner_with_derivative
        eps = mpmath.ldexp(1, -mp.prec + 1)
        backward_tol = 4 * (n + 1) * eps
        step_tol = 4 * eps

        if n == 1:
            w = [mpmath.mpc(-coeffs[0] / coeffs[1])]
            iterations = 0
        else:
            w = initial_approximations(poly.balanced_log_coeffs())
            done = [False] * n
            iterations = 0
            for iterations in range(1, max_iter + 1):
                for i in range(n):
                    if done[i]:
                        continue
                    p, dp, magnitude = horner(w[i], coeffs)
                    if abs(p) <= backward_tol * magnitude:
                        done[i] = True
                        continue
                    if dp == 0:
                        w[i] *= 1 + mpmath.mpf("1e-3") * (i + 1)
                        continue
                    ratio = p / dp
                    repulsion = mpmath.fsum(1 / (w[i] - w[k]) for k in range(n) if k != i)
                    correction = ratio / (1 - ratio * repulsion)
                    w[i] -= correction
                    if abs(correction) <= step_tol * abs(w[i]):
                        done[i] = True
                if all(done):
                    break
            else:
                logger.error(f"Aberth iteration did not converge for degree {n} in {max_iter} steps")
                raise SolverError(
                    f"root iteration did not converge in {max_iter} iterations",
                    partial_roots=[scale * x for x in w],
                    iterations=max_iter,
                )

        roots = []
        for x in w:
            p, dp, magnitude = horner(x, coeffs)
            residual = abs(p) / magnitude
            if dp == 0:
                radius_w = abs(x)
            else:
                radius_w = n * (abs(p) + backward_tol * magnitude) / abs(dp)
            radius_w += 8 * eps * abs(x)
            roots.append(Root(value=scale * x, residual=residual, radius=scale * radius_w))
        roots.sort(key=lambda r: (abs(r.value), r.value.imag))
        logger.debug(f"Degree {n}: converged in {iterations} iterations at {poly.dps} digits")
        return ZeroReport(
            roots=tuple(roots),
            degree=n,
            zero_multiplicity=poly.zero_multiplicity,
            iterations=iterations,
            dps=poly.dps,
            poly=poly,
        )


def _classify(roots: tuple, tol_rel: float, eps) -> tuple:
    values = [r.value for r in roots]
    n = len(roots)
    kinds = []
    for i, r in enumerate(roots):
        z = r.value
        size = abs(z)
        pad = 8 * eps * size
        im = abs(z.imag)
        if im <= tol_rel * size:
            kinds.append(REAL_NEGATIVE if z.real < 0 else REAL_POSITIVE)
        elif im > r.radius + pad:
            target = mpmath.conj(z)
            others = [k for k in range(n) if k != i]
            partner = min(others, key=lambda k: abs(values[k] - target)) if others else None
            if partner is not None and abs(values[partner] - target) <= (
                r.radius + roots[partner].radius + tol_rel * size + pad
            ):
                kinds.append(NONREAL)
            else:
                kinds.append(UNRESOLVED)
        else:
            kinds.append(UNRESOLVED)

    # clusters of overlapping uncertainty disks are multiple roots
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for k in range(i + 1, n):
            gap = abs(values[i] - values[k])
            reach = 2 * (roots[i].radius + roots[k].radius) + 8 * eps * abs(values[i])
            if gap <= reach:
                parent[find(i)] = find(k)
    sizes = {}
    for i in range(n):
        sizes[find(i)] = sizes.get(find(i), 0) + 1
    return tuple(
        replace(r, kind=kind, multiplicity=sizes[find(i)])
        for i, (r, kind) in enumerate(zip(roots, kinds))
    )


def classify_real(
    report: ZeroReport, tol_rel: float = DEFAULT_REAL_TOL, max_rounds: int = CLASSIFY_ROUNDS
) -> ZeroReport:
    """Mark every root real-negative, real-positive, nonreal-pair or unresolved.

    Unresolved roots trigger a re-solve at doubled precision, up to
    ``max_rounds`` times, when the report still knows its polynomial.
    """
    if not report.roots:
        raise DomainError("classify_real needs a report with roots")
    current = report
    for round_ in range(max_rounds + 1):
        with mp.workdps(current.dps):
            eps = mpmath.ldexp(1, -mp.prec + 1)
            roots = _classify(current.roots, tol_rel, eps)
        current = replace(current, roots=roots, classified=True, tol_rel=tol_rel, escalations=round_)
        if not current.count_unresolved or current.poly is None or round_ == max_rounds:
            break
        logger.info(
            f"{current.count_unresolved} unresolved root(s) at {current.dps} digits; escalating"
        )
        poly = current.poly.with_dps(2 * current.dps)
        current = replace(roots_of_truncation(poly), disk_counts=current.disk_counts)
    if current.count_unresolved:
        logger.warning(f"{current.count_unresolved} root(s) left unresolved")
    return current


# ----------------------------------------------------------------- argument principle


@dataclass(frozen=True)
class ContourPolicy:
    initial_points: int = 64
    points_per_index: int = 8
    max_points: int = 1 << 14
    min_modulus_factor: int = 10
    retry_factors: tuple = ("1.001", "0.999")

    def start_points(self, j_hint: int | None) -> int:
        if j_hint is None:
            return self.initial_points
        return max(self.initial_points, self.points_per_index * j_hint)


@dataclass(frozen=True)
class DiskCount:
    count: int
    winding: float
    residual: float
    radius: object
    min_modulus: object
    min_modulus_bound: object
    points: int
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "winding": self.winding,
            "residual": self.residual,
            "radius": self.radius,
            "min_modulus": self.min_modulus,
            "min_modulus_bound": self.min_modulus_bound,
            "points": self.points,
            **dict(self.details),
        }


def winding_number(fn, radius, points: int = 64, policy: ContourPolicy = ContourPolicy()) -> DiskCount:
    """Zeros of a real function inside |z| < radius.

    ``fn(z)`` returns (value, error bound). The upper half circle is sampled
    and locally refined until every phase step is below pi/2; the count is
    the phase change divided by pi.
    """
    radius = mpmath.mpf(radius)
    ts = [mpmath.mpf(i) / points for i in range(points + 1)]

    def sample(t):
        value, bound = fn(radius * mpmath.expjpi(t))
        return value, bound, float(mpmath.arg(value))

    samples = [sample(t) for t in ts]
    while True:
        phases = np.array([s[2] for s in samples], dtype=float)
        steps = np.mod(np.diff(phases) + np.pi, 2 * np.pi) - np.pi
        bad = np.nonzero(np.abs(steps) >= np.pi / 2)[0]
        if bad.size == 0:
            break
        if len(ts) + bad.size > policy.max_points:
            raise ContourError(
                f"phase tracking on |z| = {mpmath.nstr(radius, 10)} needs more than "
                f"{policy.max_points} points",
                radius=radius,
                suggested_radius=radius * mpmath.mpf(policy.retry_factors[0]),
            )
        for i in reversed(bad.tolist()):
            t = (ts[i] + ts[i + 1]) / 2
            ts.insert(i + 1, t)
            samples.insert(i + 1, sample(t))

    moduli = [abs(s[0]) for s in samples]
    worst = min(range(len(samples)), key=lambda i: moduli[i] - policy.min_modulus_factor * samples[i][1])
    if moduli[worst] < policy.min_modulus_factor * samples[worst][1]:
        raise ContourError(
            f"|f| = {mpmath.nstr(moduli[worst], 5)} on |z| = {mpmath.nstr(radius, 10)} is within "
            f"{policy.min_modulus_factor}x its error bound",
            radius=radius,
            suggested_radius=radius * mpmath.mpf(policy.retry_factors[0]),
        )
    winding = float(steps.sum() / np.pi)
    count = int(round(winding))
    return DiskCount(
        count=count,
        winding=winding,
        residual=abs(winding - count),
        radius=radius,
        min_modulus=min(moduli),
        min_modulus_bound=samples[moduli.index(min(moduli))][1],
        points=len(samples),
    )


def _evaluator(target, config: RunConfig):
    if isinstance(target, TruncationPolynomial):
        def fn(z):
            ev = target.evaluate(z)
            return ev.value, ev.error_bound
    else:
        rel_tol = config.tol("evaluate_rel")

        def fn(z):
            ev = evaluate(target, z, rel_tol, dps=config.dps, max_escalations=0)
            return ev.value, ev.error_bound
    return fn


def count_zeros_disk(
    target,
    radius,
    policy: ContourPolicy = ContourPolicy(),
    config: RunConfig = DEFAULT_CONFIG,
    j_hint: int | None = None,
) -> DiskCount:
    """Zeros of a sequence's function (or of a section) in |z| < radius."""
    dps = target.dps if isinstance(target, TruncationPolynomial) else config.dps
    with mp.workdps(dps):
        radius = mpmath.mpf(radius)
        if radius <= 0:
            raise DomainError("radius must be positive")
        return winding_number(_evaluator(target, config), radius, policy.start_points(j_hint), policy)


def _count_with_retry(seq, radius, policy, config, j):
    try:
        return count_zeros_disk(seq, radius, policy, config, j)
    except ContourError as exc:
        for factor in policy.retry_factors:
            with mp.workdps(config.dps):
                moved = radius * mpmath.mpf(factor)
            logger.info(f"Contour at rho_{j} too close to a zero ({exc}); retrying at {factor}x")
            try:
                result = count_zeros_disk(seq, moved, policy, config, j)
            except ContourError:
                continue
            return replace(result, details={"perturbed_from": radius})
        raise


def disk_counts(
    seq: CoefficientSequence,
    report: ZeroReport,
    j_range: tuple,
    config: RunConfig = DEFAULT_CONFIG,
    policy: ContourPolicy = ContourPolicy(),
) -> ZeroReport:
    """Attach (j, rho_j, count, nonreal) rows to a classified report of a section of seq."""
    lo, hi = j_range
    if lo < 2 or hi < lo:
        raise DomainError(f"j range must satisfy 2 <= j1 <= j2, got {j_range}")
    rows = []
    for j in range(lo, hi + 1):
        radius = disk_radius(seq, j, config.dps)
        count = _count_with_retry(seq, radius, policy, config, j)
        inside = report.inside(count.radius)
        rows.append(
            {
                "j": j,
                "rho_j": count.radius,
                "count": count.count,
                "nonreal": max(count.count - inside["real"], 0),
                "winding_residual": count.residual,
            }
        )
    return replace(report, disk_counts=tuple(rows))


def quartic_unit_disk_count(q_j, q_j1, config: RunConfig = DEFAULT_CONFIG) -> DiskCount:
    """Roots in |w| < 1 of 1 - c w + q_j q_{j+1} w^2 - c w^3 + w^4, c = q_j sqrt(q_{j+1})."""
    with mp.workdps(config.dps):
        qa = q_j if isinstance(q_j, mpmath.mpf) else to_mpf(exact(q_j, "q_j"))
        qb = q_j1 if isinstance(q_j1, mpmath.mpf) else to_mpf(exact(q_j1, "q_j1"))
        floor = two_cbrt_two()
        if not (meets(qa, floor, 1e-12) and meets(qb, floor, 1e-12)):
            raise DomainError(
                f"quartic count needs q_j, q_(j+1) >= 2*2^(1/3), got {mpmath.nstr(qa, 8)}, {mpmath.nstr(qb, 8)}"
            )
        c = qa * mpmath.sqrt(qb)
        log_c = mpmath.log(c)
        quartic = TruncationPolynomial.from_logs(
            [mpmath.mpf(0), log_c, mpmath.log(qa * qb), log_c, mpmath.mpf(0)],
            alternating=True,
            dps=config.dps,
        )
        psi = check_psi_positive(qa, qb, config.dps)
        try:
            result = count_zeros_disk(quartic, 1, config=config)
        except ContourError as exc:
            raise ContourError(
                f"root of the quartic on |w| = 1 contradicts psi > 0 ({exc})", radius=1
            ) from exc
        return replace(result, details={"psi": psi.to_dict(), "c": c})


QUARTIC_GRID = ("2.5199", "3", "3.5", "4", "9")


def quartic_grid(values=QUARTIC_GRID, config: RunConfig = DEFAULT_CONFIG) -> list:
    """Unit-disk counts of the quartic for every pair q_j <= q_(j+1) from values."""
    values = sorted(values, key=lambda v: exact(v, "q"))
    rows = []
    for i, q_j in enumerate(values):
        for q_j1 in values[i:]:
            result = quartic_unit_disk_count(q_j, q_j1, config)
            rows.append(
                {
                    "q_j": exact(q_j, "q_j"),
                    "q_j1": exact(q_j1, "q_j1"),
                    "count": result.count,
                    "psi": result.details["psi"],
                    "holds": result.count == 2 and result.details["psi"]["holds"],
                }
            )
    return rows


# ----------------------------------------------------------------- sign alternation


@dataclass(frozen=True)
class SignCheck:
    k: int
    rho: object
    value: object
    error_bound: object
    certified: bool
    status: str
    mu: object
    dps: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "rho_k": self.rho,
            "phi_rho_k": self.value,
            "error_bound": self.error_bound,
            "certified": self.certified,
            "status": self.status,
            "mu_k": self.mu,
            "dps": self.dps,
        }


def sign_alternation_check(
    seq: CoefficientSequence,
    k_max: int,
    config: RunConfig = DEFAULT_CONFIG,
    n_check: int = 200,
) -> list:
    """(-1)^k phi(rho_k) >= 0 for k = 2..k_max, phi(x) = f(-x), f normalized to a_0 = a_1 = 1."""
    if k_max < 2:
        raise DomainError(f"k_max must be at least 2, got {k_max}")
    hypotheses, _ = mthm1_hypotheses(seq, max(n_check, k_max + 4), config)
    failed = next((h for h in hypotheses if not h.satisfied), None)
    if failed is not None:
        raise HypothesesNotMetError(
            f"sign alternation needs the criterion's hypotheses; '{failed.name}' fails",
            hypotheses=[h.to_dict() for h in hypotheses],
        )
    normalized = seq.normalized()
    profile = quotients(seq, k_max + 1, dps=config.dps)
    rel_tol = config.tol("evaluate_rel")
    checks = []
    for k in range(2, k_max + 1):
        dps = config.dps
        for attempt in range(config.max_escalations + 1):
            if attempt:
                dps *= 2
            with mp.workdps(dps):
                r = rho(profile, k) if dps == profile.dps else rho(quotients(seq, k + 1, dps=dps), k)
                ev = evaluate(normalized, -r, rel_tol, dps=dps)
                signed = (-1) ** k * ev.value
                certified = bool(signed - ev.error_bound >= 0)
                violated = bool(signed + ev.error_bound < 0)
            if certified or violated:
                break
        status = "certified" if certified else ("violated" if violated else "unresolved")
        if status != "certified":
            logger.warning(f"(-1)^{k} phi(rho_{k}) is {status}")
        checks.append(
            SignCheck(
                k=k,
                rho=r,
                value=ev.value,
                error_bound=ev.error_bound,
                certified=certified,
                status=status,
                mu=mu_k(seq, k, dps),
                dps=dps,
            )
        )
    return checks


# -------------------------------------------------------------------------- census


@dataclass(frozen=True)
class CensusRow:
    j: int
    rho_j: object
    winding: int
    real_inside: int
    nonreal_inside: int
    unresolved_inside: int
    nonreal_bound: int
    residual: float
    conjecture_regime: bool = False
    perturbed: bool = False

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "rho_j": self.rho_j,
            "winding": self.winding,
            "real_inside": self.real_inside,
            "nonreal_inside": self.nonreal_inside,
            "unresolved_inside": self.unresolved_inside,
            "nonreal_bound": self.nonreal_bound,
            "winding_residual": self.residual,
            "conjecture_regime": self.conjecture_regime,
            "perturbed": self.perturbed,
        }


@dataclass(frozen=True)
class Census:
    rows: tuple
    degree: int
    empirical_j0: int | None
    estqq_j0: int | None
    stabilized: bool
    stable_nonreal: int | None
    conjecture_regime: bool
    zeros: ZeroReport = field(repr=False, compare=False, default=None)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "empirical_j0": self.empirical_j0,
            "estqq_j0": self.estqq_j0,
            "stabilized": self.stabilized,
            "stable_nonreal": self.stable_nonreal,
            "conjecture_regime": self.conjecture_regime,
            "rows": [row.to_dict() for row in self.rows],
            "truncation": {
                "count_real": self.zeros.count_real,
                "count_nonreal": self.zeros.count_nonreal,
                "count_unresolved": self.zeros.count_unresolved,
            }
            if self.zeros is not None
            else None,
        }


def _census_gate(seq, top: int, experimental: bool, config: RunConfig):
    profile = quotients(seq, top, dps=config.dps)
    tol = config.tol("hypothesis_rel")
    with mp.workdps(config.dps):
        qs = list(profile.q)
        floor = two_cbrt_two()
        monotone = all(b >= a * (1 - tol) for a, b in zip(qs, qs[1:]))
        in_regime = bool(meets(qs[0], floor, tol))
        hypotheses = [
            {"name": "q2_ge_2cbrt2", "satisfied": in_regime, "measured": qs[0]},
            {"name": "q_non_decreasing", "satisfied": monotone, "measured": top},
        ]
        if monotone and in_regime:
            return False
        if experimental and monotone and qs[0] > 1:
            logger.info("Census outside the proven regime; rows are flagged conjecture_regime")
            return True
    raise HypothesesNotMetError(
        "census needs 2*2^(1/3) <= q_2 <= q_3 <= ... (use experimental mode for 1 < q_2)",
        hypotheses=hypotheses,
    )


def _census_row(args):
    seq, j, radius, zeros, policy, config, conjecture = args
    count = _count_with_retry(seq, radius, policy, config, j)
    inside = zeros.inside(count.radius)
    return CensusRow(
        j=j,
        rho_j=radius,
        winding=count.count,
        real_inside=inside["real"],
        nonreal_inside=inside["nonreal"],
        unresolved_inside=inside["unresolved"],
        nonreal_bound=max(count.count - inside["real"], 0),
        residual=count.residual,
        conjecture_regime=conjecture,
        perturbed="perturbed_from" in count.details,
    )


def nonreal_census(
    seq: CoefficientSequence,
    j_range: tuple,
    degree: int,
    config: RunConfig = DEFAULT_CONFIG,
    experimental: bool = False,
    policy: ContourPolicy = ContourPolicy(),
) -> Census:
    """Disk counts at rho_j next to the real roots of a degree-`degree` section."""
    lo, hi = j_range
    if lo < 2 or hi < lo:
        raise DomainError(f"j range must satisfy 2 <= j1 <= j2, got {j_range}")
    conjecture = _census_gate(seq, max(hi + 1, degree), experimental, config)

    radii = [disk_radius(seq, j, config.dps) for j in range(lo, hi + 1)]
    with mp.workdps(config.dps):
        needed = truncation_degree(seq, radii[-1], config.tol("evaluate_rel"))
    if degree < needed:
        raise DegreeError(
            f"degree {degree} leaves a tail above tolerance on |z| = rho_{hi}; use at least {needed}",
            recommended_degree=needed,
        )

    zeros = classify_real(
        roots_of_truncation(truncate(seq, degree, dps=config.dps)),
        config.tol("real_classification"),
    )
    workers = config.workers if seq.quotient_rule is None else 1
    tasks = [
        (seq, j, radius, zeros, policy, config, conjecture)
        for j, radius in zip(range(lo, hi + 1), radii)
    ]
    rows = tuple(parallel_map(_census_row, tasks, workers))

    empirical_j0 = None
    for row in reversed(rows):
        if row.winding != row.j:
            break
        empirical_j0 = row.j
    tail = [row.nonreal_bound for row in rows[-4:]]
    stabilized = len(rows) >= 4 and len(set(tail)) == 1
    estqq_j0 = None
    if not conjecture and hi >= 4:
        estqq_j0 = estqq_threshold(seq, (lo, hi), config.dps).j0
    return Census(
        rows=rows,
        degree=degree,
        empirical_j0=empirical_j0,
        estqq_j0=estqq_j0,
        stabilized=stabilized,
        stable_nonreal=tail[-1] if stabilized else None,
        conjecture_regime=conjecture,
        zeros=zeros,
    )
