"""
Finite Taylor sections and the evaluation record shared by series and zeros.

A section ``sum_{k=m}^{n} a_k z^k`` is stored with the factor ``z^m``
removed; coefficients are kept as natural logs plus a sign so that
``a^{-k^2}``-type magnitudes never underflow.
"""

from dataclasses import dataclass, field

import mpmath
from mpmath import mp


@dataclass(frozen=True)
class Evaluation:
    """A value together with certified error bounds.

    ``tail_bound`` covers the discarded part of an infinite series and
    ``rounding_bound`` the floating point error of the partial sum.
    """

    z: object
    value: object
    tail_bound: object
    rounding_bound: object
    degree: int
    largest_term: object
    dps: int
    escalations: int = 0

    @property
    def error_bound(self):
        return self.tail_bound + self.rounding_bound

    @property
    def is_real(self) -> bool:
        return isinstance(self.value, mpmath.mpf)

    def certified_positive(self) -> bool:
        return self.is_real and self.value - self.error_bound > 0

    def certified_nonpositive(self) -> bool:
        return self.is_real and self.value + self.error_bound <= 0

    def sign(self) -> int:
        """+1 or -1 when the sign is certain, 0 when the bound straddles zero."""
        if self.certified_positive():
            return 1
        if self.is_real and self.value + self.error_bound < 0:
            return -1
        return 0

    def to_dict(self) -> dict:
        return {
            "z": self.z,
            "value": self.value,
            "tail_bound": self.tail_bound,
            "rounding_bound": self.rounding_bound,
            "error_bound": self.error_bound,
            "degree": self.degree,
            "largest_term": self.largest_term,
            "dps": self.dps,
            "escalations": self.escalations,
        }


@dataclass(frozen=True, eq=False)
class TruncationPolynomial:
    """Polynomial ``z^start * sum_i sign_i * exp(log_coeffs[i]) * z^i``."""

    log_coeffs: tuple
    signs: tuple
    start: int = 0
    source: object = field(default=None, repr=False)
    dps: int = 34

    def __post_init__(self):
        if len(self.log_coeffs) < 2:
            raise ValueError("a section needs at least two coefficients")
        if len(self.signs) != len(self.log_coeffs):
            raise ValueError("signs and log_coeffs differ in length")

    @classmethod
    def from_logs(cls, log_coeffs, start=0, source=None, alternating=False, dps=None):
        dps = dps or mp.dps
        logs = tuple(log_coeffs)
        if alternating:
            signs = tuple(-1 if (start + i) % 2 else 1 for i in range(len(logs)))
        else:
            signs = (1,) * len(logs)
        return cls(log_coeffs=logs, signs=signs, start=start, source=source, dps=dps)

    @property
    def degree(self) -> int:
        """Degree of the reduced polynomial (the factor z^start removed)."""
        return len(self.log_coeffs) - 1

    @property
    def stop(self) -> int:
        return self.start + self.degree

    @property
    def zero_multiplicity(self) -> int:
        return self.start

    @property
    def alternating(self) -> bool:
        return any(s < 0 for s in self.signs)

    def coefficients(self) -> list:
        """Reduced coefficients, ascending powers, at the stored precision."""
        with mp.workdps(self.dps):
            return [s * mpmath.exp(lc) for s, lc in zip(self.signs, self.log_coeffs)]

    @property
    def log_balancing_radius(self):
        """log of (|c_0| / |c_n|)^(1/n), the geometric mean of the root moduli."""
        with mp.workdps(self.dps):
            return (self.log_coeffs[0] - self.log_coeffs[-1]) / self.degree

    @property
    def balancing_radius(self):
        with mp.workdps(self.dps):
            return mpmath.exp(self.log_balancing_radius)

    def balanced_log_coeffs(self) -> list:
        """log b_i for b_i = |c_i| rho^i / max_k |c_k| rho^k, so max b_i == 1."""
        with mp.workdps(self.dps):
            log_rho = self.log_balancing_radius
            logs = [lc + i * log_rho for i, lc in enumerate(self.log_coeffs)]
            top = max(logs)
            return [lb - top for lb in logs]

    def balanced_coefficients(self) -> list:
        with mp.workdps(self.dps):
            return [
                s * mpmath.exp(lb)
                for s, lb in zip(self.signs, self.balanced_log_coeffs())
            ]

    def quotient(self, i: int):
        """Second quotient q_i of the reduced polynomial, 2 <= i <= degree."""
        if not 2 <= i <= self.degree:
            raise IndexError(f"quotient index {i} outside [2, {self.degree}]")
        with mp.workdps(self.dps):
            lc = self.log_coeffs
            return mpmath.exp(2 * lc[i - 1] - lc[i - 2] - lc[i])

    def with_dps(self, dps: int) -> "TruncationPolynomial":
        """Recompute the section at another precision when the source allows it."""
        if self.source is None or dps == self.dps:
            return TruncationPolynomial(
                self.log_coeffs, self.signs, self.start, self.source, dps
            )
        with mp.workdps(dps):
            logs = tuple(
                self.source.log_coeff(k) for k in range(self.start, self.stop + 1)
            )
        return TruncationPolynomial(logs, self.signs, self.start, self.source, dps)

    def evaluate(self, z) -> Evaluation:
        """Horner evaluation of the full section z^start * P(z), with a bound."""
        with mp.workdps(self.dps):
            z = mpmath.mpmathify(z)
            coeffs = self.coefficients()
            acc = coeffs[-1]
            absz = abs(z)
            magnitude = abs(coeffs[-1])
            for c in reversed(coeffs[:-1]):
                acc = acc * z + c
                magnitude = magnitude * absz + abs(c)
            shift = z ** self.start if self.start else mpmath.mpf(1)
            value = acc * shift
            magnitude *= abs(shift)
            # gamma_{2n} style bound for Horner
            unit = mpmath.ldexp(1, -mp.prec + 1)
            rounding = 4 * (self.degree + self.start + 2) * unit * magnitude
            if isinstance(value, mpmath.mpc) and not isinstance(z, mpmath.mpc):
                value = value.real
            return Evaluation(
                z=z,
                value=value,
                tail_bound=mpmath.mpf(0),
                rounding_bound=rounding,
                degree=self.stop,
                largest_term=magnitude,
                dps=self.dps,
            )

    def horner_with_derivative(self, w, coeffs):
        """P(w), P'(w) and sum |c_i||w|^i for the given reduced coefficient list."""
        p = coeffs[-1]
        dp = mpmath.mpf(0)
        magnitude = abs(coeffs[-1])
        absw = abs(w)
        for c in reversed(coeffs[:-1]):
            dp = dp * w + p
            p = p * w + c
            magnitude = magnitude * absw + abs(c)
        return p, dp, magnitude

    def to_dict(self) -> dict:
        with mp.workdps(self.dps):
            return {
                "start": self.start,
                "stop": self.stop,
                "degree": self.degree,
                "signs": list(self.signs),
                "log_coeffs": list(self.log_coeffs),
                "balancing_radius": self.balancing_radius,
                "dps": self.dps,
            }
