"""
Run configuration.

Values come from explicit arguments first, then environment variables,
then defaults.
"""

import logging
import os
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

DEFAULT_DPS = 34
DEFAULT_ESCALATIONS = 2
OUTPUT_FORMATS = ("json", "csv", "pretty")

DEFAULT_TOLERANCES = {
    # relative slack for the non-strict q-inequalities of the theorems
    "hypothesis_rel": 1e-12,
    # |Im z| <= tol * |z| counts as real
    "real_classification": 1e-8,
    # relative truncation tolerance for series evaluation
    "evaluate_rel": 1e-25,
    # relative margin for reported inequality margins
    "inequality_rel": 1e-12,
}


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by one CLI invocation or one library session.

    Same config plus same inputs always gives byte-identical output; the
    ``deterministic`` field only documents that (nothing is seeded).
    """

    dps: int = DEFAULT_DPS
    max_escalations: int = DEFAULT_ESCALATIONS
    output_format: str = "json"
    workers: int = 1
    deterministic: bool = True
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def __post_init__(self):
        if self.dps < 15:
            raise ValueError(f"dps must be at least 15, got {self.dps}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format {self.output_format!r}")
        if self.max_escalations < 0:
            raise ValueError("max_escalations must be non-negative")

    @classmethod
    def from_env(
        cls,
        dps: int | None = None,
        max_escalations: int | None = None,
        output_format: str | None = None,
        workers: int | None = None,
        tolerances: dict | None = None,
    ) -> "RunConfig":
        """Build a config, falling back to LP_CERTIFY_* environment variables."""
        merged = dict(DEFAULT_TOLERANCES)
        merged.update(tolerances or {})
        return cls(
            dps=dps or _env_int("LP_CERTIFY_PRECISION", DEFAULT_DPS),
            max_escalations=(
                max_escalations
                if max_escalations is not None
                else _env_int("LP_CERTIFY_ESCALATIONS", DEFAULT_ESCALATIONS)
            ),
            output_format=output_format or "json",
            workers=workers or _env_int("LP_CERTIFY_WORKERS", 1),
            tolerances=merged,
        )

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    def to_dict(self) -> dict:
        return {
            "dps": self.dps,
            "max_escalations": self.max_escalations,
            "output_format": self.output_format,
            "workers": self.workers,
            "deterministic": self.deterministic,
            "tolerances": dict(sorted(self.tolerances.items())),
        }


DEFAULT_CONFIG = RunConfig()
