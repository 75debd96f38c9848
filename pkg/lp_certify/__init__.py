"""
lp-certify - membership in the Laguerre-Polya class of type I.

Decide, certify and explore whether an entire function with positive
Taylor coefficients has only real zeros, using second quotients of its
coefficients, disk zero counts and the partial theta constants.
"""

__version__ = "1.0.0"
__license__ = "MIT"

from lp_certify.config import RunConfig
from lp_certify.criteria import Verdict, run_criterion
from lp_certify.series import CoefficientSequence, evaluate, make_family, quotients, section, truncate
from lp_certify.zeros import ZeroReport, classify_real, roots_of_truncation

__all__ = [
    "CoefficientSequence",
    "RunConfig",
    "Verdict",
    "ZeroReport",
    "classify_real",
    "evaluate",
    "make_family",
    "quotients",
    "roots_of_truncation",
    "run_criterion",
    "section",
    "truncate",
    "__version__",
]
