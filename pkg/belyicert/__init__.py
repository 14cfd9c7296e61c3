"""belyicert: certificates for genus-0 Belyi maps and rigid generating triples."""

from .belyi import load_belyi, match_profile_to_triple, ramification_profile
from .bsgs import PermGroup, build_group
from .budget import Budget
from .fixtures import Fixture, load_fixture
from .permcore import Permutation, parse_cycle_type, parse_permutation
from .polyarith import parse_factored, parse_polynomial
from .report import ScanReport, VerificationReport
from .toolkit import Certifier, create_certifier, run_scan, run_verify
from .triples import close_triple

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "Certifier",
    "Fixture",
    "PermGroup",
    "Permutation",
    "ScanReport",
    "VerificationReport",
    "build_group",
    "close_triple",
    "create_certifier",
    "load_belyi",
    "load_fixture",
    "match_profile_to_triple",
    "parse_cycle_type",
    "parse_factored",
    "parse_permutation",
    "parse_polynomial",
    "ramification_profile",
    "run_scan",
    "run_verify",
]
