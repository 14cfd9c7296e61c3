"""
Belyi-map certification for f = p/q = 1 + r/q.

Fibers: over 0 the roots of p, over 1 the roots of r = p - q, over infinity
the roots of q. The point at infinity lies in the fiber whose polynomial has
degree below n, with multiplicity n - deg.
"""

import logging
import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, List, Optional, Tuple

from .errors import (
    BelyiDataError,
    DegreeMismatchError,
    IdentityMismatchError,
    NotCoprimeError,
    ProfileInconsistencyError,
)
from .permcore import CycleType
from .polyarith import (
    FactoredPolynomial,
    IntegerPolynomial,
    MultiplicityMultiset,
    expand,
    format_polynomial,
    multiplicity_multiset,
    poly_gcd,
)
from .triples import TripleDatum

logger = logging.getLogger(__name__)

FIBERS = ("0", "1", "inf")


@dataclass
class BelyiMapDatum:
    n: int
    p: IntegerPolynomial
    q: IntegerPolynomial
    r: IntegerPolynomial
    supplied: Tuple[str, ...]
    printed: Dict[str, FactoredPolynomial] = field(default_factory=dict)

    @property
    def derived(self) -> Optional[str]:
        missing = [k for k in ("p", "q", "r") if k not in self.supplied]
        return missing[0] if missing else None


def load_belyi(n: int, p: Optional[FactoredPolynomial] = None,
               q: Optional[FactoredPolynomial] = None,
               r: Optional[FactoredPolynomial] = None) -> BelyiMapDatum:
    """Build a datum from two (or all three) of p, q, r.

    The missing polynomial is derived from p = q + r. Rational constants are
    aligned by clearing the common denominator.

    Raises:
        BelyiDataError: fewer than two polynomials, or one of them is zero.
        IdentityMismatchError: all three supplied and p != q + r; carries the
            exact difference p - q - r.
        DegreeMismatchError: max(deg p, deg q) != n.
        NotCoprimeError: gcd(p, q) is not constant.
    """
    printed = {k: v for k, v in (("p", p), ("q", q), ("r", r)) if v is not None}
    if len(printed) < 2:
        raise BelyiDataError("need at least two of p, q, r")
    common = math.lcm(*(f.denominator for f in printed.values()))
    polys = {k: expand(f).scale(common // f.denominator) for k, f in printed.items()}

    if len(polys) == 3:
        difference = polys["p"] - polys["q"] - polys["r"]
        if not difference.is_zero():
            raise IdentityMismatchError(
                f"p != q + r; p - q - r = {format_polynomial(difference)}", difference)
    elif "p" not in polys:
        polys["p"] = polys["q"] + polys["r"]
    elif "q" not in polys:
        polys["q"] = polys["p"] - polys["r"]
    else:
        polys["r"] = polys["p"] - polys["q"]

    pp, qq, rr = polys["p"], polys["q"], polys["r"]
    if qq.is_zero() or pp.is_zero() or rr.is_zero():
        raise BelyiDataError("p, q and r must be nonzero")
    if max(pp.degree, qq.degree) != n:
        raise DegreeMismatchError(
            f"max(deg p, deg q) = {max(pp.degree, qq.degree)} but the map has degree {n}")
    g = poly_gcd(pp, qq)
    if not g.is_constant():
        raise NotCoprimeError(f"p and q share the factor {format_polynomial(g)}")
    logger.debug("belyi datum: deg p=%s deg q=%s deg r=%s", pp.degree, qq.degree, rr.degree)
    return BelyiMapDatum(n, pp, qq, rr, tuple(k for k in ("p", "q", "r") if k in printed), printed)


@dataclass
class RamificationProfile:
    over0: MultiplicityMultiset
    over1: MultiplicityMultiset
    overInf: MultiplicityMultiset
    infinity_fiber: Optional[str] = None
    infinity_multiplicity: int = 0

    def fibers(self) -> Dict[str, MultiplicityMultiset]:
        return {"0": self.over0, "1": self.over1, "inf": self.overInf}

    def to_dict(self) -> dict:
        out = {k: str(v) for k, v in self.fibers().items()}
        out["infinity"] = "none" if self.infinity_fiber is None else (
            f"{self.infinity_fiber} (multiplicity {self.infinity_multiplicity})")
        return out


def ramification_profile(m: BelyiMapDatum) -> RamificationProfile:
    fibers = {}
    where, mult = None, 0
    for name, poly in (("0", m.p), ("1", m.r), ("inf", m.q)):
        ms = multiplicity_multiset(poly) if not poly.is_zero() else MultiplicityMultiset(())
        extra = m.n - (poly.degree if not poly.is_zero() else 0)
        if extra < 0:
            raise ProfileInconsistencyError(f"fiber over {name} has degree above {m.n}")
        if extra > 0:
            if where is not None:
                raise ProfileInconsistencyError(
                    f"point at infinity would lie over both {where} and {name}")
            ms = ms.with_part(int(extra))
            where, mult = name, int(extra)
        if ms.total != m.n:
            raise ProfileInconsistencyError(f"fiber over {name} totals {ms.total}, not {m.n}")
        fibers[name] = ms
    return RamificationProfile(fibers["0"], fibers["1"], fibers["inf"], where, mult)


def certify_three_branch_points(profile: RamificationProfile, n: int) -> bool:
    """Riemann-Hurwitz with genus-0 source: the three fibers carry all 2n - 2
    of the ramification exactly when no other point is a branch point."""
    total = sum(n - len(ms.parts) for ms in profile.fibers().values())
    logger.debug("ramification total %d, needed %d", total, 2 * n - 2)
    return total == 2 * n - 2


@dataclass
class ProfileMatch:
    assignments: List[Dict[str, str]]

    @property
    def ok(self) -> bool:
        return bool(self.assignments)

    @property
    def ambiguous(self) -> bool:
        return len(self.assignments) > 1


def match_profile_to_triple(profile: RamificationProfile, t: TripleDatum) -> ProfileMatch:
    """All bijections fiber -> triple member with equal partitions."""
    types: Dict[str, CycleType] = dict(zip(("x", "y", "z"), t.cycle_types()))
    fibers = {k: ms.as_cycle_type() for k, ms in profile.fibers().items()}
    if any(ct.n != t.degree for ct in fibers.values()):
        return ProfileMatch([])
    found = []
    for order in permutations(("x", "y", "z")):
        pairing = dict(zip(FIBERS, order))
        if all(fibers[f] == types[member] for f, member in pairing.items()):
            found.append(pairing)
    return ProfileMatch(found)
