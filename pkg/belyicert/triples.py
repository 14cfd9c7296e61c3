"""
Triples (x, y, z) with xyz = 1: genus, generation, the subdegree divisibility
criterion, rigidity censuses and the nice-triple scan.

Censuses count, for a fixed x0 in C1, the y' in C2 whose closing element
z' = (x0 y')^-1 lies in C3. The centralizer of x0 acts on the counted pairs,
freely on the generating ones when the group is centerless, so
generating pairs / |C_G(x0)| is the number of generating triples up to
simultaneous conjugation.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np

from .bsgs import PermGroup, build_group, contains, is_primitive, orbit, orbit_of, order
from .budget import Budget, BudgetGuard
from .classes import (
    ClassTable,
    ConjugacyClass,
    all_classes,
    centralizer,
    class_orbit,
    iter_class_members,
)
from .errors import (
    BudgetExceeded,
    DegreeMismatchError,
    IncompleteTableError,
    MalformedSubdegreesError,
    NotInGroupError,
    OddIndexSumError,
)
from .permcore import (
    CycleType,
    Permutation,
    compose,
    cycle_type,
    fingerprint_rows,
    fixed_point_counts,
    inverse,
    invert_rows,
    is_identity,
    ramification_index,
    type_fixed_points,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TripleDatum:
    x: Permutation
    y: Permutation
    z: Permutation

    def __post_init__(self):
        n = self.x.degree
        if self.y.degree != n or self.z.degree != n:
            raise DegreeMismatchError("triple members have different degrees")

    @property
    def degree(self) -> int:
        return self.x.degree

    def is_closed(self) -> bool:
        return is_identity(compose(compose(self.x, self.y), self.z))

    def cycle_types(self) -> Tuple[CycleType, CycleType, CycleType]:
        return cycle_type(self.x), cycle_type(self.y), cycle_type(self.z)


def close_triple(x: Permutation, y: Permutation) -> TripleDatum:
    return TripleDatum(x, y, inverse(compose(x, y)))


def genus_of_indices(n: int, indices: Sequence[int]) -> int:
    total = sum(indices)
    if total % 2:
        raise OddIndexSumError(f"ramification indices {list(indices)} have odd sum {total}")
    return 1 - n + total // 2


def genus(t: TripleDatum) -> int:
    """Genus from Riemann-Hurwitz: 2 - 2g = 2n - (ind x + ind y + ind z)."""
    return genus_of_indices(t.degree, [ramification_index(a) for a in (t.x, t.y, t.z)])


def generates(g: PermGroup, t: TripleDatum) -> bool:
    for name, a in (("x", t.x), ("y", t.y), ("z", t.z)):
        if not contains(g, a):
            raise NotInGroupError(f"{name} is not in the group")
    return _pair_generates(g, t.x, t.y, order(g), len(orbit(g, 0)))


# ============================================================
# DIVISIBILITY CRITERION
# ============================================================


class DivisibilityVerdict(str, Enum):
    CERTIFIED_PRIMITIVE = "certified_primitive"
    INCONCLUSIVE = "inconclusive"


def divisibility_primitivity(subdegs: Sequence[int], n: int) -> DivisibilityVerdict:
    """Primitive unless some subset containing the trivial subdegree sums to a
    proper nontrivial divisor of n (a block through the fixed point would)."""
    parts = sorted(int(d) for d in subdegs)
    if not parts or parts[0] < 1:
        raise MalformedSubdegreesError(f"subdegrees must be positive: {list(subdegs)}")
    if 1 not in parts:
        raise MalformedSubdegreesError(f"subdegrees lack the trivial suborbit: {parts}")
    if sum(parts) != n:
        raise MalformedSubdegreesError(f"subdegrees {parts} do not sum to {n}")
    rest = list(parts)
    rest.remove(1)
    reachable = 1 << 1
    for d in rest:
        reachable |= reachable << d
    for d in range(2, n):
        if n % d == 0 and (reachable >> d) & 1:
            logger.debug("subdegree subset sums to divisor %d of %d", d, n)
            return DivisibilityVerdict.INCONCLUSIVE
    return DivisibilityVerdict.CERTIFIED_PRIMITIVE


# ============================================================
# CENSUS
# ============================================================


@dataclass
class TripleCensus:
    """Pairs realizing a class triple with product 1, for one fixed x0.

    Attributes:
        pair_count: y' in C2 with (x0 y')^-1 in C3.
        generating_pair_count: those that also generate the group.
        centralizer_order: |C_G(x0)| = |G| / |C1| (the largest one once
            censuses of several class combinations are added).
        orbit_count: pair_count / |C_G(x0)| when every counted pair
            generates, else None (not applicable).
        generating_orbit_count: generating triples up to simultaneous
            conjugation.
        pair_orbits: C_G(x0)-orbits of counted pairs (one generation test
            each).
    """

    pair_count: int = 0
    generating_pair_count: int = 0
    centralizer_order: int = 0
    orbit_count: Optional[Fraction] = Fraction(0)
    generating_orbit_count: Fraction = Fraction(0)
    all_generate: bool = True
    pair_orbits: int = 0
    combinations: int = 0

    @property
    def is_rigid(self) -> bool:
        return self.generating_orbit_count == 1

    def __add__(self, other: "TripleCensus") -> "TripleCensus":
        orbit_total = None
        if self.orbit_count is not None and other.orbit_count is not None:
            orbit_total = self.orbit_count + other.orbit_count
        return TripleCensus(
            pair_count=self.pair_count + other.pair_count,
            generating_pair_count=self.generating_pair_count + other.generating_pair_count,
            centralizer_order=max(self.centralizer_order, other.centralizer_order),
            orbit_count=orbit_total,
            generating_orbit_count=self.generating_orbit_count + other.generating_orbit_count,
            all_generate=self.all_generate and other.all_generate,
            pair_orbits=self.pair_orbits + other.pair_orbits,
            combinations=self.combinations + other.combinations,
        )

    def to_dict(self) -> dict:
        return {
            "pair_count": str(self.pair_count),
            "generating_pair_count": str(self.generating_pair_count),
            "orbit_count": "n/a" if self.orbit_count is None else str(self.orbit_count),
            "generating_orbit_count": str(self.generating_orbit_count),
            "all_generate": self.all_generate,
            "pair_orbits": str(self.pair_orbits),
        }


def _ensure_members(g: PermGroup, cls: ConjugacyClass, budget: Budget) -> ConjugacyClass:
    if cls.members is not None:
        return cls
    return class_orbit(g, cls.representative, budget)


def _pair_generates(g: PermGroup, x: Permutation, y: Permutation, target: int,
                    reach: int) -> bool:
    # <x, y> moving fewer points from 0 than G cannot be G
    if len(orbit_of([x, y], 0)) != reach:
        return False
    sub = build_group([x, y], known_order=target, seed=g.seed, presift=g.presift)
    return order(sub) == target


def count_class_triples(g: PermGroup, c1: ConjugacyClass, c2: ConjugacyClass,
                        c3: ConjugacyClass, budget: Budget,
                        rotate: bool = True) -> TripleCensus:
    """Census of the class triple (C1, C2, C3).

    With ``rotate`` the triple is first rotated so that the smallest class
    supplies x0 (the rotations (x, y, z) -> (y, z, x) are bijections
    preserving generation, so orbit counts do not change; pair counts scale
    with |C_G(x0)|). The middle class is streamed and the closing element is
    tested against the fingerprints of the last one after a fixed-point
    prefilter.

    Counted pairs are split into orbits of C_G(x0) acting by conjugation.
    Generation is constant on such an orbit, so it is tested once per orbit.

    Raises:
        BudgetExceeded: a class could not be enumerated, or more orbits than
            ``budget.generation_checks`` needed a generation test.
    """
    if rotate:
        rotations = [(c1, c2, c3), (c2, c3, c1), (c3, c1, c2)]
        c1, c2, c3 = min(rotations, key=lambda r: (r[0].size, r[1].size))
    c3 = _ensure_members(g, c3, budget)

    target = order(g)
    if target % c1.size:
        raise ValueError(f"class size {c1.size} does not divide the group order {target}")
    centralizer_order = target // c1.size
    x0 = c1.representative
    n = g.degree
    reach = len(orbit(g, 0))

    # fixed points of z'^e equal those of (x0 y')^e for every exponent e
    exponents = sorted({e for e in (1, 2, 3, 4, 6) if type_fixed_points(c3.ctype, e) < n})[:3]
    wanted = {e: type_fixed_points(c3.ctype, e) for e in exponents}

    guard = BudgetGuard(budget, "triple census")
    cent: Optional[PermGroup] = None
    counted: Set[bytes] = set()
    pairs = generating = orbits = 0
    for chunk in iter_class_members(g, c2.representative, budget, guard=guard):
        products = chunk[:, x0.images]
        mask = np.ones(chunk.shape[0], dtype=bool)
        for e, fixed in wanted.items():
            mask &= fixed_point_counts(products, e) == fixed
        if not mask.any():
            continue
        closing = invert_rows(products[mask])
        hits = [i for i, fp in enumerate(fingerprint_rows(closing)) if fp in c3.members]
        if not hits:
            continue
        rows = chunk[mask][hits]
        for fp, row in zip(fingerprint_rows(rows), rows):
            if fp in counted:
                continue
            orbits += 1
            if orbits > budget.generation_checks:
                raise BudgetExceeded(
                    f"more than {budget.generation_checks} generation checks",
                    {"pairs_so_far": str(pairs), "orbits_so_far": str(orbits - 1)},
                )
            if cent is None:
                cent = centralizer(g, x0, budget, class_size=c1.size)
            y = Permutation.trusted(row)
            members: Set[bytes] = set()
            for _ in iter_class_members(cent, y, budget, seen=members):
                pass
            counted |= members
            pairs += len(members)
            if _pair_generates(g, x0, y, target, reach):
                generating += len(members)

    all_generate = generating == pairs
    census = TripleCensus(
        pair_count=pairs,
        generating_pair_count=generating,
        centralizer_order=centralizer_order,
        orbit_count=Fraction(pairs, centralizer_order) if all_generate else None,
        generating_orbit_count=Fraction(generating, centralizer_order),
        all_generate=all_generate,
        pair_orbits=orbits,
        combinations=1,
    )
    logger.debug("census %s|%s|%s: %d pairs in %d orbits, %d generating, |C(x0)|=%d",
                 c1.ctype, c2.ctype, c3.ctype, pairs, orbits, generating, centralizer_order)
    return census


def count_triples_by_types(g: PermGroup, t1: CycleType, t2: CycleType, t3: CycleType,
                           table: ClassTable, budget: Budget) -> TripleCensus:
    """Sum of class censuses over every class combination with these cycle types."""
    if not table.complete:
        raise IncompleteTableError(
            f"class table covers {table.total_size} of {table.group_order} elements")
    total = TripleCensus()
    for i in table.with_type(t1):
        for j in table.with_type(t2):
            for k in table.with_type(t3):
                c = table.classes
                total = total + count_class_triples(g, c[i], c[j], c[k], budget)
    return total


# ============================================================
# NICE-TRIPLE SCAN
# ============================================================


@dataclass(frozen=True)
class GroupMetadata:
    is_almost_simple: bool
    is_sym_or_alt: bool


@dataclass
class NiceTriple:
    classes: Tuple[int, int, int]
    types: Tuple[CycleType, CycleType, CycleType]
    census: TripleCensus
    orderings: int

    def to_dict(self) -> dict:
        return {
            "classes": [str(i) for i in self.classes],
            "types": [str(t) for t in self.types],
            "orderings": str(self.orderings),
            "census": self.census.to_dict(),
        }


@dataclass
class ScanResult:
    triples: List[NiceTriple] = field(default_factory=list)
    excluded: str = ""

    @property
    def count(self) -> int:
        return len(self.triples)

    @property
    def ordered_count(self) -> int:
        return sum(t.orderings for t in self.triples)


def _orderings(idx: Tuple[int, int, int]) -> int:
    distinct = len(set(idx))
    return {3: 6, 2: 3, 1: 1}[distinct]


def scan_nice_triples(g: PermGroup, meta: Optional[GroupMetadata],
                      table: Optional[ClassTable], budget: Budget) -> ScanResult:
    """Every rigid, rational, genus-0 generating class triple of g.

    Each multiset of classes is evaluated once: the six orderings of a class
    triple are in bijection ((x, y, z) -> (y, z, x) and (x, y, z) ->
    (y, x, x^-1 z x)), so they share one census. The result carries both the
    unordered count and the number of ordered class triples.
    """
    if meta is None:
        raise ValueError("group metadata (almost simple, symmetric/alternating) is required")
    if meta.is_sym_or_alt:
        return ScanResult(excluded="symmetric or alternating group")
    if not meta.is_almost_simple:
        return ScanResult(excluded="not almost simple")
    if not is_primitive(g):
        return ScanResult(excluded="imprimitive")
    if table is None:
        table = all_classes(g, budget)
    if not table.complete:
        raise IncompleteTableError(
            f"class table covers {table.total_size} of {table.group_order} elements")

    n = g.degree
    rational = [i for i, c in enumerate(table.classes)
                if c.ctype.index > 0 and table.is_rational(i)]
    logger.info("scan: %d classes, %d nontrivial rational", len(table.classes), len(rational))

    result = ScanResult()
    for combo in combinations_with_replacement(rational, 3):
        cs = [table.classes[i] for i in combo]
        if sum(c.ctype.index for c in cs) != 2 * n - 2:
            continue
        census = count_class_triples(g, cs[0], cs[1], cs[2], budget)
        if census.is_rigid:
            result.triples.append(NiceTriple(
                classes=combo,
                types=tuple(c.ctype for c in cs),
                census=census,
                orderings=_orderings(combo),
            ))
            logger.info("nice triple %s", " | ".join(str(c.ctype) for c in cs))
    return result
