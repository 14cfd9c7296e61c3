"""
Conjugacy classes by orbit closure.

A class is enumerated breadth-first under conjugation by the group generators,
a frontier chunk at a time with numpy. Members are kept as 128-bit
fingerprints; one fingerprint in ``Budget.sample_every`` also keeps its full
image table so that a fingerprint collision is detected instead of silently
shrinking a class.

Answers about existence, conjugacy and rationality are tri-state. "no" is only
ever produced from a complete enumeration (or a parity or cycle-type
obstruction); running out of budget yields "unknown".
"""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Dict, Iterator, List, Optional, Set, Tuple

import numpy as np
from sympy import primefactors

from .bsgs import PermGroup, build_group, contains, is_even_group, order, random_element
from .budget import Budget, BudgetGuard
from .errors import (
    BudgetExceeded,
    DegreeMismatchError,
    FingerprintCollisionError,
    NotInGroupError,
)
from .permcore import (
    CycleType,
    Permutation,
    compose,
    conjugate,
    cycle_type,
    element_order,
    fingerprint_rows,
    identity,
    inverse,
    is_identity,
    power,
)

logger = logging.getLogger(__name__)

CHUNK_ROWS = 8192
SEARCH_ATTEMPTS = 2000


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def power_fingerprint(rep: Permutation) -> Dict[int, CycleType]:
    """Cycle types of rep^q for every prime power q properly dividing the order."""
    m = element_order(rep)
    out = {}
    for p in primefactors(m):
        q = p
        while m % q == 0 and q < m:
            out[q] = cycle_type(power(rep, q))
            q *= p
    return out


def _class_key(ctype: CycleType, pfp: Dict[int, CycleType]) -> Tuple:
    return (ctype.parts, tuple(sorted((q, t.parts) for q, t in pfp.items())))


@dataclass
class ConjugacyClass:
    representative: Permutation
    size: int
    ctype: CycleType
    power_fingerprint: Dict[int, CycleType]
    members: Optional[Set[bytes]] = field(default=None, repr=False)

    @property
    def key(self) -> Tuple:
        return _class_key(self.ctype, self.power_fingerprint)

    def __contains__(self, a: Permutation) -> bool:
        if self.members is None:
            raise ValueError("class members were not stored")
        return a.fingerprint() in self.members


# ============================================================
# ORBIT CLOSURE
# ============================================================


def _sampled(fp: bytes, every: int) -> bool:
    return every <= 1 or int.from_bytes(fp[:4], "little") % every == 0


def iter_class_members(g: PermGroup, rep: Permutation, budget: Budget,
                       seen: Optional[Set[bytes]] = None,
                       guard: Optional[BudgetGuard] = None) -> Iterator[np.ndarray]:
    """Stream the conjugacy class of rep as chunks of image-table rows.

    Every member appears in exactly one chunk. ``seen`` receives the member
    fingerprints (pass a set to keep them).

    Raises:
        BudgetExceeded: the class outgrew ``budget.class_size`` or the time or
            memory budget ran out.
        FingerprintCollisionError: two distinct members share a fingerprint.
    """
    if seen is None:
        seen = set()
    guard = guard or BudgetGuard(budget, "class enumeration")
    every = budget.sample_every
    samples: Dict[bytes, bytes] = {}
    conjugators = [(s.images, inverse(s).images) for s in g.generators]

    first = rep.images[None, :].copy()
    fp = rep.fingerprint()
    seen.add(fp)
    if _sampled(fp, every):
        samples[fp] = rep.image_bytes()
    yield first

    frontier = first
    while frontier.shape[0]:
        fresh = []
        for start in range(0, frontier.shape[0], CHUNK_ROWS):
            block = frontier[start:start + CHUNK_ROWS]
            for s_img, s_inv in conjugators:
                cand = s_img[block[:, s_inv]]
                keep = []
                for idx, f in enumerate(fingerprint_rows(cand)):
                    if f in seen:
                        ref = samples.get(f)
                        if ref is not None and ref != cand[idx].astype("<u2").tobytes():
                            raise FingerprintCollisionError(
                                f"fingerprint collision after {len(seen)} members")
                        continue
                    seen.add(f)
                    if _sampled(f, every):
                        samples[f] = cand[idx].astype("<u2").tobytes()
                    keep.append(idx)
                if keep:
                    rows = cand[keep]
                    fresh.append(rows)
                    yield rows
                guard.require_size(len(seen))
                guard.tick(block.shape[0], size_at_abort=str(len(seen)))
        frontier = np.concatenate(fresh) if fresh else np.empty((0, g.degree), dtype=np.intp)


def class_orbit(g: PermGroup, rep: Permutation, budget: Budget,
                keep_members: bool = True) -> ConjugacyClass:
    """Enumerate the class of rep to closure and return it with its exact size."""
    if not contains(g, rep):
        raise NotInGroupError("representative is not in the group")
    guard = BudgetGuard(budget, f"class of {cycle_type(rep)}")
    seen: Set[bytes] = set()
    for _ in iter_class_members(g, rep, budget, seen=seen, guard=guard):
        pass
    size = len(seen)
    logger.debug("class %s: %d members in %.2fs", cycle_type(rep), size, guard.elapsed)
    return ConjugacyClass(
        representative=rep,
        size=size,
        ctype=cycle_type(rep),
        power_fingerprint=power_fingerprint(rep),
        members=seen if keep_members else None,
    )


def centralizer(g: PermGroup, a: Permutation, budget: Budget,
                class_size: Optional[int] = None) -> PermGroup:
    """C_G(a) from Schreier generators of the conjugation action on the class of a.

    The class is walked breadth-first with a transversal t_m (m = t_m^-1 a t_m);
    every non-tree edge m -s-> m' contributes t_m s t_m'^-1. Given the class
    size, the walk stops as soon as the subgroup reaches |G| / class_size.

    Raises:
        NotInGroupError: a is not in g.
        BudgetExceeded: the class outgrew the budget before the order was reached.
    """
    if not contains(g, a):
        raise NotInGroupError("element is not in the group")
    target = order(g) // class_size if class_size else None
    cent = build_group([a], seed=g.seed, presift=g.presift)
    if target is not None and order(cent) == target:
        return cent

    guard = BudgetGuard(budget, f"centralizer of {cycle_type(a)}")
    root = identity(g.degree)
    transversal: Dict[bytes, Permutation] = {a.fingerprint(): root}
    queue = [(a, root)]
    for member, t in queue:
        for s in g.generators:
            image = conjugate(member, s)
            ts = compose(t, s)
            fp = image.fingerprint()
            u = transversal.get(fp)
            if u is None:
                transversal[fp] = ts
                queue.append((image, ts))
                guard.require_size(len(transversal))
                guard.tick()
                continue
            h = compose(ts, inverse(u))
            if is_identity(h) or contains(cent, h):
                continue
            cent = build_group(cent.generators + [h], known_order=target,
                               seed=g.seed, presift=g.presift)
            if target is not None and order(cent) == target:
                logger.debug("centralizer of order %d after %d class members",
                             target, len(transversal))
                return cent
    return cent


# ============================================================
# CLASS TABLES
# ============================================================


@dataclass
class ClassTable:
    group_order: int
    classes: List[ConjugacyClass] = field(default_factory=list)
    complete: bool = False
    reason: str = ""

    def __post_init__(self):
        self._by_key: Dict[Tuple, List[int]] = {}
        for i, c in enumerate(self.classes):
            self._by_key.setdefault(c.key, []).append(i)

    def add(self, cls: ConjugacyClass) -> int:
        self.classes.append(cls)
        idx = len(self.classes) - 1
        self._by_key.setdefault(cls.key, []).append(idx)
        self.complete = self.total_size == self.group_order
        return idx

    @property
    def total_size(self) -> int:
        return sum(c.size for c in self.classes)

    def locate(self, a: Permutation) -> Optional[int]:
        """Index of the class containing a, or None if it is not in the table."""
        candidates = self._by_key.get(_class_key(cycle_type(a), power_fingerprint(a)), [])
        if self.complete and len(candidates) == 1:
            return candidates[0]
        fp = a.fingerprint()
        for i in candidates:
            members = self.classes[i].members
            if members is not None and fp in members:
                return i
        return None

    def with_type(self, t: CycleType) -> List[int]:
        return [i for i, c in enumerate(self.classes) if c.ctype == t]

    def is_rational(self, idx: int) -> bool:
        """Rationality read off a complete table: every generating power stays in the class."""
        if not self.complete:
            raise ValueError("rationality from a table needs a complete table")
        rep = self.classes[idx].representative
        m = element_order(rep)
        return all(self.locate(power(rep, k)) == idx
                   for k in range(2, m) if gcd(k, m) == 1)


def all_classes(g: PermGroup, budget: Budget) -> ClassTable:
    """Discover every class by sampling uniform random elements.

    Powers of every new representative are tried too, which finds the small
    classes of elements of prime order quickly. The table is complete exactly
    when the class sizes add up to the group order; on budget exhaustion the
    partial table is returned with ``complete`` False and a reason.
    """
    n_order = order(g)
    table = ClassTable(group_order=n_order)
    if n_order > budget.table_order:
        table.reason = f"group order {n_order} exceeds the table budget {budget.table_order}"
        logger.info("class table skipped: %s", table.reason)
        return table

    rng = random.Random(budget.seed)
    guard = BudgetGuard(budget, "class table", stride=64)
    table.add(class_orbit(g, identity(g.degree), budget))
    samples = 0
    try:
        while not table.complete:
            samples += 1
            guard.tick(samples=str(samples), classes=str(len(table.classes)))
            pending = [random_element(g, rng)]
            while pending:
                a = pending.pop()
                if table.locate(a) is not None:
                    continue
                table.add(class_orbit(g, a, budget))
                m = element_order(a)
                pending.extend(power(a, p) for p in primefactors(m) if p < m)
    except BudgetExceeded as e:
        table.reason = str(e)
        logger.info("class table incomplete: %s", e)
        return table
    logger.info("class table: %d classes, %d random samples", len(table.classes), samples)
    return table


# ============================================================
# QUERIES
# ============================================================


def is_conjugate(g: PermGroup, a: Permutation, b: Permutation, budget: Budget,
                 table: Optional[ClassTable] = None) -> Verdict:
    if a.degree != b.degree:
        raise DegreeMismatchError(f"degrees differ: {a.degree} != {b.degree}")
    if cycle_type(a) != cycle_type(b) or power_fingerprint(a) != power_fingerprint(b):
        return Verdict.NO
    if a == b:
        return Verdict.YES
    if table is not None:
        ia, ib = table.locate(a), table.locate(b)
        if ia is not None and ib is not None:
            return Verdict.YES if ia == ib else Verdict.NO
    try:
        cls = class_orbit(g, a, budget)
    except BudgetExceeded as e:
        logger.info("conjugacy undecided: %s", e)
        return Verdict.UNKNOWN
    return Verdict.YES if b in cls else Verdict.NO


def is_rational_class(g: PermGroup, rep: Permutation, budget: Budget,
                      cls: Optional[ConjugacyClass] = None) -> Verdict:
    """Is rep conjugate to rep^k for every k coprime to its order?"""
    m = element_order(rep)
    exponents = [k for k in range(2, m) if gcd(k, m) == 1]
    if not exponents:
        return Verdict.YES
    powers = [power(rep, k) for k in exponents]
    if cls is None or cls.members is None:
        try:
            cls = class_orbit(g, rep, budget)
        except BudgetExceeded as e:
            logger.info("rationality undecided: %s", e)
            return Verdict.UNKNOWN
    return Verdict.YES if all(p in cls for p in powers) else Verdict.NO


def exists_cycle_type(g: PermGroup, t: CycleType, budget: Budget,
                      table: Optional[ClassTable] = None) -> Verdict:
    """Does g contain an element of cycle type t?

    "yes" needs a witness, "no" a complete class table or a parity
    obstruction; everything else is "unknown".
    """
    if t.n != g.degree:
        raise DegreeMismatchError(f"cycle type of {t.n} points in a group of degree {g.degree}")
    if t.index == 0:
        return Verdict.YES
    if not t.is_even and is_even_group(g):
        return Verdict.NO
    if table is not None and table.with_type(t):
        return Verdict.YES
    if table is not None and table.complete:
        return Verdict.NO

    rng = random.Random(budget.seed)
    for _ in range(SEARCH_ATTEMPTS):
        if cycle_type(random_element(g, rng)) == t:
            return Verdict.YES

    if table is None:
        table = all_classes(g, budget)
    if not table.complete:
        return Verdict.UNKNOWN
    return Verdict.YES if table.with_type(t) else Verdict.NO
