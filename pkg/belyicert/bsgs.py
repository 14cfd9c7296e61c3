"""
Stabilizer chains (bases and strong generating sets) for permutation groups.

The chain is built by the deterministic incremental Schreier-Sims algorithm.
Random elements from a product-replacement generator may be sifted in first to
populate the chain quickly; the deterministic pass that follows (or reaching a
known upper bound on the order) certifies the result, so every order reported
here is exact.

Base points are chosen as the least moved point of the element that needs a
new level, which for transitive groups makes point 0 the first base point.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from .config import DEFAULT_RANDOM_PRESIFT
from .errors import (
    DegreeMismatchError,
    EmptyGeneratorsError,
    NotTransitiveError,
)
from .permcore import (
    Permutation,
    compose,
    conjugate,
    identity,
    inverse,
    is_identity,
    sign,
)

logger = logging.getLogger(__name__)


@dataclass
class ChainLevel:
    """One level of a stabilizer chain.

    ``transversal[b]`` is a pair (u, u^-1) with u(base_point) = b and u in the
    stabilizer of all earlier base points.
    """

    base_point: int
    generators: List[Permutation] = field(default_factory=list)
    transversal: Dict[int, Tuple[Permutation, Permutation]] = field(default_factory=dict)

    @property
    def orbit(self) -> List[int]:
        return list(self.transversal)

    def rebuild(self, n: int) -> None:
        root = identity(n)
        self.transversal = {self.base_point: (root, root)}
        queue = [self.base_point]
        for point in queue:
            u, _ = self.transversal[point]
            for s in self.generators:
                image = s(point)
                if image not in self.transversal:
                    v = compose(u, s)
                    self.transversal[image] = (v, inverse(v))
                    queue.append(image)


@dataclass
class StabilizerChain:
    degree: int
    levels: List[ChainLevel]

    @property
    def base(self) -> List[int]:
        return [lvl.base_point for lvl in self.levels]

    @property
    def strong_generators(self) -> List[Permutation]:
        return self.levels[0].generators if self.levels else []

    def order(self) -> int:
        result = 1
        for lvl in self.levels:
            result *= len(lvl.transversal)
        return result

    def strip(self, h: Permutation, start: int = 0) -> Tuple[Permutation, int]:
        """Sift h from level ``start``; return the residue and the level it stopped at."""
        for j in range(start, len(self.levels)):
            lvl = self.levels[j]
            b = h(lvl.base_point)
            entry = lvl.transversal.get(b)
            if entry is None:
                return h, j
            h = compose(h, entry[1])
        return h, len(self.levels)


class ProductReplacement:
    """Approximately uniform random elements of <gens> (the "rattle" variant)."""

    def __init__(self, gens: Sequence[Permutation], rng: random.Random,
                 extra_slots: int = 5, accus: int = 5, scramble: int = 30):
        n = gens[0].degree
        self.rng = rng
        self.reservoir = [identity(n)] * extra_slots + list(gens)
        self.accus = [identity(n)] * accus
        self.accu = 0
        for _ in range(max(scramble, 4 * len(gens))):
            self.sample()

    def sample(self) -> Permutation:
        rng = self.rng
        i = rng.randrange(1, len(self.reservoir))
        j = rng.randrange(1, len(self.reservoir))
        p = self.reservoir[i]
        if rng.randrange(2):
            p = inverse(p)
        self.reservoir[0] = c = compose(self.reservoir[0], p)
        if rng.randrange(2):
            c = inverse(c)
        self.reservoir[j] = q = compose(self.reservoir[j], c)
        if rng.randrange(2):
            q = inverse(q)
        self.accu = (self.accu + 1) % len(self.accus)
        self.accus[self.accu] = r = compose(self.accus[self.accu], q)
        return r


def _least_moved_point(p: Permutation) -> Optional[int]:
    moved = np.nonzero(p.images != np.arange(p.degree))[0]
    return int(moved[0]) if moved.size else None


class _ChainBuilder:
    def __init__(self, gens: Sequence[Permutation], base_prefix: Sequence[int]):
        self.n = gens[0].degree
        strong = [g for g in gens if not is_identity(g)]
        base = list(base_prefix)
        for g in strong:
            if all(g(b) == b for b in base):
                base.append(_least_moved_point(g))
        self.chain = StabilizerChain(self.n, [ChainLevel(b) for b in base])
        for i, lvl in enumerate(self.chain.levels):
            fixed = base[:i]
            lvl.generators = [g for g in strong if all(g(b) == b for b in fixed)]
            lvl.rebuild(self.n)

    def add_residue(self, h: Permutation, first: int, last: int) -> None:
        """Add h to levels first..last, opening a new level when last is past the end."""
        levels = self.chain.levels
        if last == len(levels):
            levels.append(ChainLevel(_least_moved_point(h)))
        for lvl in levels[first:last + 1]:
            lvl.generators.append(h)
            lvl.rebuild(self.n)

    def presift(self, gens: Sequence[Permutation], rng: random.Random, rounds: int,
                known_order: Optional[int]) -> bool:
        """Sift random elements; True if known_order was reached (chain certified)."""
        source = ProductReplacement(gens, rng)
        stationary = 0
        while stationary < rounds:
            if known_order is not None and self.chain.order() >= known_order:
                return True
            h, j = self.chain.strip(source.sample())
            if j < len(self.chain.levels) or not is_identity(h):
                self.add_residue(h, 0, j)
                stationary = 0
            else:
                stationary += 1
        return known_order is not None and self.chain.order() >= known_order

    def complete(self) -> None:
        """Deterministic Schreier-Sims: sift every Schreier generator bottom-up."""
        levels = self.chain.levels
        i = len(levels) - 1
        while i >= 0:
            jumped = False
            lvl = levels[i]
            for beta in lvl.orbit:
                u_beta = lvl.transversal[beta][0]
                for s in lvl.generators:
                    gamma = s(beta)
                    schreier = compose(compose(u_beta, s), lvl.transversal[gamma][1])
                    if is_identity(schreier):
                        continue
                    h, j = self.chain.strip(schreier, i + 1)
                    if j < len(levels) or not is_identity(h):
                        self.add_residue(h, i + 1, j)
                        i = j
                        jumped = True
                        break
                if jumped:
                    break
            if not jumped:
                i -= 1


class PermGroup:
    """G = <generators> with a lazily built stabilizer chain.

    Query operations never mutate the group after the chain exists, so a
    built group can be shared between readers.
    """

    def __init__(self, generators: Sequence[Permutation], known_order: Optional[int] = None,
                 seed: int = 1, presift: int = DEFAULT_RANDOM_PRESIFT):
        gens = list(generators)
        if not gens:
            raise EmptyGeneratorsError("a group needs at least one generator")
        n = gens[0].degree
        for g in gens:
            if g.degree != n:
                raise DegreeMismatchError(f"generator degrees differ: {g.degree} != {n}")
        self.generators = gens
        self.degree = n
        self.known_order = known_order
        self.seed = seed
        self.presift = presift
        self._chain: Optional[StabilizerChain] = None
        self._rooted: Optional[StabilizerChain] = None

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = build_chain(self.generators, known_order=self.known_order,
                                      seed=self.seed, presift=self.presift)
        return self._chain

    def rooted_chain(self) -> StabilizerChain:
        """A chain whose first base point is 0 (rebased when needed)."""
        if self._rooted is None:
            chain = self.chain
            if chain.base[:1] == [0]:
                self._rooted = chain
            else:
                self._rooted = build_chain(self.generators, base_prefix=(0,),
                                           known_order=chain.order(), seed=self.seed,
                                           presift=self.presift)
        return self._rooted

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"


def build_chain(gens: Sequence[Permutation], base_prefix: Sequence[int] = (),
                known_order: Optional[int] = None, seed: int = 1,
                presift: int = DEFAULT_RANDOM_PRESIFT) -> StabilizerChain:
    """Stabilizer chain of <gens>.

    Args:
        gens: Generators of equal degree.
        base_prefix: Points forced to the front of the base.
        known_order: An upper bound on |<gens>| (e.g. the order of a group
            containing it). Reaching it during presifting certifies the chain
            because partial orbit products are lower bounds on the order.
        seed: Seed of the product-replacement generator.
        presift: Random elements sifted without progress before switching to
            the deterministic pass; 0 disables presifting.
    """
    builder = _ChainBuilder(gens, base_prefix)
    if builder.chain.levels and (presift > 0 or known_order is not None):
        rounds = presift if presift > 0 else DEFAULT_RANDOM_PRESIFT
        if builder.presift(gens, random.Random(seed), rounds, known_order):
            logger.debug("chain certified by known order %d", known_order)
            return builder.chain
    builder.complete()
    logger.debug("chain base=%s orbits=%s", builder.chain.base,
                 [len(l.transversal) for l in builder.chain.levels])
    return builder.chain


# ============================================================
# GROUP OPERATIONS
# ============================================================


def build_group(gens: Sequence[Permutation], known_order: Optional[int] = None,
                seed: int = 1, presift: int = DEFAULT_RANDOM_PRESIFT) -> PermGroup:
    """Group generated by gens with its chain built eagerly."""
    g = PermGroup(gens, known_order=known_order, seed=seed, presift=presift)
    g.chain
    return g


def order(g: PermGroup) -> int:
    return g.chain.order()


def contains(g: PermGroup, a: Permutation) -> bool:
    if a.degree != g.degree:
        raise DegreeMismatchError(f"degrees differ: {a.degree} != {g.degree}")
    h, j = g.chain.strip(a)
    return j == len(g.chain.levels) and is_identity(h)


def orbit(g: PermGroup, point: int) -> List[int]:
    return orbit_of(g.generators, point)


def orbit_of(gens: Sequence[Permutation], point: int) -> List[int]:
    seen = {point}
    queue = [point]
    tables = [s.images for s in gens]
    for p in queue:
        for t in tables:
            q = int(t[p])
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return queue


def orbits_of(gens: Sequence[Permutation], n: int) -> List[List[int]]:
    seen: Set[int] = set()
    out = []
    for p in range(n):
        if p not in seen:
            orb = orbit_of(gens, p)
            seen.update(orb)
            out.append(orb)
    return out


def is_transitive(g: PermGroup) -> bool:
    return len(orbit(g, 0)) == g.degree


def stabilizer_orbits(g: PermGroup) -> List[List[int]]:
    """Orbits of the stabilizer of point 0 (the suborbits)."""
    if not is_transitive(g):
        raise NotTransitiveError("suborbits need a transitive group")
    chain = g.rooted_chain()
    stab_gens = chain.levels[1].generators if len(chain.levels) > 1 else []
    return orbits_of(stab_gens, g.degree)


def subdegrees(g: PermGroup) -> List[int]:
    """Orbit lengths of the point stabilizer, ascending; contains 1, sums to n."""
    return sorted(len(o) for o in stabilizer_orbits(g))


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> Optional[Tuple[int, int]]:
        """Merge the classes of x and y; return the two old roots if they differed."""
        x, y = self.find(x), self.find(y)
        if x == y:
            return None
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]
        return x, y

    def classes(self) -> List[List[int]]:
        out: Dict[int, List[int]] = {}
        for p in range(len(self.parent)):
            out.setdefault(self.find(p), []).append(p)
        return sorted(out.values())


def minimal_block(g: PermGroup, pair: Tuple[int, int]) -> List[List[int]]:
    """Finest G-invariant partition with both points of pair in one block."""
    alpha, omega = pair
    if alpha == omega:
        raise ValueError("minimal_block needs two distinct points")
    if not is_transitive(g):
        raise NotTransitiveError("block systems need a transitive group")
    uf = UnionFind(g.degree)
    tables = [s.images for s in g.generators]
    uf.union(alpha, omega)
    queue = [(alpha, omega)]
    for a, b in queue:
        for t in tables:
            merged = uf.union(int(t[a]), int(t[b]))
            if merged is not None:
                queue.append(merged)
    return uf.classes()


def is_primitive(g: PermGroup) -> bool:
    """No nontrivial block system.

    One point per nontrivial suborbit suffices: blocks through {0, w} and
    {0, w^h} for h fixing 0 are images of each other.
    """
    if not is_transitive(g):
        raise NotTransitiveError("primitivity needs a transitive group")
    if g.degree <= 2:
        return True
    for orb in stabilizer_orbits(g):
        if orb == [0]:
            continue
        if len(minimal_block(g, (0, orb[0]))) != 1:
            return False
    return True


def random_element(g: PermGroup, rng: random.Random) -> Permutation:
    """Uniformly random element: one random transversal element per level."""
    result = identity(g.degree)
    for lvl in reversed(g.chain.levels):
        u, _ = lvl.transversal[rng.choice(lvl.orbit)]
        result = compose(result, u)
    return result


def elements(g: PermGroup) -> Iterator[Permutation]:
    """Every element exactly once (only sensible for small groups)."""
    levels = g.chain.levels

    def walk(depth: int, acc: Permutation) -> Iterator[Permutation]:
        if depth < 0:
            yield acc
            return
        for u, _ in levels[depth].transversal.values():
            yield from walk(depth - 1, compose(acc, u))

    yield from walk(len(levels) - 1, identity(g.degree))


def is_even_group(g: PermGroup) -> bool:
    return all(sign(s) == 1 for s in g.generators)


def normal_closure(g: PermGroup, gens: Sequence[Permutation]) -> PermGroup:
    """Smallest normal subgroup of g containing gens."""
    members = [h for h in gens if not is_identity(h)]
    if not members:
        return build_group([identity(g.degree)])
    closure = build_group(members, seed=g.seed, presift=g.presift)
    queue = list(members)
    for h in queue:
        for s in g.generators:
            c = conjugate(h, s)
            if not contains(closure, c):
                members.append(c)
                queue.append(c)
                closure = build_group(members, seed=g.seed, presift=g.presift)
    return closure


def derived_subgroup(g: PermGroup) -> PermGroup:
    commutators = []
    for i, a in enumerate(g.generators):
        for b in g.generators[i + 1:]:
            commutators.append(compose(compose(inverse(a), inverse(b)), compose(a, b)))
    return normal_closure(g, commutators)
