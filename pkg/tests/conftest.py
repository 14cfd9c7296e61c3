"""Shared fixtures and brute-force oracles for the belyicert test suite."""

import itertools
from functools import lru_cache
from pathlib import Path
from typing import FrozenSet, List, Optional, Sequence, Set, Tuple

import pytest

from belyicert.bsgs import PermGroup, build_group
from belyicert.budget import Budget
from belyicert.fixtures import Fixture, load_fixture
from belyicert.permcore import Permutation, parse_permutation

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"
FIXTURE_NAMES = sorted(p.stem for p in FIXTURE_DIR.glob("*.ini"))

Images = Tuple[int, ...]


def perm(text: str, n: int) -> Permutation:
    return parse_permutation(text, n)


@lru_cache(maxsize=None)
def dataset(name: str) -> Fixture:
    return load_fixture(FIXTURE_DIR / f"{name}.ini")


@lru_cache(maxsize=None)
def dataset_group(name: str) -> PermGroup:
    f = dataset(name)
    return build_group([f.x, f.y])


def symmetric(n: int) -> PermGroup:
    if n == 2:
        return build_group([perm("(1,2)", 2)])
    cycle = "(" + ",".join(str(i) for i in range(1, n + 1)) + ")"
    return build_group([perm("(1,2)", n), perm(cycle, n)])


# ============================================================
# BRUTE-FORCE ORACLES
# ============================================================


def _mul(a: Images, b: Images) -> Images:
    return tuple(b[i] for i in a)


def _inv(a: Images) -> Images:
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def _closure(tables: Sequence[Images], limit: int) -> Optional[Set[Images]]:
    start = tuple(range(len(tables[0])))
    seen = {start}
    queue = [start]
    for a in queue:
        for t in tables:
            b = _mul(a, t)
            if b not in seen:
                if len(seen) >= limit:
                    return None
                seen.add(b)
                queue.append(b)
    return seen


def brute_closure(gens: Sequence[Permutation], limit: int = 5000) -> Optional[Set[Images]]:
    """All elements of <gens> as image tuples, or None past ``limit``."""
    return _closure([tuple(int(v) for v in g.images) for g in gens], limit)


def brute_classes(elements: Set[Images]) -> List[FrozenSet[Images]]:
    remaining = set(elements)
    out = []
    while remaining:
        a = next(iter(remaining))
        cls = frozenset(_mul(_mul(_inv(g), a), g) for g in elements)
        out.append(cls)
        remaining -= cls
    return out


def brute_is_primitive(elements: Set[Images], n: int) -> bool:
    """Search every candidate block through point 0."""
    for d in range(2, n):
        if n % d:
            continue
        for rest in itertools.combinations(range(1, n), d - 1):
            block = frozenset((0,) + rest)
            if all(
                (img := frozenset(g[p] for p in block)) == block or not (img & block)
                for g in elements
            ):
                return False
    return True


def brute_pair_count(elements: Set[Images], x0: Images, c2: FrozenSet[Images],
                     c3: FrozenSet[Images]) -> int:
    return sum(1 for y in c2 if _inv(_mul(x0, y)) in c3)


def brute_generating_pair_count(elements: Set[Images], x0: Images, c2: FrozenSet[Images],
                                c3: FrozenSet[Images]) -> int:
    """Counted pairs (x0, y) whose closure is the whole group."""
    total = len(elements)
    return sum(
        1 for y in c2
        if _inv(_mul(x0, y)) in c3 and len(_closure([x0, y], total + 1)) == total
    )


def as_images(a: Permutation) -> Images:
    return tuple(int(v) for v in a.images)


# ============================================================
# PYTEST FIXTURES
# ============================================================


@pytest.fixture
def budget() -> Budget:
    return Budget(class_size=2_000_000, class_seconds=300.0, table_order=4_000_000,
                  generation_checks=100_000, seed=1)


@pytest.fixture
def tiny_budget() -> Budget:
    return Budget(class_size=2, class_seconds=300.0, table_order=100, seed=1)


S3_FIXTURE = """\
[fixture]
name = s3_cubic
group = S3
degree = 3
order = 6

[triple]
x = (1, 2)
y = (2, 3)

[claims]
type_x = 2^1.1^1
type_y = 2^1.1^1
type_z = 3^1
subdegrees = 1, 2
divisibility = certified_primitive

[belyi]
p = -1 * (X)^2 * (2X - 3)
q = 1

[metadata]
is_almost_simple = false
is_sym_or_alt = true
"""


@pytest.fixture
def write_fixture(tmp_path):
    """Write INI text to a temporary fixture file and return its path."""

    def _write(text: str, name: str = "case.ini") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def s3_fixture_path(write_fixture) -> Path:
    return write_fixture(S3_FIXTURE, "s3_cubic.ini")
