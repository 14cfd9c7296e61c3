"""
Permutation arithmetic, cycle types and ramification indices.

Points are 0-based internally and 1-based in all text I/O. Composition applies
the left factor first: ``compose(a, b)`` maps i to b(a(i)), so ``a * b`` reads
left to right like the printed products xy of the datasets.
"""

import hashlib
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .errors import CycleNotationError, DegreeMismatchError

FINGERPRINT_BYTES = 16


class Permutation:
    """An immutable bijection of {0, ..., n-1} stored as an image table."""

    __slots__ = ("_images", "_bytes")

    def __init__(self, images: Iterable[int]):
        arr = np.array(list(images) if not isinstance(images, np.ndarray) else images, dtype=np.intp)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("a permutation needs a nonempty one-dimensional image table")
        seen = np.zeros(arr.size, dtype=bool)
        if arr.min() < 0 or arr.max() >= arr.size:
            raise ValueError("image table is not a permutation")
        seen[arr] = True
        if not seen.all():
            raise ValueError("image table is not a permutation")
        self._set(arr)

    def _set(self, arr: np.ndarray) -> None:
        arr.setflags(write=False)
        self._images = arr
        self._bytes = None

    @classmethod
    def trusted(cls, arr: np.ndarray) -> "Permutation":
        """Wrap an image table known to be a bijection (no validation, no copy)."""
        p = cls.__new__(cls)
        p._set(np.ascontiguousarray(arr, dtype=np.intp))
        return p

    @property
    def images(self) -> np.ndarray:
        return self._images

    @property
    def degree(self) -> int:
        return int(self._images.size)

    def image_bytes(self) -> bytes:
        """Image table as little-endian uint16 bytes (the fingerprinted form)."""
        if self._bytes is None:
            self._bytes = self._images.astype("<u2").tobytes()
        return self._bytes

    def fingerprint(self) -> bytes:
        return fingerprint_bytes(self.image_bytes())

    def __call__(self, point: int) -> int:
        return int(self._images[point])

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return inverse(self)

    def __pow__(self, k: int) -> "Permutation":
        return power(self, k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.degree == other.degree and bool(np.array_equal(self._images, other._images))

    def __hash__(self) -> int:
        return hash(self.image_bytes())

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, n={self.degree})"


@dataclass(frozen=True)
class CycleType:
    """Multiset of cycle lengths (fixed points included), stored descending."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise ValueError(f"cycle lengths must be positive: {self.parts}")
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def cycle_count(self) -> int:
        return len(self.parts)

    @property
    def index(self) -> int:
        """Ramification index n - (number of cycles)."""
        return self.n - len(self.parts)

    @property
    def is_even(self) -> bool:
        return sum(p - 1 for p in self.parts) % 2 == 0

    def counts(self) -> Dict[int, int]:
        return dict(Counter(self.parts))

    def __str__(self) -> str:
        counts = Counter(self.parts)
        return ".".join(f"{length}^{counts[length]}" for length in sorted(counts, reverse=True))


_TYPE_TERM_RE = re.compile(r"^\s*(\d+)\s*(?:\^\s*\{?\s*(\d+)\s*\}?)?\s*$")


def parse_cycle_type(text: str) -> CycleType:
    """Parse the ``8^5.4^3`` notation (``^1`` may be omitted)."""
    parts: List[int] = []
    for term in text.strip().split("."):
        m = _TYPE_TERM_RE.match(term)
        if not m:
            raise CycleNotationError(f"malformed cycle type term {term!r} in {text!r}")
        length, count = int(m.group(1)), int(m.group(2) or 1)
        if length < 1 or count < 1:
            raise CycleNotationError(f"cycle type terms must be positive: {term!r}")
        parts.extend([length] * count)
    return CycleType(tuple(parts))


# ============================================================
# CONSTRUCTION AND I/O
# ============================================================

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def identity(n: int) -> Permutation:
    if n < 1:
        raise ValueError("degree must be at least 1")
    return Permutation.trusted(np.arange(n, dtype=np.intp))


def parse_permutation(text: str, n: int) -> Permutation:
    """Parse a product of disjoint cycles over 1..n; absent points are fixed.

    Raises:
        CycleNotationError: malformed parentheses or commas, a point outside
            1..n, or a point repeated across cycles.
    """
    if n < 1:
        raise CycleNotationError("degree must be at least 1")
    images = np.arange(n, dtype=np.intp)
    used = set()
    pos = 0
    stripped = text.strip()
    for m in _CYCLE_RE.finditer(stripped):
        gap = stripped[pos:m.start()]
        if gap.strip():
            raise CycleNotationError(f"unexpected text {gap.strip()!r}", pos)
        pos = m.end()
        body = m.group(1)
        fields = [f.strip() for f in body.split(",")]
        if len(fields) < 2 or any(not f.isdigit() for f in fields):
            raise CycleNotationError(f"malformed cycle ({body})", m.start())
        cycle = [int(f) for f in fields]
        for point in cycle:
            if point < 1 or point > n:
                raise CycleNotationError(f"point {point} outside 1..{n}", m.start())
            if point in used:
                raise CycleNotationError(f"point {point} repeated", m.start())
            used.add(point)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a - 1] = b - 1
    tail = stripped[pos:]
    if tail.strip():
        raise CycleNotationError(f"unexpected text {tail.strip()!r}", pos)
    return Permutation.trusted(images)


def cycles(a: Permutation, include_fixed: bool = False) -> List[List[int]]:
    """Disjoint cycles of a (0-based), each starting at its least point."""
    img = a.images.tolist()
    seen = [False] * len(img)
    out = []
    for start in range(len(img)):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        j = img[start]
        while j != start:
            seen[j] = True
            cycle.append(j)
            j = img[j]
        if len(cycle) > 1 or include_fixed:
            out.append(cycle)
    return out


def format_cycles(a: Permutation) -> str:
    """Canonical 1-based cycle notation; the identity prints as ``""``."""
    return "".join("(" + ", ".join(str(p + 1) for p in c) + ")" for c in cycles(a))


# ============================================================
# ARITHMETIC
# ============================================================


def _check_degrees(a: Permutation, b: Permutation) -> None:
    if a.degree != b.degree:
        raise DegreeMismatchError(f"degrees differ: {a.degree} != {b.degree}")


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Apply a first, then b."""
    _check_degrees(a, b)
    return Permutation.trusted(b.images[a.images])


def inverse(a: Permutation) -> Permutation:
    inv = np.empty_like(a.images)
    inv[a.images] = np.arange(a.degree, dtype=np.intp)
    return Permutation.trusted(inv)


def conjugate(a: Permutation, g: Permutation) -> Permutation:
    """g^-1 a g, i.e. i -> g(a(g^-1(i)))."""
    _check_degrees(a, g)
    ginv = inverse(g).images
    return Permutation.trusted(g.images[a.images[ginv]])


def power(a: Permutation, k: int) -> Permutation:
    if k < 0:
        return power(inverse(a), -k)
    result = np.arange(a.degree, dtype=np.intp)
    base = a.images
    while k:
        if k & 1:
            result = base[result]
        base = base[base]
        k >>= 1
    return Permutation.trusted(result)


def is_identity(a: Permutation) -> bool:
    return bool(np.array_equal(a.images, np.arange(a.degree)))


def cycle_type(a: Permutation) -> CycleType:
    return CycleType(tuple(len(c) for c in cycles(a, include_fixed=True)))


def ramification_index(a: Permutation) -> int:
    """n minus the number of cycles (fixed points counted); 0 iff a = 1."""
    return a.degree - len(cycles(a, include_fixed=True))


def element_order(a: Permutation) -> int:
    return math.lcm(*(len(c) for c in cycles(a, include_fixed=True)))


def sign(a: Permutation) -> int:
    return 1 if cycle_type(a).is_even else -1


# ============================================================
# FINGERPRINTS
# ============================================================


def fingerprint_bytes(image_bytes: bytes) -> bytes:
    """128-bit fingerprint of a uint16 image table."""
    return hashlib.blake2b(image_bytes, digest_size=FINGERPRINT_BYTES).digest()


def fingerprint_rows(rows: np.ndarray) -> List[bytes]:
    """Fingerprints of every row of a 2-D array of image tables."""
    if rows.shape[0] == 0:
        return []
    width = rows.shape[1] * 2
    buf = np.ascontiguousarray(rows, dtype="<u2").tobytes()
    blake2b = hashlib.blake2b
    return [
        blake2b(buf[i:i + width], digest_size=FINGERPRINT_BYTES).digest()
        for i in range(0, len(buf), width)
    ]


def fixed_point_counts(rows: np.ndarray, exponent: int = 1) -> np.ndarray:
    """Number of fixed points of row^exponent for every row (vectorized)."""
    n = rows.shape[1]
    current = rows
    for _ in range(exponent - 1):
        current = np.take_along_axis(rows, current, axis=1)
    return (current == np.arange(n)).sum(axis=1)


def type_fixed_points(t: CycleType, exponent: int = 1) -> int:
    """Fixed points of a^exponent for any a of cycle type t."""
    return sum(p for p in t.parts if exponent % p == 0)


def invert_rows(rows: np.ndarray) -> np.ndarray:
    inv = np.empty_like(rows)
    np.put_along_axis(inv, rows, np.broadcast_to(np.arange(rows.shape[1]), rows.shape), axis=1)
    return inv


def stack(perms: Sequence[Permutation]) -> np.ndarray:
    return np.stack([p.images for p in perms])
