"""
Fixture files: one Belyi map and its monodromy triple per INI file.

    [fixture]   name, group, degree, order (optional), provenance
    [triple]    x, y in 1-based cycle notation (may span lines)
    [claims]    type_x, type_y, type_z, subdegrees, divisibility,
                excluded_from_derived (members whose cycle type the derived
                subgroup must lack)
    [belyi]     two or three of p, q, r as factored polynomials
    [metadata]  is_almost_simple, is_sym_or_alt
    [budget]    optional per-fixture budget overrides
"""

import configparser
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import FixtureError, ParseError
from .permcore import CycleType, Permutation, parse_cycle_type, parse_permutation
from .polyarith import FactoredPolynomial, parse_factored
from .triples import DivisibilityVerdict, GroupMetadata

logger = logging.getLogger(__name__)

_BUDGET_KEYS = {
    "class_size": int,
    "class_seconds": float,
    "table_order": int,
    "max_rss_mb": int,
    "generation_checks": int,
}


@dataclass
class Fixture:
    path: Path
    name: str
    group: str
    degree: int
    x: Permutation
    y: Permutation
    order: Optional[int] = None
    provenance: str = ""
    type_x: Optional[CycleType] = None
    type_y: Optional[CycleType] = None
    type_z: Optional[CycleType] = None
    subdegrees: Optional[List[int]] = None
    divisibility: Optional[DivisibilityVerdict] = None
    excluded_from_derived: Tuple[str, ...] = ()
    polys: Dict[str, FactoredPolynomial] = field(default_factory=dict)
    metadata: Optional[GroupMetadata] = None
    budget_overrides: Dict[str, object] = field(default_factory=dict)

    @property
    def claimed_types(self) -> Tuple[Optional[CycleType], ...]:
        return self.type_x, self.type_y, self.type_z


def _get(cp: configparser.ConfigParser, section: str, key: str,
         required: bool = False) -> Optional[str]:
    if cp.has_option(section, key):
        return cp.get(section, key).strip()
    if required:
        raise FixtureError(f"missing [{section}] {key}")
    return None


def _int(text: Optional[str], what: str) -> Optional[int]:
    if text is None or text == "":
        return None
    try:
        return int(text.replace("_", ""))
    except ValueError:
        raise FixtureError(f"{what} is not an integer: {text!r}") from None


def _bool(cp: configparser.ConfigParser, section: str, key: str) -> bool:
    try:
        return cp.getboolean(section, key)
    except (configparser.NoOptionError, ValueError) as e:
        raise FixtureError(f"[{section}] {key}: {e}") from None


def load_fixture(path) -> Fixture:
    """Read and parse one fixture file.

    Raises:
        FixtureError: missing sections or keys, malformed values.
        CycleNotationError / PolynomialSyntaxError: malformed data fields.
        OSError: the file cannot be read.
    """
    path = Path(path)
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=None)
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except configparser.Error as e:
        raise FixtureError(f"{path}: {e}") from None

    name = _get(cp, "fixture", "name") or path.stem
    degree = _int(_get(cp, "fixture", "degree", required=True), "degree")
    if degree is None or degree < 1:
        raise FixtureError(f"{path}: degree must be a positive integer")

    try:
        x = parse_permutation(_get(cp, "triple", "x", required=True), degree)
        y = parse_permutation(_get(cp, "triple", "y", required=True), degree)
    except ParseError as e:
        raise type(e)(f"{path}: {e}") from None

    fx = Fixture(
        path=path,
        name=name,
        group=_get(cp, "fixture", "group") or name,
        degree=degree,
        x=x,
        y=y,
        order=_int(_get(cp, "fixture", "order"), "order"),
        provenance=" ".join((_get(cp, "fixture", "provenance") or "").split()),
    )

    for attr in ("type_x", "type_y", "type_z"):
        text = _get(cp, "claims", attr)
        if text:
            setattr(fx, attr, parse_cycle_type(text))
    text = _get(cp, "claims", "subdegrees")
    if text:
        fx.subdegrees = [_int(v.strip(), "subdegree") for v in text.split(",")]
    text = _get(cp, "claims", "divisibility")
    if text:
        try:
            fx.divisibility = DivisibilityVerdict(text)
        except ValueError:
            raise FixtureError(f"{path}: unknown divisibility verdict {text!r}") from None
    text = _get(cp, "claims", "excluded_from_derived")
    if text:
        members = tuple(v.strip() for v in text.split(",") if v.strip())
        if any(m not in ("x", "y", "z") for m in members):
            raise FixtureError(f"{path}: excluded_from_derived names {members}")
        fx.excluded_from_derived = members

    if cp.has_section("belyi"):
        for key in ("p", "q", "r"):
            text = _get(cp, "belyi", key)
            if text:
                try:
                    fx.polys[key] = parse_factored(text)
                except ParseError as e:
                    raise type(e)(f"{path} [belyi] {key}: {e}") from None

    if cp.has_section("metadata"):
        fx.metadata = GroupMetadata(
            is_almost_simple=_bool(cp, "metadata", "is_almost_simple"),
            is_sym_or_alt=_bool(cp, "metadata", "is_sym_or_alt"),
        )

    if cp.has_section("budget"):
        for key, value in cp.items("budget"):
            cast = _BUDGET_KEYS.get(key)
            if cast is None:
                raise FixtureError(f"{path}: unknown budget key {key!r}")
            fx.budget_overrides[key] = cast(float(value)) if cast is int else cast(value)

    logger.debug("loaded fixture %s (degree %d, group %s)", fx.name, fx.degree, fx.group)
    return fx


def discover(paths: Iterable[str]) -> List[Path]:
    """Expand directories to the ``*.ini`` files they contain, sorted."""
    out: List[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(p.glob("*.ini")))
        else:
            out.append(p)
    return out
