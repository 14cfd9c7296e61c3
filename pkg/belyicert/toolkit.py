"""belyicert: unified entry point for verification and scans."""

import logging
from typing import Dict, Optional

from .belyi import (
    certify_three_branch_points,
    load_belyi,
    match_profile_to_triple,
    ramification_profile,
)
from .bsgs import (
    PermGroup,
    build_group,
    derived_subgroup,
    is_primitive,
    is_transitive,
    order,
    subdegrees,
)
from .budget import Budget, BudgetGuard, rss_mb
from .classes import (
    Verdict as Tristate,
    all_classes,
    class_orbit,
    exists_cycle_type,
    is_rational_class,
)
from .config import DEFAULT_RANDOM_PRESIFT, cfg_get, load_config
from .errors import (
    BudgetExceeded,
    CertifyError,
    IdentityMismatchError,
    IncompleteTableError,
    NotCoprimeError,
)
from .fixtures import Fixture
from .permcore import cycle_type
from .polyarith import format_polynomial
from .report import ScanReport, StepStatus, VerificationReport
from .triples import (
    close_triple,
    count_class_triples,
    count_triples_by_types,
    divisibility_primitivity,
    generates,
    genus,
    scan_nice_triples,
)

logger = logging.getLogger(__name__)


# ============================================================
# VERIFY PIPELINE
# ============================================================


def run_verify(fixture: Fixture, budget: Budget,
               presift: int = DEFAULT_RANDOM_PRESIFT) -> VerificationReport:
    """Run every certification step on one fixture.

    Computational failures become failed steps and budget exhaustion becomes a
    skipped step; nothing here raises for a well-formed fixture.
    """
    rep = VerificationReport(fixture.name, fixture.group, fixture.degree, budget.seed,
                             budget.to_dict())
    n = fixture.degree
    guard = BudgetGuard(budget, fixture.name)
    rep.passed("parse", degree=n, polynomials=sorted(fixture.polys))

    # ── Triple ──
    t = close_triple(fixture.x, fixture.y)
    rep.check("closure", t.is_closed(), z_type=str(cycle_type(t.z)))
    actual = t.cycle_types()
    mismatched = [name for name, claim, got in zip("xyz", fixture.claimed_types, actual)
                  if claim is not None and claim != got]
    rep.check("types", not mismatched,
              detail=f"differs for {', '.join(mismatched)}" if mismatched else "",
              x=str(actual[0]), y=str(actual[1]), z=str(actual[2]))
    try:
        g_val = genus(t)
        rep.check("genus", g_val == 0, genus=g_val)
    except CertifyError as e:
        rep.failed("genus", str(e))

    # ── Group ──
    group = build_group([fixture.x, fixture.y], seed=budget.seed, presift=presift)
    g_order = order(group)
    if fixture.order is not None:
        rep.check("order", g_order == fixture.order, order=g_order, claimed=fixture.order)
    else:
        rep.passed("order", order=g_order, base_length=len(group.chain.base))
    transitive = is_transitive(group)
    rep.check("transitivity", transitive)
    if transitive:
        _group_structure(rep, fixture, group)
    else:
        for name in ("subdegrees", "divisibility", "primitivity"):
            rep.failed(name, "group is not transitive")

    _classes_and_rigidity(rep, fixture, group, t, budget)
    _exclusion(rep, fixture, group, budget, presift)
    _belyi_steps(rep, fixture, t)

    guard.peak_rss_mb = max(guard.peak_rss_mb, rss_mb())
    rep.notes.append(f"group label {fixture.group!r} is consistent with the order, "
                     f"subdegree and primitivity evidence (not identified by name)")
    rigidity = rep.step("rigidity")
    if rigidity is not None and rigidity.status == StepStatus.PASS:
        rep.notes.append("rational rigidity holds, so the arithmetic and geometric "
                         "monodromy groups coincide")
    rep.budget["elapsed_seconds"] = f"{guard.elapsed:.1f}"
    rep.budget["peak_rss_mb"] = f"{guard.peak_rss_mb:.0f}"
    logger.info("%s: %s", fixture.name, rep.verdict.value)
    return rep


def _group_structure(rep: VerificationReport, fixture: Fixture, group: PermGroup) -> None:
    n = fixture.degree
    subs = subdegrees(group)
    if fixture.subdegrees is not None:
        rep.check("subdegrees", subs == sorted(fixture.subdegrees),
                  subdegrees=subs, claimed=sorted(fixture.subdegrees))
    else:
        rep.passed("subdegrees", subdegrees=subs)
    verdict = divisibility_primitivity(subs, n)
    if fixture.divisibility is not None:
        rep.check("divisibility", verdict == fixture.divisibility,
                  verdict=verdict.value, claimed=fixture.divisibility.value)
    else:
        rep.passed("divisibility", verdict=verdict.value)
    rep.check("primitivity", is_primitive(group))


def _classes_and_rigidity(rep: VerificationReport, fixture: Fixture, group: PermGroup,
                          t, budget: Budget) -> None:
    try:
        if not generates(group, t):
            rep.failed("generation")
        else:
            rep.passed("generation")
    except CertifyError as e:
        rep.failed("generation", str(e))

    classes = {}
    try:
        for name, a in (("x", t.x), ("y", t.y), ("z", t.z)):
            classes[name] = class_orbit(group, a, budget)
    except BudgetExceeded as e:
        rep.skipped("rationality", f"budget: {e}", **e.diagnostics)
        rep.skipped("rigidity", "budget: classes not enumerated")
    else:
        verdicts = {k: is_rational_class(group, c.representative, budget, cls=c)
                    for k, c in classes.items()}
        sizes = {k: c.size for k, c in classes.items()}
        if any(v == Tristate.NO for v in verdicts.values()):
            rep.failed("rationality", verdicts={k: v.value for k, v in verdicts.items()},
                       class_sizes=sizes)
        elif any(v == Tristate.UNKNOWN for v in verdicts.values()):
            rep.skipped("rationality", "budget", class_sizes=sizes)
        else:
            rep.passed("rationality", class_sizes=sizes)
        try:
            census = count_class_triples(group, classes["x"], classes["y"], classes["z"], budget)
        except BudgetExceeded as e:
            rep.skipped("rigidity", f"budget: {e}", **e.diagnostics)
        else:
            rep.check("rigidity", census.is_rigid, **census.to_dict())

    g_order = order(group)
    if g_order > budget.table_order:
        rep.skipped("uniqueness", f"budget: group order {g_order} exceeds the table budget")
        return
    table = all_classes(group, budget)
    if not table.complete:
        rep.skipped("uniqueness", f"budget: {table.reason}")
        return
    try:
        census = count_triples_by_types(group, *t.cycle_types(), table, budget)
    except (BudgetExceeded, IncompleteTableError) as e:
        rep.skipped("uniqueness", f"budget: {e}")
        return
    rep.check("uniqueness", census.generating_orbit_count == 1,
              classes=len(table.classes), **census.to_dict())


def _exclusion(rep: VerificationReport, fixture: Fixture, group: PermGroup,
               budget: Budget, presift: int) -> None:
    if not fixture.excluded_from_derived:
        return
    derived = derived_subgroup(group)
    d_order, g_order = order(derived), order(group)
    if d_order == g_order:
        rep.failed("exclusion", "the group is perfect; no proper derived subgroup",
                   derived_order=d_order)
        return
    members = {"x": fixture.x, "y": fixture.y, "z": close_triple(fixture.x, fixture.y).z}
    verdicts = {m: exists_cycle_type(derived, cycle_type(members[m]), budget)
                for m in fixture.excluded_from_derived}
    evidence = dict(derived_order=d_order, index=g_order // d_order,
                    verdicts={m: v.value for m, v in verdicts.items()})
    if any(v == Tristate.YES for v in verdicts.values()):
        rep.failed("exclusion", "the derived subgroup contains a claimed-absent cycle type",
                   **evidence)
    elif any(v == Tristate.UNKNOWN for v in verdicts.values()):
        rep.skipped("exclusion", "budget", **evidence)
    else:
        rep.passed("exclusion", **evidence)


def _belyi_steps(rep: VerificationReport, fixture: Fixture, t) -> None:
    if len(fixture.polys) < 2:
        for name in ("belyi_identity", "profile", "certificate", "profile_match"):
            rep.skipped(name, "no Belyi data in the fixture")
        return
    try:
        datum = load_belyi(fixture.degree, **fixture.polys)
    except IdentityMismatchError as e:
        rep.failed("belyi_identity", str(e).split(";")[0],
                   difference=format_polynomial(e.difference))
        return
    except NotCoprimeError as e:
        rep.passed("belyi_identity", supplied=sorted(fixture.polys))
        rep.failed("coprime", str(e))
        return
    except CertifyError as e:
        rep.failed("belyi_identity", str(e))
        return
    rep.passed("belyi_identity", supplied=list(datum.supplied), derived=datum.derived or "none")
    rep.passed("coprime")

    try:
        profile = ramification_profile(datum)
    except CertifyError as e:
        rep.failed("profile", str(e))
        return
    rep.passed("profile", **profile.to_dict())
    rep.check("certificate", certify_three_branch_points(profile, fixture.degree),
              ramification=sum(fixture.degree - len(ms.parts) for ms in profile.fibers().values()),
              required=2 * fixture.degree - 2)
    match = match_profile_to_triple(profile, t)
    detail = "several assignments fit" if match.ambiguous else ""
    rep.check("profile_match", match.ok, detail,
              assignment=match.assignments[0] if match.ok else {})


# ============================================================
# SCAN PIPELINE
# ============================================================


def run_scan(fixture: Fixture, budget: Budget,
             presift: int = DEFAULT_RANDOM_PRESIFT) -> ScanReport:
    """Nice class triples of the group generated by the fixture's x and y."""
    rep = ScanReport(fixture.name, fixture.group, fixture.degree, budget.seed)
    group = build_group([fixture.x, fixture.y], seed=budget.seed, presift=presift)
    rep.group_order = order(group)
    if fixture.metadata is None:
        rep.complete = False
        rep.error = "metadata (is_almost_simple, is_sym_or_alt) missing"
        return rep
    try:
        result = scan_nice_triples(group, fixture.metadata, None, budget)
    except (IncompleteTableError, BudgetExceeded) as e:
        rep.complete = False
        rep.error = str(e)
        return rep
    rep.excluded = result.excluded
    rep.triples = [nt.to_dict() for nt in result.triples]
    rep.ordered_count = result.ordered_count
    return rep


# ============================================================
# FACADE
# ============================================================


class Certifier:
    """Facade combining configuration, budgets and the two pipelines."""

    def __init__(self, config_path: Optional[str] = None, **overrides):
        """
        Args:
            config_path: JSON config file (see config.example.json).
            **overrides: Budget fields set on the command line; None values
                are ignored. They win over per-fixture budgets.
        """
        self.config = load_config(config_path)
        self.base_budget = Budget.from_config(self.config)
        self.overrides: Dict[str, object] = {k: v for k, v in overrides.items() if v is not None}
        self.presift = int(cfg_get(self.config, "schreierSims", "randomPresift",
                                   DEFAULT_RANDOM_PRESIFT))

    def budget_for(self, fixture: Fixture) -> Budget:
        return self.base_budget.with_overrides(**fixture.budget_overrides).with_overrides(
            **self.overrides)

    def verify(self, fixture: Fixture) -> VerificationReport:
        return run_verify(fixture, self.budget_for(fixture), self.presift)

    def scan(self, fixture: Fixture) -> ScanReport:
        return run_scan(fixture, self.budget_for(fixture), self.presift)


def create_certifier(config_path: Optional[str] = None, **overrides) -> Certifier:
    """
    Factory function to create a configured Certifier.

    Args:
        config_path: Optional JSON config file.
        **overrides: Budget overrides (class_size, class_seconds, table_order,
            max_rss_mb, generation_checks, seed).

    Returns:
        Certifier: ready to verify or scan fixtures.
    """
    return Certifier(config_path=config_path, **overrides)
