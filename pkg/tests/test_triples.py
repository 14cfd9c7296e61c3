import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from belyicert.bsgs import build_group, order
from belyicert.classes import ClassTable, all_classes, class_orbit
from belyicert.errors import (
    BudgetExceeded,
    IncompleteTableError,
    MalformedSubdegreesError,
    NotInGroupError,
    OddIndexSumError,
)
from belyicert.permcore import Permutation, conjugate, identity, inverse, parse_cycle_type
from belyicert.triples import (
    DivisibilityVerdict,
    GroupMetadata,
    TripleCensus,
    TripleDatum,
    close_triple,
    count_class_triples,
    count_triples_by_types,
    divisibility_primitivity,
    generates,
    genus,
    genus_of_indices,
    scan_nice_triples,
)

from conftest import (
    FIXTURE_NAMES,
    as_images,
    brute_classes,
    brute_closure,
    brute_generating_pair_count,
    brute_pair_count,
    dataset,
    dataset_group,
    perm,
    symmetric,
)

ALMOST_SIMPLE = GroupMetadata(is_almost_simple=True, is_sym_or_alt=False)

CENSUS_LIMIT = 720
NAMED_GROUPS = {
    "S5": (5, ["(1,2)", "(1,2,3,4,5)"]),
    "A6": (6, ["(1,2,3)", "(2,3,4,5,6)"]),
    "F21": (7, ["(1,2,3,4,5,6,7)", "(1,2,4)(3,6,5)"]),
    "D6": (6, ["(1,2,3,4,5,6)", "(2,6)(3,5)"]),
}


def _census_group(key):
    """Generators of a named group, or of a seeded random group of order <= CENSUS_LIMIT."""
    if key in NAMED_GROUPS:
        n, texts = NAMED_GROUPS[key]
        return [perm(t, n) for t in texts]
    rng = np.random.default_rng(int(key.split("-")[1]))
    while True:
        n = int(rng.choice([5, 6]))
        gens = [Permutation(rng.permutation(n)) for _ in range(2)]
        if brute_closure(gens, limit=CENSUS_LIMIT) is not None:
            return gens


def _sampled_class_triples(k, count=25, seed=5):
    combos = [(i, j, l) for i in range(k) for j in range(k) for l in range(k)]
    if len(combos) <= count:
        return combos
    pick = np.random.default_rng(seed).choice(len(combos), count, replace=False)
    return [combos[i] for i in sorted(pick)]


class TestTriples:
    def test_close_triple(self):
        t = close_triple(perm("(1,2)", 3), perm("(2,3)", 3))
        assert t.is_closed()
        assert t.z == perm("(1,2,3)", 3)

    def test_identity_x(self):
        y = perm("(1,2,3,4)", 4)
        t = close_triple(identity(4), y)
        assert t.z == inverse(y)
        assert genus(t) == 0

    def test_not_closed(self):
        c = perm("(1,2,3)", 3)
        assert not TripleDatum(c, c, identity(3)).is_closed()

    def test_genus_one(self):
        c = perm("(1,2,3)", 3)
        t = TripleDatum(c, c, c)
        assert t.is_closed()
        assert genus(t) == 1

    def test_odd_index_sum(self):
        with pytest.raises(OddIndexSumError):
            genus(TripleDatum(perm("(1,2)", 3), identity(3), identity(3)))
        with pytest.raises(OddIndexSumError):
            genus_of_indices(5, [1, 2, 4])

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_dataset_genus_zero(self, name):
        f = dataset(name)
        t = close_triple(f.x, f.y)
        assert t.is_closed()
        assert genus(t) == 0

    def test_generates(self):
        s3 = symmetric(3)
        assert generates(s3, close_triple(perm("(1,2)", 3), perm("(2,3)", 3)))
        assert not generates(s3, close_triple(identity(3), identity(3)))
        assert not generates(s3, close_triple(perm("(1,2)", 3), perm("(1,2)", 3)))

    def test_generates_not_in_group(self):
        g = build_group([perm("(1,2)", 3)])
        with pytest.raises(NotInGroupError):
            generates(g, close_triple(perm("(1,2)", 3), perm("(2,3)", 3)))


class TestDivisibility:
    @pytest.mark.parametrize("subdegs, n, expected", [
        ([1, 6, 24, 32], 63, DivisibilityVerdict.INCONCLUSIVE),
        ([1, 4, 6, 8, 12, 24], 55, DivisibilityVerdict.INCONCLUSIVE),
        ([1, 16, 60], 77, DivisibilityVerdict.CERTIFIED_PRIMITIVE),
        ([1, 6, 18, 27], 52, DivisibilityVerdict.CERTIFIED_PRIMITIVE),
        ([1, 2], 3, DivisibilityVerdict.CERTIFIED_PRIMITIVE),
        ([1, 1, 4], 6, DivisibilityVerdict.INCONCLUSIVE),
    ])
    def test_verdicts(self, subdegs, n, expected):
        assert divisibility_primitivity(subdegs, n) == expected

    @pytest.mark.parametrize("subdegs, n", [
        ([2, 3], 5),
        ([1, 3], 5),
        ([], 0),
        ([0, 1, 4], 5),
    ])
    def test_malformed(self, subdegs, n):
        with pytest.raises(MalformedSubdegreesError):
            divisibility_primitivity(subdegs, n)


class TestCensus:
    def _classes(self, g, budget, *reps):
        return [class_orbit(g, r, budget) for r in reps]

    def test_s3_without_rotation(self, budget):
        g = symmetric(3)
        c1, c2, c3 = self._classes(g, budget, perm("(1,2)", 3), perm("(1,2)", 3), perm("(1,2,3)", 3))
        census = count_class_triples(g, c1, c2, c3, budget, rotate=False)
        assert census.pair_count == 2
        assert census.centralizer_order == 2
        assert census.orbit_count == 1
        assert census.is_rigid

    def test_s3_rotated(self, budget):
        g = symmetric(3)
        c1, c2, c3 = self._classes(g, budget, perm("(1,2)", 3), perm("(1,2)", 3), perm("(1,2,3)", 3))
        census = count_class_triples(g, c1, c2, c3, budget)
        assert census.pair_count == 3
        assert census.centralizer_order == 3
        assert census.generating_orbit_count == 1

    def test_no_pairs(self, budget):
        g = symmetric(3)
        c1, c2, c3 = self._classes(g, budget, perm("(1,2)", 3), perm("(1,2,3)", 3), identity(3))
        census = count_class_triples(g, c1, c2, c3, budget, rotate=False)
        assert census.pair_count == 0
        assert census.generating_orbit_count == 0
        assert not census.is_rigid

    def test_pair_counts_match_brute_force(self, budget):
        g = symmetric(4)
        closure = brute_closure(g.generators)
        classes = brute_classes(closure)
        reps = [Permutation(next(iter(c))) for c in classes]
        ours = self._classes(g, budget, *reps)
        for i, c1 in enumerate(classes):
            for j, c2 in enumerate(classes):
                for k, c3 in enumerate(classes):
                    census = count_class_triples(g, ours[i], ours[j], ours[k], budget, rotate=False)
                    x0 = as_images(ours[i].representative)
                    assert census.pair_count == brute_pair_count(closure, x0, c2, c3)

    @pytest.mark.parametrize("key", ["S5", "A6", "F21", "D6", "random-0", "random-1", "random-2"])
    def test_census_matches_brute_force(self, key, budget):
        gens = _census_group(key)
        g = build_group(gens)
        closure = brute_closure(gens, limit=CENSUS_LIMIT)
        assert closure is not None and len(closure) == order(g)
        classes = brute_classes(closure)
        ours = self._classes(g, budget, *[Permutation(next(iter(c))) for c in classes])
        for i, j, k in _sampled_class_triples(len(classes)):
            plain = count_class_triples(g, ours[i], ours[j], ours[k], budget, rotate=False)
            x0 = as_images(ours[i].representative)
            assert plain.pair_count == brute_pair_count(closure, x0, classes[j], classes[k])
            assert plain.generating_pair_count == brute_generating_pair_count(
                closure, x0, classes[j], classes[k])
            rotated = count_class_triples(g, ours[i], ours[j], ours[k], budget)
            assert rotated.generating_orbit_count == plain.generating_orbit_count

    def test_one_generation_check_per_orbit(self, budget):
        g = symmetric(3)
        c1, c2, c3 = self._classes(g, budget, perm("(1,2)", 3), perm("(1,2)", 3), perm("(1,2,3)", 3))
        census = count_class_triples(g, c1, c2, c3, dataclasses.replace(budget, generation_checks=1))
        assert census.pair_count == 3
        assert census.pair_orbits == 1
        assert census.is_rigid
        with pytest.raises(BudgetExceeded):
            count_class_triples(g, c1, c2, c3, dataclasses.replace(budget, generation_checks=0))

    def test_orbits_on_dataset(self, budget):
        f = dataset("pgl2_11_55a")
        g = dataset_group("pgl2_11_55a")
        t = close_triple(f.x, f.y)
        c1, c2, c3 = self._classes(g, budget, t.x, t.y, t.z)
        census = count_class_triples(g, c1, c2, c3, budget)
        assert census.is_rigid
        assert census.all_generate
        assert census.pair_orbits < census.pair_count

    def test_rotation_preserves_orbit_counts(self, budget):
        g = symmetric(4)
        a, b, c = self._classes(g, budget, perm("(1,2)", 4), perm("(1,2,3)", 4), perm("(1,2,3,4)", 4))
        plain = count_class_triples(g, a, b, c, budget, rotate=False)
        rotated = count_class_triples(g, a, b, c, budget)
        assert plain.generating_orbit_count == rotated.generating_orbit_count
        assert plain.generating_orbit_count == 1

    def test_independent_of_representative(self, budget):
        g = symmetric(4)
        a, b, c = self._classes(g, budget, perm("(1,2)", 4), perm("(1,2,3)", 4), perm("(1,2,3,4)", 4))
        a2 = class_orbit(g, conjugate(a.representative, perm("(1,3,4)", 4)), budget)
        first = count_class_triples(g, a, b, c, budget, rotate=False)
        second = count_class_triples(g, a2, b, c, budget, rotate=False)
        assert first.pair_count == second.pair_count

    def test_by_types(self, budget):
        g = symmetric(3)
        table = all_classes(g, budget)
        t2, t3 = parse_cycle_type("2.1"), parse_cycle_type("3")
        census = count_triples_by_types(g, t2, t2, t3, table, budget)
        assert census.generating_orbit_count == 1
        assert census.combinations == 1

    def test_by_types_without_classes(self, budget):
        a3 = build_group([perm("(1,2,3)", 3)])
        table = all_classes(a3, budget)
        t2 = parse_cycle_type("2.1")
        census = count_triples_by_types(a3, t2, t2, t2, table, budget)
        assert census.pair_count == 0
        assert census.combinations == 0

    def test_by_types_needs_complete_table(self, budget):
        t = parse_cycle_type("3")
        with pytest.raises(IncompleteTableError):
            count_triples_by_types(symmetric(3), t, t, t, ClassTable(group_order=6), budget)

    def test_add(self):
        a = TripleCensus(pair_count=2, generating_pair_count=2, centralizer_order=2,
                         orbit_count=Fraction(1), generating_orbit_count=Fraction(1), combinations=1)
        b = TripleCensus(pair_count=1, generating_pair_count=0, centralizer_order=3,
                         orbit_count=None, generating_orbit_count=Fraction(0),
                         all_generate=False, combinations=1)
        total = a + b
        assert total.pair_count == 3
        assert total.orbit_count is None
        assert total.generating_orbit_count == 1
        assert total.centralizer_order == 3
        assert not total.all_generate
        assert total.to_dict()["orbit_count"] == "n/a"


class TestScan:
    def test_needs_metadata(self, budget):
        with pytest.raises(ValueError):
            scan_nice_triples(symmetric(3), None, None, budget)

    def test_excludes_symmetric(self, budget):
        result = scan_nice_triples(symmetric(5), GroupMetadata(True, True), None, budget)
        assert result.count == 0
        assert result.excluded

    def test_excludes_not_almost_simple(self, budget):
        result = scan_nice_triples(symmetric(4), GroupMetadata(False, False), None, budget)
        assert result.count == 0
        assert result.excluded == "not almost simple"

    def test_incomplete_table(self, budget):
        g = dataset_group("pgl2_11_55a")
        with pytest.raises(IncompleteTableError):
            scan_nice_triples(g, ALMOST_SIMPLE, ClassTable(group_order=1320), budget)

    @pytest.mark.parametrize("name", ["pgl2_11_55a", "pgl2_11_55b"])
    def test_pgl2_11_each_action(self, name, budget):
        f = dataset(name)
        result = scan_nice_triples(dataset_group(name), f.metadata, None, budget)
        assert result.count == 1
        found = result.triples[0]
        assert sorted(found.types, key=str) == sorted(f.claimed_types, key=str)
        assert found.orderings == 6
        assert result.ordered_count == 6

    @pytest.mark.slow
    def test_m22(self, budget):
        f = dataset("aut_m22_77")
        result = scan_nice_triples(dataset_group("aut_m22_77"), f.metadata, None, budget)
        assert result.count == 1
