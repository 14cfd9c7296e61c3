import random

import numpy as np
import pytest

from belyicert.bsgs import (
    ProductReplacement,
    UnionFind,
    build_chain,
    build_group,
    contains,
    derived_subgroup,
    elements,
    is_even_group,
    is_primitive,
    is_transitive,
    minimal_block,
    normal_closure,
    order,
    orbit,
    orbits_of,
    random_element,
    subdegrees,
)
from belyicert.errors import DegreeMismatchError, EmptyGeneratorsError, NotTransitiveError
from belyicert.permcore import Permutation, identity, inverse
from belyicert.triples import DivisibilityVerdict, divisibility_primitivity

from conftest import (
    FIXTURE_NAMES,
    as_images,
    brute_closure,
    brute_is_primitive,
    dataset,
    dataset_group,
    perm,
    symmetric,
)


def _random_groups(count, seed=17, degrees=(4, 5, 6, 7)):
    """Random two-generator groups small enough to enumerate."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.choice(degrees))
        gens = [Permutation(rng.permutation(n)) for _ in range(2)]
        if rng.random() < 0.5:
            # bias toward proper subgroups
            gens[1] = Permutation(np.roll(np.arange(n), 1)) if n % 2 == 0 else gens[0] ** 2 * gens[1] ** 2
        closure = brute_closure(gens, limit=2600)
        if closure is not None:
            out.append((gens, closure))
    return out


class TestOrder:
    def test_small_groups(self):
        assert order(symmetric(3)) == 6
        assert order(symmetric(6)) == 720
        cyc = "(" + ",".join(str(i) for i in range(1, 53)) + ")"
        assert order(build_group([perm(cyc, 52)])) == 52
        assert order(build_group([identity(5)])) == 1

    def test_matches_brute_force(self):
        for gens, closure in _random_groups(30):
            assert order(build_group(gens)) == len(closure)

    def test_base_independent(self):
        for gens, closure in _random_groups(10, seed=4):
            n = gens[0].degree
            assert build_chain(gens, base_prefix=(n - 1,)).order() == len(closure)
            assert build_chain(gens, presift=0).order() == len(closure)
            assert build_chain(gens, seed=99).order() == len(closure)

    def test_known_order_certifies(self):
        g = build_group(symmetric(6).generators, known_order=720)
        assert order(g) == 720

    def test_pgl_order(self):
        assert order(dataset_group("pgl2_11_55a")) == 1320
        assert order(dataset_group("pgl2_11_55b")) == 1320

    def test_m22_order(self):
        assert order(dataset_group("aut_m22_77")) == 887040

    def test_errors(self):
        with pytest.raises(EmptyGeneratorsError):
            build_group([])
        with pytest.raises(DegreeMismatchError):
            build_group([identity(3), identity(4)])


class TestMembership:
    def test_generators_and_identity(self):
        g = symmetric(5)
        for s in g.generators:
            assert contains(g, s)
        assert contains(g, identity(5))

    def test_proper_subgroup(self):
        g = build_group([perm("(1,2)", 3)])
        assert not contains(g, perm("(2,3)", 3))
        assert contains(g, perm("(1,2)", 3))

    def test_matches_brute_force(self):
        rng = np.random.default_rng(8)
        for gens, closure in _random_groups(15, seed=21):
            g = build_group(gens)
            n = gens[0].degree
            for _ in range(30):
                a = Permutation(rng.permutation(n))
                assert contains(g, a) == (as_images(a) in closure)

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatchError):
            contains(symmetric(3), identity(4))

    def test_elements_enumerates_group(self):
        for gens, closure in _random_groups(8, seed=2, degrees=(4, 5)):
            listed = [as_images(a) for a in elements(build_group(gens))]
            assert len(listed) == len(closure)
            assert set(listed) == closure

    def test_random_elements_are_members(self):
        g = dataset_group("pgl2_11_55a")
        rng = random.Random(5)
        for _ in range(20):
            assert contains(g, random_element(g, rng))
        pr = ProductReplacement(g.generators, random.Random(1))
        for _ in range(20):
            assert contains(g, pr.sample())


class TestTransitivityAndBlocks:
    def test_transitive(self):
        assert is_transitive(symmetric(4))
        assert not is_transitive(build_group([perm("(1,2)", 3)]))

    def test_orbits(self):
        assert orbits_of([perm("(1,2)(4,5)", 5)], 5) == [[0, 1], [2], [3, 4]]
        g = build_group([perm("(1,2,3)", 5), perm("(4,5)", 5)])
        assert sorted(orbit(g, 1)) == [0, 1, 2]
        assert sorted(orbit(g, 4)) == [3, 4]

    def test_minimal_block_cyclic(self):
        g = build_group([perm("(1,2,3,4)", 4)])
        assert minimal_block(g, (0, 2)) == [[0, 2], [1, 3]]
        assert minimal_block(g, (0, 1)) == [[0, 1, 2, 3]]

    def test_minimal_block_same_point(self):
        with pytest.raises(ValueError):
            minimal_block(symmetric(4), (1, 1))

    def test_primitivity(self):
        assert not is_primitive(build_group([perm("(1,2,3,4)", 4)]))
        assert is_primitive(symmetric(5))
        assert is_primitive(build_group([perm("(1,2,3,4,5)", 5)]))

    def test_primitivity_matches_brute_force(self):
        for gens, closure in _random_groups(25, seed=33, degrees=(4, 6)):
            g = build_group(gens)
            if not is_transitive(g):
                continue
            assert is_primitive(g) == brute_is_primitive(closure, g.degree)

    def test_not_transitive_errors(self):
        g = build_group([perm("(1,2)", 3)])
        with pytest.raises(NotTransitiveError):
            subdegrees(g)
        with pytest.raises(NotTransitiveError):
            is_primitive(g)

    def test_subdegrees(self):
        assert subdegrees(symmetric(5)) == [1, 4]
        assert subdegrees(build_group([perm("(1,2,3,4,5,6)", 6)])) == [1] * 6

    def test_union_find(self):
        uf = UnionFind(5)
        assert uf.union(0, 3) is not None
        assert uf.union(3, 0) is None
        uf.union(1, 4)
        assert uf.classes() == [[0, 3], [1, 4], [2]]


class TestDerived:
    def test_derived_subgroups(self):
        assert order(derived_subgroup(symmetric(4))) == 12
        assert order(derived_subgroup(symmetric(3))) == 3
        assert order(derived_subgroup(build_group([perm("(1,2,3)", 3)]))) == 1

    def test_normal_closure(self):
        s4 = symmetric(4)
        assert order(normal_closure(s4, [perm("(1,2)(3,4)", 4)])) == 4
        assert order(normal_closure(s4, [identity(4)])) == 1

    def test_parity(self):
        assert not is_even_group(symmetric(4))
        assert is_even_group(derived_subgroup(symmetric(4)))

    def test_pgl_derived_is_index_two(self):
        assert order(derived_subgroup(dataset_group("pgl2_11_55a"))) == 660


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_dataset_group_structure(name):
    f = dataset(name)
    g = dataset_group(name)
    assert is_transitive(g)
    assert is_primitive(g)
    subs = subdegrees(g)
    assert subs == f.subdegrees
    assert divisibility_primitivity(subs, f.degree) == f.divisibility
    assert contains(g, inverse(f.x * f.y))
    if f.order is not None:
        assert order(g) == f.order


def test_divisibility_never_certifies_imprimitive():
    wreath = build_group([perm("(1,2)", 6), perm("(1,3,5)(2,4,6)", 6), perm("(1,3)(2,4)", 6)])
    assert not is_primitive(wreath)
    assert divisibility_primitivity(subdegrees(wreath), 6) == DivisibilityVerdict.INCONCLUSIVE
    cyclic = build_group([perm("(1,2,3,4,5,6)", 6)])
    assert divisibility_primitivity(subdegrees(cyclic), 6) == DivisibilityVerdict.INCONCLUSIVE
