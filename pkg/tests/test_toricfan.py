import itertools
import random
from fractions import Fraction

import pytest

from toric_qdm.catalog import blowup_bundle, blowup_point, hyperplane_bundle, p1xp1, projective_space
from toric_qdm.curveclasses import primitive_collections
from toric_qdm.toricfan import (BUNDLE, BundleData, Fan, FanError, build_delta, concavity_margins,
                                cone_containing, find_support_function, is_cone_supported,
                                project_to_base, validate_fan)

P1 = Fan.make(1, [(1,), (-1,)], [(0,), (1,)])
EX35 = build_delta(P1, BundleData(((2, 0),)))


def test_p1_and_p2_valid():
    assert validate_fan(P1) == []
    assert validate_fan(projective_space(2)) == []


def test_half_line_incomplete():
    assert validate_fan(Fan.make(1, [(1,)], [(0,)]))


@pytest.mark.parametrize("rays,cones", [
    ([(2,), (-1,)], [(0,), (1,)]),                       # non-primitive ray
    ([(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)]),  # det 2
    ([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)]),       # open wall
])
def test_invalid_fans_reported(rays, cones):
    assert validate_fan(Fan.make(len(rays[0]), rays, cones))


def test_example_delta_rays():
    assert EX35.rays == ((1, 2), (-1, 0), (0, 1))
    assert EX35.ray_kind[2] == BUNDLE


def test_no_bundles_keeps_fan():
    d = build_delta(projective_space(2), BundleData())
    assert d.rays == projective_space(2).rays
    assert {frozenset(c) for c in d.max_cones} == {frozenset(c) for c in projective_space(2).max_cones}


def test_blowup_delta_shape():
    d = build_delta(blowup_point(2), blowup_bundle(2, 2, -1))
    assert len(d.rays) == 5 and all(len(v) == 3 for v in d.rays)
    assert d.rays[-1] == (0, 0, 1)


@pytest.mark.parametrize("fan,bundles", [
    (P1, BundleData(((2, 0),))),
    (projective_space(3), hyperplane_bundle(3, 2)),
    (blowup_point(3), blowup_bundle(3, 3, -2)),
    (p1xp1(), BundleData(((1, 0, 1, 0), (0, 1, 0, 0)))),
])
def test_projection_recovers_fan(fan, bundles):
    assert project_to_base(build_delta(fan, bundles)) == fan


def test_cone_support_examples():
    assert is_cone_supported(EX35, {0, 2})
    assert not is_cone_supported(EX35, {0, 1})
    assert is_cone_supported(EX35, set())


@pytest.mark.parametrize("fan,bundles", [
    (projective_space(2), hyperplane_bundle(2, 1)),
    (blowup_point(2), blowup_bundle(2, 3, -1)),
    (blowup_point(3), blowup_bundle(3, 2, -1)),
    (p1xp1(), BundleData(((1, 0, 1, 0),))),
])
def test_cone_support_iff_no_primitive_collection(fan, bundles):
    d = build_delta(fan, bundles)
    prim = [set(c) for c in primitive_collections(d)]
    for size in range(d.n_rays + 1):
        for s in itertools.combinations(range(d.n_rays), size):
            assert is_cone_supported(d, s) == (not any(p <= set(s) for p in prim))


def test_primitive_collections_have_no_bundle_rays():
    for fan, b in [(projective_space(3), hyperplane_bundle(3, 4)), (blowup_point(3), blowup_bundle(3, 4, -2))]:
        d = build_delta(fan, b)
        assert all(i in d.base_indices for c in primitive_collections(d) for i in c)


def test_p1_support_function():
    d = build_delta(P1, BundleData())
    phi = find_support_function(d)
    assert phi.weights[0] + phi.weights[1] < 0


def test_support_function_hint_rejected():
    # flat across the wall at the bundle ray
    with pytest.raises(FanError):
        find_support_function(EX35, hint=[0, 0, 0])


def test_support_function_verified():
    d = build_delta(projective_space(2), hyperplane_bundle(2, 1))
    phi = find_support_function(d)
    assert all(m > 0 for m in concavity_margins(d, phi.weights))
    assert all(w <= 0 for w in phi.weights)


@pytest.mark.parametrize("fan,bundles", [
    (P1, BundleData(((2, 0),))),
    (projective_space(2), hyperplane_bundle(2, 3)),
    (blowup_point(2), blowup_bundle(2, 2, -1)),
])
def test_support_is_convex_on_samples(fan, bundles):
    d = build_delta(fan, bundles)
    rng = random.Random(3)
    cones = [sorted(c) for c in d.max_cones]

    def point():
        c = rng.choice(cones)
        coeffs = [Fraction(rng.randint(0, 5), rng.randint(1, 3)) for _ in c]
        return [sum(a * d.rays[i][j] for a, i in zip(coeffs, c)) for j in range(d.rank)]

    for _ in range(60):
        p, q = point(), point()
        mid = [(a + b) / 2 for a, b in zip(p, q)]
        assert cone_containing(d, mid) is not None
