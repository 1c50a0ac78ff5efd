from fractions import Fraction
from math import factorial

import pytest
import sympy

from toric_qdm.batyrev import cohomology_ring
from toric_qdm.mirror import (CohLaurent, a_coefficient, a_factors, a_weight, annihilation_sides,
                              check_annihilation, extract_fg, i_truncate, inverse_factor,
                              linear_factor, mirror_map, ne_classes, reassemble, t_classes)

from conftest import blp, pn, shipped, shipped_names


def harmonic(n):
    return sum((Fraction(1, m) for m in range(1, n + 1)), Fraction(0))


def cy_f(n, d):
    return Fraction(factorial((n + 1) * d), factorial(d) ** (n + 1))


def cy_g(n, d):
    # z^{-1} H coefficient of prod((n+1)H + mz) / prod(H + mz)^{n+1}
    return cy_f(n, d) * (n + 1) * (harmonic((n + 1) * d) - harmonic(d))


# -- A_d coefficients

def test_a_zero_is_one():
    m = blp(2, 2, -1)
    coh = cohomology_ring(m)
    assert a_coefficient(m, (0,) * 5, coh) == CohLaurent.one(coh)


def test_p1_o2_a_h():
    # (2H+z)(2H+2z)/(H+z)^2 = 2 + 2H/z in Q[H]/(H^2)
    m = pn(1, 2)
    coh = cohomology_ring(m)
    H = coh.divisor(0)
    A = a_coefficient(m, m.gens.classes[0], coh)
    assert A == CohLaurent.cls(coh, coh.scale(2, coh.unit())) + CohLaurent.cls(coh, coh.scale(2, H), -1)
    assert A.weights() == {0} == {a_weight(m, m.gens.classes[0])}


def test_blowup_e_has_zero_factor():
    m = blp(2, 2, -1)
    coh = cohomology_ring(m)
    (e,) = [c for c in m.gens.classes if m.basis.coords(c) == (1, 0)]
    assert e[0] == -1
    assert CohLaurent.cls(coh, coh.divisor(0)) in a_factors(m, coh, e)


def test_inverse_factor():
    m = pn(3, 1)
    coh = cohomology_ring(m)
    H = coh.divisor(0)
    prod = linear_factor(coh, H, 3) * inverse_factor(coh, H, 3)
    assert prod == CohLaurent.one(coh)
    with pytest.raises(ZeroDivisionError):
        inverse_factor(coh, H, 0)


def test_outside_ne_rejected():
    m = pn(2, 1)
    with pytest.raises(ValueError):
        a_coefficient(m, tuple(-x for x in m.gens.classes[0]))


@pytest.mark.parametrize("name", shipped_names())
def test_a_weight_homogeneous(name):
    m = shipped(name)
    coh = cohomology_ring(m)
    for d in ne_classes(m, 3):
        A = a_coefficient(m, d, coh)
        assert A.weights() <= {a_weight(m, d)}


@pytest.mark.parametrize("name", ["blp2_a2_b-1", "blp3_a4_b-2", "p3_o2", "p1xp1"])
def test_inversion_order_independent(name):
    m = shipped(name)
    coh = cohomology_ring(m)
    for d in ne_classes(m, 3):
        assert a_coefficient(m, d, coh) == a_coefficient(m, d, coh, reverse=True)


# -- annihilation identity

@pytest.mark.parametrize("name", shipped_names())
def test_annihilation(name):
    m = shipped(name)
    coh = cohomology_ring(m)
    for d in ne_classes(m, 3):
        for dp in m.gens.classes:
            assert check_annihilation(m, d, dp, coh), (d, dp)


def test_annihilation_trivial_shift():
    m = pn(2, 2)
    d = m.gens.classes[0]
    left, right = annihilation_sides(m, d, (0,) * len(d))
    assert left == right


def test_annihilation_p2_o2():
    m = pn(2, 2)
    h = m.gens.classes[0]
    assert check_annihilation(m, h, h)


def test_annihilation_blowup_plane():
    m = blp(2, 2, -1)
    e, he = sorted(m.gens.classes, key=lambda c: m.basis.coords(c), reverse=True)
    h = tuple(x + y for x, y in zip(e, he))
    for d in (e, he, h):
        for dp in (e, he):
            assert check_annihilation(m, d, dp)


@pytest.mark.parametrize("name", ["p1_o2", "p2_o3", "blp2_a2_b-1", "p1xp1"])
def test_swapped_theta_parts_fail(name):
    m = shipped(name)
    coh = cohomology_ring(m)
    pairs = [(d, dp) for d in ne_classes(m, 2) for dp in m.gens.classes]
    assert any(not check_annihilation(m, d, dp, coh, literal=True) for d, dp in pairs)


# -- F, G and the mirror map

@pytest.mark.parametrize("n", [1, 2, 3])
def test_calabi_yau_series(n):
    m = pn(n, n + 1)
    ms = extract_fg(m, i_truncate(m, 3))
    assert ms.clean
    for d in range(4):
        assert ms.F.get((d,), 0) == cy_f(n, d)
        assert ms.g[0].get((d,), 0) == cy_g(n, d)
        assert not ms.g0.get((d,), 0)


def test_p2_o3_first_coefficients():
    m = pn(2, 3)
    ms = extract_fg(m, i_truncate(m, 3))
    assert [ms.F[(d,)] for d in range(4)] == [cy_f(2, d) for d in range(4)] == [1, 6, 90, 1680]
    mm = mirror_map(ms, 1)
    assert mm.q_prime[0][(2,)] == 15 == 3 * cy_f(2, 1) * (harmonic(3) - harmonic(1))


@pytest.mark.parametrize("n", [1, 2])
def test_calabi_yau_mirror_map_against_sympy(n):
    N = 3
    q = sympy.Symbol("q")
    F = sum(sympy.Rational(cy_f(n, d).numerator, cy_f(n, d).denominator) * q ** d for d in range(N + 1))
    g = sum(sympy.Rational(cy_g(n, d).numerator, cy_g(n, d).denominator) * q ** d for d in range(1, N + 1))
    expected = sympy.series(q * sympy.exp(g / F), q, 0, N + 2).removeO()
    m = pn(n, n + 1)
    mm = mirror_map(extract_fg(m, i_truncate(m, N)), 1)
    got = sum(sympy.Rational(c.numerator, c.denominator) * q ** k[0] for k, c in mm.q_prime[0].items())
    assert sympy.expand(got - expected) == 0


def test_p1_o2_mirror_map():
    m = pn(1, 2)
    mm = mirror_map(extract_fg(m, i_truncate(m, 3)), 1)
    assert mm.q_prime[0] == {(1,): 1, (2,): 2, (3,): 5, (4,): 14}


@pytest.mark.parametrize("n,a", [(n, a) for n in range(1, 5) for a in range(1, n + 1)])
def test_fano_f_is_one(n, a):
    m = pn(n, a)
    ms = extract_fg(m, i_truncate(m, 3))
    assert ms.F == {(0,): 1}


@pytest.mark.parametrize("n", [3, 4])
def test_fano_degree_one_mirror_map_is_identity(n):
    m = pn(n, 1)
    mm = mirror_map(extract_fg(m, i_truncate(m, 3)), 1)
    assert not any(mm.t0.values())
    assert mm.q_prime[0] == {(1,): 1}


def test_order_zero():
    m = blp(3, 3, -2)
    ms = extract_fg(m, i_truncate(m, 0))
    assert ms.F == {(0, 0): 1}
    assert not ms.g0 and not any(ms.g)
    mm = mirror_map(ms, 2)
    assert not mm.t0
    assert mm.q_prime == [{(1, 0): 1}, {(0, 1): 1}]


@pytest.mark.parametrize("name", shipped_names())
def test_mirror_leading_terms(name):
    m = shipped(name)
    mm = mirror_map(extract_fg(m, i_truncate(m, 3)), m.r)
    assert mm.leading_ok(m.r)


@pytest.mark.parametrize("name", shipped_names())
def test_reassemble(name):
    m = shipped(name)
    it = i_truncate(m, 3)
    ms = extract_fg(m, it)
    if not ms.clean:
        pytest.skip("layers beyond H^0 + H^2 are not reconstructed")
    back = reassemble(m, ms, it.coh)
    for k, A in it.coeffs.items():
        l0, l1 = A.layer(0), A.layer(-1)
        if any(l0) or any(l1):
            assert back[k] == (l0, l1)
        else:
            assert k not in back


def test_t_classes_dual_to_basis():
    m = blp(2, 2, -1)
    coh = cohomology_ring(m)
    T1, T2 = t_classes(m, coh)
    E, H = coh.divisor(0), coh.divisor(2)
    assert T2 == H
    assert T1 == coh.add(H, coh.scale(-1, E))


def test_mirror_map_requires_unit_constant():
    m = pn(1, 2)
    ms = extract_fg(m, i_truncate(m, 2))
    ms.F[(0,)] = Fraction(2)
    with pytest.raises(ValueError):
        mirror_map(ms, 1)
