from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_qdm.catalog import admissible_blowup_bundles
from toric_qdm.gkz import (DiffOperator, Undetermined, box_operator, box_system, bridge_check,
                           candidate_colon_generators, colon_membership, ctop_hat, euler_operator,
                           fmt_op, op_mul, op_mul_naive, op_weights, ops_equal_by_action, pochhammer,
                           proportional, q_weights, quantize, render_box, spair_residual, symbol,
                           symbol_ring, verify_certificate)

from conftest import blp, p1p1, pn, shipped, shipped_names
from golden import blowup_cofactors, blowup_p0, projective_p0

D = DiffOperator.delta(1, 0)
Z = DiffOperator.zvar(1)
Q = DiffOperator.qmono((1,))
D1, D2 = DiffOperator.delta(2, 0), DiffOperator.delta(2, 1)
Z2 = DiffOperator.zvar(2)
Q1, Q2 = DiffOperator.qmono((1, 0)), DiffOperator.qmono((0, 1))


# -- arithmetic

def test_commutation_relation():
    assert op_mul(D, Q) == Q * D + Q * Z


def test_euler_commutation():
    E = DiffOperator.euler_z(1)
    assert op_mul(E, Z) == Z * E + Z * Z
    # z^2 d/dz (z q d/dq) = z q d/dq z^2 d/dz + z (z q d/dq)
    assert op_mul(E, D) == D * E + Z * D


def test_unit():
    A = Q * D * D + Z * 3
    assert op_mul(A, DiffOperator.const(1)) == A
    assert op_mul(DiffOperator.const(1), A) == A


def test_single_pass_example():
    lhs = op_mul(D * 2, op_mul(Q, D * 2 + Z))
    rhs = op_mul(Q, op_mul(D * 2 + Z * 2, D * 2 + Z))
    assert lhs == rhs


def test_power_of_q_commutes_with_shift():
    # D q^b = q^b (D + b z)
    Q3 = DiffOperator.qmono((3,))
    assert op_mul(D, Q3) == op_mul(Q3, D + Z * 3)


# -- quantisation and Pochhammer symbols

@pytest.mark.parametrize("n,a,b", [(2, 2, -1), (2, 3, -1), (3, 3, -2), (3, 4, -2)])
def test_ctop_blowup(n, a, b):
    assert ctop_hat(blp(n, a, b)) == D1 * (-b) + D2 * (a + b)


@pytest.mark.parametrize("n,a", [(1, 2), (2, 3), (4, 1)])
def test_ctop_projective(n, a):
    assert ctop_hat(pn(n, a)) == D * a


def test_quantize_zero():
    assert not quantize((0, 0))


def test_ctop_without_bundle_is_one():
    assert ctop_hat(blp(2)) == DiffOperator.const(2)


def test_pochhammer():
    assert pochhammer(D, 0) == DiffOperator.const(1)
    assert pochhammer(D, 1) == D
    assert pochhammer(D * 2 + Z * 2, 2) == op_mul(D * 2 + Z * 2, D * 2 + Z)


# -- box operators

@pytest.mark.parametrize("n,a", [(n, a) for n in range(1, 5) for a in range(1, n + 2)])
def test_projective_box(n, a):
    m = pn(n, a)
    tail = DiffOperator.const(1)
    for nu in range(1, a + 1):
        tail = tail * (D * a + Z * nu)
    assert box_operator(m, m.gens.classes[0]) == D ** (n + 1) - Q * tail


def _blowup_boxes(n, a, b):
    c = D1 * (-b) + D2 * (a + b)

    def prod(hi):
        out = DiffOperator.const(2)
        for nu in range(1, hi + 1):
            out = out * (c + Z2 * nu)
        return out

    box_e = D1 ** n - Q1 * (D2 - D1) * prod(-b)
    box_he = D2 * (D2 - D1) - Q2 * prod(a + b)
    return box_e, box_he


@pytest.mark.parametrize("a,b", admissible_blowup_bundles(2))
def test_blowup_boxes(a, b):
    m = blp(2, a, b)
    box_e, box_he = _blowup_boxes(2, a, b)
    by_q = {m.basis.coords(c): box_operator(m, c) for c in m.gens.classes}
    assert by_q[(1, 0)] == box_e
    assert by_q[(0, 1)] == box_he


@pytest.mark.parametrize("a,b", admissible_blowup_bundles(3))
def test_blowup_box_e_any_dimension(a, b):
    m = blp(3, a, b)
    box_e, _ = _blowup_boxes(3, a, b)
    (e,) = [c for c in m.gens.classes if m.basis.coords(c) == (1, 0)]
    assert box_operator(m, e) == box_e


def test_zero_class_box():
    m = blp(2, 2, -1)
    assert not box_operator(m, (0,) * 5)


def test_render_box():
    m = pn(2, 3)
    assert render_box(m, m.gens.classes[0]) == "zδq^3 - q*[3*zδq + 3*z]_3"


def test_fmt_op():
    assert fmt_op(Q * D * 2 - Z) == "2*q*[zδq] - z"
    assert fmt_op(DiffOperator(1)) == "0"


# -- Euler field

@pytest.mark.parametrize("n,a", [(1, 1), (2, 1), (3, 2), (4, 3)])
def test_euler_projective(n, a):
    assert euler_operator(pn(n, a)) == DiffOperator.euler_z(1) + D * (n + 1 - a)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_euler_calabi_yau(n):
    assert euler_operator(pn(n, n + 1)) == DiffOperator.euler_z(1)


@pytest.mark.parametrize("n,a,b", [(2, 2, -1), (3, 3, -1), (3, 4, -2)])
def test_euler_blowup(n, a, b):
    # T1 = H - E, T2 = H, so xH + yE = -y T1 + (x + y) T2
    x, y = n + 1 - a, -(n - 1 + b)
    expected = DiffOperator.euler_z(2) + quantize((-y, x + y))
    assert euler_operator(blp(n, a, b)) == expected


# -- symbols

def test_symbol_top_degree():
    ring = symbol_ring(1, ["q"])
    y = ring.var(2)
    assert symbol(D * D + Q * D, ring) == y ** 2


def test_symbol_calabi_yau_box():
    m = pn(2, 3)
    ring = symbol_ring(1, ["q"])
    q, y = ring.var(0), ring.var(2)
    assert symbol(box_operator(m, m.gens.classes[0]), ring) == y ** 3 - q * y ** 3 * 27


def test_symbol_fano_box():
    m = pn(2, 1)
    ring = symbol_ring(1, ["q"])
    assert symbol(box_operator(m, m.gens.classes[0]), ring) == ring.var(2) ** 3


def test_symbol_rejects_euler():
    with pytest.raises(ValueError):
        symbol(DiffOperator.euler_z(1), symbol_ring(1, ["q"]))


# -- weights

def _weight_classes(m):
    cs = list(m.gens.classes)
    sums = [tuple(x + y for x, y in zip(c1, c2)) for i, c1 in enumerate(cs) for c2 in cs[i:]]
    return cs + sums


@pytest.mark.parametrize("name", shipped_names())
def test_box_weight_homogeneous(name):
    m = shipped(name)
    qw = q_weights(m)
    for d in _weight_classes(m):
        assert len(op_weights(box_operator(m, d), qw)) == 1


# -- colon membership

def test_p1_o2_residual_certificate():
    s = box_system(pn(1, 2))
    P0 = D * Fraction(1, 2) - Q * (D * 2 + Z)
    assert op_mul(s.ctop, P0) == s.boxes[0]
    cert = colon_membership(P0, s)
    assert cert.verified
    assert cert.cofactors[0] == DiffOperator.const(1)
    assert not cert.residual(s.boxes)


@pytest.mark.parametrize("n,a", [(n, a) for n in range(1, 5) for a in range(1, n + 2)])
def test_projective_golden_identity(n, a):
    s = box_system(pn(n, a))
    P0 = projective_p0(n, a)
    assert proportional(op_mul(s.ctop, P0), s.boxes[0]) == 1
    cert = colon_membership(P0, s)
    assert cert.verified and proportional(cert.cofactors[0], DiffOperator.const(1)) == 1


@pytest.mark.parametrize("n,a,b", [(n, a, b) for n in (2, 3) for a, b in admissible_blowup_bundles(n)])
def test_blowup_golden_identity(n, a, b):
    s = box_system(blp(n, a, b))
    P0 = blowup_p0(n, a, b)
    cofs = blowup_cofactors(s, n, a, b)
    rhs = DiffOperator(2)
    for B, box in zip(cofs, s.boxes):
        rhs = rhs + op_mul(B, box)
    assert proportional(op_mul(s.ctop, P0), rhs) == 1
    cert = colon_membership(P0, s)
    assert cert.verified
    assert not cert.residual(s.boxes)


def test_box_is_in_colon():
    s = box_system(pn(2, 2))
    cert = colon_membership(s.boxes[0], s)
    assert cert.verified
    assert not cert.residual(s.boxes)


def test_non_member_is_undetermined():
    s = box_system(pn(1, 2))
    with pytest.raises(Undetermined):
        colon_membership(DiffOperator.const(1), s)


def test_tampered_certificate_rejected():
    s = box_system(pn(1, 2))
    cert = colon_membership(projective_p0(1, 2), s)
    cert.cofactors = [cert.cofactors[0] * 2]
    assert not verify_certificate(cert, s)


def test_certificate_degree_bound():
    s = box_system(blp(3, 3, -2))
    cert = colon_membership(blowup_p0(3, 3, -2), s)
    top = op_mul(s.ctop, cert.target).degree()
    for B, box in zip(cert.cofactors, s.boxes):
        if B:
            assert op_mul(B, box).degree() <= top


# -- S-pairs and candidates

def test_spair_self_is_zero():
    s = box_system(pn(2, 2))
    assert not spair_residual(s, 0, 0).T


@pytest.mark.parametrize("a,b", admissible_blowup_bundles(2))
def test_spair_blowup_plane_matches_p0(a, b):
    s = box_system(blp(2, a, b))
    T = spair_residual(s, 0, 1).T
    assert proportional(T, blowup_p0(2, a, b)) is not None


@pytest.mark.parametrize("a,b", admissible_blowup_bundles(3))
def test_spair_blowup_space_certified(a, b):
    s = box_system(blp(3, a, b))
    res = spair_residual(s, 0, 1)
    assert op_mul(res.U, s.boxes[0]) - op_mul(res.V, s.boxes[1]) == op_mul(s.ctop, res.T)
    assert colon_membership(res.T, s).verified


def test_spair_p1xp1_certified():
    s = box_system(p1p1((1, 0, 1, 0)))
    res = spair_residual(s, 0, 1)
    assert op_mul(res.U, s.boxes[0]) - op_mul(res.V, s.boxes[1]) == op_mul(s.ctop, res.T)
    assert colon_membership(res.T, s).verified


@pytest.mark.parametrize("n,a", [(2, 1), (3, 4)])
def test_candidates_projective(n, a):
    s = box_system(pn(n, a))
    cands = candidate_colon_generators(s)
    assert [c.name for c in cands] == ["box[0]", "quotient[0]"]
    assert cands[1].op == projective_p0(n, a)
    assert all(c.certificate.verified for c in cands)


def test_candidates_blowup():
    s = box_system(blp(2, 2, -1))
    cands = candidate_colon_generators(s)
    assert len(cands) == 3
    assert [c.name for c in cands][:2] == ["box[0]", "box[1]"]
    assert proportional(cands[2].op, blowup_p0(2, 2, -1)) is not None


def test_candidates_without_bundle():
    s = box_system(blp(2))
    cands = candidate_colon_generators(s)
    assert [c.name for c in cands] == ["box[0]", "box[1]"]
    assert s.ctop == DiffOperator.const(2)


# -- bridge to the Batyrev side

@pytest.mark.parametrize("name", shipped_names())
def test_bridge(name):
    s = box_system(shipped(name))
    certs = [c.certificate for c in candidate_colon_generators(s)]
    rep = bridge_check(s, certs)
    assert rep.ok


def test_bridge_needs_sign_twist():
    s = box_system(pn(2, 3))
    assert bridge_check(s).ok
    assert not bridge_check(s, twist=False).ok


# -- randomized algebraic properties

def ops(r, euler=False):
    small = st.integers(0, 2)
    key = st.tuples(st.tuples(*[small] * r), small, st.tuples(*[small] * r),
                    small if euler else st.just(0))
    return st.dictionaries(key, st.fractions(-3, 3, max_denominator=3), max_size=4).map(
        lambda t: DiffOperator(r, t))


@settings(max_examples=100, deadline=None)
@given(ops(2, True), ops(2, True), ops(2, True))
def test_associative(A, B, C):
    assert op_mul(op_mul(A, B), C) == op_mul(A, op_mul(B, C))


@settings(max_examples=100, deadline=None)
@given(ops(2, True), ops(2, True))
def test_fast_product_matches_naive(A, B):
    assert op_mul(A, B) == op_mul_naive(A, B)


@settings(max_examples=30, deadline=None)
@given(ops(2), ops(2))
def test_product_matches_action(A, B):
    from toric_qdm.gkz import _action, _sympy_setup
    _, lam, zp, one = _sympy_setup(2)
    start = {(0, 0): one}
    composed = _action(A, _action(B, start, lam, zp), lam, zp)
    direct = _action(op_mul(A, B), start, lam, zp)
    assert all(composed.get(k, 0) - direct.get(k, 0) == 0 for k in set(composed) | set(direct))


@settings(max_examples=100, deadline=None)
@given(ops(2), ops(2))
def test_symbol_multiplicative(A, B):
    ring = symbol_ring(2, ["q1", "q2"])
    sa, sb = symbol(A, ring), symbol(B, ring)
    if sa and sb:
        assert symbol(op_mul(A, B), ring) == sa * sb


def test_action_detects_difference():
    assert ops_equal_by_action(op_mul(D, Q), Q * D + Q * Z)
    assert not ops_equal_by_action(op_mul(D, Q), Q * D)
