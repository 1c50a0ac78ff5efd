"""Differential operators in q, z and the GKZ box system.

Operators live in Q[q^+-, z]<z dq_1, ..., z dq_r, z dz> and are stored in
normal form with every q and z power to the left of every derivation.
Below ``D_a`` denotes z*q_a*d/dq_a and ``E`` denotes z*z*d/dz.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .model import ToricModel
from .polyalg import QQ, Poly, PolyRing, buchberger, grevlex, normal_form

# key: (q exponents, z exponent, D exponents, E exponent)
Key = Tuple[Tuple[int, ...], int, Tuple[int, ...], int]


class DiffOperator:
    __slots__ = ("r", "terms")

    def __init__(self, r: int, terms: Optional[Dict[Key, Fraction]] = None) -> None:
        self.r = r
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    # -- constructors
    @classmethod
    def const(cls, r: int, c=1) -> "DiffOperator":
        return cls(r, {((0,) * r, 0, (0,) * r, 0): Fraction(c)})

    @classmethod
    def zvar(cls, r: int) -> "DiffOperator":
        return cls(r, {((0,) * r, 1, (0,) * r, 0): Fraction(1)})

    @classmethod
    def qmono(cls, beta: Sequence[int], c=1) -> "DiffOperator":
        r = len(beta)
        return cls(r, {(tuple(beta), 0, (0,) * r, 0): Fraction(c)})

    @classmethod
    def delta(cls, r: int, a: int) -> "DiffOperator":
        e = tuple(int(i == a) for i in range(r))
        return cls(r, {((0,) * r, 0, e, 0): Fraction(1)})

    @classmethod
    def euler_z(cls, r: int) -> "DiffOperator":
        return cls(r, {((0,) * r, 0, (0,) * r, 1): Fraction(1)})

    # -- arithmetic
    def __add__(self, other) -> "DiffOperator":
        other = _as_op(other, self.r)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return DiffOperator(self.r, out)

    __radd__ = __add__

    def __neg__(self) -> "DiffOperator":
        return DiffOperator(self.r, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "DiffOperator":
        return self + (-_as_op(other, self.r))

    def __rsub__(self, other) -> "DiffOperator":
        return _as_op(other, self.r) - self

    def __mul__(self, other) -> "DiffOperator":
        if isinstance(other, DiffOperator):
            return op_mul(self, other)
        return DiffOperator(self.r, {k: v * Fraction(other) for k, v in self.terms.items()})

    def __rmul__(self, other) -> "DiffOperator":
        return DiffOperator(self.r, {k: v * Fraction(other) for k, v in self.terms.items()})

    def __pow__(self, k: int) -> "DiffOperator":
        out = DiffOperator.const(self.r)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            other = _as_op(other, self.r)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree in the derivations (D_a and E)."""
        return max((sum(k[2]) + k[3] for k in self.terms), default=-1)

    def has_euler(self) -> bool:
        return any(k[3] for k in self.terms)

    def q_support(self) -> List[Tuple[int, ...]]:
        return sorted({k[0] for k in self.terms})

    def max_z(self) -> int:
        return max((k[1] for k in self.terms), default=0)

    def __repr__(self) -> str:
        return fmt_op(self)


def _as_op(x, r: int) -> DiffOperator:
    return x if isinstance(x, DiffOperator) else DiffOperator.const(r, x)


def _binom_expand(alpha: Sequence[int], beta: Sequence[int]):
    """Terms of prod_a (D_a + beta_a z)^alpha_a as (coef, z power, D exps)."""
    per = []
    for a, b in zip(alpha, beta):
        opts = []
        for kk in range(a + 1):
            c = comb(a, kk) * b ** (a - kk)
            if c:
                opts.append((c, a - kk, kk))
        per.append(opts)
    for combo in itertools.product(*per):
        c = 1
        zp = 0
        ks = []
        for cc, zz, kk in combo:
            c *= cc
            zp += zz
            ks.append(kk)
        yield c, zp, tuple(ks)


def op_mul(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    """Normal-form product.

    Without E the closed form D^alpha q^beta = q^beta prod (D_a + beta_a z)^alpha_a
    is used directly; otherwise generators are pushed through one at a time.
    """
    if A.has_euler():
        return op_mul_naive(A, B)
    r = A.r
    out: Dict[Key, Fraction] = {}
    cache = {}
    for (b1, j1, a1, _), c1 in A.terms.items():
        for (b2, j2, a2, e2), c2 in B.terms.items():
            ck = (a1, b2)
            exp = cache.get(ck)
            if exp is None:
                exp = list(_binom_expand(a1, b2))
                cache[ck] = exp
            qb = tuple(x + y for x, y in zip(b1, b2))
            for c, zp, ks in exp:
                key = (qb, j1 + j2 + zp, tuple(x + y for x, y in zip(ks, a2)), e2)
                out[key] = out.get(key, 0) + c1 * c2 * c
    return DiffOperator(r, out)


def _left_e(op: Dict[Key, Fraction]) -> Dict[Key, Fraction]:
    # E q^b z^j D^a E^g = q^b z^j D^a E^{g+1} + (j + |a|) q^b z^{j+1} D^a E^g
    # since [E, z] = z^2 and [E, D_a] = z D_a
    out: Dict[Key, Fraction] = {}
    for (b, j, a, g), c in op.items():
        for key, v in (((b, j, a, g + 1), c), ((b, j + 1, a, g), c * (j + sum(a)))):
            if v:
                out[key] = out.get(key, 0) + v
    return out


def _left_d(op: Dict[Key, Fraction], i: int) -> Dict[Key, Fraction]:
    # D_i q^b z^j D^a E^g = q^b z^j D^{a+e_i} E^g + b_i q^b z^{j+1} D^a E^g
    out: Dict[Key, Fraction] = {}
    for (b, j, a, g), c in op.items():
        a2 = a[:i] + (a[i] + 1,) + a[i + 1:]
        out[(b, j, a2, g)] = out.get((b, j, a2, g), 0) + c
        if b[i]:
            out[(b, j + 1, a, g)] = out.get((b, j + 1, a, g), 0) + c * b[i]
    return out


def op_mul_naive(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    """Product by pushing single generators of A through B from the left."""
    out: Dict[Key, Fraction] = {}
    for (b1, j1, a1, g1), c1 in A.terms.items():
        cur = dict(B.terms)
        for _ in range(g1):
            cur = _left_e(cur)
        for i, ai in enumerate(a1):
            for _ in range(ai):
                cur = _left_d(cur, i)
        for (b, j, a, g), c in cur.items():
            key = (tuple(x + y for x, y in zip(b, b1)), j + j1, a, g)
            out[key] = out.get(key, 0) + c * c1
    return DiffOperator(A.r, out)


# ---------------------------------------------------------------------------
# quantisation and the box system


def quantize(tcoords: Sequence, r: Optional[int] = None) -> DiffOperator:
    r = len(tcoords) if r is None else r
    out = DiffOperator(r)
    for a, t in enumerate(tcoords):
        if t:
            out = out + DiffOperator.delta(r, a) * Fraction(t)
    return out


def pochhammer(a: DiffOperator, k: int) -> DiffOperator:
    """[a]_k = a (a - z) ... (a - (k-1) z)."""
    out = DiffOperator.const(a.r)
    z = DiffOperator.zvar(a.r)
    for m in range(k):
        out = out * (a - z * m)
    return out


@dataclass
class BoxParts:
    """The two halves of a box operator, kept for rendering and S-pairs."""
    first: DiffOperator
    second: DiffOperator  # without the q^d prefactor
    qexp: Tuple[int, ...]


def box_parts(model: ToricModel, d: Sequence[int]) -> BoxParts:
    r = model.r
    z = DiffOperator.zvar(r)
    first = DiffOperator.const(r)
    second = DiffOperator.const(r)
    for i, di in enumerate(model.bundle_degrees(d)):
        Lh = quantize(model.bundle_tcoords()[i], r)
        if di < 0:
            first = first * pochhammer(Lh + z * (-di), -di)
        elif di > 0:
            second = second * pochhammer(Lh + z * di, di)
    for th in model.delta.base_indices:
        dt = d[th]
        Dh = quantize(model.ray_tcoords(th), r)
        if dt > 0:
            first = first * pochhammer(Dh, dt)
        elif dt < 0:
            second = second * pochhammer(Dh, -dt)
    return BoxParts(first, second, model.basis.coords(d))


def box_operator(model: ToricModel, d: Sequence[int]) -> DiffOperator:
    p = box_parts(model, d)
    return p.first - DiffOperator.qmono(p.qexp) * p.second


def euler_operator(model: ToricModel) -> DiffOperator:
    r = model.r
    t = [Fraction(0)] * r
    for th in model.delta.base_indices:
        for a, x in enumerate(model.ray_tcoords(th)):
            t[a] += x
    for tc in model.bundle_tcoords():
        for a, x in enumerate(tc):
            t[a] -= x
    return DiffOperator.euler_z(r) + quantize(t, r)


def ctop_hat(model: ToricModel) -> DiffOperator:
    out = DiffOperator.const(model.r)
    for tc in model.bundle_tcoords():
        out = out * quantize(tc, model.r)
    return out


@dataclass
class BoxSystem:
    model: ToricModel
    classes: List[Tuple[int, ...]]
    boxes: List[DiffOperator]
    euler: DiffOperator
    ctop: DiffOperator


def box_system(model: ToricModel) -> BoxSystem:
    classes = list(model.gens.classes)
    return BoxSystem(model, classes, [box_operator(model, c) for c in classes],
                     euler_operator(model), ctop_hat(model))


def q_weights(model: ToricModel) -> List[int]:
    """w(q_a) = sum_theta (B_a)_theta - sum_i L_i . B_a."""
    out = []
    for b in model.basis.basis:
        w = sum(b[th] for th in model.delta.base_indices)
        w -= sum(model.bundle_degrees(b))
        out.append(w)
    return out


def op_weights(P: DiffOperator, qw: Sequence[int]) -> set:
    return {j + sum(a) + g + sum(x * y for x, y in zip(b, qw)) for (b, j, a, g) in P.terms}


# ---------------------------------------------------------------------------
# symbol


def symbol_ring(r: int, qnames: Sequence[str]) -> PolyRing:
    ys = [f"y{a + 1}" for a in range(r)] if r > 1 else ["y"]
    return PolyRing(list(qnames) + ["z"] + ys, QQ, laurent=qnames)


def symbol(P: DiffOperator, ring: PolyRing) -> Poly:
    if P.has_euler():
        raise ValueError("symbol is defined on operators without z d/dz")
    top = P.degree()
    out = {}
    for (b, j, a, _), c in P.terms.items():
        if sum(a) == top:
            key = tuple(b) + (j,) + tuple(a)
            out[key] = out.get(key, 0) + c
    return Poly(ring, {k: v for k, v in out.items() if v})


# ---------------------------------------------------------------------------
# colon membership


class Undetermined(Exception):
    """Membership could not be certified at the given bounds."""


@dataclass
class CofactorCertificate:
    target: DiffOperator
    ctop: DiffOperator
    cofactors: List[DiffOperator]
    classes: List[Tuple[int, ...]]
    bounds: Dict[str, object]
    unknowns: int = 0
    verified: bool = False

    def residual(self, boxes: Sequence[DiffOperator]) -> DiffOperator:
        lhs = op_mul(self.ctop, self.target)
        rhs = DiffOperator(self.target.r)
        for B, box in zip(self.cofactors, boxes):
            rhs = rhs + op_mul(B, box)
        return lhs - rhs


def _small_sums(vectors: Sequence[Tuple[int, ...]], level: int, r: int) -> List[Tuple[int, ...]]:
    sums = {(0,) * r}
    frontier = {(0,) * r}
    for _ in range(level):
        nxt = set()
        for s in frontier:
            for v in vectors:
                nxt.add(tuple(x + y for x, y in zip(s, v)))
        sums |= nxt
        frontier = nxt
    return sorted(sums)


def colon_membership(P: DiffOperator, system: BoxSystem, q_support_level: int = 2,
                     z_degree: Optional[int] = None, extra_degree: int = 0) -> CofactorCertificate:
    """Certify ctop * P in the left ideal generated by the boxes.

    Unknown cofactor coefficients range over q^beta z^j D^alpha with
    |alpha| <= deg(ctop P) - deg(box_c) + extra_degree, j <= z_degree and
    beta in the q-support of ctop P shifted back by sums of at most
    ``q_support_level`` primitive classes.  Raises Undetermined when the
    linear system has no solution at these bounds.
    """
    from .exact import RHS, SparseSystem

    model = system.model
    r = model.r
    target = op_mul(system.ctop, P)
    if not target:
        return CofactorCertificate(P, system.ctop, [DiffOperator(r) for _ in system.boxes],
                                   system.classes, {"degree": -1}, 0, True)
    D = target.degree()
    Z = D if z_degree is None else z_degree
    qcoords = [model.basis.coords(c) for c in system.classes]
    shifts = _small_sums(qcoords, q_support_level, r)
    support = sorted({tuple(t - s for t, s in zip(tq, sh))
                      for tq in target.q_support() for sh in shifts})
    unknowns = []  # (class index, key)
    for ci, box in enumerate(system.boxes):
        budget = D + extra_degree - box.degree()
        if budget < 0:
            continue
        alphas = [a for a in itertools.product(range(budget + 1), repeat=r) if sum(a) <= budget]
        for beta in support:
            for j in range(Z + 1):
                for a in alphas:
                    unknowns.append((ci, (beta, j, a, 0)))
    rows: Dict[Key, Dict[int, Fraction]] = {}
    for vi, (ci, key) in enumerate(unknowns):
        prod = op_mul(DiffOperator(r, {key: 1}), system.boxes[ci])
        for k, c in prod.terms.items():
            rows.setdefault(k, {})[vi] = c
    for k, c in target.terms.items():
        rows.setdefault(k, {})[RHS] = c
    sysm = SparseSystem()
    for k in sorted(rows):
        sysm.add(rows[k])
        if sysm.inconsistent:
            break
    bounds = {"degree": D, "z_degree": Z, "q_support": support,
              "q_support_level": q_support_level, "extra_degree": extra_degree}
    if sysm.inconsistent:
        raise Undetermined(f"no cofactors with {len(unknowns)} unknowns at bounds {bounds}")
    sol = sysm.solution()
    cof = [dict() for _ in system.boxes]
    for vi, v in sol.items():
        ci, key = unknowns[vi]
        cof[ci][key] = v
    cert = CofactorCertificate(P, system.ctop, [DiffOperator(r, c) for c in cof],
                               system.classes, bounds, len(unknowns))
    cert.verified = verify_certificate(cert, system)
    if not cert.verified:
        raise Undetermined("solver output failed independent verification")
    return cert


# ---------------------------------------------------------------------------
# independent check: action on q^lambda


def _action(P: DiffOperator, state, lam, zsym):
    """Apply P to sum_mu q^(lambda + mu) g_mu(lambda, z).

    D_a multiplies q^(lambda+mu) g by z (lambda_a + mu_a); q and z multiply.
    This representation is faithful on operators without z d/dz.
    """
    if P.has_euler():
        raise ValueError("action check needs operators without z d/dz")
    out = {}
    for mu, g in state.items():
        for (b, j, a, _), c in P.terms.items():
            f = g * c * zsym ** j
            for ai, e in enumerate(a):
                if e:
                    f = f * (zsym * (lam[ai] + mu[ai])) ** e
            key = tuple(x + y for x, y in zip(mu, b))
            out[key] = out.get(key, 0) + f
    return {k: v for k, v in out.items() if v != 0}


def _sympy_setup(r: int):
    import sympy
    zsym = sympy.Symbol("z")
    lam = sympy.symbols(f"l0:{r}")
    gens = (zsym,) + tuple(lam)
    one = sympy.Poly(1, *gens, domain="QQ")
    return zsym, [sympy.Poly(l, *gens, domain="QQ") for l in lam], sympy.Poly(zsym, *gens, domain="QQ"), one


def act_on_qpower(P: DiffOperator):
    """P(q^lambda) as {mu: polynomial in z, lambda}."""
    _, lam, zp, one = _sympy_setup(P.r)
    return _action(P, {(0,) * P.r: one}, lam, zp)


def verify_certificate(cert: CofactorCertificate, system: BoxSystem) -> bool:
    """Check ctop P = sum B_c box_c by acting on q^lambda with sympy.

    Shares nothing with ``op_mul``: each side is evaluated as a composition
    of actions on q^lambda times polynomials in (z, lambda).
    """
    r = cert.target.r
    _, lam, zp, one = _sympy_setup(r)
    start = {(0,) * r: one}
    lhs = _action(cert.ctop, _action(cert.target, start, lam, zp), lam, zp)
    rhs: Dict = {}
    for B, box in zip(cert.cofactors, system.boxes):
        if not B:
            continue
        part = _action(B, _action(box, start, lam, zp), lam, zp)
        for k, v in part.items():
            rhs[k] = rhs.get(k, 0) + v
    keys = set(lhs) | set(rhs)
    return all((lhs.get(k, 0) - rhs.get(k, 0)) == 0 for k in keys)


def ops_equal_by_action(A: DiffOperator, B: DiffOperator) -> bool:
    a, b = act_on_qpower(A), act_on_qpower(B)
    return all((a.get(k, 0) - b.get(k, 0)) == 0 for k in set(a) | set(b))


def proportional(A: DiffOperator, B: DiffOperator) -> Optional[Fraction]:
    """lambda with A = lambda B, or None."""
    if not A or not B or set(A.terms) != set(B.terms):
        return None
    k0 = next(iter(B.terms))
    lam = A.terms[k0] / B.terms[k0]
    if all(A.terms[k] == lam * B.terms[k] for k in B.terms):
        return lam
    return None


# ---------------------------------------------------------------------------
# S-pair residuals


def _to_comm(P: DiffOperator, ring: PolyRing) -> Poly:
    """Operator in Q[z][D] (no q, no E) as a commutative polynomial."""
    out = {}
    for (b, j, a, g), c in P.terms.items():
        if any(b) or g:
            raise ValueError("operator is not in Q[z][D]")
        out[tuple(a) + (j,)] = c
    return Poly(ring, out)


def _from_comm(p: Poly, r: int) -> DiffOperator:
    return DiffOperator(r, {((0,) * r, e[r], tuple(e[:r]), 0): c for e, c in p.terms.items()})


def _comm_ring(r: int) -> PolyRing:
    return PolyRing([f"D{a + 1}" for a in range(r)] + ["z"], QQ)


def split_box(model: ToricModel, d: Sequence[int], ctop: DiffOperator):
    """(P1, W) with box_d = P1 - ctop W; needs every L_i . d > 0."""
    r = model.r
    z = DiffOperator.zvar(r)
    degs = model.bundle_degrees(d)
    if any(x <= 0 for x in degs):
        raise ValueError("split form needs L_i . d > 0 for every bundle")
    parts = box_parts(model, d)
    W = DiffOperator.qmono(parts.qexp)
    for i, di in enumerate(degs):
        Lh = quantize(model.bundle_tcoords()[i], r)
        W = W * pochhammer(Lh + z * (di - 1), di - 1)
    for th in model.delta.base_indices:
        if d[th] < 0:
            W = W * pochhammer(quantize(model.ray_tcoords(th), r), -d[th])
    if parts.first - op_mul(ctop, W) != box_operator(model, d):
        raise AssertionError("box operator does not split as P1 - ctop W")
    return parts.first, W


def _divide_with_quotients(f: Poly, divisors: Sequence[Poly], order):
    """f = sum q_i g_i + rem by multivariate division (commutative)."""
    quos = [f.ring.zero() for _ in divisors]
    p = f.copy()
    rem = f.ring.zero()
    lms = [order.leading(g) for g in divisors]
    while p:
        e = order.leading(p)
        c = p.terms[e]
        for i, (g, lm) in enumerate(zip(divisors, lms)):
            if all(x <= y for x, y in zip(lm, e)):
                m = f.ring.monomial(tuple(x - y for x, y in zip(e, lm)), c / g.terms[lm])
                quos[i] = quos[i] + m
                p = p - m * g
                break
        else:
            t = f.ring.monomial(e, c)
            rem = rem + t
            p = p - t
    return quos, rem


@dataclass
class SPairResult:
    U: DiffOperator
    V: DiffOperator
    T: DiffOperator
    method: str


def quotient_residual(system: BoxSystem, ci: int) -> Optional[DiffOperator]:
    """When ctop divides the first half of box_c, return T with ctop T = box_c."""
    model = system.model
    r = model.r
    if model.k == 0:
        return None
    P1, W = split_box(model, system.classes[ci], system.ctop)
    ring = _comm_ring(r)
    order = grevlex(ring.nvars)
    (quo,), rem = _divide_with_quotients(_to_comm(P1, ring), [_to_comm(system.ctop, ring)], order)
    if rem:
        return None
    return _from_comm(quo, r) - W


def spair_residual(system: BoxSystem, c1: int, c2: int) -> SPairResult:
    """U box_c1 - V box_c2 = ctop T with U, V in Q[z][D].

    The S-pair is formed between the first halves reduced modulo ctop; if
    that reduction does not close up, fall back to the plain lcm S-pair of
    the first halves.
    """
    model = system.model
    r = model.r
    zero = DiffOperator(r)
    one = DiffOperator.const(r)
    if c1 == c2:
        return SPairResult(one, one, zero, "self")
    ctop = system.ctop
    P1a, Wa = split_box(model, system.classes[c1], ctop)
    P1b, Wb = split_box(model, system.classes[c2], ctop)
    ring = _comm_ring(r)
    order = grevlex(ring.nvars)
    g = _to_comm(ctop, ring)
    fa, fb = _to_comm(P1a, ring), _to_comm(P1b, ring)
    (qa,), ra = _divide_with_quotients(fa, [g], order)
    (qb,), rb = _divide_with_quotients(fb, [g], order)
    result = None
    if ra and rb:
        la, lb = order.leading(ra), order.leading(rb)
        lcm = tuple(max(x, y) for x, y in zip(la, lb))
        u = ring.monomial(tuple(x - y for x, y in zip(lcm, la)), 1 / Fraction(ra.terms[la]))
        v = ring.monomial(tuple(x - y for x, y in zip(lcm, lb)), 1 / Fraction(rb.terms[lb]))
        s = u * ra - v * rb
        (alpha, b1, b2), rem = _divide_with_quotients(s, [g, ra, rb], order)
        if not rem:
            U, V = u - b1, v + b2
            # U fa - V fb = g K
            K, krem = _divide_with_quotients(U * fa - V * fb, [g], order)
            assert not krem
            result = (U, V, K[0], "reduced")
    if result is None:
        # plain S-pair of the first halves
        la, lb = order.leading(fa), order.leading(fb)
        lcm = tuple(max(x, y) for x, y in zip(la, lb))
        U = ring.monomial(tuple(x - y for x, y in zip(lcm, la)), 1 / Fraction(fa.terms[la]))
        V = ring.monomial(tuple(x - y for x, y in zip(lcm, lb)), 1 / Fraction(fb.terms[lb]))
        K, krem = _divide_with_quotients(U * fa - V * fb, [g], order)
        if krem:
            raise Undetermined("leading halves do not cancel modulo ctop")
        result = (U, V, K[0], "lcm")
    U, V, K, method = result
    Uo, Vo = _from_comm(U, r), _from_comm(V, r)
    T = _from_comm(K, r) - op_mul(Uo, Wa) + op_mul(Vo, Wb)
    lhs = op_mul(Uo, system.boxes[c1]) - op_mul(Vo, system.boxes[c2])
    if lhs != op_mul(ctop, T):
        raise AssertionError("S-pair identity failed")
    return SPairResult(Uo, Vo, T, method)


@dataclass
class ColonCandidate:
    name: str
    op: DiffOperator
    certificate: Optional[CofactorCertificate]


def candidate_colon_generators(system: BoxSystem, certify: bool = True,
                               q_support_level: int = 2) -> List[ColonCandidate]:
    """Boxes, quotient residuals and S-pair residuals, each certified.

    The list is only conjectured to generate the colon ideal.
    """
    model = system.model
    out: List[ColonCandidate] = []

    def cert(P):
        return colon_membership(P, system, q_support_level) if certify else None

    for ci, box in enumerate(system.boxes):
        out.append(ColonCandidate(f"box[{ci}]", box, cert(box)))
    if model.k == 0:
        return out
    for ci in range(len(system.boxes)):
        T = quotient_residual(system, ci)
        if T:
            out.append(ColonCandidate(f"quotient[{ci}]", T, cert(T)))
    for c1, c2 in itertools.combinations(range(len(system.boxes)), 2):
        T = spair_residual(system, c1, c2).T
        if not T or any(proportional(T, o.op) for o in out):
            continue
        out.append(ColonCandidate(f"spair[{c1},{c2}]", T, cert(T)))
    return out


# ---------------------------------------------------------------------------
# bridge to the Batyrev algebra (z -> 0)


def q_sign_twist(model: ToricModel) -> Tuple[int, ...]:
    """(-1)^(sum_i L_i . B_a) per a; relates the operator and Batyrev sides."""
    return tuple((-1) ** (sum(model.bundle_degrees(b)) % 2) for b in model.basis.basis)


def bridge_image(P: DiffOperator, model: ToricModel, ring: PolyRing, twist: bool = True) -> Poly:
    """Image of P under z -> 0, D_a -> T_a (a linear form in x), q_a -> s_a q_a.

    T_a is represented by a ray-form divisor dual to B_a; every D_rho then
    maps to x_rho modulo the linear relations.
    """
    from .curveclasses import dual_divisors

    if P.has_euler():
        raise ValueError("bridge needs operators without z d/dz")
    duals = dual_divisors(model.basis, model.delta.n_rays)
    tforms = []
    for t in duals:
        p = ring.zero()
        for i, c in enumerate(t):
            if c:
                p = p + ring.var(i) * Fraction(c)
        tforms.append(p)
    signs = q_sign_twist(model) if twist else (1,) * model.r
    field = ring.field
    out = ring.zero()
    cache: Dict[Tuple[int, ...], Poly] = {}
    for (b, j, a, _), c in P.terms.items():
        if j:
            continue
        mono = cache.get(a)
        if mono is None:
            mono = ring.one()
            for ai, e in enumerate(a):
                if e:
                    mono = mono * tforms[ai] ** e
            cache[a] = mono
        sign = 1
        for s, e in zip(signs, b):
            sign *= s ** (e % 2)
        out = out + mono * (field.param_monomial(b) * field.convert(c * sign))
    return out


# ---------------------------------------------------------------------------
# rendering


def _fmt_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def fmt_op(P: DiffOperator, qnames: Optional[Sequence[str]] = None, bare: bool = False) -> str:
    """Readable form, e.g. ``[zδq]^3 - 27*q*[zδq]^3 - ...``.

    ``[zδq_a]`` stands for z q_a d/dq_a and ``[zδz]`` for z^2 d/dz.
    """
    r = P.r
    if qnames is None:
        qnames = [f"q{a + 1}" for a in range(r)] if r > 1 else ["q"]
    if not P.terms:
        return "0"

    def sort_key(k):
        b, j, a, g = k
        return (-(sum(a) + g), tuple(-x for x in a), -g, b, j)

    parts = []
    for k in sorted(P.terms, key=sort_key):
        b, j, a, g = k
        c = P.terms[k]
        factors = []
        for name, e in zip(qnames, b):
            if e:
                factors.append(name if e == 1 else f"{name}^{e}")
        if j:
            factors.append("z" if j == 1 else f"z^{j}")
        for name, e in zip(qnames, a):
            if e:
                dname = f"zδ{name}" if bare else f"[zδ{name}]"
                factors.append(dname + ("" if e == 1 else f"^{e}"))
        if g:
            factors.append("[zδz]" + ("" if g == 1 else f"^{g}"))
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not factors:
            body = _fmt_coef(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coef(mag) + "*" + "*".join(factors)
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


@dataclass
class BridgeReport:
    boxes_to_relations: List[bool]
    certificates_in_ideal: List[bool]
    sign_twist: Tuple[int, ...]

    @property
    def ok(self) -> bool:
        return all(self.boxes_to_relations) and all(self.certificates_in_ideal)


def bridge_check(system: BoxSystem, certificates: Sequence[CofactorCertificate] = (),
                 twist: bool = True) -> BridgeReport:
    """z -> 0 sends each box to its quantum Stanley-Reisner relation and
    each certified colon element P to x_top * P in QSR + Lin."""
    from .batyrev import batyrev_gb, build_ideals, qsr_generator, x_top

    model = system.model
    ideals = build_ideals(model)
    ring = ideals.ring
    lin_gb = buchberger(ideals.lin, grevlex(ring.nvars), ring)
    boxes_ok = []
    for c, box in zip(system.classes, system.boxes):
        diff = bridge_image(box, model, ring, twist) - qsr_generator(model, ring, c)
        boxes_ok.append(not normal_form(diff, lin_gb))
    certs_ok = []
    if certificates:
        gb = batyrev_gb(ideals)
        xt = x_top(model, ring)
        for cert in certificates:
            certs_ok.append(not normal_form(xt * bridge_image(cert.target, model, ring, twist), gb))
    return BridgeReport(boxes_ok, certs_ok, q_sign_twist(model))


def render_box(model: ToricModel, d: Sequence[int]) -> str:
    """Factored form with Pochhammer brackets, e.g. ``(zδq)^3 - q*[3*zδq + 3*z]_3``."""
    r = model.r
    qn = model.qnames()
    z = DiffOperator.zvar(r)
    first: List[Tuple[str, int]] = []
    second: List[Tuple[str, int]] = []
    for i, di in enumerate(model.bundle_degrees(d)):
        if di:
            k = abs(di)
            Lh = quantize(model.bundle_tcoords()[i], r)
            (first if di < 0 else second).append((fmt_op(Lh + z * k, qn, bare=True), k))
    for th in model.delta.base_indices:
        dt = d[th]
        if dt:
            Dh = fmt_op(quantize(model.ray_tcoords(th), r), qn, bare=True)
            (first if dt > 0 else second).append((Dh, abs(dt)))

    def product(factors):
        counts: Dict[Tuple[str, int], int] = {}
        for f in factors:
            counts[f] = counts.get(f, 0) + 1
        out = []
        for (body, k), mult in counts.items():
            if k == 1:
                simple = all(ch not in body for ch in " +-*")
                term = body if simple else f"({body})"
            else:
                term = f"[{body}]_{k}"
            out.append(term if mult == 1 else f"{term}^{mult}")
        return out

    qexp = model.basis.coords(d)
    qm = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(qn, qexp) if e)
    lhs = "*".join(product(first)) or "1"
    rhs = "*".join(([qm] if qm else []) + product(second)) or "1"
    return f"{lhs} - {rhs}"
