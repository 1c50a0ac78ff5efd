"""Buchberger's algorithm, normal forms, quotient bases and colon ideals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .poly import Exp, MonomialOrder, Poly, PolyRing


class GroebnerError(ValueError):
    pass


@dataclass
class GroebnerBasis:
    ring: PolyRing
    order: MonomialOrder
    polys: List[Poly]
    # leading coefficients divided out while making polynomials monic; over
    # Q(q) these certify where a specialisation of q may change the basis
    normalizers: List[object] = field(default_factory=list)

    @property
    def leading_monomials(self) -> List[Exp]:
        return [self.order.leading(g) for g in self.polys]

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(p: Poly, order: MonomialOrder, record: Optional[list]) -> Poly:
    lm = order.leading(p)
    lc = p.terms[lm]
    if lc == p.ring.field.one:
        return p
    if record is not None and not p.ring.field.is_constant(lc):
        record.append(lc)
    inv = p.ring.field.one / lc
    return Poly(p.ring, {e: c * inv for e, c in p.terms.items()})


def _reduce_terms(terms: Dict[Exp, object], basis: Sequence[Tuple[Exp, Dict[Exp, object]]],
                  order: MonomialOrder, full: bool = True) -> Dict[Exp, object]:
    """Remainder of ``terms`` modulo monic polynomials given as (lm, terms)."""
    p = dict(terms)
    rem: Dict[Exp, object] = {}
    key = order.key
    while p:
        e = max(p, key=key)
        c = p[e]
        for lm, g in basis:
            if _divides(lm, e):
                shift = tuple(x - y for x, y in zip(e, lm))
                for ge, gc in g.items():
                    t = tuple(a + b for a, b in zip(ge, shift))
                    v = p.get(t)
                    v = -c * gc if v is None else v - c * gc
                    if v == 0:
                        p.pop(t, None)
                    else:
                        p[t] = v
                break
        else:
            rem[e] = c
            del p[e]
            if not full:
                rem.update(p)
                break
    return rem


def normal_form(p: Poly, gb: GroebnerBasis) -> Poly:
    basis = [(gb.order.leading(g), g.terms) for g in gb.polys]
    return Poly(p.ring, _reduce_terms(p.terms, basis, gb.order))


def buchberger(gens: Sequence[Poly], order: MonomialOrder, ring: Optional[PolyRing] = None) -> GroebnerBasis:
    """Reduced Groebner basis, S-pairs processed by smallest lcm first."""
    gens = [g for g in gens if g]
    if ring is None:
        if not gens:
            raise GroebnerError("ring required for the zero ideal")
        ring = gens[0].ring
    if not order.is_well_order():
        raise GroebnerError("monomial order is not a well-order (negative weight)")
    for g in gens:
        for e in g.terms:
            ring.check_exp(e)
    record: list = []
    G: List[Tuple[Exp, Dict[Exp, object]]] = []
    pairs: Set[Tuple[int, int]] = set()

    def add(p: Poly):
        p = _monic(p, order, record)
        lm = order.leading(p)
        idx = len(G)
        G.append((lm, p.terms))
        for i in range(idx):
            pairs.add((i, idx))

    for g in gens:
        r = _reduce_terms(g.terms, G, order)
        if r:
            add(Poly(ring, r))
    key = order.key
    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_lcm(G[ij[0]][0], G[ij[1]][0])), ij))
        pairs.discard((i, j))
        lmi, gi = G[i]
        lmj, gj = G[j]
        lcm = _lcm(lmi, lmj)
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue
        chain = False
        for k, (lmk, _) in enumerate(G):
            if k in (i, j) or not _divides(lmk, lcm):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                chain = True
                break
        if chain:
            continue
        si = tuple(a - b for a, b in zip(lcm, lmi))
        sj = tuple(a - b for a, b in zip(lcm, lmj))
        s: Dict[Exp, object] = {}
        for e, c in gi.items():
            s[tuple(a + b for a, b in zip(e, si))] = c
        for e, c in gj.items():
            t = tuple(a + b for a, b in zip(e, sj))
            v = s.get(t)
            v = -c if v is None else v - c
            if v == 0:
                s.pop(t, None)
            else:
                s[t] = v
        r = _reduce_terms(s, G, order)
        if r:
            add(Poly(ring, r))
    # minimalise then interreduce
    keep = []
    for idx, (lm, g) in enumerate(G):
        if any(_divides(G[o][0], lm) and (G[o][0] != lm or o < idx)
               for o in range(len(G)) if o != idx):
            continue
        keep.append((lm, g))
    out = []
    for idx, (lm, g) in enumerate(keep):
        others = [kg for o, kg in enumerate(keep) if o != idx]
        tail = {e: c for e, c in g.items() if e != lm}
        red = _reduce_terms(tail, others, order)
        red[lm] = g[lm]
        out.append(Poly(ring, red))
    out.sort(key=lambda p: key(order.leading(p)))
    return GroebnerBasis(ring, order, out, record)


def contains(gb: GroebnerBasis, p: Poly) -> bool:
    return not normal_form(p, gb)


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    lms = gb.leading_monomials
    for i in range(gb.ring.nvars):
        if not any(e[i] > 0 and sum(e) == e[i] for e in lms):
            return False
    return True


def quotient_basis(gb: GroebnerBasis, limit: int = 100000) -> List[Exp]:
    """Standard monomials (not divisible by any leading monomial)."""
    lms = gb.leading_monomials
    n = gb.ring.nvars
    if any(sum(e) == 0 for e in lms):
        return []
    if not is_zero_dimensional(gb):
        raise GroebnerError("quotient is infinite dimensional")
    out: List[Exp] = []
    seen = {(0,) * n}
    stack = [(0,) * n]
    while stack:
        e = stack.pop()
        if any(_divides(lm, e) for lm in lms):
            continue
        out.append(e)
        if len(out) > limit:
            raise GroebnerError("quotient basis exceeds limit")
        for i in range(n):
            f = e[:i] + (e[i] + 1,) + e[i + 1:]
            if f not in seen:
                seen.add(f)
                stack.append(f)
    out.sort(key=gb.order.key)
    return out


def vs_dim(gb: GroebnerBasis):
    """Dimension of the quotient as a vector space; math.inf when infinite."""
    if not is_zero_dimensional(gb) and not any(sum(e) == 0 for e in gb.leading_monomials):
        return math.inf
    return len(quotient_basis(gb))


def exact_divide(p: Poly, f: Poly, order: MonomialOrder) -> Poly:
    """Quotient p / f, raising if f does not divide p."""
    lm = order.leading(f)
    lc = f.terms[lm]
    rem = dict(p.terms)
    quo: Dict[Exp, object] = {}
    key = order.key
    while rem:
        e = max(rem, key=key)
        if not _divides(lm, e):
            raise GroebnerError("polynomial is not divisible")
        c = rem[e] / lc
        shift = tuple(a - b for a, b in zip(e, lm))
        quo[shift] = quo.get(shift, 0) + c
        for fe, fc in f.terms.items():
            t = tuple(a + b for a, b in zip(fe, shift))
            v = rem.get(t)
            v = -c * fc if v is None else v - c * fc
            if v == 0:
                rem.pop(t, None)
            else:
                rem[t] = v
    return Poly(p.ring, {e: c for e, c in quo.items() if c != 0})


def _lift(p: Poly, ring: PolyRing) -> Poly:
    return Poly(ring, {(0,) + e: c for e, c in p.terms.items()})


def _eliminate_tag(polys: Sequence[Poly], ring: PolyRing) -> List[Poly]:
    return [Poly(ring, {e[1:]: c for e, c in g.terms.items()})
            for g in polys if all(e[0] == 0 for e in g.terms)]


def ideal_intersection(I: Sequence[Poly], J: Sequence[Poly], order: MonomialOrder) -> GroebnerBasis:
    """I meet J via t*I + (1-t)*J and elimination of t."""
    ring = (list(I) + list(J))[0].ring
    ext = ring.extend("_t")
    t = ext.var(0)
    gens = [t * _lift(g, ext) for g in I] + [(1 - t) * _lift(g, ext) for g in J]
    gb = buchberger(gens, order.extended(), ext)
    out = buchberger(_eliminate_tag(gb.polys, ring), order, ring)
    out.normalizers = gb.normalizers + out.normalizers
    return out


def colon_ideal(I: Sequence[Poly], f: Poly, order: MonomialOrder) -> GroebnerBasis:
    """(I : f) = (I meet <f>) / f."""
    ring = f.ring
    if not f:
        return buchberger([ring.one()], order, ring)
    inter = ideal_intersection(I, [f], order)
    quots = [exact_divide(g, f, order) for g in inter.polys]
    gb = buchberger(quots, order, ring)
    gb.normalizers = inter.normalizers + gb.normalizers
    return gb


def same_ideal(a: GroebnerBasis, b: GroebnerBasis) -> bool:
    return all(contains(b, g) for g in a.polys) and all(contains(a, g) for g in b.polys)
