"""Stanley-Reisner type ideals, the Batyrev algebra, its residual quotient
and the cohomology ring of the base."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .curveclasses import plus_minus
from .exact import det, nullspace, rank
from .model import ToricModel
from .polyalg import (QQ, GroebnerBasis, Poly, PolyRing, RationalFunctionField, buchberger,
                      colon_ideal, grevlex, normal_form, quotient_basis, vs_dim, weight_order)


@dataclass
class IdealFamily:
    model: ToricModel
    ring: PolyRing  # x_rho over Q(q)
    hring: PolyRing  # x_rho, h over Q(q)
    qsr: List[Poly]
    sr: List[Poly]
    lin: List[Poly]
    qsr_h: List[Poly]

    @property
    def field(self):
        return self.ring.field


def xnames(model: ToricModel) -> List[str]:
    return [f"x{i + 1}" for i in range(model.delta.n_rays)]


def _binomial(ring: PolyRing, plus, minus, coef, extra_plus=(), extra_minus=()) -> Poly:
    return (ring.monomial(tuple(plus) + tuple(extra_plus))
            - ring.monomial(tuple(minus) + tuple(extra_minus), coef))


def qsr_generator(model: ToricModel, ring: PolyRing, d: Sequence[int]) -> Poly:
    """R_d = x^{d+} - Q^d x^{d-}."""
    p, m = plus_minus(d)
    return _binomial(ring, p, m, ring.field.param_monomial(model.basis.coords(d)))


def homogenized_generator(model: ToricModel, hring: PolyRing, d: Sequence[int]) -> Poly:
    """R_d^h = x^{d+} h^{k+} - Q^d h^{k-} x^{d-} with k = K_Y . d."""
    p, m = plus_minus(d)
    kk = -sum(d)
    return _binomial(hring, p, m, hring.field.param_monomial(model.basis.coords(d)),
                     (max(kk, 0),), (max(-kk, 0),))


def lin_generators(model: ToricModel, ring: PolyRing) -> List[Poly]:
    delta = model.delta
    out = []
    for j in range(delta.rank):
        p = ring.zero()
        for i, v in enumerate(delta.rays):
            if v[j]:
                p = p + ring.var(i) * v[j]
        out.append(p)
    return out


def build_ideals(model: ToricModel, field=None) -> IdealFamily:
    field = field or RationalFunctionField(model.qnames())
    names = xnames(model)
    ring = PolyRing(names, field)
    hring = PolyRing(names + ["h"], field)
    qsr = [qsr_generator(model, ring, c) for c in model.gens.classes]
    sr = [ring.monomial(plus_minus(c)[0]) for c in model.gens.classes]
    lin = lin_generators(model, ring)
    qsr_h = [homogenized_generator(model, hring, c) for c in model.gens.classes]
    return IdealFamily(model, ring, hring, qsr, sr, lin, qsr_h)


def x_top(model: ToricModel, ring: PolyRing) -> Poly:
    out = ring.one()
    for i in model.delta.bundle_indices:
        out = out * (-ring.var(i))
    return out


# ---------------------------------------------------------------------------
# cohomology ring


@dataclass
class CohRing:
    ring: PolyRing
    gb: GroebnerBasis
    basis: List[Tuple[int, ...]]
    table: Dict[Tuple[int, int], Tuple[Fraction, ...]] = field(repr=False)
    degrees: List[int]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, p: Poly) -> Tuple[Fraction, ...]:
        nf = normal_form(p, self.gb)
        idx = {e: i for i, e in enumerate(self.basis)}
        out = [Fraction(0)] * self.dim
        for e, c in nf.terms.items():
            out[idx[e]] = Fraction(c)
        return tuple(out)

    def unit(self) -> Tuple[Fraction, ...]:
        return self.coords(self.ring.one())

    def mul(self, u: Sequence, v: Sequence) -> Tuple[Fraction, ...]:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.table[(i, j)]):
                    if c:
                        out[k] += ab * c
        return tuple(out)

    def add(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def scale(self, c, u):
        return tuple(c * a for a in u)

    def divisor(self, rho: int) -> Tuple[Fraction, ...]:
        return self.coords(self.ring.var(rho))

    def mult_matrix(self, u: Sequence) -> List[List[Fraction]]:
        """Matrix of v -> u v, columns indexed by basis monomials."""
        cols = []
        for j in range(self.dim):
            e = [Fraction(0)] * self.dim
            e[j] = Fraction(1)
            cols.append(self.mul(u, e))
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def fmt(self, u: Sequence) -> str:
        parts = []
        for c, e in zip(u, self.basis):
            if c:
                parts.append(f"{c}*{self.ring.monomial(e)}" if any(e) else f"{c}")
        return " + ".join(parts) or "0"


def cohomology_ring(model: ToricModel) -> CohRing:
    if "coh" in model._cache:
        return model._cache["coh"]
    ring = PolyRing(xnames(model), QQ)
    sr = [ring.monomial(plus_minus(c)[0]) for c in model.gens.classes]
    lin = lin_generators(model, ring)
    gb = buchberger(sr + lin, grevlex(ring.nvars), ring)
    basis = quotient_basis(gb)
    idx = {e: i for i, e in enumerate(basis)}
    table = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            if j < i:
                table[(i, j)] = table[(j, i)]
                continue
            nf = normal_form(ring.monomial(tuple(x + y for x, y in zip(a, b))), gb)
            v = [Fraction(0)] * len(basis)
            for e, c in nf.terms.items():
                v[idx[e]] = Fraction(c)
            table[(i, j)] = tuple(v)
    coh = CohRing(ring, gb, basis, table, [sum(e) for e in basis])
    model._cache["coh"] = coh
    return coh


@dataclass
class CtopElement:
    x_top: Poly
    c_top: Tuple[Fraction, ...]
    tcoords: List[tuple]  # basis form of each L_i


def ctop_element(model: ToricModel, coh: CohRing, ring: Optional[PolyRing] = None) -> CtopElement:
    xt = x_top(model, ring or coh.ring)
    c = coh.unit()
    for i in model.delta.bundle_indices:
        c = coh.mul(c, coh.scale(-1, coh.divisor(i)))
    return CtopElement(xt, c, model.bundle_tcoords())


def ker_dim_ctop(coh: CohRing, ctop: CtopElement) -> int:
    return coh.dim - rank(coh.mult_matrix(ctop.c_top))


# ---------------------------------------------------------------------------
# ranks


def max_cone_count(model: ToricModel) -> int:
    return len(model.fan.max_cones)


def det_volume(model: ToricModel) -> int:
    """sum over maximal cones of Delta of |det| (simplex decomposition)."""
    d = model.delta
    return sum(abs(int(det([d.rays[i] for i in sorted(c)]))) for c in d.max_cones)


def hull_volume(points: Sequence[Sequence[int]]) -> Fraction:
    """dim! times the volume of conv(points), by a pulling triangulation.

    Works from the point set alone: facets are found by brute force over
    affinely spanning subsets, then each facet not containing the pulled
    vertex is coned off recursively.
    """
    pts = [tuple(Fraction(x) for x in p) for p in points]
    dim = len(pts[0])
    simplices = _pull(list(range(len(pts))), pts)
    if len(simplices[0]) != dim + 1:
        raise ValueError("point set is not full dimensional")
    total = Fraction(0)
    for simplex in simplices:
        base = pts[simplex[0]]
        total += abs(det([[a - b for a, b in zip(pts[i], base)] for i in simplex[1:]]))
    return total


def _affine_dim(idx, pts) -> int:
    if len(idx) <= 1:
        return 0
    b = pts[idx[0]]
    return rank([[a - c for a, c in zip(pts[i], b)] for i in idx[1:]])


def _pull(idx: List[int], pts) -> List[Tuple[int, ...]]:
    dim = _affine_dim(idx, pts)
    if dim == 0:
        return [(idx[0],)]
    v = min(idx, key=lambda i: pts[i])
    out = []
    for facet in _facets(idx, pts, dim):
        if v in facet:
            continue
        for s in _pull(sorted(facet), pts):
            out.append((v,) + s)
    return out


def _facets(idx, pts, dim) -> List[frozenset]:
    """Facets of conv(pts[idx]) inside its own affine hull."""
    b = pts[idx[0]]
    diffs = [[a - c for a, c in zip(pts[i], b)] for i in idx]
    amb = len(b)
    # normals must lie in the span of the differences
    span_null = nullspace(diffs, amb)  # directions orthogonal to the hull
    found = []
    for sub in combinations(idx, dim):
        rows = [[a - c for a, c in zip(pts[i], pts[sub[0]])] for i in sub[1:]] + span_null
        ns = nullspace(rows, amb) if rows else [[Fraction(int(j == 0)) for j in range(amb)]]
        if len(ns) != 1:
            continue
        a = ns[0]
        val = sum(x * y for x, y in zip(a, pts[sub[0]]))
        side = [sum(x * y for x, y in zip(a, pts[i])) - val for i in idx]
        if all(s <= 0 for s in side) or all(s >= 0 for s in side):
            f = frozenset(i for i, s in zip(idx, side) if s == 0)
            if f not in found:
                found.append(f)
    return found


def volume_rank(model: ToricModel) -> int:
    d = model.delta
    pts = [(0,) * d.rank] + list(d.rays)
    v = hull_volume(pts)
    if v.denominator != 1:
        raise ValueError("non-integral normalised volume")
    return int(v)


@dataclass
class RankReport:
    cohomology: int
    max_cones: int
    det_sum: int
    hull_volume: int

    @property
    def agree(self) -> bool:
        return self.cohomology == self.max_cones == self.det_sum == self.hull_volume


def rank_triple(model: ToricModel) -> RankReport:
    return RankReport(cohomology_ring(model).dim, max_cone_count(model), det_volume(model),
                      volume_rank(model))


def batyrev_gb(ideals: IdealFamily) -> GroebnerBasis:
    return buchberger(ideals.qsr + ideals.lin, grevlex(ideals.ring.nvars), ideals.ring)


def batyrev_rank_generic(ideals: IdealFamily):
    return vs_dim(batyrev_gb(ideals))


def residual_ideal(ideals: IdealFamily) -> GroebnerBasis:
    model = ideals.model
    if not model.bundles_ample():
        raise ValueError("residual algebra requires every bundle to be ample")
    return colon_ideal(ideals.qsr + ideals.lin, x_top(model, ideals.ring), grevlex(ideals.ring.nvars))


@dataclass
class ResidualReport:
    colon_rank: object
    cohomology_dim: int
    ker_ctop: int
    quotient_by_xtop: object
    discriminant: List[str]

    @property
    def consistent(self) -> bool:
        return (self.colon_rank == self.cohomology_dim - self.ker_ctop
                and self.quotient_by_xtop == self.ker_ctop)


def residual_rank(ideals: IdealFamily) -> ResidualReport:
    model = ideals.model
    gb = residual_ideal(ideals)
    coh = cohomology_ring(model)
    ct = ctop_element(model, coh)
    ker = ker_dim_ctop(coh, ct)
    mod_top = buchberger(ideals.qsr + ideals.lin + [x_top(model, ideals.ring)],
                         grevlex(ideals.ring.nvars), ideals.ring)
    return ResidualReport(vs_dim(gb), coh.dim, ker, vs_dim(mod_top),
                          discriminant(gb.normalizers + mod_top.normalizers))


def discriminant(normalizers: Sequence) -> List[str]:
    """Distinct nonconstant numerators/denominators, as primitive integer
    polynomials with positive constant term (positive leading coefficient
    when the constant term vanishes)."""
    seen = {}
    for c in normalizers:
        for p in (c.numer, c.denom):
            if p.is_ground:
                continue
            p = p.clear_denoms()[1].primitive()[1]
            const = dict.get(p, p.ring.zero_monom, 0)
            lead = const if const else p.LC
            if lead < 0:
                p = -p
            s = str(p.as_expr())
            seen.setdefault(s, p)
    return sorted(seen)


# ---------------------------------------------------------------------------
# initial ideals


def omega_order(ideals: IdealFamily, with_h: bool):
    w = list(ideals.model.phi.omega())
    if with_h:
        w.append(Fraction(0))
    return weight_order(w)


def _monomial_ideal_equal(a: Sequence[Tuple[int, ...]], b: Sequence[Tuple[int, ...]]) -> bool:
    def div(x, y):
        return all(i <= j for i, j in zip(x, y))
    return (all(any(div(y, x) for y in b) for x in a)
            and all(any(div(x, y) for x in a) for y in b))


@dataclass
class InitialIdealReport:
    ok: bool
    messages: List[str]
    leading: List[str]


def initial_ideal_check(ideals: IdealFamily) -> InitialIdealReport:
    model = ideals.model
    msgs = []
    plus = [plus_minus(c)[0] for c in model.gens.classes]
    ordx = omega_order(ideals, False)
    for c, g, p in zip(model.gens.classes, ideals.qsr, plus):
        lm = ordx.leading(g)
        if lm != tuple(p):
            msgs.append(f"Lm(R_c) = {ideals.ring.monomial(lm)} differs from x^(c+) for c = {c}")
    gb = buchberger(ideals.qsr, ordx, ideals.ring)
    lms = gb.leading_monomials
    if not _monomial_ideal_equal(lms, plus):
        msgs.append("initial ideal of QSR differs from <x^(c+)>: "
                    + ", ".join(str(ideals.ring.monomial(e)) for e in lms))
    ordh = omega_order(ideals, True)
    for c, g in zip(model.gens.classes, ideals.qsr_h):
        if not g.is_homogeneous():
            msgs.append(f"R^h for c = {c} is not homogeneous")
    gbh = buchberger(ideals.qsr_h, ordh, ideals.hring)
    lmh = gbh.leading_monomials
    plus_h = [tuple(p) + (0,) for p in plus]
    if not _monomial_ideal_equal(lmh, plus_h):
        msgs.append("initial ideal of QSR^h differs from <x^(c+)>: "
                    + ", ".join(str(ideals.hring.monomial(e)) for e in lmh))
    return InitialIdealReport(not msgs, msgs, [str(ideals.ring.monomial(e)) for e in lms])


def leading_term_identity(ideals: IdealFamily, d: Sequence[int]) -> Tuple[bool, Fraction]:
    """Lm(R_d^h) = x^{d+} h^{k+} and the weight gap A_phi . d > 0."""
    model = ideals.model
    g = homogenized_generator(model, ideals.hring, d)
    p, m = plus_minus(d)
    kk = -sum(d)
    lm = omega_order(ideals, True).leading(g)
    w = model.phi.omega()
    gap = sum(a * b for a, b in zip(w, p)) - sum(a * b for a, b in zip(w, m))
    apd = sum(wi * di for wi, di in zip(w, d))
    return (lm == tuple(p) + (max(kk, 0),) and gap == apd and apd > 0), apd
