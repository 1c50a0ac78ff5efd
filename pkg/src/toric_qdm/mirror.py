"""I-function coefficients, the annihilation identity and the mirror map.

Cohomology classes are coordinate vectors in ``CohRing``; a class-valued
Laurent polynomial in z is a dict {z power: vector}.  Power series in q
are dicts {exponent tuple: Fraction} truncated at a total degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .batyrev import CohRing, cohomology_ring
from .curveclasses import dual_divisors, in_mori_cone
from .exact import solve
from .model import ToricModel

Vec = Tuple[Fraction, ...]


class CohLaurent:
    __slots__ = ("coh", "terms")

    def __init__(self, coh: CohRing, terms: Optional[Dict[int, Vec]] = None) -> None:
        self.coh = coh
        self.terms = {k: tuple(v) for k, v in (terms or {}).items() if any(v)}

    @classmethod
    def cls(cls, coh: CohRing, v: Sequence, zpow: int = 0) -> "CohLaurent":
        return cls(coh, {zpow: tuple(Fraction(x) for x in v)})

    @classmethod
    def one(cls, coh: CohRing) -> "CohLaurent":
        return cls(coh, {0: coh.unit()})

    def __add__(self, other: "CohLaurent") -> "CohLaurent":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = self.coh.add(out[k], v) if k in out else v
        return CohLaurent(self.coh, out)

    def __neg__(self) -> "CohLaurent":
        return self.scale(-1)

    def __sub__(self, other: "CohLaurent") -> "CohLaurent":
        return self + (-other)

    def scale(self, c) -> "CohLaurent":
        return CohLaurent(self.coh, {k: self.coh.scale(Fraction(c), v) for k, v in self.terms.items()})

    def __mul__(self, other: "CohLaurent") -> "CohLaurent":
        out: Dict[int, Vec] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                p = self.coh.mul(v1, v2)
                k = k1 + k2
                out[k] = self.coh.add(out[k], p) if k in out else p
        return CohLaurent(self.coh, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, CohLaurent) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def at_one(self) -> Vec:
        out = tuple(Fraction(0) for _ in range(self.coh.dim))
        for v in self.terms.values():
            out = self.coh.add(out, v)
        return out

    def weights(self) -> set:
        """Weights z^j * (class of degree p) -> j + p over nonzero entries."""
        degs = self.coh.degrees
        return {k + degs[i] for k, v in self.terms.items() for i, c in enumerate(v) if c}

    def layer(self, zpow: int) -> Vec:
        return self.terms.get(zpow, tuple(Fraction(0) for _ in range(self.coh.dim)))

    def fmt(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({self.coh.fmt(v)})*z^{k}" for k, v in sorted(self.terms.items(), reverse=True))


def linear_factor(coh: CohRing, cls: Vec, m: int) -> CohLaurent:
    """cls + m z."""
    out = CohLaurent.cls(coh, cls)
    if m:
        out = out + CohLaurent.cls(coh, coh.scale(m, coh.unit()), 1)
    return out


def inverse_factor(coh: CohRing, cls: Vec, m: int) -> CohLaurent:
    """(cls + m z)^{-1} = sum_j (-cls)^j (m z)^{-j-1}; cls is nilpotent."""
    if m == 0:
        raise ZeroDivisionError("cannot invert a factor with m = 0")
    out = CohLaurent(coh)
    power = coh.unit()
    j = 0
    neg = coh.scale(-1, cls)
    while any(power):
        out = out + CohLaurent.cls(coh, coh.scale(Fraction(1, m ** (j + 1)), power), -j - 1)
        power = coh.mul(power, neg)
        j += 1
        if j > coh.dim + 1:
            raise ValueError("class is not nilpotent")
    return out


def bundle_class(model: ToricModel, coh: CohRing, i: int) -> Vec:
    return coh.scale(-1, coh.divisor(model.delta.bundle_indices[i]))


def a_factors(model: ToricModel, coh: CohRing, d: Sequence[int]) -> List[CohLaurent]:
    """The individual (possibly inverted) linear factors of A_d(z)."""
    out = []
    for i, di in enumerate(model.bundle_degrees(d)):
        L = bundle_class(model, coh, i)
        if di < 0:
            raise ValueError("negative bundle degree: class is outside NE")
        for m in range(1, di + 1):
            out.append(linear_factor(coh, L, m))
    for th in model.delta.base_indices:
        D = coh.divisor(th)
        dt = d[th]
        if dt >= 0:
            for m in range(1, dt + 1):
                out.append(inverse_factor(coh, D, m))
        else:
            for m in range(dt + 1, 1):
                out.append(linear_factor(coh, D, m))
    return out


def a_coefficient(model: ToricModel, d: Sequence[int], coh: Optional[CohRing] = None,
                  check_ne: bool = True, reverse: bool = False) -> CohLaurent:
    coh = coh or cohomology_ring(model)
    if check_ne and not in_mori_cone(d, model.gens):
        raise ValueError(f"{tuple(d)} is not in the Mori cone")
    out = CohLaurent.one(coh)
    factors = a_factors(model, coh, d)
    if reverse:
        factors = factors[::-1]
    for f in factors:
        out = out * f
        if not out:
            break
    return out


def a_weight(model: ToricModel, d: Sequence[int]) -> int:
    """d_E - d_T: sum of bundle degrees minus sum of base divisor degrees."""
    return sum(model.bundle_degrees(d)) - sum(d[th] for th in model.delta.base_indices)


# ---------------------------------------------------------------------------
# annihilation identity


def _shift_products(model: ToricModel, coh: CohRing, base: Sequence[int], dp: Sequence[int],
                    bundle_sign: int, theta_sign: int) -> CohLaurent:
    """prod_i prod_{nu=1}^{(sgn d'_i)} (L_i + (base_i + nu) z) *
    prod_theta prod_{nu=0}^{(sgn d'_theta)-1} (D_theta + (base_theta - nu) z).

    ``bundle_sign``/``theta_sign`` pick the positive (+1) or negative (-1)
    part of d' for each family.
    """
    out = CohLaurent.one(coh)
    bdeg = model.bundle_degrees(base)
    for i, dpi in enumerate(model.bundle_degrees(dp)):
        k = max(bundle_sign * dpi, 0)
        L = bundle_class(model, coh, i)
        for nu in range(1, k + 1):
            out = out * linear_factor(coh, L, bdeg[i] + nu)
    for th in model.delta.base_indices:
        k = max(theta_sign * dp[th], 0)
        D = coh.divisor(th)
        for nu in range(k):
            out = out * linear_factor(coh, D, base[th] - nu)
    return out


def annihilation_sides(model: ToricModel, d: Sequence[int], dp: Sequence[int],
                       coh: Optional[CohRing] = None, literal: bool = False):
    """Both sides of the q^d coefficient of box_{d'} applied to the I-function.

    Acting with z dq_a on q^{T/z} q^d multiplies by T_a + z d_a, so the
    first half of box_{d'} contributes A_d * prod(L_i + (d_i + nu) z)
    [d'_i negative part] * prod(D_theta + (d_theta - nu) z) [d'_theta positive
    part] and the second half the same with d - d' and the opposite parts.
    ``literal=True`` swaps the theta parts between the two sides.
    """
    coh = coh or cohomology_ring(model)
    dm = tuple(x - y for x, y in zip(d, dp))
    Ad = a_coefficient(model, d, coh, check_ne=False) if in_mori_cone(d, model.gens) else CohLaurent(coh)
    Adm = a_coefficient(model, dm, coh, check_ne=False) if in_mori_cone(dm, model.gens) else CohLaurent(coh)
    ts = 1 if not literal else -1
    left = Ad * _shift_products(model, coh, d, dp, -1, ts)
    right = Adm * _shift_products(model, coh, dm, dp, 1, -ts)
    return left, right


def check_annihilation(model: ToricModel, d: Sequence[int], dp: Sequence[int],
                       coh: Optional[CohRing] = None, literal: bool = False) -> bool:
    left, right = annihilation_sides(model, d, dp, coh, literal)
    return left == right


# ---------------------------------------------------------------------------
# truncation and series


def ne_classes(model: ToricModel, order: int) -> List[Tuple[int, ...]]:
    """Classes d in NE with 0 <= sum of basis coordinates <= order.

    Dual classes of the basis are nef, so coordinates of NE are nonnegative.
    """
    out = []
    r = model.r
    for coords in itertools.product(range(order + 1), repeat=r):
        if sum(coords) > order:
            continue
        d = model.basis.from_coords(coords)
        if not any(coords) or in_mori_cone(d, model.gens):
            out.append(d)
    return sorted(out, key=lambda d: (sum(model.basis.coords(d)), model.basis.coords(d)))


@dataclass
class ITruncation:
    order: int
    coeffs: Dict[Tuple[int, ...], CohLaurent]  # keyed by basis coordinates
    coh: CohRing


def i_truncate(model: ToricModel, order: int, coh: Optional[CohRing] = None) -> ITruncation:
    coh = coh or cohomology_ring(model)
    out = {}
    if model.r == 0:
        return ITruncation(order, {(): CohLaurent.one(coh)}, coh)
    for d in ne_classes(model, order):
        out[model.basis.coords(d)] = a_coefficient(model, d, coh, check_ne=False)
    return ITruncation(order, out, coh)


Series = Dict[Tuple[int, ...], Fraction]


def s_trunc(a: Series, order: int) -> Series:
    return {k: v for k, v in a.items() if v and sum(k) <= order}


def s_add(a: Series, b: Series) -> Series:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def s_mul(a: Series, b: Series, order: int) -> Series:
    out: Series = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            if sum(k) <= order:
                out[k] = out.get(k, 0) + v1 * v2
    return {k: v for k, v in out.items() if v}


def s_scale(a: Series, c) -> Series:
    return {k: v * c for k, v in a.items() if v * c}


def s_inverse(a: Series, r: int, order: int) -> Series:
    """1/a for a(0) = 1."""
    zero = (0,) * r
    if a.get(zero) != 1:
        raise ValueError("series must have constant term 1")
    rest = s_add(a, {zero: Fraction(-1)})
    out: Series = {zero: Fraction(1)}
    power: Series = {zero: Fraction(1)}
    for _ in range(order):
        power = s_scale(s_mul(power, rest, order), -1)
        out = s_add(out, power)
    return out


def s_exp(a: Series, r: int, order: int) -> Series:
    zero = (0,) * r
    if a.get(zero):
        raise ValueError("exp needs zero constant term")
    out: Series = {zero: Fraction(1)}
    term: Series = {zero: Fraction(1)}
    for j in range(1, order + 1):
        term = s_scale(s_mul(term, a, order), Fraction(1, j))
        out = s_add(out, term)
    return out


def fmt_series(a: Series, qnames: Sequence[str]) -> str:
    if not a:
        return "0"
    parts = []
    for k in sorted(a, key=lambda k: (sum(k), k)):
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(qnames, k) if e)
        c = a[k]
        cs = str(c)
        parts.append(cs if not mono else (mono if c == 1 else f"-{mono}" if c == -1 else f"{cs}*{mono}"))
    return " + ".join(parts).replace("+ -", "- ")


@dataclass
class MirrorSeries:
    """I = F*1 + z^{-1}(F * sum_a T_a log q_a + g0*1 + sum_a g_a T_a) + O(z^{-2}).

    The log term is fixed by the q^{T/z} prefactor and kept implicit.
    """
    order: int
    F: Series
    g0: Series
    g: List[Series]
    clean: bool  # z^0 layer pure H^0 and z^{-1} layer in H^0 + H^2


def t_classes(model: ToricModel, coh: CohRing) -> List[Vec]:
    out = []
    for t in dual_divisors(model.basis, model.delta.n_rays):
        v = tuple(Fraction(0) for _ in range(coh.dim))
        for rho, c in enumerate(t):
            if c:
                v = coh.add(v, coh.scale(c, coh.divisor(rho)))
        out.append(v)
    return out


def extract_fg(model: ToricModel, it: ITruncation) -> MirrorSeries:
    coh = it.coh
    r = model.r
    unit_idx = coh.basis.index((0,) * coh.ring.nvars)
    deg1 = [i for i, p in enumerate(coh.degrees) if p == 1]
    tcls = t_classes(model, coh)
    F: Series = {}
    g0: Series = {}
    g: List[Series] = [dict() for _ in range(r)]
    clean = True
    for k, A in it.coeffs.items():
        if any(z > 0 for z in A.terms):
            clean = False
        l0 = A.layer(0)
        if any(c for i, c in enumerate(l0) if i != unit_idx):
            clean = False
        if l0[unit_idx]:
            F[k] = l0[unit_idx]
        l1 = A.layer(-1)
        if l1[unit_idx]:
            g0[k] = l1[unit_idx]
        if any(c for i, c in enumerate(l1) if i != unit_idx and i not in deg1):
            clean = False
        h2 = [l1[i] for i in deg1]
        if any(h2):
            rows = [[tcls[a][i] for a in range(r)] for i in deg1]
            x = solve(rows, h2)
            if x is None:
                raise ValueError("H^2 part is not in the span of the T classes")
            for a in range(r):
                if x[a]:
                    g[a][k] = x[a]
    return MirrorSeries(it.order, F, g0, g, clean)


def reassemble(model: ToricModel, ms: MirrorSeries, coh: CohRing) -> Dict[Tuple[int, ...], Tuple[Vec, Vec]]:
    """Per q-exponent: (z^0 layer, z^{-1} layer without the log term)."""
    tcls = t_classes(model, coh)
    unit = coh.unit()
    zero = tuple(Fraction(0) for _ in range(coh.dim))
    keys = set(ms.F) | set(ms.g0) | {k for s in ms.g for k in s}
    out = {}
    for k in keys:
        l0 = coh.scale(ms.F.get(k, 0), unit)
        l1 = coh.scale(ms.g0.get(k, 0), unit)
        for a, s in enumerate(ms.g):
            if s.get(k):
                l1 = coh.add(l1, coh.scale(s[k], tcls[a]))
        out[k] = (l0 if any(l0) else zero, l1 if any(l1) else zero)
    return out


@dataclass
class MirrorMap:
    order: int
    t0: Series
    q_prime: List[Series]  # q'_a as a full series (includes the q_a factor)

    def leading_ok(self, r: int) -> bool:
        zero = (0,) * r
        if self.t0.get(zero):
            return False
        for a, s in enumerate(self.q_prime):
            ea = tuple(int(i == a) for i in range(r))
            if s.get(ea) != 1:
                return False
            if any(v and not all(x >= y for x, y in zip(k, ea)) for k, v in s.items()):
                return False
        return True


def mirror_map(ms: MirrorSeries, r: int, order: Optional[int] = None) -> MirrorMap:
    """t0 = g0/F and q'_a = q_a exp(g_a/F), truncated at total degree ``order``."""
    N = ms.order if order is None else order
    zero = (0,) * r
    if ms.F.get(zero, 0) != 1:
        raise ValueError("F(0) must be 1")
    Finv = s_inverse(s_trunc(ms.F, N), r, N)
    t0 = s_mul(ms.g0, Finv, N)
    qp = []
    for a in range(r):
        ea = tuple(int(i == a) for i in range(r))
        e = s_exp(s_mul(ms.g[a], Finv, N), r, N)
        qp.append(s_trunc(s_mul({ea: Fraction(1)}, e, N + 1), N + 1))
    return MirrorMap(N, t0, qp)
