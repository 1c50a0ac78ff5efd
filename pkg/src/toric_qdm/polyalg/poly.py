"""Sparse multivariate polynomials and monomial orders."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .fields import QQ

Exp = Tuple[int, ...]


class PolyRing:
    """Polynomial ring over ``field`` with named variables.

    Variables listed in ``laurent`` may carry negative exponents; every
    other variable must stay polynomial.
    """

    def __init__(self, names: Sequence[str], field=QQ, laurent: Iterable[str] = ()) -> None:
        self.names = tuple(names)
        self.field = field
        self.nvars = len(self.names)
        lset = set(laurent)
        self.laurent: FrozenSet[int] = frozenset(i for i, n in enumerate(self.names) if n in lset)
        self._index = {n: i for i, n in enumerate(self.names)}

    def index(self, name: str) -> int:
        return self._index[name]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = self.field.convert(c) if not _is_elem(c, self.field) else c
        return Poly(self, {(0,) * self.nvars: c} if c != 0 else {})

    def var(self, name_or_index) -> "Poly":
        i = name_or_index if isinstance(name_or_index, int) else self._index[name_or_index]
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self) -> List["Poly"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exp: Sequence[int], c=1) -> "Poly":
        c = self.field.convert(c) if not _is_elem(c, self.field) else c
        return Poly(self, {tuple(exp): c} if c != 0 else {})

    def check_exp(self, exp: Exp) -> None:
        for i, e in enumerate(exp):
            if e < 0 and i not in self.laurent:
                raise ValueError(f"negative exponent on polynomial variable {self.names[i]}")

    def with_field(self, field) -> "PolyRing":
        return PolyRing(self.names, field, [self.names[i] for i in self.laurent])

    def extend(self, name: str) -> "PolyRing":
        """Ring with one extra variable prepended (used for elimination)."""
        return PolyRing((name,) + self.names, self.field, [self.names[i] for i in self.laurent])

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.names == other.names
                and self.field == other.field and self.laurent == other.laurent)

    def __hash__(self):
        return hash((self.names, self.field))

    def __repr__(self):
        return f"PolyRing({self.names}, {self.field.name})"


def _is_elem(c, field) -> bool:
    if field is QQ or not hasattr(field, "_field"):
        return isinstance(c, Fraction)
    return getattr(c, "field", None) is field._field


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Dict[Exp, object]) -> None:
        self.ring = ring
        self.terms = terms

    # -- construction helpers
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def copy(self) -> "Poly":
        return Poly(self.ring, dict(self.terms))

    # -- arithmetic
    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = self.ring.field.convert(other) if not _is_elem(other, self.ring.field) else other
            if c == 0:
                return self.ring.zero()
            return Poly(self.ring, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: Dict[Exp, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.ring, {e: c for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            if len(self.terms) == 1:
                (e, c), = self.terms.items()
                exp = tuple(k * x for x in e)
                self.ring.check_exp(exp)
                return Poly(self.ring, {exp: self.ring.field.one / c ** (-k)})
            raise ValueError("negative power of a non-monomial")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_term(self, exp: Exp, c) -> "Poly":
        return Poly(self.ring, {tuple(a + b for a, b in zip(e, exp)): v * c
                                for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            if other == 0:
                return not self.terms
            other = self.ring.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, weights: Optional[Sequence] = None) -> bool:
        w = weights or [1] * self.ring.nvars
        vals = {sum(a * b for a, b in zip(w, e)) for e in self.terms}
        return len(vals) <= 1

    def map_coeffs(self, fn, ring: Optional[PolyRing] = None) -> "Poly":
        ring = ring or self.ring
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v != 0:
                out[e] = v
        return Poly(ring, out)

    def __repr__(self) -> str:
        return self.to_str()

    def to_str(self, order: Optional["MonomialOrder"] = None) -> str:
        if not self.terms:
            return "0"
        exps = sorted(self.terms, key=order.key if order else None, reverse=True)
        parts = []
        for e in exps:
            c = self.terms[e]
            mono = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(self.ring.names, e) if x)
            cs = self.ring.field.fmt(c)
            if not mono:
                parts.append(cs if _simple(cs) else f"({cs})")
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}" if not _simple(cs) else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _simple(s: str) -> bool:
    return all(ch.isdigit() or ch in "-/" for ch in s)


class MonomialOrder:
    """Matrix order: compare weight vectors in turn, then graded reverse lex.

    ``key(exp)`` is increasing in the order.
    """

    def __init__(self, nvars: int, weights: Sequence[Sequence] = ()) -> None:
        self.nvars = nvars
        self.weights = tuple(tuple(Fraction(x) for x in w) for w in weights)
        for w in self.weights:
            if len(w) != nvars:
                raise ValueError("weight vector length mismatch")
        self._cache: Dict[Exp, tuple] = {}

    def key(self, exp: Exp) -> tuple:
        k = self._cache.get(exp)
        if k is None:
            k = tuple(sum(a * b for a, b in zip(w, exp)) for w in self.weights)
            k += (sum(exp),) + tuple(-x for x in reversed(exp))
            if len(self._cache) < 200000:
                self._cache[exp] = k
        return k

    def is_well_order(self) -> bool:
        """Every variable must be larger than 1."""
        for i in range(self.nvars):
            col = [w[i] for w in self.weights if w[i] != 0]
            if col and col[0] < 0:
                return False
        return True

    def leading(self, p: Poly) -> Exp:
        return max(p.terms, key=self.key)

    def extended(self) -> "MonomialOrder":
        """Elimination order on (t, vars): t-degree first, then self."""
        n = self.nvars + 1
        ws = [(1,) + (0,) * self.nvars] + [(0,) + w for w in self.weights]
        return MonomialOrder(n, ws)


def grevlex(nvars: int) -> MonomialOrder:
    return MonomialOrder(nvars)


def weight_order(weights: Sequence) -> MonomialOrder:
    """Weight order with graded reverse lex tie-break."""
    return MonomialOrder(len(weights), [weights])


def leading_monomial(p: Poly, order: MonomialOrder) -> Exp:
    if not p:
        raise ValueError("zero polynomial has no leading monomial")
    return order.leading(p)


def initial_form(p: Poly, weights: Sequence) -> Poly:
    """Sum of the terms of maximal weight."""
    if not p:
        raise ValueError("zero polynomial has no initial form")
    w = [Fraction(x) for x in weights]
    vals = {e: sum(a * b for a, b in zip(w, e)) for e in p.terms}
    top = max(vals.values())
    return Poly(p.ring, {e: c for e, c in p.terms.items() if vals[e] == top})
