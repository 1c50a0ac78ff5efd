"""Coefficient fields for the polynomial engine.

Each field exposes ``zero``, ``one``, ``convert`` and ``param`` so that the
Groebner code never needs to know which arithmetic it is running on.
Elements support ``+ - * /`` and comparison with zero through Python
operators.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

from sympy import QQ as _SYMPY_QQ
from sympy.polys.fields import FracField


class RationalField:
    """Q with ``fractions.Fraction`` elements."""

    name = "QQ"
    params: Tuple[str, ...] = ()

    def __init__(self) -> None:
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def convert(self, x) -> Fraction:
        return Fraction(x)

    def param(self, i: int):
        raise IndexError("Q has no parameters")

    def param_monomial(self, exps: Sequence[int]):
        if any(exps):
            raise ValueError("Q has no parameters")
        return self.one

    def is_constant(self, c) -> bool:
        return True

    def to_fraction(self, c) -> Fraction:
        return c

    def fmt(self, c) -> str:
        return str(c)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


class RationalFunctionField:
    """Q(q_1, ..., q_r), elements are reduced fractions of polynomials.

    Backed by sympy's ``FracField``, which cancels gcds on every operation so
    that every element has a canonical numerator/denominator pair.
    """

    def __init__(self, names: Sequence[str]) -> None:
        self.params = tuple(names)
        self.name = "QQ(" + ",".join(self.params) + ")"
        if self.params:
            self._field = FracField(",".join(self.params), _SYMPY_QQ)
            self._gens = self._field.gens
        else:
            self._field = FracField("_q", _SYMPY_QQ)
            self._gens = ()
        self.zero = self._field.zero
        self.one = self._field.one

    def convert(self, x):
        if isinstance(x, Fraction):
            return self._field(x.numerator) / self._field(x.denominator)
        return self._field(x)

    def param(self, i: int):
        return self._gens[i]

    def param_monomial(self, exps: Sequence[int]):
        out = self.one
        for g, e in zip(self._gens, exps):
            if e:
                out = out * g ** e
        return out

    def is_constant(self, c) -> bool:
        return c.numer.is_ground and c.denom.is_ground

    def to_fraction(self, c) -> Fraction:
        if not self.is_constant(c):
            raise ValueError(f"{c} is not constant")
        if not c.numer:
            return Fraction(0)
        n, d = c.numer.LC, c.denom.LC
        return Fraction(int(n.numerator), int(n.denominator)) / Fraction(int(d.numerator), int(d.denominator))

    def numer_denom(self, c):
        return c.numer, c.denom

    def fmt(self, c) -> str:
        return str(c.as_expr())

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.params == self.params

    def __hash__(self):
        return hash(("QQ(q)", self.params))


class SpecializedField:
    """Q with the parameters q_a replaced by fixed nonzero rationals."""

    def __init__(self, names: Sequence[str], values: Sequence) -> None:
        self.params = tuple(names)
        self.values = tuple(Fraction(v) for v in values)
        self.name = "QQ[" + ",".join(f"{n}={v}" for n, v in zip(self.params, self.values)) + "]"
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def convert(self, x) -> Fraction:
        return Fraction(x)

    def param(self, i: int) -> Fraction:
        return self.values[i]

    def param_monomial(self, exps: Sequence[int]) -> Fraction:
        out = Fraction(1)
        for v, e in zip(self.values, exps):
            out *= v ** e
        return out

    def is_constant(self, c) -> bool:
        return True

    def to_fraction(self, c) -> Fraction:
        return c

    def fmt(self, c) -> str:
        return str(c)

    def __eq__(self, other):
        return isinstance(other, SpecializedField) and (other.params, other.values) == (self.params, self.values)

    def __hash__(self):
        return hash(("spec", self.params, self.values))
