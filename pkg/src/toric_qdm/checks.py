"""Seeded randomized checks of the Mori cone and leading-term lemmas."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Tuple

from .batyrev import IdealFamily, leading_term_identity
from .curveclasses import in_mori_cone, kernel_basis, plus_minus
from .model import ToricModel
from .toricfan import is_cone_supported


@dataclass
class SuiteResult:
    name: str
    seed: int
    trials: int
    failures: List[Tuple[int, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.trials > 0 and not self.failures


def random_ne_class(model: ToricModel, rng: random.Random, max_coeff: int = 4) -> Tuple[int, ...]:
    """Nonzero nonnegative integer combination of the primitive classes."""
    classes = model.gens.classes
    while True:
        coeffs = [rng.randint(0, max_coeff) for _ in classes]
        if any(coeffs):
            break
    n = model.delta.n_rays
    return tuple(sum(c * v[i] for c, v in zip(coeffs, classes)) for i in range(n))


def random_supported_kernel_vector(model: ToricModel, rng: random.Random, bound: int = 4,
                                   tries: int = 10000) -> Tuple[int, ...]:
    """Random nonzero kernel vector whose positive part is cone-supported."""
    kb = kernel_basis(model.delta).basis
    n = model.delta.n_rays
    for _ in range(tries):
        coeffs = [rng.randint(-bound, bound) for _ in kb]
        if not any(coeffs):
            continue
        d = tuple(sum(c * v[i] for c, v in zip(coeffs, kb)) for i in range(n))
        plus, _ = plus_minus(d)
        if is_cone_supported(model.delta, [i for i, x in enumerate(plus) if x]):
            return d
    raise RuntimeError("no cone-supported kernel vector found")


def negation_suite(model: ToricModel, seed: int = 0, trials: int = 200) -> SuiteResult:
    """d+ supported by a cone  =>  -d in NE."""
    rng = random.Random(seed)
    res = SuiteResult("supported-positive-part-negates-into-NE", seed, trials)
    if model.r == 0:
        res.trials = 0
        return res
    for _ in range(trials):
        d = random_supported_kernel_vector(model, rng)
        if not in_mori_cone(tuple(-x for x in d), model.gens):
            res.failures.append(d)
    return res


def unsupported_suite(model: ToricModel, seed: int = 0, trials: int = 200) -> SuiteResult:
    """d in NE, d != 0  =>  d+ not supported by a cone."""
    rng = random.Random(seed)
    res = SuiteResult("NE-class-positive-part-unsupported", seed, trials)
    if model.r == 0:
        res.trials = 0
        return res
    for _ in range(trials):
        d = random_ne_class(model, rng)
        plus, _ = plus_minus(d)
        if is_cone_supported(model.delta, [i for i, x in enumerate(plus) if x]):
            res.failures.append(d)
    return res


def leading_term_suite(ideals: IdealFamily, seed: int = 0, trials: int = 100) -> SuiteResult:
    """Lm(R_d^h) = x^(d+) under the omega order for random d in NE."""
    model = ideals.model
    rng = random.Random(seed)
    res = SuiteResult("homogenized-relation-leading-monomial", seed, trials)
    if model.r == 0:
        res.trials = 0
        return res
    for _ in range(trials):
        d = random_ne_class(model, rng)
        ok, _ = leading_term_identity(ideals, d)
        if not ok:
            res.failures.append(d)
    return res
