"""A validated (fan, bundles) pair with everything derived from it."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .curveclasses import (H2Basis, PrimitiveClassSet, auto_h2_basis, bundle_divisor,
                           divisor_coords, is_ample, is_nef, anticanonical_minus_bundles,
                           mori_generators, verify_h2_basis, with_nef_flags)
from .toricfan import (BundleData, DeltaFan, Fan, FanError, SupportFunction, build_delta,
                       find_support_function, validate_fan)


@dataclass
class ToricModel:
    fan: Fan
    bundles: BundleData
    delta: DeltaFan
    gens: PrimitiveClassSet
    basis: H2Basis
    phi: SupportFunction
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, fan: Fan, bundles: BundleData = BundleData(),
              h2_basis: Optional[Sequence[Sequence[int]]] = None,
              ample_weights: Optional[Sequence] = None) -> "ToricModel":
        problems = validate_fan(fan)
        if problems:
            raise FanError("; ".join(problems))
        delta = build_delta(fan, bundles)
        gens = mori_generators(delta)
        if h2_basis is not None:
            basis = H2Basis(tuple(tuple(int(x) for x in b) for b in h2_basis))
            bad = verify_h2_basis(delta, basis, gens)
            if bad:
                raise FanError("; ".join(bad))
            basis = with_nef_flags(delta, basis, gens)
        else:
            basis = auto_h2_basis(delta, gens)
        phi = find_support_function(delta, ample_weights)
        return cls(fan, bundles, delta, gens, basis, phi)

    @property
    def r(self) -> int:
        return self.basis.r

    @property
    def n(self) -> int:
        return self.fan.rank

    @property
    def k(self) -> int:
        return self.bundles.k

    def qnames(self) -> List[str]:
        return [f"q{a + 1}" for a in range(self.r)] if self.r > 1 else ["q"][: self.r]

    def bundle_degrees(self, d: Sequence[int]) -> List[int]:
        """L_i . d for each bundle."""
        return [-d[self.delta.n_base + i] for i in range(self.k)]

    def bundles_ample(self) -> bool:
        return all(is_ample(bundle_divisor(self.delta, i), self.gens) for i in range(self.k))

    def bundles_nef(self) -> bool:
        return all(is_nef(bundle_divisor(self.delta, i), self.gens) for i in range(self.k))

    def anticanonical_twist_nef(self) -> bool:
        """-K_X - sum L_i nef (the hypothesis the engine relies on)."""
        return is_nef(anticanonical_minus_bundles(self.delta), self.gens)

    def bundle_tcoords(self) -> List[tuple]:
        """Basis form (L_i . B_a)_a of each bundle class."""
        return [divisor_coords(bundle_divisor(self.delta, i), self.basis) for i in range(self.k)]

    def ray_tcoords(self, rho: int) -> tuple:
        """Basis form of [D_rho]: its a-th entry is the rho-component of B_a."""
        return tuple(b[rho] for b in self.basis.basis)
