"""Curve classes on the extended fan: kernel lattice, primitive collections,
Mori generators, intersection numbers and the q-coordinate basis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exact import in_cone, integer_kernel, solve, unimodular_rank_check
from .toricfan import BASE, DeltaFan, FanError, cone_containing, is_cone_supported

CurveClass = Tuple[int, ...]
MAX_RAYS = 16


@dataclass(frozen=True)
class H2Basis:
    basis: Tuple[CurveClass, ...]
    dual_nef: Optional[Tuple[bool, ...]] = None

    @property
    def r(self) -> int:
        return len(self.basis)

    def coords(self, d: Sequence[int]) -> Tuple[int, ...]:
        """Coordinates d_a with d = sum d_a B_a (so Q^d = prod q_a^{d_a})."""
        if not self.basis:
            return ()
        cols = [[b[i] for b in self.basis] for i in range(len(d))]
        x = solve(cols, d)
        if x is None or any(c.denominator != 1 for c in x):
            raise ValueError(f"{tuple(d)} is not in the span of the basis")
        if any(sum(b[i] * c for b, c in zip(self.basis, x)) != d[i] for i in range(len(d))):
            raise ValueError(f"{tuple(d)} is not in the span of the basis")
        return tuple(int(c) for c in x)

    def from_coords(self, coords: Sequence[int]) -> CurveClass:
        n = len(self.basis[0]) if self.basis else 0
        return tuple(sum(c * b[i] for c, b in zip(coords, self.basis)) for i in range(n))


@dataclass(frozen=True)
class PrimitiveClassSet:
    classes: Tuple[CurveClass, ...]
    collections: Tuple[Tuple[int, ...], ...]


def kernel_basis(delta: DeltaFan) -> H2Basis:
    rows = [[r[j] for r in delta.rays] for j in range(delta.rank)]
    return H2Basis(tuple(integer_kernel(rows, delta.n_rays)))


def in_kernel(delta: DeltaFan, d: Sequence[int]) -> bool:
    return all(sum(c * r[j] for c, r in zip(d, delta.rays)) == 0 for j in range(delta.rank))


def plus_minus(d: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    return tuple(max(x, 0) for x in d), tuple(max(-x, 0) for x in d)


def primitive_collections(delta: DeltaFan) -> List[Tuple[int, ...]]:
    """Minimal non-faces, by subset size then lexicographically.

    Bundle rays never obstruct cone membership, so only base rays are
    enumerated.
    """
    base = [i for i in range(delta.n_rays) if delta.ray_kind[i] == BASE]
    if len(base) > MAX_RAYS:
        raise FanError(f"primitive collection search limited to {MAX_RAYS} rays")
    found: List[Tuple[int, ...]] = []
    for size in range(2, len(base) + 1):
        for S in itertools.combinations(base, size):
            s = set(S)
            if any(set(c) <= s for c in found):
                continue
            if not is_cone_supported(delta, S):
                found.append(S)
    return found


def primitive_class(delta: DeltaFan, collection: Sequence[int]) -> CurveClass:
    v = [sum(delta.rays[i][j] for i in collection) for j in range(delta.rank)]
    hit = cone_containing(delta, v)
    if hit is None:
        raise FanError(f"sum of collection {tuple(collection)} lies in no cone")
    _, coords = hit
    d = [0] * delta.n_rays
    for i in collection:
        d[i] = 1
    for i, a in coords.items():
        if a == 0:
            continue
        if a.denominator != 1:
            raise FanError("non-integral cone coordinates: fan is not smooth")
        if i in collection:
            raise FanError("minimal cone meets the collection")
        d[i] = -int(a)
    d = tuple(d)
    if not in_kernel(delta, d):
        raise FanError("primitive class is not in the kernel lattice")
    return d


def mori_generators(delta: DeltaFan) -> PrimitiveClassSet:
    colls = primitive_collections(delta)
    classes: List[CurveClass] = []
    used = []
    for c in colls:
        d = primitive_class(delta, c)
        if d not in classes:
            classes.append(d)
            used.append(tuple(c))
    return PrimitiveClassSet(tuple(classes), tuple(used))


def intersect(divisor: Sequence, d: Sequence[int]):
    return sum(a * x for a, x in zip(divisor, d))


def is_nef(divisor: Sequence, gens: PrimitiveClassSet) -> bool:
    return all(intersect(divisor, c) >= 0 for c in gens.classes)


def is_ample(divisor: Sequence, gens: PrimitiveClassSet) -> bool:
    return all(intersect(divisor, c) > 0 for c in gens.classes)


def bundle_divisor(delta: DeltaFan, i: int) -> Tuple[int, ...]:
    """Ray form of c_1(L_i) on the total space: -D of the i-th bundle ray."""
    out = [0] * delta.n_rays
    out[delta.n_base + i] = -1
    return tuple(out)


def base_divisor(delta: DeltaFan, theta: int) -> Tuple[int, ...]:
    out = [0] * delta.n_rays
    out[theta] = 1
    return tuple(out)


def anticanonical_minus_bundles(delta: DeltaFan) -> Tuple[int, ...]:
    """-K_X - sum L_i, which equals -K_Y = sum over all rays of D_rho."""
    return (1,) * delta.n_rays


def canonical_minus_bundles(delta: DeltaFan) -> Tuple[int, ...]:
    """K_X - sum L_i in ray form; only used to document the sign discrepancy."""
    return tuple(-1 if k == BASE else 1 for k in delta.ray_kind)


def in_mori_cone(d: Sequence[int], gens: PrimitiveClassSet) -> bool:
    return in_cone(list(d), [list(c) for c in gens.classes]) is not None


def dual_divisors(basis: H2Basis, n_rays: int) -> List[Tuple[Fraction, ...]]:
    """Ray-form representatives of T_a with T_a . B_b = delta_ab."""
    out = []
    rows = [list(b) for b in basis.basis]
    for a in range(basis.r):
        rhs = [int(a == b) for b in range(basis.r)]
        x = solve(rows, rhs)
        if x is None:
            raise ValueError("basis vectors are linearly dependent")
        out.append(tuple(x))
    return out


def divisor_coords(divisor: Sequence, basis: H2Basis) -> Tuple:
    """Basis form t_a = divisor . B_a."""
    return tuple(intersect(divisor, b) for b in basis.basis)


def verify_h2_basis(delta: DeltaFan, basis: H2Basis, gens: PrimitiveClassSet) -> List[str]:
    out = []
    if basis.r != delta.picard_rank:
        return [f"basis has {basis.r} vectors, kernel rank is {delta.picard_rank}"]
    for b in basis.basis:
        if len(b) != delta.n_rays or not in_kernel(delta, b):
            out.append(f"{b} is not in the kernel lattice")
    if out:
        return out
    if not unimodular_rank_check(basis.basis, kernel_basis(delta).basis):
        return ["vectors do not form a Z-basis of the kernel lattice"]
    for a, t in enumerate(dual_divisors(basis, delta.n_rays)):
        if not is_nef(t, gens):
            out.append(f"dual class T_{a + 1} is not nef")
    return out


def with_nef_flags(delta: DeltaFan, basis: H2Basis, gens: PrimitiveClassSet) -> H2Basis:
    flags = tuple(is_nef(t, gens) for t in dual_divisors(basis, delta.n_rays))
    return H2Basis(basis.basis, flags)


def auto_h2_basis(delta: DeltaFan, gens: PrimitiveClassSet, bound: int = 1) -> H2Basis:
    """Search for a Z-basis of H_2 whose dual classes are nef.

    Subsets of the primitive classes are tried first (this succeeds whenever
    the Mori cone is simplicial and unimodular), then small integer
    combinations of the kernel basis.
    """
    r = delta.picard_rank
    if r == 0:
        return H2Basis((), ())

    def ok(cands):
        b = H2Basis(tuple(cands))
        if not verify_h2_basis(delta, b, gens):
            return with_nef_flags(delta, b, gens)
        return None

    for combo in itertools.combinations(gens.classes, r):
        found = ok(combo)
        if found:
            return found
    kb = kernel_basis(delta).basis
    vecs = []
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=r):
        if any(coeffs):
            vecs.append(tuple(sum(c * b[i] for c, b in zip(coeffs, kb)) for i in range(delta.n_rays)))
    for combo in itertools.combinations(vecs, r):
        found = ok(combo)
        if found:
            return found
    raise ValueError("no kernel basis with nef duals found in the search range")
