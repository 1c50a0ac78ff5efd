"""Smooth complete fans, the extended fan of a split bundle total space, and
strictly concave support functions on it."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .exact import det, fm_point, solve

BASE = "base"
BUNDLE = "bundle"


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: Tuple[Tuple[int, ...], ...]
    max_cones: Tuple[Tuple[int, ...], ...]

    @classmethod
    def make(cls, rank: int, rays, max_cones) -> "Fan":
        return cls(int(rank), tuple(tuple(int(x) for x in r) for r in rays),
                   tuple(tuple(sorted(int(i) for i in c)) for c in max_cones))


@dataclass(frozen=True)
class BundleData:
    coeffs: Tuple[Tuple[int, ...], ...] = ()

    @property
    def k(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class DeltaFan:
    base_fan: Fan
    bundles: BundleData
    rays: Tuple[Tuple[int, ...], ...]
    ray_kind: Tuple[str, ...]
    max_cones: Tuple[FrozenSet[int], ...] = field(compare=False)

    @property
    def rank(self) -> int:
        return self.base_fan.rank + self.bundles.k

    @property
    def n_base(self) -> int:
        return len(self.base_fan.rays)

    @property
    def k(self) -> int:
        return self.bundles.k

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @property
    def base_indices(self) -> List[int]:
        return list(range(self.n_base))

    @property
    def bundle_indices(self) -> List[int]:
        return list(range(self.n_base, self.n_rays))

    @property
    def picard_rank(self) -> int:
        return self.n_rays - self.rank


@dataclass(frozen=True)
class SupportFunction:
    weights: Tuple[Fraction, ...]

    def omega(self) -> Tuple[Fraction, ...]:
        """Monomial weights x_rho -> -phi(v_rho)."""
        return tuple(-w for w in self.weights)


def _walls(cones: Sequence[Sequence[int]]) -> Dict[FrozenSet[int], List[Tuple[int, int]]]:
    walls: Dict[FrozenSet[int], List[Tuple[int, int]]] = defaultdict(list)
    for ci, cone in enumerate(cones):
        for r in cone:
            walls[frozenset(cone) - {r}].append((ci, r))
    return walls


def validate_fan(fan: Fan) -> List[str]:
    """All violated invariants of a smooth complete simplicial fan."""
    out = []
    n = fan.rank
    if n < 1:
        return ["rank must be positive"]
    if len(fan.rays) < n + 1:
        out.append(f"need at least {n + 1} rays, got {len(fan.rays)}")
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            out.append(f"ray {i} has length {len(r)}, expected {n}")
            continue
        g = 0
        for x in r:
            g = gcd(g, x)
        if g != 1:
            out.append(f"ray {i} = {r} is not primitive")
    if out:
        return out
    seen = set()
    used = set()
    for ci, c in enumerate(fan.max_cones):
        if len(c) != n or len(set(c)) != n:
            out.append(f"cone {ci} does not have {n} distinct rays")
            continue
        if any(i < 0 or i >= len(fan.rays) for i in c):
            out.append(f"cone {ci} has out-of-range ray index")
            continue
        key = frozenset(c)
        if key in seen:
            out.append(f"cone {ci} duplicates an earlier cone")
        seen.add(key)
        used.update(c)
        d = det([fan.rays[i] for i in c])
        if abs(d) != 1:
            out.append(f"cone {ci} = {c} is not smooth (det {d})")
    if out:
        return out
    for i in range(len(fan.rays)):
        if i not in used:
            out.append(f"ray {i} lies in no maximal cone")
    walls = _walls(fan.max_cones)
    adj = defaultdict(set)
    for w, owners in walls.items():
        if len(owners) != 2:
            out.append(f"wall {sorted(w)} shared by {len(owners)} maximal cones (incomplete fan)")
            continue
        (c1, u1), (c2, u2) = owners
        adj[c1].add(c2)
        adj[c2].add(c1)
        if not _opposite_sides(fan.rays, sorted(w), u1, u2):
            out.append(f"cones {c1},{c2} overlap across wall {sorted(w)}")
    if fan.max_cones:
        comp, stack = {0}, [0]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        if len(comp) != len(fan.max_cones):
            out.append("wall-adjacency graph is disconnected")
    else:
        out.append("no maximal cones")
    return out


def _opposite_sides(rays, wall, u1, u2) -> bool:
    m1 = [list(rays[i]) for i in wall] + [list(rays[u1])]
    m2 = [list(rays[i]) for i in wall] + [list(rays[u2])]
    # u1 and u2 are on opposite sides iff the two determinants differ in sign
    return det(m1) * det(m2) < 0


def build_delta(fan: Fan, bundles: BundleData) -> DeltaFan:
    n = fan.rank
    for i, c in enumerate(bundles.coeffs):
        if len(c) != len(fan.rays):
            raise FanError(f"bundle {i} has {len(c)} coefficients, expected {len(fan.rays)}")
    k = bundles.k
    rays = []
    for t, w in enumerate(fan.rays):
        rays.append(tuple(w) + tuple(bundles.coeffs[i][t] for i in range(k)))
    for i in range(k):
        rays.append(tuple([0] * n) + tuple(int(i == j) for j in range(k)))
    kinds = (BASE,) * len(fan.rays) + (BUNDLE,) * k
    bund = frozenset(range(len(fan.rays), len(fan.rays) + k))
    cones = tuple(frozenset(c) | bund for c in fan.max_cones)
    return DeltaFan(fan, bundles, tuple(rays), kinds, cones)


def project_to_base(delta: DeltaFan) -> Fan:
    n = delta.base_fan.rank
    rays = [r[:n] for r, kind in zip(delta.rays, delta.ray_kind) if kind == BASE]
    cones = [sorted(i for i in c if delta.ray_kind[i] == BASE) for c in delta.max_cones]
    return Fan.make(n, rays, cones)


def is_cone_supported(delta: DeltaFan, support) -> bool:
    base = {i for i in support if delta.ray_kind[i] == BASE}
    if not base:
        return True
    return any(base <= set(c) for c in delta.base_fan.max_cones)


def cone_containing(delta: DeltaFan, point: Sequence) -> Optional[Tuple[int, Dict[int, Fraction]]]:
    """First maximal cone of delta containing ``point`` with its ray coordinates."""
    for ci, cone in enumerate(delta.max_cones):
        idx = sorted(cone)
        cols = [[delta.rays[i][j] for i in idx] for j in range(delta.rank)]
        x = solve(cols, point)
        if x is not None and all(c >= 0 for c in x):
            return ci, {i: c for i, c in zip(idx, x)}
    return None


def wall_relations(delta: DeltaFan) -> List[Tuple[int, ...]]:
    """Curve class of every wall: +1 on the two opposite rays, -b on the wall.

    Each relation reads v_u + v_u' = sum b_w v_w with the pair (u, u') of
    rays opposite the shared wall.
    """
    out = []
    walls = _walls([sorted(c) for c in delta.max_cones])
    for w, owners in sorted(walls.items(), key=lambda kv: sorted(kv[0])):
        if len(owners) != 2:
            continue  # boundary face (drops a bundle ray)
        (c1, u1), (c2, u2) = owners
        basis = sorted(delta.max_cones[c1])
        cols = [[delta.rays[i][j] for i in basis] for j in range(delta.rank)]
        x = solve(cols, delta.rays[u2])
        if x is None:
            raise FanError("adjacent cones do not span the lattice")
        coords = dict(zip(basis, x))
        if coords[u1] != -1 or any(c.denominator != 1 for c in x):
            raise FanError(f"wall {sorted(w)} is not a smooth flip")
        rel = [0] * delta.n_rays
        rel[u1] += 1
        rel[u2] += 1
        for i in w:
            rel[i] -= int(coords[i])
        out.append(tuple(rel))
    return out


def concavity_margins(delta: DeltaFan, weights: Sequence) -> List[Fraction]:
    """For each wall, extension-from-one-side minus the weight at the far ray."""
    return [-sum(Fraction(c) * Fraction(w) for c, w in zip(rel, weights))
            for rel in wall_relations(delta)]


def find_support_function(delta: DeltaFan, hint: Optional[Sequence] = None) -> SupportFunction:
    """Strictly concave piecewise-linear weights on the rays of delta.

    With a hint the weights are only verified.  Otherwise phi is gauge-fixed
    to vanish on the first maximal cone and the remaining values solve the
    wall inequalities with margin 1.  Concavity then forces phi <= 0 on all
    rays, so the induced monomial weights are nonnegative.
    """
    rels = wall_relations(delta)
    if hint is not None:
        w = tuple(Fraction(x) for x in hint)
        if len(w) != delta.n_rays:
            raise FanError("hint has wrong length")
        bad = [i for i, m in enumerate(concavity_margins(delta, w)) if m <= 0]
        if bad:
            raise FanError(f"hint is not strictly concave across walls {bad}")
        return SupportFunction(w)
    fixed = delta.max_cones[0]
    free = [i for i in range(delta.n_rays) if i not in fixed]
    pos = {r: j for j, r in enumerate(free)}
    ineqs = []
    for rel in rels:
        a = [Fraction(0)] * len(free)
        for i, c in enumerate(rel):
            if c and i in pos:
                a[pos[i]] -= c
        ineqs.append((a, Fraction(1)))
    x = fm_point(ineqs, len(free))
    if x is None:
        raise FanError("no strictly concave support function: fan is not quasi-projective")
    w = [Fraction(0)] * delta.n_rays
    for r, j in pos.items():
        w[r] = x[j]
    sf = SupportFunction(tuple(w))
    assert all(m > 0 for m in concavity_margins(delta, sf.weights))
    return sf
