"""Standard fans and line bundles used by the shipped problems and tests."""

from __future__ import annotations

from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .toricfan import BundleData, Fan


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    cones = [c for c in combinations(range(n + 1), n)]
    return Fan.make(n, rays, cones)


def blowup_point(n: int) -> Fan:
    """P^n blown up at a torus fixed point.

    Ray order: v0 = -e_n, v1..vn = e_1..e_n, v_{n+1} = -(1,...,1).  The blown
    up cone is spanned by every ray of P^n except e_n.
    """
    rays = [tuple(-int(j == n - 1) for j in range(n))]
    rays += [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    top = list(range(1, n + 2))
    cones = [tuple(j for j in top if j != i) for i in top if i != n]
    old = [j for j in top if j != n]
    cones += [(0,) + tuple(j for j in old if j != i) for i in old]
    return Fan.make(n, rays, cones)


def p1xp1() -> Fan:
    rays = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    return Fan.make(2, rays, [(0, 2), (0, 3), (1, 2), (1, 3)])


def hyperplane_bundle(n: int, a: int) -> BundleData:
    """O(a) on P^n, written as a times the divisor of the first ray."""
    coeffs = [0] * (n + 1)
    coeffs[0] = a
    return BundleData((tuple(coeffs),))


def blowup_bundle(n: int, a: int, b: int) -> BundleData:
    """aH + bE on Bl_pt P^n, using [D_n] = H and [D_0] = E."""
    coeffs = [0] * (n + 2)
    coeffs[0] = b
    coeffs[n] = a
    return BundleData((tuple(coeffs),))


def blowup_basis(n: int, a: Optional[int] = None, b: Optional[int] = None) -> Tuple[Tuple[int, ...], ...]:
    """(e, h - e) on Bl_pt P^n, extended by the bundle component -L.d."""
    e = [-1] + [1] * (n - 1) + [0, 1]
    he = [1] + [0] * (n - 1) + [1, 0]
    if a is None:
        return (tuple(e), tuple(he))
    # L = aH + bE with H.e = 0, E.e = -1, H.(h-e) = 1, E.(h-e) = 1
    return (tuple(e) + (b,), tuple(he) + (-(a + b),))


def admissible_blowup_bundles(n: int) -> List[Tuple[int, int]]:
    out = []
    for b in range(-1, -n, -1):
        for s in (1, 2):
            out.append((s - b, b))
    return sorted(out)


def product_bundle(coeffs: Sequence[int]) -> BundleData:
    return BundleData((tuple(coeffs),))
