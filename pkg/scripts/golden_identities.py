"""Residual operators for P^n and Bl_pt P^n: solver cofactors versus the hand-written ones.

For each case the certified cofactors found by the bounded linear solve are
printed next to the scalar relating ctop * P0 to the expected combination.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from golden import blowup_cofactors, blowup_p0, projective_p0  # noqa: E402

from toric_qdm.catalog import (admissible_blowup_bundles, blowup_basis, blowup_bundle,  # noqa: E402
                               blowup_point, hyperplane_bundle, projective_space)
from toric_qdm.gkz import (DiffOperator, box_system, colon_membership, fmt_op, op_mul,  # noqa: E402
                           proportional, spair_residual)
from toric_qdm.model import ToricModel  # noqa: E402


def show(label, system, P0, expected_cofactors):
    qn = system.model.qnames()
    rhs = DiffOperator(system.model.r)
    for B, box in zip(expected_cofactors, system.boxes):
        rhs = rhs + op_mul(B, box)
    lam = proportional(op_mul(system.ctop, P0), rhs)
    cert = colon_membership(P0, system)
    print(f"{label}: scalar {lam}, verified {cert.verified}, unknowns {cert.unknowns}")
    print(f"    P0 = {fmt_op(P0, qn)}")
    for c, B in zip(system.classes, cert.cofactors):
        print(f"    cofactor of box{list(c)}: {fmt_op(B, qn)}")


def main():
    for n in range(1, 5):
        for a in range(1, n + 2):
            s = box_system(ToricModel.build(projective_space(n), hyperplane_bundle(n, a)))
            show(f"P{n}, O({a})", s, projective_p0(n, a), [DiffOperator.const(1)])
    for n in (2, 3):
        for a, b in admissible_blowup_bundles(n):
            m = ToricModel.build(blowup_point(n), blowup_bundle(n, a, b), h2_basis=blowup_basis(n, a, b))
            s = box_system(m)
            show(f"Bl P{n}, {a}H{b:+d}E", s, blowup_p0(n, a, b), blowup_cofactors(s, n, a, b))
            sp = spair_residual(s, 0, 1)
            print(f"    S-pair residual ({sp.method}): {fmt_op(sp.T, m.qnames())}")
            print(f"    proportional to P0: {proportional(sp.T, blowup_p0(n, a, b))}")


if __name__ == "__main__":
    main()
