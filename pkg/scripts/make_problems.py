"""Write the shipped problem corpus to problems/."""

import argparse
from pathlib import Path

from toric_qdm.catalog import (admissible_blowup_bundles, blowup_basis, blowup_bundle, blowup_point,
                               hyperplane_bundle, p1xp1, projective_space)
from toric_qdm.cli import ProblemFile, emit_problem


def fan_problem(name, fan, bundles=(), basis=None):
    return ProblemFile(fan.rank, [list(v) for v in fan.rays], [sorted(c) for c in fan.max_cones],
                       [list(b) for b in bundles], [list(b) for b in basis] if basis else None,
                       None, 3, name)


def corpus():
    out = []
    for n in range(1, 5):
        for a in range(1, n + 2):
            out.append(fan_problem(f"p{n}_o{a}", projective_space(n), hyperplane_bundle(n, a).coeffs))
    for n in (2, 3):
        for a, b in admissible_blowup_bundles(n):
            out.append(fan_problem(f"blp{n}_a{a}_b{b}", blowup_point(n), blowup_bundle(n, a, b).coeffs,
                                   blowup_basis(n, a, b)))
    out.append(fan_problem("blp2", blowup_point(2), (), blowup_basis(2)))
    out.append(fan_problem("p1xp1", p1xp1(), [(1, 0, 1, 0)]))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "problems"))
    args = ap.parse_args()
    dest = Path(args.out)
    dest.mkdir(parents=True, exist_ok=True)
    for pf in corpus():
        (dest / f"{pf.name}.json").write_text(emit_problem(pf))
        print(pf.name)


if __name__ == "__main__":
    main()
