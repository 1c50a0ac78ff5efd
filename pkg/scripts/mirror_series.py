"""Print F, g and the mirror map q' for the projective problems."""

import argparse

from toric_qdm.catalog import hyperplane_bundle, projective_space
from toric_qdm.mirror import extract_fg, fmt_series, i_truncate, mirror_map
from toric_qdm.model import ToricModel


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=4)
    ap.add_argument("--max-n", type=int, default=3)
    args = ap.parse_args()
    for n in range(1, args.max_n + 1):
        for a in range(1, n + 2):
            m = ToricModel.build(projective_space(n), hyperplane_bundle(n, a))
            ms = extract_fg(m, i_truncate(m, args.order))
            print(f"P{n}, O({a})")
            print(f"    F  = {fmt_series(ms.F, ['q'])}")
            print(f"    g  = {fmt_series(ms.g[0], ['q'])}")
            if ms.clean:
                mm = mirror_map(ms, 1, args.order)
                print(f"    t0 = {fmt_series(mm.t0, ['q'])}")
                print(f"    q' = {fmt_series(mm.q_prime[0], ['q'])}")
            else:
                print("    (higher layers present; mirror map not read off)")


if __name__ == "__main__":
    main()
