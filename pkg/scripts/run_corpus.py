"""Run every pipeline stage on the shipped problems and print a status table."""

import argparse
import time
from pathlib import Path

from toric_qdm.cli import parse, run

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--problems", type=Path, default=ROOT / "problems")
    ap.add_argument("--order", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    worst = 0
    print(f"{'problem':<14} {'status':<12} {'H*':>3} {'bat':>4} {'res':>4} {'cands':>5} {'secs':>6}")
    for path in sorted(args.problems.glob("*.json")):
        t0 = time.perf_counter()
        rep = run(parse(path), "all", args.order, seed=args.seed)
        dt = time.perf_counter() - t0
        sec = rep.sections
        res = sec.get("residual", {}).get("residual_rank", "-")
        cands = len(sec.get("colon", {}).get("candidates", []))
        status = rep.as_dict()["status"]
        print(f"{path.stem:<14} {status:<12} {sec['batyrev']['cohomology_dim']:>3} "
              f"{sec['batyrev']['batyrev_rank']:>4} {res:>4} {cands:>5} {dt:>6.2f}")
        if rep.failures:
            print("   failed:", ", ".join(rep.failures))
        worst = max(worst, rep.exit_code)
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
