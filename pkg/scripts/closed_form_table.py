"""Closed-form SLEM against the assembled chain and a cold numerical solve."""

import argparse

from kppdr import chain, numsolve, optimal
from kppdr.topology import make_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--families", nargs="+", default=["symmetric", "semi-symmetric", "cycle", "semi-cycle"])
    ap.add_argument("--k", type=int, nargs="+", default=[4, 6, 8])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--solve", action="store_true", help="also run the numerical solver (slow)")
    args = ap.parse_args()

    header = f"{'family':>15} {'K':>3} {'n':>2} {'closed':>12} {'assembled':>12}"
    print(header + (f" {'numerical':>12}" if args.solve else ""))
    for family in args.families:
        for k in args.k:
            for n in args.n:
                try:
                    spec = make_spec(family, k, n)
                except ValueError:
                    continue
                res = optimal.optimal_probabilities(spec)
                got = chain.slem(chain.assemble(spec, res.probs)) if res.feasible else float("nan")
                line = f"{family:>15} {k:>3} {n:>2} {res.slem:12.9f} {got:12.9f}"
                if args.solve:
                    num = numsolve.minimize_slem(spec, numsolve.SolveConfig(warm_start=False))
                    line += f" {num.slem:12.9f}"
                print(line + ("  *" if res.notes else ""))
    print("* closed form carries a note (corrected or infeasible case)")


if __name__ == "__main__":
    main()
