"""Optimal versus Metropolis-Hastings weights on a semi-symmetric network.

Prints both SLEMs, the traces on a log scale at a few checkpoints, and the
first iteration after which the optimal chain stays ahead.
"""

import argparse
from pathlib import Path

import numpy as np

from kppdr import chain, mixsim, optimal
from kppdr.topology import build_graph, make_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="semi-symmetric")
    ap.add_argument("--k", type=int, default=6)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--iters", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--aggregate", choices=("arithmetic", "geometric"), default="geometric")
    ap.add_argument("--out", default="results/optimal_vs_mh.csv")
    args = ap.parse_args()

    spec = make_spec(args.family, args.k, args.n)
    weights = {
        "optimal": optimal.optimal_probabilities(spec).probs,
        "metropolis-hastings": chain.metropolis_hastings(build_graph(spec)),
    }
    cfg = mixsim.TrialConfig(trials=args.trials, iterations=args.iters, seed=args.seed, aggregate=args.aggregate)
    traces = {}
    for label, probs in weights.items():
        p = chain.assemble(spec, probs)
        print(f"{label:>20}: probs {np.round(probs, 6).tolist()}  slem {chain.slem(p):.6f}")
        traces[label] = mixsim.simulate(p, cfg)

    opt, mh = traces["optimal"].distances, traces["metropolis-hastings"].distances
    ahead = opt < mh
    behind = np.flatnonzero(~ahead[1:]) + 1
    settled = int(behind.max()) + 1 if behind.size else 1
    for t in (1, 5, 10, 20, 50, args.iters):
        if t <= args.iters:
            print(f"t={t:>4}  log10 optimal {np.log10(opt[t]):8.3f}   log10 MH {np.log10(mh[t]):8.3f}")
    print(f"optimal trace below MH for every t >= {settled}")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(mixsim.long_format_csv(list(traces.values()), list(traces)))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
