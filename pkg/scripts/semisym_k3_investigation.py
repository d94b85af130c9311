"""Semi-symmetric K=3: closed-form candidate versus the numerical optimum.

The candidate (Full 2/(3n), Strait 1/2) overdraws the middle set.  This
script reports its holdings, the SLEM it would have if infeasibility were
ignored, and the best feasible SLEM found by the optimizer.
"""

import argparse
import json
import math

import numpy as np

from kppdr import chain, linalg, numsolve, optimal
from kppdr.topology import build_graph, make_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    target = (1 + math.sqrt(13)) / 6
    rows = []
    for n in args.n:
        spec = make_spec("semi-symmetric", 3, n)
        closed = optimal.optimal_probabilities(spec)
        lap = chain.orbit_laplacians(build_graph(spec))
        raw = np.eye(spec.node_count) - np.tensordot(closed.probs, lap, axes=1)
        # spectrum of the unconstrained matrix, negative diagonal and all
        raw_slem = linalg.deviation_norm(raw)
        best = numsolve.minimize_slem(
            spec, numsolve.SolveConfig(restarts=args.restarts, seed=args.seed, warm_start=False)
        )
        rows.append({
            "n": n,
            "closed_form_probs": list(closed.probs),
            "closed_form_feasible": closed.feasible,
            "min_holding": float(chain.holding_probabilities(spec, closed.probs).min()),
            "unconstrained_slem": raw_slem,
            "best_probs": list(best.probs),
            "best_slem": best.slem,
            "meets_target_1e-3": abs(best.slem - target) <= 1e-3,
        })
    print(json.dumps({"target": target, "results": rows}, indent=2))


if __name__ == "__main__":
    main()
