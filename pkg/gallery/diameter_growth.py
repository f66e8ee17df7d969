"""Mean diameter against ln n for a few models, next to the proven envelope.

Prints a plot-ready table: one row per (model, n) with the mean and max
diameter over the seeds, the bound, and a final fitted slope per model.
"""
import argparse

import numpy as np

from evograph import harness
from evograph.models import MODELS, default_config, init


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", default="pref,glp,copying,ktree,apollonian")
    ap.add_argument("--n", default="1000,3000,10000,30000")
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()

    ns = [int(x) for x in args.n.split(",")]
    print("model\tn\tmean_diam\tmax_diam\tbound")
    for name in args.models.split(","):
        if name not in MODELS:
            raise SystemExit(f"unknown model {name}")
        cfg = default_config(name)
        rows = harness.sweep(cfg, ns, range(args.seeds))
        for n in ns:
            d = [r.diameter for r in rows if r.n == n]
            bound = next(r.bound for r in rows if r.n == n)
            print(f"{name}\t{n}\t{np.mean(d):.2f}\t{max(d)}\t{bound:.1f}")
        fit = harness.fit_growth(rows)
        spec = harness.bound_spec(cfg, init(cfg).g0_vertices)
        print(f"# {name}: slope {fit.slope:.3f} per ln n (c1 = {spec.c1:.3f})")


if __name__ == "__main__":
    main()
