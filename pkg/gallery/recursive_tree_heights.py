"""Heights of the coupled edge tree of the generic preferential model with
one edge per step. That tree is a random recursive tree, so its height should
sit near e ln n and below e ln n + 2e + |V(T_0)|."""
import argparse
import math

import numpy as np

from evograph.coupling import Coupler
from evograph.harness import uniform_attachment_height_bound
from evograph.models import default_config, init
from evograph.sampling import RngStream


def tree_height(n, seed):
    state = init(default_config("pref", A=1, B=0))
    coupler = Coupler(state)
    rng = RngStream(seed, stream=n)
    for _ in range(n):
        coupler.apply(state.step(rng))
    return coupler.tree.height()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[1000, 10000, 100000])
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()
    print("n\tmean\tmax\te*ln(n)\tlimit")
    for n in args.n:
        h = np.array([tree_height(n, s) for s in range(args.seeds)])
        print(f"{n}\t{h.mean():.2f}\t{h.max()}\t{math.e * math.log(n):.2f}\t"
              f"{uniform_attachment_height_bound(n, 1, 1, 2):.2f}")


if __name__ == "__main__":
    main()
