"""Where the pegging coupling stops dominating edge by edge.

Pegging deletes two edges per step and subdivides them through two new
vertices, so edges that were shallow can end up deeper. This script tracks
the worst ratio of graph edge depth to tree depth, and separately checks the
weaker statement that the deepest edge is within twice the tree height.
"""
import argparse


from evograph import metrics
from evograph.coupling import EDGE, Coupler
from evograph.models import init
from evograph.sampling import RngStream


def audit(n, seed, every):
    state = init("pegging")
    coupler = Coupler(state)
    g, tree = state.graph, coupler.tree
    rng = RngStream(seed)
    first_bad, worst, height_ok = None, 0.0, True
    for t in range(1, n + 1):
        coupler.apply(state.step(rng))
        if t % every:
            continue
        depth = metrics.bfs_depths(g)
        edge_depth = {e: 1 + min(depth[a], depth[b]) for e, _, a, b in g.edges()}
        ratios = [d / tree.depth[tree.node_of(EDGE, e)] for e, d in edge_depth.items()]
        r = max(ratios)
        worst = max(worst, r)
        if r > 2 and first_bad is None:
            first_bad = t
        height_ok &= max(edge_depth.values()) <= 2 * tree.height()
    return first_bad, worst, height_ok


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--every", type=int, default=50)
    args = ap.parse_args()
    print("seed\tfirst_violation\tworst_ratio\theight_level_ok")
    for s in range(args.seeds):
        first, worst, ok = audit(args.n, s, args.every)
        print(f"{s}\t{first}\t{worst:.2f}\t{ok}")


if __name__ == "__main__":
    main()
