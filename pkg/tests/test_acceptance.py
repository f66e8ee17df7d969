"""Exit criteria at full scale. Each test records a pass/fail line that is
printed in the terminal summary under "acceptance criteria"."""

import os
import subprocess
import sys
import time

import numpy as np
import pytest

from evograph import harness, validation
from evograph.coupling import Coupler
from evograph.graph import export_edge_list
from evograph.models import MODELS, default_config, init
from evograph.sampling import RngStream

pytestmark = pytest.mark.acceptance

ALL = sorted(MODELS)

PEGGING_XFAIL = pytest.mark.xfail(
    strict=True,
    reason="pegging subdivides edges, which can make older edges deeper than twice "
           "their tree depth; see notes in the README")


def _domination_param(name):
    return pytest.param(name, marks=PEGGING_XFAIL) if name == "pegging" else name


# ------------------------------------------------------------ criterion 1

@pytest.mark.parametrize("name", [_domination_param(n) for n in ALL])
def test_c1_domination(name, criterion):
    cfg = default_config(name)
    bad = []
    for seed in range(20):
        r = harness.run(cfg, 10 ** 4, seed, audit="checkpoints")
        if r.violations:
            bad.append((seed, "checkpoints", r.first_violation))
    for seed in range(5):
        r = harness.run(cfg, 10 ** 3, seed, audit="every-step")
        if r.violations:
            bad.append((seed, "every-step", r.first_violation))
    detail = f"{len(bad)}/25 runs with violations" + (f", e.g. {bad[0][2]}" if bad else "")
    criterion(1, name, not bad, detail)
    assert not bad, detail


# ------------------------------------------------------------ criterion 2

def seed_tree_size(cfg):
    # |V(T_0)|: the root sentinel plus one node per seed edge
    return len(Coupler(init(cfg)).tree)

def test_c2_recursive_tree_height(criterion):
    n, seeds = 10 ** 5, 200
    cfg = default_config("pref", A=1, B=0)
    heights = []
    for seed in range(seeds):
        state = init(cfg)
        coupler = Coupler(state)
        rng = RngStream(seed, stream=n)
        for _ in range(n):
            coupler.apply(state.step(rng))
        heights.append(coupler.tree.height())
    t0 = seed_tree_size(cfg)
    limit = harness.uniform_attachment_height_bound(n, 1, 1, t0)
    frac = float(np.mean(np.array(heights) <= limit))
    detail = (f"{frac:.1%} of {seeds} runs within {limit:.2f}; "
              f"heights {min(heights)}..{max(heights)}")
    criterion(2, "pref A=1 B=0", frac >= 0.95, detail)
    assert frac >= 0.95, detail


# ------------------------------------------------------------ criterion 3

def test_c3_sampler_exactness(criterion):
    r = validation.check_sampler_exactness(5, 6, validation.DELTAS)
    criterion(3, "rho_delta vs hat/index", r["ok"],
              f"{r['checked']} graph/delta pairs, mismatch={r['mismatch']}")
    assert r["ok"], r["mismatch"]


# ------------------------------------------------------------ criterion 4

def test_c4_pagerank_walk(criterion):
    g = validation.fixed_out_regular_digraph(20, 3)
    assert set(g.outdeg) == {3}
    tv = validation.pagerank_tv(10 ** 6, q=0.8, g=g)
    criterion(4, "walk endpoints vs power iteration", tv < 0.01, f"tv={tv:.5f}")
    bad = validation.tail_dominance_failures(64)
    criterion(4, "tail dominance grid", not bad, f"{len(bad)} failing (p, q, k) points")
    assert tv < 0.01 and not bad


# ------------------------------------------------------------ criterion 5

def test_c5_diameter_engine(criterion):
    r = validation.check_diameters(200, 500)
    families = {name for name, _ in validation.random_instances(200, 500)}
    ok = r["ok"] and families == set(MODELS)
    criterion(5, "diameter_exact vs oracle", ok,
              f"{r['random']} random over {len(families)} families, mismatches={r['mismatches']}")
    assert ok


# ------------------------------------------------------------ criterion 6

@pytest.mark.parametrize("name", ALL)
def test_c6_bound_envelope(name, criterion):
    cfg = default_config(name)
    start = time.perf_counter()
    rows = harness.sweep(cfg, [10 ** 3, 10 ** 4, 3 * 10 ** 4], range(20), parallelism=1)
    errors = [r.error for r in rows if r.error]
    over = [(r.n, r.seed, r.diameter, round(r.bound, 1)) for r in rows
            if not r.error and r.diameter > r.bound]
    spec = harness.bound_spec(cfg, init(cfg).g0_vertices)
    fit = harness.fit_growth(rows)
    ok = not errors and not over and fit.slope <= spec.c1
    detail = (f"max diam {max(r.diameter for r in rows)} vs bound at 1e3 "
              f"{rows[0].bound:.1f}; slope {fit.slope:.3f} <= c1 {spec.c1:.3f}; "
              f"{len(over)} over, {len(errors)} errors; {time.perf_counter() - start:.0f}s")
    criterion(6, name, ok, detail)
    assert ok, detail


# ------------------------------------------------------------ criterion 7

def test_c7_pegging_regular(criterion):
    bad = 0
    for seed in range(5):
        state = init("pegging")
        rng, g = RngStream(seed), state.graph
        for t in range(1, 10 ** 4 + 1):
            tr = state.step(rng)
            touched = tr.samples["ends"] + tr.new_vertices
            bad += any(g.deg[v] != 3 for v in touched)
            if t % 1000 == 0:
                bad += set(g.deg) != {3}
    criterion(7, "pegging 3-regular", bad == 0, f"{bad} failures")
    assert bad == 0


@pytest.mark.parametrize("name", ["copying", "hybrid"])
def test_c7_out_degree(name, criterion):
    bad = 0
    for seed in range(5):
        state = init(name)
        rng, g, d = RngStream(seed), state.graph, state.config.d
        for _ in range(10 ** 4):
            tr = state.step(rng)
            bad += g.outdeg[tr.new_vertices[0]] != d
        bad += set(g.outdeg) != {d}
    criterion(7, f"{name} out-degree", bad == 0, f"{bad} failures")
    assert bad == 0


def test_c7_apollonian_eligible(criterion):
    bad = 0
    for k in (3, 4):
        for seed in range(5):
            state = init(default_config("apollonian", k=k))
            rng = RngStream(seed)
            for t in range(1, 10 ** 4 + 1):
                state.step(rng)
                bad += len(state.eligible) != 1 + t * (k - 1)
    criterion(7, "apollonian eligible count", bad == 0, f"{bad} failures")
    assert bad == 0


def test_c7_cooper_frieze_edges(criterion):
    bad = 0
    for seed in range(5):
        state = init("cooper_frieze")
        rng, total = RngStream(seed), 0
        for _ in range(10 ** 4):
            total += state.step(rng).samples["X"]
            bad += state.graph.num_edges != state.g0_edges + total
    criterion(7, "cooper-frieze edge count", bad == 0, f"{bad} failures")
    assert bad == 0


# ------------------------------------------------------------ criterion 8

def _cli(args, threads):
    env = dict(os.environ, EVOGRAPH_THREADS=str(threads))
    subprocess.run([sys.executable, "-m", "evograph", *args], check=True, env=env,
                   capture_output=True)


def test_c8_determinism(criterion, tmp_path):
    bad = []
    for name in ALL:
        outs = []
        for i, threads in enumerate((1, 1, 3)):
            path = tmp_path / f"{name}{i}.tsv"
            _cli(["generate", "--model", name, "--n", "2000", "--seed", "5", "--out", str(path)],
                 threads)
            outs.append(path.read_bytes())
        if len(set(outs)) != 1:
            bad.append(f"generate {name}")
        # the library path must agree with the CLI
        if export_edge_list(harness.grow(default_config(name), 2000, 5).graph) != outs[0]:
            bad.append(f"library {name}")
    for name in ("glp", "pegging", "forest_fire"):
        outs = []
        for i, threads in enumerate((1, 1, 2, 4)):
            path = tmp_path / f"sweep{name}{i}.csv"
            _cli(["sweep", "--model", name, "--n", "200,1000,3000", "--seeds", "4",
                  "--out", str(path)], threads)
            outs.append(path.read_bytes())
        if len(set(outs)) != 1:
            bad.append(f"sweep {name}")
    criterion(8, "generate/sweep byte identity", not bad, ", ".join(bad) or "identical")
    assert not bad
