"""Command line front end: ``evograph {generate,couple,diameter,sweep,validate}``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import harness, metrics
from .graph import export_edge_list, read_edge_list
from .models import MODELS, config_from_dict, default_config


def load_config(model: str | None, config: str | None):
    """Config from ``--config`` (JSON text or a path to a JSON file) with
    ``--model`` filling in or checking the model name."""
    if config is None:
        if model is None:
            raise SystemExit("need --model or --config")
        return default_config(model)
    text = config
    if os.path.exists(config):
        with open(config) as fh:
            text = fh.read()
    d = json.loads(text)
    if model is not None:
        if d.setdefault("model", model) != model:
            raise SystemExit(f"--model {model} disagrees with config model {d['model']}")
    if "model" not in d:
        raise SystemExit("config has no 'model' and --model was not given")
    return config_from_dict(d)


def parse_seeds(text: str) -> list[int]:
    """``20`` means seeds 0..19; ``3,5,9`` and ``10-19`` list them."""
    seeds = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            seeds.extend(range(int(lo), int(hi) + 1))
        elif "," in text:
            seeds.append(int(part))
        else:
            seeds.extend(range(int(part)))
    return seeds


def parse_ns(text: str) -> list[int]:
    return [int(float(x)) for x in text.split(",")]


def _emit(data: bytes, out: str | None):
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def cmd_generate(args):
    config = load_config(args.model, args.config)
    if args.format not in ("tsv", "dot"):
        raise SystemExit("generate writes --format tsv or dot")
    state = harness.grow(config, args.n, args.seed)
    _emit(export_edge_list(state.graph, args.format), args.out)
    return 0


def cmd_couple(args):
    config = load_config(args.model, args.config)
    seeds = parse_seeds(args.seeds) if args.seeds else [args.seed]
    bad = 0
    rows = []
    for seed in seeds:
        r = harness.run(config, args.n, seed, audit=args.audit, with_tree=True)
        rows.append(r)
        status = "ok" if r.violations == 0 else f"VIOLATIONS={r.violations}"
        print(f"{r.model}\tseed={seed}\tn={r.n}\ttree_height={r.tree_height}\t"
              f"height={r.height}\tdiameter={r.diameter}\t{status}")
        if r.violations:
            bad += 1
            print(f"  first: {r.first_violation}", file=sys.stderr)
    if args.out:
        _emit(harness.write_csv(rows).encode(), args.out)
    return 1 if bad else 0


def cmd_diameter(args):
    with open(args.path, "rb") as fh:
        g = read_edge_list(fh.read())
    view = metrics.DistanceView.from_graph(g)
    print(f"vertices\t{g.num_vertices}")
    print(f"edges\t{g.num_edges}")
    print(f"diameter\t{metrics.diameter_exact(view)}")
    print(f"height\t{metrics.height_from_root(view, g.root)}")
    return 0


def cmd_sweep(args):
    config = load_config(args.model, args.config)
    rows = harness.sweep(config, parse_ns(args.n), parse_seeds(args.seeds),
                         parallelism=args.threads, audit=args.audit)
    if args.format == "jsonl":
        data = harness.write_jsonl(rows)
    elif args.format == "csv":
        data = harness.write_csv(rows)
    else:
        raise SystemExit("sweep writes --format csv or jsonl")
    _emit(data.encode(), args.out)
    if args.fit:
        fit = harness.fit_growth(rows)
        spec = harness.bound_spec(config, harness.init(config).g0_vertices)
        c1 = f"{spec.c1:.4f}" if spec else "n/a"
        print(f"fit slope={fit.slope:.4f} intercept={fit.intercept:.4f} "
              f"residual={fit.residual:.4f} c1={c1}", file=sys.stderr)
    return 1 if any(r.error for r in rows) else 0


def cmd_validate(args):
    from .validation import run_all

    failed = 0
    for name, ok, detail in run_all(quick=args.quick):
        print(f"{'PASS' if ok else 'FAIL'}\t{name}\t{detail}")
        failed += not ok
    return 1 if failed else 0


def build_parser():
    p = argparse.ArgumentParser(prog="evograph", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def model_args(sp):
        sp.add_argument("--model", choices=sorted(MODELS))
        sp.add_argument("--config", help="JSON config text or path to a JSON file")

    g = sub.add_parser("generate", help="grow a graph and write its edge list")
    model_args(g)
    g.add_argument("--n", type=lambda s: int(float(s)), required=True, help="growth steps")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=["tsv", "dot", "csv", "jsonl"], default="tsv")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("couple", help="grow with the coupled tree and audit it")
    model_args(c)
    c.add_argument("--n", type=lambda s: int(float(s)), required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--seeds", help="seed count or list; overrides --seed")
    c.add_argument("--audit", choices=harness.AUDIT_LEVELS, default="checkpoints")
    c.add_argument("--out", help="write result rows as CSV")
    c.set_defaults(func=cmd_couple)

    d = sub.add_parser("diameter", help="exact diameter of a stored TSV edge list")
    d.add_argument("path")
    d.set_defaults(func=cmd_diameter)

    s = sub.add_parser("sweep", help="run an (n, seed) matrix and write a table")
    model_args(s)
    s.add_argument("--n", required=True, help="comma separated step counts")
    s.add_argument("--seeds", default="20", help="seed count or list (default 20)")
    s.add_argument("--audit", choices=harness.AUDIT_LEVELS, default="off")
    s.add_argument("--format", choices=["tsv", "dot", "csv", "jsonl"], default="csv")
    s.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: EVOGRAPH_THREADS or 1)")
    s.add_argument("--fit", action="store_true", help="print the ln n growth fit")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("validate", help="run the sampler and diameter self-checks")
    v.add_argument("--quick", action="store_true", help="smaller batteries")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None) is None and "EVOGRAPH_THREADS" in os.environ:
        args.threads = harness.default_parallelism()
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
