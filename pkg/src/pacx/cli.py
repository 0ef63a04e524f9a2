"""Command-line surface.

Exit codes: 0 success, 2 usage error (argparse), 3 budget exhaustion,
4 verification failure.  Every command takes --seed and --out; artifacts
default into $PACX_OUT_DIR (or the working directory).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import kernels
from .complexes import (barmak_check, build_clique_complex, collapse,
                        octahedral_sphere, read_complex, write_complex)
from .errors import BudgetError
from .experiments import (SweepSpec, TailPolicy, ccdf, fit_loglog_tail,
                          ks_evolution, parse_config, phase_classify,
                          read_records, run_sweep, summarize_csv,
                          write_records)
from .homology import FieldSpec, betti
from .pagraph import PAParams, generate_polya, generate_sequential, read_graph, write_graph
from .verify import run_verify

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


def _out_path(out: str | None, default_name: str) -> str:
    if out:
        return out
    return os.path.join(os.environ.get("PACX_OUT_DIR", "."), default_name)


def _parse_delta(text: str):
    """Exact rational when the text is a ratio or decimal literal."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return float(text)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--out", type=str, default=None, help="output path")


def _gen_graph(args):
    params = PAParams(args.T, args.m, float(args.delta), seed=args.seed)
    gen = generate_polya if args.gen == "polya" else generate_sequential
    return gen(params)


def cmd_gen(args) -> int:
    g = _gen_graph(args)
    path = _out_path(args.out, f"pa_T{args.T}_m{args.m}_s{args.seed}.txt")
    write_graph(g, path)
    print(f"wrote {path} ({g.n_edges} edges, gen={g.gen})")
    return EXIT_OK


def cmd_betti(args) -> int:
    if args.infile:
        g = read_graph(args.infile)
    elif args.T is not None:
        g = _gen_graph(args)
    else:
        print("betti: need --in FILE or --T/--m/--delta", file=sys.stderr)
        return EXIT_USAGE
    cx = build_clique_complex(collapse(g), dim_cap=args.qmax + 1,
                              budget=args.budget)
    bv = betti(cx, FieldSpec(args.p), q_max=args.qmax)
    path = _out_path(args.out, "betti.json")
    with open(path, "w", encoding="utf-8") as f:
        f.write(bv.to_json() + "\n")
    print(bv.to_json())
    print(f"wrote {path}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = parse_config(args.config) if args.config else {}
    if args.points:
        cfg["points"] = [tuple(map(float, p.split(","))) for p in args.points]
        cfg["points"] = [(int(t), int(m), float(d)) for t, m, d in cfg["points"]]
    if args.trials is not None:
        cfg["trials"] = args.trials
    if args.seed_given:
        cfg["seed"] = args.seed
    if args.q is not None:
        cfg["q_dims"] = args.q
    cfg.setdefault("trials", 1)
    spec = SweepSpec.from_dict(cfg)
    prefix = _out_path(args.out, "sweep")
    jsonl = prefix + ".jsonl"
    with open(jsonl, "w", encoding="utf-8") as f:
        records = run_sweep(spec, n_workers=args.threads,
                            sink=lambda r: f.write(r.to_json() + "\n"))
    csv_path = prefix + ".csv"
    summarize_csv(records, csv_path)
    n_ok = sum(r.status == "ok" for r in records)
    print(f"{n_ok}/{len(records)} trials ok; wrote {jsonl} and {csv_path}")
    return EXIT_OK


def cmd_fit(args) -> int:
    records = read_records(args.records)
    ok = [r for r in records if r.status == "ok"]
    if not ok:
        print("fit: no completed records", file=sys.stderr)
        return EXIT_USAGE
    t_sel = args.T if args.T is not None else max(r.T for r in ok)
    samples = [r.betti[args.q] for r in ok if r.T == t_sel]
    pts = ccdf(samples, normalize_by_mean=not args.no_normalize)
    fit = fit_loglog_tail(pts, TailPolicy(w_min=args.wmin))
    path = _out_path(args.out, "fit.json")
    payload = json.loads(fit.to_json())
    payload.update({"T": t_sel, "q": args.q, "n_samples": len(samples),
                    "normalized": not args.no_normalize})
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, sort_keys=True)
        f.write("\n")
    print(json.dumps(payload, sort_keys=True))
    print(f"wrote {path}")
    return EXIT_OK


def cmd_ks(args) -> int:
    records = read_records(args.records)
    evo = ks_evolution(records, args.q)
    path = _out_path(args.out, "ks.json")
    with open(path, "w", encoding="utf-8") as f:
        f.write(evo.to_json() + "\n")
    print(evo.to_json())
    print(f"wrote {path}")
    return EXIT_OK


def cmd_phase(args) -> int:
    region = phase_classify(_parse_delta(args.delta), args.m, args.q)
    print(region.label)
    print(f"x = {region.x:.12g}"
          + (f" = {region.x_exact}" if region.x_exact is not None else ""))
    print(f"thresholds: connected for x <= {region.lower}, "
          f"infinite for x in ({region.lower}, {region.upper}], "
          f"m >= {region.m_required} required")
    return EXIT_OK


def cmd_barmak(args) -> int:
    if args.infile:
        cx = read_complex(args.infile)
    elif args.sphere is not None:
        cx = octahedral_sphere(args.sphere)
    else:
        print("barmak: need --in FILE or --sphere Q", file=sys.stderr)
        return EXIT_USAGE
    verdict = barmak_check(cx, args.q, subset_budget=args.budget)
    print(f"{verdict.status} (q={args.q}, checked {verdict.subsets_checked} "
          f"subsets, exhaustive={verdict.exhaustive})")
    if verdict.witness:
        print(f"witness: {list(verdict.witness)}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump({"status": verdict.status, "q": verdict.q,
                       "witness": list(verdict.witness or []),
                       "subsets_checked": verdict.subsets_checked,
                       "exhaustive": verdict.exhaustive}, f, sort_keys=True)
            f.write("\n")
    return EXIT_OK


def cmd_sphere(args) -> int:
    cx = octahedral_sphere(args.q)
    path = _out_path(args.out, f"sphere_q{args.q}.txt")
    write_complex(cx, path)
    bv = betti(cx)
    print(f"octahedral sphere q={args.q}: f={cx.f_vector()}, "
          f"betti={bv.betti}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_verify(quick=not args.full, seed=args.seed)
    failed = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"[{status}] {r.name}: {r.detail}")
        failed += not r.ok
    print(f"kernel backend: {kernels.backend_name()}")
    if failed:
        print(f"{failed} verification suite(s) failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_plot(args) -> int:
    import csv as _csv

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(args.csv, "r", encoding="utf-8") as f:
        rows = list(_csv.DictReader(f))
    if not rows:
        print("plot: empty csv", file=sys.stderr)
        return EXIT_USAGE
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [float(r[args.x]) for r in rows]
    for ycol in args.y:
        ys = [float(r[ycol]) for r in rows]
        ax.plot(xs, ys, marker="o", label=ycol)
    if args.loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(args.x)
    ax.legend()
    path = _out_path(args.out, "plot.svg")
    fig.savefig(path, format=os.path.splitext(path)[1].lstrip(".") or "svg")
    plt.close(fig)
    print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pacx",
                                 description="Preferential attachment clique "
                                             "complex toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=str, required=True)
    p.add_argument("--gen", choices=("polya", "seq"), default="polya")
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("betti", help="Betti numbers of a graph's clique complex")
    p.add_argument("--in", dest="infile", type=str, default=None)
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--delta", type=str, default="0")
    p.add_argument("--gen", choices=("polya", "seq"), default="polya")
    p.add_argument("--qmax", type=int, default=1)
    p.add_argument("--p", type=int, default=2, help="field characteristic")
    p.add_argument("--budget", type=int, default=20_000_000)
    _add_common(p)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep")
    p.add_argument("--config", type=str, default=None)
    p.add_argument("--points", nargs="*", default=None,
                   help="override points as T,m,delta triples")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--q", type=int, nargs="*", default=None)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="CCDF power-law tail fit from records")
    p.add_argument("--records", type=str, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--wmin", type=float, default=1.0)
    p.add_argument("--no-normalize", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("ks", help="KS-norm evolution from snapshot records")
    p.add_argument("--records", type=str, required=True)
    p.add_argument("--q", type=int, default=2)
    _add_common(p)
    p.set_defaults(func=cmd_ks)

    p = sub.add_parser("phase", help="phase-region classification")
    p.add_argument("--delta", type=str, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("barmak", help="star-covering connectivity criterion")
    p.add_argument("--in", dest="infile", type=str, default=None)
    p.add_argument("--sphere", type=int, default=None,
                   help="use the octahedral sphere of this q instead")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--budget", type=int, default=200_000)
    _add_common(p)
    p.set_defaults(func=cmd_barmak)

    p = sub.add_parser("sphere", help="emit an octahedral sphere complex")
    p.add_argument("--q", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sphere)

    p = sub.add_parser("verify", help="run the oracle battery")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--quick", action="store_true", default=True)
    g.add_argument("--full", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render CSV columns to a vector file")
    p.add_argument("--csv", type=str, required=True)
    p.add_argument("--x", type=str, required=True)
    p.add_argument("--y", type=str, nargs="+", required=True)
    p.add_argument("--loglog", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_plot)

    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    args.seed_given = any(a == "--seed" or a.startswith("--seed=")
                          for a in argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
