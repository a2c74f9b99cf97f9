"""Command-line front end.

Every subcommand is a thin adapter over the library: parse flags, call
one or two library functions, write the artifacts.  Numeric work lives
in the modules; nothing here computes.

Exit codes: 0 success, 1 domain error (bad input values, solver or grid
failure, missing file, malformed JSON — each with its own diagnostic
prefix on stderr), 2 usage error (unknown subcommand or flag).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructions, experiments, plotting
from .lemniscate import (
    GridResolutionError,
    REPORT_CSV_HEADER,
    count_components,
    render_svg,
    report_csv_row,
)
from .polycore import load_polynomial, save_polynomial
from .potential import (
    boundary_samples,
    capacity_estimate,
    equilibrium_sample,
    save_point_set_csv,
    set_from_json_dict,
)
from .rootfind import SolverError

DEFAULT_SEED = 1729  # fixed so omitting --seed still reproduces


def _load_set(text: str):
    """--set accepts inline JSON (starts with '{') or a path to JSON."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return set_from_json_dict(json.loads(stripped))
    with open(stripped) as fh:
        return set_from_json_dict(json.load(fh))


def _parse_coeffs(text: str):
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("--coeffs must be a JSON array")
    out = []
    for item in data:
        if isinstance(item, (list, tuple)):
            out.append(complex(item[0], item[1]))
        else:
            out.append(complex(item))
    return out


def _sign_token(text: str) -> str:
    return text.replace("-", "_")


def _sibling_png(path: str) -> str:
    stem, _ = os.path.splitext(path)
    return stem + ".png"


def cmd_construct(args) -> int:
    name = args.name
    if name == "roots-of-unity":
        p = constructions.roots_of_unity_poly(args.n, _sign_token(args.sign))
    elif name == "chebyshev":
        p = constructions.chebyshev_monic(args.n, args.half_width)
    elif name == "ehp":
        p = constructions.ehp_polynomial(args.n)
    elif name == "ehp-scaled":
        p = constructions.scaled_ehp(args.n)
    elif name == "period-m":
        if args.coeffs is None:
            raise ValueError("period-m needs --coeffs for the generator")
        p = constructions.composed_period_m(_parse_coeffs(args.coeffs), args.n)
    elif name == "lemniscate-power":
        if args.coeffs is None:
            raise ValueError("lemniscate-power needs --coeffs for the generator")
        p = constructions.lemniscate_power(_parse_coeffs(args.coeffs), args.n,
                                           _sign_token(args.sign))
    elif name == "faber":
        if args.coeffs is None:
            raise ValueError("faber needs --coeffs for the exterior map")
        fc = constructions.faber_polynomials(_parse_coeffs(args.coeffs), args.n)
        doc = {
            "psi": [[c.real, c.imag] for c in fc.psi_coeffs],
            "polynomials": [[[w.real, w.imag] for w in poly]
                            for poly in fc.faber],
        }
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.out}")
        return 0
    elif name == "cluster":
        if args.set is None:
            raise ValueError("cluster needs --set for the sampling arc")
        K = _load_set(args.set)
        anchor = complex(boundary_samples(K, 64)[0])
        n1 = args.n1 if args.n1 is not None else max(1, args.n // 2)
        n2 = args.n - n1
        p = constructions.cluster_construction(anchor, K, n1, n2, args.seed)
    else:
        raise ValueError(f"unknown construction {name!r}")
    save_polynomial(p, args.out)
    print(f"wrote {args.out} (degree {p.degree})")
    return 0


def cmd_components(args) -> int:
    p = load_polynomial(args.poly)
    rep = count_components(p, resolution=args.resolution, level=args.level)
    print(f"count {rep.count}")
    print(f"method {rep.method}  margin {rep.margin:.6g}  "
          f"ambiguous {str(rep.ambiguous).lower()}")
    if args.out:
        if args.format == "svg":
            with open(args.out, "w") as fh:
                fh.write(render_svg(p, level=args.level))
        elif args.format == "json":
            with open(args.out, "w") as fh:
                json.dump({"count": rep.count, "method": rep.method,
                           "margin": rep.margin, "ambiguous": rep.ambiguous},
                          fh, indent=2)
                fh.write("\n")
            plotting.lemniscate_figure(p, _sibling_png(args.out),
                                       level=args.level)
        else:
            with open(args.out, "w") as fh:
                fh.write(REPORT_CSV_HEADER + "\n")
                fh.write(report_csv_row(p.degree, rep) + "\n")
            plotting.lemniscate_figure(p, _sibling_png(args.out),
                                       level=args.level)
        print(f"wrote {args.out}")
    return 0


def cmd_capacity(args) -> int:
    K = _load_set(args.set)
    value = capacity_estimate(K, args.n)
    print(f"capacity {value:.6g} (n={args.n}, calibrated)")
    if args.out:
        with open(args.out, "w") as fh:
            if args.format == "json":
                json.dump({"capacity": value, "n": args.n}, fh, indent=2)
                fh.write("\n")
            else:
                fh.write("n,capacity\n")
                fh.write(f"{args.n},{value:.12g}\n")
        print(f"wrote {args.out}")
    return 0


def cmd_fekete(args) -> int:
    K = _load_set(args.set)
    res = experiments.fekete_lemniscate_experiment(K, args.n)
    rep = res.report
    print(f"count {rep.count}")
    print(f"capacity {res.capacity:.6g}  min spacing {res.min_spacing:.6g}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("re,im,log_deriv,isolated\n")
            for j, z in enumerate(res.zeros):
                fh.write(f"{z.real:.17g},{z.imag:.17g},"
                         f"{res.derivative_log_abs[j]:.12g},"
                         f"{str(rep.per_zero_isolated[j]).lower()}\n")
        from .polycore import MonicPolynomial
        plotting.lemniscate_figure(MonicPolynomial(res.zeros),
                                   _sibling_png(args.out), level=args.level)
        print(f"wrote {args.out}")
    return 0


def cmd_sample(args) -> int:
    K = _load_set(args.set)
    mu = equilibrium_sample(K, args.n, args.seed)
    save_point_set_csv(args.out, mu)
    print(f"wrote {args.out} ({mu.size} points)")
    return 0


def cmd_experiment(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = experiments.config_from_json_dict(json.load(fh))
    else:
        if args.set is None:
            raise ValueError("experiment needs --config or --set")
        cfg = experiments.ExperimentConfig(
            kind=args.kind, K=_load_set(args.set), degree=args.degree,
            trials=args.trials, seed=args.seed)
    prefix = args.out

    if cfg.kind == "mean_ratio":
        summary = experiments.estimate_mean_component_ratio(cfg)
        csv_path = cfg.csv_path or prefix + ".trials.csv"
        json_path = cfg.summary_path or prefix + ".summary.json"
        experiments.save_trials_csv(csv_path, summary)
        experiments.save_summary_json(json_path, cfg, summary)
        plotting.ratio_histogram(summary, prefix + ".png")
        svg_path = cfg.svg_path or prefix + ".witness.svg"
        from .polycore import MonicPolynomial
        witness = MonicPolynomial(
            equilibrium_sample(cfg.K, cfg.degree, summary.witness_seed).points)
        with open(svg_path, "w") as fh:
            fh.write(render_svg(witness))
        print(f"mean ratio {summary.mean_ratio:.4f}  "
              f"max {summary.max_ratio:.4f}  "
              f"ambiguous {len(summary.ambiguous_trials)}")
        print(f"wrote {csv_path}, {json_path}, {prefix}.png, {svg_path}")
    elif cfg.kind == "fekete_lemniscate":
        res = experiments.fekete_lemniscate_experiment(cfg.K, cfg.degree)
        print(f"count {res.report.count}")
        with open(prefix + ".summary.json", "w") as fh:
            json.dump({"count": res.report.count, "capacity": res.capacity,
                       "min_spacing": res.min_spacing}, fh, indent=2)
            fh.write("\n")
        from .polycore import MonicPolynomial
        plotting.lemniscate_figure(MonicPolynomial(res.zeros), prefix + ".png")
        print(f"wrote {prefix}.summary.json, {prefix}.png")
    elif cfg.kind == "cluster_lower_bound":
        rows = experiments.cluster_lower_bound_experiment(cfg)
        with open(prefix + ".csv", "w") as fh:
            fh.write("fraction,n1,n2,count,ratio,ambiguous\n")
            for r in rows:
                fh.write(f"{r['fraction']:.12g},{r['n1']},{r['n2']},"
                         f"{r['count']},{r['ratio']:.12g},"
                         f"{str(r['ambiguous']).lower()}\n")
        plotting.rows_figure(rows, "fraction", ["ratio"], "cluster fraction",
                             prefix + ".png")
        print(f"wrote {prefix}.csv, {prefix}.png")
    elif cfg.kind == "capacity_sweep":
        rows = experiments.capacity_sweep_experiment(cfg)
        with open(prefix + ".csv", "w") as fh:
            fh.write("n,raw,calibrated\n")
            for r in rows:
                fh.write(f"{r['n']},{r['raw']:.12g},{r['calibrated']:.12g}\n")
        plotting.capacity_sweep_figure(rows, prefix + ".png")
        print(f"wrote {prefix}.csv, {prefix}.png")
    else:  # ehp_census
        rows = experiments.ehp_census(3, min(cfg.degree, 100))
        with open(prefix + ".csv", "w") as fh:
            fh.write(experiments.census_csv(rows))
        plotting.census_figure(rows, prefix + ".png")
        print(f"wrote {prefix}.csv, {prefix}.png")
    return 0


def cmd_plot(args) -> int:
    p = load_polynomial(args.poly)
    plotting.lemniscate_figure(p, args.out, resolution=args.resolution,
                               level=args.level)
    print(f"wrote {args.out}")
    return 0


def cmd_ehp_census(args) -> int:
    rows = experiments.ehp_census(3, args.n)
    text = experiments.census_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        plotting.census_figure(rows, _sibling_png(args.out))
        print(f"wrote {args.out} and {_sibling_png(args.out)}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lemkit",
        description="polynomial lemniscates: counting, capacity, experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("construct", help="build a named polynomial family")
    pc.add_argument("name", choices=["roots-of-unity", "chebyshev", "ehp",
                                     "ehp-scaled", "period-m",
                                     "lemniscate-power", "faber", "cluster"])
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--out", required=True)
    pc.add_argument("--coeffs", help="JSON array for the generator/map")
    pc.add_argument("--sign", default="plus-one",
                    choices=["plus-one", "minus-one"])
    pc.add_argument("--half-width", type=float, default=2.0)
    pc.add_argument("--set", help="sampling set for cluster")
    pc.add_argument("--n1", type=int, help="cluster pile size")
    pc.add_argument("--seed", type=int, default=DEFAULT_SEED)
    pc.set_defaults(func=cmd_construct)

    pm = sub.add_parser("components", help="count sublevel components")
    pm.add_argument("--poly", required=True)
    pm.add_argument("--resolution", type=int, default=2048)
    pm.add_argument("--level", type=float, default=1.0)
    pm.add_argument("--out")
    pm.add_argument("--format", default="csv", choices=["csv", "json", "svg"])
    pm.set_defaults(func=cmd_components)

    pk = sub.add_parser("capacity", help="estimate logarithmic capacity")
    pk.add_argument("--set", required=True)
    pk.add_argument("--n", type=int, default=64)
    pk.add_argument("--out")
    pk.add_argument("--format", default="csv", choices=["csv", "json"])
    pk.set_defaults(func=cmd_capacity)

    pf = sub.add_parser("fekete", help="greedy extremal-point lemniscate")
    pf.add_argument("--set", required=True)
    pf.add_argument("--n", type=int, required=True)
    pf.add_argument("--level", type=float, default=1.0)
    pf.add_argument("--out")
    pf.set_defaults(func=cmd_fekete)

    ps = sub.add_parser("sample", help="draw equilibrium samples")
    ps.add_argument("--set", required=True)
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_sample)

    pe = sub.add_parser("experiment", help="run a configured experiment")
    pe.add_argument("--config", help="JSON config path")
    pe.add_argument("--kind", default="mean_ratio",
                    choices=list(experiments.EXPERIMENT_KINDS))
    pe.add_argument("--set")
    pe.add_argument("--degree", type=int, default=50)
    pe.add_argument("--trials", type=int, default=30)
    pe.add_argument("--seed", type=int, default=DEFAULT_SEED)
    pe.add_argument("--out", required=True, help="output path prefix")
    pe.set_defaults(func=cmd_experiment)

    pp = sub.add_parser("plot", help="render a lemniscate to PNG")
    pp.add_argument("--poly", required=True)
    pp.add_argument("--resolution", type=int, default=400)
    pp.add_argument("--level", type=float, default=1.0)
    pp.add_argument("--out", required=True)
    pp.set_defaults(func=cmd_plot)

    pz = sub.add_parser("ehp-census", help="sweep the double-zero family")
    pz.add_argument("--n", type=int, default=30, help="largest degree")
    pz.add_argument("--out")
    pz.set_defaults(func=cmd_ehp_census)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"json error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1
    except GridResolutionError as exc:
        print(f"grid error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
