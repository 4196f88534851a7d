"""Command-line entry point: ``credalvol <subcommand> [options]``.

Exit status is 0 on success, 1 for invalid input (including an unknown
subcommand) and 2 for numerical failures.  Data goes to standard output
or ``--out``; diagnostics go to standard error.
"""

import argparse
import json
import sys
import warnings

import numpy as np
from scipy.spatial import QhullError

from . import __version__
from .axioms import (
    MEASURES, AxiomConfig, check_axioms, check_continuity, check_probability_consistency,
    check_subadditivity, continuity_counterexample, vanishing_height_sequence,
)
from .errors import CredalError, NumericalFailure
from .experiments import CURVE_HEADER, idm_curve, prior_shrinkage
from .io import csv_text, dumps, read_credal_set, read_grouping
from .lift import lift_probability_set
from .measures import (
    generalized_hartley, imprecision_width, lower_probabilities, maximize_entropy, mobius_mass,
    upper_probabilities,
)
from .packing import (
    DEFAULT_RESTARTS, DEFAULT_SWEEP_RATIOS, carl_pajor_experiment, theorem1_experiment,
)
from .volume import resolve_threads, volume_exact, volume_mc
from .simplex import HULL_MAX_DIM

SUBCOMMANDS = ("volume", "measures", "axioms", "packing-experiment", "carl-pajor", "lift",
               "idm-sim", "prior-shrinkage")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _int_range(text):
    """'a:b' -> range(a, b + 1)."""
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _float_list(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _common(p, samples=100_000):
    p.add_argument("--out", help="write data here instead of standard output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap (default: $CREDALVOL_THREADS or 1)")
    p.add_argument("--format", choices=("json", "csv"), default=None,
                   help="default: json, or csv for tables")


def build_parser():
    parser = _Parser(prog="credalvol", description="Volume of credal sets as epistemic uncertainty")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand", parser_class=_Parser)

    p = sub.add_parser("volume", help="volume of a credal set")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("auto", "exact", "mc"), default="auto")
    p.add_argument("--membership", choices=("auto", "halfspace", "nearest"), default="auto")
    _common(p)

    p = sub.add_parser("measures", help="envelopes, width, entropy and nonspecificity")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, default=1e-6, help="max-entropy duality gap")
    _common(p)

    p = sub.add_parser("axioms", help="axiom reports, or the vanishing-height example")
    p.add_argument("mode", nargs="?", choices=("check", "example1"), default="check")
    p.add_argument("--input")
    p.add_argument("--nested", help="credal set contained in --input (enables A3)")
    p.add_argument("--grouping", help="grouping JSON (enables A5/A6)")
    p.add_argument("--sequence", nargs="+", help="credal sets for the A4' check")
    p.add_argument("--measure", choices=MEASURES, default="volume")
    p.add_argument("--convention", choices=("reference", "adaptive"), default="reference")
    p.add_argument("--base", type=float, default=0.5)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--height", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("packing-experiment", help="boundary-concentration experiment")
    p.add_argument("--d", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--r", type=float, default=0.1)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--sweep-d", type=_int_range, help="LO:HI, emits CSV rows")
    _common(p)

    p = sub.add_parser("carl-pajor", help="inscribed-polytope volume fraction vs bound")
    p.add_argument("--d", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--sweep-d", type=_int_range, help="LO:HI with m in {d+1, 2d, 4d}")
    _common(p)

    p = sub.add_parser("lift", help="volume-matching lift into a larger simplex")
    p.add_argument("--input", required=True)
    p.add_argument("--target-d", type=int, required=True)
    _common(p)

    p = sub.add_parser("idm-sim", help="IDM uncertainty curve")
    p.add_argument("--p", type=_float_list, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--s", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("prior-shrinkage", help="eroded-simplex volume fraction vs label count")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--c-range", type=_int_range, default=list(range(2, 13)))
    _common(p)
    return parser


def _config(args):
    cfg = {k: v for k, v in vars(args).items() if k != "out"}
    cfg["threads"] = resolve_threads(args.threads)
    return cfg


def _run_volume(args):
    P = read_credal_set(args.input)
    method = args.method
    if method == "auto":
        method = "exact" if P.k <= HULL_MAX_DIM else "mc"
    if method == "exact":
        res = volume_exact(P)
    else:
        res = volume_mc(P, samples=args.samples, seed=args.seed, membership=args.membership,
                        threads=args.threads)
    return {"d": P.d, "n_vertices": P.n_vertices, **res.as_dict()}


def _run_measures(args):
    P = read_credal_set(args.input)
    ent = maximize_entropy(P, tol=args.tol)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        gh = generalized_hartley(P, warn=False)
    mass = mobius_mass(P)
    return {
        "d": P.d,
        "lower": lower_probabilities(P).tolist(),
        "upper": upper_probabilities(P).tolist(),
        "width": imprecision_width(P),
        "max_entropy": ent.value,
        "max_entropy_point": ent.point.tolist(),
        "max_entropy_gap": ent.gap,
        "max_entropy_converged": ent.converged,
        "mobius_mass": mass.masses.tolist(),
        "negative_mass": mass.has_negative,
        "generalized_hartley": gh,
    }


def _run_axioms(args):
    cfg = AxiomConfig(convention=args.convention, seed=args.seed)
    if args.mode == "example1":
        table = continuity_counterexample(args.base, args.n, args.height)
        tris, seg = vanishing_height_sequence(args.base, args.n)
        acfg = AxiomConfig(convention="adaptive")
        a2 = check_continuity(tris, seg, config=acfg)
        a4 = check_probability_consistency(tris + [seg], config=acfg)
        rows = [(r["n"], r["h"], r["vol2"], r["vol1"], r["width"]) for r in table["rows"]]
        lim = table["limit"]
        rows.append((lim["n"], lim["h"], lim["vol2"], lim["vol1"], lim["width"]))
        summary = {
            "A2": a2.verdict, "A4'": a4.verdict,
            "A3_pair": {k: v for k, v in table["a3_pair"].items() if k != "report"},
            "A3": table["a3_pair"]["report"].verdict,
        }
        return ("csv", ("n", "h", "vol2", "vol1", "width"), rows, summary)

    reports = []
    if args.sequence:
        seq = [read_credal_set(f) for f in args.sequence]
        reports.append(check_probability_consistency(seq, args.measure, cfg))
    if args.input:
        P = read_credal_set(args.input)
        Q = read_credal_set(args.nested) if args.nested else None
        reports.extend(check_axioms(P, Q, args.measure, cfg))
        if args.grouping:
            reports.extend(check_subadditivity(P, read_grouping(args.grouping), args.measure))
    elif not args.sequence:
        raise UsageError("axioms: --input or --sequence is required")
    return {"reports": [r.as_dict() for r in reports]}


def _packing_row(rep):
    return (rep.d, rep.eps, rep.r, rep.vol_P, rep.vol_Q, rep.vol_Qprime, rep.lhs, rep.rhs,
            rep.ratio_Q, rep.ratio_Qprime, rep.n_pack_P, rep.n_pack_Qprime, rep.condition_c,
            rep.c_hat_P, rep.c_hat_Qprime, rep.identity_holds, rep.inequality_holds,
            ";".join(rep.flags))


PACKING_HEADER = ("d", "eps", "r", "vol_P", "vol_Q", "vol_Qprime", "lhs", "rhs", "ratio_Q",
                  "ratio_Qprime", "n_pack_P", "n_pack_Qprime", "condition_c", "c_hat_P",
                  "c_hat_Qprime", "identity_holds", "inequality_holds", "flags")


def _run_packing(args):
    kw = dict(seed=args.seed, restarts=args.restarts, samples=args.samples)
    if args.sweep_d:
        eps_values = [args.eps] if args.eps is not None else [q * args.r for q in DEFAULT_SWEEP_RATIOS]
        reps = [theorem1_experiment(d, e, args.r, **kw) for d in args.sweep_d for e in eps_values]
        return ("csv", PACKING_HEADER, [_packing_row(r) for r in reps], None)
    if args.d is None or args.eps is None:
        raise UsageError("packing-experiment: --d and --eps are required without --sweep-d")
    return theorem1_experiment(args.d, args.eps, args.r, **kw).as_dict()


CARL_PAJOR_HEADER = ("d", "m", "samples", "seed", "bound", "ratio", "stderr", "holds")


def _run_carl_pajor(args):
    if args.sweep_d:
        rows = []
        for d in args.sweep_d:
            for m in ([args.m] if args.m else [d + 1, 2 * d, 4 * d]):
                rep = carl_pajor_experiment(d, m, args.samples, args.seed)
                rows.append(tuple(rep.as_dict().values()))
        return ("csv", CARL_PAJOR_HEADER, rows, None)
    if args.d is None or args.m is None:
        raise UsageError("carl-pajor: --d and --m are required without --sweep-d")
    return carl_pajor_experiment(args.d, args.m, args.samples, args.seed).as_dict()


def _run_lift(args):
    P = read_credal_set(args.input)
    res = lift_probability_set(P, args.target_d)
    return {
        "d_source": P.d, "d_target": args.target_d,
        "vertices": res.K.vertices.tolist(),
        "V": res.spec.V.tolist(), "b": res.spec.b.tolist(),
        "gap": res.gap, "target_volume": res.target_volume,
        "lifted_volume": res.lifted_volume,
        "params": [list(p) for p in res.params],
    }


def _run_idm(args):
    rows = idm_curve(args.p, args.n, args.s, args.seed)
    return ("csv", CURVE_HEADER, [r.as_tuple() for r in rows], None)


def _run_prior(args):
    rows = prior_shrinkage(args.eps, args.c_range)
    return ("csv", ("c", "eps", "ratio", "closed_form"),
            [tuple(r.values()) for r in rows], None)


_RUNNERS = {
    "volume": _run_volume, "measures": _run_measures, "axioms": _run_axioms,
    "packing-experiment": _run_packing, "carl-pajor": _run_carl_pajor, "lift": _run_lift,
    "idm-sim": _run_idm, "prior-shrinkage": _run_prior,
}


def _render(args, result):
    if args.format is None:
        args.format = "csv" if isinstance(result, tuple) else "json"
    config = _config(args)
    if isinstance(result, tuple):
        _, header, rows, summary = result
        if args.format == "csv":
            comments = ["config " + json.dumps(config, sort_keys=True)]
            if summary is not None:
                comments.append("summary " + json.dumps(summary, sort_keys=True))
            return csv_text(header, rows, comments)
        out = {"config": config, "header": list(header), "rows": [list(r) for r in rows]}
        if summary is not None:
            out["summary"] = summary
        return dumps(out) + "\n"
    if args.format == "csv":
        flat = {k: v for k, v in result.items() if not isinstance(v, (list, dict))}
        return csv_text(tuple(flat), [tuple(flat.values())],
                        ["config " + json.dumps(config, sort_keys=True)])
    return dumps({"config": config, "result": result}) + "\n"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand is None:
            raise UsageError(parser.format_usage() + "credalvol: error: a subcommand is required")
        result = _RUNNERS[args.subcommand](args)
        text = _render(args, result)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, QhullError, np.linalg.LinAlgError, FloatingPointError,
            ArithmeticError) as exc:
        print(f"credalvol: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CredalError, ValueError, OSError) as exc:
        print(f"credalvol: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
