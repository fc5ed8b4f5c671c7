"""Command line front end for the digit frequency toolkit.

Every pipeline stage is exposed as a subcommand with JSON, CSV, or plain
text output, so figures and regression baselines can be produced by
scripts.  Bases are always taken exactly: as decimal or p/q rationals, or
as an integer polynomial plus an isolating interval.  Floating point never
enters a computation, only reports.

Exit codes distinguish certainty: 0 for exact results, 2 for certified
approximations (truncated or sandwiched output), 1 for errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from .cfk import (
    FiniteItinerary,
    PeriodicItinerary,
    RationalItinerary,
    TruncatedItinerary,
    cf_inverse_chain,
    format_itinerary,
    infimax,
    itinerary_from_kneading,
    itinerary_of,
    parse_itinerary,
    simplex_images,
)
from .dfset import DFSandwich, Polytope, df_of_beta, df_polytope, df_sandwich, lock_interval
from .errors import DigitFreqError
from .exact_arith import IntegerPolynomial, format_rational, isolate_root, parse_rational
from .markov_oracle import build_partition, loops_report, minimal_loops, oracle_hull
from .symbolic import (
    EventuallyPeriodic,
    Word,
    base_alphabet_size,
    format_seq,
    greedy_digits,
    kneading_digits,
    parse_freq,
    parse_seq,
    prefix_freq_trajectory,
    w_beta,
)

EXIT_EXACT = 0
EXIT_ERROR = 1
EXIT_APPROX = 2


class _Parser(argparse.ArgumentParser):
    """Exit with the error code on usage mistakes, not argparse's 2.

    Code 2 is reserved for approximate-but-certified results.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"error: {message}\n")


# ---------------------------------------------------------------------------
# argument plumbing


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--k", type=int, help="alphabet size (inferred when omitted)")
    p.add_argument("--digit-budget", type=int, default=10000,
                   help="cap on lazily generated expansion digits")
    p.add_argument("--depth", type=int,
                   help="itinerary depth budget / sandwich depth / table depth")
    p.add_argument("--bits", type=int, help="bit budget for exact sign decisions")
    p.add_argument("--precision", type=int, default=12,
                   help="decimal places in reports")
    p.add_argument("--format", dest="fmt", choices=("text", "json", "csv"),
                   default="text")
    return p


def _add_beta_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", help="base as an exact decimal or p/q string")
    p.add_argument(
        "--beta-poly",
        help="integer polynomial with the base as a root: comma-separated "
        "coefficients, constant term first; append r to the last entry to "
        "pass them highest-degree first; use --beta-poly=-1,... when the "
        "first coefficient is negative",
    )
    p.add_argument("--interval", help="lo,hi isolating interval for --beta-poly")


def _parse_poly(text: str) -> IntegerPolynomial:
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    if not tokens:
        raise ValueError("empty coefficient list")
    reversed_order = tokens[-1].lower().endswith("r")
    if reversed_order:
        tokens[-1] = tokens[-1][:-1]
    coeffs = [int(t) for t in tokens]
    if reversed_order:
        coeffs.reverse()
    return IntegerPolynomial(tuple(coeffs))


def _beta_from_args(args) -> Fraction:
    given = [args.beta is not None, args.beta_poly is not None]
    if sum(given) != 1:
        raise ValueError("provide exactly one of --beta or --beta-poly")
    if args.beta is not None:
        return parse_rational(args.beta)
    if not args.interval:
        raise ValueError("--beta-poly requires --interval lo,hi")
    poly = _parse_poly(args.beta_poly)
    parts = args.interval.split(",")
    if len(parts) != 2:
        raise ValueError("--interval must be lo,hi")
    lo, hi = (parse_rational(t) for t in parts)
    return isolate_root(poly, lo, hi, args.bits)


def _check_k(args, beta) -> int:
    k = base_alphabet_size(beta)
    if args.k is not None and args.k != k:
        raise ValueError(f"--k {args.k} contradicts the base (alphabet size {k})")
    return k


def _require_k(args) -> int:
    if args.k is None:
        raise ValueError("--k is required for this input form")
    return args.k


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _print_csv(header, rows) -> None:
    writer = csv.writer(sys.stdout)
    writer.writerow(header)
    writer.writerows(rows)


def _itinerary_json(n) -> dict:
    kind = {
        RationalItinerary: "rational",
        FiniteItinerary: "finite",
        PeriodicItinerary: "periodic",
        TruncatedItinerary: "truncated",
    }[type(n)]
    out = {"type": kind, "text": format_itinerary(n)}
    if isinstance(n, PeriodicItinerary):
        out["entries"] = list(n.pre)
        out["period"] = list(n.period)
    else:
        out["entries"] = list(n.entries)
    return out


def _render_figure(path: str, layers, k: int, title: str) -> None:
    """Write a (first, last)-coordinate chart of point layers to a file."""
    try:
        import matplotlib
    except ImportError as exc:
        raise DigitFreqError(
            "matplotlib is not installed; install the 'figures' extra"
        ) from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.5, 5.0))
    for layer in layers:
        pts = [(float(p[0]), float(p[-1])) for p in layer["points"]]
        style = layer.get("style", "scatter")
        label = layer.get("label")
        if style == "polygon" and len(pts) >= 2:
            ring = pts + [pts[0]]
            xs, ys = zip(*ring)
            ax.fill(xs, ys, alpha=0.15)
            ax.plot(xs, ys, marker="o", markersize=3, label=label)
        else:
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            ax.scatter(xs, ys, s=8, label=label)
    ax.set_xlabel("first-digit frequency")
    ax.set_ylabel("top-digit frequency")
    ax.set_title(title)
    if any(layer.get("label") for layer in layers):
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _polytope_text(p: Polytope) -> list[str]:
    lines = [f"exact polytope, k={p.k}, {len(p.vertices)} vertices"]
    for v, t in zip(p.vertices, p.tags):
        coords = ", ".join(format_rational(c) for c in v)
        lines.append(f"  ({coords})  [{t}]")
    return lines


def _sandwich_text(s: DFSandwich) -> list[str]:
    lines = [f"sandwich at depth {s.depth}, gap {s.gap:.3e}"]
    lines.append("inner bound:")
    lines.extend("  " + line for line in _polytope_text(s.inner)[1:])
    lines.append("outer bound:")
    lines.extend("  " + line for line in _polytope_text(s.outer)[1:])
    return lines


# ---------------------------------------------------------------------------
# subcommands


def cmd_expand(args) -> int:
    beta = _beta_from_args(args)
    _check_k(args, beta)
    x = parse_rational(args.x)
    word = greedy_digits(beta, x, args.digits)
    text = "".join(str(d) for d in word)
    if args.fmt == "json":
        _print_json({"digits": list(word), "text": text})
    else:
        print(text)
    return EXIT_EXACT


def _sequence_command(args, seq) -> int:
    shown = format_seq(seq, max_digits=args.digits)
    exact = isinstance(seq, EventuallyPeriodic)
    if args.fmt == "json":
        _print_json({"sequence": shown, "exact": exact})
    else:
        print(shown)
    return EXIT_EXACT if exact else EXIT_APPROX


def cmd_kneading(args) -> int:
    beta = _beta_from_args(args)
    _check_k(args, beta)
    return _sequence_command(args, kneading_digits(beta, budget=args.digit_budget))


def cmd_wbeta(args) -> int:
    beta = _beta_from_args(args)
    _check_k(args, beta)
    return _sequence_command(args, w_beta(beta, budget=args.digit_budget))


def cmd_itinerary(args) -> int:
    sources = [args.beta is not None or args.beta_poly is not None,
               args.word is not None, args.alpha is not None]
    if sum(sources) != 1:
        raise ValueError("provide exactly one of --beta/--beta-poly, --word, --alpha")
    depth_budget = args.depth if args.depth is not None else 64
    if args.alpha is not None:
        n = itinerary_of(parse_freq(args.alpha))
    else:
        if args.word is not None:
            digits = [int(c) for c in args.word if c.isdigit()]
            if not digits:
                raise ValueError("no digits in --word")
            k = args.k if args.k is not None else max(digits) + 1
            seq = parse_seq(args.word, k)
            if isinstance(seq, Word):
                # bare digits: complete with the zero tail
                seq = EventuallyPeriodic(seq.digits, (0,), k)
        else:
            beta = _beta_from_args(args)
            _check_k(args, beta)
            seq = w_beta(beta, budget=args.digit_budget)
        n = itinerary_from_kneading(seq, depth_budget=depth_budget)
    if args.fmt == "json":
        _print_json(_itinerary_json(n))
    else:
        print(format_itinerary(n))
    return EXIT_APPROX if isinstance(n, TruncatedItinerary) else EXIT_EXACT


def cmd_infimax(args) -> int:
    n = parse_itinerary(args.itinerary)
    k = _require_k(args)
    word = infimax(n, k)
    return _sequence_command(args, word)


def cmd_dfset(args) -> int:
    depth = args.depth if args.depth is not None else 32
    if args.itinerary is not None:
        if args.beta is not None or args.beta_poly is not None:
            raise ValueError("provide either a base or an itinerary, not both")
        k = _require_k(args)
        n = parse_itinerary(args.itinerary)
        if isinstance(n, (RationalItinerary, FiniteItinerary)):
            result = df_polytope(n, k)
        elif isinstance(n, PeriodicItinerary):
            result = df_sandwich(n, depth, k)
        else:
            result = df_sandwich(n, min(depth, n.certified - 1), k)
    else:
        beta = _beta_from_args(args)
        _check_k(args, beta)
        result = df_of_beta(
            beta, digit_budget=args.digit_budget, sandwich_depth=depth
        )
    if args.fmt == "json":
        _print_json(result.to_json_dict())
    else:
        lines = (
            _polytope_text(result)
            if isinstance(result, Polytope)
            else _sandwich_text(result)
        )
        print("\n".join(lines))
    if args.figure:
        if isinstance(result, Polytope):
            layers = [{"points": result.vertices, "style": "polygon", "label": "exact"}]
            k = result.k
        else:
            layers = [
                {"points": result.outer.vertices, "style": "polygon", "label": "outer"},
                {"points": result.inner.vertices, "style": "polygon", "label": "inner"},
            ]
            k = result.outer.k
        _render_figure(args.figure, layers, k, "digit frequency set")
    return EXIT_EXACT if isinstance(result, Polytope) else EXIT_APPROX


def _parse_prefix(text: str) -> tuple[int, ...]:
    cleaned = text.strip().strip("[]")
    parts = [t for chunk in cleaned.split(",") for t in chunk.split()]
    if not parts:
        raise ValueError("empty prefix")
    return tuple(int(t) for t in parts)


def cmd_lock_interval(args) -> int:
    prefix = _parse_prefix(args.prefix)
    k = _require_k(args)
    li = lock_interval(prefix, k, args.bits)
    if args.fmt == "json":
        _print_json(li.to_json_dict(args.precision))
    else:
        d = li.to_json_dict(args.precision)
        print(f"prefix {list(prefix)} locks for bases in:")
        print(f"  lo {d['lo']['value']}  root of {d['lo']['poly']}")
        print(f"  hi {d['hi']['value']}  root of {d['hi']['poly']}")
        print("\n".join(_polytope_text(li.polytope)))
    return EXIT_EXACT


RULES = {
    "cubes": lambda r: r**3 if r <= 25 else 0,
    "squares": lambda r: r**2,
}


def _unit(k: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1 if j == i else 0) for j in range(k))


def cmd_plot_data(args) -> int:
    if (args.rule is None) == (args.prefix is None):
        raise ValueError("provide exactly one of --rule or --prefix")
    k = args.k if args.k is not None else 3
    if args.rule is not None:
        rule = RULES.get(args.rule.lower())
        if rule is None:
            raise ValueError(f"unknown rule {args.rule!r} (choose from {sorted(RULES)})")
        depth = args.depth if args.depth is not None else 25
        entries = tuple(rule(r) for r in range(depth + 1))
    else:
        entries = _parse_prefix(args.prefix)
    r = len(entries) - 1
    rows = []
    for s in range(r):
        point = cf_inverse_chain(entries[: s + 1], _unit(k, k - 2))
        rows.append((s, f"fe:{s}", point))
    rows.append((r, "phi-inverse", cf_inverse_chain(entries, _unit(k, k - 1))))
    if args.triangles:
        for t in range(r + 1):
            for i, v in enumerate(simplex_images(entries[: t + 1], k)["A_vertices"]):
                rows.append((t, f"a:{i}", v))
    header = (
        ["depth", "tag"]
        + [f"coord_{i}" for i in range(k)]
        + ["x_proj", "y_proj"]
    )
    table = [
        [str(depth), tag]
        + [format_rational(c) for c in point]
        + [
            f"{float(point[0]):.{args.precision}g}",
            f"{float(point[-1]):.{args.precision}g}",
        ]
        for depth, tag, point in rows
    ]
    if args.fmt == "json":
        _print_json({"header": header, "rows": table})
    else:
        _print_csv(header, table)
    if args.figure:
        layers = [{"points": [p for _, _, p in rows], "style": "scatter"}]
        _render_figure(args.figure, layers, k, "extreme point data")
    return EXIT_EXACT


def cmd_markov_check(args) -> int:
    beta = _beta_from_args(args)
    k = _check_k(args, beta)
    digits = tuple(int(c) for c in args.kneading if c.isdigit())
    _, graph = build_partition(beta, Word(digits, k), bits=args.bits)
    loops = minimal_loops(graph)
    hull = oracle_hull(loops, graph.labels)
    exact = df_of_beta(beta, digit_budget=args.digit_budget)
    if not isinstance(exact, Polytope):
        raise DigitFreqError(
            "itinerary route did not resolve exactly despite a finite orbit"
        )
    match = hull.vertices == exact.vertices
    if args.fmt == "json":
        _print_json(
            {
                "match": match,
                "oracle": hull.to_json_dict(),
                "itinerary": exact.to_json_dict(),
                "loops": loops_report(loops, graph.labels),
            }
        )
    else:
        if match:
            print(f"MATCH: {len(hull.vertices)} vertices")
        else:
            print("MISMATCH")
            only_oracle = [v for v in hull.vertices if v not in exact.vertices]
            only_exact = [v for v in exact.vertices if v not in hull.vertices]
            for v in only_oracle:
                print("  only in loop hull: (%s)" % ", ".join(map(format_rational, v)))
            for v in only_exact:
                print("  only in itinerary route: (%s)" % ", ".join(map(format_rational, v)))
        print("loop hull:")
        print("\n".join("  " + line for line in _polytope_text(hull)[1:]))
        print("itinerary route:")
        print("\n".join("  " + line for line in _polytope_text(exact)[1:]))
    return EXIT_EXACT if match else EXIT_ERROR


def cmd_freq_trajectory(args) -> int:
    if (args.beta is None and args.beta_poly is None) == (args.word is None):
        raise ValueError("provide exactly one of --beta/--beta-poly or --word")
    if args.word is not None:
        digits = [int(c) for c in args.word if c.isdigit()]
        k = args.k if args.k is not None else max(digits) + 1
        w = parse_seq(args.word, k)
    else:
        beta = _beta_from_args(args)
        k = _check_k(args, beta)
        w = w_beta(beta, budget=args.digit_budget)
    if args.strides:
        strides = sorted({int(t) for t in args.strides.split(",")})
    else:
        strides = [s for s in (10, 100, 1000, 10000) if s <= args.digit_budget]
    traj = prefix_freq_trajectory(w, strides)
    header = (
        ["stride"] + [f"coord_{i}" for i in range(k)] + ["x_proj", "y_proj"]
    )
    table = [
        [str(s)]
        + [format_rational(c) for c in freq]
        + [
            f"{float(freq[0]):.{args.precision}g}",
            f"{float(freq[-1]):.{args.precision}g}",
        ]
        for s, freq in traj
    ]
    if args.fmt == "json":
        _print_json({"header": header, "rows": table})
    else:
        _print_csv(header, table)
    if args.figure:
        _render_figure(
            args.figure,
            [{"points": [freq for _, freq in traj], "style": "scatter"}],
            k,
            "prefix frequency trajectory",
        )
    return EXIT_EXACT


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(
        prog="digitfreq",
        description="exact digit-frequency computations for beta expansions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common],
                       help="greedy expansion digits of x in base beta")
    _add_beta_options(p)
    p.add_argument("--x", required=True, help="starting value in [0, 1]")
    p.add_argument("--digits", type=int, required=True)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("kneading", parents=[common],
                       help="maximal expansion digits of 1")
    _add_beta_options(p)
    p.add_argument("--digits", type=int, default=60, help="digits to display")
    p.set_defaults(func=cmd_kneading)

    p = sub.add_parser("wbeta", parents=[common],
                       help="limit word of the expansions below 1")
    _add_beta_options(p)
    p.add_argument("--digits", type=int, default=60, help="digits to display")
    p.set_defaults(func=cmd_wbeta)

    p = sub.add_parser("itinerary", parents=[common],
                       help="itinerary of a base, maximal word, or frequency vector")
    _add_beta_options(p)
    p.add_argument("--word", help="digit sequence, pre(period) or prefix…")
    p.add_argument("--alpha", help="comma-separated exact frequency vector")
    p.set_defaults(func=cmd_itinerary)

    p = sub.add_parser("infimax", parents=[common],
                       help="smallest maximal word above an itinerary")
    p.add_argument("--itinerary", required=True)
    p.add_argument("--digits", type=int, default=60, help="digits to display")
    p.set_defaults(func=cmd_infimax)

    p = sub.add_parser("dfset", parents=[common],
                       help="digit frequency set of a base or itinerary")
    _add_beta_options(p)
    p.add_argument("--itinerary")
    p.add_argument("--figure", help="also render the set to this image file")
    p.set_defaults(func=cmd_dfset)

    p = sub.add_parser("lock-interval", parents=[common],
                       help="base interval with a constant frequency set")
    p.add_argument("--prefix", required=True, help="itinerary entries, e.g. 2,1,0,0")
    p.set_defaults(func=cmd_lock_interval)

    p = sub.add_parser("plot-data", parents=[common],
                       help="CSV of extreme-point data along an itinerary prefix")
    p.add_argument("--rule", help="entry rule: cubes or squares")
    p.add_argument("--prefix", help="explicit entries, e.g. [2,1,0,1]")
    p.add_argument("--triangles", action="store_true",
                   help="include the simplex-image vertices per depth")
    p.add_argument("--figure", help="also render the cloud to this image file")
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("markov-check", parents=[common],
                       help="compare the loop-frequency hull with the itinerary route")
    _add_beta_options(p)
    p.add_argument("--kneading", required=True,
                   help="finite maximal expansion digits of 1, e.g. 2121")
    p.set_defaults(func=cmd_markov_check)

    p = sub.add_parser("freq-trajectory", parents=[common],
                       help="digit frequencies of word prefixes at given strides")
    _add_beta_options(p)
    p.add_argument("--word")
    p.add_argument("--strides", help="comma-separated prefix lengths")
    p.add_argument("--figure", help="also render the trajectory to this image file")
    p.set_defaults(func=cmd_freq_trajectory)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DigitFreqError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
