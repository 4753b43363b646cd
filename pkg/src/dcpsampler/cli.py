"""Command-line surface: tune, sample, count, check, shape, render, verify.

Machine-readable output goes to stdout (or --out), human diagnostics to
stderr.  All randomness derives from --seed; identical invocations give
byte-identical machine output.  Exit codes: 0 success, 2 invalid
arguments, 3 trial cap exceeded, 4 internal invariant violation.
"""

import argparse
import concurrent.futures
import json
import sys

from . import analytics, boltzmann, oracle, polyomino
from .gfseries import build_context, mean_size, series_identity_check, tune_parameter
from .rng import RngStream

DEFAULT_SEED = 20140908
DEFAULT_TAIL_TOL = 1e-12


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _context_for(args) -> tuple:
    """Resolve the Boltzmann parameter from --x or --n (tuned, refined)."""
    if (args.x is None) == (args.n is None):
        raise ValueError("supply exactly one of --x or --n")
    if args.x is not None:
        if not 0.0 < args.x < 1.0:
            raise ValueError("--x must lie in (0, 1)")
        x = args.x
    else:
        x = tune_parameter(args.n, refine=True, tail_tol=args.tail_tol)
    return x, build_context(x, args.tail_tol)


def _sample_worker(task) -> list[str]:
    (x, tail_tol, mode, n, eps, cap, seed, stream, count) = task
    ctx = build_context(x, tail_tol)
    rng = RngStream(seed).spawn(stream)
    lines = []
    for _ in range(count):
        if mode == "exact":
            rep = boltzmann.sample_path_exact(ctx, n, rng, draw_budget=cap)
        elif mode == "approx":
            rep = boltzmann.sample_path_approx(ctx, n, eps, rng, draw_budget=cap)
        else:
            rep = boltzmann.sample_path_free(ctx, rng)
        lines.append(boltzmann.sample_record(rep, stream=stream))
    return lines


def _partition(total: int, workers: int) -> list[int]:
    base, extra = divmod(total, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _cmd_tune(args) -> int:
    x_cf = tune_parameter(args.n, refine=False)
    x_ref = tune_parameter(args.n, refine=True, tail_tol=args.tail_tol)
    ctx = build_context(x_ref, args.tail_tol)
    _emit(
        json.dumps(
            {
                "n": args.n,
                "closed_form": x_cf,
                "refined": x_ref,
                "refined_mean_size": mean_size(ctx),
            },
            separators=(",", ":"),
        )
        + "\n",
        args.out,
    )
    return 0


def _cmd_sample_path(args) -> int:
    if args.exact and args.n is None:
        raise ValueError("--exact needs --n")
    mode = "free"
    if args.n is not None:
        mode = "exact" if args.exact else "approx"
    x, _ = _context_for(args)
    tasks = [
        (x, args.tail_tol, mode, args.n, args.eps, args.trial_cap, args.seed, i, cnt)
        for i, cnt in enumerate(_partition(args.samples, args.workers))
        if cnt
    ]
    if args.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.workers) as pool:
            chunks = list(pool.map(_sample_worker, tasks))
    else:
        chunks = [_sample_worker(t) for t in tasks]
    _emit("".join(line + "\n" for chunk in chunks for line in chunk), args.out)
    return 0


def _cmd_sample_dcp(args) -> int:
    _, ctx = _context_for(args)
    rng = RngStream(args.seed).spawn(0)
    lines = []
    for _ in range(args.samples):
        rep = polyomino.sample_dcp(ctx, rng, draw_budget=args.trial_cap)
        lines.append(polyomino.polyomino_record(rep))
    _emit("".join(line + "\n" for line in lines), args.out)
    return 0


def _cmd_count(args) -> int:
    table = oracle.count_paths(args.n)
    _emit(oracle.count_table_text(table), args.out)
    return 0


def _cmd_check(args) -> int:
    word = args.word
    if word.strip("01"):
        raise ValueError("word must be a string over 0/1")
    m = oracle.christoffel_factorization(word)
    geo = oracle.is_nw_convex_geometric(word)
    record = {
        "word": word,
        "nw_convex": m is not None,
        "geometric": geo,
        "factors": [[s.p, s.q, mult] for s, mult in m.entries] if m else None,
    }
    _emit(json.dumps(record, separators=(",", ":")) + "\n", args.out)
    print(f"NW-convex: {m is not None}", file=sys.stderr)
    return 0


def _cmd_shape(args) -> int:
    if args.n is None:
        raise ValueError("shape needs --n")
    x = tune_parameter(args.n, refine=True, tail_tol=args.tail_tol)
    ctx = build_context(x, args.tail_tol)
    rng = RngStream(args.seed).spawn(0)
    prof = analytics.shape_profile(ctx, args.n, args.samples, args.grid, rng, eps=args.eps)
    _emit(analytics.profile_csv(prof), args.out)
    print(
        f"endpoint=({prof.endpoint_mean[0]:.4f},{prof.endpoint_mean[1]:.4f}) "
        f"slope1_height={prof.slope_one_height:.4f}",
        file=sys.stderr,
    )
    return 0


def _cmd_render(args) -> int:
    if args.words:
        words = args.words.split(",")
        if len(words) != 4:
            raise ValueError("--words needs four comma-separated words")
        for w in words:
            if not oracle.is_nw_convex(w):
                raise ValueError(f"word {w!r} is not NW-convex")
        if not polyomino.closure_check(*words):
            raise ValueError("words do not satisfy the closure equations")
        poly = polyomino.assemble_contour(*words)
    else:
        _, ctx = _context_for(args)
        rng = RngStream(args.seed).spawn(0)
        poly = polyomino.sample_dcp(ctx, rng, draw_budget=args.trial_cap).value
    _emit(polyomino.render_svg(poly, scale=args.scale), args.out)
    return 0


def _cmd_verify(args) -> int:
    failures = 0
    lines = []

    def suite(name: str, ok: bool, detail: str) -> None:
        nonlocal failures
        lines.append(f"{name},{'pass' if ok else 'FAIL'},{detail}")
        if not ok:
            failures += 1

    # word checker vs geometric checker, exhaustively on short words
    mismatch = 0
    total = 0
    for length in range(1, 13):
        for bits in range(1 << length):
            w = format(bits, f"0{length}b")
            total += 1
            if oracle.is_nw_convex(w) != oracle.is_nw_convex_geometric(w):
                mismatch += 1
    suite("checker_agreement", mismatch == 0, f"{total} words, {mismatch} mismatches")

    # enumeration against exact counts
    table = oracle.count_paths(10)
    bad = [
        n for n in range(11) if len(oracle.enumerate_paths(n)) != table.counts[n]
    ]
    suite("enumeration_counts", not bad, f"n<=10, mismatches={bad}")

    # series identity grid
    worst = 0.0
    for x in (0.3, 0.5, 0.7, 0.9):
        worst = max(worst, series_identity_check(build_context(x, args.tail_tol)))
    suite("series_identity", worst < 1e-8, f"max_gap={worst:.3e}")

    # sampled paths accepted by both checkers
    ctx = build_context(0.6, args.tail_tol)
    rng = RngStream(args.seed).spawn(0)
    bad_samples = 0
    for _ in range(500):
        w = boltzmann.sample_path_free(ctx, rng).value
        if not (oracle.is_nw_convex(w) and oracle.is_nw_convex_geometric(w)):
            bad_samples += 1
    suite("sampler_soundness", bad_samples == 0, f"500 draws, {bad_samples} rejected")

    _emit("".join(line + "\n" for line in lines), args.out)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcpsampler",
        description="Boltzmann sampling toolkit for digitally convex polyominoes "
        "and NW-convex paths",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sampling=False):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
        p.add_argument("--out", default=None)
        if sampling:
            p.add_argument("--x", type=float, default=None)
            p.add_argument("--n", type=int, default=None)
            p.add_argument("--trial-cap", type=int, default=boltzmann.DEFAULT_DRAW_BUDGET)

    p = sub.add_parser("tune", help="Boltzmann parameter for a target mean size")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("sample-path", help="sample NW-convex paths")
    common(p, sampling=True)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["jsonl"], default="jsonl")
    p.set_defaults(func=_cmd_sample_path)

    p = sub.add_parser("sample-dcp", help="sample digitally convex polyominoes")
    common(p, sampling=True)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--format", choices=["jsonl"], default="jsonl")
    p.set_defaults(func=_cmd_sample_dcp)

    p = sub.add_parser("count", help="exact path counts by size")
    p.add_argument("--n", dest="n", type=int, required=True, metavar="N")
    common(p)
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("check", help="NW-convexity check with factorization")
    p.add_argument("word")
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("shape", help="mean renormalized height profile")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--grid", type=int, default=51)
    p.add_argument("--eps", type=float, default=0.05)
    p.set_defaults(func=_cmd_shape)

    p = sub.add_parser("render", help="SVG rendering of a polyomino")
    common(p, sampling=True)
    p.add_argument("--words", default=None, help="wn,ne,es,sw")
    p.add_argument("--scale", type=float, default=10.0)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("verify", help="cross-oracle verification suites")
    common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except boltzmann.TrialCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (polyomino.ContourError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
