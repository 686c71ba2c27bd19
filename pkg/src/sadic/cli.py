"""Command line interface.

Subcommands: orbit, certify, words, potential, spectrum, lyapunov,
complexity.  Every run is fully determined by its arguments: no clock,
no environment, and results do not depend on --threads.  CSV uses
header rows and newline terminators; exact rationals render as p/q and
floats with 17 significant digits.

Exit codes: 0 success, 2 invalid arguments, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import boshernitzan, coding, lyapunov, mcf, spectrum, words
from .substitution import DirectiveSequence


class UsageError(ValueError):
    """Bad argument values discovered after parsing."""


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def _parse_blocks(text: str, algorithm: str):
    tokens = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if algorithm == "cs":
            tokens.extend(chunk)  # digit string, one branch per character
        else:
            tokens.append(chunk)
    branches = []
    try:
        if algorithm == "cs":
            for t in tokens:
                b = int(t)
                if b not in (1, 2):
                    raise ValueError
                branches.append(b)
        else:
            for t in tokens:
                if len(t) != 2:
                    raise ValueError
                i, j = int(t[0]), int(t[1])
                if i == j or not (1 <= i <= 4 and 1 <= j <= 4):
                    raise ValueError
                branches.append((i, j))
    except ValueError:
        raise UsageError(f"bad branch token in --blocks for {algorithm}") from None
    if not branches:
        raise UsageError("--blocks is empty")
    return branches


def _branch_token(branch) -> str:
    if isinstance(branch, tuple):
        return f"{branch[0]}{branch[1]}"
    return str(branch)


def _add_source_args(p: argparse.ArgumentParser):
    p.add_argument("--algorithm", choices=["cs", "brun"], default="cs")
    p.add_argument("--point", help="simplex point, e.g. 1/3,1/3,1/3")
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--blocks", help="explicit branch word, e.g. 1212 or 12,23,34,41")
    p.add_argument("--repeat", type=int, default=1,
                   help="repeat --blocks this many times; 0 means unbounded")


def _add_output_args(p: argparse.ArgumentParser):
    p.add_argument("--output", default="-", help="output path, - for stdout")
    p.add_argument("--threads", type=int, default=1,
                   help="worker hint; results never depend on it")


def _directive_from_args(args, needed_terms: int) -> DirectiveSequence:
    """Build the directive sequence for a subcommand needing this many terms."""
    if (args.point is None) == (args.blocks is None):
        raise UsageError("give exactly one of --point or --blocks")
    if args.blocks is not None:
        branches = _parse_blocks(args.blocks, args.algorithm)
        sub_of = mcf.get_algorithm(args.algorithm).branch_substitution
        block = [sub_of(b) for b in branches]
        if args.repeat == 0:
            return DirectiveSequence.from_block(block)
        dv = DirectiveSequence.from_block(block, repeat=args.repeat)
        if dv.known_length() < needed_terms:
            raise UsageError(
                f"--blocks supplies {dv.known_length()} terms, need {needed_terms}"
            )
        return dv
    x = _point_from_args(args)
    return mcf.orbit_directive(x, args.algorithm)


def _point_from_args(args) -> mcf.SimplexPoint:
    try:
        return mcf.parse_point(args.point, exact=args.mode == "exact")
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad --point: {e}") from None


def _open_output(args):
    if args.output == "-":
        return sys.stdout, False
    return open(args.output, "w", encoding="utf-8"), True


def _emit(args, text: str):
    out, close = _open_output(args)
    try:
        out.write(text)
    finally:
        if close:
            out.close()


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, indent=2) + "\n")


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


# subcommand runners

def _run_orbit(args) -> int:
    x = _point_from_args(args)
    it = mcf.itinerary(x, args.steps, args.algorithm)
    rows = []
    for n, (branch, pt) in enumerate(zip(it.branches, it.points)):
        if args.format == "exact":
            coords = [str(c) for c in pt.coords]
        else:
            coords = [format_float(c) for c in pt.coords]
        rows.append([str(n), _branch_token(branch)] + coords)
    d = x.dimension
    header = ["step", "branch"] + [f"x_{k}" for k in range(1, d + 1)]
    _emit(args, _csv_text(header, rows))
    if it.degenerate:
        print(
            f"warning: orbit touched the simplex boundary at step "
            f"{it.boundary_step}; coding degenerate from there",
            file=sys.stderr,
        )
    return 0


def _run_certify(args) -> int:
    dv = _directive_from_args(args, args.horizon)
    cert = boshernitzan.scan_certificate(
        dv,
        args.horizon,
        norm_bound=args.max_norm,
        positivity_cap=args.positivity_cap,
        builder_cap=args.builder_cap,
    )
    if cert is None:
        _emit_json(args, {"found": False})
        return 0
    verified = boshernitzan.verify_cover(dv, cert)
    _emit_json(
        args,
        {
            "found": True,
            "n0": cert.n0,
            "n1": cert.n1,
            "n2": cert.n2,
            "n3": cert.n3,
            "N": cert.norm_bound,
            "r": cert.word_length,
            "C": str(cert.constant),
            "verified_cover": verified,
        },
    )
    return 0


def _run_words(args) -> int:
    dv = _directive_from_args(args, args.level + 1)
    lw = coding.level_words(dv, args.level, max_len=max(args.max_len, 1))
    length = lw.length(args.letter)
    counts = [lw.matrix[i][args.letter - 1] for i in range(dv.alphabet_size)]
    rendered = None
    if length <= args.max_len:
        rendered = words.format_word(lw.word(args.letter))
    _emit_json(
        args,
        {
            "level": args.level,
            "letter": args.letter,
            "length": length,
            "counts": counts,
            "word": rendered,
        },
    )
    return 0


def _parse_values(text: str, window: int) -> dict:
    values = {}
    try:
        for part in text.split(","):
            key, _, val = part.strip().partition("=")
            w = words.parse_word(key)
            values[w] = float(Fraction(val))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --values entry {part!r}") from None
    for w in values:
        if len(w) != window:
            raise UsageError(
                f"--values key {words.format_word(w)} does not match window {window}"
            )
    return values


def _sampling_from_args(args) -> coding.SamplingFunction:
    values = _parse_values(args.values, args.window)
    return coding.SamplingFunction(
        args.window, values, coupling=args.coupling, default=args.default
    )


def _run_potential(args) -> int:
    dv = _directive_from_args(args, args.level + 1)
    f = _sampling_from_args(args)
    lw = coding.level_words(dv, args.level)
    pot = coding.sample_potential(lw.word(args.letter), f)
    rows = [[str(i), format_float(v)] for i, v in enumerate(pot.samples)]
    _emit(args, _csv_text(["index", "value"], rows))
    return 0


def _run_spectrum(args) -> int:
    try:
        levels = [int(t) for t in args.levels.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad --levels {args.levels!r}") from None
    if not levels:
        raise UsageError("--levels is empty")
    dv = _directive_from_args(args, max(levels) + 1)
    f = _sampling_from_args(args)
    report = spectrum.zero_measure_trend(
        dv,
        f,
        levels,
        letter=args.letter,
        period_cap=args.period_cap,
        keep_bands=args.emit_bands,
    )
    for level, period in report.skipped:
        print(
            f"notice: level {level} skipped, period {period} exceeds cap "
            f"{args.period_cap}",
            file=sys.stderr,
        )
    if args.emit_bands:
        rows = [
            [str(row.level), str(k), format_float(lo), format_float(hi)]
            for row in report.rows
            for k, (lo, hi) in enumerate(row.bands)
        ]
        _emit(args, _csv_text(["level", "band", "lower", "upper"], rows))
    else:
        rows = [
            [
                str(row.level),
                str(row.period),
                str(row.band_count),
                format_float(row.bandwidth),
            ]
            for row in report.rows
        ]
        _emit(args, _csv_text(["level", "period", "band_count", "bandwidth"], rows))
    return 0


def _run_lyapunov(args) -> int:
    run = lyapunov.CocycleRun(
        algorithm=args.algorithm,
        steps=args.steps,
        burn_in=args.burn_in,
        reorth_every=args.reorth_every,
        seed=args.seed,
        transpose=args.transpose,
    )
    est = lyapunov.estimate_exponents(run, args.trials, workers=max(1, args.threads))
    total = sum(est.theta)
    tol = 3.0 * sum(est.stderr)
    _emit_json(
        args,
        {
            "algorithm": run.algorithm,
            "steps": run.steps,
            "burn_in": run.burn_in,
            "trials": est.trials,
            "seed": run.seed,
            "transpose": run.transpose,
            "theta": list(est.theta),
            "stderr": list(est.stderr),
            "sum": total,
            "sum_tolerance": tol,
        },
    )
    return 0


def _run_complexity(args) -> int:
    if (args.level is None) == (args.min_length is None):
        raise UsageError("give exactly one of --level or --min-length")
    if args.level is not None:
        dv = _directive_from_args(args, args.level + 1)
        lw = coding.level_words(dv, args.level)
    else:
        dv = _directive_from_args(args, 1)
        level = 0
        while True:
            lw = coding.level_words(dv, level)
            if lw.length(args.letter) >= args.min_length:
                break
            level += 1
    w = lw.word(args.letter)
    fs = words.factors(w, args.max_n)
    rows = [
        [str(n), str(words.complexity(fs, n))]
        for n in range(1, min(args.max_n, len(w)) + 1)
    ]
    _emit(args, _csv_text(["n", "complexity"], rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sadic",
        description="S-adic subshifts from continued fraction algorithms: "
        "orbits, Boshernitzan certificates, spectra, exponents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="iterate a continued fraction map")
    p.add_argument("--algorithm", choices=["cs", "brun"], default="cs")
    p.add_argument("--point", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--format", choices=["exact", "decimal"], default=None)
    _add_output_args(p)
    p.set_defaults(run=_run_orbit)

    p = sub.add_parser("certify", help="scan a prefix for a Boshernitzan certificate")
    _add_source_args(p)
    p.add_argument("--horizon", type=int, default=60)
    p.add_argument("--max-norm", type=int, default=None)
    p.add_argument("--positivity-cap", type=int, default=8)
    p.add_argument("--builder-cap", type=int, default=8)
    _add_output_args(p)
    p.set_defaults(run=_run_certify)

    p = sub.add_parser("words", help="level word of a letter")
    _add_source_args(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--letter", type=int, default=1)
    p.add_argument("--max-len", type=int, default=10000,
                   help="print the word itself only up to this length")
    _add_output_args(p)
    p.set_defaults(run=_run_words)

    p = sub.add_parser("potential", help="sample a potential along a level word")
    _add_source_args(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--letter", type=int, default=1)
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--values", required=True, help="e.g. 1=0,2=1,3=-1")
    p.add_argument("--coupling", type=float, default=1.0)
    p.add_argument("--default", type=float, default=None)
    _add_output_args(p)
    p.set_defaults(run=_run_potential)

    p = sub.add_parser("spectrum", help="band structure across approximant levels")
    _add_source_args(p)
    p.add_argument("--levels", required=True, help="e.g. 8,10,12")
    p.add_argument("--letter", type=int, default=1)
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--values", required=True)
    p.add_argument("--coupling", type=float, default=1.0)
    p.add_argument("--default", type=float, default=None)
    p.add_argument("--period-cap", type=int, default=4000)
    p.add_argument("--emit-bands", action="store_true")
    _add_output_args(p)
    p.set_defaults(run=_run_spectrum)

    p = sub.add_parser("lyapunov", help="cocycle exponents along random orbits")
    p.add_argument("--algorithm", choices=["cs", "brun", "identity"], default="cs")
    p.add_argument("--steps", type=int, default=10**6)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--reorth-every", type=int, default=1)
    p.add_argument("--transpose", action="store_true")
    _add_output_args(p)
    p.set_defaults(run=_run_lyapunov)

    p = sub.add_parser("complexity", help="factor complexity of a level word")
    _add_source_args(p)
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--min-length", type=int, default=None,
                   help="use the first level whose word is at least this long")
    p.add_argument("--letter", type=int, default=1)
    p.add_argument("--max-n", type=int, default=40)
    _add_output_args(p)
    p.set_defaults(run=_run_complexity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "orbit" and args.format is None:
        args.format = "exact" if args.mode == "exact" else "decimal"
    try:
        return args.run(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
