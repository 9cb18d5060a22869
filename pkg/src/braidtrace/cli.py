"""Command-line front end.

Exit status is 0 on success, 2 on invalid input and 1 when a verification
suite finds a violation.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from dataclasses import dataclass
from typing import Sequence

from . import dqc1
from . import jones_wenzl as jw
from . import oracle
from . import path_model as pm
from .braid import BraidError, BraidWord, parse_braid, read_braid_file
from .jw_encoding import build_matching, build_row_cutoffs, profile_after
from .path_encoding import build_encoding_table
from .state import EXACT_MODE_MAX_BITS

R_CAP = 4
EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    braid: BraidWord | None = None
    k: int | None = None
    r: int | None = None
    beta: int | None = None
    samples: int = dqc1.DEFAULT_SAMPLES
    mode: str = "monte_carlo"
    seed: int = 0
    output: str = "json"


def defaults(n: int = 1) -> RunConfig:
    return RunConfig(command="", beta=dqc1.default_beta(n))


# ---------------------------------------------------------------- parsing


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braidtrace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    braid = argparse.ArgumentParser(add_help=False)
    braid.add_argument("--braid", help="whitespace-separated signed generator indices")
    braid.add_argument("--strands", type=int, help="number of strands")
    braid.add_argument("--braid-file", help="file with a 'strands=<n>' header and the braid word")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--json", dest="output", action="store_const", const="json", help="JSON output (default)")
    out.add_argument("--format", dest="output", choices=("json", "table"), default="json")

    est = argparse.ArgumentParser(add_help=False)
    est.add_argument("--k", type=int, required=True)
    est.add_argument("--beta", type=int, help="bits per register (default max(4, ceil(log2 n) + 3))")
    est.add_argument("--samples", type=int, default=dqc1.DEFAULT_SAMPLES)
    est.add_argument("--mode", choices=dqc1.MODES, default="monte_carlo")
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--threads", type=int, help=f"worker threads (default ${dqc1.THREADS_ENV} or 1)")

    sub.add_parser("eval-jones", parents=[braid, out, est], help="estimate the Jones value")
    p = sub.add_parser("eval-homfly", parents=[braid, out, est], help="estimate the HOMFLY value")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--r-cap", type=int, default=R_CAP)

    p = sub.add_parser("exact-jones", parents=[braid, out], help="Jones value from the full representation")
    p.add_argument("--k", type=int, required=True)
    p = sub.add_parser("exact-homfly", parents=[braid, out], help="HOMFLY value from the full representation")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--r-cap", type=int, default=R_CAP)

    p = sub.add_parser("tables", parents=[out], help="dump cutoffs, sector weights or matchings")
    p.add_argument("--what", choices=("cutoffs", "weights", "matchings"), required=True)
    p.add_argument("--strands", type=int)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, help="path sector (default: every nonempty sector)")
    p.add_argument("--r", type=int, help="use the Jones-Wenzl encoding with at most r rows")
    p.add_argument("--lam", help="Young diagram as comma-separated row lengths")
    p.add_argument("--beta", type=int)
    p.add_argument("--i", type=int, help="crossing position (matchings only)")

    p = sub.add_parser("verify", parents=[out], help="run a verification suite")
    p.add_argument("--suite", choices=("relations", "markov", "oracle", "r2"), required=True)
    p.add_argument("--max-strands", type=int)
    p.add_argument("--k", type=_int_list, help="values of k, e.g. '5' or '3-8' or '3,5,7'")
    p.add_argument("--r", type=_int_list, help="values of r for Jones-Wenzl checks")
    p.add_argument("--max-crossings", type=int, default=4)
    p.add_argument("--sequences", type=int, default=200, help="Markov move sequences")
    p.add_argument("--moves", type=int, default=5, help="moves per sequence")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _braid_from(args) -> BraidWord:
    if args.braid_file:
        if args.braid is not None:
            raise UsageError("give either --braid or --braid-file, not both")
        b = read_braid_file(args.braid_file)
        if args.strands is not None and args.strands != b.strands:
            raise UsageError(f"--strands {args.strands} disagrees with the file header strands={b.strands}")
        return b
    if args.braid is None:
        raise UsageError("a braid is required (--braid with --strands, or --braid-file)")
    if args.strands is None:
        raise UsageError("--strands is required with --braid")
    return parse_braid(args.braid, args.strands)


def _check_range(name: str, value, lo=None, hi=None) -> None:
    if value is None:
        return
    if (lo is not None and value < lo) or (hi is not None and value > hi):
        bounds = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
        raise UsageError(f"{name} must be {bounds}, got {value}")


def _check_r(r: int, k: int, cap: int) -> None:
    _check_range("--r", r, 2, cap)
    if k <= r:
        raise UsageError(f"need k > r, got k={k}, r={r}")


# ---------------------------------------------------------------- output


def _emit(obj, output: str, table_lines=None) -> None:
    if output == "table" and table_lines is not None:
        sys.stdout.write("\n".join(table_lines) + "\n")
    else:
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _complex(z: complex) -> str:
    return f"{z.real:+.12g} {z.imag:+.12g}i"


def _estimate_lines(est: dqc1.KnotEstimate) -> list[str]:
    rows = [
        ("value", _complex(est.value)),
        ("std_error", f"{est.std_error:.6g}"),
        ("systematic_bound", f"{est.systematic_bound:.6g}"),
        ("samples", str(est.samples)),
        ("mode", est.mode),
        ("prefactor", _complex(est.prefactor)),
        ("markov_trace", _complex(est.markov_trace)),
        ("seed", str(est.seed)),
    ]
    if est.ancillas:
        rows.append(("ancilla_qubits", str(est.ancillas)))
    width = max(len(name) for name, _ in rows)
    return [f"{name:<{width}}  {value}" for name, value in rows]


def _exact_json(est: dqc1.KnotEstimate) -> dict:
    out = est.to_json()
    out["seed"] = None
    return out


# ---------------------------------------------------------------- commands


def _cmd_estimate(args) -> int:
    b = _braid_from(args)
    _check_range("--k", args.k, 3)
    _check_range("--beta", args.beta, 1)
    _check_range("--samples", args.samples, 1)
    _check_range("--seed", args.seed, 0, 2 ** 64 - 1)
    _check_range("--threads", args.threads, 1)
    homfly = args.command == "eval-homfly"
    if homfly:
        _check_r(args.r, args.k, args.r_cap)
    beta = dqc1.default_beta(b.strands) if args.beta is None else args.beta
    if args.mode == "exact" and b.strands * beta > EXACT_MODE_MAX_BITS:
        raise UsageError(f"--mode exact needs strands*beta <= {EXACT_MODE_MAX_BITS}, got {b.strands * beta}")
    if args.mode == "shots" and args.samples < 2:
        raise UsageError("--mode shots needs --samples >= 2")
    dqc1.thread_count(args.threads)
    kwargs = dict(beta=beta, samples=args.samples, rng=dqc1.RngConfig(args.seed), mode=args.mode,
                  threads=args.threads)
    if homfly:
        est = dqc1.estimate_homfly(b, args.k, args.r, **kwargs)
    else:
        est = dqc1.estimate_jones(b, args.k, **kwargs)
    _emit(est.to_json(), args.output, _estimate_lines(est))
    return EXIT_OK


def _cmd_exact(args) -> int:
    b = _braid_from(args)
    _check_range("--k", args.k, 3)
    if args.command == "exact-homfly":
        _check_r(args.r, args.k, args.r_cap)
        est = dqc1.exact_homfly(b, args.k, args.r)
    else:
        est = dqc1.exact_jones(b, args.k)
    lines = [line for line in _estimate_lines(est) if not line.startswith(("seed", "std_error", "systematic", "samples"))]
    _emit(_exact_json(est), args.output, lines)
    return EXIT_OK


def _parse_lam(text: str | None) -> jw.YoungDiagram:
    if not text:
        raise UsageError("--lam is required here, e.g. --lam 2,1,1")
    try:
        rows = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--lam must be comma-separated integers, got {text!r}") from None
    return jw.YoungDiagram(rows)


def _cmd_tables(args) -> int:
    _check_range("--k", args.k, 3)
    _check_range("--beta", args.beta, 1)
    _check_range("--strands", args.strands, 1)
    if args.r is not None:
        _check_r(args.r, args.k, R_CAP)
    if args.what == "weights":
        if args.strands is None:
            raise UsageError("--strands is required for weights")
        n = args.strands
        if args.r is None:
            weights = pm.sector_weights(n, args.k)
            total = sum(weights.values())
            rows = [{"h": h, "size": pm.sector_size(n, args.k, h), "weight": w, "probability": w / total}
                    for h, w in sorted(weights.items())]
            obj = {"n": n, "k": args.k, "sectors": rows}
            lines = [f"h={row['h']:<3} size={row['size']:<8} p={row['probability']:.12g}" for row in rows]
        else:
            rows = [{"lambda": list(lam.rows), "size": size, "weight": s, "probability": p}
                    for lam, size, s, p in jw.sector_distribution(n, args.k, args.r)]
            obj = {"n": n, "k": args.k, "r": args.r, "sectors": rows}
            lines = [f"lambda={tuple(row['lambda'])!s:<16} size={row['size']:<8} p={row['probability']:.12g}"
                     for row in rows]
        _emit(obj, args.output, lines)
        return EXIT_OK

    if args.beta is None:
        raise UsageError("--beta is required for cutoffs and matchings")
    if args.what == "cutoffs" and args.r is None:
        if args.strands is None:
            raise UsageError("--strands is required for path cutoffs")
        n = args.strands
        if args.h is not None:
            _check_range("--h", args.h, 1, args.k - 1)
            if not pm.sector_size(n, args.k, args.h):
                raise UsageError(f"sector h={args.h} is empty for n={n}, k={args.k}")
            hs = [args.h]
        else:
            hs = sorted(pm.sector_weights(n, args.k))
        tables = [build_encoding_table(n, args.k, h, args.beta).to_dict() for h in hs]
        obj = tables[0] if args.h is not None else {"tables": tables}
        lines = [f"h={t['h']} t={c['t']} a={c['a']} C={c['c']}" for t in tables for c in t["cutoffs"]]
        _emit(obj, args.output, lines)
        return EXIT_OK

    if args.r is None:
        raise UsageError("--r is required for matchings")
    lam = _parse_lam(args.lam)
    if not jw.tableau_count(lam, args.k, args.r):
        raise UsageError(f"{lam} has no admissible tableaux for k={args.k}, r={args.r}")
    table = build_row_cutoffs(lam, args.k, args.r, args.beta)
    if args.what == "cutoffs":
        obj = table.to_dict()
        lines = [f"t={c['t']} profile={tuple(c['profile'])} j={c['j']} C={c['c']}" for c in obj["cutoffs"]]
        _emit(obj, args.output, lines)
        return EXIT_OK
    if lam.n < 2:
        raise UsageError("matchings need at least two boxes")
    positions = range(1, lam.n) if args.i is None else [args.i]
    _check_range("--i", args.i, 1, lam.n - 1)
    matchings = []
    for i in positions:
        for p, t in table.states():
            if t == i - 1:
                matchings.append(build_matching(table, i, p).to_dict())
    obj = {"lambda": list(lam.rows), "k": args.k, "r": args.r, "beta": args.beta, "matchings": matchings}
    lines = []
    for m in matchings:
        for blk in m["blocks"]:
            lines.append(f"i={m['i']} profile={tuple(m['profile'])} rows={tuple(blk['rows'])} "
                         f"matched={blk['matched']} stuck={blk['stuck']}")
    _emit(obj, args.output, lines)
    return EXIT_OK


def _cmd_verify(args) -> int:
    _check_range("--max-strands", args.max_strands, 1)
    _check_range("--max-crossings", args.max_crossings, 0)
    _check_range("--sequences", args.sequences, 0)
    _check_range("--moves", args.moves, 0)
    for k in args.k or ():
        _check_range("--k", k, 3)
    for r in args.r or ():
        _check_range("--r", r, 2, R_CAP)
    ks = args.k or list(range(3, 9))
    rs = args.r or [2, 3]
    rng = random.Random(args.seed)
    if args.suite == "relations":
        report = oracle.relations_check(args.max_strands or 5, ks, rs)
    elif args.suite == "oracle":
        words = [b for n in range(1, (args.max_strands or 3) + 1)
                 for b in oracle.iter_braid_words(n, args.max_crossings if n > 1 else 0)]
        report = oracle.oracle_check(words, ks)
    elif args.suite == "r2":
        n_max = args.max_strands or 4
        braids = [oracle.random_braid(rng.randint(2, n_max), rng.randint(0, 6), rng) for _ in range(10)]
        report = oracle.r2_correspondence_check(n_max, ks, braids=braids)
    else:
        ks = args.k or [5]
        report = oracle.Report("markov")
        n_max = args.max_strands or 4
        for _ in range(args.sequences):
            b = oracle.random_braid(rng.randint(1, 3), rng.randint(0, 4), rng)
            k = rng.choice(ks)
            oracle.invariance_suite(b, k, rs=rs, moves=args.moves, rng=rng, max_strands=n_max, report=report)
    obj = report.to_dict()
    lines = [f"suite={report.name} ok={report.ok} checks={report.checks} max_deviation={report.max_deviation:.3e}"]
    lines += [f"  {v}" for v in report.violations]
    _emit(obj, args.output, lines)
    return EXIT_OK if report.ok else EXIT_FAILED


_COMMANDS = {
    "eval-jones": _cmd_estimate,
    "eval-homfly": _cmd_estimate,
    "exact-jones": _cmd_exact,
    "exact-homfly": _cmd_exact,
    "tables": _cmd_tables,
    "verify": _cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", dqc1.PrecisionWarning)
        try:
            code = _COMMANDS[args.command](args)
        except (UsageError, BraidError, ValueError, OSError) as exc:
            sys.stderr.write(f"braidtrace: error: {exc}\n")
            code = EXIT_INVALID
    for w in caught:
        sys.stderr.write(f"braidtrace: warning: {w.message}\n")
    return code


run = main


if __name__ == "__main__":
    sys.exit(main())
