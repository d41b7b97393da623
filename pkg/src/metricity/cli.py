"""``metricity`` command line.

Exit codes: 0 success or true, 1 negative verdict, 2 input error, 3 budget
exhausted, 4 discrepancy with the expected catalog shape.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

from metricity import __version__
from metricity import catalog as cat
from metricity import generators as gen
from metricity.hypergraph import f_sparsity_witness, kl_sparsity_witness
from metricity.io import (
    FormatError,
    format_fm,
    format_hg,
    hypergraph_to_json,
    metric_to_json,
    parse_fm,
    parse_hg,
    parse_value,
)
from metricity.metric import betweenness_hypergraph
from metricity.oracle import (
    DEFAULT_MAX_N,
    DEFAULT_MAX_NODES,
    OracleLimitError,
    alphabet_search,
    decide_metric,
    verdict_to_json,
)
from metricity.realizer import PreconditionError, VerificationError, realize

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET, EXIT_DISCREPANCY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _read(path: str) -> tuple[str, str]:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    return text, hashlib.sha256(text.encode()).hexdigest()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _report(args, digest: str | None, result: dict, started: float) -> None:
    if not args.json:
        return
    report = {
        "command": args.command,
        "input_sha256": digest,
        "result": result,
        "seconds": round(time.perf_counter() - started, 3),
        "version": __version__,
    }
    print(json.dumps(report, indent=1, sort_keys=True))


def _say(args, text: str) -> None:
    if not args.json:
        print(text)


def cmd_check(args) -> int:
    started = time.perf_counter()
    text, digest = _read(args.input)
    h = parse_hg(text)
    if args.f0:
        witness = f_sparsity_witness(h)
        label = "f0"
    else:
        try:
            k, l = (int(t) for t in args.kl.split(","))
        except ValueError:
            raise UsageError(f"--kl expects 'k,l', got {args.kl!r}") from None
        witness = kl_sparsity_witness(h, k, l)
        label = f"({k},{l})"
    sparse = witness is None
    _say(args, "true" if sparse else f"false\nwitness: {' '.join(map(str, witness))}")
    _report(args, digest, {"sparsity": label, "sparse": sparse,
                           "witness": None if sparse else list(witness)}, started)
    return EXIT_OK if sparse else EXIT_NEGATIVE


def cmd_realize(args) -> int:
    started = time.perf_counter()
    text, digest = _read(args.input)
    h = parse_hg(text)
    options = {} if args.mode == "62" else {"allow_fallback": not args.no_fallback}
    try:
        result = realize(h, args.mode, **options)
    except PreconditionError as err:
        witness = err.witness
        print(f"error: {err}", file=sys.stderr)
        _report(args, digest, {"realized": False, "error": str(err),
                               "witness": list(witness) if witness is not None else None},
                started)
        return EXIT_NEGATIVE
    except VerificationError as err:
        print(f"error: {err}", file=sys.stderr)
        _report(args, digest, {"realized": False, "error": str(err)}, started)
        return EXIT_BUDGET if "budget" in str(err) else EXIT_NEGATIVE
    metric = result.metric
    if betweenness_hypergraph(metric) != h:
        raise AssertionError("realised metric failed the roundtrip check")
    if args.output or not args.json:
        _write(args.output, format_fm(metric))
    _report(args, digest, {"realized": True, "method": result.method,
                           "oracle_fallback": result.fallback,
                           "metric": metric_to_json(metric)}, started)
    return EXIT_OK


def cmd_decide(args) -> int:
    started = time.perf_counter()
    text, digest = _read(args.input)
    h = parse_hg(text)
    if args.alphabet:
        values = [parse_value(t) for t in args.alphabet.split(",")]
        metric = alphabet_search(h, values)
        if metric is not None:
            cert = {"verdict": "metric", "n": h.n, "edges": [list(e) for e in h.edges],
                    "witness": metric_to_json(metric)["distances"], "source": "alphabet"}
            return _finish_decide(args, digest, cert, started, EXIT_OK)
    verdict = decide_metric(h, max_n=args.max_n, max_nodes=args.budget,
                            time_limit=args.time_limit, backend=args.backend)
    cert = verdict_to_json(verdict)
    cert["source"] = "oracle"
    code = {"metric": EXIT_OK, "nonmetric": EXIT_NEGATIVE, "budget": EXIT_BUDGET}[verdict.kind]
    return _finish_decide(args, digest, cert, started, code)


def _finish_decide(args, digest: str, cert: dict, started: float, code: int) -> int:
    if args.certificate:
        Path(args.certificate).write_text(json.dumps(cert, indent=1, sort_keys=True) + "\n")
    stats = cert.get("statistics", {})
    line = cert["verdict"]
    if stats:
        line += (f" (branches {stats['branches_covered']}/{stats['branch_space']},"
                 f" nodes {stats['nodes']}, {stats['seconds']} s)")
    _say(args, line)
    _report(args, digest, cert, started)
    return code


def cmd_extract(args) -> int:
    started = time.perf_counter()
    text, digest = _read(args.input)
    metric = parse_fm(text)
    h = betweenness_hypergraph(metric)
    if args.output or not args.json:
        _write(args.output, format_hg(h))
    _report(args, digest, hypergraph_to_json(h), started)
    return EXIT_OK


def cmd_catalog(args) -> int:
    started = time.perf_counter()
    if args.build is None:
        source = args.show
        catalog = (cat.default_catalog(args.convention) if source in (None, "")
                   else cat.Catalog.loads(_read(source)[0]))
        if args.json:
            _report(args, None, {"entries": catalog.to_json()}, started)
        else:
            for e in catalog.entries:
                print(f"{e.name}\tn={e.core.n}\t{e.canonical_form}")
        return EXIT_OK
    entries = cat.enumerate_f0_cores(args.build, args.convention)
    catalog = cat.Catalog(entries)
    if args.output:
        Path(args.output).write_text(catalog.dumps())
    problems = cat.shape_discrepancies(entries)
    if not args.json:
        for e in entries:
            print(f"{e.name}\tn={e.core.n}\t{e.canonical_form}")
    if not problems:
        _report(args, None, {"entries": catalog.to_json(), "discrepancies": []}, started)
        return EXIT_OK
    dump = cat.discrepancy_report(entries, args.convention)
    if args.json:
        _report(args, None, dump, started)
    else:
        print("discrepancy with the expected vertex counts "
              f"{list(cat.EXPECTED_VERTEX_COUNTS)}:", file=sys.stderr)
        for p in problems:
            print(f"  {p}", file=sys.stderr)
        print(json.dumps(dump, indent=1, sort_keys=True), file=sys.stderr)
    return EXIT_DISCREPANCY


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "fano":
        h = gen.fano()
    elif kind == "sts":
        h = gen.steiner_triple_system(args.order)
    elif kind == "complete":
        _need(args, "n")
        drop = [tuple(int(t) for t in d.split(",")) for d in args.drop or []]
        h = gen.complete_minus(args.n, drop) if drop else gen.complete(args.n)
    elif kind == "random62":
        _need(args, "n", "m")
        h = gen.random_62_sparse(args.n, args.m, seed=args.seed)
    else:
        _need(args, "n")
        h = gen.random_f0_sparse(args.n, seed=args.seed, target_m=args.m)
    _write(args.output, format_hg(h))
    return EXIT_OK


def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"gen {args.kind} needs --{name}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricity",
        description="Betweenness hypergraphs of finite metrics: sparsity checks, "
                    "constructions, an exact metricity oracle and the core catalog.",
        epilog="Exit codes: 0 ok/true, 1 negative verdict, 2 input error, 3 budget, "
               "4 catalog discrepancy.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="print a JSON run report")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = sub.add_parser("check", help="test (k,l)- or f0-sparsity of a .hg file")
    p.add_argument("input", help=".hg or JSON hypergraph, '-' for stdin")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--kl", metavar="K,L", help="every K vertices span at most L edges")
    group.add_argument("--f0", action="store_true", help="every k >= 4 vertices span <= ceil(k/2)")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("realize", help="construct a metric realising a sparse hypergraph")
    p.add_argument("input", help=".hg or JSON hypergraph, '-' for stdin")
    p.add_argument("--mode", choices=("62", "f0", "auto"), default="auto",
                   help="62: (6,2)-sparse construction; f0: core construction; "
                        "auto: whichever applies (default)")
    p.add_argument("-o", "--output", help="write the .fm metric here (default stdout)")
    p.add_argument("--no-fallback", action="store_true",
                   help="fail instead of asking the oracle when stitching fails")
    common(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("decide", help="decide exactly whether a hypergraph is metric")
    p.add_argument("input", help=".hg or JSON hypergraph, '-' for stdin")
    p.add_argument("--budget", type=int, default=DEFAULT_MAX_NODES,
                   help=f"search node limit (default {DEFAULT_MAX_NODES})")
    p.add_argument("--time-limit", type=float, default=None, help="seconds before giving up")
    p.add_argument("--alphabet", metavar="V1,V2,...",
                   help="first try metrics with these distances, e.g. 1,3/2,2")
    p.add_argument("--backend", choices=("hybrid", "exact"), default="hybrid",
                   help="hybrid: floating screen confirmed exactly; exact: rational simplex")
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N,
                   help=f"vertex cap (default {DEFAULT_MAX_N})")
    p.add_argument("--certificate", metavar="FILE", help="write the certificate JSON here")
    common(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("extract", help="collinear triples of a .fm metric as a .hg file")
    p.add_argument("input", help=".fm metric, '-' for stdin")
    p.add_argument("-o", "--output", help="write the .hg file here (default stdout)")
    common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("catalog", help="build or show the dense-core catalog")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--build", type=int, metavar="MAX_N",
                       help=f"enumerate cores on up to MAX_N <= {cat.CATALOG_MAX_N} vertices")
    group.add_argument("--show", nargs="?", const="", metavar="FILE",
                       help="list a catalog file (default: the packaged one)")
    p.add_argument("--convention", choices=cat.CONVENTIONS, default="minimal",
                   help="minimal obstructions (default) or cores produced by decomposition")
    p.add_argument("-o", "--output", help="write the built catalog JSON here")
    common(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("gen", help="write a named or random hypergraph as .hg")
    p.add_argument("kind", choices=("fano", "sts", "complete", "random62", "randomf0"))
    p.add_argument("--order", type=int, choices=(7, 9), default=9, help="sts order")
    p.add_argument("--n", type=int, help="vertex count")
    p.add_argument("--m", type=int, help="target edge count")
    p.add_argument("--drop", action="append", metavar="A,B,C",
                   help="triple to leave out of 'complete' (repeatable)")
    p.add_argument("-o", "--output", help="write here (default stdout)")
    common(p)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (FormatError, UsageError, OracleLimitError, cat.CatalogError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
