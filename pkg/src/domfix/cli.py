"""``domfix`` command line: batch gamma, analysis, verification and prism output."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Iterable, Iterator, TextIO

from domfix.adversary import FALLBACK_BUDGET, find_witness
from domfix.domination import (
    BRUTEFORCE_CAP,
    EnumerationLimitExceeded,
    gamma_bruteforce,
    gamma_exact,
)
from domfix.fixers import (
    ENUMERATION_LIMIT,
    _symmetric_splits,
    check_hartnell_rall_c,
    check_intersection_property,
    classify_even_structure,
    invariant_checks,
)
from domfix.corpus import connected_graphs
from domfix.graph import (
    GraphFormatError,
    Permutation,
    build_prism,
    cartesian_prism,
    connected_components,
    iter_graph6_lines,
    parse_graph6,
    write_graph6,
)

log = logging.getLogger("domfix")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

VERIFY_FIELDS = [
    "line", "graph6", "n", "m_edges", "gamma", "prism_fixer", "route",
    "permutation_cycles", "gamma_prism", "violation", "detail",
]
GAMMA_FIELDS = ["line", "graph6", "n", "gamma", "witness", "gamma_bruteforce"]
ANALYZE_FIELDS = [
    "line", "graph6", "n", "m_edges", "gamma", "connected", "prism_fixer", "gamma_prism",
    "symmetric_sets", "truncated", "classification", "invariants", "hartnell_rall_c",
    "intersection", "note",
]


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ("-",)
    budget: int = FALLBACK_BUDGET
    cap: int = BRUTEFORCE_CAP
    limit: int = ENUMERATION_LIMIT
    seed: int = 0
    fmt: str = "json"
    jobs: int = 1
    check: bool = False


# per-graph workers (module level so they pickle) -----------------------------


def gamma_record(cfg: RunConfig, item: tuple[int, str]) -> dict:
    lineno, text = item
    g = parse_graph6(text)
    cert = gamma_exact(g)
    rec = {
        "line": lineno,
        "graph6": text,
        "n": g.n,
        "gamma": cert.gamma,
        "witness": sorted(cert.witness),
    }
    if cfg.check and g.n <= cfg.cap:
        rec["gamma_bruteforce"] = gamma_bruteforce(g, cap=cfg.cap).gamma
    return rec


def analyze_record(cfg: RunConfig, item: tuple[int, str]) -> dict:
    lineno, text = item
    g = parse_graph6(text)
    gamma = gamma_exact(g).gamma
    gamma_prism = gamma_exact(cartesian_prism(g)).gamma
    rec: dict = {
        "line": lineno,
        "graph6": text,
        "n": g.n,
        "m_edges": g.m,
        "gamma": gamma,
        "connected": g.is_connected(),
        "prism_fixer": gamma_prism == gamma,
        "gamma_prism": gamma_prism,
    }
    if g.n < 2 or not rec["connected"]:
        rec["note"] = "routed to component analysis"
        rec["components"] = [
            {"vertices": list(back), "gamma": gamma_exact(comp).gamma}
            for comp, back in connected_components(g)
        ]
        return rec

    splits = []
    truncated = False
    try:
        for s in _symmetric_splits(g, gamma, cfg.limit):
            splits.append(s)
    except EnumerationLimitExceeded:
        truncated = True
    if not truncated and bool(splits) != rec["prism_fixer"]:
        rec["note"] = "INCONSISTENT: symmetric gamma-sets disagree with gamma(G□K2)"
    rec["symmetric_sets"] = [s.as_lists() for s in splits]
    rec["truncated"] = truncated
    rec["classification"] = (
        classify_even_structure(g, splits).to_dict() if splits and not truncated else None
    )
    checks = [invariant_checks(g, s, gamma) for s in splits]
    rec["invariants"] = {
        key: sum(c[key] for c in checks)
        for key in ("independent", "min_degree_two", "maximal_two_packings", "degree_sums")
    } | {"sets": len(checks), "all_ok": all(all(c.values()) for c in checks)}
    rec["hartnell_rall_c"] = sum(check_hartnell_rall_c(g, s) for s in splits)
    pairs = [(a, b) for a in splits for b in splits]
    rec["intersection"] = {
        "pairs": len(pairs),
        "failures": sum(not check_intersection_property(a, b) for a, b in pairs),
    }
    return rec


def verify_record(cfg: RunConfig, item: tuple[int, str]) -> dict:
    lineno, text = item
    g = parse_graph6(text)
    rep = find_witness(g, budget=cfg.budget, seed=cfg.seed, limit=cfg.limit)
    return {
        "line": lineno,
        "graph6": text,
        "n": g.n,
        "m_edges": g.m,
        "gamma": rep.gamma_g,
        "prism_fixer": rep.prism_fixer,
        "route": rep.construction.value,
        "permutation_cycles": rep.permutation.cycle_string() if rep.permutation else None,
        "gamma_prism": rep.gamma_prism,
        "violation": rep.violation,
        "detail": rep.detail,
    }


def _guarded(worker: Callable[[RunConfig, tuple[int, str]], dict], cfg: RunConfig, item):
    lineno, text = item
    try:
        return worker(cfg, item)
    except GraphFormatError as exc:
        return {"line": lineno, "graph6": text, "error": str(exc), "kind": "parse"}
    except Exception as exc:  # noqa: BLE001 - one bad graph must not stop the corpus
        return {"line": lineno, "graph6": text, "error": f"{type(exc).__name__}: {exc}", "kind": "failure"}


# plumbing -------------------------------------------------------------------


def _read_lines(paths: Iterable[str]) -> Iterator[tuple[int, str]]:
    for path in paths:
        if path == "-":
            yield from iter_graph6_lines(sys.stdin)
        else:
            with open(path, encoding="ascii", errors="replace") as fh:
                yield from iter_graph6_lines(fh)


def run_ordered(func: Callable, items: Iterable, jobs: int) -> Iterator:
    """Map ``func`` over ``items`` with up to ``jobs`` processes, preserving order.

    At most ``16 * jobs`` tasks are in flight, so memory stays bounded on
    long inputs.
    """
    if jobs <= 1:
        for item in items:
            yield func(item)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        window: deque = deque()
        for item in items:
            window.append(pool.submit(func, item))
            if len(window) >= 16 * jobs:
                yield window.popleft().result()
        while window:
            yield window.popleft().result()


def _flatten(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


class Sink:
    def __init__(self, fmt: str, fields: list[str], out: TextIO):
        self.fmt, self.fields, self.out = fmt, fields, out
        self.writer = None
        if fmt == "csv":
            self.writer = csv.DictWriter(
                out, fieldnames=fields + ["error"], extrasaction="ignore", lineterminator="\n"
            )
            self.writer.writeheader()

    def write(self, rec: dict) -> None:
        if self.fmt == "json":
            self.out.write(json.dumps(rec) + "\n")
        elif self.fmt == "csv":
            self.writer.writerow({k: _flatten(v) for k, v in rec.items()})
        else:
            self.out.write(_text_line(rec) + "\n")


def _text_line(rec: dict) -> str:
    head = f"{rec.get('line', '?'):>6}  {rec.get('graph6', '')}"
    if "error" in rec:
        return f"{head}  ERROR {rec['error']}"
    parts = [f"n={rec['n']}", f"gamma={rec['gamma']}"]
    if "route" in rec:
        parts += [
            f"route={rec['route']}",
            f"pi={rec['permutation_cycles']}",
            f"gamma_prism={rec['gamma_prism']}",
            "VIOLATION" if rec["violation"] else "ok",
        ]
    elif "prism_fixer" in rec:
        parts.append(f"prism_fixer={rec['prism_fixer']}")
        if "symmetric_sets" in rec:
            cls = rec["classification"]
            parts += [
                f"symmetric_sets={len(rec['symmetric_sets'])}",
                f"class={cls['kind'] if cls else '-'}",
            ]
        if rec.get("note"):
            parts.append(f"[{rec['note']}]")
    else:
        parts.append(f"witness={rec['witness']}")
    return head + "  " + " ".join(parts)


def _summary(command: str, counts: Counter) -> str:
    keys = ", ".join(f"{k}={counts[k]}" for k in sorted(counts))
    return f"{command}: {keys or 'no graphs'}"


def run_batch(cfg: RunConfig, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    worker, fields = {
        "gamma": (gamma_record, GAMMA_FIELDS),
        "analyze": (analyze_record, ANALYZE_FIELDS),
        "verify": (verify_record, VERIFY_FIELDS),
    }[cfg.command]
    sink = Sink(cfg.fmt, fields, out)
    counts: Counter = Counter()
    func = partial(_guarded, worker, cfg)
    for rec in run_ordered(func, _read_lines(cfg.inputs), cfg.jobs):
        sink.write(rec)
        counts["graphs"] += 1
        if "error" in rec:
            counts[f"{rec['kind']}_errors"] += 1
            err.write(f"line {rec['line']}: {rec['error']}\n")
            continue
        if cfg.command == "verify":
            counts[f"route:{rec['route']}"] += 1
            counts["violations"] += rec["violation"]
            if rec["permutation_cycles"] is None:
                counts["not_found"] += 1
        elif cfg.command == "analyze":
            counts["prism_fixers"] += bool(rec["prism_fixer"])
            counts["truncated"] += bool(rec.get("truncated"))
    summary = _summary(cfg.command, counts)
    (out if cfg.fmt == "text" else err).write(summary + "\n")
    if counts["violations"]:
        return EXIT_VIOLATION
    if counts["parse_errors"]:
        return EXIT_USAGE
    return EXIT_OK


def run_prism(cfg: RunConfig, perm_text: str, graphs: list[str], out: TextIO, err: TextIO) -> int:
    items = [(0, t) for t in graphs] if graphs else list(_read_lines(cfg.inputs))
    for lineno, text in items:
        try:
            g = parse_graph6(text)
            pi = Permutation.parse(perm_text, g.n)
        except ValueError as exc:
            err.write(f"domfix prism: {text}: {exc}\n")
            return EXIT_USAGE
        prism = write_graph6(build_prism(g, pi).graph)
        if cfg.fmt == "json":
            rec = {"graph6": text, "permutation_cycles": pi.cycle_string(), "prism": prism}
            out.write(json.dumps(rec) + "\n")
        else:
            out.write(prism + "\n")
    return EXIT_OK


def run_corpus(min_n: int, max_n: int, method: str, out: TextIO) -> int:
    for n in range(min_n, max_n + 1):
        for g in connected_graphs(n, method=method):
            out.write(write_graph6(g) + "\n")
    return EXIT_OK


# argument parsing -----------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if not -(2**63) <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", action="append", metavar="F",
                        help="graph6 file, one graph per line ('-' for stdin; repeatable)")
    common.add_argument("--budget", type=_positive, default=FALLBACK_BUDGET,
                        help="random permutations tried by the fallback search")
    common.add_argument("--cap", type=_positive, default=BRUTEFORCE_CAP,
                        help="largest n checked by brute force")
    common.add_argument("--limit", type=_positive, default=ENUMERATION_LIMIT,
                        help="maximum gamma-sets enumerated per graph")
    common.add_argument("--seed", type=_seed, default=None,
                        help="random seed (default: $DOMFIX_SEED or 0)")
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default=None)
    common.add_argument("--jobs", "-j", type=_positive, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="domfix",
        description="Domination in permutation prisms: exact gamma, prism fixers, witnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gamma", parents=[common], help="domination number with a witness set")
    g.add_argument("--check", action="store_true", help="cross-check with brute force (n <= cap)")
    sub.add_parser("analyze", parents=[common], help="symmetric gamma-sets and fixer structure")
    sub.add_parser("verify", parents=[common], help="find a permutation raising gamma(piG)")
    p = sub.add_parser("prism", parents=[common], help="print the prism of a graph as graph6")
    p.add_argument("--perm", "-p", default="", help='permutation in cycle notation, e.g. "(0 2 1)"')
    p.add_argument("graphs", nargs="*", help="graph6 strings (otherwise read --input)")
    c = sub.add_parser("corpus", help="print all connected graphs in a range of orders")
    c.add_argument("--min-n", type=_positive, default=1)
    c.add_argument("--max-n", type=_positive, required=True)
    c.add_argument("--method", choices=["auto", "atlas", "augment"], default="auto")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "corpus":
        return run_corpus(args.min_n, args.max_n, args.method, sys.stdout)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    seed = args.seed
    if seed is None:
        try:
            seed = _seed(os.environ.get("DOMFIX_SEED", "0"))
        except (ValueError, argparse.ArgumentTypeError):
            print("domfix: DOMFIX_SEED is not a 64-bit integer", file=sys.stderr)
            return EXIT_USAGE
    fmt = args.fmt or ("text" if args.command == "prism" else "json")
    cfg = RunConfig(
        command=args.command,
        inputs=tuple(args.input or ["-"]),
        budget=args.budget,
        cap=args.cap,
        limit=args.limit,
        seed=seed,
        fmt=fmt,
        jobs=args.jobs,
        check=getattr(args, "check", False),
    )
    try:
        if args.command == "prism":
            return run_prism(cfg, args.perm, args.graphs, sys.stdout, sys.stderr)
        return run_batch(cfg)
    except OSError as exc:
        print(f"domfix: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
