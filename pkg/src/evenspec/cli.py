"""Command-line entry point: ``evenspec <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .classify import (
    Verdict,
    certificate_dict,
    classify_all,
    classify_graph,
    summarize,
)
from .constructions import (
    CertifiedMatrix,
    clique_blowup,
    cycle_matrix,
    even_complete,
    frame_realize,
    graph_pq_join,
    join_with_clique,
    rank2_realize,
)
from .errors import EvenSpecError
from .graphs import enumerate_connected, parse_graph6, write_graph6
from .linalg import DEFAULT_TOL, certify_square, parse_matrix_text
from .search import SearchConfig, numeric_certify, search_detailed

CONSTRUCTIONS = "cycle ORDER | complete ORDER [VALUES...] | rank2 P,Q [P,Q ...] [--r R] | frame G6 | " \
                "clique-join G6 | blowup BASE V M | pq-join BASE_A V_A BASE_B V_B " \
                "(BASE is cycle:ORDER, complete:ORDER or rank2:P,Q/P,Q...)"


class InputError(ValueError):
    pass


def _default_seed() -> int:
    raw = os.environ.get("EVENSPEC_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"EVENSPEC_SEED must be an integer, got {raw!r}") from None


def _emit(args, record: dict, text: str):
    print(json.dumps(record, sort_keys=True) if args.json else text)


# -- commands -----------------------------------------------------------------

def cmd_enumerate(args) -> int:
    for g in enumerate_connected(args.n):
        g6 = write_graph6(g)
        _emit(args, {"graph6": g6, "order": g.order, "size": g.size}, g6)
    return 0


def _record_line(rec) -> str:
    extra = ""
    if rec.certificate:
        extra = f"max_gap={rec.certificate['max_gap']:.3e}"
    elif rec.obstruction:
        extra = json.dumps(rec.obstruction.witness, sort_keys=True)
    if rec.verdict is Verdict.UNKNOWN:
        extra = f"best_cost={rec.best_cost:.3e}"
    return f"{rec.graph6}\t{rec.verdict.value}\t{rec.reason}\t{extra}"


def cmd_classify(args) -> int:
    cfg = _search_config(args)
    if args.all is not None:
        if args.graph6:
            raise InputError("give either a graph6 string or --all N, not both")
        records = classify_all(args.all, cfg, args.tol, workers=args.workers)
    elif args.graph6:
        records = [classify_graph(parse_graph6(args.graph6), cfg, args.tol)]
    else:
        raise InputError("classify needs a graph6 string or --all N")
    for rec in records:
        print(rec.to_json(args.timings) if args.json else _record_line(rec))
    if args.report:
        write_report(records, Path(args.report), args.timings, title=f"n = {args.all}" if args.all else "")
    if not args.json:
        counts = summarize(records)
        print("# " + " ".join(f"{k}={v}" for k, v in counts.items()), file=sys.stderr)
    return 0


def write_report(records, out: Path, with_timings: bool = False, title: str = "") -> list[Path]:
    from .plotting import spectra_chart, verdict_chart

    out.mkdir(parents=True, exist_ok=True)
    jsonl = out / "records.jsonl"
    jsonl.write_text("".join(r.to_json(with_timings) + "\n" for r in records))
    tsv = out / "summary.tsv"
    lines = ["graph6\tverdict\treason\tmax_gap\tbest_cost"]
    for r in records:
        gap = "" if not r.certificate else repr(r.certificate["max_gap"])
        cost = "" if r.best_cost is None else repr(r.best_cost)
        lines.append(f"{r.graph6}\t{r.verdict.value}\t{r.reason}\t{gap}\t{cost}")
    tsv.write_text("\n".join(lines) + "\n")
    figs = [verdict_chart(records, out / "verdicts.png", title), spectra_chart(records, out / "spectra.png", title)]
    return [jsonl, tsv, *figs]


def cmd_certify(args) -> int:
    try:
        text = Path(args.file).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    m = parse_matrix_text(text)
    cert = certify_square(m, args.tol)
    rec = {"file": args.file, "order": m.order, **cert.to_dict()}
    vals = ", ".join(f"{v:.10g}" for v in cert.eigenvalues)
    text_out = f"is_square={cert.is_square} mode={cert.mode} max_gap={cert.max_gap:.3e}\neigenvalues: {vals}"
    if cert.mode == "exact":
        from .linalg import charpoly_exact

        text_out += f"\ncharpoly: {charpoly_exact(m)}"
        rec["charpoly"] = str(charpoly_exact(m))
    _emit(args, rec, text_out)
    return 0


def _int(s: str, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise InputError(f"{what} must be an integer, got {s!r}") from None


def _parts(tokens) -> list[tuple[int, int]]:
    out = []
    for tok in tokens:
        p, sep, q = tok.partition(",")
        if not sep:
            raise InputError(f"rank-2 part must look like P,Q; got {tok!r}")
        out.append((_int(p, "P"), _int(q, "Q")))
    return out


def _base(spec: str) -> CertifiedMatrix:
    name, _, arg = spec.partition(":")
    if name == "cycle":
        return cycle_matrix(_int(arg, "order"))
    if name == "complete":
        order = _int(arg, "order")
        return even_complete(order, list(range(1, order // 2 + 1)))
    if name == "rank2":
        parts = _parts(arg.split("/"))
        return rank2_realize(len(parts), parts, 0)
    raise InputError(f"unknown base {spec!r}; use cycle:ORDER, complete:ORDER or rank2:P,Q/P,Q")


def build_construction(name: str, params: list[str], r: int, seed: int) -> CertifiedMatrix:
    def need(k):
        if len(params) < k:
            raise InputError(f"construct {name}: expected {k} parameter(s); usage: {CONSTRUCTIONS}")

    if name == "cycle":
        need(1)
        return cycle_matrix(_int(params[0], "order"))
    if name == "complete":
        need(1)
        order = _int(params[0], "order")
        values = [float(x) for x in params[1:]] or list(range(1, order // 2 + 1))
        return even_complete(order, values)
    if name == "rank2":
        need(1)
        parts = _parts(params)
        return rank2_realize(len(parts), parts, r)
    if name == "frame":
        need(1)
        found = frame_realize(parse_graph6(params[0]), seed=seed)
        if found is None:
            raise InputError("frame search found no realisation within its budget")
        return found
    if name == "clique-join":
        need(1)
        return join_with_clique(parse_graph6(params[0]), seed=seed)
    if name == "blowup":
        need(3)
        return clique_blowup(_base(params[0]), _int(params[1], "V"), _int(params[2], "M"))
    if name == "pq-join":
        need(4)
        return graph_pq_join(_base(params[0]), _int(params[1], "V_A"), _base(params[2]), _int(params[3], "V_B"))
    raise InputError(f"unknown construction {name!r}; usage: {CONSTRUCTIONS}")


def cmd_construct(args) -> int:
    cm = build_construction(args.name, args.params, args.r, args.seed)
    rec = {"construction": cm.provenance["name"], "graph6": write_graph6(cm.graph),
           "certificate": certificate_dict(cm), "is_square": cm.certificate.is_square}
    vals = ", ".join(f"{v:.10g}" for v in cm.certificate.eigenvalues)
    _emit(args, rec, f"{rec['construction']} {rec['graph6']} is_square={cm.certificate.is_square} "
                     f"mode={cm.certificate.mode} max_gap={cm.certificate.max_gap:.3e}\neigenvalues: {vals}")
    return 0


def _search_config(args) -> SearchConfig:
    return SearchConfig(restarts=args.restarts, max_iters=args.iters, accept_cost=args.accept_cost, seed=args.seed)


def cmd_search(args) -> int:
    g = parse_graph6(args.graph6)
    cfg = _search_config(args)
    res = search_detailed(g, cfg)
    cm = numeric_certify(g, cfg, args.tol, result=res)
    rec = {"graph6": args.graph6, "best_cost": res.cost, "restart": res.restart, "sweeps": res.sweeps,
           "certificate": certificate_dict(cm) if cm else None}
    verdict = "certificate found" if cm else "no certificate (not evidence of infeasibility)"
    _emit(args, rec, f"{args.graph6}\tbest_cost={res.cost:.3e}\t{verdict}")
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default $EVENSPEC_SEED or 0)")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help=f"certificate tolerance (default {DEFAULT_TOL})")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON-lines output")

    search_flags = argparse.ArgumentParser(add_help=False)
    search_flags.add_argument("--restarts", type=int, default=SearchConfig.restarts)
    search_flags.add_argument("--iters", type=int, default=SearchConfig.max_iters)
    search_flags.add_argument("--accept-cost", type=float, default=SearchConfig.accept_cost)

    p = argparse.ArgumentParser(prog="evenspec", parents=[common],
                                description="Square characteristic polynomials on small graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", parents=[common], help="list connected graphs on n vertices (graph6)")
    e.add_argument("n", type=int)
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("classify", parents=[common, search_flags], help="classify one graph or all of an order")
    c.add_argument("graph6", nargs="?")
    c.add_argument("--all", type=int, metavar="N")
    c.add_argument("--report", metavar="DIR", help="write records.jsonl, summary.tsv and figures to DIR")
    c.add_argument("--workers", type=int, default=None)
    c.add_argument("--timings", action="store_true", help="include per-stage timings in records")
    c.set_defaults(func=cmd_classify)

    f = sub.add_parser("certify", parents=[common], help="certify a matrix file ('n; upper triangle')")
    f.add_argument("file")
    f.set_defaults(func=cmd_certify)

    k = sub.add_parser("construct", parents=[common], help="run a named construction",
                       epilog=f"constructions: {CONSTRUCTIONS}")
    k.add_argument("name")
    k.add_argument("params", nargs="*")
    k.add_argument("--r", type=int, default=0, help="number of universal complement vertices (rank2)")
    k.set_defaults(func=cmd_construct)

    s = sub.add_parser("search", parents=[common, search_flags], help="numeric search on one graph")
    s.add_argument("graph6")
    s.set_defaults(func=cmd_search)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if not hasattr(args, "seed"):
            args.seed = _default_seed()
        args.tol = getattr(args, "tol", DEFAULT_TOL)
        args.json = getattr(args, "json", False)
        return args.func(args)
    except (EvenSpecError, ValueError) as exc:
        print(f"evenspec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
