"""``clatter`` command-line front end.

Every command builds one JSON-able dict; ``--json`` prints it verbatim, the
default prints the same data as indented text.

Exit codes: 0 analysis completed, 1 property refuted, 2 input error,
3 cap exceeded (term commands), 4 verdict unknown because of caps.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path as FilePath

from .geometry import (components, enumerate_clusters,
                       parse_position, positions_to_json, tree_positions,
                       internal_positions)
from .inductive import cluster_to_json
from .isomorphism import to_geometric, to_inductive
from .limits import CapExceeded, Limits
from .peaks import (Peak, PeakError, classical_critical_peaks, decompose,
                    diamond_check, equivalence_check, is_critical,
                    local_confluence_report, orthogonality, peak_to_json)
from .rewriting import TRS, load_trs, multistep_at
from .terms import ArityError, TermSyntaxError, parse_term

EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_CAP, EXIT_UNKNOWN = 0, 1, 2, 3, 4
STATUS_EXIT = {"ok": EXIT_OK, "refuted": EXIT_REFUTED, "unknown": EXIT_UNKNOWN}


class InputError(Exception):
    pass


_POSITION = re.compile(r"(eps|\d+(\.\d+)*):[ve]")


def _is_position_list(v) -> bool:
    return isinstance(v, list) and all(isinstance(s, str) and _POSITION.fullmatch(s) for s in v)


def render(obj, indent=0) -> str:
    """Indented text with the same content as the JSON form; position arrays print as sets."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if _is_position_list(v):
                lines.append("%s%s: {%s}" % (pad, k, ", ".join(v)))
            elif isinstance(v, (dict, list)) and v:
                lines.append("%s%s:" % (pad, k))
                lines.append(render(v, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, k, _scalar(v)))
    elif isinstance(obj, list):
        for v in obj:
            if _is_position_list(v):
                lines.append("%s- {%s}" % (pad, ", ".join(v)))
            elif isinstance(v, (dict, list)) and v:
                lines.append("%s-" % pad)
                lines.append(render(v, indent + 1))
            else:
                lines.append("%s- %s" % (pad, _scalar(v)))
    else:
        lines.append(pad + _scalar(obj))
    return "\n".join(lines)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, (list, dict)):
        return "{}"
    return str(v)


def _term(text, vars):
    return parse_term(text, vars)


def _read_trs(path) -> TRS:
    try:
        text = FilePath(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e))
    return load_trs(text)


def _peak(args, trs: TRS) -> Peak:
    vars = set(args.var or [])
    vars |= {v for v in _file_vars(args.trs)}
    vars |= {"x%d" % i for i in range(1, 64)}
    t = parse_term(args.source, vars, dict(trs.signature))
    return Peak(t, multistep_at(t, trs, args.left), multistep_at(t, trs, args.right))


def _file_vars(path):
    text = FilePath(path).read_text(encoding="utf-8")
    out = []
    for m in re.finditer(r"\(\s*VAR\b([^)]*)\)", text):
        out.extend(m.group(1).split())
    return out


# ---------------------------------------------------------------------------
# commands

def cmd_positions(args):
    t = _term(args.term, args.var or [])
    return {"term": str(t),
            "tree": positions_to_json(tree_positions(t)),
            "internal": positions_to_json(internal_positions(t))}, EXIT_OK


def cmd_clusters(args):
    t = _term(args.term, args.var or [])
    clusters = enumerate_clusters(t, cap=args.max_positions)
    out = []
    for g in clusters:
        out.append({"positions": positions_to_json(g.positions),
                    "patterns": [positions_to_json(c) for c in components(g)],
                    "inductive": str(to_inductive(t, g))})
    return {"term": str(t), "count": len(clusters), "clusters": out}, EXIT_OK


def cmd_iso(args):
    t = _term(args.term, args.var or [])
    ps = frozenset(parse_position(s) for s in args.positions)
    c = to_inductive(t, ps)
    back = to_geometric(c).positions
    return {"term": str(t), "geometric": positions_to_json(ps), "inductive": str(c),
            "cluster": cluster_to_json(c), "roundTrip": positions_to_json(back),
            "roundTripOk": back == ps}, EXIT_OK


def cmd_critical_pairs(args):
    trs = _read_trs(args.trs)
    pairs = []
    mismatches = 0
    for cp in classical_critical_peaks(trs):
        entry = cp.to_json()
        if args.verify_lattice:
            ok = is_critical(cp.peak).is_critical
            entry["lattice"] = "critical" if ok else "NOT critical"
            mismatches += not ok
        pairs.append(entry)
    out = {"verdict": "%d critical pair(s)" % len(pairs), "criticalPairs": pairs,
           "counterexamples": [p for p in pairs if p.get("lattice") == "NOT critical"]}
    if mismatches:
        print("error: %d classical critical pair(s) fail the lattice criterion" % mismatches,
              file=sys.stderr)
        return out, EXIT_REFUTED
    return out, EXIT_OK


def cmd_is_critical(args):
    trs = _read_trs(args.trs)
    p = _peak(args, trs)
    out = is_critical(p).to_json()
    out["peak"] = peak_to_json(p)
    return out, EXIT_OK


def cmd_decompose(args):
    trs = _read_trs(args.trs)
    p = _peak(args, trs)
    try:
        d = decompose(p)
    except PeakError as e:
        return {"verdict": str(e), "peak": peak_to_json(p)}, EXIT_OK
    out = {"verdict": "decomposed", "peak": peak_to_json(p)}
    out.update(d.to_json())
    return out, EXIT_OK


def cmd_local_confluence(args):
    trs = _read_trs(args.trs)
    limits = Limits(max_depth=max(args.depth, Limits().max_depth), max_states=args.max_states)
    r = local_confluence_report(trs, args.depth, limits)
    return r.to_json(), STATUS_EXIT[r.status]


def cmd_orthogonal(args):
    trs = _read_trs(args.trs)
    r = orthogonality(trs)
    return r.to_json(), STATUS_EXIT[r.status]


def cmd_equivalence(args):
    trs = _read_trs(args.trs)
    r = equivalence_check(trs, args.size_bound)
    return r.to_json(), STATUS_EXIT[r.status]


def cmd_diamond(args):
    trs = _read_trs(args.trs)
    vars = set(args.var or []) | set(_file_vars(args.trs)) | {"x%d" % i for i in range(1, 64)}
    t = parse_term(args.term, vars, dict(trs.signature))
    r = diamond_check(trs, t)
    return r.to_json(), STATUS_EXIT[r.status]


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clatter",
                                 description="Clusters, steps and critical peaks of "
                                             "left-linear term rewriting systems.")
    ap.add_argument("--json", action="store_true", help="print the report as JSON")
    sub = ap.add_subparsers(dest="command", required=True)

    def term_cmd(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("term")
        p.add_argument("--var", action="append", metavar="NAME",
                       help="identifier to read as a variable (repeatable)")
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    term_cmd("positions", cmd_positions, "tree and internal positions of a term")
    p = term_cmd("clusters", cmd_clusters, "enumerate all clusters of a term")
    p.add_argument("--max-positions", type=int, default=14)
    p = term_cmd("iso", cmd_iso, "geometric cluster to inductive cluster and back")
    p.add_argument("positions", nargs="*", help="positions such as 1:v 1.2:e eps:v")

    def trs_cmd(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("trs", help="COPS .trs file")
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    p = trs_cmd("critical-pairs", cmd_critical_pairs, "classical critical pairs")
    p.add_argument("--verify-lattice", action="store_true",
                   help="check every pair against the lattice criterion")
    for name, func in (("is-critical", cmd_is_critical), ("decompose", cmd_decompose)):
        p = trs_cmd(name, func, "lattice criticality of a peak" if name == "is-critical"
                    else "split a non-critical peak along an uncovered edge")
        p.add_argument("--source", required=True)
        p.add_argument("--left", required=True,
                       help='redexes: JSON [{"rule": "r1", "pos": "1"}] or "r1@1,r2@eps"')
        p.add_argument("--right", required=True)
        p.add_argument("--var", action="append", metavar="NAME")
    p = trs_cmd("local-confluence", cmd_local_confluence,
                "joinability of all critical pairs within a depth bound")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--max-states", type=int, default=Limits().max_states)
    trs_cmd("orthogonal", cmd_orthogonal, "left-linear and without critical pairs?")
    p = trs_cmd("equivalence", cmd_equivalence,
                "cross-check classical and lattice critical peaks")
    p.add_argument("--size-bound", type=int, default=6)
    p = trs_cmd("diamond", cmd_diamond, "diamond property of multi-steps from a term")
    p.add_argument("--term", required=True)
    p.add_argument("--var", action="append", metavar="NAME")
    return ap


def main(argv=None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        out, code = args.func(args)
    except (TermSyntaxError, ArityError, InputError, KeyError, ValueError) as e:
        print("error: %s" % (e.args[0] if isinstance(e, KeyError) else e), file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as e:
        print("error: cap exceeded: %s" % e, file=sys.stderr)
        return EXIT_CAP
    if getattr(args, "json", False):
        print(json.dumps(out, indent=2, ensure_ascii=False))
    else:
        print(render(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
