"""Compare classical critical pairs with lattice criticality over the bundled corpus."""

import argparse
import time
from dataclasses import dataclass
from importlib.resources import files

from clatter.limits import CapExceeded, Limits
from clatter.peaks import equivalence_check
from clatter.rewriting import load_trs


@dataclass
class SweepConfig:
    size_bound: int = 5
    max_terms: int = 50000


def sweep(cfg: SweepConfig):
    rows = []
    for path in sorted(files("clatter").joinpath("corpus").iterdir(), key=lambda p: p.name):
        if not path.name.endswith(".trs"):
            continue
        trs = load_trs(path.read_text(encoding="utf-8"))
        start = time.perf_counter()
        try:
            r = equivalence_check(trs, cfg.size_bound, Limits(max_terms=cfg.max_terms))
            rows.append((path.name, r.verdict, len(r.critical_pairs),
                         r.details["latticeCriticalPeaks"], r.details["termsChecked"],
                         time.perf_counter() - start))
        except CapExceeded as e:
            rows.append((path.name, "skipped (%s)" % e, 0, 0, 0, time.perf_counter() - start))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=SweepConfig.size_bound)
    ap.add_argument("--max-terms", type=int, default=SweepConfig.max_terms)
    args = ap.parse_args(argv)
    rows = sweep(SweepConfig(args.bound, args.max_terms))
    print("%-24s %-14s %8s %8s %8s %7s" % ("system", "verdict", "pairs", "lattice", "terms", "secs"))
    for name, verdict, pairs, lattice, terms, secs in rows:
        print("%-24s %-14s %8d %8d %8d %7.2f" % (name, verdict, pairs, lattice, terms, secs))
    return 0 if all(r[1] in ("equivalent",) or r[1].startswith("skipped") for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
