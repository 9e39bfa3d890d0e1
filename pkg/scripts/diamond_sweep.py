"""Check the one-multi-step diamond on every term up to a size bound for each
orthogonal system in the corpus (and report the non-orthogonal ones too)."""

import argparse
from dataclasses import dataclass
from importlib.resources import files

from clatter.peaks import diamond_check, orthogonality
from clatter.rewriting import load_trs
from clatter.terms import terms_up_to


@dataclass
class DiamondConfig:
    size: int = 5
    include_non_orthogonal: bool = False


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=DiamondConfig.size)
    ap.add_argument("--include-non-orthogonal", action="store_true")
    args = ap.parse_args(argv)
    cfg = DiamondConfig(args.size, args.include_non_orthogonal)

    bad = 0
    for path in sorted(files("clatter").joinpath("corpus").iterdir(), key=lambda p: p.name):
        if not path.name.endswith(".trs"):
            continue
        trs = load_trs(path.read_text(encoding="utf-8"))
        orth = orthogonality(trs).status == "ok"
        if not orth and not cfg.include_non_orthogonal:
            continue
        counts = {"ok": 0, "refuted": 0, "unknown": 0}
        first = None
        for t in terms_up_to(trs.signature, cfg.size):
            r = diamond_check(trs, t)
            counts[r.status] += 1
            if r.status == "refuted" and first is None:
                first = t
        print("%-24s %-14s ok=%-6d refuted=%-6d unknown=%-4d%s" % (
            path.name, "orthogonal" if orth else "not orthogonal", counts["ok"],
            counts["refuted"], counts["unknown"], "  e.g. %s" % first if first else ""))
        bad += orth and counts["refuted"] > 0
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
