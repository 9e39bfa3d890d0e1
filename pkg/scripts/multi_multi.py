"""Criticality of the multi-multi family over a(a(x)) -> b'(x).

For n = 1..N the source is a^(2n+1)(x1); the left step contracts the redexes
at even depth and the right step those at odd depth.
"""

import argparse

from clatter.peaks import Peak, decompose, is_critical
from clatter.rewriting import load_trs, make_multistep, redex_occurrences
from clatter.terms import parse_term

TRS = "(VAR x) (RULES a(a(x)) -> b'(x))"


def family(n, trs):
    depth = 2 * n + 1
    t = parse_term("a(" * depth + "x1" + ")" * depth, ["x1"])
    occs = redex_occurrences(t, trs)
    left = [o for o in occs if len(o.position) % 2 == 0]
    right = [o for o in occs if len(o.position) % 2 == 1]
    return Peak(t, make_multistep(t, left), make_multistep(t, right))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=5, help="largest family member")
    ap.add_argument("--pad", action="store_true",
                    help="also show that wrapping the source in one more a(...) breaks criticality")
    args = ap.parse_args(argv)
    trs = load_trs(TRS)
    for n in range(1, args.n + 1):
        p = family(n, trs)
        r = is_critical(p)
        s, u = p.targets()
        print("n=%d  %s  gaps %d/%d  overlap %d  %s  (%s | %s)" % (
            n, p.source, len(p.left.gaps()), len(p.right.gaps()), r.overlap_size,
            "critical" if r.is_critical else "NOT critical", s, u))
    if args.pad:
        p = family(1, trs)
        t = parse_term("c(%s)" % p.source, ["x1"])
        occs = redex_occurrences(t, trs)
        q = Peak(t, make_multistep(t, [o for o in occs if len(o.position) % 2 == 1]),
                 make_multistep(t, [o for o in occs if len(o.position) % 2 == 0]))
        d = decompose(q)
        print("padded: %s -> missing %s, split at %s"
              % (t, sorted(map(str, is_critical(q).missing)), d.split_edge))


if __name__ == "__main__":
    main()
