"""Print the six clusters of a(b(c(e),0)) in both representations, plus the
worked conversion and refinement examples."""

import argparse

from clatter.geometry import enumerate_clusters, format_positions
from clatter.inductive import cluster_from_json, coarsening_le, witness_check
from clatter.isomorphism import to_geometric, to_inductive
from clatter.terms import parse_term

ROWS = ["", "eps:v", "1:v,1.1:v", "1:v,1.1:e,1.1:v", "1:v,1.2:e,1.2:v", None]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--term", default="a(b(c(e),0))")
    ap.add_argument("--all", action="store_true", help="list every cluster, not just the table rows")
    args = ap.parse_args(argv)

    t = parse_term(args.term)
    clusters = enumerate_clusters(t)
    print("%s has %d clusters" % (t, len(clusters)))
    if args.all or args.term != "a(b(c(e),0))":
        shown = clusters
    else:
        by_str = {format_positions(c.positions): c for c in clusters}
        shown = [clusters[-1] if r is None else by_str["{%s}" % r.replace(",", ", ")] for r in ROWS]
    for g in shown:
        c = to_inductive(t, g)
        assert to_geometric(c) == g
        print("  %-48s %s" % (format_positions(g.positions), c))

    c = cluster_from_json({"skeleton": "a(X(e,0))", "assignment": {"X": "b(c(x1),x2)"}},
                          vars=("x1", "x2"))
    print("\nconversion: %s -> %s" % (c, format_positions(to_geometric(c).positions)))

    fine = cluster_from_json({"skeleton": "X1(X2)", "assignment": {"X1": "a(x1)", "X2": "0"}},
                             vars=("x1",))
    coarse = cluster_from_json({"skeleton": "X1", "assignment": {"X1": "a(0)"}})
    gamma = coarsening_le(fine, coarse)
    print("refinement: %s <= %s via %s (checked: %s)"
          % (fine, coarse, {k: str(v) for k, v in gamma.items()},
             witness_check(fine, coarse, gamma)))
    print("            %s is contained in %s" % (format_positions(to_geometric(fine).positions),
                                                 format_positions(to_geometric(coarse).positions)))


if __name__ == "__main__":
    main()
