from pathlib import Path

from clatter.inductive import cluster_from_json
from clatter.rewriting import load_trs
from clatter.terms import parse_term

CORPUS = Path(__file__).resolve().parents[1] / "src" / "clatter" / "corpus"
RUNNING = "a(b(c(e),0))"


def corpus_trs(name):
    return load_trs((CORPUS / (name + ".trs")).read_text(encoding="utf-8"))


def T(text, vars=("x1", "x2", "x3", "x4", "y1", "y2")):
    return parse_term(text, vars)


def C(skeleton, **assignment):
    return cluster_from_json({"skeleton": skeleton, "assignment": assignment},
                             vars=("x1", "x2", "x3"))


ROWS = [
    C(RUNNING),
    C("X1(b(c(e),0))", X1="a(x1)"),
    C("a(X1(X2(e),0))", X1="b(x1,x2)", X2="c(x1)"),
    C("a(X1(e,0))", X1="b(c(x1),x2)"),
    C("a(X1(c(e)))", X1="b(x1,0)"),
    C("X1", X1=RUNNING),
]
