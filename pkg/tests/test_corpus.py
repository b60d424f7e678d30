from drgcert.corpus import build_corpus
from drgcert.graph import encode_graph6


def test_corpus_is_large_connected_and_reproducible():
    a = build_corpus()
    assert len(a) >= 500
    assert len({G.label for G in a}) == len(a)
    assert all(G.is_connected() for G in a)
    b = build_corpus()
    assert [encode_graph6(G) for G in a] == [encode_graph6(G) for G in b]


def test_corpus_covers_required_families():
    labels = {G.label for G in build_corpus()}
    for name in ["C3", "C20", "K2", "K12", "Q1", "Q4", "Petersen", "O4", "perkel", "hoffman",
                 "C8(x)J2", "Q3[x]K2"]:
        assert name in labels, name
    assert any(l.startswith("rr3-") for l in labels) and any(l.startswith("rr4-") for l in labels)
    assert sum(l.startswith("Circ(") for l in labels) >= 100
