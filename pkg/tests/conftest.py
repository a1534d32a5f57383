import pytest

from agreement_forest.tree import parse_newick


def T(text: str):
    return parse_newick(text if text.endswith(";") else text + ";")


@pytest.fixture
def cyclic_pair():
    # MAF 1 but every one-cut forest has a 2-cycle in its inheritance graph
    return T("(((a,b),c),d)"), T("(((c,d),a),b)")


@pytest.fixture
def crossing_pair():
    return T("((a,b),(c,d))"), T("((a,c),(b,d))")


def random_digraph(rng, n, p=0.25, max_weight=3, loops=False):
    from agreement_forest.dfvs import WeightedDigraph

    g = WeightedDigraph()
    for v in range(n):
        g.add_vertex(v, rng.randint(0, max_weight))
    for u in range(n):
        for v in range(n):
            if (u != v or loops) and rng.random() < p:
                g.add_edge(u, v)
    return g
