import pytest

from agreement_forest.forest import Forest, cut, is_agreement_forest, is_forest_for

from conftest import T


def blocks(f):
    return sorted(sorted(b) for b in f.blocks())


def test_crossing_instance_valid_forest(crossing_pair):
    t1, t2 = crossing_pair
    f = Forest.from_blocks([{"a", "b"}, {"c"}, {"d"}], t1, t2)
    assert is_agreement_forest(f, t1, t2)


def test_crossing_instance_overlap_witness(crossing_pair):
    t1, t2 = crossing_pair
    f = Forest([T("(a,b)"), T("(c,d)")])
    cert = is_agreement_forest(f, t1, t2)
    assert not cert
    assert "overlap" in cert.reason and "T2" in cert.reason
    assert cert.witness["edge_cluster"] in (["a", "c"], ["b", "d"])


def test_whole_tree_is_agreement_forest():
    t = T("((a,b),(c,(d,e)))")
    assert is_agreement_forest(Forest([t]), t, t)


def test_partition_failures():
    t = T("((a,b),c)")
    assert not is_agreement_forest(Forest([T("(a,b)")]), t, t)
    cert = is_forest_for(Forest([T("(a,b)"), T("(c,x)")]), t)
    assert not cert and "partition" in cert.reason


def test_refinement_failure():
    t1, t2 = T("((a,b),c)"), T("((a,b),c)")
    cert = is_agreement_forest(Forest([T("((a,c),b)")]), t1, t2)
    assert not cert and "refine" in cert.reason


def test_overlapping_components_rejected():
    with pytest.raises(ValueError):
        Forest([T("(a,b)"), T("(b,c)")])


def test_leaf_set_mismatch_is_an_error():
    with pytest.raises(ValueError):
        is_agreement_forest(Forest([T("(a,b)")]), T("(a,b)"), T("(a,c)"))


def test_cut_single_child():
    f = Forest([T("(a,b,c)")])
    comp = f[0]
    g = cut(f, 0, comp.root, {comp.leaf("a")})
    assert blocks(g) == [["a"], ["b", "c"]]


def test_cut_refines_for_two_children():
    f = Forest([T("(a,b,c)")])
    comp = f[0]
    g = cut(f, 0, comp.root, {comp.leaf("a"), comp.leaf("b")})
    assert blocks(g) == [["a", "b"], ["c"]]
    assert T("(a,b)") in list(g)


def test_cut_suppresses_root():
    f = Forest([T("((a,b),c)")])
    comp = f[0]
    g = cut(f, 0, comp.root, {comp.leaf("c")})
    assert list(g) == [T("(a,b)"), T("c")]


def test_cut_errors():
    f = Forest([T("(a,b,c)")])
    root = f[0].root
    with pytest.raises(ValueError):
        cut(f, 0, root, set())
    with pytest.raises(ValueError):
        cut(f, 0, root, set(f[0].children(root)))
    with pytest.raises(ValueError):
        cut(f, 0, root, {f[0].leaf("a") + 100})


def test_cut_keeps_forest_for_tree():
    import random
    from agreement_forest.generate import random_tree
    rng = random.Random(3)
    for _ in range(100):
        t = random_tree(rng.randint(3, 9), rng)
        f = Forest([t])
        for _ in range(3):
            i = rng.randrange(len(f))
            comp = f[i]
            inner = [v for v in comp.internal_vertices()]
            if not inner:
                continue
            v = rng.choice(inner)
            kids = list(comp.children(v))
            subset = rng.sample(kids, rng.randint(1, len(kids) - 1))
            before = len(f)
            f = cut(f, i, v, subset)
            assert len(f) == before + 1
            assert is_forest_for(f, t)


def test_forest_newick_round_trip():
    f = Forest([T("(c,d)"), T("a"), T("(b,e)")])
    assert f.newick() == "a;\n(b,e);\n(c,d);"
    assert Forest.from_newick(f.newick()) == f
