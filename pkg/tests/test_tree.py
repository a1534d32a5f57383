import pytest
from hypothesis import given, settings, strategies as st

from agreement_forest.generate import all_trees, random_tree
from agreement_forest.tree import (
    NewickError,
    PhyloTree,
    common_refinement,
    embed,
    is_refinement,
    parse_newick,
    read_newick_lines,
    restrict,
    write_newick,
)

from conftest import T


def test_parse_cherry_and_leaf():
    t = T("((a,b),c)")
    assert t.leaves == {"a", "b", "c"}
    kids = [t.cluster(c) for c in t.children(t.root)]
    assert kids == [{"a", "b"}, {"c"}]


def test_parse_star():
    t = T("(a,b,c,d)")
    assert t.outdegree(t.root) == 4
    assert t.internal_vertices() == [t.root]


def test_duplicate_label_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        T("((a,a),b)")


@pytest.mark.parametrize("text", ["", ";", "((a,b),c)", "((a,b),c);x", "((a,),b);", "(a,b):x;"])
def test_syntax_errors(text):
    with pytest.raises(NewickError):
        parse_newick(text)


def test_error_position_reported():
    with pytest.raises(NewickError) as err:
        parse_newick("((a,b),c;")
    assert err.value.position == 8


def test_lengths_internal_labels_and_comments_ignored():
    t = parse_newick("((a:1.5,b:2)x:0.1,[note]c:3e-2)root;")
    assert t == T("((a,b),c)")


def test_unary_vertices_suppressed():
    assert parse_newick("(((a,b)),c);") == T("((a,b),c)")
    assert parse_newick("((a));") == T("a")


def test_quoted_labels_round_trip():
    t = parse_newick("('a b',('x,y',c));")
    assert t.leaves == {"a b", "x,y", "c"}
    assert parse_newick(write_newick(t)) == t


def test_write_canonical_order():
    assert write_newick(T("a")) == "a;"
    assert write_newick(T("(c,b,a)")) == "(a,b,c);"
    assert write_newick(T("((d,c),(b,a))")) == "((a,b),(c,d));"


def test_labels_are_case_sensitive():
    t = T("(A,a)")
    assert t.leaves == {"A", "a"}


def test_read_lines_reports_line_number():
    assert len(read_newick_lines("(a,b);\n\nc;\n")) == 2
    with pytest.raises(NewickError, match="line 2"):
        read_newick_lines("(a,b);\n(c;\n")


def test_restrict_examples():
    assert restrict(T("((a,b),(c,d))"), {"a", "c"}) == T("(a,c)")
    assert restrict(T("(a,b,c)"), {"a", "b"}) == T("(a,b)")
    t = T("((a,b),(c,(d,e)))")
    assert restrict(t, t.leaves) == t
    with pytest.raises(ValueError):
        restrict(t, {"z"})


def test_embed_examples():
    t = T("((a,b),c)")
    e = embed(t, {"a", "b"})
    assert {tuple(sorted(t.cluster(v))) for _, v in e.edges} == {("a",), ("b",)}
    single = embed(t, {"a"})
    assert single.edges == frozenset() and single.root == t.leaf("a")
    t = T("(((a,b),c),d)")
    e = embed(t, {"c", "d"})
    assert e.root == t.root
    assert {frozenset(t.cluster(v)) for _, v in e.edges} == {
        frozenset("d"), frozenset("abc"), frozenset("c")}


def test_is_refinement_examples():
    assert is_refinement(T("((a,b),c)"), T("(a,b,c)"))
    assert not is_refinement(T("((a,b),c)"), T("((a,c),b)"))
    t = T("((a,b),(c,d))")
    assert is_refinement(t, t)
    with pytest.raises(ValueError):
        is_refinement(t, T("(a,b)"))


def test_common_refinement_examples():
    assert common_refinement(T("(a,b,c)"), T("((a,b),c)")) == T("((a,b),c)")
    assert common_refinement(T("((a,b),c)"), T("((a,c),b)")) is None
    assert common_refinement(T("(a,b,c,d)"), T("((a,b),(c,d))")) == T("((a,b),(c,d))")


def test_from_clusters_rejects_crossing_family():
    assert PhyloTree.from_clusters([{"a", "b"}, {"b", "c"}, {"a"}, {"b"}, {"c"}]) is None


def test_common_refinement_is_minimal_on_small_trees():
    labels = ["a", "b", "c", "d"]
    trees = list(all_trees(labels))
    for t1 in trees[::3]:
        for t2 in trees:
            merged = common_refinement(t1, t2)
            refiners = [t for t in trees if is_refinement(t, t1) and is_refinement(t, t2)]
            if merged is None:
                assert refiners == []
                continue
            assert is_refinement(merged, t1) and is_refinement(merged, t2)
            assert all(is_refinement(t, merged) for t in refiners)


@st.composite
def trees(draw, max_leaves=9):
    n = draw(st.integers(1, max_leaves))
    seed = draw(st.integers(0, 2**31))
    import random
    return random_tree(n, random.Random(seed), polytomy=draw(st.sampled_from([0.0, 0.3, 0.7])))


@settings(max_examples=150, deadline=None)
@given(trees())
def test_round_trip(t):
    assert parse_newick(write_newick(t)) == t
    assert write_newick(parse_newick(write_newick(t))) == write_newick(t)


@settings(max_examples=150, deadline=None)
@given(trees(), st.data())
def test_restrict_displayed_and_idempotent(t, data):
    labels = sorted(t.leaves)
    s = data.draw(st.sets(st.sampled_from(labels), min_size=1))
    r = restrict(t, s)
    assert r.leaves == s
    assert restrict(r, s) == r
    # displayed: every cluster of the restriction is the trace of a cluster of t
    traces = {c & s for c in t.clusters()}
    assert r.clusters() <= traces
    assert all(r.outdegree(v) >= 2 for v in r.internal_vertices())


def test_tree_invariants_hold_for_random_trees():
    import random
    rng = random.Random(0)
    for n in range(1, 30):
        t = random_tree(n, rng)
        assert len(t.leaves) == n
        assert all(t.outdegree(v) >= 2 for v in t.internal_vertices())
