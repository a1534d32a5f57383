"""Acyclic agreement forests via agreement forests plus DFVS.

An agreement forest is made maximal and minimally refined, both input trees
are labelled with its vertices and edges, and a weighted DFVS instance is
built whose feedback vertex sets correspond to acyclic splittings of the
forest.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .dfvs import (
    EDGE,
    VERTEX,
    FvsSolution,
    WeightedDigraph,
    is_acyclic,
    is_proper,
    minimalize,
    properize,
    solve_dfvs_exact,
    solve_dfvs_greedy,
)
from .forest import Forest, is_agreement_forest
from .tree import PhyloTree, common_refinement, restrict

# DFVS vertex keys: (VERTEX, component, vertex) and (EDGE, component, head vertex)


def _require_agreement(t1: PhyloTree, t2: PhyloTree, f: Forest) -> None:
    cert = is_agreement_forest(f, t1, t2)
    if not cert:
        raise ValueError(f"not an agreement forest: {cert.describe()}")


def inheritance_graph(t1: PhyloTree, t2: PhyloTree, f: Forest, check: bool = True) -> WeightedDigraph:
    """Digraph on component indices with an edge (i, j) when, in either tree,
    component j is rooted below component i along one of i's own edges."""
    if check:
        _require_agreement(t1, t2, f)
    g = WeightedDigraph()
    for i in range(len(f)):
        g.add_vertex(i)
    for t in (t1, t2):
        roots = [t.lca(c.leaves) for c in f]
        for i, comp in enumerate(f):
            top = roots[i]
            for child in t.children(top):
                if not (t.cluster(child) & comp.leaves):
                    continue
                for j, r in enumerate(roots):
                    if j != i and t.is_ancestor(child, r):
                        g.add_edge(i, j)
    return g


def is_acyclic_agreement_forest(t1: PhyloTree, t2: PhyloTree, f: Forest) -> bool:
    return bool(is_agreement_forest(f, t1, t2)) and is_acyclic(inheritance_graph(t1, t2, f, check=False))


def _merged(t1: PhyloTree, t2: PhyloTree, f: Forest, i: int, j: int) -> Forest | None:
    block = f[i].leaves | f[j].leaves
    merged = common_refinement(restrict(t1, block), restrict(t2, block))
    if merged is None:
        return None
    candidate = Forest([c for k, c in enumerate(f) if k not in (i, j)] + [merged])
    return candidate if is_agreement_forest(candidate, t1, t2) else None


def maximalize(t1: PhyloTree, t2: PhyloTree, a: Forest) -> Forest:
    """Merge components pairwise until no merge gives an agreement forest."""
    _require_agreement(t1, t2, a)
    current = a
    while True:
        # same root in both trees always merges; try those pairs first
        pairs = list(combinations(range(len(current)), 2))
        roots = [(t1.lca(c.leaves), t2.lca(c.leaves)) for c in current]
        pairs.sort(key=lambda p: roots[p[0]] != roots[p[1]])
        for i, j in pairs:
            merged = _merged(t1, t2, current, i, j)
            if merged is not None:
                current = merged
                break
        else:
            return current


def minimally_refine(t1: PhyloTree, t2: PhyloTree, a: Forest) -> Forest:
    """Replace each component by the minimal common refinement of the two restrictions."""
    _require_agreement(t1, t2, a)
    comps = []
    for comp in a:
        merged = common_refinement(restrict(t1, comp.leaves), restrict(t2, comp.leaves))
        if merged is None:
            raise AssertionError("component restrictions conflict")
        comps.append(merged)
    return Forest(comps)


@dataclass
class LabeledEmbedding:
    """Images of forest vertices and edges in each input tree.

    ``vertex_image[i][(c, v)]`` is the vertex of tree ``i`` labelled by vertex
    ``v`` of component ``c``; ``edge_path[i][(c, v)]`` is the list of tree
    edges labelled by the component edge entering ``v`` (possibly empty).
    """

    vertex_image: tuple[dict, dict]
    edge_path: tuple[dict, dict]


def label_trees(t1: PhyloTree, t2: PhyloTree, a: Forest) -> LabeledEmbedding:
    images: list[dict] = [{}, {}]
    paths: list[dict] = [{}, {}]
    for i, t in enumerate((t1, t2)):
        for c, comp in enumerate(a):
            for v in comp.vertices:
                images[i][(c, v)] = t.lca(comp.cluster(v))
            for u, v in comp.edges():
                paths[i][(c, v)] = t.path(images[i][(c, u)], images[i][(c, v)])
    for key in paths[0]:
        if not paths[0][key] and not paths[1][key]:
            raise ValueError(f"component edge {key} labels no tree edge; forest is over-refined")
    return LabeledEmbedding((images[0], images[1]), (paths[0], paths[1]))


def build_dfvs_instance(t1: PhyloTree, t2: PhyloTree, a: Forest,
                        emb: LabeledEmbedding | None = None) -> WeightedDigraph:
    """Weighted digraph whose feedback vertex sets split ``a`` into acyclic forests.

    A vertex of the forest weighs its outdegree minus one, an edge weighs 1.
    """
    emb = label_trees(t1, t2, a) if emb is None else emb
    g = WeightedDigraph()
    inner = []
    for c, comp in enumerate(a):
        for v in comp.internal_vertices():
            key = (VERTEX, c, v)
            inner.append(key)
            g.add_vertex(key, comp.outdegree(v) - 1, VERTEX)
        for u, v in comp.edges():
            g.add_vertex((EDGE, c, v), 1, EDGE)
    for c, comp in enumerate(a):
        for u, v in comp.edges():
            g.add_edge((VERTEX, c, u), (EDGE, c, v))
    for i, t in enumerate((t1, t2)):
        images = emb.vertex_image[i]
        for (c, v), path in emb.edge_path[i].items():
            if not path:
                continue
            head = path[0][1]  # the highest labelled edge reaches the most
            for key in inner:
                if t.is_ancestor(head, images[key[1:]]):
                    g.add_edge((EDGE, c, v), key)
    return g


def anchors(a: Forest) -> dict:
    """For each internal non-root forest vertex, the DFVS keys directly above it:
    the edge entering it and its parent."""
    above = {}
    for c, comp in enumerate(a):
        for v in comp.internal_vertices():
            p = comp.parent(v)
            above[(VERTEX, c, v)] = () if p is None else ((EDGE, c, v), (VERTEX, c, p))
    return above


def split_blocks(a: Forest, removed) -> list[frozenset]:
    """Leaf blocks left after deleting the forest elements named by DFVS keys."""
    removed = set(removed)
    blocks = []
    for c, comp in enumerate(a):
        group = {}

        def find(v):
            while group.setdefault(v, v) != v:
                v = group[v]
            return v

        for u, v in comp.edges():
            if (EDGE, c, v) in removed or (VERTEX, c, u) in removed or (VERTEX, c, v) in removed:
                continue
            group[find(v)] = find(u)
        pieces: dict[int, set] = {}
        for v in comp.vertices:
            if comp.is_leaf(v):
                pieces.setdefault(find(v), set()).add(comp.label(v))
        blocks.extend(frozenset(p) for p in pieces.values())
    return blocks


def remove_fvs(t1: PhyloTree, t2: PhyloTree, a: Forest, g: WeightedDigraph,
               f: FvsSolution, strict: bool = True) -> Forest:
    """The splitting of ``a`` obtained by deleting a proper feedback vertex set.

    With ``strict`` a splitting whose size is not ``|a| + w(f)`` raises
    AssertionError; otherwise the caller is expected to compare sizes.
    """
    if not is_proper(g, f, anchors(a)):
        raise ValueError("feedback vertex set is not proper")
    result = Forest.from_blocks(split_blocks(a, f.vertices), t1, t2)
    if strict and len(result) != len(a) + f.weight:
        raise AssertionError("splitting size differs from |A| + w(F)")
    return result


def approximate_maaf(t1: PhyloTree, t2: PhyloTree, maf_mode: str = "exact",
                     dfvs_mode: str = "exact", strict: bool = False) -> tuple[Forest, int, dict]:
    """Acyclic agreement forest from an agreement forest and a DFVS solution.

    With an optimal agreement forest and an optimal DFVS the result is within
    a factor 4 of the optimum; with the 4-approximation it is within 7.
    With ``strict`` a failure of the size identity ``|result| = |A| + w(F)``
    raises instead of being reported in the diagnostics.
    """
    from .approx import approximate_maf
    from .fpt import solve_maf_exact

    if t1.leaves != t2.leaves:
        raise ValueError("trees have different leaf sets")
    if maf_mode == "exact":
        a, _ = solve_maf_exact(t1, t2)
    elif maf_mode == "approx":
        a, _ = approximate_maf(t1, t2)
    else:
        raise ValueError(f"unknown MAF mode {maf_mode!r}")
    if dfvs_mode not in ("exact", "greedy"):
        raise ValueError(f"unknown DFVS mode {dfvs_mode!r}")

    initial = len(a)
    a = minimally_refine(t1, t2, maximalize(t1, t2, a))
    g = build_dfvs_instance(t1, t2, a)
    raw = solve_dfvs_exact(g) if dfvs_mode == "exact" else solve_dfvs_greedy(g)
    above = anchors(a)
    f = properize(g, minimalize(g, raw), above)
    result = remove_fvs(t1, t2, a, g, f, strict=strict)

    ig = inheritance_graph(t1, t2, result, check=False)
    acyclic = is_acyclic(ig)
    if not acyclic:
        raise AssertionError("pipeline produced a cyclic forest")
    diagnostics = {
        "components": len(result),
        "k": len(result) - 1,
        "mafSize": len(a),
        "initialMafSize": initial,
        "dfvsWeight": f.weight,
        "dfvsVertices": len(g),
        "proper": is_proper(g, f, above),
        "acyclic": acyclic,
        "identityHolds": len(result) == len(a) + f.weight,
        "inheritanceGraph": [list(e) for e in ig.edges()],
    }
    return result, len(result) - 1, diagnostics
