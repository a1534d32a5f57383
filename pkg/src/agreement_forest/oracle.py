"""Brute-force ground truth for small instances.

Agreement forests are found by enumerating every set partition of the taxa;
DFVS by enumerating every vertex subset.  Both refuse inputs beyond a size
guard instead of silently truncating.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterator, Sequence

from .dfvs import FvsSolution, WeightedDigraph, is_acyclic
from .forest import Forest
from .maaf import inheritance_graph
from .tree import PhyloTree, common_refinement, embed, restrict

MAX_TAXA = 8
MAX_VERTICES = 12


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All set partitions of ``items`` via restricted growth strings."""
    n = len(items)
    if n == 0:
        yield []
        return
    growth = [0] * n
    while True:
        blocks: list[list] = [[] for _ in range(max(growth) + 1)]
        for item, b in zip(items, growth):
            blocks[b].append(item)
        yield blocks
        # next restricted growth string
        i = n - 1
        while i > 0 and growth[i] > max(growth[:i]):
            i -= 1
        if i == 0:
            return
        growth[i] += 1
        for j in range(i + 1, n):
            growth[j] = 0


def _block_table(t1: PhyloTree, t2: PhyloTree) -> dict[frozenset, tuple[frozenset, frozenset] | None]:
    # for every nonempty subset: its embedding edges in both trees, or None if incompatible
    labels = sorted(t1.leaves)
    table = {}
    for r in range(1, len(labels) + 1):
        for combo in combinations(labels, r):
            block = frozenset(combo)
            if common_refinement(restrict(t1, block), restrict(t2, block)) is None:
                table[block] = None
            else:
                table[block] = (embed(t1, block).edges, embed(t2, block).edges)
    return table


def _agreement_partitions(t1: PhyloTree, t2: PhyloTree) -> Iterator[list[frozenset]]:
    if t1.leaves != t2.leaves:
        raise ValueError("trees have different leaf sets")
    if len(t1) > MAX_TAXA:
        raise ValueError(f"brute force is limited to {MAX_TAXA} taxa")
    table = _block_table(t1, t2)
    for blocks in set_partitions(sorted(t1.leaves)):
        blocks = [frozenset(b) for b in blocks]
        used1: set = set()
        used2: set = set()
        ok = True
        for b in blocks:
            entry = table[b]
            if entry is None or used1 & entry[0] or used2 & entry[1]:
                ok = False
                break
            used1 |= entry[0]
            used2 |= entry[1]
        if ok:
            yield blocks


def _canonical_key(blocks: list[frozenset]) -> tuple:
    return (len(blocks), sorted(sorted(b) for b in blocks))


def brute_maf(t1: PhyloTree, t2: PhyloTree) -> tuple[int, Forest]:
    """Optimal MAF objective and a witness forest, by exhaustive enumeration."""
    best = min(_agreement_partitions(t1, t2), key=_canonical_key)
    return len(best) - 1, Forest.from_blocks(best, t1, t2)


def brute_maaf(t1: PhyloTree, t2: PhyloTree) -> tuple[int, Forest]:
    """Optimal MAAF objective and a witness forest, by exhaustive enumeration."""
    candidates = sorted(_agreement_partitions(t1, t2), key=_canonical_key)
    for blocks in candidates:
        forest = Forest.from_blocks(blocks, t1, t2)
        if is_acyclic(inheritance_graph(t1, t2, forest, check=False)):
            return len(blocks) - 1, forest
    raise AssertionError("the all-singletons forest is always acyclic")


def brute_dfvs(g: WeightedDigraph) -> FvsSolution:
    """Minimum-weight feedback vertex set by trying every vertex subset."""
    vertices = list(g.vertices)
    if len(vertices) > MAX_VERTICES:
        raise ValueError(f"brute force is limited to {MAX_VERTICES} vertices")
    best = None
    for mask in range(1 << len(vertices)):
        chosen = [v for i, v in enumerate(vertices) if mask >> i & 1]
        weight = sum(g.weight(v) for v in chosen)
        if best is not None and weight >= best[0]:
            continue
        if is_acyclic(g.without(chosen)):
            best = (weight, chosen)
    return FvsSolution(frozenset(best[1]), best[0])
