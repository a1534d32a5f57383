"""Forests of phylogenetic trees and agreement-forest validation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .tree import (
    PhyloTree,
    common_refinement,
    embed,
    read_newick_lines,
    restrict,
    restricted_clusters,
)


class Forest:
    """An ordered collection of trees with pairwise disjoint leaf sets.

    Components are kept sorted by their smallest leaf label.
    """

    def __init__(self, components: Iterable[PhyloTree]):
        comps = sorted(components, key=lambda c: min(c.leaves))
        seen: set[str] = set()
        for c in comps:
            if seen & c.leaves:
                raise ValueError(f"components share labels {sorted(seen & c.leaves)}")
            seen |= c.leaves
        self.components: tuple[PhyloTree, ...] = tuple(comps)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[str]], t1: PhyloTree, t2: PhyloTree) -> Forest:
        """Forest whose components are the minimal common refinements of the
        restrictions of ``t1`` and ``t2`` to each block."""
        comps = []
        for block in blocks:
            block = frozenset(block)
            merged = common_refinement(restrict(t1, block), restrict(t2, block))
            if merged is None:
                raise ValueError(f"block {sorted(block)} induces incompatible subtrees")
            comps.append(merged)
        return cls(comps)

    @classmethod
    def from_newick(cls, text: str) -> Forest:
        return cls(read_newick_lines(text))

    def newick(self) -> str:
        return "\n".join(c.newick() for c in self.components)

    def blocks(self) -> list[frozenset]:
        return [c.leaves for c in self.components]

    @property
    def leaves(self) -> frozenset:
        return frozenset().union(*(c.leaves for c in self.components))

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[PhyloTree]:
        return iter(self.components)

    def __getitem__(self, i: int) -> PhyloTree:
        return self.components[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Forest):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return "Forest([" + ", ".join(repr(c.newick()) for c in self.components) + "])"


def cut(f: Forest, index: int, v: int, subset: Iterable[int]) -> Forest:
    """Detach the children ``subset`` of vertex ``v`` in component ``index``.

    With more than one child the vertex is refined first, so the detached
    subtrees stay together in one new component.
    """
    comp = f.components[index]
    subset = set(subset)
    kids = comp.children(v)
    if not subset:
        raise ValueError("empty child subset")
    if not subset <= set(kids):
        raise ValueError(f"{sorted(subset - set(kids))} are not children of vertex {v}")
    if len(subset) == len(kids):
        raise ValueError("cannot detach every child of a vertex")

    def build(w: int):
        if comp.is_leaf(w):
            return comp.label(w)
        return [build(c) for c in comp.children(w) if not (w == v and c in subset)]

    detached = [build(c) for c in kids if c in subset]
    pieces = [PhyloTree(build(comp.root)), PhyloTree(detached)]
    rest = [c for i, c in enumerate(f.components) if i != index]
    return Forest(rest + pieces)


@dataclass
class Certificate:
    """Outcome of a validation; truthy when valid."""

    ok: bool
    reason: str | None = None
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "valid"
        details = ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"{self.reason}: {details}" if details else str(self.reason)


def _check_partition(blocks: Sequence[frozenset], leaves: frozenset) -> Certificate | None:
    union: set[str] = set()
    for i, b in enumerate(blocks):
        if not b:
            return Certificate(False, "empty component", {"component": i})
        if union & b:
            return Certificate(False, "overlapping components", {"labels": sorted(union & b)})
        union |= b
    if union != leaves:
        return Certificate(
            False,
            "not a partition of the leaf set",
            {"missing": sorted(leaves - union), "extra": sorted(union - leaves)},
        )
    return None


def _check_tree(f: Forest, t: PhyloTree, which: str) -> Certificate | None:
    owner: dict[tuple[int, int], int] = {}
    for i, comp in enumerate(f.components):
        if not restricted_clusters(t, comp.leaves) <= comp.clusters():
            return Certificate(
                False,
                f"component does not refine {which} restricted to its leaves",
                {"component": i, "newick": comp.newick()},
            )
        for edge in sorted(embed(t, comp.leaves).edges):
            if edge in owner:
                a = f.components[owner[edge]]
                return Certificate(
                    False,
                    f"embeddings overlap in {which}",
                    {
                        "edge": edge,
                        "edge_cluster": sorted(t.cluster(edge[1])),
                        "components": (owner[edge], i),
                        "newick": (a.newick(), comp.newick()),
                    },
                )
            owner[edge] = i
    return None


def _first_failure(*checks) -> Certificate:
    # failing certificates are falsy, so ``or``-chaining them would skip failures
    for check in checks:
        cert = check()
        if cert is not None:
            return cert
    return Certificate(True)


def is_forest_for(f: Forest, t: PhyloTree, name: str = "tree") -> Certificate:
    """Check that ``f`` is a forest for ``t``."""
    return _first_failure(
        lambda: _check_partition(f.blocks(), t.leaves),
        lambda: _check_tree(f, t, name),
    )


def is_agreement_forest(f: Forest, t1: PhyloTree, t2: PhyloTree) -> Certificate:
    """Check that ``f`` is an agreement forest of ``t1`` and ``t2``.

    The certificate names the first violated condition: the partition
    property, refinement of each restricted tree, or edge-disjointness of the
    component embeddings.
    """
    if t1.leaves != t2.leaves:
        raise ValueError("trees have different leaf sets")
    return _first_failure(
        lambda: _check_partition(f.blocks(), t1.leaves),
        lambda: _check_tree(f, t1, "T1"),
        lambda: _check_tree(f, t2, "T2"),
    )
