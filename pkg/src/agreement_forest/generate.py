"""Random and exhaustive tree generation for experiments and tests."""
from __future__ import annotations

import random
from typing import Iterator, Sequence

from .tree import Nested, PhyloTree


def taxon_names(n: int) -> list[str]:
    width = len(str(n))
    return [f"t{i:0{width}d}" for i in range(1, n + 1)]


class _Mutable:
    """Parent/children maps for building trees by hand."""

    def __init__(self):
        self.parent: dict[int, int | None] = {}
        self.kids: dict[int, list[int]] = {}
        self.label: dict[int, str] = {}
        self.root = 0
        self._next = 0

    def new(self, label: str | None = None) -> int:
        v = self._next
        self._next += 1
        self.parent[v] = None
        self.kids[v] = []
        if label is not None:
            self.label[v] = label
        return v

    def attach(self, child: int, parent: int) -> None:
        self.parent[child] = parent
        self.kids[parent].append(child)

    def subdivide(self, v: int, new_child: int) -> int:
        """Insert a vertex above ``v`` whose children are ``v`` and ``new_child``."""
        w = self.new()
        p = self.parent[v]
        if p is None:
            self.root = w
        else:
            self.kids[p][self.kids[p].index(v)] = w
            self.parent[w] = p
        self.parent[v] = w
        self.kids[w] = [v]
        self.attach(new_child, w)
        return w

    def nested(self, v: int | None = None) -> Nested:
        v = self.root if v is None else v
        if v in self.label:
            return self.label[v]
        return [self.nested(c) for c in self.kids[v]]

    def subtree(self, v: int) -> set[int]:
        out, stack = set(), [v]
        while stack:
            w = stack.pop()
            out.add(w)
            stack.extend(self.kids[w])
        return out

    @classmethod
    def from_tree(cls, t: PhyloTree) -> _Mutable:
        m = cls()
        for v in t.vertices:
            m.new(t.label(v))
        for v in t.vertices:
            p = t.parent(v)
            if p is not None:
                m.attach(v, p)
        m.root = t.root
        return m


def random_tree(n: int, rng: random.Random, polytomy: float = 0.3,
                labels: Sequence[str] | None = None) -> PhyloTree:
    """Random tree built by attaching leaves to uniformly chosen edges; each
    internal edge is then contracted with probability ``polytomy``."""
    if n < 1:
        raise ValueError("n must be positive")
    labels = list(labels) if labels is not None else taxon_names(n)
    order = list(labels)
    rng.shuffle(order)
    m = _Mutable()
    m.root = m.new(order[0])
    for name in order[1:]:
        target = rng.choice(list(m.parent))
        m.subdivide(target, m.new(name))
    for v in sorted(m.parent):
        p = m.parent.get(v)
        if v in m.kids and v not in m.label and p is not None and rng.random() < polytomy:
            kids = m.kids.pop(v)
            idx = m.kids[p].index(v)
            m.kids[p][idx:idx + 1] = kids
            for c in kids:
                m.parent[c] = p
            del m.parent[v]
    return PhyloTree(m.nested())


def rspr_move(t: PhyloTree, rng: random.Random) -> PhyloTree:
    """Prune a random subtree and regraft it onto a random edge outside it."""
    if len(t) < 3:
        return t
    m = _Mutable.from_tree(t)
    movable = [v for v in m.parent if m.parent[v] is not None]
    v = rng.choice(movable)
    p = m.parent[v]
    m.kids[p].remove(v)
    m.parent[v] = None
    if len(m.kids[p]) == 1:
        (sib,) = m.kids[p]
        g = m.parent[p]
        m.parent[sib] = g
        if g is None:
            m.root = sib
        else:
            m.kids[g][m.kids[g].index(p)] = sib
        del m.kids[p], m.parent[p]
    inside = m.subtree(v)
    targets = sorted(w for w in m.parent if w not in inside)
    m.subdivide(rng.choice(targets), v)
    return PhyloTree(m.nested())


def random_pair(n: int, moves: int, seed: int, polytomy: float = 0.3) -> tuple[PhyloTree, PhyloTree]:
    """A random tree and a copy perturbed by ``moves`` rSPR moves (MAF <= moves)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if moves < 0:
        raise ValueError("moves must be nonnegative")
    rng = random.Random(seed)
    t1 = random_tree(n, rng, polytomy)
    t2 = t1
    for _ in range(moves):
        t2 = rspr_move(t2, rng)
    return t1, t2


def all_trees(labels: Sequence[str]) -> Iterator[PhyloTree]:
    """Every rooted phylogenetic tree on ``labels``, each exactly once."""
    for nested in _all_nested(list(labels)):
        yield PhyloTree(nested)


def _all_nested(labels: list[str]) -> Iterator[Nested]:
    # insert the last label into every tree on the others: as a new child of
    # an internal vertex, or by subdividing any edge (including above the root)
    if len(labels) == 1:
        yield labels[0]
        return
    new = labels[-1]
    for base in _all_nested(labels[:-1]):
        m = _Mutable.from_tree(PhyloTree(base))
        for v in sorted(m.parent):
            if v not in m.label:
                c = _Mutable.from_tree(PhyloTree(base))
                c.attach(c.new(new), v)
                yield c.nested()
            c = _Mutable.from_tree(PhyloTree(base))
            c.subdivide(v, c.new(new))
            yield c.nested()


def shape_key(t: PhyloTree, v: int | None = None) -> str:
    """Label-free canonical form of a tree."""
    v = t.root if v is None else v
    if t.is_leaf(v):
        return "*"
    return "(" + ",".join(sorted(shape_key(t, c) for c in t.children(v))) + ")"


def shape_representatives(labels: Sequence[str]) -> list[PhyloTree]:
    """One labelled tree per unlabelled shape."""
    seen: dict[str, PhyloTree] = {}
    for t in all_trees(labels):
        seen.setdefault(shape_key(t), t)
    return list(seen.values())


def exhaustive_pairs(n: int) -> Iterator[tuple[PhyloTree, PhyloTree]]:
    """Tree pairs on ``n`` taxa covering every pair up to relabelling."""
    labels = [chr(ord("a") + i) for i in range(n)]
    seconds = list(all_trees(labels))
    for t1 in shape_representatives(labels):
        for t2 in seconds:
            yield t1, t2
