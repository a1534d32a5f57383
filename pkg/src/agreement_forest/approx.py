"""Polynomial-time 4-approximation for nonbinary maximum agreement forests.

The second tree is cut into a forest while the first tree is shrunk from the
bottom: sibling leaves that already agree are collapsed into one synthetic
leaf, and leaves that have become isolated are set aside.  Every collapse and
removal is recorded in an :class:`ExpansionLog`, which is replayed at the end
to recover a partition of the original taxa.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Union

from .forest import Forest, is_agreement_forest
from .tree import PhyloTree


class _Arbor:
    """Mutable rooted forest over integer taxa.

    ``kids`` maps every vertex to a tuple of children (empty for leaves);
    tuples keep :meth:`copy` cheap.
    """

    __slots__ = ("parent", "kids", "vertex", "taxon", "next_id")

    def __init__(self):
        self.parent: dict[int, int | None] = {}
        self.kids: dict[int, tuple[int, ...]] = {}
        self.vertex: dict[int, int] = {}  # taxon -> leaf vertex
        self.taxon: dict[int, int] = {}  # leaf vertex -> taxon
        self.next_id = 0

    @classmethod
    def from_tree(cls, tree: PhyloTree, index: dict[str, int]) -> _Arbor:
        arbor = cls()
        for v in tree.vertices:
            arbor.parent[v] = tree.parent(v)
            arbor.kids[v] = tree.children(v)
            if tree.is_leaf(v):
                x = index[tree.label(v)]
                arbor.vertex[x] = v
                arbor.taxon[v] = x
        arbor.next_id = len(tree.vertices)
        return arbor

    def copy(self) -> _Arbor:
        other = _Arbor.__new__(_Arbor)
        other.parent = dict(self.parent)
        other.kids = dict(self.kids)
        other.vertex = dict(self.vertex)
        other.taxon = dict(self.taxon)
        other.next_id = self.next_id
        return other

    def _new_vertex(self) -> int:
        v = self.next_id
        self.next_id += 1
        return v

    def roots(self) -> list[int]:
        return [v for v, p in self.parent.items() if p is None]

    def root_of(self, v: int) -> int:
        while self.parent[v] is not None:
            v = self.parent[v]
        return v

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
        return d

    def ancestors(self, v: int) -> list[int]:
        out = [v]
        while self.parent[v] is not None:
            v = self.parent[v]
            out.append(v)
        return out

    def lca(self, a: int, b: int) -> int | None:
        up = set(self.ancestors(a))
        while b is not None and b not in up:
            b = self.parent[b]
        return b

    def taxa_below(self, v: int) -> set[int]:
        out = set()
        stack = [v]
        while stack:
            w = stack.pop()
            if w in self.taxon:
                out.add(self.taxon[w])
            else:
                stack.extend(self.kids[w])
        return out

    def is_isolated(self, x: int) -> bool:
        return self.parent[self.vertex[x]] is None

    # -- structural edits ---------------------------------------------------

    def _delete(self, v: int) -> None:
        del self.parent[v]
        del self.kids[v]
        x = self.taxon.pop(v, None)
        if x is not None:
            del self.vertex[x]

    def _tidy(self, p: int) -> None:
        # p just lost a child: drop it if childless, suppress it if unary
        kids = self.kids[p]
        if len(kids) >= 2:
            return
        g = self.parent[p]
        if not kids:
            self._delete(p)
            if g is not None:
                self.kids[g] = tuple(k for k in self.kids[g] if k != p)
                self._tidy(g)
            return
        (c,) = kids
        self._delete(p)
        self.parent[c] = g
        if g is not None:
            self.kids[g] = tuple(c if k == p else k for k in self.kids[g])

    def _unlink(self, v: int) -> None:
        p = self.parent[v]
        self.parent[v] = None
        self.kids[p] = tuple(k for k in self.kids[p] if k != v)
        self._tidy(p)

    def remove_taxon(self, x: int) -> None:
        v = self.vertex[x]
        if self.parent[v] is not None:
            self._unlink(v)
        self._delete(v)

    def collapse(self, c1: int, c2: int, new: int) -> bool:
        """Merge sibling leaves ``c1``, ``c2`` into one leaf labelled ``new``.

        Returns whether the pair had other siblings.
        """
        v1, v2 = self.vertex[c1], self.vertex[c2]
        p = self.parent[v1]
        if p is None or p != self.parent[v2]:
            raise ValueError("collapse needs two leaves with a common parent")
        if len(self.kids[p]) == 2:
            self._delete(v1)
            self._delete(v2)
            self.kids[p] = ()
            self.taxon[p] = new
            self.vertex[new] = p
            return False
        self.kids[p] = tuple(k for k in self.kids[p] if k != v1)
        self._delete(v1)
        del self.vertex[c2]
        self.taxon[v2] = new
        self.vertex[new] = v2
        return True

    def detach(self, taxa: set[int]) -> int:
        """Split the leaves ``taxa`` off into their own component.

        ``taxa`` must be the union of the clusters of some children of their
        lowest common ancestor.  Returns the number of cuts made (0 when the
        set is empty or already a whole component).
        """
        if not taxa:
            return 0
        leaves = [self.vertex[x] for x in taxa]
        w = leaves[0]
        for v in leaves[1:]:
            w = self.lca(w, v)
            if w is None:
                raise ValueError("taxa lie in different components")
        if w in self.taxon or self.taxa_below(w) == taxa:
            if self.parent[w] is None:
                return 0
            self._unlink(w)
            return 1
        chosen = []
        for k in self.kids[w]:
            below = self.taxa_below(k)
            if below & taxa:
                if not below <= taxa:
                    raise ValueError("taxa do not form a group of sibling subtrees")
                chosen.append(k)
        r = self._new_vertex()
        self.parent[r] = None
        self.kids[r] = tuple(chosen)
        for k in chosen:
            self.parent[k] = r
        self.kids[w] = tuple(k for k in self.kids[w] if k not in chosen)
        self._tidy(w)
        return 1

    def to_nested(self, v: int, name) -> object:
        if v in self.taxon:
            return name(self.taxon[v])
        return [self.to_nested(k, name) for k in self.kids[v]]


@dataclass(frozen=True)
class Collapse:
    label: int
    pair: tuple[int, int]
    siblings_t1: bool
    siblings_f2: bool


@dataclass(frozen=True)
class RemoveSingleton:
    label: int


LogRecord = Union[Collapse, RemoveSingleton]


@dataclass
class ExpansionLog:
    records: list[LogRecord] = field(default_factory=list)

    def copy(self) -> ExpansionLog:
        return ExpansionLog(list(self.records))

    def replay(self, survivors: list[int]) -> list[set[int]]:
        """Expand a partition of the surviving labels into original taxa."""
        blocks = [{x} for x in survivors]
        where = {x: i for i, x in enumerate(survivors)}
        for rec in reversed(self.records):
            if isinstance(rec, RemoveSingleton):
                where[rec.label] = len(blocks)
                blocks.append({rec.label})
            else:
                i = where.pop(rec.label)
                blocks[i].discard(rec.label)
                blocks[i].update(rec.pair)
                for x in rec.pair:
                    where[x] = i
        return blocks

    def __len__(self) -> int:
        return len(self.records)


class ApproxState:
    """Working copy of ``T1`` and the cut forest ``F2`` during the search.

    Taxa are integers: ``0..n-1`` for the original labels in sorted order and
    fresh integers for collapsed pairs.  ``key`` orders taxa by their smallest
    original label.
    """

    def __init__(self, t1: _Arbor, f2: _Arbor, names: list[str], key: dict[int, int],
                 log: ExpansionLog, cuts: int = 0):
        self.t1 = t1
        self.f2 = f2
        self.names = names
        self.key = key
        self.log = log
        self.cuts = cuts

    @classmethod
    def from_trees(cls, t1: PhyloTree, t2: PhyloTree) -> ApproxState:
        if t1.leaves != t2.leaves:
            raise ValueError("trees have different leaf sets")
        names = sorted(t1.leaves)
        index = {name: i for i, name in enumerate(names)}
        return cls(
            _Arbor.from_tree(t1, index),
            _Arbor.from_tree(t2, index),
            names,
            {i: i for i in range(len(names))},
            ExpansionLog(),
        )

    def copy(self) -> ApproxState:
        return ApproxState(self.t1.copy(), self.f2.copy(), self.names, dict(self.key),
                           self.log.copy(), self.cuts)

    def fresh_label(self, c1: int, c2: int) -> int:
        x = len(self.key)
        while x in self.key:
            x += 1
        self.key[x] = min(self.key[c1], self.key[c2])
        return x

    def name(self, x: int) -> str:
        """Display name of a (possibly synthetic) taxon."""
        if x < len(self.names) and self.key[x] == x:
            return self.names[x]
        members = sorted(self.expand(x), key=self.key.__getitem__)
        return "{" + ",".join(self.names[m] for m in members) + "}"

    def expand(self, x: int) -> set[int]:
        for rec in reversed(self.log.records):
            if isinstance(rec, Collapse) and rec.label == x:
                return self.expand(rec.pair[0]) | self.expand(rec.pair[1])
        return {x}

    @property
    def finished(self) -> bool:
        return len(self.t1.taxon) <= 1

    def sort_taxa(self, taxa) -> list[int]:
        return sorted(taxa, key=self.key.__getitem__)

    def t1_tree(self) -> PhyloTree:
        (root,) = self.t1.roots()
        return PhyloTree(self.t1.to_nested(root, self.name))

    def f2_forest(self) -> Forest:
        return Forest(PhyloTree(self.f2.to_nested(r, self.name)) for r in self.f2.roots())

    def result_blocks(self) -> list[frozenset]:
        survivors = list(self.t1.taxon.values())
        blocks = self.log.replay(survivors)
        return [frozenset(self.names[x] for x in b) for b in blocks if b]


# -- case selection -----------------------------------------------------------


def select_u(t1: PhyloTree) -> int:
    """Internal vertex of ``t1`` whose children are all leaves.

    Among candidates the one with the lexicographically smallest child label
    wins.
    """
    if len(t1) < 2:
        raise ValueError("tree has a single leaf")
    best = None
    for v in t1.internal_vertices():
        kids = t1.children(v)
        if all(t1.is_leaf(k) for k in kids):
            first = min(t1.label(k) for k in kids)
            if best is None or first < best[0]:
                best = (first, v)
    return best[1]


def _select_u(state: ApproxState) -> list[int]:
    """Children (taxa) of the chosen cherry-like vertex of the working T1."""
    t1, key = state.t1, state.key
    best = None
    for v, kids in t1.kids.items():
        if not kids or not all(k in t1.taxon for k in kids):
            continue
        first = min(key[t1.taxon[k]] for k in kids)
        if best is None or first < best[0]:
            best = (first, kids)
    if best is None:
        raise ValueError("working tree has a single leaf")
    return state.sort_taxa(t1.taxon[k] for k in best[1])


def _find_case0a(state: ApproxState, group: list[int]) -> tuple[int, int] | None:
    f2 = state.f2
    seen: dict[int, int] = {}
    for c in group:
        p = f2.parent[f2.vertex[c]]
        if p is None:
            continue
        if p in seen:
            return seen[p], c
        seen[p] = c
    return None


def _find_case0b(state: ApproxState, group: list[int]) -> int | None:
    for c in group:
        if state.f2.is_isolated(c):
            return c
    return None


def _all_separate(state: ApproxState, group: list[int]) -> bool:
    roots = [state.f2.root_of(state.f2.vertex[c]) for c in group]
    return len(set(roots)) == len(roots)


def apply_case0a(state: ApproxState, c1: int, c2: int) -> ApproxState:
    """Collapse sibling taxa ``c1``, ``c2`` into one synthetic leaf in both trees."""
    t1, f2 = state.t1, state.f2
    if t1.parent[t1.vertex[c1]] != t1.parent[t1.vertex[c2]]:
        raise ValueError("taxa are not siblings in T1")
    if f2.parent[f2.vertex[c1]] is None or f2.parent[f2.vertex[c1]] != f2.parent[f2.vertex[c2]]:
        raise ValueError("taxa do not share a parent in F2")
    new = state.fresh_label(c1, c2)
    s1 = t1.collapse(c1, c2, new)
    s2 = f2.collapse(c1, c2, new)
    state.log.records.append(Collapse(new, (c1, c2), s1, s2))
    return state


def apply_case0b(state: ApproxState, c: int) -> ApproxState:
    """Set aside a taxon that is already an isolated vertex of F2."""
    if not state.f2.is_isolated(c):
        raise ValueError("taxon is not isolated in F2")
    state.t1.remove_taxon(c)
    state.f2.remove_taxon(c)
    state.log.records.append(RemoveSingleton(c))
    return state


def apply_case0c(state: ApproxState, group: list[int] | None = None) -> ApproxState:
    """Cut off and set aside every taxon of the group (one cut each)."""
    group = _select_u(state) if group is None else state.sort_taxa(group)
    if _find_case0a(state, group) or _find_case0b(state, group) is not None:
        raise ValueError("an earlier case applies")
    if not _all_separate(state, group):
        raise ValueError("taxa are not in pairwise different components")
    for c in group:
        state.cuts += state.f2.detach({c})
        state.t1.remove_taxon(c)
        state.f2.remove_taxon(c)
        state.log.records.append(RemoveSingleton(c))
    return state


@dataclass(frozen=True)
class PairChoice:
    c1: int
    c2: int
    case: int  # 1 or 2; in case 2, c1 is the child of the lowest common ancestor
    lca: int
    depth: int


def select_pair(state: ApproxState, group: list[int] | None = None) -> PairChoice:
    """Pick two taxa of the group sharing an F2 component whose lowest common
    ancestor is deepest; pairs where neither is a child of it come first."""
    group = _select_u(state) if group is None else state.sort_taxa(group)
    f2, key = state.f2, state.key
    best = None
    for a, b in combinations(group, 2):
        va, vb = f2.vertex[a], f2.vertex[b]
        v = f2.lca(va, vb)
        if v is None:
            continue
        a_child = f2.parent[va] == v
        b_child = f2.parent[vb] == v
        if a_child and b_child:
            raise ValueError("case 0a applies")
        if a_child or b_child:
            case = 2
            c1, c2 = (a, b) if a_child else (b, a)
        else:
            case, c1, c2 = 1, a, b
        depth = f2.depth(v)
        rank = (-depth, case, key[c1], key[c2])
        if best is None or rank < best[0]:
            best = (rank, PairChoice(c1, c2, case, v, depth))
    if best is None:
        raise ValueError("no two taxa share a component")
    return best[1]


def _targets(state: ApproxState, choice: PairChoice) -> tuple[set, set, set, set]:
    """Leaf sets {c1}, {c2}, S1, S2 for a case 1/2 pair (S1 excludes S2 in case 2)."""
    f2 = state.f2
    c1, c2 = choice.c1, choice.c2
    p1 = f2.parent[f2.vertex[c1]]
    p2 = f2.parent[f2.vertex[c2]]
    s2 = f2.taxa_below(p2) - {c2}
    if choice.case == 1:
        s1 = f2.taxa_below(p1) - {c1}
    else:
        s1 = f2.taxa_below(p1) - {c1, c2} - s2
    return {c1}, {c2}, s1, s2


def _assert_clean(state: ApproxState, sets) -> None:
    group = set(_select_u(state))
    if (sets[2] | sets[3]) & group:
        raise AssertionError("S1/S2 contain taxa of the current cherry group")


def apply_case1(state: ApproxState, c1: int, c2: int) -> ApproxState:
    """Separate c1, S1, c2 and S2 from the rest of their component."""
    f2 = state.f2
    v = f2.lca(f2.vertex[c1], f2.vertex[c2])
    if v is None or f2.parent[f2.vertex[c1]] == v or f2.parent[f2.vertex[c2]] == v:
        raise ValueError("case 1 needs two taxa that are not children of their LCA")
    choice = PairChoice(c1, c2, 1, v, f2.depth(v))
    t_c1, t_c2, s1, s2 = sets = _targets(state, choice)
    _assert_clean(state, sets)
    for target in (t_c1, s1, t_c2, s2):
        state.cuts += f2.detach(target)
    return state


def apply_case2(state: ApproxState, c1: int, c2: int) -> ApproxState:
    """``c1`` is a child of the LCA: separate c1, c2, S2 and then S1."""
    f2 = state.f2
    v = f2.lca(f2.vertex[c1], f2.vertex[c2])
    if v is None or f2.parent[f2.vertex[c1]] != v or f2.parent[f2.vertex[c2]] == v:
        raise ValueError("case 2 needs c1 to be the only child of the LCA")
    choice = PairChoice(c1, c2, 2, v, f2.depth(v))
    t_c1, t_c2, s1, s2 = sets = _targets(state, choice)
    _assert_clean(state, sets)
    for target in (t_c1, t_c2, s2, s1):
        state.cuts += f2.detach(target)
    return state


def reduce_state(state: ApproxState) -> list[int] | None:
    """Apply cases 0a and 0b until neither fires.

    Returns the current cherry group, or None once T1 is down to one leaf.
    """
    while not state.finished:
        group = _select_u(state)
        pair = _find_case0a(state, group)
        if pair is not None:
            apply_case0a(state, *pair)
            continue
        c = _find_case0b(state, group)
        if c is not None:
            apply_case0b(state, c)
            continue
        return group
    return None


def run_approximation(state: ApproxState) -> ApproxState:
    """Drive ``state`` to completion in place."""
    while True:
        group = reduce_state(state)
        if group is None:
            return state
        if _all_separate(state, group):
            apply_case0c(state, group)
            continue
        choice = select_pair(state, group)
        if choice.case == 1:
            apply_case1(state, choice.c1, choice.c2)
        else:
            apply_case2(state, choice.c1, choice.c2)


def approximate_maf(t1: PhyloTree, t2: PhyloTree, verify: bool = True) -> tuple[Forest, int]:
    """Agreement forest with at most four times the optimal number of cuts.

    Returns the forest and the number of cuts made, which equals
    ``len(forest) - 1``.
    """
    state = run_approximation(ApproxState.from_trees(t1, t2))
    forest = Forest.from_blocks(state.result_blocks(), t1, t2)
    if len(forest) != state.cuts + 1:
        raise AssertionError("component count does not match the cut count")
    if verify:
        cert = is_agreement_forest(forest, t1, t2)
        if not cert:
            raise AssertionError(f"approximation produced an invalid forest: {cert.describe()}")
    return forest, state.cuts
