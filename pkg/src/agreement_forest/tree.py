"""Rooted multifurcating phylogenetic trees.

Trees are immutable and always stored in canonical form: children are ordered
by their smallest descendant label and vertex ids are assigned in preorder
(the root is vertex 0).  Two trees compare equal when they have the same set
of clusters, i.e. when they are label-isomorphic.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

Nested = Union[str, Sequence["Nested"]]

_SPECIAL = set("(),:;[]' \t\r\n")


class NewickError(ValueError):
    """Malformed Newick input; ``position`` is the offending character offset."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class Embedding(NamedTuple):
    root: int
    edges: frozenset  # of (parent, child) vertex pairs


def _canonical(node: Nested) -> tuple[Nested, str]:
    # Suppresses unary vertices and sorts children by their smallest label.
    if isinstance(node, str):
        if not node:
            raise ValueError("leaf labels must be nonempty strings")
        return node, node
    parts = [_canonical(child) for child in node]
    if not parts:
        raise ValueError("internal vertex without children")
    if len(parts) == 1:
        return parts[0]
    parts.sort(key=lambda p: p[1])
    return [p[0] for p in parts], parts[0][1]


class PhyloTree:
    """A rooted phylogenetic tree with uniquely labelled leaves.

    Build one from a nested structure of labels::

        >>> PhyloTree((("a", "b"), "c")).newick()
        '((a,b),c);'
    """

    def __init__(self, structure: Nested):
        nested, _ = _canonical(structure)
        self._children: dict[int, tuple[int, ...]] = {}
        self._parent: dict[int, int | None] = {}
        self._label: dict[int, str] = {}
        self._leaf: dict[str, int] = {}
        stack = [(nested, None)]
        next_id = 0
        order = []
        while stack:
            node, parent = stack.pop()
            v = next_id
            next_id += 1
            self._parent[v] = parent
            order.append((v, parent))
            if isinstance(node, str):
                if node in self._leaf:
                    raise ValueError(f"duplicate leaf label {node!r}")
                self._label[v] = node
                self._leaf[node] = v
                self._children[v] = ()
            else:
                self._children[v] = ()
                for child in reversed(node):
                    stack.append((child, v))
        kids: dict[int, list[int]] = {}
        for v, parent in order:
            if parent is not None:
                kids.setdefault(parent, []).append(v)
        for v, ks in kids.items():
            self._children[v] = tuple(ks)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_newick(cls, text: str) -> PhyloTree:
        return parse_newick(text)

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[str]]) -> PhyloTree | None:
        """Tree whose cluster set is the given family, or None if not laminar.

        Singletons and the full leaf set are added automatically.
        """
        family = {frozenset(c) for c in clusters}
        family.discard(frozenset())
        if not family:
            raise ValueError("empty cluster family")
        universe = frozenset().union(*family)
        family.add(universe)
        family.update(frozenset([x]) for x in universe)
        ordered = sorted(family, key=len, reverse=True)
        owner: dict[str, int] = {}
        kids: dict[int, list[int]] = {i: [] for i in range(len(ordered))}
        for i, cluster in enumerate(ordered):
            if i == 0:
                for x in cluster:
                    owner[x] = 0
                continue
            parents = {owner[x] for x in cluster}
            if len(parents) != 1:
                return None
            parent = parents.pop()
            if len(ordered[parent]) == len(cluster):
                return None
            kids[parent].append(i)
            for x in cluster:
                owner[x] = i

        def build(i: int) -> Nested:
            if not kids[i]:
                (x,) = ordered[i]
                return x
            return [build(j) for j in kids[i]]

        return cls(build(0))

    # -- basic accessors --------------------------------------------------

    @property
    def root(self) -> int:
        return 0

    @property
    def vertices(self) -> range:
        return range(len(self._parent))

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def parent(self, v: int) -> int | None:
        return self._parent[v]

    def label(self, v: int) -> str | None:
        return self._label.get(v)

    def leaf(self, label: str) -> int:
        return self._leaf[label]

    def is_leaf(self, v: int) -> bool:
        return v in self._label

    def internal_vertices(self) -> list[int]:
        return [v for v in self.vertices if v not in self._label]

    def edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in self._parent.items() if p is not None]

    @cached_property
    def leaves(self) -> frozenset:
        return frozenset(self._leaf)

    def __len__(self) -> int:
        return len(self._leaf)

    def outdegree(self, v: int) -> int:
        return len(self._children[v])

    # -- derived structure --------------------------------------------------

    @cached_property
    def _clusters(self) -> list[frozenset]:
        out: list[frozenset] = [frozenset()] * len(self._parent)
        for v in reversed(self.vertices):  # preorder ids: children after parents
            if v in self._label:
                out[v] = frozenset([self._label[v]])
            else:
                out[v] = frozenset().union(*(out[c] for c in self._children[v]))
        return out

    def cluster(self, v: int) -> frozenset:
        """Labels of the leaves below ``v``."""
        return self._clusters[v]

    def clusters(self) -> frozenset:
        return frozenset(self._clusters)

    @cached_property
    def _depth(self) -> list[int]:
        depth = [0] * len(self._parent)
        for v in self.vertices:
            p = self._parent[v]
            if p is not None:
                depth[v] = depth[p] + 1
        return depth

    def depth(self, v: int) -> int:
        return self._depth[v]

    @cached_property
    def _interval(self) -> list[tuple[int, int]]:
        # preorder ids make each subtree a contiguous id range
        end = list(self.vertices)
        for v in reversed(self.vertices):
            p = self._parent[v]
            if p is not None and end[v] > end[p]:
                end[p] = end[v]
        return [(v, end[v]) for v in self.vertices]

    def is_ancestor(self, a: int, b: int) -> bool:
        """True if ``a`` is ``b`` or lies on the path from the root to ``b``."""
        lo, hi = self._interval[a]
        return lo <= b <= hi

    def lca(self, labels: Iterable[str]) -> int:
        labels = list(labels)
        if not labels:
            raise ValueError("lca of an empty set")
        v = self._leaf[labels[0]]
        lo, hi = v, v
        for x in labels[1:]:
            leaf = self._leaf[x]
            lo, hi = min(lo, leaf), max(hi, leaf)
        while not (self._interval[v][0] <= lo and hi <= self._interval[v][1]):
            v = self._parent[v]
        return v

    def path(self, top: int, bottom: int) -> list[tuple[int, int]]:
        """Edges on the downward path from ``top`` to its descendant ``bottom``."""
        if not self.is_ancestor(top, bottom):
            raise ValueError(f"{top} is not an ancestor of {bottom}")
        edges = []
        v = bottom
        while v != top:
            p = self._parent[v]
            edges.append((p, v))
            v = p
        edges.reverse()
        return edges

    def to_nested(self, v: int | None = None) -> Nested:
        v = self.root if v is None else v
        if v in self._label:
            return self._label[v]
        return [self.to_nested(c) for c in self._children[v]]

    def newick(self) -> str:
        return write_newick(self)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhyloTree):
            return NotImplemented
        return self.clusters() == other.clusters()

    def __hash__(self) -> int:
        return hash(self.clusters())

    def __repr__(self) -> str:
        return f"PhyloTree({write_newick(self)!r})"


# -- Newick I/O -----------------------------------------------------------


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "[":
                close = text.find("]", self.pos)
                if close < 0:
                    raise NewickError("unterminated comment", self.pos)
                self.pos = close + 1
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def label(self) -> str:
        self.skip()
        text = self.text
        if self.pos < len(text) and text[self.pos] == "'":
            start = self.pos
            self.pos += 1
            out = []
            while True:
                if self.pos >= len(text):
                    raise NewickError("unterminated quoted label", start)
                ch = text[self.pos]
                if ch == "'":
                    if text[self.pos + 1 : self.pos + 2] == "'":
                        out.append("'")
                        self.pos += 2
                        continue
                    self.pos += 1
                    return "".join(out)
                out.append(ch)
                self.pos += 1
        start = self.pos
        while self.pos < len(text) and text[self.pos] not in _SPECIAL:
            self.pos += 1
        return text[start : self.pos]

    def length(self) -> None:
        if self.peek() == ":":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] not in _SPECIAL:
                self.pos += 1
            token = self.text[start : self.pos]
            try:
                float(token)
            except ValueError:
                raise NewickError(f"invalid branch length {token!r}", start) from None

    def subtree(self) -> Nested:
        # iterative to cope with deep caterpillars
        stack: list[list[Nested]] = []
        while True:
            ch = self.peek()
            if ch == "(":
                self.pos += 1
                stack.append([])
                continue
            start = self.pos
            name = self.label()
            if not name:
                raise NewickError("unlabelled leaf", start)
            self.length()
            node: Nested = name
            while True:
                if not stack:
                    return node
                stack[-1].append(node)
                ch = self.peek()
                if ch == ",":
                    self.pos += 1
                    break
                if ch == ")":
                    self.pos += 1
                    node = stack.pop()
                    self.label()  # internal labels are ignored
                    self.length()
                    continue
                raise NewickError(f"expected ',' or ')' but found {ch or 'end of input'!r}", self.pos)


def parse_newick(text: str) -> PhyloTree:
    """Parse a single ``;``-terminated Newick tree.

    Branch lengths, internal labels and ``[...]`` comments are discarded and
    unary vertices are suppressed.
    """
    reader = _Reader(text)
    if reader.peek() in ("", ";"):
        raise NewickError("empty tree", reader.pos)
    nested = reader.subtree()
    if reader.peek() != ";":
        raise NewickError("missing terminating ';'", reader.pos)
    reader.pos += 1
    if reader.peek():
        raise NewickError("trailing characters after ';'", reader.pos)
    try:
        return PhyloTree(nested)
    except ValueError as exc:
        raise NewickError(str(exc)) from None


def _quote(label: str) -> str:
    if any(ch in _SPECIAL for ch in label):
        return "'" + label.replace("'", "''") + "'"
    return label


def write_newick(t: PhyloTree) -> str:
    def emit(v: int) -> str:
        if t.is_leaf(v):
            return _quote(t.label(v))
        return "(" + ",".join(emit(c) for c in t.children(v)) + ")"

    return emit(t.root) + ";"


def read_newick_lines(text: str) -> list[PhyloTree]:
    """Parse one tree per non-blank line."""
    trees = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            trees.append(parse_newick(line))
        except NewickError as exc:
            raise NewickError(f"line {lineno}: {exc}") from None
    return trees


# -- restriction, embedding, refinement -------------------------------------


def _as_cluster(t: PhyloTree, s: Iterable[str]) -> frozenset:
    s = frozenset(s)
    if not s:
        raise ValueError("empty leaf subset")
    missing = s - t.leaves
    if missing:
        raise ValueError(f"labels not in tree: {sorted(missing)}")
    return s


def restricted_clusters(t: PhyloTree, s: Iterable[str]) -> frozenset:
    """Cluster set of ``t|s``."""
    s = _as_cluster(t, s)
    out = set()
    for v in _embedding_vertices(t, s):
        out.add(t.cluster(v) & s)
    return frozenset(out)


def restrict(t: PhyloTree, s: Iterable[str]) -> PhyloTree:
    """The tree ``t|s``: minimal subtree spanning ``s`` with unary vertices suppressed."""
    s = _as_cluster(t, s)
    if s == t.leaves:
        return t
    return PhyloTree.from_clusters(restricted_clusters(t, s))


def _embedding_vertices(t: PhyloTree, s: frozenset) -> set[int]:
    top = t.lca(s)
    seen = {top}
    for x in s:
        v = t.leaf(x)
        while v not in seen:
            seen.add(v)
            v = t.parent(v)
    return seen


def embed(t: PhyloTree, s: Iterable[str]) -> Embedding:
    """Edges of the minimal subtree of ``t`` containing the leaves ``s``."""
    s = _as_cluster(t, s)
    top = t.lca(s)
    edges = set()
    for x in s:
        v = t.leaf(x)
        while v != top:
            p = t.parent(v)
            if (p, v) in edges:
                break
            edges.add((p, v))
            v = p
    return Embedding(top, frozenset(edges))


def _same_leaves(a: PhyloTree, b: PhyloTree) -> None:
    if a.leaves != b.leaves:
        raise ValueError("trees have different leaf sets")


def is_refinement(fine: PhyloTree, coarse: PhyloTree) -> bool:
    """True iff every cluster of ``coarse`` is a cluster of ``fine``."""
    _same_leaves(fine, coarse)
    return coarse.clusters() <= fine.clusters()


def common_refinement(t1: PhyloTree, t2: PhyloTree) -> PhyloTree | None:
    """The minimal common refinement of two trees, or None if they conflict."""
    _same_leaves(t1, t2)
    return PhyloTree.from_clusters(t1.clusters() | t2.clusters())
