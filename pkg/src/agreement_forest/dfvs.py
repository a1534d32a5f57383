"""Weighted directed feedback vertex set.

Solvers take a :class:`WeightedDigraph` and return an :class:`FvsSolution`.
Vertex order (insertion order) is the canonical order used for every tie.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Hashable, Iterable

VERTEX = "V"  # tag for internal vertices of a forest
EDGE = "E"  # tag for edges of a forest


class WeightedDigraph:
    """Directed graph with nonnegative integer vertex weights and optional tags."""

    def __init__(self):
        self._weight: dict[Hashable, int] = {}
        self._succ: dict[Hashable, set] = {}
        self._pred: dict[Hashable, set] = {}
        self.tags: dict[Hashable, str] = {}

    def add_vertex(self, v: Hashable, weight: int = 1, tag: str | None = None) -> None:
        if weight < 0:
            raise ValueError("weights must be nonnegative")
        if v not in self._weight:
            self._succ[v] = set()
            self._pred[v] = set()
        self._weight[v] = weight
        if tag is not None:
            self.tags[v] = tag

    def add_edge(self, u: Hashable, v: Hashable) -> None:
        for w in (u, v):
            if w not in self._weight:
                self.add_vertex(w)
        self._succ[u].add(v)
        self._pred[v].add(u)

    @property
    def vertices(self) -> list:
        return list(self._weight)

    def edges(self) -> list[tuple]:
        order = {v: i for i, v in enumerate(self._weight)}
        return [(u, v) for u in self._weight for v in sorted(self._succ[u], key=order.__getitem__)]

    def weight(self, v: Hashable) -> int:
        return self._weight[v]

    def successors(self, v: Hashable) -> set:
        return self._succ[v]

    def predecessors(self, v: Hashable) -> set:
        return self._pred[v]

    def outdegree(self, v: Hashable) -> int:
        return len(self._succ[v])

    def __len__(self) -> int:
        return len(self._weight)

    def __contains__(self, v: object) -> bool:
        return v in self._weight

    def without(self, removed: Iterable[Hashable]) -> WeightedDigraph:
        removed = set(removed)
        g = WeightedDigraph()
        for v, w in self._weight.items():
            if v not in removed:
                g.add_vertex(v, w, self.tags.get(v))
        for u, v in self.edges():
            if u not in removed and v not in removed:
                g.add_edge(u, v)
        return g

    def to_edgelist(self) -> str:
        """Plain-text dump: ``v <id> <tag> <weight>`` lines, then ``e <u> <v>`` lines."""
        ids = {v: i for i, v in enumerate(self._weight)}
        lines = [f"# {len(self)} vertices, {len(self.edges())} edges"]
        for v, i in ids.items():
            lines.append(f"v {i} {self.tags.get(v, '-')} {self._weight[v]} {_token(v)}")
        for u, v in self.edges():
            lines.append(f"e {ids[u]} {ids[v]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> WeightedDigraph:
        g = cls()
        names: dict[str, Hashable] = {}
        for line in text.splitlines():
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                _, i, tag, weight = parts[:4]
                names[i] = i
                g.add_vertex(i, int(weight), None if tag == "-" else tag)
            elif parts[0] == "e":
                g.add_edge(names[parts[1]], names[parts[2]])
            else:
                raise ValueError(f"unrecognised line {line!r}")
        return g


def _token(v: Hashable) -> str:
    if isinstance(v, tuple):
        return ":".join(str(p) for p in v)
    return str(v)


@dataclass(frozen=True)
class FvsSolution:
    vertices: frozenset
    weight: int

    @classmethod
    def of(cls, g: WeightedDigraph, vertices: Iterable[Hashable]) -> FvsSolution:
        vertices = frozenset(vertices)
        return cls(vertices, sum(g.weight(v) for v in vertices))


def is_acyclic(g: WeightedDigraph) -> bool:
    sorter = TopologicalSorter({v: g.predecessors(v) for v in g.vertices})
    try:
        sorter.prepare()
    except CycleError:
        return False
    return True


def is_fvs(g: WeightedDigraph, vertices: Iterable[Hashable]) -> bool:
    return is_acyclic(g.without(vertices))


# -- exact branch and bound ---------------------------------------------------


class _Search:
    def __init__(self, g: WeightedDigraph):
        self.g = g
        self.order = {v: i for i, v in enumerate(g.vertices)}
        self.best_weight = math.inf
        self.best: list = []
        self.nodes = 0

    def core(self, active: set) -> set:
        # drop vertices that cannot lie on a cycle inside ``active``
        g = self.g
        active = set(active)
        queue = deque(active)
        while queue:
            v = queue.popleft()
            if v not in active:
                continue
            if not (g.successors(v) & active) or not (g.predecessors(v) & active):
                active.discard(v)
                queue.extend((g.successors(v) | g.predecessors(v)) & active)
        return active

    def shortest_cycle(self, active: set) -> list | None:
        g = self.g
        best = None
        for s in sorted(active, key=self.order.__getitem__):
            prev = {s: None}
            queue = deque([s])
            found = None
            while queue and found is None:
                u = queue.popleft()
                for w in sorted(g.successors(u) & active, key=self.order.__getitem__):
                    if w == s:
                        found = u
                        break
                    if w not in prev:
                        prev[w] = u
                        queue.append(w)
            if found is None:
                continue
            cycle = []
            u = found
            while u is not None:
                cycle.append(u)
                u = prev[u]
            cycle.reverse()
            if best is None or len(cycle) < len(best):
                best = cycle
                if len(best) == 1:
                    break
        return best

    def packing_bound(self, active: set, forbidden: set) -> float:
        # weight of a greedy packing of vertex-disjoint cycles
        bound = 0
        active = self.core(active)
        while active:
            cycle = self.shortest_cycle(active)
            if cycle is None:
                break
            free = [self.g.weight(v) for v in cycle if v not in forbidden]
            if not free:
                return math.inf
            bound += min(free)
            active = self.core(active - set(cycle))
        return bound

    def run(self, active: set, chosen: list, weight: int, forbidden: set) -> None:
        self.nodes += 1
        active = self.core(active)
        if not active:
            if weight < self.best_weight:
                self.best_weight = weight
                self.best = list(chosen)
            return
        if weight + self.packing_bound(active, forbidden) >= self.best_weight:
            return
        cycle = self.shortest_cycle(active)
        options = sorted((v for v in cycle if v not in forbidden), key=self.order.__getitem__)
        skipped: set = set()
        for v in options:
            self.run(active - {v}, chosen + [v], weight + self.g.weight(v), forbidden | skipped)
            skipped.add(v)


def solve_dfvs_exact(g: WeightedDigraph) -> FvsSolution:
    """Minimum-weight feedback vertex set by branching on shortest cycles."""
    forced = [v for v in g.vertices if v in g.successors(v)]
    search = _Search(g)
    rest = set(g.vertices) - set(forced)
    search.run(rest, [], 0, set())
    return FvsSolution.of(g, forced + search.best)


# -- heuristics ---------------------------------------------------------------


def minimalize(g: WeightedDigraph, f: FvsSolution | Iterable[Hashable]) -> FvsSolution:
    """Drop vertices from a feedback vertex set, in canonical order, while it stays one."""
    chosen = set(f.vertices if isinstance(f, FvsSolution) else f)
    if not is_fvs(g, chosen):
        raise ValueError("not a feedback vertex set")
    for v in g.vertices:
        if v in chosen and is_fvs(g, chosen - {v}):
            chosen.discard(v)
    return FvsSolution.of(g, chosen)


def solve_dfvs_greedy(g: WeightedDigraph) -> FvsSolution:
    """Feedback vertex set by repeatedly removing the vertex with the highest
    in-degree times out-degree per unit weight, then minimalizing."""
    search = _Search(g)
    chosen = [v for v in g.vertices if v in g.successors(v)]
    active = search.core(set(g.vertices) - set(chosen))
    while active:
        def score(v):
            deg = len(g.predecessors(v) & active) * len(g.successors(v) & active)
            w = g.weight(v)
            return (deg / w if w else math.inf, -search.order[v])

        v = max(active, key=score)
        chosen.append(v)
        active = search.core(active - {v})
    return minimalize(g, chosen)


def _anchored(v, chosen: set, above) -> bool:
    # a vertex counts as anchored when nothing sits above it or something above it is removed
    if above is None:
        return True
    up = above.get(v, ())
    return not up or bool(set(up) & chosen)


def properize(g: WeightedDigraph, f: FvsSolution, above: dict | None = None) -> FvsSolution:
    """Turn a feedback vertex set of a forest DFVS instance into a proper one.

    Whenever a vertex-class vertex has all, or all but one, of its children
    in the set, those children are swapped for the vertex itself; the result
    is minimal and never heavier than ``f``.

    ``above`` optionally maps each vertex-class vertex to the elements
    directly above it in its forest (the edge entering it and its parent).
    With it, the swap is only made for anchored vertices, since removing a
    vertex whose surroundings stay intact also cuts it off from its parent.
    An unanchored vertex in the set is lowered to all but one of its
    children when that is still a feedback vertex set.
    """
    if any(v not in g.tags for v in g.vertices):
        raise ValueError("properize needs a graph with vertex/edge class tags")
    current = minimalize(g, f)
    limit = 2 * len(g) + 2
    for _ in range(limit):
        step = _properize_step(g, set(current.vertices), above)
        if step is None:
            return current
        current = minimalize(g, step)
    raise AssertionError("properize did not converge")


def _properize_step(g: WeightedDigraph, chosen: set, above) -> set | None:
    for v in g.vertices:
        if g.tags[v] != VERTEX:
            continue
        if v in chosen and not _anchored(v, chosen, above):
            kids = sorted(g.successors(v), key=g.vertices.index)
            for keep in kids:
                lowered = (chosen - {v}) | (set(kids) - {keep})
                if is_fvs(g, lowered):
                    return lowered
            continue
        kids = g.successors(v) & chosen
        if kids and len(kids) >= g.outdegree(v) - 1 and _anchored(v, chosen, above):
            return (chosen - kids) | {v}
    return None


def is_proper(g: WeightedDigraph, f: FvsSolution, above: dict | None = None) -> bool:
    """Minimal, and no anchored vertex-class vertex has more than all but two
    of its children in the set (see :func:`properize` for ``above``)."""
    chosen = set(f.vertices)
    if not is_fvs(g, chosen):
        return False
    if any(is_fvs(g, chosen - {v}) for v in chosen):
        return False
    for v in g.vertices:
        if g.tags.get(v) != VERTEX or not _anchored(v, chosen, above):
            continue
        if len(g.successors(v) & chosen) > g.outdegree(v) - 2:
            return False
    return True
