"""Exact nonbinary MAF by bounded search-tree branching.

Cases 0a/0b are applied as free reductions; a case 0c situation branches two
ways and cases 1/2 branch four ways, one cut per branch.  The driver deepens
the cut budget one step at a time, so the first forest found is optimal.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from .approx import (
    ApproxState,
    _all_separate,
    _targets,
    reduce_state,
    run_approximation,
    select_pair,
)
from .forest import Forest, is_agreement_forest
from .tree import PhyloTree


@dataclass
class SearchNode:
    state: ApproxState
    budget: int


@dataclass
class SearchStats:
    """Instrumentation for :func:`solve_maf_exact`."""

    nodes: int = 0
    rounds: int = 0
    pruned: int = 0
    # max over rounds of the number of nodes expanded at each depth
    nodes_per_depth: dict[int, int] = field(default_factory=dict)
    lower_bound: int = 0
    upper_bound: int = 0

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "rounds": self.rounds,
            "pruned": self.pruned,
            "nodesPerDepth": {str(d): n for d, n in sorted(self.nodes_per_depth.items())},
            "lowerBound": self.lower_bound,
            "upperBound": self.upper_bound,
        }


def branch_case(node: SearchNode) -> list[SearchNode]:
    """Children of an unresolved node, each with one extra cut.

    The node must already be reduced (no case 0a/0b applies).
    """
    if node.budget <= 0:
        return []
    state = node.state
    group = reduce_state(state)
    if group is None:
        return []
    if _all_separate(state, group):
        targets = [{group[0]}, {group[1]}]
    else:
        choice = select_pair(state, group)
        c1, c2, s1, s2 = _targets(state, choice)
        if choice.case == 2:
            s1 = s1 | s2 | c2
        targets = [c1, c2, s1, s2]
    children = []
    for target in targets:
        child = state.copy()
        made = child.f2.detach(target)
        if made == 0:
            continue
        child.cuts += made
        children.append(SearchNode(child, node.budget - 1))
    return children


def _search(node: SearchNode, depth: int, counts: dict[int, int],
            stats: SearchStats, use_bounds: bool) -> ApproxState | None:
    counts[depth] += 1
    stats.nodes += 1
    state = node.state
    if reduce_state(state) is None:
        return state
    if node.budget == 0:
        return None
    if use_bounds:
        # the approximation from here is within a factor 4 of the best completion
        probe = run_approximation(state.copy())
        extra = probe.cuts - state.cuts
        if extra <= node.budget:
            return probe
        if math.ceil(extra / 4) > node.budget:
            stats.pruned += 1
            return None
    for child in branch_case(node):
        found = _search(child, depth + 1, counts, stats, use_bounds)
        if found is not None:
            return found
    return None


def solve_maf_exact(t1: PhyloTree, t2: PhyloTree, max_k: int | None = None,
                    stats: SearchStats | None = None,
                    use_bounds: bool = True) -> tuple[Forest, int] | None:
    """Maximum agreement forest, or None if it needs more than ``max_k`` cuts.

    ``use_bounds`` enables pruning with the approximation (a factor-4 lower
    bound and an early exit when it already fits the budget); results are the
    same either way.
    """
    if t1.leaves != t2.leaves:
        raise ValueError("trees have different leaf sets")
    if max_k is None:
        max_k = len(t1) - 1
    if max_k < 0:
        raise ValueError("max_k must be nonnegative")
    stats = SearchStats() if stats is None else stats
    root = ApproxState.from_trees(t1, t2)
    start = 0
    if use_bounds:
        upper = run_approximation(root.copy()).cuts
        start = math.ceil(upper / 4)
        stats.upper_bound = upper
    stats.lower_bound = start
    for k in range(start, max_k + 1):
        stats.rounds += 1
        counts: dict[int, int] = defaultdict(int)
        found = _search(SearchNode(root.copy(), k), 0, counts, stats, use_bounds)
        for d, n in counts.items():
            stats.nodes_per_depth[d] = max(stats.nodes_per_depth.get(d, 0), n)
        if found is not None:
            forest = Forest.from_blocks(found.result_blocks(), t1, t2)
            if len(forest) - 1 != found.cuts or found.cuts > k:
                raise AssertionError("cut accounting mismatch in exact search")
            cert = is_agreement_forest(forest, t1, t2)
            if not cert:
                raise AssertionError(f"exact search produced an invalid forest: {cert.describe()}")
            return forest, len(forest) - 1
        stats.lower_bound = k + 1
    return None
